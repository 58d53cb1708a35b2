#include "rmlm/validate.hpp"

#include "rmlm/coefficients.hpp"
#include "rmlm/order.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/tail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rmlm {

DagSpec four_node_spec() {
    Matrix c{{1.0, 0.5, 0.8, 0.7},
             {0.0, 1.0, 0.6, 0.9},
             {0.0, 0.0, 1.0, 0.0},
             {0.0, 0.0, 0.0, 1.0}};
    return DagSpec(4, {{2, 0}, {2, 1}, {3, 0}, {3, 1}, {1, 0}}, std::move(c));
}

RmlmModel permute_model(const RmlmModel& model, const std::vector<std::size_t>& perm) {
    const std::size_t d = model.size();
    Matrix b(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            b(perm[i], perm[k]) = model.A()(i, k);
        }
    }
    return RmlmModel(MaxLinearMatrix{std::move(b), true}, 2.0, model.seed());
}

std::vector<std::size_t> random_closed_set(const Matrix& a, std::mt19937_64& rng,
                                           const std::vector<std::size_t>& excluded) {
    const std::size_t d = a.rows();
    std::bernoulli_distribution coin(0.4);
    std::vector<bool> in(d, false);
    for (std::size_t v = 0; v < d; ++v) {
        if (coin(rng)) {
            in[v] = true;
            for (std::size_t u : ancestors(a, v)) {
                in[u] = true;
            }
        }
    }
    // Drop any member that is an excluded node or descends from one.
    for (std::size_t v = 0; v < d; ++v) {
        for (std::size_t x : excluded) {
            if (v == x || reaches(a, x, v)) {
                in[v] = false;
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < d; ++v) {
        if (in[v]) {
            out.push_back(v);
        }
    }
    return out;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
}

namespace {

struct Tally {
    ValidationCheck check;

    explicit Tally(std::string name) { check.name = std::move(name); }

    void expect(bool ok, double violation = 0.0) {
        ++check.cases;
        if (!ok) {
            ++check.failures;
            check.passed = false;
        }
        check.worst = std::max(check.worst, violation);
    }
    void near(double got, double want, double tol) {
        const double err = std::abs(got - want);
        expect(err <= tol, err);
    }
    ValidationCheck done(std::string detail = {}) {
        check.detail = std::move(detail);
        return check;
    }
};

std::vector<RmlmModel> model_set(const ValidateOptions& opt, std::mt19937_64& rng,
                                 bool permuted) {
    std::vector<RmlmModel> out;
    for (std::size_t d : opt.dims) {
        for (std::size_t m = 0; m < opt.models_per_dim; ++m) {
            auto model = RmlmModel::from_spec(random_well_ordered_spec(d, rng));
            if (permuted) {
                std::vector<std::size_t> perm(d);
                std::iota(perm.begin(), perm.end(), std::size_t{0});
                std::shuffle(perm.begin(), perm.end(), rng);
                model = permute_model(model, perm);
            }
            out.push_back(std::move(model));
        }
    }
    return out;
}

bool in_set(const std::vector<std::size_t>& set, std::size_t v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

ValidationCheck check_closed_forms(const std::vector<RmlmModel>& models, std::mt19937_64& rng,
                                   double tol) {
    Tally t("closed-form scalings match the angular integral");
    std::uniform_real_distribution<double> scale(1.0, 2.5);
    for (const auto& model : models) {
        const std::size_t d = model.size();
        const auto atoms = angular_atoms(model);
        auto integral = [&](const MaxProjection& p) {
            return angular_integral(atoms, [&](std::span<const double> w) {
                return p.squared_max(w);
            });
        };
        for (std::size_t mask = 1; mask < (std::size_t{1} << d); ++mask) {
            std::vector<std::size_t> set;
            for (std::size_t v = 0; v < d; ++v) {
                if (mask >> v & 1U) {
                    set.push_back(v);
                }
            }
            const auto p = MaxProjection::set(set);
            t.near(exact_scaling(model, p), integral(p), tol);
        }
        std::uniform_int_distribution<std::size_t> node(0, d - 1);
        std::bernoulli_distribution coin(0.4);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t i = node(rng);
            std::size_t j = node(rng);
            while (j == i) {
                j = node(rng);
            }
            std::vector<std::size_t> scaled;
            for (std::size_t v = 0; v < d; ++v) {
                if (v != i && v != j && coin(rng)) {
                    scaled.push_back(v);
                }
            }
            const auto p = MaxProjection::triple(i, j, scaled, scale(rng));
            t.near(exact_scaling(model, p), integral(p), tol);
        }
    }
    return t.done();
}

ValidationCheck check_unit_scalings(const std::vector<RmlmModel>& models, double tol) {
    Tally t("single-node scalings equal 1");
    for (const auto& model : models) {
        for (std::size_t v = 0; v < model.size(); ++v) {
            t.near(exact_scaling(model, MaxProjection::node(v)), 1.0, tol);
        }
    }
    return t.done();
}

ValidationCheck check_gap_identity(const std::vector<RmlmModel>& models, std::mt19937_64& rng,
                                   std::size_t tuples, double tol) {
    Tally t("scaled-minus-unscaled gap identity");
    std::uniform_int_distribution<std::size_t> pick(0, models.size() - 1);
    std::uniform_real_distribution<double> scale(1.05, 2.5);
    for (std::size_t rep = 0; rep < tuples; ++rep) {
        const auto& model = models[pick(rng)];
        const std::size_t d = model.size();
        std::uniform_int_distribution<std::size_t> node(0, d - 1);
        const std::size_t i = node(rng);
        std::size_t j = node(rng);
        while (j == i) {
            j = node(rng);
        }
        const auto set = random_closed_set(model.A(), rng, {i, j});
        const auto gap = gap_identity(model, i, j, set, scale(rng));
        t.near(gap.lhs, gap.rhs, tol);
    }
    return t.done();
}

double gap(const RmlmModel& model, std::size_t i, std::size_t j,
           const std::vector<std::size_t>& set, double a) {
    return exact_scaling(model, MaxProjection::triple(i, j, set, a)) -
           exact_scaling(model, MaxProjection::triple(i, j, set, 1.0));
}

ValidationCheck check_source_gaps(const std::vector<RmlmModel>& models, double a, double tol) {
    Tally t("source gaps equal a^2-1, others fall below");
    const double target = a * a - 1.0;
    for (const auto& model : models) {
        const std::size_t d = model.size();
        for (std::size_t j = 0; j < d; ++j) {
            const bool source = ancestors(model.A(), j).empty();
            for (std::size_t i = 0; i < d; ++i) {
                if (i == j) {
                    continue;
                }
                const double g = gap(model, i, j, {}, a);
                if (source) {
                    t.near(g, target, tol);
                } else if (reaches(model.A(), i, j)) {
                    t.expect(target - g > 0.0, std::max(0.0, g - target));
                } else {
                    t.expect(g <= target + tol, std::max(0.0, g - target));
                }
            }
        }
    }
    return t.done();
}

ValidationCheck check_conditional_gaps(const std::vector<RmlmModel>& models,
                                       std::mt19937_64& rng, double a, double tol) {
    Tally t("conditional gaps given an ancestrally closed set");
    for (const auto& model : models) {
        const std::size_t d = model.size();
        for (int rep = 0; rep < 10; ++rep) {
            const auto closed = random_closed_set(model.A(), rng, {});
            if (closed.size() + 2 > d) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                if (in_set(closed, j)) {
                    continue;
                }
                const auto anc = ancestors(model.A(), j);
                const bool covered = std::all_of(anc.begin(), anc.end(),
                                                 [&](std::size_t u) { return in_set(closed, u); });
                std::vector<std::size_t> with_j = closed;
                with_j.push_back(j);
                const double ref =
                    (a * a - 1.0) * exact_scaling(model, MaxProjection::set(with_j));
                for (std::size_t i = 0; i < d; ++i) {
                    if (i == j || in_set(closed, i)) {
                        continue;
                    }
                    const double g = gap(model, i, j, closed, a);
                    if (covered) {
                        t.near(g, ref, tol);
                    } else if (reaches(model.A(), i, j)) {
                        t.expect(ref - g > 0.0, std::max(0.0, g - ref));
                    } else {
                        t.expect(g <= ref + tol, std::max(0.0, g - ref));
                    }
                }
            }
        }
    }
    return t.done();
}

ValidationCheck check_two_routes(std::mt19937_64& rng) {
    Tally t("recursive and linear recovery agree");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t d = 2; d <= 8; ++d) {
        const auto transform = build_transform(d);
        for (int rep = 0; rep < 100; ++rep) {
            ScalingVector s{d, std::vector<double>(triangular_size(d))};
            for (double& v : s.values) {
                v = u(rng);
            }
            const auto x = recover_squared_recursive(s);
            const auto y = recover_squared_linear(s, transform);
            for (std::size_t r = 0; r < x.values.size(); ++r) {
                t.near(x.values[r], y.values[r], 1e-12);
            }
        }
    }
    return t.done();
}

ValidationCheck check_round_trip(const std::vector<RmlmModel>& models, double a, double tol) {
    Tally t("exact scalings recover A");
    for (const auto& model : models) {
        const std::size_t d = model.size();
        ExactScalings source(model);
        const auto order = causal_order(source, a, 0.0);
        const auto s = build_scaling_vector(source, order);
        const auto squared = recover_squared_linear(s, build_transform(d));
        Matrix relabelled(d, d);
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = 0; q < d; ++q) {
                relabelled(p, q) = model.A()(order.order[p], order.order[q]);
            }
        }
        const auto truth = squared_upper(relabelled);
        for (std::size_t r = 0; r < truth.values.size(); ++r) {
            t.near(squared.values[r], truth.values[r], tol);
        }
        const auto back = postprocess(squared, order);
        t.near(max_abs_diff(back.A, model.A()), 0.0, tol);
    }
    return t.done();
}

ValidationCheck check_exact_order(const std::vector<RmlmModel>& models, double a) {
    Tally t("exact scalings give a valid causal order");
    for (const auto& model : models) {
        ExactScalings source(model);
        const auto order = causal_order(source, a, 0.0);
        t.expect(respects_ancestry(order, model.A()) && steps_are_antichains(order, model.A()));
    }
    return t.done();
}

ValidationCheck check_four_node_fixture() {
    Tally t("four-node fixture order");
    const auto model = RmlmModel::from_spec(four_node_spec());
    ExactScalings source(model);
    for (double a : {1.1, 1.3, 2.0}) {
        const auto order = causal_order(source, a, 0.0);
        const bool ok = order.steps.size() == 3 &&
                        order.steps[0] == std::vector<std::size_t>{2, 3} &&
                        order.steps[1] == std::vector<std::size_t>{1} &&
                        order.steps[2] == std::vector<std::size_t>{0} &&
                        order.order == std::vector<std::size_t>{0, 1, 2, 3};
        t.expect(ok);
    }
    return t.done();
}

ValidationCheck check_transform_fixture() {
    Tally t("d=4 transform matrix");
    const Matrix printed{{1, 0, 0, 0, -1, 0, 0, 0, 0, 0},   {-1, 1, 0, 0, 1, 0, 0, -1, 0, 0},
                         {0, -1, 1, 0, 0, 0, 0, 1, 0, -1},  {0, 0, -1, 1, 0, 0, 0, 0, 0, 1},
                         {0, 0, 0, 0, 1, 0, 0, -1, 0, 0},   {0, 0, 0, 0, -1, 1, 0, 1, 0, -1},
                         {0, 0, 0, 0, 0, -1, 1, 0, 0, 1},   {0, 0, 0, 0, 0, 0, 0, 1, 0, -1},
                         {0, 0, 0, 0, 0, 0, 0, -1, 1, 1},   {0, 0, 0, 0, 0, 0, 0, 0, 0, 1}};
    const Matrix built = build_transform(4).dense();
    t.expect(built == printed, max_abs_diff(built, printed));
    return t.done();
}

std::vector<MaxProjection> random_descriptors(std::size_t d, std::size_t count, double a,
                                              std::mt19937_64& rng) {
    std::vector<MaxProjection> out;
    std::uniform_int_distribution<std::size_t> node(0, d - 1);
    std::bernoulli_distribution coin(0.5);
    while (out.size() < count) {
        if (coin(rng)) {
            std::vector<std::size_t> set;
            for (std::size_t v = 0; v < d; ++v) {
                if (coin(rng)) {
                    set.push_back(v);
                }
            }
            if (!set.empty()) {
                out.push_back(MaxProjection::set(set));
            }
        } else {
            const std::size_t i = node(rng);
            std::size_t j = node(rng);
            while (j == i) {
                j = node(rng);
            }
            std::vector<std::size_t> scaled;
            for (std::size_t v = 0; v < d; ++v) {
                if (v != i && v != j && coin(rng)) {
                    scaled.push_back(v);
                }
            }
            out.push_back(MaxProjection::triple(i, j, scaled, a));
        }
    }
    return out;
}

std::vector<ValidationCheck> check_monte_carlo(const ValidateOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x5eedULL);
    RandomModelOptions ro;
    ro.min_weight = 0.5;
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(opt.mc_d, rng, ro),
                                            opt.seed);
    Tally scal("empirical scalings approach the closed forms");
    {
        const Matrix x = simulate(model, opt.mc_n);
        EmpiricalScalings empirical(x, opt.mc_k);
        for (const auto& p : random_descriptors(opt.mc_d, opt.mc_descriptors, opt.a, rng)) {
            scal.near(empirical.squared_scaling(p), exact_scaling(model, p), opt.mc_tolerance);
        }
    }
    Tally ord("empirical causal order is valid");
    std::size_t valid = 0;
    for (std::size_t s = 0; s < opt.mc_order_seeds; ++s) {
        const Matrix x = simulate_max_linear(model.A(), opt.mc_n, opt.seed + 1000 + s);
        EmpiricalScalings empirical(x, opt.mc_k);
        const auto order = causal_order(empirical, opt.a, kDefaultEpsilon);
        if (respects_ancestry(order, model.A())) {
            ++valid;
        }
    }
    ord.check.cases = opt.mc_order_seeds;
    ord.check.failures = opt.mc_order_seeds - valid;
    ord.check.passed = valid >= opt.mc_order_required;
    std::ostringstream detail;
    detail << valid << " of " << opt.mc_order_seeds << " seeds valid, " << opt.mc_order_required
           << " required";
    return {scal.done(), ord.done(detail.str())};
}

}  // namespace

ValidationReport validate(const ValidateOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const auto ordered = model_set(opt, rng, false);
    const auto shuffled = model_set(opt, rng, true);
    ValidationReport report;
    auto& c = report.checks;
    c.push_back(check_closed_forms(shuffled, rng, opt.tolerance));
    c.push_back(check_unit_scalings(shuffled, opt.tolerance));
    c.push_back(check_gap_identity(shuffled, rng, opt.gap_tuples, opt.tolerance));
    c.push_back(check_source_gaps(shuffled, opt.a, opt.tolerance));
    c.push_back(check_conditional_gaps(shuffled, rng, opt.a, opt.tolerance));
    c.push_back(check_two_routes(rng));
    c.push_back(check_round_trip(ordered, opt.a, opt.tolerance));
    c.push_back(check_round_trip(shuffled, opt.a, opt.tolerance));
    c.back().name += " (relabelled models)";
    c.push_back(check_exact_order(shuffled, opt.a));
    c.push_back(check_four_node_fixture());
    c.push_back(check_transform_fixture());
    if (opt.mc_n > 0) {
        for (auto& check : check_monte_carlo(opt)) {
            c.push_back(std::move(check));
        }
    }
    return report;
}

Json validation_to_json(const ValidationReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"cases", c.cases},
                          {"failures", c.failures},
                          {"worst", c.worst},
                          {"detail", c.detail}});
    }
    return Json{{"passed", report.passed()}, {"checks", checks}};
}

}  // namespace rmlm
