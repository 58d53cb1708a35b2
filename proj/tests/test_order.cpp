#include "doctest.h"
#include "oracles.hpp"

#include "rmlm/order.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/validate.hpp"

#include <cmath>
#include <random>

using namespace rmlm;

namespace {

RmlmModel fixture() { return RmlmModel::from_spec(four_node_spec()); }

}  // namespace

TEST_CASE("delta matrix of the four-node fixture") {
    const auto model = fixture();
    ExactScalings source(model);
    const double a = 1.3;
    const auto first = delta_matrix(source, {}, a);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::isinf(first.values(i, i)));
        if (i != 3) {
            CHECK(std::abs(first.values(i, 3)) < 1e-12);
        }
        if (i != 2) {
            CHECK(std::abs(first.values(i, 2)) < 1e-12);
        }
    }
    // Node 3 is a source, so only the 2 <- 3 coefficient separates the two sides.
    const double a23 = model.A()(1, 2);
    REQUIRE(a * a23 < 1.0);
    CHECK(std::abs(first.values(2, 1) + (a * a - 1.0) * a23 * a23) < 1e-12);
    CHECK(first.values(2, 1) < 0.0);

    const std::vector<std::size_t> ordered{2, 3};
    const auto second = delta_matrix(source, ordered, a);
    CHECK(second.values(1, 0) < 0.0);
    CHECK(std::abs(second.values(0, 1)) < 1e-12);
    CHECK(std::isinf(second.values(2, 0)));
    CHECK(std::isinf(second.values(0, 3)));

    CHECK_THROWS_AS(delta_matrix(source, {}, 1.0), std::invalid_argument);
    const std::vector<std::size_t> all{0, 1, 2, 3};
    CHECK_THROWS_AS(delta_matrix(source, all, a), std::invalid_argument);
}

TEST_CASE("four-node fixture order for several multipliers") {
    const auto model = fixture();
    ExactScalings source(model);
    for (double a : {1.1, 1.3, 2.0}) {
        const auto r = causal_order(source, a, 0.0);
        REQUIRE(r.steps.size() == 3);
        CHECK(r.steps[0] == std::vector<std::size_t>{2, 3});
        CHECK(r.steps[1] == std::vector<std::size_t>{1});
        CHECK(r.steps[2] == std::vector<std::size_t>{0});
        CHECK(r.order == std::vector<std::size_t>{0, 1, 2, 3});
        CHECK(r.step_of(3) == 0);
    }
}

TEST_CASE("first step with tolerance selects both sources") {
    const auto model = fixture();
    ExactScalings source(model);
    const auto sel = select_step(delta_matrix(source, {}, 1.3), {}, 0.1);
    CHECK(sel.nodes == std::vector<std::size_t>{2, 3});
    CHECK(!sel.fallback);
    CHECK(sel.delta[0] < 0.0);
    CHECK(sel.delta[1] < 0.0);
    CHECK(std::abs(sel.delta[2]) < 1e-12);
}

TEST_CASE("independent model: one step holds every node") {
    const RmlmModel m(MaxLinearMatrix{Matrix::identity(5), true});
    ExactScalings source(m);
    const auto r = causal_order(source, 1.3, 0.0);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].size() == 5);
}

TEST_CASE("fallback picks the best node when nothing is within tolerance") {
    DeltaMatrix dm{Matrix(3, 3, DeltaMatrix::sentinel())};
    dm.values(1, 0) = -0.5;
    dm.values(2, 0) = -0.4;
    dm.values(0, 1) = -0.2;
    dm.values(2, 1) = -0.3;
    dm.values(0, 2) = -0.9;
    dm.values(1, 2) = -0.1;
    // colmins: -0.5, -0.3, -0.9; max -0.3 -> delta (-0.2, 0, -0.6)
    const auto sel = select_step(dm, {}, 0.0);
    CHECK(sel.nodes == std::vector<std::size_t>{1});
    const auto wide = select_step(dm, {}, 1.0);
    CHECK(wide.nodes == std::vector<std::size_t>{1, 0});
}

TEST_CASE("exact scalings give valid orders on random models") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t d = 6;
        const auto spec = random_well_ordered_spec(d, rng);
        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto model = permute_model(RmlmModel::from_spec(spec), perm);
        ExactScalings source(model);
        const auto r = causal_order(source, 1.3, 0.1);
        std::vector<Edge> edges;
        for (const auto& e : spec.dag().edges()) {
            edges.push_back({perm[e.from], perm[e.to]});
        }
        const auto anc = oracle::ancestry(d, edges);
        CHECK(oracle::valid_order(r.order, anc));
        CHECK(respects_ancestry(r, model.A()));
        CHECK(steps_are_antichains(r, model.A()));
    }
}

TEST_CASE("with exact scalings a node enters exactly when its ancestors are ordered") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 100; ++rep) {
        const auto model = RmlmModel::from_spec(random_well_ordered_spec(5, rng));
        ExactScalings source(model);
        const auto anc = oracle::ancestry(model.A());
        causal_order(source, 1.3, 0.0, [&](const IterationLog& log) {
            std::vector<bool> done(5, false);
            for (std::size_t v : log.ordered) {
                done[v] = true;
            }
            std::vector<std::size_t> ready;
            for (std::size_t j = 0; j < 5; ++j) {
                if (done[j]) {
                    continue;
                }
                bool ok = true;
                for (std::size_t u = 0; u < 5; ++u) {
                    ok = ok && (!anc[j][u] || done[u]);
                }
                if (ok) {
                    ready.push_back(j);
                }
            }
            auto got = log.selection.nodes;
            std::sort(got.begin(), got.end());
            CHECK(got == ready);
        });
    }
}

TEST_CASE("common rescaling leaves the selection unchanged") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 30; ++rep) {
        const auto model = RmlmModel::from_spec(random_well_ordered_spec(5, rng), 3);
        const Matrix x = simulate(model, 5000);
        EmpiricalScalings base(x, 200);
        RescaledScalings scaled(base, 3.7);
        const auto r1 = causal_order(base, 1.3, 0.1);
        const auto r2 = causal_order(scaled, 1.3, 0.1);
        CHECK(r1.steps == r2.steps);
    }
}

TEST_CASE("relabelling the input relabels the order") {
    std::mt19937_64 rng(44);
    for (int rep = 0; rep < 50; ++rep) {
        const auto model = RmlmModel::from_spec(random_well_ordered_spec(5, rng, {0.5, 0.2, 1.0}));
        std::vector<std::size_t> perm(5);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto moved = permute_model(model, perm);
        ExactScalings s1(model), s2(moved);
        const auto r1 = causal_order(s1, 1.3, 0.0);
        const auto r2 = causal_order(s2, 1.3, 0.0);
        REQUIRE(r1.steps.size() == r2.steps.size());
        for (std::size_t s = 0; s < r1.steps.size(); ++s) {
            std::vector<std::size_t> mapped;
            for (std::size_t v : r1.steps[s]) {
                mapped.push_back(perm[v]);
            }
            std::sort(mapped.begin(), mapped.end());
            auto other = r2.steps[s];
            std::sort(other.begin(), other.end());
            CHECK(mapped == other);
        }
    }
}

TEST_CASE("order bookkeeping") {
    const auto model = fixture();
    ExactScalings source(model);
    const auto r = causal_order(source, 1.3, 0.0);
    std::vector<std::size_t> joined;
    for (auto it = r.steps.rbegin(); it != r.steps.rend(); ++it) {
        joined.insert(joined.end(), it->begin(), it->end());
    }
    CHECK(joined == r.order);
    const auto pos = r.positions();
    for (std::size_t p = 0; p < 4; ++p) {
        CHECK(pos[r.order[p]] == p);
    }
    CHECK_THROWS_AS(causal_order(source, 1.3, -0.1), std::invalid_argument);
}
