#include "doctest.h"
#include "oracles.hpp"

#include "rmlm/model.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/tail.hpp"

#include <cmath>
#include <random>

using namespace rmlm;

TEST_CASE("rank transform of a small column") {
    const Matrix raw{{5.0, 1.0}, {1.0, 2.0}, {9.0, 3.0}};
    const Matrix x = frechet_transform(raw);
    CHECK(x(0, 0) == doctest::Approx(std::pow(-std::log(2.0 / 4.0), -0.5)));
    CHECK(x(1, 0) == doctest::Approx(std::pow(-std::log(1.0 / 4.0), -0.5)));
    CHECK(x(2, 0) == doctest::Approx(std::pow(-std::log(3.0 / 4.0), -0.5)));
    CHECK(x(0, 0) == doctest::Approx(1.2011).epsilon(1e-4));
    CHECK(x(1, 0) == doctest::Approx(0.8493).epsilon(1e-4));
    CHECK(x(2, 0) == doctest::Approx(1.8644).epsilon(1e-4));
    CHECK(x(0, 1) < x(1, 1));
    CHECK(x(1, 1) < x(2, 1));
}

TEST_CASE("rank transform matches quadratic counting, ties included") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> u(0, 20);
    Matrix raw(200, 3);
    for (double& v : raw.data()) {
        v = u(rng);
    }
    const Matrix x = frechet_transform(raw);
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> col;
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            col.push_back(raw(r, c));
        }
        const auto expect = oracle::frechet_column(col);
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            CHECK(std::abs(x(r, c) - expect[r]) < 1e-12);
        }
    }
}

TEST_CASE("rank transform ignores monotone distortion") {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> g;
    Matrix raw(500, 2), bent(500, 2);
    for (std::size_t r = 0; r < 500; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            raw(r, c) = g(rng);
            bent(r, c) = std::exp(3.0 * raw(r, c)) + 7.0;
        }
    }
    CHECK(frechet_transform(raw) == frechet_transform(bent));
}

TEST_CASE("rank transform rejects bad input") {
    CHECK_THROWS_AS(frechet_transform(Matrix{{1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(frechet_transform(Matrix{{1.0, 2.0}, {1.0, 3.0}}), std::invalid_argument);
    CHECK_THROWS_AS(frechet_transform(Matrix{{1.0, 2.0}, {NAN, 3.0}}), std::invalid_argument);
}

TEST_CASE("polar coordinates") {
    const Matrix x{{3.0, 4.0, 7.0}, {0.0, 0.0, 2.0}};
    const std::vector<std::size_t> sub{0, 1};
    const auto p = polar(x, sub);
    REQUIRE(p.samples.size() == 1);
    CHECK(p.samples[0].radius == doctest::Approx(5.0));
    CHECK(p.samples[0].omega[0] == doctest::Approx(0.6));
    CHECK(p.samples[0].omega[1] == doctest::Approx(0.8));
    CHECK(p.zero_radius == 1);
    const std::vector<std::size_t> one{2};
    const auto q = polar(x, one);
    CHECK(q.samples[1].radius == 2.0);
    CHECK(q.samples[1].omega[0] == 1.0);

    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    Matrix y(100, 4);
    for (double& v : y.data()) {
        v = u(rng);
    }
    const std::vector<std::size_t> s3{3, 0, 2};
    const auto r = polar(y, s3);
    for (std::size_t t = 0; t < r.samples.size(); ++t) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(std::abs(r.samples[t].radius * r.samples[t].omega[c] - y(r.rows[t], s3[c])) <
                  1e-12);
        }
    }
    CHECK_THROWS_AS(polar(y, std::vector<std::size_t>{}), std::invalid_argument);
}

TEST_CASE("exceedances: exactly k, earlier rows win ties") {
    const std::vector<double> radii{1.0, 3.0, 2.0, 3.0, 2.0, 2.0};
    const auto e = top_exceedances(radii, 3);
    CHECK(e.selected == std::vector<std::size_t>{1, 2, 3});
    CHECK(e.threshold == 2.0);
    CHECK_THROWS_AS(top_exceedances(radii, 0), std::invalid_argument);
    CHECK_THROWS_AS(top_exceedances(radii, 7), std::invalid_argument);
}

TEST_CASE("empirical moments") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix x(300, 3);
    for (double& v : x.data()) {
        v = u(rng);
    }
    const std::vector<std::size_t> sub{0, 1, 2};
    const auto p = polar(x, sub);
    CHECK(empirical_moment(p.samples, 40, [](std::span<const double>) { return 1.0; }) ==
          doctest::Approx(3.0));
    CHECK(empirical_moment(p.samples, 40, [](std::span<const double> w) {
              return w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
          }) == doctest::Approx(3.0));
    const std::vector<std::size_t> one{1};
    const auto q = polar(x, one);
    CHECK(empirical_moment(q.samples, 17, [](std::span<const double> w) { return w[0] * w[0]; }) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(empirical_moment(q.samples, 301, [](std::span<const double>) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("scaling estimates match a sorted reference") {
    std::mt19937_64 rng(35);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(4, rng), 5);
    const Matrix x = simulate(model, 5000);
    const std::vector<MaxProjection> descriptors{
        MaxProjection::node(2), MaxProjection::set({0, 3}), MaxProjection::set({0, 1, 2, 3}),
        MaxProjection::triple(0, 1, {2, 3}, 1.3), MaxProjection::triple(3, 2, {}, 1.7)};
    for (const auto& p : descriptors) {
        const auto coords = p.involved();
        const double ref = oracle::sorted_moment(x, coords, 250, [&](const std::vector<double>& w) {
            std::vector<double> full(4, 0.0);
            for (std::size_t c = 0; c < coords.size(); ++c) {
                full[coords[c]] = w[c];
            }
            return p.squared_max(full);
        });
        CHECK(std::abs(estimate_scaling(x, 250, p) - ref) < 1e-12);
    }
}

TEST_CASE("scaling estimates ignore row order") {
    std::mt19937_64 rng(36);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(3, rng), 6);
    const Matrix x = simulate(model, 3000);
    std::vector<std::size_t> perm(x.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix y(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            y(r, c) = x(perm[r], c);
        }
    }
    const auto p = MaxProjection::triple(0, 2, {1}, 1.3);
    CHECK(std::abs(estimate_scaling(x, 100, p) - estimate_scaling(y, 100, p)) < 1e-12);
}

TEST_CASE("unit multiplier triple equals the plain set") {
    std::mt19937_64 rng(37);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(4, rng), 7);
    const Matrix x = simulate(model, 4000);
    CHECK(estimate_scaling(x, 200, MaxProjection::triple(0, 1, {3}, 1.0)) ==
          doctest::Approx(estimate_scaling(x, 200, MaxProjection::set({0, 1, 3}))).epsilon(1e-12));
}

TEST_CASE("independent case: full-set scaling equals d") {
    const RmlmModel m(MaxLinearMatrix{Matrix::identity(3), true}, 2.0, 8);
    const Matrix x = simulate(m, 1000000);
    CHECK(std::abs(estimate_scaling(x, 1000, MaxProjection::set({0, 1, 2})) - 3.0) < 0.05);
}

TEST_CASE("estimates approach the closed forms") {
    std::mt19937_64 rng(38);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(4, rng), 9);
    const Matrix x = simulate(model, 1000000);
    CHECK(std::abs(estimate_scaling(x, 10000, MaxProjection::node(1)) - 1.0) < 0.05);
    // Off-axis mass pulls the estimate down; the shortfall shrinks with k / n.
    const auto p = MaxProjection::triple(0, 1, {2, 3}, 1.3);
    const double truth = exact_scaling(model, p);
    const double coarse = estimate_scaling(x, 10000, p);
    const double fine = estimate_scaling(x, 1000, p);
    CHECK(coarse < truth);
    CHECK(std::abs(fine - truth) < std::abs(coarse - truth));
    CHECK(std::abs(coarse - truth) / truth < 0.05);
}

TEST_CASE("error shrinks with sample size") {
    std::mt19937_64 rng(39);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(3, rng, {0.7, 0.4, 1.0}), 1);
    const auto p = MaxProjection::triple(0, 1, {2}, 1.3);
    const double truth = exact_scaling(model, p);
    std::vector<double> median_err;
    for (std::size_t n : {10000u, 100000u, 1000000u}) {
        const auto k = static_cast<std::size_t>(std::pow(static_cast<double>(n), 0.7));
        std::vector<double> errs;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const Matrix x = simulate_max_linear(model.A(), n, 100 + s);
            errs.push_back(std::abs(estimate_scaling(x, k, p) - truth));
        }
        std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
        median_err.push_back(errs[10]);
    }
    CHECK(median_err[1] < median_err[0]);
    CHECK(median_err[2] < median_err[1]);
}

TEST_CASE("empirical source caches and validates k") {
    const Matrix x{{1.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}};
    CHECK_THROWS_AS(EmpiricalScalings(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalScalings(x, 4), std::invalid_argument);
    EmpiricalScalings s(x, 2);
    const auto p = MaxProjection::set({0, 1});
    CHECK(s.squared_scaling(p) == s.squared_scaling(p));
    CHECK(s.exceedances() == 2);
}
