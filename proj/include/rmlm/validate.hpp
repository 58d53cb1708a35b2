#pragma once

// Self-generating invariant battery run by the `validate` subcommand.

#include "rmlm/io.hpp"
#include "rmlm/model.hpp"
#include "rmlm/tropical.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rmlm {

/// Four nodes with edges 3->1, 3->2, 4->1, 4->2, 2->1 (1-based), every edge max-weighted.
DagSpec four_node_spec();

/// The model whose node perm[v] plays the role of node v of `model`.
RmlmModel permute_model(const RmlmModel& model, const std::vector<std::size_t>& perm);

/// Random ancestrally closed subset avoiding the `excluded` nodes (possibly empty).
std::vector<std::size_t> random_closed_set(const Matrix& a, std::mt19937_64& rng,
                                           const std::vector<std::size_t>& excluded);

struct ValidateOptions {
    std::vector<std::size_t> dims{3, 4, 5, 6};
    std::size_t models_per_dim = 50;
    std::size_t gap_tuples = 1000;
    double a = kDefaultScale;
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
    std::size_t mc_d = 5;
    std::size_t mc_n = 1000000;
    std::size_t mc_k = 10000;
    std::size_t mc_descriptors = 20;
    double mc_tolerance = 0.05;
    std::size_t mc_order_seeds = 20;
    std::size_t mc_order_required = 18;
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;  ///< largest violation seen (absolute error or missing margin)
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed() const;
};

ValidationReport validate(const ValidateOptions& options);

Json validation_to_json(const ValidationReport& report);

}  // namespace rmlm
