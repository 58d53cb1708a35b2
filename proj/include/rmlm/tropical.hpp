#pragma once

// Max-times semiring algebra, DAG structure, and the path-weight view of a
// recursive max-linear model.
//
// Node indices are 0-based throughout the library. External formats (JSON,
// DOT, CSV) use 1-based labels or names; see io.hpp.

#include "rmlm/matrix.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rmlm {

/// Absolute slack used when a strict inequality between products of reals
/// has to be decided in floating point.
inline constexpr double kTieTolerance = 1e-12;

/// Directed edge `from -> to`.
struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Topological order of the graph, or nullopt if it has a cycle.
std::optional<std::vector<std::size_t>> topological_sort(std::size_t d,
                                                         std::span<const Edge> edges);

/// Unweighted acyclic digraph on nodes 0..d-1. Edges are kept sorted and unique.
class Dag {
public:
    Dag() = default;
    /// Throws std::invalid_argument on out-of-range nodes, self loops or cycles.
    explicit Dag(std::size_t d, std::vector<Edge> edges = {});

    std::size_t size() const noexcept { return d_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool has_edge(std::size_t from, std::size_t to) const noexcept {
        return adjacency_[from * d_ + to] != 0;
    }

    std::vector<std::size_t> parents(std::size_t node) const;
    std::vector<std::size_t> topological_order() const;

    /// Edge subset test (same node count required).
    bool is_subgraph_of(const Dag& other) const;

    bool operator==(const Dag& other) const { return d_ == other.d_ && edges_ == other.edges_; }

private:
    std::size_t d_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint8_t> adjacency_;
};

/// Generative graph of the structural equations X_i = max_k c_ik X_k v c_ii Z_i.
///
/// weights(i, k) > 0 exactly when k -> i is an edge, and every diagonal entry is
/// strictly positive.
class DagSpec {
public:
    /// Validates acyclicity and the weight pattern; throws std::invalid_argument.
    DagSpec(std::size_t d, std::vector<Edge> edges, Matrix weights);

    std::size_t size() const noexcept { return dag_.size(); }
    const Dag& dag() const noexcept { return dag_; }
    const Matrix& weights() const noexcept { return weights_; }

private:
    Dag dag_;
    Matrix weights_;
};

/// Max-linear coefficient matrix: a_ij is the largest path weight j ~> i.
struct MaxLinearMatrix {
    Matrix A;
    bool standardised = false;

    std::size_t size() const noexcept { return A.rows(); }
};

/// (A x_max B)_ij = max_k a_ik b_kj. Throws std::invalid_argument on shape mismatch.
Matrix max_times_multiply(const Matrix& a, const Matrix& b);
std::vector<double> max_times_multiply(const Matrix& a, std::span<const double> z);

/// Path-weight matrix of a DagSpec via tropical power iteration over the edge weights.
MaxLinearMatrix coefficients_from_weights(const DagSpec& spec);

/// Divides every row by its Euclidean norm. Throws std::invalid_argument on a zero row.
MaxLinearMatrix standardize(const MaxLinearMatrix& a);
MaxLinearMatrix standardize(const Matrix& a);

/// Unit row norms and a_jj > a_ij for i != j, both within `tol`.
bool satisfies_standardisation(const Matrix& a, double tol = 1e-12);

/// j is an ancestor of i in the positivity pattern of A.
inline bool reaches(const Matrix& a, std::size_t j, std::size_t i) noexcept {
    return i != j && a(i, j) > 0.0;
}

/// Every positive off-diagonal a_ij becomes an edge j -> i.
/// Throws std::invalid_argument if the pattern is cyclic.
Dag reachability(const MaxLinearMatrix& a);

/// Keeps j -> i when a_ij > max_{k in de(j) ∩ pa(i)} a_ik a_kj / a_kk + delta, where
/// de/pa come from the positivity pattern of A. With delta = 0 this is the
/// minimum max-linear DAG.
Dag minimum_dag(const MaxLinearMatrix& a, double delta = 0.0);

}  // namespace rmlm
