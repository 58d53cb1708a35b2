#pragma once

// Causal order discovery from scalings of scaled and unscaled max-projections.

#include "rmlm/matrix.hpp"
#include "rmlm/scaling_source.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace rmlm {

inline constexpr double kDefaultEpsilon = 0.1;

/// Absolute slack added to the step-selection tolerance so that exactly tied
/// criteria (zero up to rounding) are treated as ties.
inline constexpr double kSelectionSlack = 1e-12;

/// d x d matrix of criterion values; +inf on ordered rows/columns and the diagonal.
struct DeltaMatrix {
    Matrix values;

    static constexpr double sentinel() { return std::numeric_limits<double>::infinity(); }
};

/// (Delta_O)_ij = s(M_{i,aj,aO}) - s(M_{i,j,O}) - (a^2-1) s(M_{j,O}) for i, j unordered,
/// i != j, where s is the squared scaling. With O empty s(M_{j,O}) is s(X_j).
/// Throws std::invalid_argument if every node is ordered or a <= 1.
DeltaMatrix delta_matrix(const ScalingSource& source, std::span<const std::size_t> ordered,
                         double a);

struct StepSelection {
    std::vector<std::size_t> nodes;  ///< selected nodes, delta descending then index ascending
    std::vector<double> delta;       ///< per node; NaN for already ordered nodes
    double tolerance = 0.0;          ///< epsilon |max colmin| + slack
    bool fallback = false;           ///< nothing met the tolerance; the best node was taken
};

/// Column minima over unordered columns, delta = colmin - max colmin, and every
/// unordered node with |delta| <= epsilon |max colmin|. Never empty.
StepSelection select_step(const DeltaMatrix& delta, std::span<const std::size_t> ordered,
                          double epsilon);

struct OrderParams {
    double a = kDefaultScale;
    double epsilon = kDefaultEpsilon;
    std::size_t k = 0;  ///< exceedances behind the scalings, 0 for exact
};

struct OrderResult {
    /// Node sequence: each iteration's selection is prepended, so nodes found
    /// first (sources) sit at the end and every parent comes after its children.
    std::vector<std::size_t> order;
    /// Selections in discovery sequence.
    std::vector<std::vector<std::size_t>> steps;
    OrderParams params;

    /// Index of the step that selected `node`.
    std::size_t step_of(std::size_t node) const;
    /// Position of each node in `order`.
    std::vector<std::size_t> positions() const;
};

struct IterationLog {
    std::vector<std::size_t> ordered;  ///< O before this iteration
    StepSelection selection;
};

using IterationObserver = std::function<void(const IterationLog&)>;

/// Repeats delta_matrix + select_step, prepending each selection, until all nodes
/// are ordered. Throws std::invalid_argument if a <= 1 or epsilon < 0.
OrderResult causal_order(const ScalingSource& source, double a = kDefaultScale,
                         double epsilon = kDefaultEpsilon, const IterationObserver& observer = {});

/// Every ancestor (positivity pattern of A) appears after its descendant.
bool respects_ancestry(const OrderResult& result, const Matrix& a);

/// No two nodes of one step are ancestrally related in A.
bool steps_are_antichains(const OrderResult& result, const Matrix& a);

}  // namespace rmlm
