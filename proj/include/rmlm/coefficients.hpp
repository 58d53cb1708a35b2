#pragma once

// Recovery of the squared max-linear coefficient matrix from suffix-set
// scalings, either by recursion or by one product with a {-1,0,1} matrix.
//
// Both vectors are indexed by upper-triangular position (i, j), j >= i, in the
// well-ordered labelling, row by row. Slot (i, j) of the scaling vector holds
// s(M_{i, j+1, ..., d}) for j < d and s(X_i) for j = d.

#include "rmlm/matrix.hpp"
#include "rmlm/order.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/tropical.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rmlm {

/// Zero-based slot of upper-triangular position (i, j), 0 <= i <= j < d.
/// Equals l_ij - 1 for the 1-based l_ij = (j - d) + sum_{k=0}^{i-1} (d - k).
std::size_t triangular_index(std::size_t d, std::size_t i, std::size_t j);

inline std::size_t triangular_size(std::size_t d) { return d * (d + 1) / 2; }

struct ScalingVector {
    std::size_t d = 0;
    std::vector<double> values;
};

struct SquaredCoefVector {
    std::size_t d = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[triangular_index(d, i, j)]; }
    /// Upper-triangular d x d matrix of the entries.
    Matrix to_matrix() const;
};

/// Vectorised squared entries of an upper-triangular matrix.
SquaredCoefVector squared_upper(const Matrix& a);

/// Sparse {-1,0,1} matrix mapping the scaling vector to squared coefficients.
struct TransformMatrix {
    std::size_t d = 0;
    /// Per row: (column, coefficient) pairs, sorted by column.
    std::vector<std::vector<std::pair<std::size_t, int>>> rows;

    std::size_t size() const { return rows.size(); }
    int at(std::size_t row, std::size_t col) const;
    Matrix dense() const;
};

/// Relabels so position p of `order` becomes node p and evaluates every slot.
ScalingVector build_scaling_vector(const ScalingSource& source, const OrderResult& order);
/// Same, with an explicit well-ordering (ordering[p] = original node of new label p).
ScalingVector build_scaling_vector(const ScalingSource& source,
                                   std::span<const std::size_t> ordering);

/// Diagonal, inner-row and last-column recursion on the scaling vector.
SquaredCoefVector recover_squared_recursive(const ScalingVector& s);

/// Throws std::invalid_argument if d == 0.
TransformMatrix build_transform(std::size_t d);

/// T * S. Throws std::invalid_argument on a dimension mismatch.
SquaredCoefVector recover_squared_linear(const ScalingVector& s, const TransformMatrix& t);

/// Squared entries at or below this level are rounding residue and become 0.
inline constexpr double kSquaredFloor = 1e-13;

struct PostprocessReport {
    std::vector<std::size_t> degenerate_rows;  ///< all-zero rows replaced by the unit diagonal
    std::vector<std::size_t> zero_diagonal_rows;
    std::size_t clamped_entries = 0;  ///< negative beyond the rounding floor
};

/// Zeroes same-step pairs, clamps negatives and rounding residue to 0, takes
/// square roots, normalises rows, and maps back to the original labels. `squared` is in the relabelled order.
MaxLinearMatrix postprocess(const SquaredCoefVector& squared, const OrderResult& order,
                            PostprocessReport* report = nullptr);

/// Hard-thresholded minimum DAG of an estimated coefficient matrix.
Dag estimated_dag(const MaxLinearMatrix& a, double delta);

}  // namespace rmlm
