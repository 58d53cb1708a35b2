#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rmlm {

/// Descriptor of a max-projection of X.
///
/// Two shapes exist:
///   - a node set I:            M_I = max_{k in I} X_k
///   - a scaled triple (i,j,I): M_{i,aj,aI} = X_i v a X_j v max_{k in I} a X_k, a >= 1
///
/// The associated angular functional is the squared max-projection
/// f(w) = max(w_i^2, a^2 w_j^2, a^2 w_k^2 : k in I), which is homogeneous of degree 2.
class MaxProjection {
public:
    enum class Kind { Set, Triple };

    static MaxProjection node(std::size_t i);
    /// Throws std::invalid_argument on an empty set.
    static MaxProjection set(std::vector<std::size_t> nodes);
    /// Throws std::invalid_argument if i == j, i or j lies in I, or a < 1.
    static MaxProjection triple(std::size_t i, std::size_t j, std::vector<std::size_t> scaled,
                                double a);

    Kind kind() const noexcept { return kind_; }
    /// Unscaled component of a triple.
    std::size_t i() const noexcept { return i_; }
    /// Scaled single component of a triple.
    std::size_t j() const noexcept { return j_; }
    /// The node set (Set) or the scaled set I (Triple), sorted.
    const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
    double scale() const noexcept { return scale_; }

    /// Sorted coordinates the functional depends on.
    std::vector<std::size_t> involved() const;
    std::size_t max_index() const;

    /// f evaluated on a full-length vector (not necessarily unit norm).
    double squared_max(std::span<const double> x) const;

    /// 1-based human label, e.g. "M{1,3}" or "M{1, 1.3*2, 1.3*{3,4}}".
    std::string label() const;

    auto operator<=>(const MaxProjection&) const = default;

private:
    MaxProjection() = default;

    Kind kind_ = Kind::Set;
    std::size_t i_ = 0;
    std::size_t j_ = 0;
    std::vector<std::size_t> nodes_;
    double scale_ = 1.0;
};

}  // namespace rmlm
