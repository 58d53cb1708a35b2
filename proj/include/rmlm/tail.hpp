#pragma once

// Empirical tail machinery: rank transform to Fréchet(2) margins, polar
// decomposition, order-statistic thresholding and scaling estimators.

#include "rmlm/matrix.hpp"
#include "rmlm/projection.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rmlm {

/// Columnwise empirical integral transform
///   x -> {-ln( #{rows <= x} / (n+1) )}^(-1/2).
/// Tied values map to the same output. Throws std::invalid_argument if n < 2,
/// a value is not finite, or a column is constant.
Matrix frechet_transform(const Matrix& raw);

/// One observation in polar coordinates under the Euclidean norm.
struct AngularSample {
    double radius = 0.0;
    std::vector<double> omega;
};

struct PolarSamples {
    std::vector<AngularSample> samples;
    std::vector<std::size_t> rows;  ///< source row of each sample
    std::size_t zero_radius = 0;    ///< rows dropped because the restricted vector is 0
};

/// Polar coordinates of each row restricted to `subset` (order as given).
/// Throws std::invalid_argument on an empty subset or an out-of-range index.
PolarSamples polar(const Matrix& sample, std::span<const std::size_t> subset);

/// The k largest radii. Ties at the threshold go to the earlier row, so exactly
/// k indices are returned, sorted ascending.
struct ExceedanceSet {
    std::size_t k = 0;
    double threshold = 0.0;  ///< R^(k), the k-th largest radius
    std::vector<std::size_t> selected;
};

/// Throws std::invalid_argument if k == 0 or k > radii.size().
ExceedanceSet top_exceedances(std::span<const double> radii, std::size_t k);

/// m/k * sum of f(omega) over the k largest radii, m = dimension of omega.
/// Throws std::invalid_argument if k == 0 or k exceeds the number of samples.
double empirical_moment(std::span<const AngularSample> samples, std::size_t k,
                        const std::function<double(std::span<const double>)>& f);

/// Squared-scaling estimate of a max-projection from the angular measure of the
/// involved coordinates only, normalised by their count m.
/// Throws std::invalid_argument when fewer than k rows have a nonzero restriction.
double estimate_scaling(const Matrix& sample, std::size_t k, const MaxProjection& projection);

}  // namespace rmlm
