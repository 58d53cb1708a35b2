#include "rmlm/tail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rmlm {

namespace {

struct Ranked {
    double key;
    std::size_t row;
};

// Larger key first; equal keys resolved by the earlier row.
bool ranks_before(const Ranked& a, const Ranked& b) {
    return a.key > b.key || (a.key == b.key && a.row < b.row);
}

// Moves the k best entries to the front (unordered) and returns the k-th best.
Ranked select_top(std::vector<Ranked>& pool, std::size_t k) {
    std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1), pool.end(),
                     ranks_before);
    return pool[k - 1];
}

}  // namespace

Matrix frechet_transform(const Matrix& raw) {
    const std::size_t n = raw.rows();
    if (n < 2) {
        throw std::invalid_argument("frechet_transform: need at least 2 observations");
    }
    Matrix out(n, raw.cols());
    std::vector<double> column(n);
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            column[r] = raw(r, c);
            if (!std::isfinite(column[r])) {
                throw std::invalid_argument("frechet_transform: non-finite value in column " +
                                            std::to_string(c + 1));
            }
        }
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front() == sorted.back()) {
            throw std::invalid_argument("frechet_transform: column " + std::to_string(c + 1) +
                                        " is constant");
        }
        const double denom = static_cast<double>(n + 1);
        for (std::size_t r = 0; r < n; ++r) {
            const auto count = static_cast<double>(
                std::upper_bound(sorted.begin(), sorted.end(), column[r]) - sorted.begin());
            out(r, c) = 1.0 / std::sqrt(-std::log(count / denom));
        }
    }
    return out;
}

PolarSamples polar(const Matrix& sample, std::span<const std::size_t> subset) {
    if (subset.empty()) {
        throw std::invalid_argument("polar: subset must be nonempty");
    }
    for (std::size_t c : subset) {
        if (c >= sample.cols()) {
            throw std::invalid_argument("polar: subset index out of range");
        }
    }
    PolarSamples out;
    out.samples.reserve(sample.rows());
    out.rows.reserve(sample.rows());
    for (std::size_t r = 0; r < sample.rows(); ++r) {
        const auto row = sample.row(r);
        double sq = 0.0;
        for (std::size_t c : subset) {
            sq += row[c] * row[c];
        }
        if (!(sq > 0.0)) {
            ++out.zero_radius;
            continue;
        }
        AngularSample s{std::sqrt(sq), std::vector<double>(subset.size())};
        for (std::size_t m = 0; m < subset.size(); ++m) {
            s.omega[m] = row[subset[m]] / s.radius;
        }
        out.samples.push_back(std::move(s));
        out.rows.push_back(r);
    }
    return out;
}

ExceedanceSet top_exceedances(std::span<const double> radii, std::size_t k) {
    if (k == 0 || k > radii.size()) {
        throw std::invalid_argument("top_exceedances: k must lie in [1, n]");
    }
    std::vector<Ranked> pool(radii.size());
    for (std::size_t r = 0; r < radii.size(); ++r) {
        pool[r] = {radii[r], r};
    }
    const Ranked kth = select_top(pool, k);
    ExceedanceSet out{k, kth.key, {}};
    out.selected.reserve(k);
    for (std::size_t m = 0; m < k; ++m) {
        out.selected.push_back(pool[m].row);
    }
    std::sort(out.selected.begin(), out.selected.end());
    return out;
}

double empirical_moment(std::span<const AngularSample> samples, std::size_t k,
                        const std::function<double(std::span<const double>)>& f) {
    if (k == 0 || k > samples.size()) {
        throw std::invalid_argument("empirical_moment: k must lie in [1, number of samples]");
    }
    std::vector<double> radii(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        radii[s] = samples[s].radius;
    }
    const auto top = top_exceedances(radii, k);
    double total = 0.0;
    for (std::size_t s : top.selected) {
        total += f(samples[s].omega);
    }
    const auto m = static_cast<double>(samples[top.selected.front()].omega.size());
    return m * total / static_cast<double>(k);
}

double estimate_scaling(const Matrix& sample, std::size_t k, const MaxProjection& projection) {
    const auto involved = projection.involved();
    if (involved.back() >= sample.cols()) {
        throw std::invalid_argument("estimate_scaling: descriptor references a missing column");
    }
    if (k == 0) {
        throw std::invalid_argument("estimate_scaling: k must be >= 1");
    }
    // Works on squared radii directly: f is 2-homogeneous, so f(omega) = f(x) / R^2.
    std::vector<Ranked> pool;
    pool.reserve(sample.rows());
    for (std::size_t r = 0; r < sample.rows(); ++r) {
        const auto row = sample.row(r);
        double sq = 0.0;
        for (std::size_t c : involved) {
            sq += row[c] * row[c];
        }
        if (sq > 0.0) {
            pool.push_back({sq, r});
        }
    }
    if (pool.size() < k) {
        throw std::invalid_argument("estimate_scaling: only " + std::to_string(pool.size()) +
                                    " rows with nonzero " + projection.label() +
                                    " coordinates, fewer than k = " + std::to_string(k));
    }
    select_top(pool, k);
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k),
              [](const Ranked& a, const Ranked& b) { return a.row < b.row; });
    double total = 0.0;
    for (std::size_t m = 0; m < k; ++m) {
        total += projection.squared_max(sample.row(pool[m].row)) / pool[m].key;
    }
    return static_cast<double>(involved.size()) * total / static_cast<double>(k);
}

}  // namespace rmlm
