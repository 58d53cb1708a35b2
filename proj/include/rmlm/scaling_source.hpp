#pragma once

#include "rmlm/matrix.hpp"
#include "rmlm/model.hpp"
#include "rmlm/projection.hpp"

#include <cstddef>
#include <map>
#include <mutex>

namespace rmlm {

/// Where squared scalings of max-projections come from. Structure learning and
/// coefficient recovery run the same code against exact and empirical sources.
class ScalingSource {
public:
    virtual ~ScalingSource() = default;
    virtual std::size_t dimension() const = 0;
    virtual double squared_scaling(const MaxProjection& projection) const = 0;
    /// Exceedance count behind the estimates, 0 for exact sources.
    virtual std::size_t exceedances() const { return 0; }
};

/// Closed-form scalings of a known model.
class ExactScalings final : public ScalingSource {
public:
    explicit ExactScalings(const RmlmModel& model) : model_(model) {}
    std::size_t dimension() const override { return model_.size(); }
    double squared_scaling(const MaxProjection& projection) const override {
        return exact_scaling(model_, projection);
    }

private:
    const RmlmModel& model_;
};

/// Empirical scalings from a sample with standard Fréchet(2) margins, using the
/// k largest radii of the involved coordinates. Results are memoised per
/// descriptor; the cache is guarded so concurrent callers see identical values.
class EmpiricalScalings final : public ScalingSource {
public:
    /// Throws std::invalid_argument if k is 0 or exceeds the sample size.
    EmpiricalScalings(const Matrix& sample, std::size_t k);
    /// The sample is held by reference and must outlive the source.
    EmpiricalScalings(Matrix&&, std::size_t) = delete;

    std::size_t dimension() const override { return sample_.cols(); }
    double squared_scaling(const MaxProjection& projection) const override;
    std::size_t exceedances() const override { return k_; }

private:
    const Matrix& sample_;
    std::size_t k_;
    mutable std::map<MaxProjection, double> cache_;
    mutable std::mutex mutex_;
};

/// Multiplies every scaling of another source by a positive constant.
class RescaledScalings final : public ScalingSource {
public:
    RescaledScalings(const ScalingSource& base, double factor) : base_(base), factor_(factor) {}
    std::size_t dimension() const override { return base_.dimension(); }
    double squared_scaling(const MaxProjection& projection) const override {
        return factor_ * base_.squared_scaling(projection);
    }

private:
    const ScalingSource& base_;
    double factor_;
};

}  // namespace rmlm
