#include "rmlm/scaling_source.hpp"

#include "rmlm/tail.hpp"

#include <stdexcept>

namespace rmlm {

EmpiricalScalings::EmpiricalScalings(const Matrix& sample, std::size_t k) : sample_(sample), k_(k) {
    if (k == 0 || k > sample.rows()) {
        throw std::invalid_argument("EmpiricalScalings: k must lie in [1, n]");
    }
}

double EmpiricalScalings::squared_scaling(const MaxProjection& projection) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(projection); it != cache_.end()) {
            return it->second;
        }
    }
    const double value = estimate_scaling(sample_, k_, projection);
    std::lock_guard lock(mutex_);
    cache_.emplace(projection, value);
    return value;
}

}  // namespace rmlm
