#include "rmlm/projection.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rmlm {

namespace {

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

MaxProjection MaxProjection::node(std::size_t i) { return set({i}); }

MaxProjection MaxProjection::set(std::vector<std::size_t> nodes) {
    if (nodes.empty()) {
        throw std::invalid_argument("MaxProjection: node set must be nonempty");
    }
    MaxProjection p;
    p.kind_ = Kind::Set;
    p.nodes_ = sorted_unique(std::move(nodes));
    return p;
}

MaxProjection MaxProjection::triple(std::size_t i, std::size_t j, std::vector<std::size_t> scaled,
                                    double a) {
    if (i == j) {
        throw std::invalid_argument("MaxProjection: triple needs i != j");
    }
    if (!(a >= 1.0)) {
        throw std::invalid_argument("MaxProjection: scale a must be >= 1");
    }
    scaled = sorted_unique(std::move(scaled));
    if (std::binary_search(scaled.begin(), scaled.end(), i) ||
        std::binary_search(scaled.begin(), scaled.end(), j)) {
        throw std::invalid_argument("MaxProjection: i and j must lie outside the scaled set");
    }
    MaxProjection p;
    p.kind_ = Kind::Triple;
    p.i_ = i;
    p.j_ = j;
    p.nodes_ = std::move(scaled);
    p.scale_ = a;
    return p;
}

std::vector<std::size_t> MaxProjection::involved() const {
    if (kind_ == Kind::Set) {
        return nodes_;
    }
    std::vector<std::size_t> out = nodes_;
    out.push_back(i_);
    out.push_back(j_);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t MaxProjection::max_index() const {
    const auto inv = involved();
    return inv.back();
}

double MaxProjection::squared_max(std::span<const double> x) const {
    double scaled = 0.0;
    for (std::size_t k : nodes_) {
        scaled = std::max(scaled, x[k] * x[k]);
    }
    if (kind_ == Kind::Set) {
        return scaled;
    }
    scaled = std::max(scaled, x[j_] * x[j_]);
    return std::max(x[i_] * x[i_], scale_ * scale_ * scaled);
}

std::string MaxProjection::label() const {
    std::ostringstream os;
    auto list = [&os](const std::vector<std::size_t>& v) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            os << (k ? "," : "") << v[k] + 1;
        }
    };
    os << "M{";
    if (kind_ == Kind::Set) {
        list(nodes_);
    } else {
        os << i_ + 1 << ", " << scale_ << "*" << j_ + 1;
        if (!nodes_.empty()) {
            os << ", " << scale_ << "*{";
            list(nodes_);
            os << "}";
        }
    }
    os << "}";
    return os.str();
}

}  // namespace rmlm
