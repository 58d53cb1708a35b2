#include "rmlm/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmlm {

std::size_t shd(const Dag& g1, const Dag& g2) {
    if (g1.size() != g2.size()) {
        throw std::invalid_argument("shd: graphs have different node counts");
    }
    const std::size_t d = g1.size();
    std::size_t distance = 0;
    for (std::size_t u = 0; u < d; ++u) {
        for (std::size_t v = u + 1; v < d; ++v) {
            const bool f1 = g1.has_edge(u, v);
            const bool b1 = g1.has_edge(v, u);
            const bool f2 = g2.has_edge(u, v);
            const bool b2 = g2.has_edge(v, u);
            if (f1 != f2 || b1 != b2) {
                ++distance;
            }
        }
    }
    return distance;
}

double nshd(const Dag& g1, const Dag& g2) {
    const std::size_t total = g1.edge_count() + g2.edge_count();
    if (total == 0) {
        return 0.0;
    }
    return static_cast<double>(shd(g1, g2)) / static_cast<double>(total);
}

CentroidResult centroid(const DagEnsemble& ensemble) {
    const auto& members = ensemble.members;
    if (members.empty()) {
        throw std::invalid_argument("centroid: empty ensemble");
    }
    CentroidResult out;
    out.sums.assign(members.size(), 0.0);
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const double dist = nshd(members[a].dag, members[b].dag);
            out.sums[a] += dist;
            out.sums[b] += dist;
        }
    }
    for (std::size_t m = 1; m < members.size(); ++m) {
        const double best = out.sums[out.index];
        if (out.sums[m] < best || (out.sums[m] == best && members[m].r < members[out.index].r)) {
            out.index = m;
        }
    }
    out.r = members[out.index].r;
    return out;
}

std::vector<StabilityScore::EdgeCount> StabilityScore::edges() const {
    std::vector<EdgeCount> out;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (at(i, j) > 0) {
                out.push_back({{j, i}, at(i, j)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const EdgeCount& x, const EdgeCount& y) {
        return x.count != y.count ? x.count > y.count : x.edge < y.edge;
    });
    return out;
}

std::vector<std::vector<Edge>> StabilityScore::buckets() const {
    std::vector<std::vector<Edge>> out(members);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (at(i, j) > 0) {
                out[at(i, j) - 1].push_back({j, i});
            }
        }
    }
    for (auto& bucket : out) {
        std::sort(bucket.begin(), bucket.end());
    }
    return out;
}

StabilityScore stability(const DagEnsemble& ensemble) {
    if (ensemble.members.empty()) {
        throw std::invalid_argument("stability: empty ensemble");
    }
    const std::size_t d = ensemble.members.front().dag.size();
    StabilityScore out{d, ensemble.members.size(), std::vector<std::size_t>(d * d, 0)};
    for (const auto& member : ensemble.members) {
        if (member.dag.size() != d) {
            throw std::invalid_argument("stability: members have different node counts");
        }
        for (const auto& e : member.dag.edges()) {
            ++out.counts[e.to * d + e.from];
        }
    }
    return out;
}

}  // namespace rmlm
