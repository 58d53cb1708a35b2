#pragma once

#include "rmlm/tropical.hpp"

#include <cstddef>
#include <vector>

namespace rmlm {

/// Structural Hamming distance: per unordered node pair, 1 if exactly one graph
/// has an edge there or both have it in opposite directions, else 0.
/// Throws std::invalid_argument on differing node counts.
std::size_t shd(const Dag& g1, const Dag& g2);

/// shd / (|E1| + |E2|); 0 when both graphs are empty.
double nshd(const Dag& g1, const Dag& g2);

struct EnsembleMember {
    Dag dag;
    std::size_t r = 0;  ///< exceedance count the member was estimated with
};

struct DagEnsemble {
    std::vector<EnsembleMember> members;
    double delta = 0.0;
};

struct CentroidResult {
    std::size_t index = 0;        ///< position in the ensemble
    std::size_t r = 0;
    std::vector<double> sums;     ///< sum of nshd to the other members, per member
};

/// Member with the smallest sum of nshd to all others; ties go to the smallest r.
/// Throws std::invalid_argument on an empty ensemble.
CentroidResult centroid(const DagEnsemble& ensemble);

struct StabilityScore {
    std::size_t d = 0;
    std::size_t members = 0;
    std::vector<std::size_t> counts;  ///< counts[i * d + j]: members containing j -> i

    std::size_t at(std::size_t i, std::size_t j) const { return counts[i * d + j]; }

    struct EdgeCount {
        Edge edge;
        std::size_t count = 0;
    };
    /// Edges present in at least one member, sorted by count descending then edge.
    std::vector<EdgeCount> edges() const;
    /// Edges grouped by count: bucket c - 1 holds the edges seen exactly c times.
    std::vector<std::vector<Edge>> buckets() const;
};

/// Throws std::invalid_argument on an empty ensemble or mixed node counts.
StabilityScore stability(const DagEnsemble& ensemble);

}  // namespace rmlm
