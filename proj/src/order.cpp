#include "rmlm/order.hpp"

#include "rmlm/parallel.hpp"
#include "rmlm/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmlm {

namespace {

std::vector<std::size_t> unordered_nodes(std::size_t d, std::span<const std::size_t> ordered) {
    std::vector<bool> in_order(d, false);
    for (std::size_t v : ordered) {
        in_order[v] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t v = 0; v < d; ++v) {
        if (!in_order[v]) {
            rest.push_back(v);
        }
    }
    return rest;
}

}  // namespace

DeltaMatrix delta_matrix(const ScalingSource& source, std::span<const std::size_t> ordered,
                         double a) {
    if (!(a > 1.0)) {
        throw std::invalid_argument("delta_matrix: a must exceed 1");
    }
    const std::size_t d = source.dimension();
    const auto rest = unordered_nodes(d, ordered);
    if (rest.empty()) {
        throw std::invalid_argument("delta_matrix: every node is already ordered");
    }
    const std::vector<std::size_t> scaled_set(ordered.begin(), ordered.end());
    const double benchmark = a * a - 1.0;

    // s(M_{j,O}) once per column.
    std::vector<double> column_scaling(d, 0.0);
    parallel_for(rest.size(), [&](std::size_t c) {
        std::vector<std::size_t> nodes = scaled_set;
        nodes.push_back(rest[c]);
        column_scaling[rest[c]] = source.squared_scaling(MaxProjection::set(std::move(nodes)));
    });

    DeltaMatrix out{Matrix(d, d, DeltaMatrix::sentinel())};
    const std::size_t m = rest.size();
    parallel_for(m * m, [&](std::size_t idx) {
        const std::size_t i = rest[idx / m];
        const std::size_t j = rest[idx % m];
        if (i == j) {
            return;
        }
        const double scaled = source.squared_scaling(MaxProjection::triple(i, j, scaled_set, a));
        const double plain = source.squared_scaling(MaxProjection::triple(i, j, scaled_set, 1.0));
        out.values(i, j) = scaled - plain - benchmark * column_scaling[j];
    });
    return out;
}

StepSelection select_step(const DeltaMatrix& delta, std::span<const std::size_t> ordered,
                          double epsilon) {
    const std::size_t d = delta.values.rows();
    const auto rest = unordered_nodes(d, ordered);
    StepSelection out;
    out.delta.assign(d, std::nan(""));
    if (rest.empty()) {
        return out;
    }
    if (rest.size() == 1) {
        out.delta[rest.front()] = 0.0;
        out.nodes = rest;
        out.tolerance = kSelectionSlack;
        return out;
    }

    std::vector<double> colmin(d, DeltaMatrix::sentinel());
    for (std::size_t j : rest) {
        for (std::size_t i : rest) {
            if (i != j) {
                colmin[j] = std::min(colmin[j], delta.values(i, j));
            }
        }
    }
    double best = -DeltaMatrix::sentinel();
    for (std::size_t j : rest) {
        best = std::max(best, colmin[j]);
    }
    for (std::size_t j : rest) {
        out.delta[j] = colmin[j] - best;
    }
    out.tolerance = epsilon * std::abs(best) + kSelectionSlack;
    for (std::size_t j : rest) {
        if (std::abs(out.delta[j]) <= out.tolerance) {
            out.nodes.push_back(j);
        }
    }
    if (out.nodes.empty()) {
        out.fallback = true;
        std::size_t pick = rest.front();
        for (std::size_t j : rest) {
            if (out.delta[j] > out.delta[pick] || std::isnan(out.delta[pick])) {
                pick = j;
            }
        }
        out.nodes.push_back(pick);
    }
    std::stable_sort(out.nodes.begin(), out.nodes.end(), [&](std::size_t x, std::size_t y) {
        return out.delta[x] > out.delta[y];
    });
    return out;
}

std::size_t OrderResult::step_of(std::size_t node) const {
    for (std::size_t s = 0; s < steps.size(); ++s) {
        if (std::find(steps[s].begin(), steps[s].end(), node) != steps[s].end()) {
            return s;
        }
    }
    throw std::out_of_range("OrderResult::step_of: node not ordered");
}

std::vector<std::size_t> OrderResult::positions() const {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        pos[order[p]] = p;
    }
    return pos;
}

OrderResult causal_order(const ScalingSource& source, double a, double epsilon,
                         const IterationObserver& observer) {
    if (!(a > 1.0)) {
        throw std::invalid_argument("causal_order: a must exceed 1");
    }
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("causal_order: epsilon must be nonnegative");
    }
    const std::size_t d = source.dimension();
    OrderResult result;
    result.params = {a, epsilon, source.exceedances()};
    std::vector<std::size_t> ordered;
    while (ordered.size() < d) {
        const auto delta = delta_matrix(source, ordered, a);
        auto selection = select_step(delta, ordered, epsilon);
        if (observer) {
            observer({ordered, selection});
        }
        std::vector<std::size_t> next = selection.nodes;
        next.insert(next.end(), ordered.begin(), ordered.end());
        ordered = std::move(next);
        result.steps.push_back(std::move(selection.nodes));
    }
    result.order = std::move(ordered);
    return result;
}

bool respects_ancestry(const OrderResult& result, const Matrix& a) {
    const auto pos = result.positions();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (reaches(a, j, i) && !(pos[i] < pos[j])) {
                return false;
            }
        }
    }
    return true;
}

bool steps_are_antichains(const OrderResult& result, const Matrix& a) {
    for (const auto& step : result.steps) {
        for (std::size_t x : step) {
            for (std::size_t y : step) {
                if (reaches(a, x, y)) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace rmlm
