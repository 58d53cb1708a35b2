#include "rmlm/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace rmlm {

std::optional<std::vector<std::size_t>> topological_sort(std::size_t d,
                                                         std::span<const Edge> edges) {
    std::vector<std::size_t> indegree(d, 0);
    std::vector<std::vector<std::size_t>> children(d);
    for (const auto& e : edges) {
        children[e.from].push_back(e.to);
        ++indegree[e.to];
    }
    // Min-heap keeps the result deterministic: smallest ready node first.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < d; ++v) {
        if (indegree[v] == 0) {
            ready.push(v);
        }
    }
    std::vector<std::size_t> order;
    order.reserve(d);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (std::size_t c : children[v]) {
            if (--indegree[c] == 0) {
                ready.push(c);
            }
        }
    }
    if (order.size() != d) {
        return std::nullopt;
    }
    return order;
}

Dag::Dag(std::size_t d, std::vector<Edge> edges)
    : d_(d), edges_(std::move(edges)), adjacency_(d * d, 0) {
    for (const auto& e : edges_) {
        if (e.from >= d_ || e.to >= d_) {
            throw std::invalid_argument("Dag: edge endpoint out of range");
        }
        if (e.from == e.to) {
            throw std::invalid_argument("Dag: self loop on node " + std::to_string(e.from + 1));
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    if (!topological_sort(d_, edges_)) {
        throw std::invalid_argument("Dag: edge set contains a cycle");
    }
    for (const auto& e : edges_) {
        adjacency_[e.from * d_ + e.to] = 1;
    }
}

std::vector<std::size_t> Dag::parents(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < d_; ++k) {
        if (has_edge(k, node)) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<std::size_t> Dag::topological_order() const {
    return *topological_sort(d_, edges_);
}

bool Dag::is_subgraph_of(const Dag& other) const {
    if (other.d_ != d_) {
        return false;
    }
    return std::all_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return other.has_edge(e.from, e.to); });
}

DagSpec::DagSpec(std::size_t d, std::vector<Edge> edges, Matrix weights)
    : dag_(d, std::move(edges)), weights_(std::move(weights)) {
    if (weights_.rows() != d || weights_.cols() != d) {
        throw std::invalid_argument("DagSpec: weight matrix must be d x d");
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const double c = weights_(i, k);
            if (!std::isfinite(c) || c < 0.0) {
                throw std::invalid_argument("DagSpec: weights must be finite and nonnegative");
            }
            const bool should_be_positive = (i == k) || dag_.has_edge(k, i);
            if (should_be_positive != (c > 0.0)) {
                throw std::invalid_argument("DagSpec: weight pattern does not match edges at (" +
                                            std::to_string(i + 1) + "," + std::to_string(k + 1) +
                                            ")");
            }
        }
    }
}

Matrix max_times_multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("max_times_multiply: dimension mismatch");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double best = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                best = std::max(best, a(i, k) * b(k, j));
            }
            out(i, j) = best;
        }
    }
    return out;
}

std::vector<double> max_times_multiply(const Matrix& a, std::span<const double> z) {
    if (a.cols() != z.size()) {
        throw std::invalid_argument("max_times_multiply: dimension mismatch");
    }
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double best = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            best = std::max(best, a(i, k) * z[k]);
        }
        out[i] = best;
    }
    return out;
}

MaxLinearMatrix coefficients_from_weights(const DagSpec& spec) {
    const std::size_t d = spec.size();
    const Matrix& c = spec.weights();
    Matrix edge_weights(d, d);
    for (const auto& e : spec.dag().edges()) {
        edge_weights(e.to, e.from) = c(e.to, e.from);
    }
    // closure = I v B v B^2 v ... v B^(d-1); paths in a DAG have at most d-1 edges.
    Matrix closure = Matrix::identity(d);
    Matrix power = Matrix::identity(d);
    for (std::size_t step = 1; step < d; ++step) {
        power = max_times_multiply(edge_weights, power);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                closure(i, j) = std::max(closure(i, j), power(i, j));
            }
        }
    }
    MaxLinearMatrix out{Matrix(d, d), false};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out.A(i, j) = closure(i, j) * c(j, j);
        }
    }
    return out;
}

MaxLinearMatrix standardize(const Matrix& a) {
    MaxLinearMatrix out{a, true};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sq = 0.0;
        for (double v : a.row(i)) {
            sq += v * v;
        }
        if (!(sq > 0.0)) {
            throw std::invalid_argument("standardize: row " + std::to_string(i + 1) +
                                        " has no positive entry");
        }
        const double norm = std::sqrt(sq);
        for (double& v : out.A.row(i)) {
            v /= norm;
        }
    }
    return out;
}

MaxLinearMatrix standardize(const MaxLinearMatrix& a) { return standardize(a.A); }

bool satisfies_standardisation(const Matrix& a, double tol) {
    const std::size_t d = a.rows();
    for (std::size_t i = 0; i < d; ++i) {
        double sq = 0.0;
        for (double v : a.row(i)) {
            if (v < 0.0) {
                return false;
            }
            sq += v * v;
        }
        if (std::abs(std::sqrt(sq) - 1.0) > tol) {
            return false;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            if (i != j && !(a(j, j) > a(i, j) - tol)) {
                return false;
            }
        }
    }
    return true;
}

Dag reachability(const MaxLinearMatrix& a) {
    const std::size_t d = a.size();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (reaches(a.A, j, i)) {
                edges.push_back({j, i});
            }
        }
    }
    return Dag(d, std::move(edges));
}

Dag minimum_dag(const MaxLinearMatrix& a, double delta) {
    if (delta < 0.0) {
        throw std::invalid_argument("minimum_dag: delta must be nonnegative");
    }
    const Matrix& m = a.A;
    const std::size_t d = a.size();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!reaches(m, j, i)) {
                continue;
            }
            double bound = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                // k in de(j) ∩ pa(i); a zero diagonal only arises from a degenerate estimate.
                if (k == i || k == j || !reaches(m, j, k) || !reaches(m, k, i) || !(m(k, k) > 0.0)) {
                    continue;
                }
                bound = std::max(bound, m(i, k) * m(k, j) / m(k, k));
            }
            if (m(i, j) > bound + delta + kTieTolerance) {
                edges.push_back({j, i});
            }
        }
    }
    return Dag(d, std::move(edges));
}

}  // namespace rmlm
