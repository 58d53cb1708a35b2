#pragma once

// Brute-force reference computations used only by the tests.

#include "rmlm/matrix.hpp"
#include "rmlm/model.hpp"
#include "rmlm/projection.hpp"
#include "rmlm/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using rmlm::Dag;
using rmlm::Edge;
using rmlm::Matrix;

/// Largest path weight j ~> i by enumerating every directed path.
inline Matrix path_weights(std::size_t d, const std::vector<Edge>& edges, const Matrix& c) {
    std::vector<std::vector<std::size_t>> children(d);
    for (const auto& e : edges) {
        children[e.from].push_back(e.to);
    }
    Matrix a(d, d);
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t start,
                                                                    std::size_t at, double w) {
        a(at, start) = std::max(a(at, start), w);
        for (std::size_t next : children[at]) {
            walk(start, next, w * c(next, at));
        }
    };
    for (std::size_t j = 0; j < d; ++j) {
        walk(j, j, c(j, j));
    }
    return a;
}

/// Ancestor relation from the edge list: anc[i][j] is true when j ~> i, j != i.
inline std::vector<std::vector<bool>> ancestry(std::size_t d, const std::vector<Edge>& edges) {
    std::vector<std::vector<bool>> anc(d, std::vector<bool>(d, false));
    for (const auto& e : edges) {
        anc[e.to][e.from] = true;
    }
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (anc[i][k] && anc[k][j]) {
                    anc[i][j] = true;
                }
            }
        }
    }
    return anc;
}

inline std::vector<std::vector<bool>> ancestry(const Matrix& a) {
    const std::size_t d = a.rows();
    std::vector<std::vector<bool>> anc(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            anc[i][j] = i != j && a(i, j) > 0.0;
        }
    }
    return anc;
}

/// Every ancestor sits to the right of its descendants in `order`.
inline bool valid_order(const std::vector<std::size_t>& order,
                        const std::vector<std::vector<bool>>& anc) {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        pos[order[p]] = p;
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (anc[i][j] && pos[j] < pos[i]) {
                return false;
            }
        }
    }
    return true;
}

/// Integral of a 2-homogeneous f against the discrete angular measure, evaluated
/// directly on the columns of A.
inline double column_integral(const Matrix& a, const rmlm::MaxProjection& p) {
    double total = 0.0;
    std::vector<double> col(a.rows());
    for (std::size_t k = 0; k < a.cols(); ++k) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            col[i] = a(i, k);
        }
        total += p.squared_max(col);
    }
    return total;
}

/// Rank transform by quadratic counting.
inline std::vector<double> frechet_column(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    std::vector<double> out;
    for (double v : x) {
        double count = 0;
        for (double w : x) {
            count += w <= v ? 1 : 0;
        }
        out.push_back(std::pow(-std::log(count / (n + 1.0)), -0.5));
    }
    return out;
}

/// m/k * sum of f over the k largest radii, full sort, earlier row wins ties.
inline double sorted_moment(const Matrix& x, const std::vector<std::size_t>& coords,
                            std::size_t k, const std::function<double(const std::vector<double>&)>& f) {
    struct Row {
        double r;
        std::size_t idx;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0;
        for (std::size_t c : coords) {
            s += x(i, c) * x(i, c);
        }
        if (s > 0) {
            rows.push_back({std::sqrt(s), i});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& p, const Row& q) {
        return p.r != q.r ? p.r > q.r : p.idx < q.idx;
    });
    double total = 0;
    for (std::size_t t = 0; t < k; ++t) {
        std::vector<double> w;
        for (std::size_t c : coords) {
            w.push_back(x(rows[t].idx, c) / rows[t].r);
        }
        total += f(w);
    }
    return static_cast<double>(coords.size()) * total / static_cast<double>(k);
}

/// SHD from edge sets: symmetric difference, with each reversed pair counted once.
inline std::size_t shd(const Dag& g1, const Dag& g2) {
    std::set<Edge> e1(g1.edges().begin(), g1.edges().end());
    std::set<Edge> e2(g2.edges().begin(), g2.edges().end());
    std::size_t only = 0;
    std::size_t reversed = 0;
    for (const auto& e : e1) {
        if (!e2.count(e)) {
            ++only;
            if (e2.count({e.to, e.from}) && !e1.count({e.to, e.from})) {
                ++reversed;
            }
        }
    }
    for (const auto& e : e2) {
        if (!e1.count(e)) {
            ++only;
        }
    }
    return only - reversed;
}

/// Random DAG on d nodes with edges only from higher to lower index.
inline Dag random_dag(std::size_t d, double p, std::mt19937_64& rng, bool shuffle = true) {
    std::bernoulli_distribution coin(p);
    std::vector<std::size_t> label(d);
    std::iota(label.begin(), label.end(), std::size_t{0});
    if (shuffle) {
        std::shuffle(label.begin(), label.end(), rng);
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (coin(rng)) {
                edges.push_back({label[j], label[i]});
            }
        }
    }
    return Dag(d, edges);
}

}  // namespace oracle
