#include "rmlm/coefficients.hpp"

#include "rmlm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmlm {

std::size_t triangular_index(std::size_t d, std::size_t i, std::size_t j) {
    return j + i * d - i * (i + 1) / 2;
}

Matrix SquaredCoefVector::to_matrix() const {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            m(i, j) = at(i, j);
        }
    }
    return m;
}

SquaredCoefVector squared_upper(const Matrix& a) {
    const std::size_t d = a.rows();
    SquaredCoefVector out{d, std::vector<double>(triangular_size(d))};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            out.values[triangular_index(d, i, j)] = a(i, j) * a(i, j);
        }
    }
    return out;
}

int TransformMatrix::at(std::size_t row, std::size_t col) const {
    for (const auto& [c, v] : rows.at(row)) {
        if (c == col) {
            return v;
        }
    }
    return 0;
}

Matrix TransformMatrix::dense() const {
    Matrix m(size(), size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [c, v] : rows[r]) {
            m(r, c) = v;
        }
    }
    return m;
}

ScalingVector build_scaling_vector(const ScalingSource& source,
                                   std::span<const std::size_t> ordering) {
    const std::size_t d = source.dimension();
    if (ordering.size() != d) {
        throw std::invalid_argument("build_scaling_vector: ordering must cover every node");
    }
    ScalingVector out{d, std::vector<double>(triangular_size(d))};
    parallel_for(d, [&](std::size_t i) {
        for (std::size_t j = i; j < d; ++j) {
            std::vector<std::size_t> nodes{ordering[i]};
            if (j + 1 < d) {
                for (std::size_t k = j + 1; k < d; ++k) {
                    nodes.push_back(ordering[k]);
                }
            }
            out.values[triangular_index(d, i, j)] =
                source.squared_scaling(MaxProjection::set(std::move(nodes)));
        }
    });
    return out;
}

ScalingVector build_scaling_vector(const ScalingSource& source, const OrderResult& order) {
    return build_scaling_vector(source, order.order);
}

SquaredCoefVector recover_squared_recursive(const ScalingVector& s) {
    const std::size_t d = s.d;
    if (s.values.size() != triangular_size(d)) {
        throw std::invalid_argument("recover_squared_recursive: malformed scaling vector");
    }
    auto S = [&](std::size_t i, std::size_t j) { return s.values[triangular_index(d, i, j)]; };
    SquaredCoefVector out{d, std::vector<double>(triangular_size(d), 0.0)};
    auto A = [&](std::size_t i, std::size_t j) -> double& {
        return out.values[triangular_index(d, i, j)];
    };
    if (d == 0) {
        return out;
    }
    for (std::size_t i = 0; i + 2 < d; ++i) {
        A(i, i) = S(i, i) - S(i + 1, i + 1);
        double row_sum = A(i, i);
        for (std::size_t j = i + 1; j + 1 < d; ++j) {
            A(i, j) = S(i, j) - S(j + 1, j + 1) - row_sum;
            row_sum += A(i, j);
        }
        A(i, d - 1) = S(i, d - 1) - row_sum;
    }
    if (d >= 2) {
        A(d - 2, d - 2) = S(d - 2, d - 2) - S(d - 1, d - 1);
        A(d - 2, d - 1) = S(d - 2, d - 1) - A(d - 2, d - 2);
    }
    A(d - 1, d - 1) = S(d - 1, d - 1);
    return out;
}

TransformMatrix build_transform(std::size_t d) {
    if (d == 0) {
        throw std::invalid_argument("build_transform: d must be positive");
    }
    TransformMatrix t{d, std::vector<std::vector<std::pair<std::size_t, int>>>(triangular_size(d))};
    auto idx = [d](std::size_t i, std::size_t j) { return triangular_index(d, i, j); };
    auto put = [&](std::size_t row, std::size_t col, int v) { t.rows[row].emplace_back(col, v); };
    const std::size_t last = d - 1;
    for (std::size_t i = 0; i < d; ++i) {
        // Diagonal.
        put(idx(i, i), idx(i, i), 1);
        if (i < last) {
            put(idx(i, i), idx(i + 1, i + 1), -1);
        }
        // Inner entries i < j < d-1.
        for (std::size_t j = i + 1; j < last; ++j) {
            const std::size_t r = idx(i, j);
            put(r, idx(i, j), 1);
            put(r, idx(j + 1, j + 1), -1);
            put(r, idx(i, j - 1), -1);
            put(r, idx(j, j), 1);
        }
        // Last column.
        if (i < last) {
            const std::size_t r = idx(i, last);
            put(r, idx(i, last), 1);
            put(r, idx(i, last - 1), -1);
            put(r, idx(last, last), 1);
        }
    }
    for (auto& row : t.rows) {
        std::sort(row.begin(), row.end());
    }
    return t;
}

SquaredCoefVector recover_squared_linear(const ScalingVector& s, const TransformMatrix& t) {
    if (s.d != t.d || s.values.size() != t.size()) {
        throw std::invalid_argument("recover_squared_linear: dimension mismatch");
    }
    SquaredCoefVector out{s.d, std::vector<double>(t.size(), 0.0)};
    for (std::size_t r = 0; r < t.size(); ++r) {
        double acc = 0.0;
        for (const auto& [c, v] : t.rows[r]) {
            acc += v * s.values[c];
        }
        out.values[r] = acc;
    }
    return out;
}

MaxLinearMatrix postprocess(const SquaredCoefVector& squared, const OrderResult& order,
                            PostprocessReport* report) {
    const std::size_t d = squared.d;
    if (order.order.size() != d || squared.values.size() != triangular_size(d)) {
        throw std::invalid_argument("postprocess: order and coefficient vector disagree");
    }
    std::vector<std::size_t> step(d);
    for (std::size_t s = 0; s < order.steps.size(); ++s) {
        for (std::size_t v : order.steps[s]) {
            step[v] = s;
        }
    }
    PostprocessReport local;
    Matrix relabelled(d, d);
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = p; q < d; ++q) {
            double v = squared.at(p, q);
            if (q != p && step[order.order[p]] == step[order.order[q]]) {
                v = 0.0;
            }
            if (v < -kSquaredFloor) {
                ++local.clamped_entries;
            }
            if (v <= kSquaredFloor) {
                v = 0.0;
            }
            relabelled(p, q) = std::sqrt(v);
        }
    }
    for (std::size_t p = 0; p < d; ++p) {
        auto row = relabelled.row(p);
        double sq = 0.0;
        for (double v : row) {
            sq += v * v;
        }
        if (!(sq > 0.0)) {
            local.degenerate_rows.push_back(order.order[p]);
            relabelled(p, p) = 1.0;
            continue;
        }
        const double norm = std::sqrt(sq);
        for (double& v : row) {
            v /= norm;
        }
        if (!(relabelled(p, p) > 0.0)) {
            local.zero_diagonal_rows.push_back(order.order[p]);
        }
    }
    MaxLinearMatrix out{Matrix(d, d), true};
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = 0; q < d; ++q) {
            out.A(order.order[p], order.order[q]) = relabelled(p, q);
        }
    }
    if (report) {
        *report = std::move(local);
    }
    return out;
}

Dag estimated_dag(const MaxLinearMatrix& a, double delta) { return minimum_dag(a, delta); }

}  // namespace rmlm
