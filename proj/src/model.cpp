#include "rmlm/model.hpp"

#include "rmlm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmlm {

namespace {

constexpr std::size_t kRowsPerBlock = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

double frechet2(std::mt19937_64& gen) { return 1.0 / std::sqrt(-std::log(open_uniform(gen))); }

bool contains(std::span<const std::size_t> set, std::size_t v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

}  // namespace

RmlmModel::RmlmModel(MaxLinearMatrix a, double alpha, std::uint64_t seed)
    : a_(std::move(a)), seed_(seed) {
    if (alpha != 2.0) {
        throw std::invalid_argument("RmlmModel: only tail index alpha = 2 is supported");
    }
    if (a_.A.rows() != a_.A.cols() || a_.A.rows() == 0) {
        throw std::invalid_argument("RmlmModel: coefficient matrix must be square and nonempty");
    }
    if (!satisfies_standardisation(a_.A, 1e-9)) {
        throw std::invalid_argument("RmlmModel: coefficient matrix is not standardised");
    }
    a_.standardised = true;
}

RmlmModel RmlmModel::from_spec(const DagSpec& spec, std::uint64_t seed) {
    return RmlmModel(standardize(coefficients_from_weights(spec)), 2.0, seed);
}

SimulatedSample simulate_with_innovations(const Matrix& a, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("simulate: n must be >= 1");
    }
    const std::size_t d = a.rows();
    SimulatedSample out{Matrix(n, d), Matrix(n, a.cols())};
    const std::size_t blocks = (n + kRowsPerBlock - 1) / kRowsPerBlock;
    parallel_for(blocks, [&](std::size_t b) {
        std::mt19937_64 gen(splitmix64(seed ^ splitmix64(b)));
        const std::size_t end = std::min(n, (b + 1) * kRowsPerBlock);
        for (std::size_t r = b * kRowsPerBlock; r < end; ++r) {
            auto z = out.Z.row(r);
            for (double& v : z) {
                v = frechet2(gen);
            }
            auto x = out.X.row(r);
            for (std::size_t i = 0; i < d; ++i) {
                double best = 0.0;
                for (std::size_t k = 0; k < z.size(); ++k) {
                    best = std::max(best, a(i, k) * z[k]);
                }
                x[i] = best;
            }
        }
    });
    return out;
}

Matrix simulate_max_linear(const Matrix& a, std::size_t n, std::uint64_t seed) {
    return simulate_with_innovations(a, n, seed).X;
}

Matrix simulate(const RmlmModel& model, std::size_t n) {
    return simulate_max_linear(model.A(), n, model.seed());
}

std::vector<AngularAtom> angular_atoms(const Matrix& a) {
    std::vector<AngularAtom> atoms;
    for (std::size_t k = 0; k < a.cols(); ++k) {
        double sq = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            sq += a(i, k) * a(i, k);
        }
        if (!(sq > 0.0)) {
            continue;
        }
        const double norm = std::sqrt(sq);
        AngularAtom atom{std::vector<double>(a.rows()), sq, k};
        for (std::size_t i = 0; i < a.rows(); ++i) {
            atom.direction[i] = a(i, k) / norm;
        }
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

std::vector<AngularAtom> angular_atoms(const RmlmModel& model) { return angular_atoms(model.A()); }

double angular_integral(std::span<const AngularAtom> atoms,
                        const std::function<double(std::span<const double>)>& f) {
    double total = 0.0;
    for (const auto& atom : atoms) {
        total += atom.weight * f(atom.direction);
    }
    return total;
}

double exact_scaling(const RmlmModel& model, const MaxProjection& projection) {
    const Matrix& a = model.A();
    const std::size_t d = model.size();
    if (projection.max_index() >= d) {
        throw std::invalid_argument("exact_scaling: descriptor references a node outside the model");
    }
    const auto& nodes = projection.nodes();
    double total = 0.0;
    if (projection.kind() == MaxProjection::Kind::Set) {
        if (nodes.size() == d) {
            for (std::size_t l = 0; l < d; ++l) {
                total += a(l, l) * a(l, l);
            }
            return total;
        }
        for (std::size_t l = 0; l < d; ++l) {
            double best = 0.0;
            for (std::size_t i : nodes) {
                best = std::max(best, a(i, l) * a(i, l));
            }
            total += best;
        }
        return total;
    }

    const double a2 = projection.scale() * projection.scale();
    std::vector<std::size_t> scaled = nodes;
    scaled.push_back(projection.j());
    const std::size_t i = projection.i();
    for (std::size_t l = 0; l < d; ++l) {
        if (contains(scaled, l)) {
            total += a2 * a(l, l) * a(l, l);
            continue;
        }
        double best = a(i, l) * a(i, l);
        for (std::size_t k : scaled) {
            best = std::max(best, a2 * a(k, l) * a(k, l));
        }
        total += best;
    }
    return total;
}

std::vector<std::size_t> ancestors(const Matrix& a, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < a.cols(); ++l) {
        if (reaches(a, l, j)) {
            out.push_back(l);
        }
    }
    return out;
}

bool is_ancestrally_closed(const Matrix& a, std::span<const std::size_t> set) {
    for (std::size_t k : set) {
        for (std::size_t l : ancestors(a, k)) {
            if (!contains(set, l)) {
                return false;
            }
        }
    }
    return true;
}

GapPair gap_identity(const RmlmModel& model, std::size_t i, std::size_t j,
                   std::span<const std::size_t> set, double a) {
    const Matrix& m = model.A();
    const std::size_t d = model.size();
    if (i >= d || j >= d || i == j || contains(set, i) || contains(set, j)) {
        throw std::invalid_argument("gap_identity: need distinct i, j outside I");
    }
    if (!(a > 1.0)) {
        throw std::invalid_argument("gap_identity: a must exceed 1");
    }
    if (!is_ancestrally_closed(m, set)) {
        throw std::invalid_argument("gap_identity: I must contain all ancestors of its nodes");
    }
    std::vector<std::size_t> scaled(set.begin(), set.end());
    GapPair gap;
    gap.lhs = exact_scaling(model, MaxProjection::triple(i, j, scaled, a)) -
              exact_scaling(model, MaxProjection::triple(i, j, scaled, 1.0));

    const double a2 = a * a;
    double diagonal = m(j, j) * m(j, j);
    for (std::size_t l : set) {
        diagonal += m(l, l) * m(l, l);
    }
    double tail = 0.0;
    for (std::size_t l : ancestors(m, j)) {
        if (contains(set, l)) {
            continue;
        }
        const double ail = m(i, l) * m(i, l);
        const double ajl = m(j, l) * m(j, l);
        tail += std::max(ail, a2 * ajl) - std::max(ail, ajl);
    }
    gap.rhs = (a2 - 1.0) * diagonal + tail;
    return gap;
}

DagSpec random_well_ordered_spec(std::size_t d, std::mt19937_64& rng,
                                 const RandomModelOptions& options) {
    std::uniform_real_distribution<double> weight(options.min_weight, options.max_weight);
    std::bernoulli_distribution coin(options.edge_probability);
    Matrix c(d, d);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i) {
        c(i, i) = weight(rng);
        for (std::size_t j = i + 1; j < d; ++j) {
            if (coin(rng)) {
                edges.push_back({j, i});
                c(i, j) = weight(rng);
            }
        }
    }
    return DagSpec(d, std::move(edges), std::move(c));
}

}  // namespace rmlm
