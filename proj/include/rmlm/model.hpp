#pragma once

// Generative recursive max-linear model X = A x_max Z with standard Fréchet(2)
// innovations, plus the closed-form scalings of its max-projections.

#include "rmlm/matrix.hpp"
#include "rmlm/projection.hpp"
#include "rmlm/tropical.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace rmlm {

/// Default multiplier a for scaled max-projections.
inline constexpr double kDefaultScale = 1.3;

class RmlmModel {
public:
    /// Throws std::invalid_argument unless A is standardised (unit rows, dominant
    /// column diagonal) and alpha == 2.
    explicit RmlmModel(MaxLinearMatrix a, double alpha = 2.0, std::uint64_t seed = 0);

    /// Path weights of `spec`, standardised.
    static RmlmModel from_spec(const DagSpec& spec, std::uint64_t seed = 0);

    const Matrix& A() const noexcept { return a_.A; }
    const MaxLinearMatrix& coefficients() const noexcept { return a_; }
    std::size_t size() const noexcept { return a_.size(); }
    double alpha() const noexcept { return 2.0; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    MaxLinearMatrix a_;
    std::uint64_t seed_;
};

struct SimulatedSample {
    Matrix X;  ///< n x d observations
    Matrix Z;  ///< n x d innovations used to build X
};

/// n rows of A x_max Z with i.i.d. standard Fréchet(2) innovations Z = (-ln U)^(-1/2).
/// Rows are generated in fixed-size blocks, each from its own seed-derived stream,
/// so the output depends only on (A, n, seed).
SimulatedSample simulate_with_innovations(const Matrix& a, std::size_t n, std::uint64_t seed);

/// Same as above for an arbitrary nonnegative A (no standardisation required).
Matrix simulate_max_linear(const Matrix& a, std::size_t n, std::uint64_t seed);

/// Observations of the model using its own seed.
Matrix simulate(const RmlmModel& model, std::size_t n);

struct AngularAtom {
    std::vector<double> direction;  ///< a_k / ||a_k||
    double weight = 0.0;            ///< ||a_k||^2
    std::size_t column = 0;
};

/// Atoms of the discrete angular measure: one per nonzero column of A.
std::vector<AngularAtom> angular_atoms(const Matrix& a);
std::vector<AngularAtom> angular_atoms(const RmlmModel& model);

/// Integral of f against the discrete angular measure, sum_k weight_k f(atom_k).
double angular_integral(std::span<const AngularAtom> atoms,
                        const std::function<double(std::span<const double>)>& f);

/// Squared scaling of a max-projection from the closed forms for standardised A:
/// set I != V: sum_l max_{i in I} a_il^2; I = V: sum_l a_ll^2;
/// triple: sum_{l in I+j} a^2 a_ll^2 + sum_{l outside} (a_il^2 v max_{k in I+j} a^2 a_kl^2).
double exact_scaling(const RmlmModel& model, const MaxProjection& projection);

/// Ancestors of j (positive off-diagonal entries in row j).
std::vector<std::size_t> ancestors(const Matrix& a, std::size_t j);

/// No node of `set` has an ancestor outside `set`.
bool is_ancestrally_closed(const Matrix& a, std::span<const std::size_t> set);

struct GapPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the scaled-minus-unscaled identity
///   sigma^2(M_{i,aj,aI}) - sigma^2(M_{i,j,I})
///     = (a^2-1) sum_{l in I+j} a_ll^2 + sum_{l in I^c ∩ an(j)} (a_il^2 v a^2 a_jl^2 - a_il^2 v a_jl^2).
/// Throws std::invalid_argument if I is not ancestrally closed, i or j lies in I,
/// i == j, or a <= 1.
GapPair gap_identity(const RmlmModel& model, std::size_t i, std::size_t j,
                   std::span<const std::size_t> set, double a);

struct RandomModelOptions {
    double edge_probability = 0.4;
    double min_weight = 0.2;
    double max_weight = 1.0;
};

/// Random DAG with edges j -> i only for j > i (well-ordered labelling) and
/// uniform weights in [min_weight, max_weight], diagonal included.
DagSpec random_well_ordered_spec(std::size_t d, std::mt19937_64& rng,
                                 const RandomModelOptions& options = {});

}  // namespace rmlm
