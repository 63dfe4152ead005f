#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "entcalc/linalg.hpp"

namespace entcalc {

/// Bipartite pure state with unit-norm amplitudes in the lexicographic
/// product basis.
class PureState {
 public:
  PureState(std::vector<Complex> amplitudes, Dims dims);

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Dims dims() const { return dims_; }
  ComplexMatrix projector() const { return ComplexMatrix::outer(amplitudes_); }

 private:
  std::vector<Complex> amplitudes_;
  Dims dims_;
};

/// Validated bipartite density matrix: Hermitian, unit trace and positive
/// semidefinite within kStateTolerance. Construction throws
/// std::invalid_argument otherwise.
class DensityMatrix {
 public:
  static constexpr double kStateTolerance = 1e-10;

  DensityMatrix(ComplexMatrix matrix, Dims dims);
  explicit DensityMatrix(const PureState& psi);

  const ComplexMatrix& matrix() const { return matrix_; }
  Dims dims() const { return dims_; }
  std::size_t dim() const { return matrix_.dim(); }

  double purity() const;
  double min_eigenvalue() const;
  /// Reduced state of the factor that is kept after tracing out `traced`.
  DensityMatrix reduced(Subsystem traced) const;

  /// Convex combination w * a + (1 - w) * b.
  static DensityMatrix mix(double w, const DensityMatrix& a, const DensityMatrix& b);

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

/// Product-state Kronecker factorisation: rho_A (x) rho_B with dims (d_A, d_B).
DensityMatrix product_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

/// Angle coordinates for a 16-term mixture of two-qubit product pure states:
///
///   rho = sum_i p_i^2 |a_i><a_i| (x) |b_i><b_i|,
///   p_i = sin(phi_{i-1}) prod_{j >= i} cos(phi_j),  phi_0 = pi/2,
///   |a_i> = cos(alpha_i)|0> + sin(alpha_i) e^{i eta_i}|1>,
///   |b_i> = cos(beta_i)|0> + sin(beta_i) e^{i mu_i}|1>.
///
/// Flat ordering is phi(15), alpha(16), beta(16), eta(16), mu(16).
struct SeparableAngles {
  static constexpr std::size_t kTerms = 16;
  static constexpr std::size_t kMixing = kTerms - 1;
  static constexpr std::size_t kParameters = kMixing + 4 * kTerms;  // 79

  std::array<double, kMixing> phi{};
  std::array<double, kTerms> alpha{};
  std::array<double, kTerms> beta{};
  std::array<double, kTerms> eta{};
  std::array<double, kTerms> mu{};

  std::array<double, kParameters> flat() const;
  static SeparableAngles from_flat(std::span<const double> values);

  /// Mixture weights p_i^2; they sum to one by construction.
  std::array<double, kTerms> weights() const;
  std::array<Complex, 2> local_a(std::size_t term) const;
  std::array<Complex, 2> local_b(std::size_t term) const;

  friend bool operator==(const SeparableAngles&, const SeparableAngles&) = default;
};

/// Two-qubit density matrix encoded by the angle coordinates.
DensityMatrix realize(const SeparableAngles& angles);
/// Same as realize() without the invariant check.
ComplexMatrix realize_matrix(const SeparableAngles& angles);

/// One product pure-state term of a separable decomposition.
struct ProductTerm {
  double weight = 0.0;
  std::array<Complex, 2> a{};
  std::array<Complex, 2> b{};
};

/// Inverse of the angle encoding for at most 16 terms. Weights must be
/// non-negative and sum to one; local vectors are normalised and their global
/// phases dropped.
SeparableAngles encode_product_mixture(std::span<const ProductTerm> terms);

struct SchmidtDecomposition {
  /// Non-negative, descending; length min(d_A, d_B).
  std::vector<double> coefficients;
  /// Columns are the local Schmidt vectors for the leading coefficients.
  std::vector<std::vector<Complex>> basis_a;
  std::vector<std::vector<Complex>> basis_b;
};

SchmidtDecomposition schmidt(const PureState& psi);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

PureState bell_state(BellState which);

/// Weights on {Phi+, Phi-, Psi+, Psi-}.
struct BellDiagonal {
  std::array<double, 4> weights{};

  /// Throws std::invalid_argument unless the weights form a probability vector.
  explicit BellDiagonal(std::array<double, 4> w);
  DensityMatrix state() const;
  double max_weight() const;
};

/// Werner-type Bell-diagonal state with weight F on Phi+ and (1 - F)/3 on
/// each of the other Bell states.
DensityMatrix werner(double fidelity);

/// Seeded generator shared by the random constructors.
using Rng = std::mt19937_64;

/// SplitMix64 step; derives independent substream seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Haar-random unitary of the given dimension.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
std::vector<Complex> random_unit_vector(std::size_t dim, Rng& rng);

PureState random_pure(Dims dims, std::uint64_t seed);
/// Induced-measure mixed state of rank <= `rank`: partial trace of a random
/// pure state on the system plus a rank-dimensional environment.
DensityMatrix random_density(Dims dims, std::size_t rank, std::uint64_t seed);
std::pair<ComplexMatrix, ComplexMatrix> random_local_unitary(std::uint64_t seed);

/// (U_A (x) U_B) rho (U_A (x) U_B)^dagger
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub);

}  // namespace entcalc
