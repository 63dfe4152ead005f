#pragma once

#include <optional>
#include <span>
#include <vector>

#include "entcalc/states.hpp"

namespace entcalc {

/// Entropic quantity in natural-log units, possibly +infinity.
struct Nats {
  double value = 0.0;
  bool infinite = false;

  static Nats infinity() { return Nats{0.0, true}; }
  static Nats finite(double v) { return Nats{v, false}; }

  /// Value with +infinity mapped to std::numeric_limits<double>::infinity().
  double as_double() const;
  double bits() const;
};

/// Thresholds for deciding support(sigma) is not contained in support(rho).
/// Eigenvalues of rho are floored at log_clamp inside the logarithm.
struct SupportThresholds {
  double eigenvalue = 1e-10;
  double overlap = 1e-8;
  double log_clamp = kDefaultLogClamp;
};

/// S(sigma || rho) = tr sigma (ln sigma - ln rho).
Nats relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho,
                      SupportThresholds thresholds = {});

/// Unchecked matrix-level variant used on hot paths.
Nats relative_entropy(const ComplexMatrix& sigma, const ComplexMatrix& rho,
                      SupportThresholds thresholds = {});

/// tr(sigma ln max(rho, log_clamp)) given rho's spectrum. Empty when sigma
/// has weight above the overlap threshold on rho's numerical kernel.
std::optional<double> trace_sigma_log_rho(const ComplexMatrix& sigma,
                                          const Spectrum& rho_spectrum,
                                          SupportThresholds thresholds = {});

/// -sum lambda ln lambda over the eigenvalues of a Hermitian PSD matrix.
double entropy_of_matrix(const ComplexMatrix& m);

Nats von_neumann_entropy(const DensityMatrix& rho);

/// Evaluates tr|sqrt(sigma) sqrt(rho)| for a fixed sigma and many rho by
/// working on sigma's support only. Pure sigma reduces to sqrt(<psi|rho|psi>)
/// with no spurious square roots of rounding noise.
class FidelityEvaluator {
 public:
  explicit FidelityEvaluator(const ComplexMatrix& sigma);

  /// sqrt(F(sigma, rho))
  double root_fidelity(const ComplexMatrix& rho) const;
  /// W^dagger rho W, with W = V_s diag(sqrt(s)) over sigma's support.
  ComplexMatrix compressed(const ComplexMatrix& rho) const;
  /// Columns of W.
  const std::vector<std::vector<Complex>>& weighted_support() const { return support_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<Complex>> support_;
};

/// Uhlmann fidelity (tr |sqrt(sigma) sqrt(rho)|)^2.
double fidelity(const DensityMatrix& sigma, const DensityMatrix& rho);
/// 2 - 2 sqrt(F(sigma, rho)).
double bures_distance(const DensityMatrix& sigma, const DensityMatrix& rho);

/// S(rho_A) + S(rho_B) - S(rho_AB).
Nats mutual_information(const DensityMatrix& rho);

/// sum_i p_i ln(p_i / q_i); +infinity when q_i = 0 < p_i.
Nats classical_relative_entropy(std::span<const double> p, std::span<const double> q);

/// e^{-n S(sigma || rho)}; zero when the relative entropy is infinite.
double sanov_confusion_probability(const DensityMatrix& sigma, const DensityMatrix& rho,
                                   int n);

/// S(rho* || rho*_A (x) rho*_B).
Nats classical_correlations(const DensityMatrix& rho_star);

}  // namespace entcalc
