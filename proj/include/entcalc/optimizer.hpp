#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entcalc/measures.hpp"
#include "entcalc/states.hpp"

namespace entcalc {

enum class Functional { RelativeEntropy, Bures };

std::string to_string(Functional f);
Functional functional_from_string(const std::string& name);

struct OptimizerConfig {
  Functional functional = Functional::RelativeEntropy;
  int max_iterations = 20000;
  double gradient_tolerance = 1e-6;
  /// Stop when one accepted step lowers the objective by less than this
  /// fraction of its value.
  double relative_change_tolerance = 1e-10;
  double initial_step = 1.0;
  double step_shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int restarts = 5;
  std::uint64_t seed = 1;
  /// Central-difference step, used for the Bures functional.
  double finite_difference_step = 1e-6;
  int certificate_samples = 64;
  double log_clamp = kDefaultLogClamp;
  /// Rounds in which a failed certificate's witness product state is added
  /// to the best decomposition before descending again.
  int polish_rounds = 4;
  /// Worker threads for restarts; 0 defers to ENTCALC_THREADS.
  int threads = 0;

  /// Throws std::invalid_argument on non-positive tolerances or counts.
  void validate() const;
};

inline constexpr double kCertificateTolerance = 1e-6;
/// Objective value standing in for an infinite relative entropy.
inline constexpr double kInfinitePenalty = 1e6;

struct MeasureResult {
  Functional functional = Functional::RelativeEntropy;
  Nats value;
  DensityMatrix closest;
  SeparableAngles angles;
  int iterations = 0;
  double gradient_norm = 0.0;
  int restarts_used = 0;
  /// The true value is at least value + min(0, certificate_slack). For the
  /// relative entropy a failing raw certificate is retried at slightly
  /// depolarised copies of the closest state.
  double certificate_slack = 0.0;
  /// Every descent ended on the gradient or relative-change test rather than
  /// the iteration cap.
  bool converged = false;

  bool certified() const { return certificate_slack >= -kCertificateTolerance; }
};

/// The functional evaluated at realize(angles); +infinity is mapped to
/// kInfinitePenalty.
double objective(const DensityMatrix& sigma, const SeparableAngles& angles,
                 Functional functional = Functional::RelativeEntropy);

/// Gradient of S(sigma || realize(angles)) with respect to the 79 angles,
/// obtained from the Frechet derivative of the (clamped) matrix logarithm.
std::array<double, SeparableAngles::kParameters> analytic_gradient(
    const DensityMatrix& sigma, const SeparableAngles& angles,
    double clamp = kDefaultLogClamp);

/// Central-difference gradient of objective().
std::array<double, SeparableAngles::kParameters> finite_difference_gradient(
    const DensityMatrix& sigma, const SeparableAngles& angles, Functional functional,
    double step);

/// Minimises the selected functional over two-qubit separable states.
MeasureResult minimize(const DensityMatrix& sigma, const OptimizerConfig& config = {});

struct Certificate {
  /// Most negative directional derivative found toward a pure product state.
  double slack = 0.0;
  /// Product state attaining it.
  std::array<Complex, 2> witness_a{};
  std::array<Complex, 2> witness_b{};
};

/// Directional-derivative test of `candidate` as the minimiser of the
/// functional for sigma. Throws std::domain_error when the candidate misses
/// part of sigma's support.
Certificate certify(const DensityMatrix& sigma, const DensityMatrix& candidate,
                    Functional functional, int samples, std::uint64_t seed,
                    double clamp = kDefaultLogClamp);

/// Relative-entropy certificate slack; >= -1e-6 counts as certified.
double certify_minimum(const DensityMatrix& sigma, const DensityMatrix& candidate,
                       int samples = 64, std::uint64_t seed = 1);

/// 1 when the two-qubit state is entangled by the partial-transpose test.
int indicator_measure(const DensityMatrix& sigma);

}  // namespace entcalc
