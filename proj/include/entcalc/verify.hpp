#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "entcalc/optimizer.hpp"
#include "entcalc/states.hpp"

namespace entcalc {

inline constexpr double kPptTolerance = 1e-10;

/// Smallest eigenvalue of the partial transpose over B.
double min_partial_transpose_eigenvalue(const DensityMatrix& sigma);

/// Peres-Horodecki test; exact for 2x2 and 2x3. Throws std::invalid_argument
/// for other dims.
bool is_ppt_separable(const DensityMatrix& sigma);

struct KrausPair {
  ComplexMatrix a;
  ComplexMatrix b;
};

/// Separable operation sigma -> sum_i (A_i x B_i) sigma (A_i x B_i)^dagger.
struct LocalOperation {
  std::vector<KrausPair> kraus_pairs;

  std::size_t size() const { return kraus_pairs.size(); }
  /// max |sum_i (A_i x B_i)^dagger (A_i x B_i) - I| entrywise.
  double completeness_residual() const;
};

enum class Completeness {
  /// B measures, then A measures conditioned on B's outcome.
  Correlated,
  /// A and B measure independently.
  Product,
};

/// branches^2 Kraus pairs cut from Haar-random isometries on each side.
LocalOperation sample_local_operation(int branches, std::uint64_t seed,
                                      Completeness mode = Completeness::Correlated);

/// Measure B in the computational basis and flip A on outcome 1.
LocalOperation measure_and_flip();

struct Branch {
  /// (A_i x B_i) sigma (A_i x B_i)^dagger, unnormalised.
  ComplexMatrix state;
  double probability = 0.0;
};

Branch apply_branch(const DensityMatrix& sigma, const LocalOperation& op, std::size_t i);

/// Sum of all branch states.
DensityMatrix apply_operation(const DensityMatrix& sigma, const LocalOperation& op);

struct PropertyReport {
  std::string property;
  int trials = 0;
  int violations = 0;
  /// Largest amount by which a trial exceeded its bound (negative when every
  /// trial held with room to spare).
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> violating_seeds;
  std::map<std::string, double> values;

  bool passed() const { return violations == 0; }
  /// Records one trial whose margin must stay at or below zero.
  void record(double margin, std::uint64_t seed);
  void merge(const PropertyReport& other);
  std::string to_json() const;
};

/// sum_i p_i E(sigma_i / p_i) <= E(sigma) + tolerance. Trials beyond the
/// tolerance are recomputed with tightened optimizer settings first.
PropertyReport check_E3(const DensityMatrix& sigma, const LocalOperation& op,
                        const OptimizerConfig& config, double tolerance = 1e-3,
                        std::uint64_t seed = 0);

/// E(x s1 + (1 - x) s2) <= x E(s1) + (1 - x) E(s2) + tolerance.
PropertyReport check_convexity(const DensityMatrix& sigma1, const DensityMatrix& sigma2,
                               double x, const OptimizerConfig& config,
                               double tolerance = 1e-3, std::uint64_t seed = 0);

/// |E(sigma) - E(U sigma U^dagger)| < tolerance for a random local unitary.
PropertyReport check_local_unitary_invariance(const DensityMatrix& sigma, std::uint64_t seed,
                                              const OptimizerConfig& config,
                                              double tolerance = 1e-3);

/// For sigma_x = (1 - x)|psi><psi| + x rho*, with rho* the Schmidt-diagonal
/// minimiser of psi, rho* still passes the certificate.
PropertyReport check_theorem4(const PureState& psi, double x, std::uint64_t seed = 0);

/// Relative entropy of entanglement never exceeds the entanglement of
/// formation.
PropertyReport check_theorem6(const DensityMatrix& sigma, const OptimizerConfig& config,
                              double tolerance = 1e-3, std::uint64_t seed = 0);

/// S(sigma x sigma || rho* x rho*) against 2 E(sigma); the product state is an
/// upper-bound witness for E(sigma x sigma).
PropertyReport probe_subadditivity(const DensityMatrix& sigma, const OptimizerConfig& config,
                                   std::uint64_t seed = 0);

struct SuiteOptions {
  std::uint64_t seed = 1;
  OptimizerConfig optimizer;
  double tolerance = 1e-3;
  int branches = 2;
  Completeness completeness = Completeness::Correlated;
  /// Overrides every suite's default trial count when positive.
  int trials = 0;
  int threads = 0;
};

/// optimizer value < 1e-4 iff PPT, on random states of ranks 1 to 4.
PropertyReport run_e1_suite(const SuiteOptions& options);
PropertyReport run_e2_suite(const SuiteOptions& options);
PropertyReport run_e3_suite(const SuiteOptions& options);
PropertyReport run_convexity_suite(const SuiteOptions& options);
PropertyReport run_theorem4_suite(const SuiteOptions& options);
PropertyReport run_theorem6_suite(const SuiteOptions& options);
PropertyReport run_subadditivity_suite(const SuiteOptions& options);
/// Completeness residual of sampled operations stays below 1e-10.
PropertyReport run_completeness_suite(const SuiteOptions& options);
/// Classical relative entropy of sampled branch distributions is non-negative.
PropertyReport run_classical_term_suite(const SuiteOptions& options);

/// Names accepted by run_suite, "full" excluded.
std::vector<std::string> suite_names();

/// One suite by name, or every suite for "full".
std::vector<PropertyReport> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace entcalc
