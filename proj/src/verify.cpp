#include "entcalc/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "entcalc/analytic.hpp"
#include "entcalc/parallel.hpp"

namespace entcalc {

namespace {

constexpr Dims kQubits{2, 2};
constexpr double kSeparableValue = 1e-4;

// Rows [2k, 2k + 2) of the first two columns of u.
ComplexMatrix isometry_block(const ComplexMatrix& u, std::size_t k) {
  ComplexMatrix block(2);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) block(r, c) = u(2 * k + r, c);
  }
  return block;
}

std::vector<ComplexMatrix> random_measurement(std::size_t outcomes, Rng& rng) {
  const ComplexMatrix u = random_unitary(2 * outcomes, rng);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < outcomes; ++k) ops.push_back(isometry_block(u, k));
  return ops;
}

double measure(const DensityMatrix& sigma, const OptimizerConfig& config) {
  return minimize(sigma, config).value.as_double();
}

OptimizerConfig tightened(OptimizerConfig config) {
  config.restarts *= 2;
  config.gradient_tolerance /= 10.0;
  config.relative_change_tolerance /= 100.0;
  config.polish_rounds *= 2;
  config.seed = derive_seed(config.seed, 77);
  return config;
}

// Any two-qubit state of rank 1 to 4, chosen by the seed.
DensityMatrix random_state(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  return random_density(kQubits, rank, derive_seed(seed, 1));
}

int trials_or(const SuiteOptions& options, int fallback) {
  return options.trials > 0 ? options.trials : fallback;
}

// Runs `trial(k, inner_config)` for k < n and merges the reports in index order.
template <typename Trial>
PropertyReport run_trials(const std::string& name, int n, const SuiteOptions& options,
                          Trial&& trial) {
  const unsigned threads = resolve_threads(options.threads);
  OptimizerConfig inner = options.optimizer;
  if (threads > 1) inner.threads = 1;
  std::vector<PropertyReport> reports(static_cast<std::size_t>(n));
  parallel_for(reports.size(), threads,
               [&](std::size_t k) { reports[k] = trial(k, inner); });
  PropertyReport merged;
  merged.property = name;
  for (const auto& r : reports) merged.merge(r);
  return merged;
}

}  // namespace

double min_partial_transpose_eigenvalue(const DensityMatrix& sigma) {
  return eig_hermitian(partial_transpose(sigma.matrix(), sigma.dims(), Subsystem::B))
      .eigenvalues.back();
}

bool is_ppt_separable(const DensityMatrix& sigma) {
  const Dims d = sigma.dims();
  const bool supported = (d.a == 2 && d.b == 2) || (d.a == 2 && d.b == 3) ||
                         (d.a == 3 && d.b == 2);
  if (!supported) {
    throw std::invalid_argument("is_ppt_separable: only 2x2 and 2x3 systems are supported");
  }
  return min_partial_transpose_eigenvalue(sigma) >= -kPptTolerance;
}

double LocalOperation::completeness_residual() const {
  if (kraus_pairs.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t n = kraus_pairs.front().a.dim() * kraus_pairs.front().b.dim();
  ComplexMatrix sum(n);
  for (const auto& [a, b] : kraus_pairs) {
    const ComplexMatrix k = tensor(a, b);
    sum += k.adjoint() * k;
  }
  return sum.max_abs_diff(ComplexMatrix::identity(n));
}

LocalOperation sample_local_operation(int branches, std::uint64_t seed, Completeness mode) {
  if (branches < 1) throw std::invalid_argument("sample_local_operation: branches must be >= 1");
  const auto n = static_cast<std::size_t>(branches);
  Rng rng(seed);
  LocalOperation op;
  const auto b_ops = random_measurement(n, rng);
  if (mode == Completeness::Product) {
    const auto a_ops = random_measurement(n, rng);
    for (const auto& a : a_ops) {
      for (const auto& b : b_ops) op.kraus_pairs.push_back({a, b});
    }
    return op;
  }
  for (const auto& b : b_ops) {
    for (const auto& a : random_measurement(n, rng)) op.kraus_pairs.push_back({a, b});
  }
  return op;
}

LocalOperation measure_and_flip() {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix flip{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
  const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
  return LocalOperation{{{id, p0}, {flip, p1}}};
}

Branch apply_branch(const DensityMatrix& sigma, const LocalOperation& op, std::size_t i) {
  if (i >= op.size()) throw std::out_of_range("apply_branch: branch index");
  const auto& [a, b] = op.kraus_pairs[i];
  if (a.dim() != sigma.dims().a || b.dim() != sigma.dims().b) {
    throw std::invalid_argument("apply_branch: Kraus dims do not match the state");
  }
  const ComplexMatrix k = tensor(a, b);
  Branch out;
  out.state = (k * sigma.matrix() * k.adjoint()).hermitian_part();
  out.probability = out.state.trace().real();
  return out;
}

DensityMatrix apply_operation(const DensityMatrix& sigma, const LocalOperation& op) {
  ComplexMatrix total(sigma.dim());
  for (std::size_t i = 0; i < op.size(); ++i) total += apply_branch(sigma, op, i).state;
  return DensityMatrix(std::move(total), sigma.dims());
}

void PropertyReport::record(double margin, std::uint64_t seed) {
  ++trials;
  worst_margin = std::max(worst_margin, margin);
  if (margin > 0.0) {
    ++violations;
    violating_seeds.push_back(seed);
  }
}

void PropertyReport::merge(const PropertyReport& other) {
  trials += other.trials;
  violations += other.violations;
  worst_margin = std::max(worst_margin, other.worst_margin);
  violating_seeds.insert(violating_seeds.end(), other.violating_seeds.begin(),
                         other.violating_seeds.end());
}

std::string PropertyReport::to_json() const {
  auto number = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["property"] = property;
  j["trials"] = trials;
  j["violations"] = violations;
  j["worst_margin"] = number(worst_margin);
  j["violating_seeds"] = violating_seeds;
  j["passed"] = passed();
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [k, x] : values) v[k] = number(x);
  j["values"] = v;
  return j.dump();
}

PropertyReport check_E3(const DensityMatrix& sigma, const LocalOperation& op,
                        const OptimizerConfig& config, double tolerance, std::uint64_t seed) {
  auto sides = [&](const OptimizerConfig& c) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
      const Branch br = apply_branch(sigma, op, i);
      if (br.probability < 1e-12) continue;
      ComplexMatrix normalised = br.state;
      normalised *= Complex{1.0 / br.probability, 0.0};
      lhs += br.probability * measure(DensityMatrix(normalised, sigma.dims()), c);
    }
    return std::pair{lhs, measure(sigma, c)};
  };
  auto [lhs, rhs] = sides(config);
  if (lhs > rhs + tolerance) std::tie(lhs, rhs) = sides(tightened(config));
  PropertyReport report;
  report.property = "E3";
  report.values = {{"after", lhs}, {"before", rhs}};
  report.record(lhs - rhs - tolerance, seed);
  return report;
}

PropertyReport check_convexity(const DensityMatrix& sigma1, const DensityMatrix& sigma2,
                               double x, const OptimizerConfig& config, double tolerance,
                               std::uint64_t seed) {
  const double e1 = measure(sigma1, config);
  const double e2 = measure(sigma2, config);
  const double mixed = measure(DensityMatrix::mix(x, sigma1, sigma2), config);
  PropertyReport report;
  report.property = "convexity";
  report.values = {{"mixed", mixed}, {"bound", x * e1 + (1.0 - x) * e2}};
  report.record(mixed - (x * e1 + (1.0 - x) * e2) - tolerance, seed);
  return report;
}

PropertyReport check_local_unitary_invariance(const DensityMatrix& sigma, std::uint64_t seed,
                                              const OptimizerConfig& config, double tolerance) {
  const auto [ua, ub] = random_local_unitary(seed);
  const double before = measure(sigma, config);
  const double after = measure(apply_local_unitary(sigma, ua, ub), config);
  PropertyReport report;
  report.property = "E2";
  report.values = {{"before", before}, {"after", after}};
  report.record(std::abs(before - after) - tolerance, seed);
  return report;
}

PropertyReport check_theorem4(const PureState& psi, double x, std::uint64_t seed) {
  if (!(psi.dims() == kQubits)) throw std::invalid_argument("check_theorem4: two qubits required");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("check_theorem4: x outside [0, 1]");
  const auto sd = schmidt(psi);
  ComplexMatrix rho(4);
  for (std::size_t n = 0; n < sd.coefficients.size(); ++n) {
    const double w = sd.coefficients[n] * sd.coefficients[n];
    rho += w * ComplexMatrix::outer(tensor(sd.basis_a[n], sd.basis_b[n]));
  }
  const DensityMatrix rho_star(rho.hermitian_part(), kQubits);
  const DensityMatrix sigma_x = DensityMatrix::mix(x, rho_star, DensityMatrix(psi));
  const double slack = certify_minimum(sigma_x, rho_star, 64, seed);
  PropertyReport report;
  report.property = "theorem4";
  report.values = {{"slack", slack}};
  report.record(-kCertificateTolerance - slack, seed);
  return report;
}

PropertyReport check_theorem6(const DensityMatrix& sigma, const OptimizerConfig& config,
                              double tolerance, std::uint64_t seed) {
  const double ree = measure(sigma, config);
  const double eof = eof_two_qubit(sigma).value;
  PropertyReport report;
  report.property = "theorem6";
  report.values = {{"ree", ree}, {"eof", eof}};
  report.record(ree - eof - tolerance, seed);
  return report;
}

PropertyReport probe_subadditivity(const DensityMatrix& sigma, const OptimizerConfig& config,
                                   std::uint64_t seed) {
  const MeasureResult r = minimize(sigma, config);
  const Nats witness = relative_entropy(tensor(sigma.matrix(), sigma.matrix()),
                                        tensor(r.closest.matrix(), r.closest.matrix()));
  PropertyReport report;
  report.property = "subadditivity";
  report.values = {{"single", r.value.as_double()}, {"witness", witness.as_double()}};
  report.record(std::abs(witness.as_double() - 2.0 * r.value.as_double()) - 1e-9, seed);
  return report;
}

PropertyReport run_e1_suite(const SuiteOptions& options) {
  const int per_rank = trials_or(options, 100) / 4;
  return run_trials("E1", 4 * per_rank, options, [&](std::size_t k, const OptimizerConfig& c) {
    const std::size_t rank = 1 + k / static_cast<std::size_t>(per_rank);
    const std::uint64_t seed = derive_seed(options.seed, 1000 * rank + k);
    const DensityMatrix sigma = random_density(kQubits, rank, seed);
    const double value = measure(sigma, c);
    const bool ppt = is_ppt_separable(sigma);
    PropertyReport r;
    r.record(ppt ? value - kSeparableValue : kSeparableValue - value, seed);
    return r;
  });
}

PropertyReport run_e2_suite(const SuiteOptions& options) {
  return run_trials("E2", trials_or(options, 20), options,
                    [&](std::size_t k, const OptimizerConfig& c) {
                      const std::uint64_t seed = derive_seed(options.seed, 2000 + k);
                      return check_local_unitary_invariance(random_state(seed),
                                                            derive_seed(seed, 2), c,
                                                            options.tolerance);
                    });
}

PropertyReport run_e3_suite(const SuiteOptions& options) {
  return run_trials("E3", trials_or(options, 50), options,
                    [&](std::size_t k, const OptimizerConfig& c) {
                      const std::uint64_t seed = derive_seed(options.seed, 3000 + k);
                      const LocalOperation op = sample_local_operation(
                          options.branches, derive_seed(seed, 2), options.completeness);
                      return check_E3(random_state(seed), op, c, options.tolerance, seed);
                    });
}

PropertyReport run_convexity_suite(const SuiteOptions& options) {
  return run_trials("convexity", trials_or(options, 30), options,
                    [&](std::size_t k, const OptimizerConfig& c) {
                      const std::uint64_t seed = derive_seed(options.seed, 4000 + k);
                      Rng rng(derive_seed(seed, 3));
                      const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                      return check_convexity(random_state(seed),
                                             random_state(derive_seed(seed, 2)), x, c,
                                             options.tolerance, seed);
                    });
}

PropertyReport run_theorem4_suite(const SuiteOptions& options) {
  const int n = trials_or(options, 10);
  return run_trials("theorem4", 3 * n, options, [&](std::size_t k, const OptimizerConfig&) {
    constexpr std::array xs{0.25, 0.5, 0.75};
    const std::uint64_t seed = derive_seed(options.seed, 5000 + k / 3);
    return check_theorem4(random_pure(kQubits, seed), xs[k % 3], seed);
  });
}

PropertyReport run_theorem6_suite(const SuiteOptions& options) {
  return run_trials("theorem6", trials_or(options, 30), options,
                    [&](std::size_t k, const OptimizerConfig& c) {
                      const std::uint64_t seed = derive_seed(options.seed, 6000 + k);
                      return check_theorem6(random_state(seed), c, options.tolerance, seed);
                    });
}

PropertyReport run_subadditivity_suite(const SuiteOptions& options) {
  return run_trials("subadditivity", trials_or(options, 10), options,
                    [&](std::size_t k, const OptimizerConfig& c) {
                      const std::uint64_t seed = derive_seed(options.seed, 7000 + k);
                      return probe_subadditivity(random_state(seed), c, seed);
                    });
}

PropertyReport run_completeness_suite(const SuiteOptions& options) {
  PropertyReport report;
  report.property = "completeness";
  const int n = trials_or(options, 1000);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t seed = derive_seed(options.seed, 8000 + static_cast<std::uint64_t>(k));
    const Completeness mode = k % 2 == 0 ? options.completeness
                                         : (options.completeness == Completeness::Correlated
                                                ? Completeness::Product
                                                : Completeness::Correlated);
    const int branches = 1 + k % 4;
    const LocalOperation op = sample_local_operation(branches, seed, mode);
    report.record(op.completeness_residual() - 1e-10, seed);
    const DensityMatrix sigma = random_state(derive_seed(seed, 1));
    double total = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) total += apply_branch(sigma, op, i).probability;
    report.record(std::abs(total - 1.0) - 1e-10, seed);
  }
  return report;
}

PropertyReport run_classical_term_suite(const SuiteOptions& options) {
  PropertyReport report;
  report.property = "classical_term";
  const int n = trials_or(options, 200);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t seed = derive_seed(options.seed, 9000 + static_cast<std::uint64_t>(k));
    const LocalOperation op =
        sample_local_operation(options.branches, derive_seed(seed, 1), options.completeness);
    const DensityMatrix sigma = random_state(derive_seed(seed, 2));
    Rng rng(derive_seed(seed, 3));
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::array<double, SeparableAngles::kParameters> flat{};
    for (auto& v : flat) v = angle(rng);
    const DensityMatrix rho = realize(SeparableAngles::from_flat(flat));
    std::vector<double> p;
    std::vector<double> q;
    for (std::size_t i = 0; i < op.size(); ++i) {
      p.push_back(std::max(apply_branch(sigma, op, i).probability, 0.0));
      q.push_back(std::max(apply_branch(rho, op, i).probability, 0.0));
    }
    const double sp = std::accumulate(p.begin(), p.end(), 0.0);
    const double sq = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& x : p) x /= sp;
    for (auto& x : q) x /= sq;
    const Nats d = classical_relative_entropy(p, q);
    report.record(d.infinite ? -1.0 : -d.value - 1e-12, seed);
  }
  return report;
}

std::vector<std::string> suite_names() {
  return {"completeness", "classical_term", "theorem4", "E1",           "E2",
          "E3",           "convexity",      "theorem6", "subadditivity"};
}

std::vector<PropertyReport> run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "full") {
    std::vector<PropertyReport> all;
    for (const auto& n : suite_names()) all.push_back(run_suite(n, options).front());
    return all;
  }
  if (name == "completeness") return {run_completeness_suite(options)};
  if (name == "classical_term") return {run_classical_term_suite(options)};
  if (name == "theorem4") return {run_theorem4_suite(options)};
  if (name == "E1") return {run_e1_suite(options)};
  if (name == "E2") return {run_e2_suite(options)};
  if (name == "E3") return {run_e3_suite(options)};
  if (name == "convexity") return {run_convexity_suite(options)};
  if (name == "theorem6") return {run_theorem6_suite(options)};
  if (name == "subadditivity") return {run_subadditivity_suite(options)};
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace entcalc
