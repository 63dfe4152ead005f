#include "entcalc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "entcalc/parallel.hpp"
#include "entcalc/verify.hpp"

namespace entcalc {

namespace {

constexpr std::size_t kTerms = SeparableAngles::kTerms;
constexpr std::size_t kMixing = SeparableAngles::kMixing;
constexpr std::size_t kParams = SeparableAngles::kParameters;
using Params = std::array<double, kParams>;

// Divided difference of f(x) = ln max(x, clamp).
double clamped_log_kernel(double p, double q, double clamp) {
  const bool p_live = p > clamp;
  const bool q_live = q > clamp;
  if (p_live && q_live) return log_divided_difference(p, q);
  if (!p_live && !q_live) return 0.0;
  return (std::log(std::max(p, clamp)) - std::log(std::max(q, clamp))) / (p - q);
}

// tr-adjoint of the clamped log's Frechet derivative at rho, applied to sigma:
// V (K o V^dagger sigma V) V^dagger.
ComplexMatrix log_derivative_adjoint(const ComplexMatrix& sigma, const Spectrum& rho,
                                     double clamp) {
  const ComplexMatrix& v = rho.eigenvectors;
  const std::size_t n = sigma.dim();
  ComplexMatrix rotated = v.adjoint() * sigma * v;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rotated(i, j) *= clamped_log_kernel(rho.eigenvalues[i], rho.eigenvalues[j], clamp);
    }
  }
  return (v * rotated * v.adjoint()).hermitian_part();
}

std::array<Complex, 2> d_local_theta(double theta, double phase) {
  return {Complex{-std::sin(theta), 0.0}, std::polar(std::cos(theta), phase)};
}

std::array<Complex, 2> d_local_phase(double theta, double phase) {
  return {Complex{0.0, 0.0}, Complex{0.0, 1.0} * std::polar(std::sin(theta), phase)};
}

// d w_t / d phi_m for every term t and mixing angle m (1-based m stored at m-1).
std::array<std::array<double, kMixing>, kTerms> weight_jacobian(const SeparableAngles& a) {
  std::array<double, kMixing> s{};
  std::array<double, kMixing> c{};
  for (std::size_t m = 0; m < kMixing; ++m) {
    s[m] = std::sin(a.phi[m]);
    c[m] = std::cos(a.phi[m]);
  }
  std::array<std::array<double, kMixing>, kTerms> jac{};
  for (std::size_t t = 0; t < kTerms; ++t) {
    // w_t = sin^2(phi_t) prod_{m > t} cos^2(phi_m), sin^2(phi_0) = 1.
    const double head = t == 0 ? 1.0 : s[t - 1] * s[t - 1];
    for (std::size_t m = t; m <= kMixing; ++m) {
      if (m == 0) continue;
      double d = 1.0;
      if (m == t) {
        d = 2.0 * s[m - 1] * c[m - 1];
      } else {
        d = head * (-2.0 * s[m - 1] * c[m - 1]);
      }
      for (std::size_t k = t + 1; k <= kMixing; ++k) {
        if (k != m) d *= c[k - 1] * c[k - 1];
      }
      jac[t][m - 1] = d;
    }
  }
  return jac;
}

Params flat_gradient_from_adjoint(const SeparableAngles& angles, const ComplexMatrix& g) {
  // d f / d theta = -tr(G d rho / d theta).
  const auto w = angles.weights();
  const auto jac = weight_jacobian(angles);
  SeparableAngles grad;
  std::array<double, kTerms> quad{};
  for (std::size_t t = 0; t < kTerms; ++t) {
    const auto a = angles.local_a(t);
    const auto b = angles.local_b(t);
    const auto v = tensor(a, b);
    const auto gv = multiply(g, v);
    quad[t] = inner(v, gv).real();

    auto directional = [&](const std::array<Complex, 2>& da, const std::array<Complex, 2>& db) {
      const auto dv = tensor(da, db);
      return -2.0 * w[t] * inner(gv, dv).real();
    };
    grad.alpha[t] = directional(d_local_theta(angles.alpha[t], angles.eta[t]), b);
    grad.eta[t] = directional(d_local_phase(angles.alpha[t], angles.eta[t]), b);
    grad.beta[t] = directional(a, d_local_theta(angles.beta[t], angles.mu[t]));
    grad.mu[t] = directional(a, d_local_phase(angles.beta[t], angles.mu[t]));
  }
  for (std::size_t m = 0; m < kMixing; ++m) {
    double acc = 0.0;
    for (std::size_t t = 0; t < kTerms; ++t) acc += jac[t][m] * quad[t];
    grad.phi[m] = -acc;
  }
  return grad.flat();
}

double norm(const Params& g) {
  double s = 0.0;
  for (const double x : g) s += x * x;
  return std::sqrt(s);
}

class RelativeEntropyEvaluator {
 public:
  RelativeEntropyEvaluator(const ComplexMatrix& sigma, double clamp)
      : sigma_(sigma), neg_entropy_(-entropy_of_matrix(sigma)), clamp_(clamp) {}

  double value(const SeparableAngles& angles) const {
    return value_of(eig_hermitian(realize_matrix(angles)));
  }

  double value_and_gradient(const SeparableAngles& angles, Params& grad) const {
    const Spectrum spec = eig_hermitian(realize_matrix(angles));
    grad = flat_gradient_from_adjoint(angles, log_derivative_adjoint(sigma_, spec, clamp_));
    return value_of(spec);
  }

 private:
  double value_of(const Spectrum& spec) const {
    const auto cross = trace_sigma_log_rho(sigma_, spec);
    if (!cross) return kInfinitePenalty;
    return neg_entropy_ - *cross;
  }

  ComplexMatrix sigma_;
  double neg_entropy_;
  double clamp_;
};

class BuresEvaluator {
 public:
  BuresEvaluator(const ComplexMatrix& sigma, double step) : fidelity_(sigma), step_(step) {}

  double value(const SeparableAngles& angles) const {
    return 2.0 - 2.0 * fidelity_.root_fidelity(realize_matrix(angles));
  }

  double value_and_gradient(const SeparableAngles& angles, Params& grad) const {
    Params x = angles.flat();
    for (std::size_t k = 0; k < kParams; ++k) {
      const double saved = x[k];
      x[k] = saved + step_;
      const double up = value(SeparableAngles::from_flat(x));
      x[k] = saved - step_;
      const double down = value(SeparableAngles::from_flat(x));
      x[k] = saved;
      grad[k] = (up - down) / (2.0 * step_);
    }
    return value(angles);
  }

 private:
  FidelityEvaluator fidelity_;
  double step_;
};

struct DescentOutcome {
  SeparableAngles angles;
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Steepest descent with Armijo backtracking. The trial step starts at
// config.initial_step and is then warm-started from the last accepted step.
template <typename Evaluator>
DescentOutcome descend(const Evaluator& eval, const SeparableAngles& start,
                       const OptimizerConfig& config) {
  DescentOutcome out;
  Params x = start.flat();
  Params grad{};
  double f = eval.value_and_gradient(start, grad);
  double gnorm = norm(grad);
  double step = config.initial_step;

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    if (gnorm < config.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Params trial{};
    double f_trial = f;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t k = 0; k < kParams; ++k) trial[k] = x[k] - step * grad[k];
      f_trial = eval.value(SeparableAngles::from_flat(trial));
      if (f_trial <= f - config.sufficient_decrease * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= config.step_shrink;
    }
    if (!accepted) {
      // No representable decrease along the gradient: numerically stationary.
      out.converged = true;
      break;
    }
    const double decrease = f - f_trial;
    x = trial;
    f = eval.value_and_gradient(SeparableAngles::from_flat(x), grad);
    gnorm = norm(grad);
    step = std::min(step / config.step_shrink, 1e3);
    if (decrease <= config.relative_change_tolerance * std::max(std::abs(f), 1e-300)) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.angles = SeparableAngles::from_flat(x);
  out.value = f;
  out.iterations = it;
  out.gradient_norm = gnorm;
  return out;
}

double dot(const Params& a, const Params& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < kParams; ++k) s += a[k] * b[k];
  return s;
}

// Limited-memory BFGS from a descent outcome, same Armijo rule. Runs until the
// gradient is 1000 times below tolerance or no further decrease is
// representable.
template <typename Evaluator>
DescentOutcome refine(const Evaluator& eval, const DescentOutcome& from,
                      const OptimizerConfig& config) {
  constexpr std::size_t kMemory = 12;
  constexpr int kStallLimit = 8;
  Params x = from.angles.flat();
  Params g{};
  double f = eval.value_and_gradient(from.angles, g);
  std::deque<Params> s_hist;
  std::deque<Params> y_hist;
  std::deque<double> rho_hist;

  DescentOutcome out;
  int stalls = 0;
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    if (norm(g) < 1e-3 * config.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Params q = g;
    std::vector<double> alphas(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alphas[i] = rho_hist[i] * dot(s_hist[i], q);
      for (std::size_t k = 0; k < kParams; ++k) q[k] -= alphas[i] * y_hist[i][k];
    }
    if (!s_hist.empty()) {
      const double scale = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (auto& v : q) v *= scale;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], q);
      for (std::size_t k = 0; k < kParams; ++k) q[k] += (alphas[i] - beta) * s_hist[i][k];
    }
    Params d{};
    for (std::size_t k = 0; k < kParams; ++k) d[k] = -q[k];
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t k = 0; k < kParams; ++k) d[k] = -g[k];
      slope = dot(g, d);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::sqrt(-slope)) : 1.0;
    Params trial{};
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t k = 0; k < kParams; ++k) trial[k] = x[k] + step * d[k];
      if (eval.value(SeparableAngles::from_flat(trial)) <=
          f + config.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
      step *= config.step_shrink;
    }
    if (!accepted) {
      if (s_hist.empty()) {
        out.converged = true;
        break;
      }
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    Params g_new{};
    const double f_new = eval.value_and_gradient(SeparableAngles::from_flat(trial), g_new);
    Params s{};
    Params y{};
    for (std::size_t k = 0; k < kParams; ++k) {
      s[k] = trial[k] - x[k];
      y[k] = g_new[k] - g[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-14 * norm(s) * norm(y)) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double decrease = f - f_new;
    x = trial;
    f = f_new;
    g = g_new;
    stalls = decrease <= 1e-15 * std::max(std::abs(f), 1e-300) ? stalls + 1 : 0;
    if (stalls >= kStallLimit) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.angles = SeparableAngles::from_flat(x);
  out.value = f;
  out.iterations = from.iterations + it;
  out.gradient_norm = norm(g);
  out.converged = out.converged || from.converged;
  return out;
}

SeparableAngles random_angles(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Params x{};
  for (auto& v : x) v = angle(rng);
  return SeparableAngles::from_flat(x);
}

std::array<Complex, 2> random_qubit(Rng& rng) {
  const auto v = random_unit_vector(2, rng);
  return {v[0], v[1]};
}

// Product-basis diagonal of sigma, plus a small random product admixture so
// that every term starts with non-zero weight.
SeparableAngles diagonal_start(const ComplexMatrix& sigma, Rng& rng) {
  constexpr double kAdmixture = 1e-3;
  std::vector<ProductTerm> terms;
  const std::array<std::array<Complex, 2>, 2> basis{
      std::array<Complex, 2>{1.0, 0.0}, std::array<Complex, 2>{0.0, 1.0}};
  for (std::size_t i = 0; i < 4; ++i) {
    const double d = std::max(sigma(i, i).real(), 0.0);
    terms.push_back({(1.0 - kAdmixture) * d, basis[i / 2], basis[i % 2]});
  }
  double total = 0.0;
  for (const auto& t : terms) total += t.weight;
  for (auto& t : terms) t.weight *= (1.0 - kAdmixture) / total;
  const double each = kAdmixture / static_cast<double>(kTerms - 4);
  while (terms.size() < kTerms) terms.push_back({each, random_qubit(rng), random_qubit(rng)});
  return encode_product_mixture(terms);
}

// Replaces the lightest term with the witness product state, mixed in with the
// weight that most lowers the objective.
template <typename Evaluator>
SeparableAngles inject_witness(const Evaluator& eval, const SeparableAngles& angles,
                               const Certificate& cert) {
  const auto w = angles.weights();
  const std::size_t lightest =
      static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
  std::vector<ProductTerm> base;
  double kept = 0.0;
  for (std::size_t t = 0; t < kTerms; ++t) {
    if (t == lightest) continue;
    base.push_back({w[t], angles.local_a(t), angles.local_b(t)});
    kept += w[t];
  }
  SeparableAngles best = angles;
  double best_value = eval.value(angles);
  for (int k = 1; k <= 30; ++k) {
    const double x = std::ldexp(1.0, -k);
    std::vector<ProductTerm> terms = base;
    for (auto& t : terms) t.weight *= (1.0 - x) / kept;
    terms.push_back({x, cert.witness_a, cert.witness_b});
    const SeparableAngles trial = encode_product_mixture(terms);
    const double v = eval.value(trial);
    if (v < best_value) {
      best_value = v;
      best = trial;
    }
  }
  return best;
}

void require_two_qubit(const DensityMatrix& sigma, const char* what) {
  if (!(sigma.dims() == Dims{2, 2})) {
    throw std::invalid_argument(std::string(what) + ": two-qubit state required");
  }
}

// A minimiser on the boundary of the separable set has an eigenvalue near
// zero, where the log derivative is ill-conditioned. The certificate bound
// E >= S(sigma || rho) + min(0, slack) holds at any separable rho, so it is
// also taken at (1 - eps) rho + eps I/4 and the best bound is kept.
double regularized_slack(const DensityMatrix& sigma, const DensityMatrix& closest, double value,
                         const OptimizerConfig& config, std::uint64_t seed) {
  const std::size_t n = sigma.dim();
  const DensityMatrix maximally_mixed(
      ComplexMatrix::identity(n) * Complex(1.0 / static_cast<double>(n)), sigma.dims());
  double best = -std::numeric_limits<double>::infinity();
  for (const double eps : {1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    const DensityMatrix shifted = DensityMatrix::mix(1.0 - eps, closest, maximally_mixed);
    const Nats s = relative_entropy(sigma, shifted);
    if (s.infinite) continue;
    const Certificate c = certify(sigma, shifted, Functional::RelativeEntropy,
                                  config.certificate_samples, seed, config.log_clamp);
    best = std::max(best, s.value + std::min(0.0, c.slack) - value);
    if (best >= 0.0) break;
  }
  return best;
}

template <typename Evaluator>
MeasureResult run_minimize(const Evaluator& eval, const DensityMatrix& sigma,
                           const OptimizerConfig& config) {
  const std::size_t restarts = static_cast<std::size_t>(config.restarts);
  std::vector<DescentOutcome> outcomes(restarts);
  parallel_for(restarts, resolve_threads(config.threads), [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, r));
    const SeparableAngles start =
        r == 0 ? diagonal_start(sigma.matrix(), rng) : random_angles(rng);
    outcomes[r] = descend(eval, start, config);
  });

  bool all_converged = true;
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    all_converged = all_converged && outcomes[r].converged;
    if (outcomes[r].value < outcomes[best].value) best = r;
  }
  DescentOutcome winner = refine(eval, outcomes[best], config);
  int descents = static_cast<int>(restarts);

  const auto cert_seed = derive_seed(config.seed, 1000003);
  auto certify_outcome = [&](const DescentOutcome& o) {
    return certify(sigma, realize(o.angles), config.functional, config.certificate_samples,
                   cert_seed, config.log_clamp);
  };
  Certificate cert = certify_outcome(winner);
  for (int round = 0; round < config.polish_rounds && cert.slack < -kCertificateTolerance;
       ++round) {
    const SeparableAngles start = inject_witness(eval, winner.angles, cert);
    DescentOutcome polished = refine(eval, descend(eval, start, config), config);
    ++descents;
    if (!(polished.value <= winner.value)) break;
    polished.iterations += winner.iterations;
    winner = polished;
    all_converged = all_converged && polished.converged;
    cert = certify_outcome(winner);
  }

  DensityMatrix closest = realize(winner.angles);
  Nats value = config.functional == Functional::RelativeEntropy
                   ? relative_entropy(sigma, closest)
                   : Nats::finite(bures_distance(sigma, closest));
  double slack = cert.slack;
  if (config.functional == Functional::RelativeEntropy && slack < -kCertificateTolerance &&
      !value.infinite) {
    slack = std::max(slack, regularized_slack(sigma, closest, value.value, config, cert_seed));
  }
  return MeasureResult{config.functional, value,          std::move(closest),
                       winner.angles,     winner.iterations, winner.gradient_norm,
                       descents,          slack,          all_converged};
}

// Largest <ab|X|ab> over unit product vectors.
struct ProductMaximum {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<Complex> a;
  std::vector<Complex> b;
};

double product_expectation(const ComplexMatrix& x, const std::vector<Complex>& a,
                           const std::vector<Complex>& b) {
  const auto v = tensor(a, b);
  return inner(v, multiply(x, v)).real();
}

std::vector<Complex> top_eigenvector(const ComplexMatrix& m) {
  return eig_hermitian(m, 1e-8).eigenvector(0);
}

ProductMaximum maximize_over_products(const ComplexMatrix& x, Dims dims, int samples,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>> starts;
  for (std::size_t i = 0; i < dims.a; ++i) {
    for (std::size_t k = 0; k < dims.b; ++k) {
      std::vector<Complex> a(dims.a, Complex{0.0, 0.0});
      std::vector<Complex> b(dims.b, Complex{0.0, 0.0});
      a[i] = 1.0;
      b[k] = 1.0;
      starts.emplace_back(std::move(a), std::move(b));
    }
  }
  for (int s = 0; s < samples; ++s) {
    auto a = random_unit_vector(dims.a, rng);
    auto b = random_unit_vector(dims.b, rng);
    starts.emplace_back(std::move(a), std::move(b));
  }
  std::vector<double> values(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    values[s] = product_expectation(x, starts[s].first, starts[s].second);
  }
  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t refine = std::min<std::size_t>(order.size(), 12);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(refine),
                    order.end(), [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });

  ProductMaximum best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (values[s] > best.value) best = {values[s], starts[s].first, starts[s].second};
  }
  for (std::size_t idx = 0; idx < refine; ++idx) {
    auto [a, b] = starts[order[idx]];
    double current = values[order[idx]];
    for (int sweep = 0; sweep < 200; ++sweep) {
      ComplexMatrix ma(dims.a);
      for (std::size_t i = 0; i < dims.a; ++i) {
        for (std::size_t j = 0; j < dims.a; ++j) {
          Complex acc{0.0, 0.0};
          for (std::size_t k = 0; k < dims.b; ++k) {
            for (std::size_t l = 0; l < dims.b; ++l) {
              acc += std::conj(b[k]) * x(i * dims.b + k, j * dims.b + l) * b[l];
            }
          }
          ma(i, j) = acc;
        }
      }
      a = top_eigenvector(ma);
      ComplexMatrix mb(dims.b);
      for (std::size_t k = 0; k < dims.b; ++k) {
        for (std::size_t l = 0; l < dims.b; ++l) {
          Complex acc{0.0, 0.0};
          for (std::size_t i = 0; i < dims.a; ++i) {
            for (std::size_t j = 0; j < dims.a; ++j) {
              acc += std::conj(a[i]) * x(i * dims.b + k, j * dims.b + l) * a[j];
            }
          }
          mb(k, l) = acc;
        }
      }
      b = top_eigenvector(mb);
      const double next = product_expectation(x, a, b);
      const bool done = next - current <= 1e-15;
      current = std::max(current, next);
      if (done) break;
    }
    if (current > best.value) best = {current, a, b};
  }
  return best;
}

}  // namespace

std::string to_string(Functional f) {
  return f == Functional::RelativeEntropy ? "ree" : "bures";
}

Functional functional_from_string(const std::string& name) {
  if (name == "ree" || name == "relative-entropy") return Functional::RelativeEntropy;
  if (name == "bures") return Functional::Bures;
  throw std::invalid_argument("unknown functional '" + name + "'");
}

void OptimizerConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("OptimizerConfig: ") + what + " must be positive");
  };
  positive(max_iterations, "max_iterations");
  positive(gradient_tolerance, "gradient_tolerance");
  positive(relative_change_tolerance, "relative_change_tolerance");
  positive(initial_step, "initial_step");
  positive(sufficient_decrease, "sufficient_decrease");
  positive(restarts, "restarts");
  positive(finite_difference_step, "finite_difference_step");
  positive(certificate_samples, "certificate_samples");
  positive(log_clamp, "log_clamp");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) {
    throw std::invalid_argument("OptimizerConfig: step_shrink must lie in (0, 1)");
  }
  if (polish_rounds < 0 || threads < 0) {
    throw std::invalid_argument("OptimizerConfig: counts must be non-negative");
  }
}

double objective(const DensityMatrix& sigma, const SeparableAngles& angles,
                 Functional functional) {
  require_two_qubit(sigma, "objective");
  const DensityMatrix rho = realize(angles);
  if (functional == Functional::Bures) return bures_distance(sigma, rho);
  const Nats s = relative_entropy(sigma, rho);
  return s.infinite ? kInfinitePenalty : s.value;
}

std::array<double, SeparableAngles::kParameters> analytic_gradient(
    const DensityMatrix& sigma, const SeparableAngles& angles, double clamp) {
  require_two_qubit(sigma, "analytic_gradient");
  Params grad{};
  RelativeEntropyEvaluator(sigma.matrix(), clamp).value_and_gradient(angles, grad);
  return grad;
}

std::array<double, SeparableAngles::kParameters> finite_difference_gradient(
    const DensityMatrix& sigma, const SeparableAngles& angles, Functional functional,
    double step) {
  Params x = angles.flat();
  Params grad{};
  for (std::size_t k = 0; k < kParams; ++k) {
    const double saved = x[k];
    x[k] = saved + step;
    const double up = objective(sigma, SeparableAngles::from_flat(x), functional);
    x[k] = saved - step;
    const double down = objective(sigma, SeparableAngles::from_flat(x), functional);
    x[k] = saved;
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

MeasureResult minimize(const DensityMatrix& sigma, const OptimizerConfig& config) {
  config.validate();
  require_two_qubit(sigma, "minimize");
  if (config.functional == Functional::Bures) {
    return run_minimize(BuresEvaluator(sigma.matrix(), config.finite_difference_step), sigma,
                        config);
  }
  return run_minimize(RelativeEntropyEvaluator(sigma.matrix(), config.log_clamp), sigma, config);
}

Certificate certify(const DensityMatrix& sigma, const DensityMatrix& candidate,
                    Functional functional, int samples, std::uint64_t seed, double clamp) {
  if (!(sigma.dims() == candidate.dims())) {
    throw std::invalid_argument("certify: dims differ");
  }
  ComplexMatrix witness_operator;
  double baseline = 0.0;
  if (functional == Functional::RelativeEntropy) {
    // d/dx S(sigma || (1-x) rho* + x rho) at 0 equals 1 - tr(A rho).
    const Spectrum spec = eig_hermitian(candidate.matrix());
    if (!trace_sigma_log_rho(sigma.matrix(), spec)) {
      throw std::domain_error("certify: candidate does not cover the support of sigma");
    }
    witness_operator = log_derivative_adjoint(sigma.matrix(), spec, clamp);
    baseline = 1.0;
  } else {
    // d/dx D_B(sigma, (1-x) rho* + x rho) at 0 equals tr sqrt(M) - tr(Y rho),
    // M = W^dagger rho* W, Y = W M^{-1/2} W^dagger.
    const FidelityEvaluator fe(sigma.matrix());
    const Spectrum m = eig_hermitian(fe.compressed(candidate.matrix()));
    const auto& w = fe.weighted_support();
    const std::size_t r = w.size();
    ComplexMatrix inv_root(r);
    for (std::size_t k = 0; k < r; ++k) {
      const double lam = std::max(m.eigenvalues[k], 0.0);
      baseline += std::sqrt(lam);
      const double scale = 1.0 / std::sqrt(std::max(lam, clamp));
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
          inv_root(i, j) += scale * m.eigenvectors(i, k) * std::conj(m.eigenvectors(j, k));
        }
      }
    }
    const std::size_t n = sigma.dim();
    witness_operator = ComplexMatrix(n);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t p = 0; p < n; ++p) {
          for (std::size_t q = 0; q < n; ++q) {
            witness_operator(p, q) += w[i][p] * inv_root(i, j) * std::conj(w[j][q]);
          }
        }
      }
    }
    witness_operator = witness_operator.hermitian_part();
  }
  const ProductMaximum best =
      maximize_over_products(witness_operator, sigma.dims(), samples, seed);
  Certificate cert;
  cert.slack = baseline - best.value;
  if (best.a.size() == 2 && best.b.size() == 2) {
    cert.witness_a = {best.a[0], best.a[1]};
    cert.witness_b = {best.b[0], best.b[1]};
  }
  return cert;
}

double certify_minimum(const DensityMatrix& sigma, const DensityMatrix& candidate, int samples,
                       std::uint64_t seed) {
  return certify(sigma, candidate, Functional::RelativeEntropy, samples, seed).slack;
}

int indicator_measure(const DensityMatrix& sigma) {
  require_two_qubit(sigma, "indicator_measure");
  return is_ppt_separable(sigma) ? 0 : 1;
}

}  // namespace entcalc
