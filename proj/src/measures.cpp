#include "entcalc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entcalc {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double Nats::as_double() const {
  return infinite ? std::numeric_limits<double>::infinity() : value;
}

double Nats::bits() const { return as_double() / std::log(2.0); }

std::optional<double> trace_sigma_log_rho(const ComplexMatrix& sigma,
                                          const Spectrum& rho_spectrum,
                                          SupportThresholds thresholds) {
  double cross = 0.0;
  for (std::size_t k = 0; k < rho_spectrum.eigenvalues.size(); ++k) {
    const auto v = rho_spectrum.eigenvector(k);
    const double overlap = inner(v, multiply(sigma, v)).real();
    const double r = rho_spectrum.eigenvalues[k];
    if (r < thresholds.eigenvalue && overlap > thresholds.overlap) return std::nullopt;
    cross += overlap * std::log(std::max(r, thresholds.log_clamp));
  }
  return cross;
}

Nats relative_entropy(const ComplexMatrix& sigma, const ComplexMatrix& rho,
                      SupportThresholds thresholds) {
  if (sigma.dim() != rho.dim()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const auto cross = trace_sigma_log_rho(sigma, eig_hermitian(rho), thresholds);
  if (!cross) return Nats::infinity();
  return Nats::finite(-entropy_of_matrix(sigma) - *cross);
}

Nats relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho,
                      SupportThresholds thresholds) {
  if (!(sigma.dims() == rho.dims())) {
    throw std::invalid_argument("relative_entropy: bipartite dims differ");
  }
  return relative_entropy(sigma.matrix(), rho.matrix(), thresholds);
}

double entropy_of_matrix(const ComplexMatrix& m) {
  double s = 0.0;
  for (const double x : eig_hermitian(m).eigenvalues) s -= xlogx(x);
  return s;
}

Nats von_neumann_entropy(const DensityMatrix& rho) {
  return Nats::finite(entropy_of_matrix(rho.matrix()));
}

FidelityEvaluator::FidelityEvaluator(const ComplexMatrix& sigma) : dim_(sigma.dim()) {
  const Spectrum spec = eig_hermitian(sigma);
  const double top = std::max(spec.eigenvalues.front(), 0.0);
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const double s = spec.eigenvalues[k];
    if (s <= 1e-13 * std::max(top, 1.0)) continue;
    auto v = spec.eigenvector(k);
    const double root = std::sqrt(s);
    for (auto& z : v) z *= root;
    support_.push_back(std::move(v));
  }
}

ComplexMatrix FidelityEvaluator::compressed(const ComplexMatrix& rho) const {
  if (rho.dim() != dim_) throw std::invalid_argument("fidelity: dimension mismatch");
  const std::size_t r = support_.size();
  std::vector<std::vector<Complex>> rho_w(r);
  for (std::size_t j = 0; j < r; ++j) rho_w[j] = multiply(rho, support_[j]);
  ComplexMatrix m(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) m(i, j) = inner(support_[i], rho_w[j]);
  }
  return m.hermitian_part();
}

double FidelityEvaluator::root_fidelity(const ComplexMatrix& rho) const {
  const ComplexMatrix m = compressed(rho);
  double s = 0.0;
  if (m.dim() == 1) {
    s = std::sqrt(std::max(m(0, 0).real(), 0.0));
  } else {
    for (const double x : eig_hermitian(m).eigenvalues) s += std::sqrt(std::max(x, 0.0));
  }
  return std::min(s, 1.0);
}

double fidelity(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (sigma.dim() != rho.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  // The singular values of sqrt(sigma) sqrt(rho) are the square roots of the
  // eigenvalues of sqrt(sigma) rho sqrt(sigma), computed on sigma's support.
  const double root = FidelityEvaluator(sigma.matrix()).root_fidelity(rho.matrix());
  return root * root;
}

double bures_distance(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (sigma.dim() != rho.dim()) throw std::invalid_argument("bures_distance: dimension mismatch");
  return 2.0 - 2.0 * FidelityEvaluator(sigma.matrix()).root_fidelity(rho.matrix());
}

Nats mutual_information(const DensityMatrix& rho) {
  const Dims d = rho.dims();
  const double sa = entropy_of_matrix(partial_trace(rho.matrix(), d, Subsystem::B));
  const double sb = entropy_of_matrix(partial_trace(rho.matrix(), d, Subsystem::A));
  return Nats::finite(sa + sb - entropy_of_matrix(rho.matrix()));
}

Nats classical_relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("classical_relative_entropy: length mismatch");
  }
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw std::invalid_argument("classical_relative_entropy: negative probability");
    }
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-10 || std::abs(sq - 1.0) > 1e-10) {
    throw std::invalid_argument("classical_relative_entropy: vectors must sum to 1");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return Nats::infinity();
    s += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return Nats::finite(s);
}

double sanov_confusion_probability(const DensityMatrix& sigma, const DensityMatrix& rho,
                                   int n) {
  if (n <= 0) throw std::invalid_argument("sanov_confusion_probability: n must be positive");
  const Nats s = relative_entropy(sigma, rho);
  if (s.infinite) return 0.0;
  return std::exp(-static_cast<double>(n) * s.value);
}

Nats classical_correlations(const DensityMatrix& rho_star) {
  const Dims d = rho_star.dims();
  const ComplexMatrix ra = partial_trace(rho_star.matrix(), d, Subsystem::B);
  const ComplexMatrix rb = partial_trace(rho_star.matrix(), d, Subsystem::A);
  return relative_entropy(rho_star.matrix(), tensor(ra, rb));
}

}  // namespace entcalc
