#include "entcalc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entcalc {

namespace {

constexpr Dims kQubits{2, 2};

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

ComplexMatrix basis_projector(std::size_t i) {
  ComplexMatrix m(4);
  m(i, i) = 1.0;
  return m;
}

double require_param(const std::map<std::string, double>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument("missing parameter '" + key + "'");
  return it->second;
}

// Columns are Phi+, i Phi-, i Psi+, Psi- in the computational basis.
ComplexMatrix magic_basis() {
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, h};
  return ComplexMatrix{{h, i, 0.0, 0.0},
                       {0.0, 0.0, i, h},
                       {0.0, 0.0, i, -h},
                       {h, -i, 0.0, 0.0}};
}

}  // namespace

double binary_entropy(double x) {
  require_unit_interval(x, "binary_entropy argument");
  return 0.0 - xlogx(x) - xlogx(1.0 - x);
}

Nats pure_state_ree(const PureState& psi) {
  double s = 0.0;
  for (const double c : schmidt(psi).coefficients) s -= xlogx(c * c);
  return Nats::finite(s);
}

double pure_state_bures(const PureState& psi) {
  const auto coeffs = schmidt(psi).coefficients;
  const double a = coeffs.front() * coeffs.front();
  return 4.0 * a * (1.0 - a);
}

ClosedFormCase example1(double lambda) {
  require_unit_interval(lambda, "lambda");
  const double h = lambda / 2.0;
  ComplexMatrix sigma = lambda * bell_state(BellState::PhiPlus).projector();
  sigma += (1.0 - lambda) * basis_projector(1);
  ComplexMatrix rho(4);
  rho(0, 0) = h * (1.0 - h);
  rho(0, 3) = h * (1.0 - h);
  rho(3, 0) = h * (1.0 - h);
  rho(1, 1) = (1.0 - h) * (1.0 - h);
  rho(2, 2) = h * h;
  rho(3, 3) = h * (1.0 - h);
  const double e = (lambda - 2.0) * std::log(1.0 - h) + xlogx(1.0 - lambda);
  return {"example1", {{"lambda", lambda}}, DensityMatrix(sigma, kQubits),
          DensityMatrix(rho, kQubits), Nats::finite(e)};
}

ClosedFormCase example2(double lambda) {
  require_unit_interval(lambda, "lambda");
  const double h = lambda / 2.0;
  ComplexMatrix sigma = lambda * bell_state(BellState::PhiPlus).projector();
  sigma += (1.0 - lambda) * basis_projector(0);
  ComplexMatrix rho(4);
  rho(0, 0) = 1.0 - h;
  rho(3, 3) = h;
  const double root = std::sqrt(std::max(0.0, 1.0 - 2.0 * lambda * (1.0 - lambda)));
  const double sp = (1.0 + root) / 2.0;
  const double sm = (1.0 - root) / 2.0;
  const double e = xlogx(sp) + xlogx(sm) - xlogx(1.0 - h) - xlogx(h);
  return {"example2", {{"lambda", lambda}}, DensityMatrix(sigma, kQubits),
          DensityMatrix(rho, kQubits), Nats::finite(e)};
}

ClosedFormCase example3(double a, Complex b) {
  require_unit_interval(a, "A");
  if (std::norm(b) > a * (1.0 - a) + 1e-12) {
    throw std::invalid_argument("example3: |B|^2 must not exceed A(1 - A)");
  }
  ComplexMatrix sigma(4);
  sigma(0, 0) = a;
  sigma(3, 3) = 1.0 - a;
  sigma(0, 3) = b;
  sigma(3, 0) = std::conj(b);
  ComplexMatrix rho(4);
  rho(0, 0) = a;
  rho(3, 3) = 1.0 - a;
  const double root =
      std::sqrt(std::max(0.0, 1.0 - 4.0 * a * (1.0 - a) + 4.0 * std::norm(b)));
  const double ep = (1.0 + root) / 2.0;
  const double em = (1.0 - root) / 2.0;
  const double e = xlogx(ep) + xlogx(em) - xlogx(a) - xlogx(1.0 - a);
  return {"example3",
          {{"A", a}, {"B", b.real()}, {"B_im", b.imag()}},
          DensityMatrix(sigma, kQubits),
          DensityMatrix(rho, kQubits),
          Nats::finite(e)};
}

ClosedFormCase example4(double a, double b) {
  if (!(a >= 0.0 && a <= 0.5)) throw std::invalid_argument("example4: A must lie in [0, 1/2]");
  if (std::abs(b) > a) throw std::invalid_argument("example4: |B| must not exceed A");
  const double q = (1.0 - a) * (1.0 - a) - b * b;
  if (q <= 1e-12) throw std::invalid_argument("example4: (1 - A)^2 - B^2 must be positive");
  ComplexMatrix sigma(4);
  sigma(0, 0) = a;
  sigma(1, 1) = 1.0 - 2.0 * a;
  sigma(3, 3) = a;
  sigma(0, 3) = b;
  sigma(3, 0) = b;
  const double e = (1.0 - 2.0 * a) * (1.0 - a) * (1.0 - a) / q;
  const double c = 1.0 - a - e;
  const double d = (1.0 - 2.0 * a) * (1.0 - a) * b / q;
  ComplexMatrix rho(4);
  rho(0, 0) = c;
  rho(3, 3) = c;
  rho(0, 3) = d;
  rho(3, 0) = d;
  rho(1, 1) = e;
  rho(2, 2) = std::max(0.0, 1.0 - 2.0 * c - e);
  DensityMatrix s(sigma, kQubits);
  DensityMatrix r(rho, kQubits);
  const Nats value = relative_entropy(s, r);
  return {"example4", {{"A", a}, {"B", b}}, std::move(s), std::move(r), value};
}

ClosedFormCase example_case(int which, const std::map<std::string, double>& params) {
  switch (which) {
    case 1:
      return example1(require_param(params, "lambda"));
    case 2:
      return example2(require_param(params, "lambda"));
    case 3: {
      const auto im = params.find("B_im");
      return example3(require_param(params, "A"),
                      Complex{require_param(params, "B"), im == params.end() ? 0.0 : im->second});
    }
    case 4:
      return example4(require_param(params, "A"), require_param(params, "B"));
    default:
      throw std::invalid_argument("unknown example " + std::to_string(which));
  }
}

Nats bell_diagonal_ree(const BellDiagonal& weights) {
  const double f = weights.max_weight();
  if (f <= 0.5) return Nats::finite(0.0);
  return Nats::finite(xlogx(f) + xlogx(1.0 - f) + std::numbers::ln2);
}

bool outside_validated_bell_regime(const BellDiagonal& weights) {
  auto w = weights.weights;
  std::sort(w.begin(), w.end(), std::greater<>());
  return w[0] + w[1] > 0.5;
}

double max_singlet_fraction(const DensityMatrix& sigma) {
  if (!(sigma.dims() == kQubits)) throw std::invalid_argument("max_singlet_fraction: two qubits required");
  const ComplexMatrix m = magic_basis();
  const ComplexMatrix in_magic = m.adjoint() * sigma.matrix() * m;
  ComplexMatrix real_part(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) real_part(i, j) = in_magic(i, j).real();
  }
  return eig_hermitian(real_part).eigenvalues.front();
}

Nats werner_lower_bound(const DensityMatrix& sigma) {
  const double f = std::clamp(max_singlet_fraction(sigma), 0.0, 1.0);
  const double rest = (1.0 - f) / 3.0;
  return bell_diagonal_ree(BellDiagonal({f, rest, rest, 1.0 - f - 2.0 * rest}));
}

double concurrence(const DensityMatrix& sigma) {
  if (!(sigma.dims() == kQubits)) throw std::invalid_argument("concurrence: two qubits required");
  const ComplexMatrix yy{{0.0, 0.0, 0.0, -1.0},
                         {0.0, 0.0, 1.0, 0.0},
                         {0.0, 1.0, 0.0, 0.0},
                         {-1.0, 0.0, 0.0, 0.0}};
  const ComplexMatrix& rho = sigma.matrix();
  const ComplexMatrix tilde = yy * rho.conjugate() * yy;
  // sqrt(rho) tilde sqrt(rho) restricted to rho's support, so that the
  // vanishing eigenvalues of low-rank states are exact zeros.
  const ComplexMatrix compressed = FidelityEvaluator(rho).compressed(tilde).hermitian_part();
  const auto spectrum = eig_hermitian(compressed).eigenvalues;
  std::array<double, 4> l{};
  for (std::size_t k = 0; k < spectrum.size(); ++k) l[k] = std::sqrt(std::max(spectrum[k], 0.0));
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Nats eof_two_qubit(const DensityMatrix& sigma) {
  const double c = std::min(concurrence(sigma), 1.0);
  return Nats::finite(binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0));
}

}  // namespace entcalc
