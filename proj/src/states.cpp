#include "entcalc/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entcalc {

namespace {

void require_dims(Dims dims, std::size_t size, const char* what) {
  if (dims.a == 0 || dims.b == 0 || dims.total() != size) {
    throw std::invalid_argument(std::string(what) + ": dims " + std::to_string(dims.a) +
                                "x" + std::to_string(dims.b) +
                                " inconsistent with size " + std::to_string(size));
  }
}

std::array<Complex, 2> qubit(double theta, double phase) {
  return {Complex{std::cos(theta), 0.0}, std::polar(std::sin(theta), phase)};
}

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes, Dims dims)
    : amplitudes_(std::move(amplitudes)), dims_(dims) {
  require_dims(dims_, amplitudes_.size(), "PureState");
  double norm2 = 0.0;
  for (const Complex z : amplitudes_) norm2 += std::norm(z);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
    throw std::invalid_argument("PureState: amplitudes are not unit norm");
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims)
    : matrix_(std::move(matrix)), dims_(dims) {
  require_dims(dims_, matrix_.dim(), "DensityMatrix");
  if (!matrix_.is_hermitian(kStateTolerance)) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kStateTolerance) {
    throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr.real()) +
                                ", expected 1");
  }
  const double lo = eig_hermitian(matrix_).eigenvalues.back();
  if (lo < -kStateTolerance) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(lo));
  }
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : DensityMatrix(psi.projector(), psi.dims()) {}

double DensityMatrix::purity() const {
  return trace_product_real(matrix_, matrix_);
}

double DensityMatrix::min_eigenvalue() const {
  return eig_hermitian(matrix_).eigenvalues.back();
}

DensityMatrix DensityMatrix::reduced(Subsystem traced) const {
  const ComplexMatrix r = partial_trace(matrix_, dims_, traced);
  return DensityMatrix(r, traced == Subsystem::B ? Dims{dims_.a, 1} : Dims{1, dims_.b});
}

DensityMatrix DensityMatrix::mix(double w, const DensityMatrix& a,
                                 const DensityMatrix& b) {
  if (!(a.dims() == b.dims())) throw std::invalid_argument("mix: dims differ");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("mix: weight outside [0, 1]");
  return DensityMatrix(w * a.matrix() + (1.0 - w) * b.matrix(), a.dims());
}

DensityMatrix product_state(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  return DensityMatrix(tensor(rho_a.matrix(), rho_b.matrix()),
                       Dims{rho_a.dim(), rho_b.dim()});
}

std::array<double, SeparableAngles::kParameters> SeparableAngles::flat() const {
  std::array<double, kParameters> out{};
  auto it = std::copy(phi.begin(), phi.end(), out.begin());
  it = std::copy(alpha.begin(), alpha.end(), it);
  it = std::copy(beta.begin(), beta.end(), it);
  it = std::copy(eta.begin(), eta.end(), it);
  std::copy(mu.begin(), mu.end(), it);
  return out;
}

SeparableAngles SeparableAngles::from_flat(std::span<const double> values) {
  if (values.size() != kParameters) {
    throw std::invalid_argument("SeparableAngles: expected 79 parameters, got " +
                                std::to_string(values.size()));
  }
  SeparableAngles out;
  auto it = values.begin();
  std::copy_n(it, kMixing, out.phi.begin());
  it += kMixing;
  std::copy_n(it, kTerms, out.alpha.begin());
  it += kTerms;
  std::copy_n(it, kTerms, out.beta.begin());
  it += kTerms;
  std::copy_n(it, kTerms, out.eta.begin());
  it += kTerms;
  std::copy_n(it, kTerms, out.mu.begin());
  return out;
}

std::array<double, SeparableAngles::kTerms> SeparableAngles::weights() const {
  // Term i (0-based) uses sin(phi_{i}) with phi at 1-based index i, where
  // phi_0 = pi/2, and the cosines of phi_{i+1} .. phi_15.
  std::array<double, kTerms> w{};
  double tail = 1.0;  // prod_{j > i} cos^2(phi_j), built from the top down
  for (std::size_t i = kTerms; i-- > 0;) {
    const double s = i == 0 ? 1.0 : std::sin(phi[i - 1]);
    w[i] = s * s * tail;
    if (i > 0) {
      const double c = std::cos(phi[i - 1]);
      tail *= c * c;
    }
  }
  return w;
}

std::array<Complex, 2> SeparableAngles::local_a(std::size_t term) const {
  return qubit(alpha.at(term), eta.at(term));
}

std::array<Complex, 2> SeparableAngles::local_b(std::size_t term) const {
  return qubit(beta.at(term), mu.at(term));
}

ComplexMatrix realize_matrix(const SeparableAngles& angles) {
  const auto w = angles.weights();
  ComplexMatrix rho(4);
  for (std::size_t t = 0; t < SeparableAngles::kTerms; ++t) {
    if (w[t] == 0.0) continue;
    const auto v = tensor(angles.local_a(t), angles.local_b(t));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) rho(i, j) += w[t] * v[i] * std::conj(v[j]);
    }
  }
  return rho;
}

DensityMatrix realize(const SeparableAngles& angles) {
  return DensityMatrix(realize_matrix(angles), Dims{2, 2});
}

SeparableAngles encode_product_mixture(std::span<const ProductTerm> terms) {
  constexpr std::size_t n = SeparableAngles::kTerms;
  if (terms.empty() || terms.size() > n) {
    throw std::invalid_argument("encode_product_mixture: need 1 to 16 terms");
  }
  double total = 0.0;
  for (const auto& t : terms) {
    if (t.weight < 0.0) throw std::invalid_argument("encode_product_mixture: negative weight");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("encode_product_mixture: weights must sum to 1");
  }

  SeparableAngles out;
  std::array<double, n> w{};
  for (std::size_t i = 0; i < terms.size(); ++i) w[i] = terms[i].weight / total;

  // Cumulative sums R_m = w_1 + ... + w_m satisfy cos^2(phi_m) = R_m / R_{m+1}.
  std::array<double, n + 1> cumulative{};
  for (std::size_t i = 0; i < n; ++i) cumulative[i + 1] = cumulative[i] + w[i];
  cumulative[n] = 1.0;
  for (std::size_t m = 1; m < n; ++m) {
    const double upper = cumulative[m + 1];
    const double ratio = upper > 0.0 ? std::clamp(cumulative[m] / upper, 0.0, 1.0) : 1.0;
    out.phi[m - 1] = std::acos(std::sqrt(ratio));
  }

  auto encode_local = [](const std::array<Complex, 2>& v, double& theta, double& phase) {
    const double n0 = std::abs(v[0]);
    const double n1 = std::abs(v[1]);
    if (n0 == 0.0 && n1 == 0.0) {
      throw std::invalid_argument("encode_product_mixture: zero local vector");
    }
    theta = std::atan2(n1, n0);
    phase = n1 > 0.0 ? std::arg(v[1]) - (n0 > 0.0 ? std::arg(v[0]) : 0.0) : 0.0;
  };
  for (std::size_t i = 0; i < terms.size(); ++i) {
    encode_local(terms[i].a, out.alpha[i], out.eta[i]);
    encode_local(terms[i].b, out.beta[i], out.mu[i]);
  }
  return out;
}

namespace {

// Appends to `basis` unit vectors orthogonal to everything already present
// until it holds `count` vectors.
void complete_basis(std::vector<std::vector<Complex>>& basis, std::size_t dim,
                    std::size_t count) {
  for (std::size_t e = 0; e < dim && basis.size() < count; ++e) {
    std::vector<Complex> v(dim, Complex{0.0, 0.0});
    v[e] = 1.0;
    for (const auto& u : basis) {
      const Complex c = inner(u, v);
      for (std::size_t i = 0; i < dim; ++i) v[i] -= c * u[i];
    }
    double n2 = 0.0;
    for (const Complex z : v) n2 += std::norm(z);
    if (n2 < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& z : v) z *= inv;
    basis.push_back(std::move(v));
  }
}

}  // namespace

SchmidtDecomposition schmidt(const PureState& psi) {
  const Dims d = psi.dims();
  const auto amp = psi.amplitudes();
  const bool swap = d.a > d.b;
  const std::size_t rows = swap ? d.b : d.a;
  const std::size_t cols = swap ? d.a : d.b;
  // M is rows x cols; for swapped input it is the transpose of the amplitude
  // matrix so that the smaller factor indexes the Gram matrix.
  auto m = [&](std::size_t r, std::size_t c) {
    return swap ? amp[c * d.b + r] : amp[r * d.b + c];
  };

  ComplexMatrix gram(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < cols; ++k) acc += m(i, k) * std::conj(m(j, k));
      gram(i, j) = acc;
    }
  }
  const Spectrum spec = eig_hermitian(gram);

  SchmidtDecomposition out;
  std::vector<std::vector<Complex>> left;
  std::vector<std::vector<Complex>> right;
  for (std::size_t k = 0; k < rows; ++k) {
    const double s = std::sqrt(std::max(spec.eigenvalues[k], 0.0));
    out.coefficients.push_back(s);
    left.push_back(spec.eigenvector(k));
    if (s > 1e-14) {
      std::vector<Complex> v(cols);
      for (std::size_t c = 0; c < cols; ++c) {
        Complex acc{0.0, 0.0};
        for (std::size_t r = 0; r < rows; ++r) acc += std::conj(left[k][r]) * m(r, c);
        v[c] = acc / s;
      }
      right.push_back(std::move(v));
    }
  }
  complete_basis(right, cols, rows);
  if (swap) {
    out.basis_a = std::move(right);
    out.basis_b = std::move(left);
  } else {
    out.basis_a = std::move(left);
    out.basis_b = std::move(right);
  }
  return out;
}

PureState bell_state(BellState which) {
  const double h = 1.0 / std::numbers::sqrt2;
  std::vector<Complex> v(4, Complex{0.0, 0.0});
  switch (which) {
    case BellState::PhiPlus:
      v[0] = h;
      v[3] = h;
      break;
    case BellState::PhiMinus:
      v[0] = h;
      v[3] = -h;
      break;
    case BellState::PsiPlus:
      v[1] = h;
      v[2] = h;
      break;
    case BellState::PsiMinus:
      v[1] = h;
      v[2] = -h;
      break;
  }
  return PureState(std::move(v), Dims{2, 2});
}

BellDiagonal::BellDiagonal(std::array<double, 4> w) : weights(w) {
  double total = 0.0;
  for (const double x : weights) {
    if (x < 0.0) throw std::invalid_argument("BellDiagonal: negative weight");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("BellDiagonal: weights must sum to 1");
  }
}

DensityMatrix BellDiagonal::state() const {
  constexpr std::array kinds{BellState::PhiPlus, BellState::PhiMinus,
                             BellState::PsiPlus, BellState::PsiMinus};
  ComplexMatrix m(4);
  for (std::size_t k = 0; k < 4; ++k) {
    if (weights[k] != 0.0) m += weights[k] * bell_state(kinds[k]).projector();
  }
  return DensityMatrix(std::move(m), Dims{2, 2});
}

double BellDiagonal::max_weight() const {
  return *std::max_element(weights.begin(), weights.end());
}

DensityMatrix werner(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw std::invalid_argument("werner: F must lie in [0, 1]");
  }
  const double rest = (1.0 - fidelity) / 3.0;
  return BellDiagonal({fidelity, rest, rest, rest}).state();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Complex> random_unit_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> v(dim);
  double n2 = 0.0;
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex{re, im};
    n2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& z : v) z *= inv;
  return v;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  // Gram-Schmidt on complex Ginibre columns gives the QR factor with positive
  // diagonal R, which is Haar distributed.
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
  for (auto& col : cols) {
    for (auto& z : col) {
      const double re = normal(rng);
      const double im = normal(rng);
      z = Complex{re, im};
    }
  }
  ComplexMatrix u(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    auto& v = cols[j];
    for (std::size_t k = 0; k < j; ++k) {
      const Complex c = inner(cols[k], v);
      for (std::size_t i = 0; i < dim; ++i) v[i] -= c * cols[k][i];
    }
    double n2 = 0.0;
    for (const Complex z : v) n2 += std::norm(z);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& z : v) z *= inv;
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = v[i];
  }
  return u;
}

PureState random_pure(Dims dims, std::uint64_t seed) {
  Rng rng(seed);
  return PureState(random_unit_vector(dims.total(), rng), dims);
}

DensityMatrix random_density(Dims dims, std::size_t rank, std::uint64_t seed) {
  const std::size_t n = dims.total();
  if (rank == 0 || rank > n) {
    throw std::invalid_argument("random_density: rank must be in [1, d_A d_B]");
  }
  Rng rng(seed);
  const auto psi = random_unit_vector(n * rank, rng);
  ComplexMatrix rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t e = 0; e < rank; ++e) {
        acc += psi[i * rank + e] * std::conj(psi[j * rank + e]);
      }
      rho(i, j) = acc;
    }
  }
  // Renormalise the trace against rounding.
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix(rho.hermitian_part(), dims);
}

std::pair<ComplexMatrix, ComplexMatrix> random_local_unitary(std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix ua = random_unitary(2, rng);
  ComplexMatrix ub = random_unitary(2, rng);
  return {std::move(ua), std::move(ub)};
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub) {
  const ComplexMatrix u = tensor(ua, ub);
  return DensityMatrix((u * rho.matrix() * u.adjoint()).hermitian_part(), rho.dims());
}

}  // namespace entcalc
