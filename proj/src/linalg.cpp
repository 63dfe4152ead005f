#include "entcalc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entcalc {

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw std::invalid_argument("ComplexMatrix: expected " +
                                std::to_string(dim_ * dim_) + " entries, got " +
                                std::to_string(entries_.size()));
  }
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw std::invalid_argument("ComplexMatrix: rows must form a square");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (auto& z : out.entries_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (other.dim_ != dim_) {
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    worst = std::max(worst, std::abs(entries_[k] - other.entries_[k]));
  }
  return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    }
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw std::invalid_argument("matrix +: dim mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw std::invalid_argument("matrix -: dim mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : entries_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw std::invalid_argument("matrix *: dim mismatch");
  const std::size_t n = lhs.dim_;
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

std::vector<Complex> multiply(const ComplexMatrix& m, std::span<const Complex> v) {
  if (v.size() != m.dim()) throw std::invalid_argument("multiply: dim mismatch");
  std::vector<Complex> out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < m.dim(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner: size mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_product_real: dim mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t k = 0; k < a.dim(); ++k) {
      acc += (a(i, k) * b(k, i)).real();
    }
  }
  return acc;
}

ComplexMatrix Spectrum::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) {
        acc += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

std::vector<Complex> Spectrum::eigenvector(std::size_t k) const {
  std::vector<Complex> v(eigenvalues.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
  return v;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) {
          out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

std::vector<Complex> tensor(std::span<const Complex> a,
                            std::span<const Complex> b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const Complex x : a) {
    for (const Complex y : b) out.push_back(x * y);
  }
  return out;
}

namespace {

void check_bipartite(const ComplexMatrix& m, Dims dims, const char* what) {
  if (dims.a == 0 || dims.b == 0 || m.dim() != dims.total()) {
    throw std::invalid_argument(std::string(what) + ": matrix dimension " +
                                std::to_string(m.dim()) + " does not match " +
                                std::to_string(dims.a) + "x" +
                                std::to_string(dims.b));
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims,
                            Subsystem traced) {
  check_bipartite(m, dims, "partial_trace");
  const std::size_t da = dims.a;
  const std::size_t db = dims.b;
  if (traced == Subsystem::B) {
    ComplexMatrix out(da);
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < da; ++j) {
        for (std::size_t k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
      }
    }
    return out;
  }
  ComplexMatrix out(db);
  for (std::size_t k = 0; k < db; ++k) {
    for (std::size_t l = 0; l < db; ++l) {
      for (std::size_t i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims,
                                Subsystem subsystem) {
  check_bipartite(m, dims, "partial_transpose");
  const std::size_t da = dims.a;
  const std::size_t db = dims.b;
  ComplexMatrix out(m.dim());
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < da; ++j) {
      for (std::size_t k = 0; k < db; ++k) {
        for (std::size_t l = 0; l < db; ++l) {
          out(i * db + k, j * db + l) = subsystem == Subsystem::B
                                            ? m(i * db + l, j * db + k)
                                            : m(j * db + k, i * db + l);
        }
      }
    }
  }
  return out;
}

Spectrum eig_hermitian(const ComplexMatrix& m, double hermitian_tol) {
  const std::size_t n = m.dim();
  if (!m.is_hermitian(hermitian_tol)) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  }
  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double norm2 = 0.0;
  for (const Complex z : a.entries()) norm2 += std::norm(z);
  // Off-diagonal Frobenius target; scaled so large-norm inputs stay reachable.
  const double target = 1e-14 * std::max(1.0, std::sqrt(norm2));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        if (p != q) s += std::norm(a(p, q));
      }
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() < target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = apq / r;

        const double theta = (aqq - app) / (2.0 * r);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // U = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q).
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged && off_norm() >= target) {
    throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  Spectrum out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix spectral_apply(const Spectrum& spectrum,
                             const std::function<double(double)>& f) {
  std::vector<double> mapped(spectrum.eigenvalues.size());
  std::transform(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                 mapped.begin(), f);
  Spectrum tmp{std::move(mapped), spectrum.eigenvectors};
  return tmp.reconstruct();
}

ComplexMatrix matrix_log(const ComplexMatrix& m, double clamp) {
  const Spectrum spec = eig_hermitian(m);
  if (spec.eigenvalues.back() < -1e-10) {
    throw std::domain_error("matrix_log: negative eigenvalue " +
                            std::to_string(spec.eigenvalues.back()));
  }
  return spectral_apply(spec,
                        [clamp](double x) { return std::log(std::max(x, clamp)); });
}

ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m) {
  return spectral_apply(eig_hermitian(m), [](double x) { return std::exp(x); });
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  const Spectrum spec = eig_hermitian(m);
  if (spec.eigenvalues.back() < -1e-10) {
    throw std::domain_error("matrix_sqrt_psd: negative eigenvalue " +
                            std::to_string(spec.eigenvalues.back()));
  }
  return spectral_apply(spec,
                        [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double log_divided_difference(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw std::domain_error("log_divided_difference: arguments must be positive");
  }
  if (p == q) return 1.0 / p;
  const double ratio = p / q;
  if (ratio > 0.5 && ratio < 2.0) return std::log1p((p - q) / q) / (p - q);
  return (std::log(p) - std::log(q)) / (p - q);
}

double frechet_kernel(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("frechet_kernel: arguments must lie in [0, 1]");
  }
  if (p == 0.0 && q == 0.0) {
    throw std::domain_error("frechet_kernel: undefined at p = q = 0");
  }
  if (p == q) return 1.0;
  if (p == 0.0 || q == 0.0) return 0.0;
  return std::sqrt(p * q) * log_divided_difference(p, q);
}

}  // namespace entcalc
