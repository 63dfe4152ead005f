#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace entcalc {

using Complex = std::complex<double>;

/// Dense square complex matrix stored row-major.
///
/// Sized for the small bipartite systems handled here (dimension 16 at most
/// in practice); every operation returns a fresh value.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v| for an (unnormalised) column vector v.
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return dim_; }
  std::span<const Complex> entries() const { return entries_; }

  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_[row * dim_ + col];
  }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  /// Largest elementwise modulus of (*this - other).
  double max_abs_diff(const ComplexMatrix& other) const;
  bool is_hermitian(double tol) const;
  /// (M + M^dagger) / 2
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scalar) {
    return lhs *= scalar;
  }
  friend ComplexMatrix operator*(Complex scalar, ComplexMatrix rhs) {
    return rhs *= scalar;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs,
                                 const ComplexMatrix& rhs);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

/// Matrix-vector product.
std::vector<Complex> multiply(const ComplexMatrix& m, std::span<const Complex> v);

/// <u|v>
Complex inner(std::span<const Complex> u, std::span<const Complex> v);

/// Re tr(a b), without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

/// Bipartite dimensions (d_A, d_B). Product basis is lexicographic:
/// index = i_A * d_B + i_B.
struct Dims {
  std::size_t a = 2;
  std::size_t b = 2;

  std::size_t total() const { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { A, B };

/// Eigenvalues in descending order with the matching unit eigenvectors stored
/// as the columns of `eigenvectors`.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
  std::vector<Complex> eigenvector(std::size_t k) const;
};

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<Complex> tensor(std::span<const Complex> a,
                            std::span<const Complex> b);

/// Traces out `traced` and returns the reduced operator on the other factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims,
                            Subsystem traced);

/// Transposes the indices of `subsystem` in the product basis.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims,
                                Subsystem subsystem = Subsystem::B);

inline constexpr double kHermitianTolerance = 1e-10;

/// Cyclic Jacobi eigensolver for Hermitian matrices. Throws
/// std::invalid_argument when the input departs from Hermiticity by more
/// than `hermitian_tol` in any entry.
Spectrum eig_hermitian(const ComplexMatrix& m,
                       double hermitian_tol = kHermitianTolerance);

/// V f(Lambda) V^dagger
ComplexMatrix spectral_apply(const Spectrum& spectrum,
                             const std::function<double(double)>& f);

inline constexpr double kDefaultLogClamp = 1e-12;

/// V diag(ln max(lambda_i, clamp)) V^dagger. Throws std::domain_error when an
/// eigenvalue lies below -1e-10.
ComplexMatrix matrix_log(const ComplexMatrix& m,
                         double clamp = kDefaultLogClamp);

/// exp of a Hermitian matrix.
ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m);

/// Principal square root of a positive semidefinite matrix; eigenvalues in
/// [-1e-10, 0) are treated as zero.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);

/// g(p, q) = sqrt(pq) ln(q/p) / (q - p), with g(p, p) = 1. Defined on
/// [0, 1]^2 minus the origin; zero when exactly one argument vanishes.
double frechet_kernel(double p, double q);

/// k(p, q) = (ln p - ln q) / (p - q), with k(p, p) = 1 / p. Both arguments
/// must be positive. The first divided difference of the logarithm.
double log_divided_difference(double p, double q);

}  // namespace entcalc
