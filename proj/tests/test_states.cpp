#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "entcalc/states.hpp"
#include "entcalc/verify.hpp"
#include "oracle.hpp"

using namespace entcalc;

namespace {

constexpr Dims kQubits{2, 2};

SeparableAngles random_angles(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::array<double, SeparableAngles::kParameters> flat{};
  for (auto& x : flat) x = u(rng);
  return SeparableAngles::from_flat(flat);
}

// Singular values of the dA x dB amplitude matrix.
Eigen::VectorXd singular_values(const PureState& psi) {
  const Dims d = psi.dims();
  Eigen::MatrixXcd c(d.a, d.b);
  for (std::size_t i = 0; i < d.a; ++i) {
    for (std::size_t j = 0; j < d.b; ++j) c(i, j) = psi.amplitudes()[i * d.b + j];
  }
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(c).singularValues();
}

PureState rotate(const PureState& psi, const ComplexMatrix& ua, const ComplexMatrix& ub) {
  const auto v = multiply(tensor(ua, ub), psi.amplitudes());
  return PureState(v, psi.dims());
}

}  // namespace

TEST_CASE("density matrix validation") {
  const std::array<double, 4> ok{0.5, 0.5, 0.0, 0.0};
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix::diagonal(ok), kQubits));
  const std::array<double, 4> trace2{1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal(trace2), kQubits), std::invalid_argument);
  const std::array<double, 4> negative{1.1, -0.1, 0.0, 0.0};
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal(negative), kQubits), std::invalid_argument);
  ComplexMatrix skew = ComplexMatrix::diagonal(ok);
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(skew, kQubits), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal(ok), Dims{2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(PureState({1.0, 1.0, 0.0, 0.0}, kQubits), std::invalid_argument);
}

TEST_CASE("density matrix helpers") {
  const DensityMatrix phi(bell_state(BellState::PhiPlus));
  CHECK(phi.purity() == doctest::Approx(1.0));
  CHECK(std::abs(phi.min_eigenvalue()) < 1e-15);
  CHECK(phi.reduced(Subsystem::B).matrix().max_abs_diff(0.5 * ComplexMatrix::identity(2)) < 1e-15);
  const DensityMatrix mixed = DensityMatrix::mix(0.25, phi, werner(0.25));
  CHECK(mixed.matrix().max_abs_diff(0.25 * phi.matrix() + 0.75 * werner(0.25).matrix()) < 1e-15);

  std::mt19937_64 rng(3);
  const oracle::Mat ra = oracle::random_density(2, rng), rb = oracle::random_density(3, rng);
  const DensityMatrix prod = product_state(DensityMatrix(oracle::from_eigen(ra), {1, 2}),
                                           DensityMatrix(oracle::from_eigen(rb), {1, 3}));
  CHECK(prod.dims() == Dims{2, 3});
  CHECK(prod.matrix().max_abs_diff(oracle::from_eigen(Eigen::kroneckerProduct(ra, rb).eval())) < 1e-15);
}

TEST_CASE("realize examples") {
  SeparableAngles zero;
  const std::array<double, 4> d00{1.0, 0.0, 0.0, 0.0};
  CHECK(realize(zero).matrix().max_abs_diff(ComplexMatrix::diagonal(d00)) < 1e-15);

  const double a2 = 0.3;
  SeparableAngles two;
  two.phi[0] = std::acos(std::sqrt(a2));
  two.alpha[1] = std::numbers::pi / 2;
  two.beta[1] = std::numbers::pi / 2;
  const std::array<double, 4> expected{a2, 0.0, 0.0, 1.0 - a2};
  CHECK(realize(two).matrix().max_abs_diff(ComplexMatrix::diagonal(expected)) < 1e-15);
}

TEST_CASE("realize weights sum to one and states are PPT") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const SeparableAngles a = random_angles(rng);
    double total = 0.0;
    for (const double w : a.weights()) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const DensityMatrix rho = realize(a);
    CHECK(rho.min_eigenvalue() >= -1e-12);
    CHECK(min_partial_transpose_eigenvalue(rho) >= -1e-12);
    CHECK(oracle::min_eigenvalue(oracle::partial_transpose_b(oracle::to_eigen(rho.matrix()), 2, 2)) >=
          -1e-12);
    CHECK(realize_matrix(a).max_abs_diff(rho.matrix()) == 0.0);
    CHECK(SeparableAngles::from_flat(a.flat()) == a);
  }
  CHECK_THROWS_AS(SeparableAngles::from_flat(std::vector<double>(78)), std::invalid_argument);
}

TEST_CASE("realize is the weighted sum of its local product terms") {
  std::mt19937_64 rng(5);
  const SeparableAngles a = random_angles(rng);
  ComplexMatrix sum(4);
  for (std::size_t i = 0; i < SeparableAngles::kTerms; ++i) {
    const auto la = a.local_a(i), lb = a.local_b(i);
    sum += a.weights()[i] * tensor(ComplexMatrix::outer(la), ComplexMatrix::outer(lb));
  }
  CHECK(sum.max_abs_diff(realize(a).matrix()) < 1e-14);
}

TEST_CASE("encode_product_mixture inverts realize") {
  std::mt19937_64 rng(6);
  for (std::size_t terms : {1u, 2u, 5u, 16u}) {
    std::vector<ProductTerm> mixture;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double total = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
      ProductTerm t;
      t.weight = u(rng);
      total += t.weight;
      const auto va = random_unit_vector(2, rng), vb = random_unit_vector(2, rng);
      std::copy(va.begin(), va.end(), t.a.begin());
      std::copy(vb.begin(), vb.end(), t.b.begin());
      mixture.push_back(t);
    }
    ComplexMatrix expected(4);
    for (auto& t : mixture) {
      t.weight /= total;
      expected += t.weight * tensor(ComplexMatrix::outer(t.a), ComplexMatrix::outer(t.b));
    }
    CHECK(realize(encode_product_mixture(mixture)).matrix().max_abs_diff(expected) < 1e-13);
  }
  CHECK_THROWS_AS(encode_product_mixture(std::vector<ProductTerm>{}), std::invalid_argument);
  CHECK_THROWS_AS(encode_product_mixture(std::vector<ProductTerm>(17, ProductTerm{1.0 / 17, {1.0, 0.0}, {1.0, 0.0}})),
                  std::invalid_argument);
}

TEST_CASE("schmidt examples") {
  const auto phi = schmidt(bell_state(BellState::PhiPlus)).coefficients;
  CHECK(phi[0] == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(phi[1] == doctest::Approx(1.0 / std::numbers::sqrt2));
  const auto prod = schmidt(PureState({1.0, 0.0, 0.0, 0.0}, kQubits)).coefficients;
  CHECK(prod[0] == doctest::Approx(1.0));
  CHECK(std::abs(prod[1]) < 1e-15);

  const double alpha = std::sqrt(0.2), beta = std::sqrt(0.8);
  const PureState psi({alpha, 0.0, 0.0, beta}, kQubits);
  const auto [ua, ub] = random_local_unitary(9);
  const auto rotated = schmidt(rotate(psi, ua, ub)).coefficients;
  CHECK(rotated[0] == doctest::Approx(beta).epsilon(1e-12));
  CHECK(rotated[1] == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("schmidt matches singular values, reconstructs, and is local-unitary invariant") {
  for (const Dims dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const PureState psi = random_pure(dims, seed);
      const SchmidtDecomposition s = schmidt(psi);
      const Eigen::VectorXd sv = singular_values(psi);
      double norm = 0.0;
      REQUIRE(s.coefficients.size() == static_cast<std::size_t>(sv.size()));
      for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
        CHECK(s.coefficients[k] == doctest::Approx(sv(k)).epsilon(1e-12));
        if (k > 0) CHECK(s.coefficients[k] <= s.coefficients[k - 1]);
        norm += s.coefficients[k] * s.coefficients[k];
      }
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

      std::vector<Complex> rebuilt(dims.total());
      for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
        const auto term = tensor(s.basis_a[k], s.basis_b[k]);
        for (std::size_t i = 0; i < rebuilt.size(); ++i) rebuilt[i] += s.coefficients[k] * term[i];
      }
      for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        CHECK(std::abs(rebuilt[i] - psi.amplitudes()[i]) < 1e-10);
      }

      if (dims == kQubits) {
        const auto [ua, ub] = random_local_unitary(seed + 100);
        const auto after = schmidt(rotate(psi, ua, ub)).coefficients;
        for (std::size_t k = 0; k < after.size(); ++k) {
          CHECK(std::abs(after[k] - s.coefficients[k]) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("bell states") {
  const auto phi = bell_state(BellState::PhiPlus);
  const double h = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(phi.amplitudes()[0] - h) < 1e-16);
  CHECK(std::abs(phi.amplitudes()[3] - h) < 1e-16);
  const auto psi = bell_state(BellState::PsiMinus);
  CHECK(std::abs(psi.amplitudes()[1] - h) < 1e-16);
  CHECK(std::abs(psi.amplitudes()[2] + h) < 1e-16);
  const std::array<BellState, 4> all{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                                     BellState::PsiMinus};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double overlap = std::norm(inner(bell_state(all[i]).amplitudes(), bell_state(all[j]).amplitudes()));
      CHECK(overlap == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("werner examples") {
  CHECK(werner(1.0).matrix().max_abs_diff(bell_state(BellState::PhiPlus).projector()) < 1e-15);
  CHECK(werner(0.25).matrix().max_abs_diff(0.25 * ComplexMatrix::identity(4)) < 1e-15);
  CHECK(std::abs(oracle::min_eigenvalue(
            oracle::partial_transpose_b(oracle::to_eigen(werner(0.5).matrix()), 2, 2))) < 1e-15);
  CHECK_THROWS_AS(werner(1.5), std::invalid_argument);
  CHECK_THROWS_AS(werner(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal({0.5, 0.5, 0.5, 0.0}), std::invalid_argument);
  CHECK(BellDiagonal({0.1, 0.6, 0.2, 0.1}).max_weight() == 0.6);
}

TEST_CASE("werner is invariant under U x U*") {
  std::mt19937_64 rng(7);
  for (const double f : {0.1, 0.4, 0.5, 0.8, 1.0}) {
    const DensityMatrix w = werner(f);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix u = random_unitary(2, rng);
      const DensityMatrix rotated = apply_local_unitary(w, u, u.conjugate());
      CHECK(rotated.matrix().max_abs_diff(w.matrix()) < 1e-10);
    }
  }
}

TEST_CASE("random generators") {
  const DensityMatrix pure = random_density(kQubits, 1, 5);
  CHECK(pure.purity() == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t rank = 1; rank <= 4; ++rank) {
    const DensityMatrix rho = random_density(kQubits, rank, 100 + rank);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::to_eigen(rho.matrix()));
    int nonzero = 0;
    for (int k = 0; k < 4; ++k) nonzero += es.eigenvalues()(k) > 1e-10;
    CHECK(nonzero == static_cast<int>(rank));
  }
  CHECK_THROWS_AS(random_density(kQubits, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_density(kQubits, 5, 1), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [ua, ub] = random_local_unitary(seed);
    CHECK((ua.adjoint() * ua).max_abs_diff(ComplexMatrix::identity(2)) < 1e-12);
    CHECK((ub.adjoint() * ub).max_abs_diff(ComplexMatrix::identity(2)) < 1e-12);
  }

  Rng rng(8);
  const ComplexMatrix u = random_unitary(6, rng);
  CHECK((u.adjoint() * u).max_abs_diff(ComplexMatrix::identity(6)) < 1e-12);
  const auto v = random_unit_vector(5, rng);
  CHECK(std::abs(inner(v, v) - 1.0) < 1e-14);
}

TEST_CASE("random generators are deterministic per seed") {
  const auto a = random_density(kQubits, 3, 42), b = random_density(kQubits, 3, 42);
  CHECK(a.matrix().max_abs_diff(b.matrix()) == 0.0);
  const auto c = random_density(kQubits, 3, 43);
  CHECK(a.matrix().max_abs_diff(c.matrix()) > 0.0);
  const auto p = random_pure(kQubits, 42), q = random_pure(kQubits, 42);
  CHECK(std::equal(p.amplitudes().begin(), p.amplitudes().end(), q.amplitudes().begin()));
  const auto [u1, v1] = random_local_unitary(42);
  const auto [u2, v2] = random_local_unitary(42);
  CHECK(u1.max_abs_diff(u2) == 0.0);
  CHECK(v1.max_abs_diff(v2) == 0.0);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("Haar unitaries have the expected first moment") {
  // E|U_00|^2 = 1/d for Haar-distributed U.
  Rng rng(9);
  double sum = 0.0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) sum += std::norm(random_unitary(4, rng)(0, 0));
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.05));
}
