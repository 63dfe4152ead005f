#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "entcalc/analytic.hpp"
#include "entcalc/optimizer.hpp"
#include "entcalc/verify.hpp"
#include "oracle.hpp"

using namespace entcalc;

namespace {

constexpr Dims kQubits{2, 2};
constexpr double kLn2 = std::numbers::ln2;

PureState schmidt_form(double a2) {
  return PureState({std::sqrt(a2), 0.0, 0.0, std::sqrt(1.0 - a2)}, kQubits);
}

double h_nats(double x) {
  double s = 0.0;
  if (x > 0) s -= x * std::log(x);
  if (x < 1) s -= (1 - x) * std::log(1 - x);
  return s;
}

// Wootters concurrence from the non-Hermitian product rho (yy rho* yy).
double concurrence_oracle(const DensityMatrix& sigma) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd rho = oracle::to_eigen(sigma.matrix());
  const Eigen::Matrix4cd product = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product);
  std::array<double, 4> l{};
  for (int k = 0; k < 4; ++k) l[k] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Largest <psi|sigma|psi> over maximally entangled psi = (U x 1)|Phi+>, by
// Haar sampling followed by coordinate ascent on U = e^{i a} R(b, c, d).
double singlet_fraction_search(const DensityMatrix& sigma, std::uint64_t seed) {
  const oracle::Mat s = oracle::to_eigen(sigma.matrix());
  Eigen::Vector4cd phi;
  phi << 1.0 / std::numbers::sqrt2, 0.0, 0.0, 1.0 / std::numbers::sqrt2;
  auto unitary = [](const std::array<double, 3>& p) {
    Eigen::Matrix2cd u;
    const Complex e1 = std::polar(1.0, p[1]), e2 = std::polar(1.0, p[2]);
    u << std::cos(p[0]) * e1, -std::sin(p[0]) * std::conj(e2), std::sin(p[0]) * e2,
        std::cos(p[0]) * std::conj(e1);
    return u;
  };
  auto value = [&](const std::array<double, 3>& p) {
    const Eigen::Vector4cd v = Eigen::kroneckerProduct(unitary(p), Eigen::Matrix2cd::Identity()).eval() * phi;
    return (v.adjoint() * s * v)(0, 0).real();
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::array<double, 3> best{};
  double best_value = -1.0;
  for (int k = 0; k < 2000; ++k) {
    const std::array<double, 3> p{angle(rng), angle(rng), angle(rng)};
    if (const double v = value(p); v > best_value) best_value = v, best = p;
  }
  for (double step = 0.1; step > 1e-9; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < 3; ++i) {
        for (const double sign : {1.0, -1.0}) {
          auto p = best;
          p[i] += sign * step;
          if (const double v = value(p); v > best_value) best_value = v, best = p, improved = true;
        }
      }
    }
  }
  return best_value;
}

}  // namespace

TEST_CASE("pure state REE examples") {
  CHECK(pure_state_ree(bell_state(BellState::PhiPlus)).value == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(std::abs(pure_state_ree(PureState({1.0, 0.0, 0.0, 0.0}, kQubits)).value) < 1e-15);
  CHECK(pure_state_ree(schmidt_form(0.2)).value == doctest::Approx(h_nats(0.2)).epsilon(1e-14));
  CHECK(pure_state_ree(schmidt_form(0.2)).value == doctest::Approx(0.5004).epsilon(1e-4));
}

TEST_CASE("pure state REE equals the entanglement of formation and the reduced entropy") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PureState psi = random_pure(kQubits, seed);
    const double e = pure_state_ree(psi).value;
    CHECK(e == doctest::Approx(eof_two_qubit(DensityMatrix(psi)).value).epsilon(1e-12));
    const auto c = schmidt(psi).coefficients;
    CHECK(concurrence(DensityMatrix(psi)) == doctest::Approx(2.0 * c[0] * c[1]).epsilon(1e-12));
    CHECK(e == doctest::Approx(von_neumann_entropy(DensityMatrix(psi).reduced(Subsystem::A)).value).epsilon(1e-10));
  }
}

TEST_CASE("pure state Bures formula") {
  CHECK(pure_state_bures(bell_state(BellState::PhiPlus)) == doctest::Approx(1.0));
  CHECK(std::abs(pure_state_bures(PureState({1.0, 0.0, 0.0, 0.0}, kQubits))) < 1e-15);
  CHECK(pure_state_bures(schmidt_form(0.3)) == doctest::Approx(0.84).epsilon(1e-14));
  const auto [ua, ub] = random_local_unitary(3);
  const auto rotated = multiply(tensor(ua, ub), schmidt_form(0.3).amplitudes());
  CHECK(pure_state_bures(PureState(rotated, kQubits)) == doctest::Approx(0.84).epsilon(1e-12));
}

TEST_CASE("Bures bound against REE holds in bits, not in nats") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PureState psi = random_pure(kQubits, 500 + seed);
    CHECK(pure_state_bures(psi) <= pure_state_ree(psi).bits() + 1e-12);
  }
  for (const double a2 : {0.1, 0.3, 0.5}) {
    CHECK(pure_state_bures(schmidt_form(a2)) > pure_state_ree(schmidt_form(a2)).value);
  }
  // The true Bures minimum for pure states, 2 - 2 sqrt(max Schmidt weight),
  // does satisfy the bound in nats.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PureState psi = random_pure(kQubits, 600 + seed);
    const double top = schmidt(psi).coefficients.front();
    CHECK(2.0 - 2.0 * top <= pure_state_ree(psi).value + 1e-12);
  }
}

TEST_CASE("example constructors") {
  const ClosedFormCase e1 = example1(1.0);
  CHECK(e1.value.value == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(e1.sigma.matrix().max_abs_diff(bell_state(BellState::PhiPlus).projector()) < 1e-15);

  const ClosedFormCase e2 = example2(0.0);
  CHECK(std::abs(e2.value.value) < 1e-15);

  const ClosedFormCase e3 = example3(0.5, 0.5);
  CHECK(e3.value.value == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(e3.sigma.purity() == doctest::Approx(1.0));

  CHECK(example1(0.5).value.value == doctest::Approx(-1.5 * std::log(0.75) + 0.5 * std::log(0.5)).epsilon(1e-14));

  CHECK_THROWS_AS(example1(1.5), std::invalid_argument);
  CHECK_THROWS_AS(example2(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(example3(0.5, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(example4(0.6, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(example4(0.3, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(example_case(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(example_case(1, {{"A", 0.5}}), std::invalid_argument);

  const ClosedFormCase by_name = example_case(3, {{"A", 0.3}, {"B", 0.1}, {"B_im", 0.2}});
  CHECK(by_name.sigma.matrix().max_abs_diff(example3(0.3, Complex{0.1, 0.2}).sigma.matrix()) == 0.0);
  CHECK(by_name.parameters.at("B_im") == 0.2);
}

TEST_CASE("closed-form cases are self-consistent and certified") {
  std::vector<ClosedFormCase> cases;
  for (const double l : {0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    cases.push_back(example1(l));
    cases.push_back(example2(l));
  }
  for (const auto& [a, b] : {std::pair{0.5, Complex{0.5, 0.0}}, std::pair{0.3, Complex{0.2, 0.0}},
                             std::pair{0.3, Complex{0.1, 0.3}}, std::pair{0.8, Complex{0.0, -0.25}},
                             std::pair{0.5, Complex{0.1, 0.0}}}) {
    cases.push_back(example3(a, b));
  }
  for (const auto& [a, b] : {std::pair{0.2, 0.1}, std::pair{0.3, 0.3}, std::pair{0.4, -0.2}, std::pair{0.45, 0.4}}) {
    cases.push_back(example4(a, b));
  }
  for (const ClosedFormCase& c : cases) {
    CAPTURE(c.name);
    CAPTURE(c.parameters.begin()->second);
    CHECK(std::abs(relative_entropy(c.sigma, c.closest).value - c.value.value) < 1e-10);
    CHECK(is_ppt_separable(c.closest));
    CHECK(certify_minimum(c.sigma, c.closest) >= -1e-6);
  }
}

TEST_CASE("optimizer reproduces examples with complex coherences") {
  for (const auto& [a, b] : {std::pair{0.3, Complex{0.1, 0.3}}, std::pair{0.8, Complex{0.0, -0.25}}}) {
    const ClosedFormCase c = example3(a, b);
    const MeasureResult r = minimize(c.sigma);
    CHECK(std::abs(r.value.value - c.value.value) < 1e-3);
    CHECK(r.certified());
  }
}

TEST_CASE("Bell-diagonal REE") {
  CHECK(bell_diagonal_ree(BellDiagonal({1.0, 0.0, 0.0, 0.0})).value == doctest::Approx(kLn2));
  CHECK(bell_diagonal_ree(BellDiagonal({0.5, 0.5, 0.0, 0.0})).value == 0.0);
  CHECK(bell_diagonal_ree(BellDiagonal({0.25, 0.25, 0.25, 0.25})).value == 0.0);
  const double f = 0.75;
  CHECK(bell_diagonal_ree(BellDiagonal({0.0, f, 0.25, 0.0})).value ==
        doctest::Approx(0.130812035941137).epsilon(1e-13));
  CHECK(outside_validated_bell_regime(BellDiagonal({0.4, 0.3, 0.2, 0.1})));
  CHECK(outside_validated_bell_regime(BellDiagonal({0.3, 0.2, 0.25, 0.25})));
  CHECK_FALSE(outside_validated_bell_regime(BellDiagonal({0.25, 0.25, 0.25, 0.25})));
}

TEST_CASE("max-weight formula agrees with the optimizer on flagged Bell-diagonal states") {
  for (const auto& w : {std::array<double, 4>{0.6, 0.3, 0.1, 0.0}, std::array<double, 4>{0.1, 0.2, 0.0, 0.7}}) {
    const BellDiagonal b(w);
    REQUIRE(outside_validated_bell_regime(b));
    CHECK(std::abs(minimize(b.state()).value.value - bell_diagonal_ree(b).value) < 1e-3);
  }
}

TEST_CASE("maximal singlet fraction matches a search over maximally entangled states") {
  CHECK(max_singlet_fraction(werner(0.8)) == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(max_singlet_fraction(DensityMatrix(bell_state(BellState::PsiMinus))) == doctest::Approx(1.0).epsilon(1e-13));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix sigma = random_density(kQubits, 1 + seed % 4, 700 + seed);
    const double f = max_singlet_fraction(sigma);
    const double searched = singlet_fraction_search(sigma, seed);
    CHECK(searched <= f + 1e-12);
    CHECK(searched == doctest::Approx(f).epsilon(1e-8));
  }
}

TEST_CASE("Werner lower bound") {
  for (const double f : {0.3, 0.5, 0.6, 0.75, 0.9, 1.0}) {
    const double rest = (1 - f) / 3;
    CHECK(werner_lower_bound(werner(f)).value ==
          doctest::Approx(bell_diagonal_ree(BellDiagonal({f, rest, rest, rest})).value).epsilon(1e-12));
  }
  const std::array<double, 4> prod{0.0, 0.0, 1.0, 0.0};
  CHECK(werner_lower_bound(DensityMatrix(ComplexMatrix::diagonal(prod), kQubits)).value == 0.0);
  const ClosedFormCase e1 = example1(0.5);
  CHECK(werner_lower_bound(e1.sigma).value <= minimize(e1.sigma).value.value + 1e-3);
}

TEST_CASE("concurrence and entanglement of formation") {
  CHECK(concurrence(DensityMatrix(bell_state(BellState::PhiPlus))) == doctest::Approx(1.0).epsilon(1e-12));
  const std::array<double, 4> prod{1.0, 0.0, 0.0, 0.0};
  CHECK(concurrence(DensityMatrix(ComplexMatrix::diagonal(prod), kQubits)) == 0.0);
  for (const double f : {0.2, 0.5, 0.6, 0.75, 0.95}) {
    CHECK(concurrence(werner(f)) == doctest::Approx(std::max(0.0, 2 * f - 1)).epsilon(1e-12));
  }
  CHECK(eof_two_qubit(werner(0.75)).value == doctest::Approx(0.24577536666847116).epsilon(1e-12));
  CHECK(eof_two_qubit(werner(0.75)).value > bell_diagonal_ree(BellDiagonal({0.75, 0.25 / 3, 0.25 / 3, 0.25 / 3})).value);
  CHECK(eof_two_qubit(werner(0.5)).value == 0.0);
  CHECK(eof_two_qubit(werner(0.3)).value == 0.0);
  CHECK(eof_two_qubit(DensityMatrix(bell_state(BellState::PhiPlus))).value == doctest::Approx(kLn2).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DensityMatrix sigma = random_density(kQubits, 1 + seed % 4, 800 + seed);
    // The oracle takes square roots of rounding-level eigenvalues.
    CHECK(std::abs(concurrence(sigma) - concurrence_oracle(sigma)) < 1e-7);
    CHECK(eof_two_qubit(sigma).value >= 0.0);
  }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(kLn2));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK_FALSE(std::signbit(binary_entropy(1.0)));
  CHECK(binary_entropy(0.2) == doctest::Approx(h_nats(0.2)).epsilon(1e-15));
  CHECK_THROWS_AS(binary_entropy(1.2), std::invalid_argument);
}
