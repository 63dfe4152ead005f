#pragma once

#include <map>
#include <string>

#include "entcalc/measures.hpp"
#include "entcalc/states.hpp"

namespace entcalc {

/// -sum p ln p over the squared Schmidt coefficients.
Nats pure_state_ree(const PureState& psi);

/// 4 a (1 - a) with a the largest squared Schmidt coefficient.
double pure_state_bures(const PureState& psi);

/// A closed-form example: the state, its closest separable state and the
/// entanglement value.
struct ClosedFormCase {
  std::string name;
  std::map<std::string, double> parameters;
  DensityMatrix sigma;
  DensityMatrix closest;
  Nats value;
};

/// sigma_1 = lambda |Phi+><Phi+| + (1 - lambda) |01><01|, lambda in [0, 1].
ClosedFormCase example1(double lambda);
/// sigma_2 = lambda |Phi+><Phi+| + (1 - lambda) |00><00|, lambda in [0, 1].
ClosedFormCase example2(double lambda);
/// sigma_3 = A|00><00| + (1 - A)|11><11| + B|00><11| + B*|11><00|,
/// |B|^2 <= A (1 - A).
ClosedFormCase example3(double a, Complex b);
/// sigma_4 = A|00><00| + (1 - 2A)|01><01| + A|11><11| + B(|00><11| + |11><00|),
/// real B, 0 <= |B| <= A <= 1/2, A < 1/2.
ClosedFormCase example4(double a, double b);

/// Dispatches on the example number. Parameter keys: "lambda" (1, 2), "A",
/// "B" and optional "B_im" (3), "A", "B" (4). Throws std::invalid_argument on
/// unknown cases, missing keys or domain violations.
ClosedFormCase example_case(int which, const std::map<std::string, double>& params);

/// F ln F + (1 - F) ln(1 - F) + ln 2 for the largest weight F > 1/2, else 0.
Nats bell_diagonal_ree(const BellDiagonal& weights);

/// True when the two largest Bell weights jointly exceed 1/2, the regime in
/// which the max-weight formula is not validated against a printed oracle.
bool outside_validated_bell_regime(const BellDiagonal& weights);

/// max <psi|sigma|psi> over maximally entangled two-qubit psi.
double max_singlet_fraction(const DensityMatrix& sigma);

/// bell_diagonal_ree at the maximal singlet fraction.
Nats werner_lower_bound(const DensityMatrix& sigma);

/// Wootters concurrence.
double concurrence(const DensityMatrix& sigma);

/// Two-qubit entanglement of formation in nats.
Nats eof_two_qubit(const DensityMatrix& sigma);

/// -x ln x - (1 - x) ln(1 - x).
double binary_entropy(double x);

}  // namespace entcalc
