#pragma once

#include <vector>

namespace chainlab {

// Interaction potential U (acting on interparticle distances) and on-site
// pinning potential V. Growth data (k, l, a_k, b_l) encode the large-|x|
// behaviour U(x) ~ a_k |x|^k, V(x) ~ b_l |x|^l that the scaling-limit
// machinery relies on; construction keeps them consistent with the kinds.
enum class InteractionKind { Harmonic, Fpu, Polynomial };
enum class PinningKind { None, Harmonic, Quartic, Weak, Polynomial };

struct Interaction {
  InteractionKind kind = InteractionKind::Harmonic;
  std::vector<double> coeffs;  // ascending powers; Polynomial kind only

  static Interaction harmonic();  // U(x) = x^2/2
  static Interaction fpu();       // U(x) = x^2/2 + x^4/4
  static Interaction polynomial(std::vector<double> coeffs);
};

struct Pinning {
  PinningKind kind = PinningKind::None;
  double alpha = 0.0;          // strength for Harmonic/Quartic kinds
  std::vector<double> coeffs;  // ascending powers; Polynomial kind only

  static Pinning none();
  static Pinning harmonic(double alpha);  // V(x) = alpha x^2 / 2
  static Pinning quartic(double alpha);   // V(x) = alpha x^4
  static Pinning weak();                  // V(x) = sqrt(1 + x^2)
  static Pinning polynomial(std::vector<double> coeffs);
};

struct PotentialSpec {
  Interaction u;
  Pinning v;
  int k = 2;         // growth exponent of U; k >= 2 and k >= l
  double l = 0.0;    // growth exponent of V; 0 when kind is None
  double a_k = 0.5;  // leading coefficient of U; > 0
  double b_l = 0.0;  // leading coefficient of V; >= 0
};

// Validates the combination (k >= 2, k >= l, coefficient conventions) and
// fills in the growth data. Throws ContractViolation on invalid input.
PotentialSpec make_potentials(const Interaction& u, const Pinning& v);

// Re-checks the growth fields of an externally assembled spec against its
// kinds. Throws ContractViolation on any mismatch.
void validate_potentials(const PotentialSpec& spec);

enum class Which { U, V };

// Value (order 0) or derivative (order 1..4) in closed form. The harmonic
// and fpu kinds evaluate through the same coefficient path as an equivalent
// Polynomial spec, so agreement between the two is bitwise.
double evaluate(const PotentialSpec& spec, Which which, double x, int order);

// One scaling curve lambda -> lambda^{-k} F(lambda x) (order 0) or
// lambda^{1-k} F'(lambda x) (order 1) and its deviation from the growth
// target a_k |x|^k resp. k a_k |x|^{k-1} sign(x) (b_l analogues for V).
struct GrowthSeries {
  Which which = Which::U;
  int order = 0;
  double x = 0.0;
  double target = 0.0;
  std::vector<double> scaled;
  std::vector<double> deviation;  // |scaled - target|
  bool monotone = false;          // deviations nonincreasing in lambda
  bool within_tol = false;        // final deviation <= rel_tol * |target|
};

struct GrowthReport {
  std::vector<double> lambdas;
  std::vector<GrowthSeries> series;
  double rel_tol = 1e-4;
  bool pass = false;
};

// Checks the growth assumptions along increasing lambdas at each probe x.
// Preconditions: lambdas strictly increasing and >= 1, xs nonzero.
GrowthReport validate_growth(const PotentialSpec& spec,
                             const std::vector<double>& lambdas,
                             const std::vector<double>& xs,
                             double rel_tol = 1e-4);

// Smallest m in 2..max_order with d^m U / dx^m (q) != 0, computed through
// exact coefficient differentiation (U is polynomial for every kind).
// Throws NumericalError if U is degenerate at q up to max_order.
int nondegeneracy_order(const PotentialSpec& spec, double q, int max_order);

// Ascending coefficient sequences. U is available for every kind; V only
// when polynomial-valued (None yields the empty sequence, Weak throws).
std::vector<double> interaction_coefficients(const PotentialSpec& spec);
std::vector<double> pinning_coefficients(const PotentialSpec& spec);
bool pinning_is_polynomial(const PotentialSpec& spec);

// Horner evaluation and power-rule differentiation of ascending-coefficient
// sequences, shared by the polynomial evaluation paths.
double poly_eval(const std::vector<double>& coeffs, double x);
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

}  // namespace chainlab
