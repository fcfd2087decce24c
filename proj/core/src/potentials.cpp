#include "chainlab/potentials.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "chainlab/errors.hpp"

namespace chainlab {

namespace {

// Trims trailing zero coefficients so degree and leading coefficient are
// well defined.
std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

int degree_of(const std::vector<double>& c) {
  return static_cast<int>(c.size()) - 1;
}

}  // namespace

Interaction Interaction::harmonic() { return {InteractionKind::Harmonic, {}}; }

Interaction Interaction::fpu() { return {InteractionKind::Fpu, {}}; }

Interaction Interaction::polynomial(std::vector<double> coeffs) {
  return {InteractionKind::Polynomial, std::move(coeffs)};
}

Pinning Pinning::none() { return {PinningKind::None, 0.0, {}}; }

Pinning Pinning::harmonic(double alpha) {
  return {PinningKind::Harmonic, alpha, {}};
}

Pinning Pinning::quartic(double alpha) {
  return {PinningKind::Quartic, alpha, {}};
}

Pinning Pinning::weak() { return {PinningKind::Weak, 0.0, {}}; }

Pinning Pinning::polynomial(std::vector<double> coeffs) {
  return {PinningKind::Polynomial, 0.0, std::move(coeffs)};
}

PotentialSpec make_potentials(const Interaction& u, const Pinning& v) {
  PotentialSpec spec;
  spec.u = u;
  spec.v = v;

  switch (u.kind) {
    case InteractionKind::Harmonic:
      spec.k = 2;
      spec.a_k = 0.5;
      break;
    case InteractionKind::Fpu:
      spec.k = 4;
      spec.a_k = 0.25;
      break;
    case InteractionKind::Polynomial: {
      std::vector<double> c = trimmed(u.coeffs);
      if (degree_of(c) < 2)
        throw ContractViolation("interaction polynomial must have degree >= 2");
      if (c.back() <= 0.0)
        throw ContractViolation(
            "interaction polynomial needs a positive leading coefficient");
      spec.u.coeffs = c;
      spec.k = degree_of(c);
      spec.a_k = c.back();
      break;
    }
  }

  switch (v.kind) {
    case PinningKind::None:
      spec.l = 0.0;
      spec.b_l = 0.0;
      break;
    case PinningKind::Harmonic:
      if (v.alpha < 0.0)
        throw ContractViolation("pinning strength must be >= 0");
      spec.l = 2.0;
      spec.b_l = v.alpha / 2.0;
      break;
    case PinningKind::Quartic:
      if (v.alpha < 0.0)
        throw ContractViolation("pinning strength must be >= 0");
      spec.l = 4.0;
      spec.b_l = v.alpha;
      break;
    case PinningKind::Weak:
      spec.l = 1.0;
      spec.b_l = 1.0;
      break;
    case PinningKind::Polynomial: {
      std::vector<double> c = trimmed(v.coeffs);
      if (degree_of(c) < 1)
        throw ContractViolation("pinning polynomial must have degree >= 1");
      if (c.back() <= 0.0)
        throw ContractViolation(
            "pinning polynomial needs a positive leading coefficient");
      spec.v.coeffs = c;
      spec.l = static_cast<double>(degree_of(c));
      spec.b_l = c.back();
      break;
    }
  }

  if (spec.k < 2) throw ContractViolation("growth exponent k must be >= 2");
  if (static_cast<double>(spec.k) < spec.l)
    throw ContractViolation("interaction must dominate pinning: k >= l");
  return spec;
}

void validate_potentials(const PotentialSpec& spec) {
  PotentialSpec rebuilt = make_potentials(spec.u, spec.v);
  if (spec.k != rebuilt.k || spec.l != rebuilt.l || spec.a_k != rebuilt.a_k ||
      spec.b_l != rebuilt.b_l)
    throw ContractViolation(
        "growth fields (k, l, a_k, b_l) disagree with the potential kinds");
}

double poly_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d[i - 1] = static_cast<double>(i) * coeffs[i];
  return d;
}

std::vector<double> interaction_coefficients(const PotentialSpec& spec) {
  switch (spec.u.kind) {
    case InteractionKind::Harmonic:
      return {0.0, 0.0, 0.5};
    case InteractionKind::Fpu:
      return {0.0, 0.0, 0.5, 0.0, 0.25};
    case InteractionKind::Polynomial:
      return spec.u.coeffs;
  }
  throw ContractViolation("unknown interaction kind");
}

bool pinning_is_polynomial(const PotentialSpec& spec) {
  return spec.v.kind != PinningKind::Weak;
}

std::vector<double> pinning_coefficients(const PotentialSpec& spec) {
  switch (spec.v.kind) {
    case PinningKind::None:
      return {};
    case PinningKind::Harmonic:
      return {0.0, 0.0, spec.v.alpha / 2.0};
    case PinningKind::Quartic:
      return {0.0, 0.0, 0.0, 0.0, spec.v.alpha};
    case PinningKind::Polynomial:
      return spec.v.coeffs;
    case PinningKind::Weak:
      throw ContractViolation("weak pinning is not polynomial");
  }
  throw ContractViolation("unknown pinning kind");
}

namespace {

// Derivatives of sqrt(1 + x^2) up to order 4, with s = (1 + x^2)^{1/2}:
//   V'    = x s^{-1}
//   V''   = s^{-3}
//   V'''  = -3 x s^{-5}
//   V'''' = (12 x^2 - 3) s^{-7}
double weak_pinning(double x, int order) {
  const double s2 = 1.0 + x * x;
  const double s = std::sqrt(s2);
  switch (order) {
    case 0:
      return s;
    case 1:
      return x / s;
    case 2:
      return 1.0 / (s2 * s);
    case 3:
      return -3.0 * x / (s2 * s2 * s);
    case 4:
      return (12.0 * x * x - 3.0) / (s2 * s2 * s2 * s);
  }
  throw ContractViolation("derivative order must be in 0..4");
}

double poly_derivative_eval(std::vector<double> coeffs, double x, int order) {
  for (int i = 0; i < order; ++i) coeffs = poly_derivative(coeffs);
  return poly_eval(coeffs, x);
}

}  // namespace

double evaluate(const PotentialSpec& spec, Which which, double x, int order) {
  if (order < 0 || order > 4)
    throw ContractViolation("derivative order must be in 0..4");
  if (which == Which::U)
    return poly_derivative_eval(interaction_coefficients(spec), x, order);
  if (spec.v.kind == PinningKind::None)
    throw ContractViolation("model has no pinning potential");
  if (spec.v.kind == PinningKind::Weak) return weak_pinning(x, order);
  return poly_derivative_eval(pinning_coefficients(spec), x, order);
}

namespace {

GrowthSeries growth_series(const PotentialSpec& spec, Which which, int order,
                           double x, const std::vector<double>& lambdas,
                           double rel_tol) {
  GrowthSeries s;
  s.which = which;
  s.order = order;
  s.x = x;

  const double k = which == Which::U ? static_cast<double>(spec.k) : spec.l;
  const double lead = which == Which::U ? spec.a_k : spec.b_l;
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  s.target = order == 0 ? lead * std::pow(std::abs(x), k)
                        : k * lead * std::pow(std::abs(x), k - 1.0) * sgn;

  for (double lambda : lambdas) {
    const double scale = std::pow(lambda, static_cast<double>(order) - k);
    const double value = scale * evaluate(spec, which, lambda * x, order);
    s.scaled.push_back(value);
    s.deviation.push_back(std::abs(value - s.target));
  }

  s.monotone = true;
  for (std::size_t i = 1; i < s.deviation.size(); ++i)
    if (s.deviation[i] > s.deviation[i - 1]) s.monotone = false;
  s.within_tol = s.deviation.back() <= rel_tol * std::abs(s.target);
  return s;
}

}  // namespace

GrowthReport validate_growth(const PotentialSpec& spec,
                             const std::vector<double>& lambdas,
                             const std::vector<double>& xs, double rel_tol) {
  if (lambdas.empty() || xs.empty())
    throw ContractViolation("growth check needs lambdas and probe points");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 1.0)
      throw ContractViolation("growth lambdas must be >= 1");
    if (i > 0 && lambdas[i] <= lambdas[i - 1])
      throw ContractViolation("growth lambdas must be strictly increasing");
  }
  for (double x : xs)
    if (x == 0.0) throw ContractViolation("growth probe points must be nonzero");

  GrowthReport report;
  report.lambdas = lambdas;
  report.rel_tol = rel_tol;
  report.pass = true;
  for (double x : xs) {
    for (int order : {0, 1}) {
      report.series.push_back(
          growth_series(spec, Which::U, order, x, lambdas, rel_tol));
      if (spec.v.kind != PinningKind::None)
        report.series.push_back(
            growth_series(spec, Which::V, order, x, lambdas, rel_tol));
    }
  }
  for (const GrowthSeries& s : report.series)
    if (!s.monotone || !s.within_tol) report.pass = false;
  return report;
}

int nondegeneracy_order(const PotentialSpec& spec, double q, int max_order) {
  if (max_order < 2)
    throw ContractViolation("nondegeneracy check needs max_order >= 2");
  std::vector<double> c = interaction_coefficients(spec);
  c = poly_derivative(poly_derivative(c));
  for (int m = 2; m <= max_order; ++m) {
    if (poly_eval(c, q) != 0.0) return m;
    c = poly_derivative(c);
  }
  throw NumericalError("interaction degenerate at q = " + std::to_string(q) +
                       " up to order " + std::to_string(max_order));
}

}  // namespace chainlab
