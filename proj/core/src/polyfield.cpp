#include "chainlab/polyfield.hpp"

#include <cmath>
#include <cstdio>

#include "chainlab/errors.hpp"
#include "chainlab/potentials.hpp"

namespace chainlab {

namespace {

void check_guard(double c) {
  if (!(std::abs(c) <= kCoefficientGuard))
    throw NumericalError("coefficient blow-up, reduce depth");
}

double ipow(double x, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

}  // namespace

Polynomial Polynomial::constant(int n_vars, double value) {
  Polynomial p(n_vars);
  p.add_term(std::vector<int>(n_vars, 0), value);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars)
    throw ContractViolation("variable index out of range");
  Polynomial p(n_vars);
  std::vector<int> e(n_vars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const std::vector<int>& exponents,
                          double coefficient) {
  if (static_cast<int>(exponents.size()) != n_vars_)
    throw ContractViolation("exponent vector length must equal n_vars");
  check_guard(coefficient);
  if (coefficient == 0.0) return;
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_.emplace(exponents, coefficient);
    return;
  }
  it->second += coefficient;
  check_guard(it->second);
  if (it->second == 0.0) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (n_vars_ != other.n_vars_)
    throw ContractViolation("polynomial arity mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  if (n_vars_ != other.n_vars_)
    throw ContractViolation("polynomial arity mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (n_vars_ != other.n_vars_)
    throw ContractViolation("polynomial arity mismatch");
  Polynomial out(n_vars_);
  if (is_zero() || other.is_zero()) return out;
  std::vector<int> e(n_vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (int i = 0; i < n_vars_; ++i) e[i] = ea[i] + eb[i];
      const double c = ca * cb;
      check_guard(c);
      out.add_term(e, c);
    }
  }
  return out;
}

Polynomial Polynomial::scaled(double factor) const {
  Polynomial out(n_vars_);
  if (factor == 0.0) return out;
  for (const auto& [e, c] : terms_) out.add_term(e, factor * c);
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= n_vars_)
    throw ContractViolation("variable index out of range");
  Polynomial out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    std::vector<int> d = e;
    --d[var];
    out.add_term(d, c * static_cast<double>(e[var]));
  }
  return out;
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != n_vars_)
    throw ContractViolation("evaluation point arity mismatch");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int i = 0; i < n_vars_; ++i)
      if (e[i] > 0) term *= ipow(x[i], e[i]);
    acc += term;
  }
  return acc;
}

bool Polynomial::same_as(const Polynomial& other) const {
  return n_vars_ == other.n_vars_ && terms_ == other.terms_;
}

std::string Polynomial::to_string(
    const std::vector<std::string>& names) const {
  if (static_cast<int>(names.size()) != n_vars_)
    throw ContractViolation("name list arity mismatch");
  if (terms_.empty()) return "0";
  std::string out;
  char buf[32];
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::snprintf(buf, sizeof(buf), "%g", c);
    out += buf;
    for (int i = 0; i < n_vars_; ++i) {
      if (e[i] == 0) continue;
      out += "*" + names[i];
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

bool PolyVectorField::is_zero() const {
  for (const auto& p : components)
    if (!p.is_zero()) return false;
  return true;
}

Eigen::VectorXd PolyVectorField::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = components[i].evaluate(x);
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& x,
                            const PolyVectorField& y) {
  if (x.dim() != y.dim() || x.dim() == 0)
    throw ContractViolation("bracket needs matching nonzero dimensions");
  const int d = x.dim();
  PolyVectorField out;
  out.components.reserve(d);
  for (int i = 0; i < d; ++i) {
    Polynomial acc(d);
    for (int j = 0; j < d; ++j) {
      if (!x.components[j].is_zero()) {
        const Polynomial dy = y.components[i].derivative(j);
        if (!dy.is_zero()) acc = acc + dy * x.components[j];
      }
      if (!y.components[j].is_zero()) {
        const Polynomial dx = x.components[i].derivative(j);
        if (!dx.is_zero()) acc = acc - dx * y.components[j];
      }
    }
    out.components.push_back(acc);
  }
  out.word = "[" + x.word + "," + y.word + "]";
  return out;
}

namespace {

// Composes an ascending-coefficient polynomial with a multivariate argument
// by Horner's rule; exact below the coefficient guard.
Polynomial compose(const std::vector<double>& coeffs, const Polynomial& arg,
                   int n_vars) {
  Polynomial acc(n_vars);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * arg + Polynomial::constant(n_vars, *it);
  return acc;
}

// Ascending coefficients of the regime-effective U' (resp. V').
std::vector<double> force_coeffs(const ModelDescriptor& m, Which which) {
  const PotentialSpec& spec = *m.potentials;
  std::vector<double> c;
  switch (m.regime) {
    case Regime::Standard:
    case Regime::Scaled: {
      c = which == Which::U ? interaction_coefficients(spec)
                            : pinning_coefficients(spec);
      if (m.regime == Regime::Scaled) {
        const double e = m.scale_energy;
        for (std::size_t p = 0; p < c.size(); ++p)
          c[p] *= std::pow(e, static_cast<double>(p) / spec.k - 1.0);
      }
      break;
    }
    case Regime::Limit: {
      double lead = 0.0;
      if (which == Which::U) {
        lead = spec.a_k;
      } else if (spec.l == static_cast<double>(spec.k) && spec.b_l > 0.0) {
        lead = spec.b_l;
      }
      if (lead != 0.0) {
        c.assign(spec.k + 1, 0.0);
        c[spec.k] = lead;
      }
      break;
    }
  }
  return poly_derivative(c);
}

}  // namespace

PolyVectorField drift_field(const ModelDescriptor& model) {
  const int n = model.n_sites;
  const int dim = model.state_dim();
  PolyVectorField out;
  out.word = "X0";
  out.components.assign(dim, Polynomial(dim));
  auto var = [dim](int i) { return Polynomial::variable(dim, i); };

  switch (model.kind) {
    case ModelKind::Pinned: {
      if (!pinning_is_polynomial(*model.potentials))
        throw ContractViolation(
            "bracket machinery requires polynomial potentials");
      const auto uprime = force_coeffs(model, Which::U);
      const auto vprime = force_coeffs(model, Which::V);
      for (int i = 0; i < n; ++i) {
        out.components[n + i] = var(i);
        if (!vprime.empty())
          out.components[i] =
              out.components[i] - compose(vprime, var(n + i), dim);
      }
      for (int i = 0; i + 1 < n; ++i) {
        const Polynomial f =
            compose(uprime, var(n + i + 1) - var(n + i), dim);
        out.components[i] = out.components[i] + f;
        out.components[i + 1] = out.components[i + 1] - f;
      }
      const double c = boundary_friction_rate(model);
      if (c != 0.0) {
        out.components[0] = out.components[0] - var(0).scaled(c);
        out.components[n - 1] = out.components[n - 1] - var(n - 1).scaled(c);
      }
      return out;
    }
    case ModelKind::Unpinned: {
      const auto uprime = force_coeffs(model, Which::U);
      for (int i = 0; i + 1 < n; ++i) {
        out.components[n + i] = var(i + 1) - var(i);
        const Polynomial f = compose(uprime, var(n + i), dim);
        out.components[i] = out.components[i] + f;
        out.components[i + 1] = out.components[i + 1] - f;
      }
      const double c = boundary_friction_rate(model);
      if (c != 0.0) {
        out.components[0] = out.components[0] - var(0).scaled(c);
        out.components[n - 1] = out.components[n - 1] - var(n - 1).scaled(c);
      }
      return out;
    }
    case ModelKind::Exchange: {
      for (int i = 0; i + 1 < n; ++i) {
        out.components[n + i] = var(i + 1) - var(i);
        out.components[i] = out.components[i] + var(n + i);
        out.components[i + 1] = out.components[i + 1] - var(n + i);
      }
      const double c = boundary_friction_rate(model);
      const double g2 = 0.5 * model.gamma;
      out.components[0] = out.components[0] - var(0).scaled(c + g2);
      out.components[n - 1] = out.components[n - 1] - var(n - 1).scaled(c + g2);
      for (int i = 1; i + 1 < n; ++i)
        out.components[i] = out.components[i] - var(i).scaled(2.0 * g2);
      return out;
    }
    case ModelKind::LefevereSchenkel: {
      const int h = n / 2;
      for (int k = 1; k < h; ++k) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        out.components[at] = var(at + 2).scaled(-w2) - var(at).scaled(0.5);
        out.components[at + 1] =
            var(at + 3).scaled(-w2) - var(at + 1).scaled(0.5);
        out.components[at + 2] = var(at);
        out.components[at + 3] = var(at + 1);
      }
      for (int k : {0, h}) {
        const int at = ls_block_offset(model, k);
        out.components[at] =
            var(at + 1).scaled(-ls_omega_sq(model, k)) - var(at).scaled(0.5);
        out.components[at + 1] = var(at);
      }
      return out;
    }
  }
  return out;
}

std::vector<PolyVectorField> diffusion_fields(const ModelDescriptor& model) {
  const int n = model.n_sites;
  const int dim = model.state_dim();
  std::vector<PolyVectorField> out;
  auto fresh = [dim](int channel) {
    PolyVectorField f;
    f.word = "X" + std::to_string(channel);
    f.components.assign(dim, Polynomial(dim));
    return f;
  };
  auto push_if_nonzero = [&out](PolyVectorField&& f) {
    if (!f.is_zero()) out.push_back(std::move(f));
  };

  switch (model.kind) {
    case ModelKind::Pinned:
    case ModelKind::Unpinned: {
      const double pref = bath_noise_prefactor(model);
      PolyVectorField left = fresh(1);
      left.components[0] =
          Polynomial::constant(dim, pref * std::sqrt(model.t_left));
      push_if_nonzero(std::move(left));
      PolyVectorField right = fresh(2);
      right.components[n - 1] =
          Polynomial::constant(dim, pref * std::sqrt(model.t_right));
      push_if_nonzero(std::move(right));
      return out;
    }
    case ModelKind::Exchange: {
      const double pref = bath_noise_prefactor(model);
      const double sg = std::sqrt(model.gamma);
      PolyVectorField left = fresh(1);
      left.components[0] =
          Polynomial::constant(dim, pref * std::sqrt(model.t_left));
      push_if_nonzero(std::move(left));
      for (int i = 1; i < n; ++i) {
        PolyVectorField pair = fresh(i + 1);
        pair.components[i - 1] = Polynomial::variable(dim, i).scaled(-sg);
        pair.components[i] = Polynomial::variable(dim, i - 1).scaled(sg);
        push_if_nonzero(std::move(pair));
      }
      PolyVectorField right = fresh(n + 1);
      right.components[n - 1] =
          Polynomial::constant(dim, pref * std::sqrt(model.t_right));
      push_if_nonzero(std::move(right));
      return out;
    }
    case ModelKind::LefevereSchenkel: {
      const double pref = model.regime == Regime::Limit ? 0.0 : 1.0;
      const double st = pref * std::sqrt(model.temperature);
      const int h = n / 2;
      for (int k = 1; k < h; ++k) {
        const int at = ls_block_offset(model, k);
        const double d = pref * ls_mode_coupling(model, k);
        PolyVectorField xk = fresh(2 * k - 1);
        xk.components[at] = Polynomial::constant(dim, st);
        xk.components[at + 3] = Polynomial::constant(dim, -d);
        push_if_nonzero(std::move(xk));
        PolyVectorField yk = fresh(2 * k);
        yk.components[at + 1] = Polynomial::constant(dim, st);
        yk.components[at + 2] = Polynomial::constant(dim, d);
        push_if_nonzero(std::move(yk));
      }
      PolyVectorField x0 = fresh(n - 1);
      x0.components[ls_block_offset(model, 0)] = Polynomial::constant(dim, st);
      push_if_nonzero(std::move(x0));
      PolyVectorField xh = fresh(n);
      xh.components[ls_block_offset(model, h)] = Polynomial::constant(dim, st);
      push_if_nonzero(std::move(xh));
      return out;
    }
  }
  return out;
}

}  // namespace chainlab
