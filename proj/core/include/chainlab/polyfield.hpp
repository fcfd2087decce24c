#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "chainlab/models.hpp"

namespace chainlab {

// Coefficients past 2^52 abandon the exactness guarantee; arithmetic that
// would cross this line throws instead of silently rounding.
inline constexpr double kCoefficientGuard = 4503599627370496.0;

// Multivariate polynomial with exact coefficient arithmetic: a sparse map
// from exponent vectors to double coefficients. All model coefficients are
// dyadic rationals, so sums and products stay exact below the guard.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_vars_(n_vars) {}

  static Polynomial constant(int n_vars, double value);
  static Polynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<int>, double>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exponents, double coefficient);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(double factor) const;
  Polynomial derivative(int var) const;

  double evaluate(const Eigen::VectorXd& x) const;
  bool same_as(const Polynomial& other) const;
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int n_vars_ = 0;
  std::map<std::vector<int>, double> terms_;
};

// A polynomial vector field with the bracket word that produced it.
struct PolyVectorField {
  std::vector<Polynomial> components;
  std::string word;

  int dim() const { return static_cast<int>(components.size()); }
  bool is_zero() const;
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
};

// [X, Y] = (DY)X - (DX)Y, exact.
PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y);

// The model's full drift as an exact polynomial field (word "X0").
// Requires polynomial potentials.
PolyVectorField drift_field(const ModelDescriptor& model);

// The nonzero diffusion columns as polynomial fields, words "X<channel>"
// numbered by 1-based noise channel. Zero columns (e.g. a T = 0 bath) are
// dropped.
std::vector<PolyVectorField> diffusion_fields(const ModelDescriptor& model);

}  // namespace chainlab
