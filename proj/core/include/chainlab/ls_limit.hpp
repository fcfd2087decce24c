#pragma once

#include <complex>
#include <vector>

namespace chainlab {

// Mode frequencies omega_k^2 = omega^2 (mu^2 + 4 sin^2(k pi / N)) over
// k = -N/2+1 .. N/2.
struct ModeSpectrum {
  int n = 0;
  double omega = 0.0;
  double mu = 0.0;
  std::vector<double> omega_k_sq;  // indexed k + N/2 - 1

  double at(int k) const;
};

ModeSpectrum make_mode_spectrum(int n, double omega, double mu);

// Eigenvalues of A = ((-1/2, -omega^2), (1, 0)):
// lambda_pm = -1/4 +- sqrt(1/16 - omega^2), a real pair when
// omega^2 <= 1/16 and a complex-conjugate pair otherwise.
struct ModeEigenvalues {
  std::complex<double> plus;
  std::complex<double> minus;
  bool real_pair = false;
};

ModeEigenvalues mode_eigenvalues(double omega_sq);

// Deterministic per-mode limit dynamics dr = -(omega^2 v + 1/2 r) dt,
// dv = r dt, integrated with classical RK4; running integrals of r^2 and
// v^2 accumulate by the trapezoid rule on the same grid.
struct LimitOdeResult {
  std::vector<double> times;
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> integral_r_sq;
  std::vector<double> integral_v_sq;
};

LimitOdeResult limit_ode_solve(double omega_sq, double r0, double v0,
                               double tau, double dt);

// Integral-ratio diagnostics for the decay lemma. `cumulative` holds
// int_0^tau r^2 / int_0^tau v^2 per tau; `tail` the same over [tau/2, tau],
// which isolates the slow mode. In the real-eigenvalue regime the tail ratio
// approaches `predicted` = lambda_+^2 when x0 has a lambda_+ component
// (|A_+| > 1e-12 |x0|), else lambda_-^2; an eigenvector-aligned x0 makes the
// cumulative ratio equal lambda^2 at every tau. In the oscillatory regime
// only positivity of the ratios is claimed.
struct RatioCheck {
  std::vector<double> taus;
  std::vector<double> cumulative;
  std::vector<double> tail;
  double predicted = 0.0;
  bool real_case = false;
  bool plus_component_nonzero = false;
};

RatioCheck ratio_limit_check(double omega_sq, double r0, double v0,
                             const std::vector<double>& tau_list,
                             double dt = 1e-3);

}  // namespace chainlab
