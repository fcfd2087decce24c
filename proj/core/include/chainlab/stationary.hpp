#pragma once

#include <cstdint>
#include <vector>

#include "chainlab/controllability.hpp"
#include "chainlab/integrators.hpp"
#include "chainlab/models.hpp"

namespace chainlab {

struct StationaryCovariance {
  enum class Source { Oracle, Empirical };

  Eigen::MatrixXd sigma;
  Source source = Source::Oracle;
  double n_samples_effective = 0.0;  // empirical only
  double residual = 0.0;             // oracle: Frobenius norm of A S + S A^T + B B^T
  bool controllable = true;          // oracle: Kalman rank was full
};

// All eigenvalues of `a` have strictly negative real part.
bool is_hurwitz(const Eigen::MatrixXd& a);

// Unique solution of A S + S A^T + B B^T = 0 through the Kronecker-vectorized
// linear system. Requires A Hurwitz; `controllable` records whether the
// Kalman rank was full (the solution is positive definite exactly then).
StationaryCovariance solve_stationary(const LinearControlSystem& sys);

// Sample covariance of the recorded states after discarding the leading
// burn-in fraction, with the effective sample size taken from the integrated
// autocorrelation time of H along the kept states.
StationaryCovariance empirical_covariance(const Trajectory& trajectory,
                                          double burn_in_fraction);

// sqrt((S_ii S_jj + S_ij^2) / n_eff): the standard error of an empirical
// covariance entry under approximate Gaussianity.
double covariance_standard_error(const StationaryCovariance& cov, int i,
                                 int j);

struct ProfileEntry {
  double value = 0.0;
  double std_error = 0.0;
};

// Per-site kinetic temperature <p_i^2> with standard errors, after burn-in.
std::vector<ProfileEntry> temperature_profile(const Trajectory& trajectory,
                                              double burn_in_fraction);

enum class Observable { Energy, FirstMomentumSquared };

struct DecayCurve {
  std::vector<double> times;
  std::vector<double> means;       // mean over paths of f(X_t) - reference
  std::vector<double> std_errors;
  double reference = 0.0;          // stationary value of the observable
};

// Monte-Carlo curve m(t) = E_x[f(X_t)] - pi(f) for a harmonic (linear) model,
// with pi(f) taken from the Lyapunov-equation oracle. Paths cycle through the
// supplied initial states.
DecayCurve observable_decay_curve(const ModelDescriptor& model,
                                  Observable observable,
                                  const std::vector<StateVector>& x0_list,
                                  double horizon, int n_paths, double dt,
                                  std::uint64_t seed);

struct RateFit {
  double rate = 0.0;           // fitted exponential decay rate (> 0 decays)
  double rate_std_error = 0.0;
  double intercept = 0.0;      // fitted log|m(0)|
  int window_size = 0;         // points with |m| above 5 standard errors
};

// Weighted least-squares fit of log|m(t)| over the window where the signal
// exceeds 5 standard errors. Throws NumericalError("no resolvable decay
// window") when fewer than three points qualify.
RateFit fit_exponential_decay(const std::vector<double>& times,
                              const std::vector<double>& means,
                              const std::vector<double>& std_errors);

// observable_decay_curve followed by fit_exponential_decay.
RateFit convergence_rate(const ModelDescriptor& model, Observable observable,
                         const std::vector<StateVector>& x0_list,
                         double horizon, int n_paths, double dt,
                         std::uint64_t seed);

// E[p_t^2] for the scalar boundary bath dp = -1/2 p dt + sqrt(T) dB:
// T + (p0^2 - T) e^{-t}. The moment relaxes at the exact rate 1.
double ou_second_moment(double p0, double temperature, double t);

}  // namespace chainlab
