#include "chainlab/stationary.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "chainlab/errors.hpp"
#include "chainlab/noise.hpp"

namespace chainlab {

bool is_hurwitz(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ContractViolation("Hurwitz check needs a square matrix");
  const Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  return (es.eigenvalues().real().array() < 0.0).all();
}

StationaryCovariance solve_stationary(const LinearControlSystem& sys) {
  const int n = sys.n();
  if (sys.a.cols() != n || sys.b.rows() != n)
    throw ContractViolation("inconsistent control system dimensions");
  if (!is_hurwitz(sys.a))
    throw NumericalError("no stationary Gaussian law: A is not Hurwitz");

  const Eigen::MatrixXd rhs_mat = sys.b * sys.b.transpose();
  // (I (x) A + A (x) I) vec(S) = -vec(B B^T), column-major vec.
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int j = 0; j < n; ++j)
    kron.block(j * n, j * n, n, n) = sys.a;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        kron(j * n + i, l * n + i) += sys.a(j, l);
  Eigen::VectorXd rhs(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rhs[j * n + i] = -rhs_mat(i, j);
  const Eigen::VectorXd vec_sigma = kron.partialPivLu().solve(rhs);

  StationaryCovariance cov;
  cov.source = StationaryCovariance::Source::Oracle;
  cov.sigma.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cov.sigma(i, j) = vec_sigma[j * n + i];
  cov.sigma = 0.5 * (cov.sigma + cov.sigma.transpose()).eval();
  cov.residual = (sys.a * cov.sigma + cov.sigma * sys.a.transpose() + rhs_mat)
                     .norm();
  cov.controllable = kalman_rank(sys) == n;
  return cov;
}

namespace {

long burn_in_start(const Trajectory& traj, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0) || !(burn_in_fraction < 1.0))
    throw ContractViolation("burn-in fraction must lie in [0, 1)");
  const long total = static_cast<long>(traj.states.size());
  return static_cast<long>(burn_in_fraction * static_cast<double>(total));
}

// Integrated autocorrelation time of the series, truncated at the first
// negative autocorrelation estimate (capped window).
double integrated_autocorrelation(const std::vector<double>& series) {
  const long n = static_cast<long>(series.size());
  if (n < 2) return 1.0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var <= 0.0) return 1.0;
  const long max_lag = std::min(n - 1, 10000l);
  double tau = 1.0;
  for (long k = 1; k <= max_lag; ++k) {
    double acc = 0.0;
    for (long i = 0; i + k < n; ++i)
      acc += (series[i] - mean) * (series[i + k] - mean);
    const double rho = acc / (static_cast<double>(n) * var);
    if (rho < 0.0) break;
    tau += 2.0 * rho;
  }
  return tau;
}

}  // namespace

StationaryCovariance empirical_covariance(const Trajectory& trajectory,
                                          double burn_in_fraction) {
  const long start = burn_in_start(trajectory, burn_in_fraction);
  const long total = static_cast<long>(trajectory.states.size());
  const long kept = total - start;
  if (kept < 1000)
    throw ContractViolation(
        "empirical covariance needs at least 1000 post-burn-in samples");
  const int dim = trajectory.model.state_dim();

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (long i = start; i < total; ++i) mean += trajectory.states[i];
  mean /= static_cast<double>(kept);

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
  for (long i = start; i < total; ++i) {
    const Eigen::VectorXd d = trajectory.states[i] - mean;
    sigma.noalias() += d * d.transpose();
  }
  sigma /= static_cast<double>(kept - 1);

  std::vector<double> energies;
  energies.reserve(kept);
  for (long i = start; i < total; ++i)
    energies.push_back(hamiltonian(trajectory.model, trajectory.states[i]));
  const double tau = integrated_autocorrelation(energies);

  StationaryCovariance cov;
  cov.source = StationaryCovariance::Source::Empirical;
  cov.sigma = sigma;
  cov.n_samples_effective = static_cast<double>(kept) / tau;
  return cov;
}

double covariance_standard_error(const StationaryCovariance& cov, int i,
                                 int j) {
  if (i < 0 || j < 0 || i >= cov.sigma.rows() || j >= cov.sigma.cols())
    throw ContractViolation("covariance index out of range");
  if (!(cov.n_samples_effective > 0.0))
    throw ContractViolation("standard errors need an effective sample size");
  return std::sqrt(
      (cov.sigma(i, i) * cov.sigma(j, j) + cov.sigma(i, j) * cov.sigma(i, j)) /
      cov.n_samples_effective);
}

std::vector<ProfileEntry> temperature_profile(const Trajectory& trajectory,
                                              double burn_in_fraction) {
  const long start = burn_in_start(trajectory, burn_in_fraction);
  const long total = static_cast<long>(trajectory.states.size());
  const long kept = total - start;
  if (kept < 1)
    throw ContractViolation("temperature profile needs at least one state");
  const int n = trajectory.model.n_sites;

  double tau = 1.0;
  if (kept >= 2) {
    std::vector<double> energies;
    energies.reserve(kept);
    for (long i = start; i < total; ++i)
      energies.push_back(hamiltonian(trajectory.model, trajectory.states[i]));
    tau = integrated_autocorrelation(energies);
  }
  const double n_eff = static_cast<double>(kept) / tau;

  std::vector<ProfileEntry> profile(n);
  for (int site = 0; site < n; ++site) {
    double sum = 0.0, sum_sq = 0.0;
    for (long i = start; i < total; ++i) {
      const double v = trajectory.states[i][site] * trajectory.states[i][site];
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(kept);
    profile[site].value = mean;
    if (kept >= 2) {
      const double var =
          std::max(0.0, sum_sq / static_cast<double>(kept) - mean * mean);
      profile[site].std_error = std::sqrt(var / n_eff);
    }
  }
  return profile;
}

namespace {

double stationary_reference(const ModelDescriptor& model,
                            Observable observable) {
  const LinearControlSystem sys = build_linear_system(model);
  const StationaryCovariance cov = solve_stationary(sys);
  switch (observable) {
    case Observable::FirstMomentumSquared:
      return cov.sigma(0, 0);
    case Observable::Energy: {
      // H = 1/2 x^T M x for linear models, so pi(H) = 1/2 tr(M Sigma).
      const Eigen::MatrixXd m = hamiltonian_hessian(
          model, StateVector::Zero(model.state_dim()));
      return 0.5 * (m * cov.sigma).trace();
    }
  }
  throw ContractViolation("unknown observable");
}

double eval_observable(const ModelDescriptor& model, Observable observable,
                       const StateVector& s) {
  switch (observable) {
    case Observable::FirstMomentumSquared:
      return s[0] * s[0];
    case Observable::Energy:
      return hamiltonian(model, s);
  }
  throw ContractViolation("unknown observable");
}

}  // namespace

DecayCurve observable_decay_curve(const ModelDescriptor& model,
                                  Observable observable,
                                  const std::vector<StateVector>& x0_list,
                                  double horizon, int n_paths, double dt,
                                  std::uint64_t seed) {
  if (x0_list.empty())
    throw ContractViolation("need at least one initial state");
  if (!(horizon > 0.0) || !(dt > 0.0) || n_paths < 2)
    throw ContractViolation("need horizon > 0, dt > 0, n_paths >= 2");
  for (const auto& x0 : x0_list) require_state(model, x0);

  DecayCurve curve;
  curve.reference = stationary_reference(model, observable);

  long n_steps = std::lround(horizon / dt);
  if (n_steps < 1) throw ContractViolation("horizon shorter than one step");
  const long record_every = std::max(1l, n_steps / 200);
  n_steps = (n_steps / record_every) * record_every;

  const long grid = n_steps / record_every + 1;
  std::vector<double> sum(grid, 0.0), sum_sq(grid, 0.0);
  const Scheme scheme = model.kind == ModelKind::LefevereSchenkel
                            ? Scheme::Euler
                            : Scheme::Splitting;
  for (int p = 0; p < n_paths; ++p) {
    const Trajectory traj =
        simulate(model, x0_list[p % x0_list.size()], dt, n_steps,
                 derive_seed(seed, p + 1), scheme, record_every);
    for (long g = 0; g < grid; ++g) {
      const double v =
          eval_observable(model, observable, traj.states[g]) - curve.reference;
      sum[g] += v;
      sum_sq[g] += v * v;
      if (p == 0) curve.times.push_back(traj.times[g]);
    }
  }
  const double inv_n = 1.0 / n_paths;
  for (long g = 0; g < grid; ++g) {
    const double mean = sum[g] * inv_n;
    const double var = std::max(0.0, sum_sq[g] * inv_n - mean * mean);
    curve.means.push_back(mean);
    curve.std_errors.push_back(std::sqrt(var * inv_n));
  }
  return curve;
}

RateFit fit_exponential_decay(const std::vector<double>& times,
                              const std::vector<double>& means,
                              const std::vector<double>& std_errors) {
  if (times.size() != means.size() || times.size() != std_errors.size())
    throw ContractViolation("decay fit needs equal-length inputs");
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double m = std::abs(means[i]);
    if (!(m > 5.0 * std_errors[i])) continue;
    // var(log |m|) ~ (se / m)^2.
    const double w = (m / std_errors[i]) * (m / std_errors[i]);
    const double y = std::log(m);
    sw += w;
    swx += w * times[i];
    swy += w * y;
    swxx += w * times[i] * times[i];
    swxy += w * times[i] * y;
    ++used;
  }
  if (used < 3) throw NumericalError("no resolvable decay window");
  const double denom = sw * swxx - swx * swx;
  if (!(denom > 0.0)) throw NumericalError("no resolvable decay window");
  const double slope = (sw * swxy - swx * swy) / denom;
  RateFit fit;
  fit.rate = -slope;
  fit.rate_std_error = std::sqrt(sw / denom);
  fit.intercept = (swy * swxx - swx * swxy) / denom;
  fit.window_size = used;
  return fit;
}

RateFit convergence_rate(const ModelDescriptor& model, Observable observable,
                         const std::vector<StateVector>& x0_list,
                         double horizon, int n_paths, double dt,
                         std::uint64_t seed) {
  const DecayCurve curve = observable_decay_curve(
      model, observable, x0_list, horizon, n_paths, dt, seed);
  return fit_exponential_decay(curve.times, curve.means, curve.std_errors);
}

double ou_second_moment(double p0, double temperature, double t) {
  return temperature + (p0 * p0 - temperature) * std::exp(-t);
}

}  // namespace chainlab
