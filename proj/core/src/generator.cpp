#include "chainlab/generator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "chainlab/errors.hpp"
#include "chainlab/noise.hpp"

namespace chainlab {

namespace {

void require_standard(const ModelDescriptor& m) {
  if (m.regime != Regime::Standard)
    throw ContractViolation(
        "generator closed forms are for the standard regime");
}

bool is_chain(const ModelDescriptor& m) {
  return m.kind != ModelKind::LefevereSchenkel;
}

// Accumulated mode sums of the mode chain: sum over all N modes of |P_k|^2,
// |Q_k|^2 and D_k^2 omega_k^2 (paired modes count twice).
struct ModeSums {
  double p_sq = 0.0;
  double q_sq = 0.0;
  double coupling = 0.0;
};

ModeSums mode_sums(const ModelDescriptor& m, const StateVector& s) {
  ModeSums sums;
  const int h = m.n_sites / 2;
  for (int k = 1; k < h; ++k) {
    const int at = ls_block_offset(m, k);
    const double w2 = ls_omega_sq(m, k);
    const double d = ls_mode_coupling(m, k);
    sums.p_sq += 2.0 * (s[at] * s[at] + s[at + 1] * s[at + 1]);
    sums.q_sq += 2.0 * (s[at + 2] * s[at + 2] + s[at + 3] * s[at + 3]);
    sums.coupling += 2.0 * d * d * w2;
  }
  for (int k : {0, h}) {
    const int at = ls_block_offset(m, k);
    sums.p_sq += s[at] * s[at];
    sums.q_sq += s[at + 1] * s[at + 1];
  }
  return sums;
}

}  // namespace

LyapunovConfig LyapunovConfig::make(double theta, double alpha) {
  if (!(theta > 0.0)) throw ContractViolation("theta must be > 0");
  if (!(alpha > 1.0)) throw ContractViolation("alpha must be > 1");
  return {theta, alpha, alpha / (alpha - 1.0)};
}

double max_bath_temperature(const ModelDescriptor& model) {
  if (model.kind == ModelKind::LefevereSchenkel) return model.temperature;
  return std::max(model.t_left, model.t_right);
}

bool theta_admissible(const LyapunovConfig& cfg, const ModelDescriptor& model) {
  return cfg.theta * max_bath_temperature(model) < 1.0;
}

bool hoelder_admissible(const LyapunovConfig& cfg,
                        const ModelDescriptor& model) {
  return cfg.alpha * cfg.theta * max_bath_temperature(model) < 1.0;
}

double apply_generator_H(const ModelDescriptor& model,
                         const StateVector& state) {
  require_standard(model);
  require_state(model, state);
  if (is_chain(model)) {
    const int n = model.n_sites;
    return 0.5 * (model.t_left - state[0] * state[0] + model.t_right -
                  state[n - 1] * state[n - 1]);
  }
  const ModeSums sums = mode_sums(model, state);
  return (model.n_sites - 1) * model.temperature + sums.coupling -
         0.5 * sums.p_sq;
}

double carre_du_champ_H(const ModelDescriptor& model,
                        const StateVector& state) {
  require_standard(model);
  require_state(model, state);
  if (is_chain(model)) {
    const int n = model.n_sites;
    return 0.5 * (model.t_left * state[0] * state[0] +
                  model.t_right * state[n - 1] * state[n - 1]);
  }
  const double st = std::sqrt(model.temperature);
  const int h = model.n_sites / 2;
  double acc = 0.0;
  for (int k = 1; k < h; ++k) {
    const int at = ls_block_offset(model, k);
    const double dw2 = ls_mode_coupling(model, k) * ls_omega_sq(model, k);
    const double along_x = st * state[at] - dw2 * state[at + 3];
    const double along_y = st * state[at + 1] + dw2 * state[at + 2];
    acc += 2.0 * (along_x * along_x + along_y * along_y);
  }
  for (int k : {0, h}) {
    const int at = ls_block_offset(model, k);
    acc += 0.5 * model.temperature * state[at] * state[at];
  }
  return acc;
}

double gamma_defect(const ModelDescriptor& model, const StateVector& state) {
  require_standard(model);
  const double h = hamiltonian(model, state);
  const Eigen::VectorXd grad = hamiltonian_gradient(model, state);
  const Eigen::MatrixXd hess = hamiltonian_hessian(model, state);
  const Eigen::VectorXd b = drift(model, state);
  const Eigen::MatrixXd sigma = diffusion(model, state);

  // L(H^2) = 2 H (b . grad H) + sum_ij a_ij (d_i H d_j H + H d_ij H).
  const Eigen::VectorXd sg = sigma.transpose() * grad;
  double trace_term = 0.0;
  for (int c = 0; c < sigma.cols(); ++c)
    trace_term += sigma.col(c).dot(hess * sigma.col(c));
  const double l_h_sq =
      2.0 * h * b.dot(grad) + sg.squaredNorm() + h * trace_term;

  const double closed_lh = apply_generator_H(model, state);
  return 0.5 * (l_h_sq - 2.0 * h * closed_lh) -
         carre_du_champ_H(model, state);
}

double lw_over_w(const ModelDescriptor& model, const StateVector& state,
                 const LyapunovConfig& cfg) {
  require_standard(model);
  require_state(model, state);
  const double theta = cfg.theta;
  if (is_chain(model)) {
    const int n = model.n_sites;
    const double p1_sq = state[0] * state[0];
    const double pn_sq = state[n - 1] * state[n - 1];
    return 0.5 * theta *
           ((model.t_left + model.t_right) - (p1_sq + pn_sq) +
            theta * (model.t_left * p1_sq + model.t_right * pn_sq));
  }
  return theta * apply_generator_H(model, state) +
         theta * theta * carre_du_champ_H(model, state);
}

DriftBoundReport drift_bound_check(const ModelDescriptor& model,
                                   const LyapunovConfig& cfg, int n_samples,
                                   double radius, std::uint64_t seed) {
  require_standard(model);
  if (n_samples < 1) throw ContractViolation("need n_samples >= 1");
  if (!(radius > 0.0)) throw ContractViolation("need radius > 0");

  DriftBoundReport report;
  report.n_samples = n_samples;

  const int dim = model.state_dim();
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample_ball = [&]() {
    StateVector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = normal(rng);
    const double norm = x.norm();
    const double r = radius * std::pow(unif(rng), 1.0 / dim);
    return norm > 0.0 ? StateVector((r / norm) * x)
                      : StateVector(StateVector::Zero(dim));
  };

  const bool chain = is_chain(model);
  double generator_bound = 0.0;
  if (chain) {
    report.theta_valid = theta_admissible(cfg, model);
  } else {
    const double t = model.temperature;
    const ModeSums sums = mode_sums(model, StateVector::Zero(dim));
    generator_bound = model.n_sites * t + sums.coupling;
    report.c1 = (model.n_sites - 1) * t + sums.coupling;
    report.c2 = 1.0 - 4.0 * cfg.alpha * cfg.theta * t;
    report.theta_valid = report.c2 > 0.0;
    if (report.c2 > 0.0) {
      const int h = model.n_sites / 2;
      for (int k = 0; k <= h; ++k) {
        const double w2 = ls_omega_sq(model, k);
        const double d = ls_mode_coupling(model, k);
        report.c3 = std::max(
            report.c3, 4.0 * cfg.alpha * w2 * w2 * d * d / report.c2);
      }
    }
  }
  const double chain_bound =
      0.5 * cfg.theta * (model.t_left + model.t_right);

  report.max_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const StateVector x = sample_ball();
    double violation;
    if (chain) {
      violation = lw_over_w(model, x, cfg) - chain_bound;
    } else {
      const double lh = apply_generator_H(model, x);
      violation = lh - generator_bound;
      if (report.c2 > 0.0) {
        const ModeSums sums = mode_sums(model, x);
        const double lhs = lh + cfg.theta * cfg.alpha * carre_du_champ_H(model, x);
        const double rhs =
            report.c1 -
            0.5 * report.c2 * (sums.p_sq - cfg.theta * report.c3 * sums.q_sq);
        violation = std::max(violation, lhs - rhs);
      }
    }
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.argmax_state = x;
    }
  }
  return report;
}

PathFunctionals path_functionals(const Trajectory& trajectory) {
  const auto& traj = trajectory;
  if (static_cast<long>(traj.states.size()) != traj.noise.n_steps + 1)
    throw ContractViolation("path functionals need every step recorded");
  PathFunctionals f;
  const ModelDescriptor& m = traj.model;
  const int n = m.n_sites;
  f.h_initial = hamiltonian(m, traj.states.front());
  f.h_final = hamiltonian(m, traj.states.back());
  double prev_lh = apply_generator_H(m, traj.states.front());
  double prev_gamma = carre_du_champ_H(m, traj.states.front());
  double prev_bdry = traj.states.front()[0] * traj.states.front()[0] +
                     traj.states.front()[n - 1] * traj.states.front()[n - 1];
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double h = traj.times[i] - traj.times[i - 1];
    const double lh = apply_generator_H(m, traj.states[i]);
    const double gamma = carre_du_champ_H(m, traj.states[i]);
    const double bdry = traj.states[i][0] * traj.states[i][0] +
                        traj.states[i][n - 1] * traj.states[i][n - 1];
    f.integral_lh += 0.5 * h * (prev_lh + lh);
    f.integral_gamma += 0.5 * h * (prev_gamma + gamma);
    f.integral_boundary += 0.5 * h * (prev_bdry + bdry);
    prev_lh = lh;
    prev_gamma = gamma;
    prev_bdry = bdry;
  }
  f.martingale = f.h_final - f.h_initial - f.integral_lh;
  return f;
}

double realized_quadratic_variation(const Trajectory& trajectory) {
  const auto& traj = trajectory;
  if (static_cast<long>(traj.states.size()) != traj.noise.n_steps + 1)
    throw ContractViolation("quadratic variation needs every step recorded");
  double qv = 0.0;
  double prev_h = hamiltonian(traj.model, traj.states.front());
  double prev_lh = apply_generator_H(traj.model, traj.states.front());
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    const double h = hamiltonian(traj.model, traj.states[i]);
    const double lh = apply_generator_H(traj.model, traj.states[i]);
    const double dm = h - prev_h - 0.5 * dt * (prev_lh + lh);
    qv += dm * dm;
    prev_h = h;
    prev_lh = lh;
  }
  return qv;
}

ExpBoundEstimate exp_bound_estimate(const ModelDescriptor& model,
                                    const StateVector& x,
                                    const LyapunovConfig& cfg, double t0,
                                    double c, int n_paths, double dt,
                                    std::uint64_t seed) {
  require_standard(model);
  if (!is_chain(model))
    throw ContractViolation("exponential bound applies to chain kinds");
  if (!hoelder_admissible(cfg, model))
    throw ContractViolation("need alpha * theta * maxT < 1");
  if (!(t0 >= 0.0) || !(dt > 0.0) || n_paths < 1)
    throw ContractViolation("need t0 >= 0, dt > 0, n_paths >= 1");

  const double max_t = max_bath_temperature(model);
  const double sum_t = model.t_left + model.t_right;
  ExpBoundEstimate est;
  est.c_used =
      c > 0.0 ? c
              : 0.5 * cfg.beta * cfg.theta * (1.0 - cfg.alpha * cfg.theta * max_t);

  const long n_steps = std::lround(t0 / dt);
  double sum_w = 0.0, sum_w_sq = 0.0;
  double sum_e = 0.0, sum_e_sq = 0.0;
  double sum_m = 0.0, sum_m_sq = 0.0;
  for (int i = 0; i < n_paths; ++i) {
    const Trajectory traj = simulate(model, x, dt, n_steps,
                                     derive_seed(seed, i + 1),
                                     Scheme::Splitting, 1);
    const PathFunctionals f = path_functionals(traj);
    const double w = std::exp(cfg.theta * (f.h_final - f.h_initial));
    const double e = std::exp(-est.c_used * f.integral_boundary);
    const double m =
        std::exp(cfg.alpha * cfg.theta * f.martingale -
                 0.5 * cfg.alpha * cfg.alpha * cfg.theta * cfg.theta *
                     2.0 * f.integral_gamma);
    sum_w += w;
    sum_w_sq += w * w;
    sum_e += e;
    sum_e_sq += e * e;
    sum_m += m;
    sum_m_sq += m * m;
  }
  const double inv_n = 1.0 / n_paths;
  auto se = [&](double s, double s_sq) {
    const double mean = s * inv_n;
    const double var = std::max(0.0, s_sq * inv_n - mean * mean);
    return std::sqrt(var * inv_n);
  };
  est.lhs = sum_w * inv_n;
  est.lhs_se = se(sum_w, sum_w_sq);
  est.martingale_mean = sum_m * inv_n;
  est.martingale_se = se(sum_m, sum_m_sq);

  const double mean_e = sum_e * inv_n;
  const double prefactor = std::exp(0.5 * cfg.theta * sum_t * t0);
  est.rhs = prefactor * std::pow(mean_e, 1.0 / cfg.beta);
  // Delta method through the 1/beta power.
  est.rhs_se = prefactor * (1.0 / cfg.beta) *
               std::pow(mean_e, 1.0 / cfg.beta - 1.0) * se(sum_e, sum_e_sq);
  return est;
}

}  // namespace chainlab
