#include "chainlab/integrators.hpp"

#include <cmath>

#include "chainlab/errors.hpp"

namespace chainlab {

namespace {

bool is_chain(const ModelDescriptor& m) {
  return m.kind == ModelKind::Pinned || m.kind == ModelKind::Unpinned ||
         m.kind == ModelKind::Exchange;
}

void check_step_args(const ModelDescriptor& model, const StateVector& state,
                     double dt, const Eigen::VectorXd& dw) {
  require_state(model, state);
  if (!(dt > 0.0)) throw ContractViolation("step needs dt > 0");
  if (dw.size() != model.noise_dim())
    throw ContractViolation("noise increment length must equal noise_dim");
}

void check_no_blow_up(const StateVector& state, long step) {
  if (state.allFinite() && state.cwiseAbs().maxCoeff() <= kBlowUpThreshold)
    return;
  throw BlowUpError(
      "blow-up at step " + std::to_string(step), step,
      std::vector<double>(state.data(), state.data() + state.size()));
}

// Force on the momenta from the current positions/interdistances.
void half_kick(const ModelDescriptor& m, StateVector& s, double h) {
  const int n = m.n_sites;
  if (m.kind == ModelKind::Pinned) {
    for (int i = 0; i < n; ++i)
      s[i] -= h * pinning_term(m, s[n + i], 1);
    for (int i = 0; i + 1 < n; ++i) {
      const double du = interaction_term(m, s[n + i + 1] - s[n + i], 1);
      s[i] += h * du;
      s[i + 1] -= h * du;
    }
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      const double du = interaction_term(m, s[n + i], 1);
      s[i] += h * du;
      s[i + 1] -= h * du;
    }
  }
}

}  // namespace

StateVector step_euler_maruyama(const ModelDescriptor& model,
                                const StateVector& state, double dt,
                                const Eigen::VectorXd& dw) {
  check_step_args(model, state, dt, dw);
  StateVector next =
      state + dt * drift(model, state) + diffusion(model, state) * dw;
  check_no_blow_up(next, -1);
  return next;
}

void apply_boundary_ou(const ModelDescriptor& model, StateVector& state,
                       double duration, const Eigen::Vector2d& xi) {
  if (!is_chain(model))
    throw ContractViolation("boundary baths exist for chain kinds only");
  require_state(model, state);
  if (!(duration > 0.0)) throw ContractViolation("duration must be > 0");
  const double c = boundary_friction_rate(model);
  const int idx[2] = {0, model.n_sites - 1};
  const double temp[2] = {model.t_left, model.t_right};
  if (model.regime == Regime::Limit) {
    if (c > 0.0) {
      const double decay = std::exp(-c * duration);
      state[idx[0]] *= decay;
      state[idx[1]] *= decay;
    }
    return;
  }
  const double pref = bath_noise_prefactor(model);
  const double decay = std::exp(-c * duration);
  const double var_unit = (1.0 - std::exp(-2.0 * c * duration)) / (2.0 * c);
  for (int j = 0; j < 2; ++j) {
    if (temp[j] == 0.0) continue;  // disconnected bath: pure-Verlet mode
    const double s = pref * std::sqrt(temp[j]);
    state[idx[j]] = decay * state[idx[j]] + s * std::sqrt(var_unit) * xi[j];
  }
}

void apply_exchange_rotations(const ModelDescriptor& model, StateVector& state,
                              const Eigen::VectorXd& dw, double fraction,
                              bool reverse) {
  if (model.kind != ModelKind::Exchange)
    throw ContractViolation("pair rotations exist for the exchange kind only");
  require_state(model, state);
  if (dw.size() != model.noise_dim())
    throw ContractViolation("noise increment length must equal noise_dim");
  const int n = model.n_sites;
  const double sg = std::sqrt(model.gamma);
  const int first = reverse ? n - 1 : 1;
  const int last = reverse ? 0 : n;
  const int dir = reverse ? -1 : 1;
  for (int i = first; i != last; i += dir) {
    const double angle = fraction * sg * dw[i];
    const double co = std::cos(angle);
    const double si = std::sin(angle);
    const double a = state[i - 1];
    const double b = state[i];
    state[i - 1] = co * a - si * b;
    state[i] = si * a + co * b;
  }
}

void apply_verlet(const ModelDescriptor& model, StateVector& state, double dt) {
  if (!is_chain(model))
    throw ContractViolation("Verlet core exists for chain kinds only");
  require_state(model, state);
  if (!(dt > 0.0)) throw ContractViolation("step needs dt > 0");
  const int n = model.n_sites;
  half_kick(model, state, 0.5 * dt);
  if (model.kind == ModelKind::Pinned) {
    for (int i = 0; i < n; ++i) state[n + i] += dt * state[i];
  } else {
    for (int i = 0; i + 1 < n; ++i)
      state[n + i] += dt * (state[i + 1] - state[i]);
  }
  half_kick(model, state, 0.5 * dt);
}

StateVector step_splitting(const ModelDescriptor& model,
                           const StateVector& state, double dt,
                           const Eigen::VectorXd& dw) {
  if (!is_chain(model))
    throw ContractViolation("splitting scheme supports chain kinds only");
  check_step_args(model, state, dt, dw);
  const bool exchange = model.kind == ModelKind::Exchange;
  const int right = exchange ? model.n_sites : 1;
  // Half the increment per OU half-step, as a standard normal.
  const double to_xi = 1.0 / std::sqrt(2.0 * dt);
  const Eigen::Vector2d xi(dw[0] * to_xi, dw[right] * to_xi);
  StateVector s = state;
  apply_boundary_ou(model, s, 0.5 * dt, xi);
  if (exchange) apply_exchange_rotations(model, s, dw, 0.5, false);
  apply_verlet(model, s, dt);
  if (exchange) apply_exchange_rotations(model, s, dw, 0.5, true);
  apply_boundary_ou(model, s, 0.5 * dt, xi);
  check_no_blow_up(s, -1);
  return s;
}

Trajectory simulate(const ModelDescriptor& model, const StateVector& init,
                    double dt, long n_steps, std::uint64_t seed, Scheme scheme,
                    long record_every) {
  require_state(model, init);
  if (!(dt > 0.0)) throw ContractViolation("simulate needs dt > 0");
  if (n_steps < 0) throw ContractViolation("simulate needs n_steps >= 0");
  if (record_every < 1 || n_steps % record_every != 0)
    throw ContractViolation("record_every must be >= 1 and divide n_steps");
  Trajectory traj;
  traj.model = model;
  traj.noise = NoisePath{seed, dt, n_steps, model.noise_dim()};
  traj.times.reserve(n_steps / record_every + 1);
  traj.states.reserve(n_steps / record_every + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(init);
  NoiseStream stream(traj.noise);
  StateVector state = init;
  for (long i = 0; i < n_steps; ++i) {
    const Eigen::VectorXd dw = stream.next();
    try {
      state = scheme == Scheme::Euler
                  ? step_euler_maruyama(model, state, dt, dw)
                  : step_splitting(model, state, dt, dw);
    } catch (const BlowUpError& err) {
      throw BlowUpError("blow-up at step " + std::to_string(i + 1), i + 1,
                        err.state);
    }
    if ((i + 1) % record_every == 0) {
      traj.times.push_back(static_cast<double>(i + 1) * dt);
      traj.states.push_back(state);
    }
  }
  return traj;
}

double boundary_momentum_integral(const Trajectory& trajectory) {
  const auto& states = trajectory.states;
  if (states.size() < 2) return 0.0;
  const int n = trajectory.model.n_sites;
  auto f = [&](const StateVector& s) {
    return s[0] * s[0] + s[n - 1] * s[n - 1];
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    const double h = trajectory.times[i + 1] - trajectory.times[i];
    acc += 0.5 * h * (f(states[i]) + f(states[i + 1]));
  }
  return acc;
}

ScaledComparisonReport scaled_comparison(const ModelDescriptor& model,
                                         const StateVector& x,
                                         const std::vector<double>& energies,
                                         double horizon, double dt,
                                         std::uint64_t seed) {
  if (model.regime != Regime::Standard ||
      (model.kind != ModelKind::Pinned && model.kind != ModelKind::Unpinned))
    throw ContractViolation(
        "scaled comparison applies to standard pinned/unpinned chains");
  require_state(model, x);
  if (energies.empty())
    throw ContractViolation("scaled comparison needs at least one energy");
  for (std::size_t i = 0; i + 1 < energies.size(); ++i)
    if (!(energies[i] < energies[i + 1]))
      throw ContractViolation("energies must be strictly increasing");
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw ContractViolation("scaled comparison needs horizon > 0 and dt > 0");

  const ModelDescriptor limit = limit_model(model);
  if (std::abs(hamiltonian(limit, x) - 1.0) > 1e-9)
    throw ContractViolation("initial state must have limit energy 1");

  const long n_steps = std::lround(horizon / dt);
  if (n_steps < 1) throw ContractViolation("horizon shorter than one step");
  const NoisePath path{seed, dt, n_steps, model.noise_dim()};
  const Eigen::MatrixXd dw = materialize(path);
  const int n = model.n_sites;
  const int k = model.potentials->k;

  // Limit trajectory plus its boundary-momentum integral.
  std::vector<StateVector> limit_states;
  limit_states.reserve(n_steps + 1);
  limit_states.push_back(x);
  double integral = 0.0;
  {
    StateVector s = x;
    for (long j = 0; j < n_steps; ++j) {
      const double f0 = s[0] * s[0] + s[n - 1] * s[n - 1];
      s = step_euler_maruyama(limit, s, dt, dw.row(j));
      const double f1 = s[0] * s[0] + s[n - 1] * s[n - 1];
      integral += 0.5 * dt * (f0 + f1);
      limit_states.push_back(s);
    }
  }

  ScaledComparisonReport report;
  report.limit_boundary_integral = integral;
  for (double energy : energies) {
    const ModelDescriptor scaled = scaled_model(model, energy);
    const ScalingMap map = make_scaling_map(model, energy);

    // Rescaled original run: same path under the time change
    // s = E^{1/k - 1/2} t, with dB = E^{1/(2k) - 1/4} dW.
    const double time_factor = std::pow(energy, 1.0 / k - 0.5);
    const double noise_factor = std::pow(energy, 1.0 / (2.0 * k) - 0.25);
    StateVector original = x;
    for (int i = 0; i < n; ++i) original[i] *= std::pow(energy, 0.5);
    for (int i = n; i < original.size(); ++i)
      original[i] *= std::pow(energy, 1.0 / k);

    StateVector s = x;
    double sup = 0.0;
    double cross = 0.0;
    for (long j = 0; j < n_steps; ++j) {
      s = step_euler_maruyama(scaled, s, dt, dw.row(j));
      sup = std::max(sup, (s - limit_states[j + 1]).cwiseAbs().maxCoeff());
      original = step_euler_maruyama(model, original, dt * time_factor,
                                     noise_factor * dw.row(j).transpose());
      cross = std::max(
          cross, (scale_state(map, original) - s).cwiseAbs().maxCoeff());
    }
    report.entries.push_back({energy, sup});
    report.rescaling_check_error = std::max(report.rescaling_check_error, cross);
  }
  return report;
}

}  // namespace chainlab
