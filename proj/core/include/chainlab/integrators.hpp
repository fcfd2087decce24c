#pragma once

#include <cstdint>
#include <vector>

#include "chainlab/models.hpp"
#include "chainlab/noise.hpp"

namespace chainlab {

// Any coordinate beyond this magnitude is treated as a numerical explosion.
inline constexpr double kBlowUpThreshold = 1e12;

enum class Scheme { Euler, Splitting };

struct Trajectory {
  ModelDescriptor model;
  std::vector<double> times;
  std::vector<StateVector> states;
  NoisePath noise;
};

// One explicit Euler-Maruyama step: state + drift*dt + diffusion*dW, with the
// diffusion evaluated at the pre-step state (Ito point).
StateVector step_euler_maruyama(const ModelDescriptor& model,
                                const StateVector& state, double dt,
                                const Eigen::VectorXd& dw);

// One Strang step: boundary OU half-step (and, for the exchange kind, pair
// rotations) -> velocity-Verlet -> the same pieces mirrored. Chain kinds only.
// Each OU half consumes half of the step's Wiener increment, so the scheme
// reads exactly one increment per step per channel, like the Euler scheme.
StateVector step_splitting(const ModelDescriptor& model,
                           const StateVector& state, double dt,
                           const Eigen::VectorXd& dw);

// Exact Ornstein-Uhlenbeck update of the two boundary momenta over `duration`:
// p <- e^{-c d} p + sqrt(s^2 (1 - e^{-2 c d}) / (2c)) * xi, with c the
// boundary friction rate, s the bath noise coefficient, and xi a standard
// normal per bath (xi = [left, right]). A zero-temperature bath in the
// standard/scaled regimes is skipped entirely (pure-Verlet testing mode);
// limit-regime friction is applied as a pure contraction.
void apply_boundary_ou(const ModelDescriptor& model, StateVector& state,
                       double duration, const Eigen::Vector2d& xi);

// Exact rotation of each momentum pair (p_i, p_{i+1}) by the random angle
// fraction * sqrt(gamma) * dW_i, applied for i = 1..N-1 in ascending order
// (descending when `reverse`, for the mirrored Strang half). `dw` is the full
// increment vector; only the exchange channels are read. Each rotation
// conserves p_i^2 + p_{i+1}^2 exactly.
void apply_exchange_rotations(const ModelDescriptor& model, StateVector& state,
                              const Eigen::VectorXd& dw, double fraction,
                              bool reverse);

// One velocity-Verlet step of the Hamiltonian part (chain kinds).
void apply_verlet(const ModelDescriptor& model, StateVector& state, double dt);

// Integrates n_steps from init with increments regenerated from `seed`;
// records every record_every-th state (which must divide n_steps). A pure
// function of its arguments: same inputs, bit-identical trajectory.
Trajectory simulate(const ModelDescriptor& model, const StateVector& init,
                    double dt, long n_steps, std::uint64_t seed, Scheme scheme,
                    long record_every = 1);

// Trapezoid integral of p_1^2 + p_N^2 over the recorded states.
double boundary_momentum_integral(const Trajectory& trajectory);

struct ScaledComparisonEntry {
  double energy = 0.0;
  double sup_distance = 0.0;
};

struct ScaledComparisonReport {
  std::vector<ScaledComparisonEntry> entries;
  // Trapezoid of p_1^2 + p_N^2 along the limit trajectory.
  double limit_boundary_integral = 0.0;
  // Cross-check: the scaled run and the rescaled original run discretize the
  // same path, so their pointwise gap should be at rounding level.
  double rescaling_check_error = 0.0;
};

// Shared-noise comparison between the rescaled systems and their limit.
// `x` is the common initial state, normalized so the limit energy is 1;
// one noise path drives every run. Euler stepping throughout.
ScaledComparisonReport scaled_comparison(const ModelDescriptor& model,
                                         const StateVector& x,
                                         const std::vector<double>& energies,
                                         double horizon, double dt,
                                         std::uint64_t seed);

}  // namespace chainlab
