#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "chainlab/potentials.hpp"

namespace chainlab {

using StateVector = Eigen::VectorXd;

// The four dynamical families, each with Langevin baths of friction 1/2 and
// noise sqrt(T) on the boundary momenta (the bath normalization is fixed,
// not configurable):
//   Pinned            (q, p) chain, on-site pinning allowed
//   Unpinned          interdistance coordinates r_i = q_{i+1} - q_i, no pinning
//   Exchange          harmonic chain with pairwise momentum-exchange noise
//   LefevereSchenkel  Fourier-mode chain in its real representation
enum class ModelKind { Pinned, Unpinned, Exchange, LefevereSchenkel };

// Standard: the model as defined. Scaled: the energy-E rescaled system
// (friction E^{1/k-1/2}/2, bath noise prefactor E^{1/(2k)-3/4}, potentials
// read through the spatial scaling). Limit: the E -> infinity system
// (leading monomials, friction only for k = 2, bath noise gone; the
// exchange kind keeps its multiplicative exchange noise).
enum class Regime { Standard, Scaled, Limit };

struct ModelDescriptor {
  ModelKind kind = ModelKind::Pinned;
  Regime regime = Regime::Standard;
  double scale_energy = 1.0;  // E; meaningful for Scaled only
  int n_sites = 0;            // N

  std::optional<PotentialSpec> potentials;  // Pinned/Unpinned only
  double t_left = 0.0;
  double t_right = 0.0;

  double gamma = 0.0;  // Exchange coupling strength

  double omega = 0.0;        // LS base frequency
  double mu = 0.0;           // LS pinning parameter
  double temperature = 0.0;  // LS common bath temperature
  // LS mode couplings D, length N, indexed k = 0..N-1 with D[k] = D[N-k]
  // and D[0] = D[N/2] = 0.
  std::vector<double> mode_coupling;

  int state_dim() const;
  int noise_dim() const;
};

ModelDescriptor make_pinned(int n_sites, const PotentialSpec& potentials,
                            double t_left, double t_right);
ModelDescriptor make_unpinned(int n_sites, const PotentialSpec& potentials,
                              double t_left, double t_right);
ModelDescriptor make_exchange(int n_sites, double gamma, double t_left,
                              double t_right);
ModelDescriptor make_lefevere_schenkel(int n_sites, double omega, double mu,
                                       double temperature,
                                       std::vector<double> mode_coupling);

// Energy-E rescaling of a standard pinned/unpinned model.
ModelDescriptor scaled_model(const ModelDescriptor& model, double energy);

// E -> infinity limit of a standard model. Pinned/unpinned require even k;
// the pinning term survives only when l = k.
ModelDescriptor limit_model(const ModelDescriptor& model);

// Coordinate labels in state order. Pinned: p1..pN, q1..qN. Unpinned and
// exchange: p1..pN, r1..r{N-1}. LS: (Rk, Sk, Vk, Wk) for k = 1..N/2-1,
// then (R0, V0), (R{N/2}, V{N/2}).
std::vector<std::string> state_labels(const ModelDescriptor& model);

std::string kind_name(const ModelDescriptor& model);

double hamiltonian(const ModelDescriptor& model, const StateVector& state);
Eigen::VectorXd hamiltonian_gradient(const ModelDescriptor& model,
                                     const StateVector& state);
Eigen::MatrixXd hamiltonian_hessian(const ModelDescriptor& model,
                                    const StateVector& state);

// Full Ito drift (Hamiltonian part, boundary friction, and for the exchange
// kind the -gamma/2 per-pair Ito corrections of the rotation noise).
Eigen::VectorXd drift(const ModelDescriptor& model, const StateVector& state);

// Noise coefficient matrix, one column per channel. Chains: 2 bath columns.
// Exchange: N+1 columns ordered B_{0,1}, B_{1,2}, .., B_{N-1,N}, B_{N,N+1}.
// LS: N columns ordered X1, Y1, .., X{N/2-1}, Y{N/2-1}, X0, X{N/2}.
Eigen::MatrixXd diffusion(const ModelDescriptor& model,
                          const StateVector& state);

// Hamiltonian drift with the boundary friction added back, used to verify
// that the conservative part annihilates H.
Eigen::VectorXd conservative_drift(const ModelDescriptor& model,
                                   const StateVector& state);

// Spatial part of the energy scaling: momenta scale by E^{-1/2}, positions
// by E^{-1/k}. Time rescaling belongs to the integrator experiments.
struct ScalingMap {
  double energy = 1.0;
  int k = 2;
  int n_momenta = 0;
  int dim = 0;
};

ScalingMap make_scaling_map(const ModelDescriptor& model, double energy);
StateVector scale_state(const ScalingMap& map, const StateVector& state);

// Boundary-bath parameters per regime: momentum drift -c p with
// c = friction rate, and bath noise column sqrt(T) * prefactor.
double boundary_friction_rate(const ModelDescriptor& model);
double bath_noise_prefactor(const ModelDescriptor& model);

// LS mode data. k may be negative (symmetric lookup).
double ls_omega_sq(const ModelDescriptor& model, int k);
// Offset of mode k's block in the state vector, k = 0..N/2.
int ls_block_offset(const ModelDescriptor& model, int k);
double ls_mode_coupling(const ModelDescriptor& model, int k);

// Effective interaction/pinning derivative of given order as seen by the
// model's regime (scaling factors absorbed, limit monomials substituted).
double interaction_term(const ModelDescriptor& model, double x, int order);
double pinning_term(const ModelDescriptor& model, double x, int order);

void require_state(const ModelDescriptor& model, const StateVector& state);

}  // namespace chainlab
