#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "chainlab/models.hpp"
#include "chainlab/polyfield.hpp"

namespace chainlab {

// Singular values below this fraction of the largest count as zero when
// ranking controllability and bracket-span matrices.
inline constexpr double kRankThreshold = 1e-8;

// dx/dt = A x + B u.
struct LinearControlSystem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;

  int n() const { return static_cast<int>(a.rows()); }
  int m() const { return static_cast<int>(b.cols()); }
};

struct LinearSystemOptions {
  // Keep the -1/2 boundary damping entries in A; disabling reproduces the
  // undamped block form (0 A~; I 0), and rank conclusions match either way.
  bool include_damping = true;
  // Diagnostic sign variant with +alpha instead of -alpha on the tridiagonal
  // diagonal; the physical convention is the default.
  bool positive_pinning_sign = false;
};

// Linear boundary-control system for harmonic pinned/unpinned chains (n = 2N
// resp. 2N-1, m = 2, with the bath strengths sqrt(T_i) folded into B) or the
// block-diagonal mode chain (n = 2N, m = N).
LinearControlSystem build_linear_system(const ModelDescriptor& model,
                                        const LinearSystemOptions& options = {});

// Per-mode systems of the mode chain, indexed k = 0..N/2: 4x2 blocks for the
// paired modes, 2x1 for k in {0, N/2}.
std::vector<LinearControlSystem> ls_mode_systems(
    const ModelDescriptor& model, const LinearSystemOptions& options = {});

// [B, AB, ..., A^{n-1}B].
Eigen::MatrixXd controllability_matrix(const LinearControlSystem& sys);

// Rank of the controllability matrix by SVD with the relative threshold
// above; rank == n certifies accessibility of the whole space.
int kalman_rank(const LinearControlSystem& sys);

struct HoermanderReport {
  int rank = 0;
  int closure_size = 0;
  int depth_reached = 0;
  std::vector<std::string> witnesses;  // bracket words of a spanning subset
};

// Closes `noise_fields` under left-normed brackets with the drift and the
// noise fields (depth 1 = the noise fields themselves), evaluates every
// field at `state`, and ranks the span. The drift enters through brackets
// only, so for linear dynamics this reproduces the Kalman rank at any state.
HoermanderReport bracket_closure_rank(
    const PolyVectorField& drift_field,
    const std::vector<PolyVectorField>& noise_fields, const StateVector& state,
    int max_depth);

// The above applied to the model's own drift and diffusion columns.
// Requires polynomial potentials.
HoermanderReport hoermander_rank(const ModelDescriptor& model,
                                 const StateVector& state, int max_depth);

}  // namespace chainlab
