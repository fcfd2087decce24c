#include "chainlab/controllability.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <set>

#include "chainlab/errors.hpp"
#include "chainlab/potentials.hpp"

namespace chainlab {

namespace {

int matrix_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankThreshold * sv(0)) ++rank;
  return rank;
}

// Quadratic coefficient of an ascending sequence, with everything else
// required to vanish (degree <= 2 and no constant/linear part).
double quadratic_coefficient(const std::vector<double>& coeffs,
                             const char* what) {
  double quad = 0.0;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    if (coeffs[p] == 0.0) continue;
    if (p != 2) throw ContractViolation(std::string(what) + ": Kalman requires linear dynamics");
    quad = coeffs[p];
  }
  return quad;
}

LinearControlSystem assemble_chain(const ModelDescriptor& model,
                                   const LinearSystemOptions& options) {
  const int n = model.n_sites;
  const PotentialSpec& spec = *model.potentials;
  const double u2 = quadratic_coefficient(interaction_coefficients(spec),
                                          "interaction potential");
  const double spring = 2.0 * u2;  // U = u2 x^2 -> U'' = 2 u2
  double alpha = 0.0;
  if (model.kind == ModelKind::Pinned &&
      spec.v.kind != PinningKind::None) {
    if (!pinning_is_polynomial(spec))
      throw ContractViolation("pinning potential: Kalman requires linear dynamics");
    alpha = 2.0 * quadratic_coefficient(pinning_coefficients(spec),
                                        "pinning potential");
  }
  const double pin = options.positive_pinning_sign ? alpha : -alpha;

  LinearControlSystem sys;
  const int dim = model.state_dim();
  sys.a = Eigen::MatrixXd::Zero(dim, dim);
  sys.b = Eigen::MatrixXd::Zero(dim, 2);
  if (model.kind == ModelKind::Pinned) {
    for (int i = 0; i < n; ++i) {
      sys.a(n + i, i) = 1.0;  // dq_i = p_i
      sys.a(i, n + i) += pin;
    }
    for (int i = 0; i + 1 < n; ++i) {
      sys.a(i, n + i) -= spring;
      sys.a(i, n + i + 1) += spring;
      sys.a(i + 1, n + i) += spring;
      sys.a(i + 1, n + i + 1) -= spring;
    }
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      sys.a(n + i, i) = -1.0;  // dr_i = p_{i+1} - p_i
      sys.a(n + i, i + 1) = 1.0;
      sys.a(i, n + i) += spring;
      sys.a(i + 1, n + i) -= spring;
    }
  }
  if (options.include_damping) {
    sys.a(0, 0) -= 0.5;
    sys.a(n - 1, n - 1) -= 0.5;
  }
  sys.b(0, 0) = std::sqrt(model.t_left);
  sys.b(n - 1, 1) = std::sqrt(model.t_right);
  return sys;
}

LinearControlSystem ls_block(const ModelDescriptor& model, int k,
                             const LinearSystemOptions& options) {
  const int h = model.n_sites / 2;
  const double w2 = ls_omega_sq(model, k);
  const double st = std::sqrt(model.temperature);
  const double damp = options.include_damping ? -0.5 : 0.0;
  LinearControlSystem sys;
  if (k == 0 || k == h) {
    sys.a = Eigen::MatrixXd::Zero(2, 2);
    sys.b = Eigen::MatrixXd::Zero(2, 1);
    sys.a(0, 0) = damp;
    sys.a(0, 1) = -w2;
    sys.a(1, 0) = 1.0;
    sys.b(0, 0) = st;
    return sys;
  }
  const double d = ls_mode_coupling(model, k);
  sys.a = Eigen::MatrixXd::Zero(4, 4);
  sys.b = Eigen::MatrixXd::Zero(4, 2);
  sys.a(0, 0) = damp;
  sys.a(0, 2) = -w2;
  sys.a(1, 1) = damp;
  sys.a(1, 3) = -w2;
  sys.a(2, 0) = 1.0;
  sys.a(3, 1) = 1.0;
  sys.b(0, 0) = st;
  sys.b(3, 0) = -d;
  sys.b(1, 1) = st;
  sys.b(2, 1) = d;
  return sys;
}

}  // namespace

LinearControlSystem build_linear_system(const ModelDescriptor& model,
                                        const LinearSystemOptions& options) {
  if (model.regime != Regime::Standard)
    throw ContractViolation("control systems are built in the standard regime");
  switch (model.kind) {
    case ModelKind::Pinned:
    case ModelKind::Unpinned:
      return assemble_chain(model, options);
    case ModelKind::Exchange:
      throw ContractViolation(
          "exchange noise is multiplicative: Kalman requires linear dynamics");
    case ModelKind::LefevereSchenkel: {
      const int n = model.n_sites;
      const int h = n / 2;
      LinearControlSystem sys;
      sys.a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      sys.b = Eigen::MatrixXd::Zero(2 * n, n);
      for (int k = 0; k <= h; ++k) {
        const LinearControlSystem block = ls_block(model, k, options);
        const int at = ls_block_offset(model, k);
        const int col = k == 0 ? n - 2 : (k == h ? n - 1 : 2 * (k - 1));
        sys.a.block(at, at, block.n(), block.n()) = block.a;
        sys.b.block(at, col, block.n(), block.m()) = block.b;
      }
      return sys;
    }
  }
  throw ContractViolation("unknown model kind");
}

std::vector<LinearControlSystem> ls_mode_systems(
    const ModelDescriptor& model, const LinearSystemOptions& options) {
  if (model.kind != ModelKind::LefevereSchenkel)
    throw ContractViolation("per-mode systems exist for the mode chain only");
  if (model.regime != Regime::Standard)
    throw ContractViolation("control systems are built in the standard regime");
  std::vector<LinearControlSystem> blocks;
  const int h = model.n_sites / 2;
  blocks.reserve(h + 1);
  for (int k = 0; k <= h; ++k) blocks.push_back(ls_block(model, k, options));
  return blocks;
}

Eigen::MatrixXd controllability_matrix(const LinearControlSystem& sys) {
  const int n = sys.n();
  const int m = sys.m();
  if (n == 0 || sys.a.cols() != n || sys.b.rows() != n)
    throw ContractViolation("inconsistent control system dimensions");
  Eigen::MatrixXd ctrl(n, n * m);
  Eigen::MatrixXd block = sys.b;
  for (int j = 0; j < n; ++j) {
    ctrl.middleCols(j * m, m) = block;
    if (j + 1 < n) block = sys.a * block;
  }
  return ctrl;
}

int kalman_rank(const LinearControlSystem& sys) {
  return matrix_rank(controllability_matrix(sys));
}

namespace {

// Scale-normalized fingerprint for deduplicating fields in the closure.
std::string field_key(const PolyVectorField& f) {
  double lead = 0.0;
  for (const auto& comp : f.components) {
    if (!comp.is_zero()) {
      lead = comp.terms().begin()->second;
      break;
    }
  }
  std::string key;
  char buf[64];
  for (int i = 0; i < f.dim(); ++i) {
    key += '|';
    for (const auto& [e, c] : f.components[i].terms()) {
      for (int v : e) {
        std::snprintf(buf, sizeof(buf), "%d.", v);
        key += buf;
      }
      std::snprintf(buf, sizeof(buf), ":%.17g;", c / lead);
      key += buf;
    }
  }
  return key;
}

}  // namespace

HoermanderReport bracket_closure_rank(
    const PolyVectorField& drift_field,
    const std::vector<PolyVectorField>& noise_fields, const StateVector& state,
    int max_depth) {
  if (max_depth < 1) throw ContractViolation("max_depth must be >= 1");
  const int dim = drift_field.dim();
  if (static_cast<int>(state.size()) != dim)
    throw ContractViolation("state dimension does not match the fields");

  std::set<std::string> seen;
  std::vector<PolyVectorField> basis;
  std::vector<PolyVectorField> frontier;
  for (const auto& f : noise_fields) {
    if (f.dim() != dim)
      throw ContractViolation("field dimensions must agree");
    if (f.is_zero()) continue;
    if (seen.insert(field_key(f)).second) {
      basis.push_back(f);
      frontier.push_back(f);
    }
  }

  std::vector<PolyVectorField> generators;
  generators.push_back(drift_field);
  for (const auto& f : basis) generators.push_back(f);

  auto span_rank = [&]() {
    Eigen::MatrixXd span(dim, static_cast<int>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
      span.col(static_cast<int>(j)) = basis[j].evaluate(state);
    return matrix_rank(span);
  };

  HoermanderReport report;
  report.depth_reached = 1;
  report.rank = span_rank();
  while (report.rank < dim && report.depth_reached < max_depth &&
         !frontier.empty()) {
    std::vector<PolyVectorField> next;
    for (const auto& f : frontier) {
      for (const auto& g : generators) {
        PolyVectorField br = lie_bracket(g, f);
        if (br.is_zero()) continue;
        if (!seen.insert(field_key(br)).second) continue;
        next.push_back(br);
      }
    }
    if (next.empty()) break;
    frontier = next;
    for (auto& f : next) basis.push_back(std::move(f));
    ++report.depth_reached;
    report.rank = span_rank();
  }
  report.closure_size = static_cast<int>(basis.size());

  // Greedy spanning subset for the witness list.
  Eigen::MatrixXd kept(dim, 0);
  int kept_rank = 0;
  for (const auto& f : basis) {
    Eigen::MatrixXd trial(dim, kept.cols() + 1);
    trial << kept, f.evaluate(state);
    const int r = matrix_rank(trial);
    if (r > kept_rank) {
      kept = trial;
      kept_rank = r;
      report.witnesses.push_back(f.word);
    }
    if (kept_rank == report.rank) break;
  }
  return report;
}

HoermanderReport hoermander_rank(const ModelDescriptor& model,
                                 const StateVector& state, int max_depth) {
  require_state(model, state);
  return bracket_closure_rank(drift_field(model), diffusion_fields(model),
                              state, max_depth);
}

}  // namespace chainlab
