#include "chainlab/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chainlab/errors.hpp"

namespace chainlab {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

// d^order/dx^order of lead * x^exp, for even exp (limit-regime monomials).
double monomial_term(double lead, int exp, double x, int order) {
  if (order > exp) return 0.0;
  double c = lead;
  int e = exp;
  for (int i = 0; i < order; ++i) {
    c *= static_cast<double>(e);
    --e;
  }
  return c * ipow(x, e);
}

int half_modes(const ModelDescriptor& m) { return m.n_sites / 2; }

const PotentialSpec& spec_of(const ModelDescriptor& m) {
  if (!m.potentials)
    throw ContractViolation("model carries no potential specification");
  return *m.potentials;
}

void check_temperatures(double t_left, double t_right) {
  if (!(t_left >= 0.0) || !(t_right >= 0.0) || !std::isfinite(t_left) ||
      !std::isfinite(t_right))
    throw ContractViolation("bath temperatures must be finite and >= 0");
}

}  // namespace

int ModelDescriptor::state_dim() const {
  switch (kind) {
    case ModelKind::Pinned:
      return 2 * n_sites;
    case ModelKind::Unpinned:
    case ModelKind::Exchange:
      return 2 * n_sites - 1;
    case ModelKind::LefevereSchenkel:
      return 2 * n_sites;
  }
  return 0;
}

int ModelDescriptor::noise_dim() const {
  switch (kind) {
    case ModelKind::Pinned:
    case ModelKind::Unpinned:
      return 2;
    case ModelKind::Exchange:
      return n_sites + 1;
    case ModelKind::LefevereSchenkel:
      return n_sites;
  }
  return 0;
}

ModelDescriptor make_pinned(int n_sites, const PotentialSpec& potentials,
                            double t_left, double t_right) {
  if (n_sites < 2) throw ContractViolation("chain needs at least 2 sites");
  check_temperatures(t_left, t_right);
  validate_potentials(potentials);
  ModelDescriptor m;
  m.kind = ModelKind::Pinned;
  m.n_sites = n_sites;
  m.potentials = potentials;
  m.t_left = t_left;
  m.t_right = t_right;
  return m;
}

ModelDescriptor make_unpinned(int n_sites, const PotentialSpec& potentials,
                              double t_left, double t_right) {
  if (n_sites < 2) throw ContractViolation("chain needs at least 2 sites");
  check_temperatures(t_left, t_right);
  validate_potentials(potentials);
  if (potentials.v.kind != PinningKind::None)
    throw ContractViolation(
        "unpinned model uses interdistance coordinates and admits no pinning");
  ModelDescriptor m;
  m.kind = ModelKind::Unpinned;
  m.n_sites = n_sites;
  m.potentials = potentials;
  m.t_left = t_left;
  m.t_right = t_right;
  return m;
}

ModelDescriptor make_exchange(int n_sites, double gamma, double t_left,
                              double t_right) {
  if (n_sites < 2) throw ContractViolation("chain needs at least 2 sites");
  check_temperatures(t_left, t_right);
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw ContractViolation("exchange coupling gamma must be finite and >= 0");
  ModelDescriptor m;
  m.kind = ModelKind::Exchange;
  m.n_sites = n_sites;
  m.gamma = gamma;
  m.t_left = t_left;
  m.t_right = t_right;
  return m;
}

ModelDescriptor make_lefevere_schenkel(int n_sites, double omega, double mu,
                                       double temperature,
                                       std::vector<double> mode_coupling) {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw ContractViolation("mode chain needs an even number of sites >= 4");
  if (!(omega > 0.0) || !(mu > 0.0))
    throw ContractViolation("mode chain needs omega > 0 and mu > 0");
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw ContractViolation("bath temperature must be finite and >= 0");
  if (static_cast<int>(mode_coupling.size()) != n_sites)
    throw ContractViolation("mode couplings must have length N");
  const int h = n_sites / 2;
  for (double d : mode_coupling)
    if (!std::isfinite(d))
      throw ContractViolation("mode couplings must be finite");
  if (mode_coupling[0] != 0.0 || mode_coupling[h] != 0.0)
    throw ContractViolation("mode couplings D_0 and D_{N/2} must vanish");
  for (int k = 1; k < n_sites; ++k)
    if (mode_coupling[k] != mode_coupling[n_sites - k])
      throw ContractViolation("mode couplings must satisfy D_k = D_{-k}");
  ModelDescriptor m;
  m.kind = ModelKind::LefevereSchenkel;
  m.n_sites = n_sites;
  m.omega = omega;
  m.mu = mu;
  m.temperature = temperature;
  m.mode_coupling = std::move(mode_coupling);
  return m;
}

ModelDescriptor scaled_model(const ModelDescriptor& model, double energy) {
  if (model.regime != Regime::Standard)
    throw ContractViolation("scaling starts from a standard-regime model");
  if (model.kind != ModelKind::Pinned && model.kind != ModelKind::Unpinned)
    throw ContractViolation("energy scaling applies to pinned/unpinned chains");
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw ContractViolation("scaling energy must be finite and > 0");
  ModelDescriptor m = model;
  m.regime = Regime::Scaled;
  m.scale_energy = energy;
  return m;
}

ModelDescriptor limit_model(const ModelDescriptor& model) {
  if (model.regime != Regime::Standard)
    throw ContractViolation("limit starts from a standard-regime model");
  ModelDescriptor m = model;
  m.regime = Regime::Limit;
  m.scale_energy = 1.0;
  if (model.kind == ModelKind::Pinned || model.kind == ModelKind::Unpinned) {
    if (spec_of(model).k % 2 != 0)
      throw ContractViolation("limit convexity requires even k");
  }
  return m;
}

std::vector<std::string> state_labels(const ModelDescriptor& model) {
  std::vector<std::string> labels;
  const int n = model.n_sites;
  switch (model.kind) {
    case ModelKind::Pinned:
      for (int i = 1; i <= n; ++i) labels.push_back("p" + std::to_string(i));
      for (int i = 1; i <= n; ++i) labels.push_back("q" + std::to_string(i));
      break;
    case ModelKind::Unpinned:
    case ModelKind::Exchange:
      for (int i = 1; i <= n; ++i) labels.push_back("p" + std::to_string(i));
      for (int i = 1; i < n; ++i) labels.push_back("r" + std::to_string(i));
      break;
    case ModelKind::LefevereSchenkel: {
      const int h = half_modes(model);
      for (int k = 1; k < h; ++k) {
        const std::string ks = std::to_string(k);
        labels.push_back("R" + ks);
        labels.push_back("S" + ks);
        labels.push_back("V" + ks);
        labels.push_back("W" + ks);
      }
      labels.push_back("R0");
      labels.push_back("V0");
      labels.push_back("R" + std::to_string(h));
      labels.push_back("V" + std::to_string(h));
      break;
    }
  }
  return labels;
}

std::string kind_name(const ModelDescriptor& model) {
  std::string base;
  switch (model.kind) {
    case ModelKind::Pinned:
      base = "pinned";
      break;
    case ModelKind::Unpinned:
      base = "unpinned";
      break;
    case ModelKind::Exchange:
      base = "exchange";
      break;
    case ModelKind::LefevereSchenkel:
      base = "lefevere_schenkel";
      break;
  }
  switch (model.regime) {
    case Regime::Standard:
      return base;
    case Regime::Scaled:
      return base + "_scaled";
    case Regime::Limit:
      return base + "_limit";
  }
  return base;
}

void require_state(const ModelDescriptor& model, const StateVector& state) {
  if (state.size() != model.state_dim())
    throw ContractViolation("state dimension does not match the model layout");
  if (!state.allFinite())
    throw ContractViolation("state coordinates must be finite");
}

double boundary_friction_rate(const ModelDescriptor& model) {
  switch (model.regime) {
    case Regime::Standard:
      return 0.5;
    case Regime::Scaled: {
      const int k = spec_of(model).k;
      return 0.5 * std::pow(model.scale_energy, 1.0 / k - 0.5);
    }
    case Regime::Limit:
      if (model.kind == ModelKind::Pinned || model.kind == ModelKind::Unpinned)
        return spec_of(model).k == 2 ? 0.5 : 0.0;
      return 0.5;
  }
  return 0.5;
}

double bath_noise_prefactor(const ModelDescriptor& model) {
  switch (model.regime) {
    case Regime::Standard:
      return 1.0;
    case Regime::Scaled: {
      const int k = spec_of(model).k;
      return std::pow(model.scale_energy, 1.0 / (2.0 * k) - 0.75);
    }
    case Regime::Limit:
      return 0.0;
  }
  return 1.0;
}

double ls_omega_sq(const ModelDescriptor& model, int k) {
  const int h = half_modes(model);
  const int kk = k < 0 ? -k : k;
  if (kk > h) throw ContractViolation("mode index out of range");
  const double s =
      std::sin(static_cast<double>(kk) * std::numbers::pi / model.n_sites);
  return model.omega * model.omega * (model.mu * model.mu + 4.0 * s * s);
}

int ls_block_offset(const ModelDescriptor& model, int k) {
  const int h = half_modes(model);
  if (k < 0 || k > h) throw ContractViolation("mode index out of range");
  if (k == 0) return 4 * (h - 1);
  if (k == h) return 4 * (h - 1) + 2;
  return 4 * (k - 1);
}

double ls_mode_coupling(const ModelDescriptor& model, int k) {
  const int h = half_modes(model);
  const int kk = k < 0 ? -k : k;
  if (kk > h) throw ContractViolation("mode index out of range");
  return model.mode_coupling[kk];
}

double interaction_term(const ModelDescriptor& model, double x, int order) {
  if (model.kind == ModelKind::Exchange) {
    switch (order) {
      case 0:
        return 0.5 * x * x;
      case 1:
        return x;
      case 2:
        return 1.0;
      default:
        return 0.0;
    }
  }
  const PotentialSpec& spec = spec_of(model);
  switch (model.regime) {
    case Regime::Standard:
      return evaluate(spec, Which::U, x, order);
    case Regime::Scaled: {
      const double e = model.scale_energy;
      const double stretch = std::pow(e, 1.0 / spec.k);
      return std::pow(e, static_cast<double>(order) / spec.k - 1.0) *
             evaluate(spec, Which::U, stretch * x, order);
    }
    case Regime::Limit:
      return monomial_term(spec.a_k, spec.k, x, order);
  }
  return 0.0;
}

double pinning_term(const ModelDescriptor& model, double x, int order) {
  if (model.kind != ModelKind::Pinned) return 0.0;
  const PotentialSpec& spec = spec_of(model);
  if (spec.v.kind == PinningKind::None) return 0.0;
  switch (model.regime) {
    case Regime::Standard:
      return evaluate(spec, Which::V, x, order);
    case Regime::Scaled: {
      const double e = model.scale_energy;
      const double stretch = std::pow(e, 1.0 / spec.k);
      return std::pow(e, static_cast<double>(order) / spec.k - 1.0) *
             evaluate(spec, Which::V, stretch * x, order);
    }
    case Regime::Limit:
      // Only an l = k pinning tail survives the limit.
      if (spec.l == static_cast<double>(spec.k) && spec.b_l > 0.0)
        return monomial_term(spec.b_l, spec.k, x, order);
      return 0.0;
  }
  return 0.0;
}

double hamiltonian(const ModelDescriptor& model, const StateVector& state) {
  require_state(model, state);
  const int n = model.n_sites;
  double h = 0.0;
  switch (model.kind) {
    case ModelKind::Pinned: {
      for (int i = 0; i < n; ++i) {
        h += 0.5 * state[i] * state[i];
        h += pinning_term(model, state[n + i], 0);
      }
      for (int i = 0; i + 1 < n; ++i)
        h += interaction_term(model, state[n + i + 1] - state[n + i], 0);
      return h;
    }
    case ModelKind::Unpinned:
    case ModelKind::Exchange: {
      for (int i = 0; i < n; ++i) h += 0.5 * state[i] * state[i];
      for (int i = 0; i + 1 < n; ++i)
        h += interaction_term(model, state[n + i], 0);
      return h;
    }
    case ModelKind::LefevereSchenkel: {
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        h += state[at] * state[at] + state[at + 1] * state[at + 1] +
             w2 * (state[at + 2] * state[at + 2] +
                   state[at + 3] * state[at + 3]);
      }
      for (int k : {0, hm}) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        h += 0.5 * (state[at] * state[at] + w2 * state[at + 1] * state[at + 1]);
      }
      return h;
    }
  }
  return h;
}

Eigen::VectorXd hamiltonian_gradient(const ModelDescriptor& model,
                                     const StateVector& state) {
  require_state(model, state);
  const int n = model.n_sites;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(state.size());
  switch (model.kind) {
    case ModelKind::Pinned: {
      for (int i = 0; i < n; ++i) {
        g[i] = state[i];
        g[n + i] = pinning_term(model, state[n + i], 1);
      }
      for (int i = 0; i + 1 < n; ++i) {
        const double du =
            interaction_term(model, state[n + i + 1] - state[n + i], 1);
        g[n + i] -= du;
        g[n + i + 1] += du;
      }
      return g;
    }
    case ModelKind::Unpinned:
    case ModelKind::Exchange: {
      for (int i = 0; i < n; ++i) g[i] = state[i];
      for (int i = 0; i + 1 < n; ++i)
        g[n + i] = interaction_term(model, state[n + i], 1);
      return g;
    }
    case ModelKind::LefevereSchenkel: {
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        g[at] = 2.0 * state[at];
        g[at + 1] = 2.0 * state[at + 1];
        g[at + 2] = 2.0 * w2 * state[at + 2];
        g[at + 3] = 2.0 * w2 * state[at + 3];
      }
      for (int k : {0, hm}) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        g[at] = state[at];
        g[at + 1] = w2 * state[at + 1];
      }
      return g;
    }
  }
  return g;
}

Eigen::MatrixXd hamiltonian_hessian(const ModelDescriptor& model,
                                    const StateVector& state) {
  require_state(model, state);
  const int n = model.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(state.size(), state.size());
  switch (model.kind) {
    case ModelKind::Pinned: {
      for (int i = 0; i < n; ++i) {
        h(i, i) = 1.0;
        h(n + i, n + i) = pinning_term(model, state[n + i], 2);
      }
      for (int i = 0; i + 1 < n; ++i) {
        const double ddu =
            interaction_term(model, state[n + i + 1] - state[n + i], 2);
        h(n + i, n + i) += ddu;
        h(n + i + 1, n + i + 1) += ddu;
        h(n + i, n + i + 1) -= ddu;
        h(n + i + 1, n + i) -= ddu;
      }
      return h;
    }
    case ModelKind::Unpinned:
    case ModelKind::Exchange: {
      for (int i = 0; i < n; ++i) h(i, i) = 1.0;
      for (int i = 0; i + 1 < n; ++i)
        h(n + i, n + i) = interaction_term(model, state[n + i], 2);
      return h;
    }
    case ModelKind::LefevereSchenkel: {
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        h(at, at) = 2.0;
        h(at + 1, at + 1) = 2.0;
        h(at + 2, at + 2) = 2.0 * w2;
        h(at + 3, at + 3) = 2.0 * w2;
      }
      for (int k : {0, hm}) {
        const int at = ls_block_offset(model, k);
        h(at, at) = 1.0;
        h(at + 1, at + 1) = ls_omega_sq(model, k);
      }
      return h;
    }
  }
  return h;
}

Eigen::VectorXd conservative_drift(const ModelDescriptor& model,
                                   const StateVector& state) {
  require_state(model, state);
  const int n = model.n_sites;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(state.size());
  switch (model.kind) {
    case ModelKind::Pinned: {
      for (int i = 0; i < n; ++i) {
        b[n + i] = state[i];
        b[i] = -pinning_term(model, state[n + i], 1);
      }
      for (int i = 0; i + 1 < n; ++i) {
        const double du =
            interaction_term(model, state[n + i + 1] - state[n + i], 1);
        b[i] += du;
        b[i + 1] -= du;
      }
      return b;
    }
    case ModelKind::Unpinned:
    case ModelKind::Exchange: {
      for (int i = 0; i + 1 < n; ++i) b[n + i] = state[i + 1] - state[i];
      for (int i = 0; i + 1 < n; ++i) {
        const double du = interaction_term(model, state[n + i], 1);
        b[i] += du;
        b[i + 1] -= du;
      }
      return b;
    }
    case ModelKind::LefevereSchenkel: {
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        const double w2 = ls_omega_sq(model, k);
        b[at] = -w2 * state[at + 2];
        b[at + 1] = -w2 * state[at + 3];
        b[at + 2] = state[at];
        b[at + 3] = state[at + 1];
      }
      for (int k : {0, hm}) {
        const int at = ls_block_offset(model, k);
        b[at] = -ls_omega_sq(model, k) * state[at + 1];
        b[at + 1] = state[at];
      }
      return b;
    }
  }
  return b;
}

Eigen::VectorXd drift(const ModelDescriptor& model, const StateVector& state) {
  Eigen::VectorXd b = conservative_drift(model, state);
  const int n = model.n_sites;
  switch (model.kind) {
    case ModelKind::Pinned:
    case ModelKind::Unpinned: {
      const double c = boundary_friction_rate(model);
      b[0] -= c * state[0];
      b[n - 1] -= c * state[n - 1];
      return b;
    }
    case ModelKind::Exchange: {
      // Bath friction 1/2 at the boundaries plus the Ito compensation
      // -gamma/2 per exchange pair a momentum belongs to.
      const double c = boundary_friction_rate(model);
      const double g2 = 0.5 * model.gamma;
      b[0] -= (c + g2) * state[0];
      b[n - 1] -= (c + g2) * state[n - 1];
      for (int i = 1; i + 1 < n; ++i) b[i] -= 2.0 * g2 * state[i];
      return b;
    }
    case ModelKind::LefevereSchenkel: {
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        b[at] -= 0.5 * state[at];
        b[at + 1] -= 0.5 * state[at + 1];
      }
      for (int k : {0, hm}) {
        const int at = ls_block_offset(model, k);
        b[at] -= 0.5 * state[at];
      }
      return b;
    }
  }
  return b;
}

Eigen::MatrixXd diffusion(const ModelDescriptor& model,
                          const StateVector& state) {
  require_state(model, state);
  const int n = model.n_sites;
  Eigen::MatrixXd sigma =
      Eigen::MatrixXd::Zero(state.size(), model.noise_dim());
  switch (model.kind) {
    case ModelKind::Pinned:
    case ModelKind::Unpinned: {
      const double pref = bath_noise_prefactor(model);
      sigma(0, 0) = pref * std::sqrt(model.t_left);
      sigma(n - 1, 1) = pref * std::sqrt(model.t_right);
      return sigma;
    }
    case ModelKind::Exchange: {
      const double pref = bath_noise_prefactor(model);
      const double sg = std::sqrt(model.gamma);
      sigma(0, 0) = pref * std::sqrt(model.t_left);
      sigma(n - 1, n) = pref * std::sqrt(model.t_right);
      // Channel B_{i,i+1} rotates the pair (p_i, p_{i+1}).
      for (int i = 1; i < n; ++i) {
        sigma(i - 1, i) = -sg * state[i];
        sigma(i, i) = sg * state[i - 1];
      }
      return sigma;
    }
    case ModelKind::LefevereSchenkel: {
      const double pref = model.regime == Regime::Limit ? 0.0 : 1.0;
      const double st = pref * std::sqrt(model.temperature);
      const int hm = half_modes(model);
      for (int k = 1; k < hm; ++k) {
        const int at = ls_block_offset(model, k);
        const double d = pref * ls_mode_coupling(model, k);
        const int cx = 2 * (k - 1);
        sigma(at, cx) = st;        // X_k drives R_k
        sigma(at + 3, cx) = -d;    // ... and W_k
        sigma(at + 1, cx + 1) = st;  // Y_k drives S_k
        sigma(at + 2, cx + 1) = d;   // ... and V_k
      }
      sigma(ls_block_offset(model, 0), n - 2) = st;
      sigma(ls_block_offset(model, hm), n - 1) = st;
      return sigma;
    }
  }
  return sigma;
}

ScalingMap make_scaling_map(const ModelDescriptor& model, double energy) {
  if (model.regime != Regime::Standard)
    throw ContractViolation("scaling map starts from a standard-regime model");
  if (model.kind != ModelKind::Pinned && model.kind != ModelKind::Unpinned)
    throw ContractViolation("energy scaling applies to pinned/unpinned chains");
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw ContractViolation("scaling energy must be finite and > 0");
  ScalingMap map;
  map.energy = energy;
  map.k = spec_of(model).k;
  map.n_momenta = model.n_sites;
  map.dim = model.state_dim();
  return map;
}

StateVector scale_state(const ScalingMap& map, const StateVector& state) {
  if (state.size() != map.dim)
    throw ContractViolation("state dimension does not match the scaling map");
  StateVector out = state;
  const double pm = std::pow(map.energy, -0.5);
  const double qm = std::pow(map.energy, -1.0 / map.k);
  for (int i = 0; i < map.n_momenta; ++i) out[i] *= pm;
  for (int i = map.n_momenta; i < map.dim; ++i) out[i] *= qm;
  return out;
}

}  // namespace chainlab
