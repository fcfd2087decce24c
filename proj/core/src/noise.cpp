#include "chainlab/noise.hpp"

#include <cmath>

#include "chainlab/errors.hpp"

namespace chainlab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t state = root;
  splitmix64(state);  // decorrelate nearby roots
  state += stream * 0x9e3779b97f4a7c15ull;
  return splitmix64(state);
}

NoiseStream::NoiseStream(const NoisePath& path) : path_(path) {
  if (!(path.dt > 0.0))
    throw ContractViolation("noise path needs dt > 0");
  if (path.n_steps < 0 || path.noise_dim < 0)
    throw ContractViolation("noise path needs n_steps >= 0 and noise_dim >= 0");
  std::uint64_t state = path.seed;
  engine_.seed(splitmix64(state));
}

Eigen::VectorXd NoiseStream::next() {
  if (drawn_ >= path_.n_steps)
    throw ContractViolation("noise path exhausted");
  const double root_dt = std::sqrt(path_.dt);
  Eigen::VectorXd dw(path_.noise_dim);
  for (int j = 0; j < path_.noise_dim; ++j)
    dw[j] = root_dt * normal_(engine_);
  ++drawn_;
  return dw;
}

Eigen::MatrixXd materialize(const NoisePath& path) {
  NoiseStream stream(path);
  Eigen::MatrixXd increments(path.n_steps, path.noise_dim);
  for (long i = 0; i < path.n_steps; ++i) increments.row(i) = stream.next();
  return increments;
}

}  // namespace chainlab
