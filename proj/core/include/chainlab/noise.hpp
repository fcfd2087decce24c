#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace chainlab {

// A Wiener path is stored as its recipe, never as data: (seed, dt, n_steps,
// noise_dim) regenerates every increment bit-exactly.
struct NoisePath {
  std::uint64_t seed = 0;
  double dt = 0.0;
  long n_steps = 0;
  int noise_dim = 0;
};

// splitmix64 step; advances `state` and returns the next output word.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent child seed from a root seed and a stream index.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// Sequential generator of per-step increment vectors. Each component of
// next() is an independent N(0, dt) draw.
class NoiseStream {
 public:
  explicit NoiseStream(const NoisePath& path);

  Eigen::VectorXd next();
  const NoisePath& path() const { return path_; }
  long drawn() const { return drawn_; }

 private:
  NoisePath path_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  long drawn_ = 0;
};

// Regenerates the full increment matrix (n_steps x noise_dim).
Eigen::MatrixXd materialize(const NoisePath& path);

}  // namespace chainlab
