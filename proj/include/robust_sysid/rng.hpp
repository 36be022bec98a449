#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace robust_sysid {

// Deterministic random source used throughout the library.
//
// The engine is std::mt19937_64 seeded directly with a 64-bit seed; its
// output sequence is fully specified by the C++ standard, so draws are
// identical across platforms and compilers. Distribution transforms are
// implemented here explicitly (the standard library's distribution classes
// are implementation-defined and would break cross-machine replay):
//   * uniforms take the top 53 bits of one engine word,
//   * Gaussians map two uniforms through the Box-Muller transform.
// Every normal() consumes exactly two engine words, so streams can be
// reasoned about positionally.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch only).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Unbiased integer on [0, n); rejection-samples the engine word.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    const std::uint64_t bound = UINT64_MAX - rem;
    std::uint64_t x = engine_();
    while (x > bound) x = engine_();
    return x % n;
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  // Column-major fill: all of column 0, then column 1, ...
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Eigen::VectorXd uniform_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

// Seed for an independent per-trial stream derived from a base seed.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  return base ^ trial;
}

}  // namespace robust_sysid
