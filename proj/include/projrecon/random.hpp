#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace projrecon {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream-splitting rule: the k-th child of `seed` is
/// splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15). Children of distinct
/// indices give independent mt19937_64 streams, so block i of a stack or trial
/// t of an experiment can be generated in any order or on any thread.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Portable generator: mt19937_64 (output fixed by the standard) with
/// hand-rolled uniform and normal transforms, so draws are identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal, Marsaglia polar method.
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  Eigen::VectorXd normal_vector(Eigen::Index dim);
  /// Uniform on the unit sphere (normalized Gaussian draw).
  Eigen::VectorXd unit_vector(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace projrecon
