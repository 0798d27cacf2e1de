#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "projrecon/projection.hpp"
#include "projrecon/tolerances.hpp"

namespace projrecon {

enum class TrialKind { Uniqueness, Critical, SwSeparability };

std::string_view to_string(TrialKind kind);
TrialKind trial_kind_from_string(std::string_view name);

enum class WeightLaw { Uniform, Random };

struct TrialConfig {
  Eigen::Index d = 3;
  Eigen::Index n = 5;
  std::vector<Eigen::Index> block_dims{2, 2};
  Law law = Law::GaussianStd;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  ToleranceConfig tolerances;
  WeightLaw weights = WeightLaw::Uniform;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Kernel translations checked by the sliced-distance witness (p < d).
  std::vector<double> translations{1.0, 10.0, 1000.0};
  /// Gaussian perturbation scale of the impostor measures (p > d).
  double perturbation = 0.1;
  std::size_t coupling_steps = 64;
};

/// Throws ConfigError when the configuration breaks a stack or trial-count
/// constraint.
void validate(const TrialConfig& cfg);

struct TrialSummary {
  TrialKind kind = TrialKind::Uniqueness;
  std::uint64_t trials_run = 0;
  std::uint64_t successes = 0;
  /// successes / trials_run
  double uniqueness_rate = 0.0;
  std::map<std::uint64_t, std::uint64_t> support_cardinality_histogram;
  /// Named extrema over all trials (residuals, distances).
  std::map<std::string, double> residual_extrema;
  /// Up to 16 failing trial indices.
  std::vector<std::uint64_t> failed_trials;
  double wall_time = 0.0;

  bool passed() const { return successes == trials_run; }
};

/// Supercritical regime only. Each trial samples Z (standard normal atoms)
/// and a stack from child_seed(cfg.seed, trial) and certifies uniqueness.
TrialSummary run_uniqueness_trials(const TrialConfig& cfg);

/// Critical regime only; a trial succeeds when |S| = n^p with one generator
/// per point.
TrialSummary run_critical_cardinality(const TrialConfig& cfg);

/// All blocks of dimension one (directions). For p > d a trial checks that
/// no witness exists and that perturbed measures are detected; for p <= d it
/// checks the null-distance witnesses.
TrialSummary run_sw_separability(const TrialConfig& cfg);

TrialSummary run_trials(TrialKind kind, const TrialConfig& cfg);

/// Deterministic random instance helpers shared by the trial runners.
Eigen::MatrixXd sample_gaussian_points(Eigen::Index dim, Eigen::Index n,
                                       std::uint64_t seed);

}  // namespace projrecon
