#include "projrecon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "projrecon/coupling.hpp"
#include "projrecon/error.hpp"
#include "projrecon/measure.hpp"
#include "projrecon/random.hpp"
#include "projrecon/reconstruction.hpp"
#include "projrecon/sliced_wasserstein.hpp"

namespace projrecon {

std::string_view to_string(TrialKind kind) {
  switch (kind) {
    case TrialKind::Uniqueness: return "uniqueness";
    case TrialKind::Critical: return "critical";
    case TrialKind::SwSeparability: return "sw-sep";
  }
  return "uniqueness";
}

TrialKind trial_kind_from_string(std::string_view name) {
  if (name == "uniqueness") return TrialKind::Uniqueness;
  if (name == "critical") return TrialKind::Critical;
  if (name == "sw-sep") return TrialKind::SwSeparability;
  throw Error(ErrorCode::ConfigError,
              "unknown trial kind '" + std::string(name) + "'");
}

namespace {

// Sub-stream indices inside one trial.
enum Stream : std::uint64_t {
  kPointsStream = 0,
  kStackStream = 1,
  kPerturbStream = 2,
  kCouplingStream = 3,
  kWeightsStream = 4,
};

struct TrialOutcome {
  bool success = false;
  std::uint64_t cardinality = 0;
  std::map<std::string, double> extrema;
};

void take_max(std::map<std::string, double>& m, const std::string& key,
              double v) {
  auto [it, inserted] = m.try_emplace(key, v);
  if (!inserted) it->second = std::max(it->second, v);
}

void take_min(std::map<std::string, double>& m, const std::string& key,
              double v) {
  auto [it, inserted] = m.try_emplace(key, v);
  if (!inserted) it->second = std::min(it->second, v);
}

// Keys starting with "min_" aggregate by minimum, everything else by maximum.
void merge_extrema(std::map<std::string, double>& into,
                   const std::map<std::string, double>& from) {
  for (const auto& [key, value] : from) {
    if (key.rfind("min_", 0) == 0) {
      take_min(into, key, value);
    } else {
      take_max(into, key, value);
    }
  }
}

std::uint64_t power(std::uint64_t n, std::size_t p) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < p; ++i) r *= n;
  return r;
}

DiscreteMeasure sample_target(const TrialConfig& cfg, std::uint64_t trial_seed) {
  Eigen::MatrixXd points =
      sample_gaussian_points(cfg.d, cfg.n, child_seed(trial_seed, kPointsStream));
  Eigen::VectorXd w(cfg.n);
  if (cfg.weights == WeightLaw::Uniform) {
    w.setConstant(1.0 / static_cast<double>(cfg.n));
  } else {
    Rng rng(child_seed(trial_seed, kWeightsStream));
    for (Eigen::Index l = 0; l < cfg.n; ++l) {
      w[l] = -std::log(1.0 - rng.uniform()) + 1e-3;
    }
    w /= w.sum();
  }
  return DiscreteMeasure(std::move(points), std::move(w), 1e-9);
}

template <class TrialFn>
TrialSummary run_pool(TrialKind kind, const TrialConfig& cfg, TrialFn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> outcomes(cfg.trials);
  unsigned workers = cfg.threads != 0 ? cfg.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, cfg.trials));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      try {
        outcomes[t] = fn(child_seed(cfg.seed, t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.trials);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  TrialSummary summary;
  summary.kind = kind;
  summary.trials_run = cfg.trials;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    const auto& o = outcomes[t];
    if (o.success) {
      ++summary.successes;
    } else if (summary.failed_trials.size() < 16) {
      summary.failed_trials.push_back(t);
    }
    ++summary.support_cardinality_histogram[o.cardinality];
    merge_extrema(summary.residual_extrema, o.extrema);
  }
  summary.uniqueness_rate = static_cast<double>(summary.successes) /
                            static_cast<double>(summary.trials_run);
  summary.wall_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return summary;
}

}  // namespace

Eigen::MatrixXd sample_gaussian_points(Eigen::Index dim, Eigen::Index n,
                                       std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd points(dim, n);
  for (Eigen::Index l = 0; l < n; ++l) points.col(l) = rng.normal_vector(dim);
  return points;
}

void validate(const TrialConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::ConfigError, msg);
  };
  if (cfg.trials < 1) fail("trials must be >= 1");
  if (cfg.d < 2) fail("d must be >= 2");
  if (cfg.n < 1) fail("n must be >= 1");
  if (cfg.block_dims.empty()) fail("block_dims must not be empty");
  for (const auto di : cfg.block_dims) {
    if (di < 1 || di >= cfg.d) {
      fail("block dimension " + std::to_string(di) + " outside [1, " +
           std::to_string(cfg.d - 1) + "]");
    }
  }
  if (cfg.law == Law::Explicit) fail("trials need a sampling law");
  if (!(cfg.perturbation > 0.0)) fail("perturbation must be positive");
}

TrialSummary run_uniqueness_trials(const TrialConfig& cfg) {
  validate(cfg);
  if (classify_regime(cfg.d, cfg.block_dims) != Regime::Supercritical) {
    throw Error(ErrorCode::ConfigError,
                "uniqueness trials need sum(block_dims) > d");
  }
  return run_pool(TrialKind::Uniqueness, cfg, [&](std::uint64_t seed) {
    const auto Z = sample_target(cfg, seed);
    const auto stack = sample_stack(cfg.d, cfg.block_dims, cfg.law,
                                    child_seed(seed, kStackStream));
    const auto report = certify_uniqueness(Z, stack, cfg.tolerances);
    TrialOutcome o;
    o.success = report.verdict == Verdict::UniqueSolution;
    o.cardinality = report.support.points.size();
    const auto& s = report.support;
    o.extrema["max_diagonal_residual"] = s.max_diagonal_residual;
    o.extrema["min_rejected_residual"] = s.min_rejected_residual;
    o.extrema["min_stacked_inverse_condition"] = s.stacked_inverse_condition;
    o.extrema["max_weight_spread"] = report.diagnostics.at("weight_max_spread");
    return o;
  });
}

TrialSummary run_critical_cardinality(const TrialConfig& cfg) {
  validate(cfg);
  if (classify_regime(cfg.d, cfg.block_dims) != Regime::Critical) {
    throw Error(ErrorCode::ConfigError,
                "critical trials need sum(block_dims) == d");
  }
  const std::size_t p = cfg.block_dims.size();
  // Fails fast with TupleBudgetExceeded rather than inside every trial.
  {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < p; ++i) {
      if (count > cfg.tolerances.tuple_budget / static_cast<std::uint64_t>(cfg.n)) {
        throw Error(ErrorCode::TupleBudgetExceeded, "n^p exceeds the budget");
      }
      count *= static_cast<std::uint64_t>(cfg.n);
    }
  }
  const std::uint64_t expected = power(static_cast<std::uint64_t>(cfg.n), p);
  return run_pool(TrialKind::Critical, cfg, [&](std::uint64_t seed) {
    const auto Z = sample_target(cfg, seed);
    const auto stack = sample_stack(cfg.d, cfg.block_dims, cfg.law,
                                    child_seed(seed, kStackStream));
    const auto support = candidate_support(Z, stack, cfg.tolerances);
    TrialOutcome o;
    o.cardinality = support.points.size();
    bool single = true;
    double worst = 0.0;
    for (const auto& pt : support.points) {
      single = single && pt.generators.size() == 1;
      worst = std::max(worst, pt.residual);
    }
    o.success = support.finite() && o.cardinality == expected && single;
    o.extrema["max_diagonal_residual"] = support.max_diagonal_residual;
    o.extrema["max_accepted_residual"] = worst;
    return o;
  });
}

TrialSummary run_sw_separability(const TrialConfig& cfg) {
  validate(cfg);
  for (const auto di : cfg.block_dims) {
    if (di != 1) {
      throw Error(ErrorCode::ConfigError,
                  "sw-sep trials need block_dims made of ones (directions)");
    }
  }
  const auto p = static_cast<Eigen::Index>(cfg.block_dims.size());
  if (p == cfg.d && cfg.n < 2) {
    throw Error(ErrorCode::ConfigError,
                "p = d witnesses need at least two atoms");
  }
  if (p < cfg.d && cfg.translations.empty()) {
    throw Error(ErrorCode::ConfigError, "no translation magnitudes given");
  }
  const auto& tols = cfg.tolerances;
  return run_pool(TrialKind::SwSeparability, cfg, [&](std::uint64_t seed) {
    const auto Z = sample_target(cfg, seed);
    const auto dirs =
        sample_directions(cfg.d, p, child_seed(seed, kStackStream));
    TrialOutcome o;
    if (p > cfg.d) {
      bool refused = false;
      try {
        null_sw_witness(Z, dirs);
      } catch (const Error& e) {
        refused = e.code() == ErrorCode::SupercriticalRegime;
      }
      const double self = empirical_sw(Z, Z, dirs);
      Rng rng(child_seed(seed, kPerturbStream));
      Eigen::MatrixXd moved = Z.points();
      for (Eigen::Index l = 0; l < moved.cols(); ++l) {
        moved.col(l) += cfg.perturbation * rng.normal_vector(cfg.d);
      }
      const DiscreteMeasure alpha(std::move(moved), Z.weights(), 1e-9,
                                  DiscreteMeasure::Normalize::No);
      const double sw = empirical_sw(alpha, Z, dirs);
      o.success = refused && self < tols.zero_tol && sw > tols.separation_tol;
      o.cardinality = static_cast<std::uint64_t>(alpha.size());
      o.extrema["max_sw_self"] = self;
      o.extrema["min_sw_perturbed"] = sw;
    } else if (p < cfg.d) {
      bool ok = true;
      for (const double t : cfg.translations) {
        NullWitnessOptions opts;
        opts.translation = t;
        const auto witness = null_sw_witness(Z, dirs, opts);
        const double sw = empirical_sw(witness, Z, dirs);
        const double w2 = wasserstein2_exact(witness, Z);
        const double err = std::abs(w2 - std::abs(t));
        ok = ok && sw < tols.zero_tol && err <= 1e-9;
        take_max(o.extrema, "max_sw_witness", sw);
        take_max(o.extrema, "max_w2_translation_error", err);
        o.cardinality = static_cast<std::uint64_t>(witness.size());
      }
      o.success = ok;
    } else {
      NullWitnessOptions opts;
      opts.seed = child_seed(seed, kCouplingStream);
      opts.coupling_steps = cfg.coupling_steps;
      const auto witness = null_sw_witness(Z, dirs, opts);
      const double sw = empirical_sw(witness, Z, dirs);
      const bool distinct = !measures_equal(witness, Z, tols.dedup_tol);
      const double w2 = wasserstein2_exact(witness, Z);
      o.success = sw < tols.zero_tol && distinct && w2 > 0.0;
      o.cardinality = static_cast<std::uint64_t>(witness.size());
      o.extrema["max_sw_witness"] = sw;
      o.extrema["min_w2_witness"] = w2;
    }
    return o;
  });
}

TrialSummary run_trials(TrialKind kind, const TrialConfig& cfg) {
  switch (kind) {
    case TrialKind::Uniqueness: return run_uniqueness_trials(cfg);
    case TrialKind::Critical: return run_critical_cardinality(cfg);
    case TrialKind::SwSeparability: return run_sw_separability(cfg);
  }
  throw Error(ErrorCode::ConfigError, "unknown trial kind");
}

}  // namespace projrecon
