#include "projrecon/projrecon.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "projrecon/error.hpp"
#include "projrecon/json_io.hpp"

using namespace projrecon;

struct projrecon_measure {
  DiscreteMeasure value;
};
struct projrecon_stack {
  ProjectionStack value;
};
struct projrecon_directions {
  DirectionSet value;
};
struct projrecon_report {
  ReconstructionReport value;
};

namespace {

thread_local std::string g_last_error;

projrecon_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return PROJRECON_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return PROJRECON_ERR_DIMENSION_MISMATCH;
    case ErrorCode::DuplicatePoints: return PROJRECON_ERR_DUPLICATE_POINTS;
    case ErrorCode::NonpositiveWeight: return PROJRECON_ERR_NONPOSITIVE_WEIGHT;
    case ErrorCode::WeightSumMismatch: return PROJRECON_ERR_WEIGHT_SUM_MISMATCH;
    case ErrorCode::RankDeficient: return PROJRECON_ERR_RANK_DEFICIENT;
    case ErrorCode::TupleBudgetExceeded: return PROJRECON_ERR_TUPLE_BUDGET_EXCEEDED;
    case ErrorCode::Infeasible: return PROJRECON_ERR_INFEASIBLE;
    case ErrorCode::SupercriticalRegime: return PROJRECON_ERR_SUPERCRITICAL_REGIME;
    case ErrorCode::DegenerateInstance: return PROJRECON_ERR_DEGENERATE_INSTANCE;
    case ErrorCode::InvalidOrder: return PROJRECON_ERR_INVALID_ORDER;
    case ErrorCode::ConfigError: return PROJRECON_ERR_CONFIG;
    case ErrorCode::ParseError: return PROJRECON_ERR_PARSE;
  }
  return PROJRECON_ERR_INTERNAL;
}

template <class Fn>
projrecon_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PROJRECON_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return PROJRECON_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PROJRECON_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PROJRECON_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse(const char* text) {
  require(text != nullptr, "null JSON text");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

ToleranceConfig tolerances_from(const projrecon_tolerances* t) {
  ToleranceConfig cfg;
  if (t == nullptr) return cfg;
  if (t->accept_tol >= 0.0) cfg.accept_tol = t->accept_tol;
  cfg.dedup_tol = t->dedup_tol;
  cfg.merge_tol = t->merge_tol;
  cfg.zero_tol = t->zero_tol;
  cfg.separation_tol = t->separation_tol;
  cfg.uniqueness_tol = t->uniqueness_tol;
  cfg.feasibility_tol = t->feasibility_tol;
  cfg.tuple_budget = t->tuple_budget;
  return cfg;
}

std::vector<Eigen::Index> dims_from(const size_t* dims, size_t count) {
  require(dims != nullptr || count == 0, "null block_dims");
  std::vector<Eigen::Index> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = static_cast<Eigen::Index>(dims[i]);
  return out;
}

}  // namespace

extern "C" {

const char* projrecon_version(void) { return "0.1.0"; }

const char* projrecon_last_error(void) { return g_last_error.c_str(); }

const char* projrecon_status_name(projrecon_status status) {
  switch (status) {
    case PROJRECON_OK: return "OK";
    case PROJRECON_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case PROJRECON_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case PROJRECON_ERR_DUPLICATE_POINTS: return "DuplicatePoints";
    case PROJRECON_ERR_NONPOSITIVE_WEIGHT: return "NonpositiveWeight";
    case PROJRECON_ERR_WEIGHT_SUM_MISMATCH: return "WeightSumMismatch";
    case PROJRECON_ERR_RANK_DEFICIENT: return "RankDeficient";
    case PROJRECON_ERR_TUPLE_BUDGET_EXCEEDED: return "TupleBudgetExceeded";
    case PROJRECON_ERR_INFEASIBLE: return "Infeasible";
    case PROJRECON_ERR_SUPERCRITICAL_REGIME: return "SupercriticalRegime";
    case PROJRECON_ERR_DEGENERATE_INSTANCE: return "DegenerateInstance";
    case PROJRECON_ERR_INVALID_ORDER: return "InvalidOrder";
    case PROJRECON_ERR_CONFIG: return "ConfigError";
    case PROJRECON_ERR_PARSE: return "ParseError";
    case PROJRECON_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void projrecon_string_free(char* s) { std::free(s); }

void projrecon_default_tolerances(projrecon_tolerances* out) {
  if (out == nullptr) return;
  const ToleranceConfig d;
  out->accept_tol = -1.0;
  out->dedup_tol = d.dedup_tol;
  out->merge_tol = d.merge_tol;
  out->zero_tol = d.zero_tol;
  out->separation_tol = d.separation_tol;
  out->uniqueness_tol = d.uniqueness_tol;
  out->feasibility_tol = d.feasibility_tol;
  out->tuple_budget = d.tuple_budget;
}

projrecon_status projrecon_measure_create(size_t dim, size_t n,
                                          const double* points,
                                          const double* weights,
                                          double dedup_tol,
                                          projrecon_measure** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    require(points != nullptr && weights != nullptr, "null input arrays");
    require(dim > 0 && n > 0, "dimension and size must be positive");
    // Row-major n x dim input equals column-major dim x n.
    Eigen::MatrixXd pts = Eigen::Map<const Eigen::MatrixXd>(
        points, static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(weights, static_cast<Eigen::Index>(n));
    *out = new projrecon_measure{
        DiscreteMeasure(std::move(pts), std::move(w), dedup_tol)};
  });
}

projrecon_status projrecon_measure_from_json(const char* json,
                                             projrecon_measure** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new projrecon_measure{io::measure_from_json(parse(json))};
  });
}

projrecon_status projrecon_measure_to_json(const projrecon_measure* m,
                                           char** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null handle");
    *out = copy_string(io::to_json(m->value).dump());
  });
}

size_t projrecon_measure_dim(const projrecon_measure* m) {
  return m ? static_cast<size_t>(m->value.dim()) : 0;
}

size_t projrecon_measure_size(const projrecon_measure* m) {
  return m ? static_cast<size_t>(m->value.size()) : 0;
}

projrecon_status projrecon_measure_pushforward(const projrecon_measure* m,
                                               size_t rows,
                                               const double* matrix,
                                               double merge_tol,
                                               projrecon_measure** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr && matrix != nullptr, "null handle");
    const auto cols = m->value.dim();
    // Row-major rows x cols.
    Eigen::MatrixXd P = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                       Eigen::Dynamic,
                                                       Eigen::RowMajor>>(
        matrix, static_cast<Eigen::Index>(rows), cols);
    *out = new projrecon_measure{pushforward(m->value, P, merge_tol)};
  });
}

projrecon_status projrecon_measures_equal(const projrecon_measure* a,
                                          const projrecon_measure* b,
                                          double tol, int* equal) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && equal != nullptr, "null handle");
    *equal = measures_equal(a->value, b->value, tol) ? 1 : 0;
  });
}

void projrecon_measure_free(projrecon_measure* m) { delete m; }

projrecon_status projrecon_stack_sample(size_t dim, const size_t* block_dims,
                                        size_t num_blocks, projrecon_law law,
                                        uint64_t seed, projrecon_stack** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const Law l = law == PROJRECON_LAW_SPHERE ? Law::SphereUniform
                                              : Law::GaussianStd;
    *out = new projrecon_stack{sample_stack(static_cast<Eigen::Index>(dim),
                                            dims_from(block_dims, num_blocks),
                                            l, seed)};
  });
}

projrecon_status projrecon_stack_from_json(const char* json,
                                           projrecon_stack** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new projrecon_stack{io::stack_from_json(parse(json))};
  });
}

projrecon_status projrecon_stack_to_json(const projrecon_stack* s, char** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null handle");
    *out = copy_string(io::to_json(s->value).dump());
  });
}

size_t projrecon_stack_num_blocks(const projrecon_stack* s) {
  return s ? s->value.num_blocks() : 0;
}

void projrecon_stack_free(projrecon_stack* s) { delete s; }

projrecon_regime projrecon_classify_regime(size_t dim, const size_t* block_dims,
                                           size_t num_blocks) {
  std::vector<Eigen::Index> dims(num_blocks);
  for (size_t i = 0; i < num_blocks; ++i) {
    dims[i] = static_cast<Eigen::Index>(block_dims[i]);
  }
  switch (classify_regime(static_cast<Eigen::Index>(dim), dims)) {
    case Regime::Subcritical: return PROJRECON_REGIME_SUBCRITICAL;
    case Regime::Critical: return PROJRECON_REGIME_CRITICAL;
    case Regime::Supercritical: return PROJRECON_REGIME_SUPERCRITICAL;
  }
  return PROJRECON_REGIME_SUPERCRITICAL;
}

projrecon_status projrecon_directions_sample(size_t dim, size_t p,
                                             uint64_t seed,
                                             projrecon_directions** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new projrecon_directions{sample_directions(
        static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(p), seed)};
  });
}

projrecon_status projrecon_directions_from_json(const char* json,
                                                projrecon_directions** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new projrecon_directions{io::directions_from_json(parse(json))};
  });
}

projrecon_status projrecon_directions_from_stack(const projrecon_stack* s,
                                                 projrecon_directions** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null handle");
    const auto& stack = s->value;
    Eigen::MatrixXd thetas(stack.dim(), stack.total_rows());
    Eigen::Index col = 0;
    for (const auto& P : stack.blocks()) {
      for (Eigen::Index r = 0; r < P.rows(); ++r) {
        thetas.col(col++) = P.row(r).transpose().normalized();
      }
    }
    *out = new projrecon_directions{DirectionSet(std::move(thetas), stack.seed())};
  });
}

projrecon_status projrecon_directions_to_json(const projrecon_directions* d,
                                              char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null handle");
    *out = copy_string(io::to_json(d->value).dump());
  });
}

void projrecon_directions_free(projrecon_directions* d) { delete d; }

projrecon_status projrecon_candidate_support_json(
    const projrecon_measure* z, const projrecon_stack* s,
    const projrecon_tolerances* tols, char** out) {
  return guarded([&] {
    require(z != nullptr && s != nullptr && out != nullptr, "null handle");
    const auto support =
        candidate_support(z->value, s->value, tolerances_from(tols));
    *out = copy_string(io::to_json(support).dump());
  });
}

projrecon_status projrecon_reconstruct(const projrecon_measure* z,
                                       const projrecon_stack* s,
                                       const projrecon_tolerances* tols,
                                       projrecon_report** out) {
  return guarded([&] {
    require(z != nullptr && s != nullptr && out != nullptr, "null handle");
    *out = new projrecon_report{
        certify_uniqueness(z->value, s->value, tolerances_from(tols))};
  });
}

projrecon_verdict projrecon_report_verdict(const projrecon_report* r) {
  if (r == nullptr) return PROJRECON_VERDICT_UNBOUNDED_FAMILY;
  switch (r->value.verdict) {
    case Verdict::UniqueSolution: return PROJRECON_VERDICT_UNIQUE_SOLUTION;
    case Verdict::FinitelySupportedFamily:
      return PROJRECON_VERDICT_FINITELY_SUPPORTED_FAMILY;
    case Verdict::UnboundedFamily: return PROJRECON_VERDICT_UNBOUNDED_FAMILY;
  }
  return PROJRECON_VERDICT_UNBOUNDED_FAMILY;
}

size_t projrecon_report_support_size(const projrecon_report* r) {
  return r ? r->value.support.points.size() : 0;
}

projrecon_status projrecon_report_to_json(const projrecon_report* r,
                                          char** out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null handle");
    *out = copy_string(io::to_json(r->value).dump());
  });
}

void projrecon_report_free(projrecon_report* r) { delete r; }

projrecon_status projrecon_empirical_sw(const projrecon_measure* a,
                                        const projrecon_measure* b,
                                        const projrecon_directions* d,
                                        double* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && d != nullptr && out != nullptr,
            "null handle");
    *out = empirical_sw(a->value, b->value, d->value);
  });
}

projrecon_status projrecon_wasserstein2_1d(const projrecon_measure* a,
                                           const projrecon_measure* b,
                                           double* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null handle");
    *out = wasserstein2_1d(a->value, b->value);
  });
}

projrecon_status projrecon_null_sw_witness(const projrecon_measure* z,
                                           const projrecon_directions* d,
                                           double translation, uint64_t seed,
                                           projrecon_measure** out) {
  return guarded([&] {
    require(z != nullptr && d != nullptr && out != nullptr, "null handle");
    NullWitnessOptions opts;
    opts.translation = translation;
    opts.seed = seed;
    *out = new projrecon_measure{null_sw_witness(z->value, d->value, opts)};
  });
}

projrecon_status projrecon_counterexample_json(uint32_t n, char** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = copy_string(io::to_json(polygon_counterexample(n)).dump());
  });
}

projrecon_status projrecon_trials_run(projrecon_trial_kind kind,
                                      const char* config_json,
                                      int include_timing, char** summary,
                                      char** csv, int* passed) {
  return guarded([&] {
    require(summary != nullptr, "null summary output");
    const auto parsed = parse(config_json);
    const TrialConfig cfg = io::trial_config_from_json(parsed);
    TrialKind k = TrialKind::Uniqueness;
    switch (kind) {
      case PROJRECON_TRIALS_UNIQUENESS: k = TrialKind::Uniqueness; break;
      case PROJRECON_TRIALS_CRITICAL: k = TrialKind::Critical; break;
      case PROJRECON_TRIALS_SW_SEPARABILITY: k = TrialKind::SwSeparability; break;
      default: throw Error(ErrorCode::ConfigError, "unknown trial kind");
    }
    const TrialSummary result = run_trials(k, cfg);
    auto doc = io::to_json(result, include_timing != 0);
    doc["config"] = io::to_json(cfg);
    std::string csv_text = csv ? io::histogram_csv(result) : std::string();
    *summary = copy_string(doc.dump(2));
    if (csv) *csv = copy_string(csv_text);
    if (passed) *passed = result.passed() ? 1 : 0;
  });
}

}  // extern "C"
