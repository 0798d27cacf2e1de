#include "projrecon/json_io.hpp"

#include <cmath>
#include <sstream>

#include "projrecon/error.hpp"

namespace projrecon::io {

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

Eigen::VectorXd vector_from(const json& arr, const char* what) {
  if (!arr.is_array()) {
    throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) {
      throw Error(ErrorCode::ParseError,
                  std::string(what) + " must contain numbers");
    }
    v[static_cast<Eigen::Index>(k)] = arr[k].get<double>();
  }
  return v;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError,
                std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("bad value for '") + key + "': " + e.what());
  }
}

Eigen::Index get_dim(const json& j) {
  const auto& v = require(j, "dim");
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, "'dim' must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

Eigen::MatrixXd columns_from(const json& arr, Eigen::Index dim,
                             const char* what) {
  if (!arr.is_array()) {
    throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  }
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto v = vector_from(arr[k], what);
    if (v.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(what) + " entry " + std::to_string(k) +
                      " has wrong dimension");
    }
    m.col(static_cast<Eigen::Index>(k)) = v;
  }
  return m;
}

json tuple_json(const IndexTuple& t) {
  json arr = json::array();
  for (const auto l : t) arr.push_back(l);
  return arr;
}

}  // namespace

json to_json(const DiscreteMeasure& measure) {
  json points = json::array();
  json weights = json::array();
  for (const auto l : measure.canonical_order()) {
    points.push_back(vector_json(measure.point(l)));
    weights.push_back(measure.weight(l));
  }
  return {{"dim", measure.dim()}, {"points", points}, {"weights", weights}};
}

DiscreteMeasure measure_from_json(const json& j, double dedup_tol) {
  const Eigen::Index dim = get_dim(j);
  Eigen::MatrixXd points = columns_from(require(j, "points"), dim, "points");
  Eigen::VectorXd weights = vector_from(require(j, "weights"), "weights");
  return DiscreteMeasure(std::move(points), std::move(weights), dedup_tol);
}

json to_json(const ProjectionStack& stack) {
  json blocks = json::array();
  for (const auto& P : stack.blocks()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < P.rows(); ++r) {
      rows.push_back(vector_json(P.row(r).transpose()));
    }
    blocks.push_back(rows);
  }
  return {{"dim", stack.dim()},
          {"blocks", blocks},
          {"law", std::string(to_string(stack.law()))},
          {"seed", stack.seed()}};
}

ProjectionStack stack_from_json(const json& j) {
  const Eigen::Index dim = get_dim(j);
  const auto& arr = require(j, "blocks");
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, "'blocks' must be an array");
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& b : arr) {
    blocks.emplace_back(columns_from(b, dim, "block row").transpose());
  }
  const Law law = j.contains("law") ? law_from_string(get_as<std::string>(j, "law"))
                                    : Law::Explicit;
  const std::uint64_t seed = j.contains("seed") ? get_as<std::uint64_t>(j, "seed") : 0;
  return ProjectionStack(dim, std::move(blocks), law, seed);
}

json to_json(const DirectionSet& dirs) {
  json thetas = json::array();
  for (Eigen::Index i = 0; i < dirs.size(); ++i) {
    thetas.push_back(vector_json(dirs.theta(i)));
  }
  return {{"dim", dirs.dim()}, {"thetas", thetas}, {"seed", dirs.seed()}};
}

DirectionSet directions_from_json(const json& j) {
  const Eigen::Index dim = get_dim(j);
  Eigen::MatrixXd thetas = columns_from(require(j, "thetas"), dim, "thetas");
  const std::uint64_t seed = j.contains("seed") ? get_as<std::uint64_t>(j, "seed") : 0;
  return DirectionSet(std::move(thetas), seed);
}

json to_json(const CouplingTensor& coupling) {
  return {{"n", coupling.n()},
          {"p", coupling.p()},
          {"shape", std::vector<std::uint32_t>(coupling.p(), coupling.n())},
          {"entries", coupling.entries()}};
}

CouplingTensor coupling_from_json(const json& j) {
  const auto n = get_as<std::uint32_t>(j, "n");
  const auto p = get_as<std::uint32_t>(j, "p");
  if (j.contains("shape")) {
    const auto shape = get_as<std::vector<std::uint32_t>>(j, "shape");
    if (shape.size() != p ||
        std::any_of(shape.begin(), shape.end(),
                    [n](std::uint32_t s) { return s != n; })) {
      throw Error(ErrorCode::ParseError, "shape header disagrees with n and p");
    }
  }
  return CouplingTensor(n, p, get_as<std::vector<double>>(j, "entries"));
}

json to_json(const CandidateSupport& support) {
  json points = json::array();
  for (const auto& pt : support.points) {
    json gens = json::array();
    for (const auto& g : pt.generators) gens.push_back(tuple_json(g));
    points.push_back({{"location", vector_json(pt.location)},
                      {"generators", gens},
                      {"residual", pt.residual}});
  }
  json witnesses = json::array();
  for (const auto& w : support.subspace_witnesses) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < w.subspace.basis.cols(); ++c) {
      basis.push_back(vector_json(w.subspace.basis.col(c)));
    }
    witnesses.push_back({{"tuple", tuple_json(w.tuple)},
                         {"base", vector_json(w.subspace.base)},
                         {"basis", basis}});
  }
  return {{"regime", std::string(to_string(support.regime))},
          {"points", points},
          {"subspace_witnesses", witnesses},
          {"tuples_enumerated", support.tuples_enumerated},
          {"accept_tol", support.accept_tol},
          {"max_diagonal_residual", support.max_diagonal_residual},
          {"min_rejected_residual", number_or_null(support.min_rejected_residual)},
          {"stacked_rank", support.stacked_rank}};
}

json to_json(const ReconstructionReport& report) {
  json diagnostics = json::object();
  for (const auto& [k, v] : report.diagnostics) diagnostics[k] = number_or_null(v);
  return {{"regime", std::string(to_string(report.support.regime))},
          {"verdict", std::string(to_string(report.verdict))},
          {"support_equals_Z", report.support_equals_Z},
          {"weights_unique", report.weights_unique},
          {"support", to_json(report.support)},
          {"weight_witness", report.weight_witness
                                 ? vector_json(*report.weight_witness)
                                 : json()},
          {"diagnostics", diagnostics}};
}

json to_json(const PolygonInstance& instance) {
  return {{"n", instance.n},
          {"Z", to_json(instance.Z)},
          {"Y", to_json(instance.Y)},
          {"stack", to_json(instance.stack)}};
}

json to_json(const ToleranceConfig& tols) {
  return {{"accept_tol", tols.accept_tol ? json(*tols.accept_tol) : json()},
          {"dedup_tol", tols.dedup_tol},
          {"merge_tol", tols.merge_tol},
          {"zero_tol", tols.zero_tol},
          {"separation_tol", tols.separation_tol},
          {"uniqueness_tol", tols.uniqueness_tol},
          {"feasibility_tol", tols.feasibility_tol},
          {"tuple_budget", tols.tuple_budget}};
}

ToleranceConfig tolerances_from_json(const json& j, ToleranceConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "tolerances must be an object");
  try {
    if (j.contains("accept_tol")) {
      const auto& v = j.at("accept_tol");
      base.accept_tol = v.is_null() ? std::nullopt
                                    : std::optional<double>(v.get<double>());
    }
    if (j.contains("dedup_tol")) base.dedup_tol = j.at("dedup_tol").get<double>();
    if (j.contains("merge_tol")) base.merge_tol = j.at("merge_tol").get<double>();
    if (j.contains("zero_tol")) base.zero_tol = j.at("zero_tol").get<double>();
    if (j.contains("separation_tol")) base.separation_tol = j.at("separation_tol").get<double>();
    if (j.contains("uniqueness_tol")) base.uniqueness_tol = j.at("uniqueness_tol").get<double>();
    if (j.contains("feasibility_tol")) base.feasibility_tol = j.at("feasibility_tol").get<double>();
    if (j.contains("tuple_budget")) base.tuple_budget = j.at("tuple_budget").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad tolerance: ") + e.what());
  }
  return base;
}

json to_json(const TrialConfig& cfg) {
  return {{"d", cfg.d},
          {"n", cfg.n},
          {"block_dims", cfg.block_dims},
          {"law", std::string(to_string(cfg.law))},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"tolerances", to_json(cfg.tolerances)},
          {"weights", cfg.weights == WeightLaw::Uniform ? "uniform" : "random"},
          {"translations", cfg.translations},
          {"perturbation", cfg.perturbation},
          {"coupling_steps", cfg.coupling_steps}};
}

TrialConfig trial_config_from_json(const json& j, TrialConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be an object");
  try {
    if (j.contains("d")) base.d = j.at("d").get<Eigen::Index>();
    if (j.contains("n")) base.n = j.at("n").get<Eigen::Index>();
    if (j.contains("block_dims")) base.block_dims = j.at("block_dims").get<std::vector<Eigen::Index>>();
    if (j.contains("law")) base.law = law_from_string(j.at("law").get<std::string>());
    if (j.contains("trials")) base.trials = j.at("trials").get<std::uint64_t>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) base.tolerances = tolerances_from_json(j.at("tolerances"), base.tolerances);
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::string>();
      if (w == "uniform") {
        base.weights = WeightLaw::Uniform;
      } else if (w == "random") {
        base.weights = WeightLaw::Random;
      } else {
        throw Error(ErrorCode::ConfigError, "weights must be 'uniform' or 'random'");
      }
    }
    if (j.contains("threads")) base.threads = j.at("threads").get<unsigned>();
    if (j.contains("translations")) base.translations = j.at("translations").get<std::vector<double>>();
    if (j.contains("perturbation")) base.perturbation = j.at("perturbation").get<double>();
    if (j.contains("coupling_steps")) base.coupling_steps = j.at("coupling_steps").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return base;
}

json to_json(const TrialSummary& summary, bool include_timing) {
  json histogram = json::object();
  for (const auto& [card, freq] : summary.support_cardinality_histogram) {
    histogram[std::to_string(card)] = freq;
  }
  json extrema = json::object();
  for (const auto& [k, v] : summary.residual_extrema) extrema[k] = number_or_null(v);
  json out = {{"kind", std::string(to_string(summary.kind))},
              {"trials_run", summary.trials_run},
              {"successes", summary.successes},
              {"uniqueness_rate", summary.uniqueness_rate},
              {"passed", summary.passed()},
              {"support_cardinality_histogram", histogram},
              {"residual_extrema", extrema},
              {"failed_trials", summary.failed_trials}};
  if (include_timing) out["wall_time"] = summary.wall_time;
  return out;
}

std::string histogram_csv(const TrialSummary& summary) {
  std::ostringstream csv;
  csv << "cardinality,frequency\n";
  for (const auto& [card, freq] : summary.support_cardinality_histogram) {
    csv << card << ',' << freq << '\n';
  }
  return csv.str();
}

}  // namespace projrecon::io
