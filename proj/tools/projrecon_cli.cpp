// Command-line front end. Talks to the library exclusively through the C API.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "projrecon/projrecon.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  ApiError(projrecon_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
  projrecon_status status;
};

void check(projrecon_status status) {
  if (status != PROJRECON_OK) {
    throw ApiError(status, std::string(projrecon_status_name(status)) + ": " +
                               projrecon_last_error());
  }
}

struct StringDeleter {
  void operator()(char* s) const { projrecon_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct MeasureDeleter {
  void operator()(projrecon_measure* m) const { projrecon_measure_free(m); }
};
struct StackDeleter {
  void operator()(projrecon_stack* s) const { projrecon_stack_free(s); }
};
struct DirectionsDeleter {
  void operator()(projrecon_directions* d) const { projrecon_directions_free(d); }
};
struct ReportDeleter {
  void operator()(projrecon_report* r) const { projrecon_report_free(r); }
};
using Measure = std::unique_ptr<projrecon_measure, MeasureDeleter>;
using Stack = std::unique_ptr<projrecon_stack, StackDeleter>;
using Directions = std::unique_ptr<projrecon_directions, DirectionsDeleter>;
using Report = std::unique_ptr<projrecon_report, ReportDeleter>;

std::string read_source(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_source(path));
  } catch (const json::exception& e) {
    throw UsageError("invalid JSON in '" + path + "': " + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("cannot write '" + out_path + "'");
  out << text << '\n';
}

Measure measure_from(const json& j) {
  projrecon_measure* m = nullptr;
  check(projrecon_measure_from_json(j.dump().c_str(), &m));
  return Measure(m);
}

Stack stack_from(const json& j) {
  projrecon_stack* s = nullptr;
  check(projrecon_stack_from_json(j.dump().c_str(), &s));
  return Stack(s);
}

struct ToleranceFlags {
  std::optional<double> accept;
  std::optional<double> zero;
  std::optional<double> dedup;
  std::optional<std::uint64_t> tuple_budget;

  void attach(CLI::App* app) {
    app->add_option("--tol-accept", accept, "Residual acceptance threshold");
    app->add_option("--tol-zero", zero, "Zero threshold for sliced distances");
    app->add_option("--tol-dedup", dedup, "Merge radius for candidate points");
    app->add_option("--tuple-budget", tuple_budget, "Maximum n^p tuples");
  }

  projrecon_tolerances c_struct() const {
    projrecon_tolerances t;
    projrecon_default_tolerances(&t);
    if (accept) t.accept_tol = *accept;
    if (zero) t.zero_tol = *zero;
    if (dedup) t.dedup_tol = *dedup;
    if (tuple_budget) t.tuple_budget = *tuple_budget;
    return t;
  }

  void merge_into(json& config) const {
    json& tols = config["tolerances"];
    if (!tols.is_object()) tols = json::object();
    if (accept) tols["accept_tol"] = *accept;
    if (zero) tols["zero_tol"] = *zero;
    if (dedup) tols["dedup_tol"] = *dedup;
    if (tuple_budget) tols["tuple_budget"] = *tuple_budget;
  }
};

// Measure + stack from either explicit files or an instance document
// ({"Z": ..., "stack": ...} or {"measure": ..., "stack": ...}).
struct ProblemInput {
  std::string measure_path;
  std::string stack_path;
  std::string instance_path;

  void attach(CLI::App* app) {
    app->add_option("--measure", measure_path, "Measure JSON file");
    app->add_option("--stack", stack_path, "Projection stack JSON file");
    app->add_option("--instance", instance_path,
                    "Instance JSON with Z (or measure) and stack; '-' is stdin");
  }

  std::pair<Measure, Stack> load() const {
    if (!measure_path.empty() || !stack_path.empty()) {
      if (measure_path.empty() || stack_path.empty()) {
        throw UsageError("--measure and --stack must be given together");
      }
      return {measure_from(read_json(measure_path)),
              stack_from(read_json(stack_path))};
    }
    const json doc = read_json(instance_path.empty() ? "-" : instance_path);
    const char* key = doc.contains("Z") ? "Z" : "measure";
    if (!doc.contains(key) || !doc.contains("stack")) {
      throw UsageError("instance needs 'Z' (or 'measure') and 'stack'");
    }
    return {measure_from(doc.at(key)), stack_from(doc.at("stack"))};
  }
};

std::optional<projrecon_trial_kind> trial_kind(const std::string& name) {
  if (name == "uniqueness") return PROJRECON_TRIALS_UNIQUENESS;
  if (name == "critical") return PROJRECON_TRIALS_CRITICAL;
  if (name == "sw-sep") return PROJRECON_TRIALS_SW_SEPARABILITY;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of discrete measures from linear pushforwards"};
  app.require_subcommand(1);
  std::string out_path;

  // support
  auto* support_cmd = app.add_subcommand("support", "Candidate support S as JSON");
  ProblemInput support_in;
  ToleranceFlags support_tols;
  support_in.attach(support_cmd);
  support_tols.attach(support_cmd);
  support_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  // reconstruct
  auto* recon_cmd = app.add_subcommand("reconstruct", "Uniqueness report as JSON");
  ProblemInput recon_in;
  ToleranceFlags recon_tols;
  std::string expect;
  recon_in.attach(recon_cmd);
  recon_tols.attach(recon_cmd);
  recon_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
  recon_cmd->add_option("--expect", expect,
                        "Exit 1 unless the verdict is 'unique' or 'non-unique'")
      ->check(CLI::IsMember({"unique", "non-unique"}));

  // sw
  auto* sw_cmd = app.add_subcommand("sw", "Empirical sliced Wasserstein distance");
  std::string alpha_path, beta_path, dirs_path, sw_instance;
  std::size_t num_dirs = 0;
  std::uint64_t sw_seed = 0;
  sw_cmd->add_option("--alpha", alpha_path, "First measure JSON");
  sw_cmd->add_option("--beta", beta_path, "Second measure JSON");
  sw_cmd->add_option("--directions", dirs_path, "Direction set JSON");
  sw_cmd->add_option("--num-directions", num_dirs, "Sample this many directions");
  sw_cmd->add_option("--seed", sw_seed, "Seed for sampled directions");
  sw_cmd->add_option("--instance", sw_instance,
                     "Counter-example instance: compares Y and Z along the stack rows");
  sw_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  // counterexample
  auto* ce_cmd = app.add_subcommand("counterexample", "Symmetric 2n-gon instance");
  std::uint32_t ce_n = 3;
  ce_cmd->add_option("--n", ce_n, "Number of atoms and of bisector lines")->required();
  ce_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  // trials
  auto* trials_cmd = app.add_subcommand("trials", "Monte Carlo experiments");
  std::string kind_name, config_path, csv_path, law, weights;
  std::optional<long long> cfg_d, cfg_n;
  std::vector<long long> block_dims;
  std::optional<std::uint64_t> cfg_trials, cfg_seed;
  std::optional<unsigned> threads;
  bool timing = false;
  ToleranceFlags trial_tols;
  trials_cmd->add_option("kind", kind_name, "uniqueness | critical | sw-sep")
      ->required()
      ->check(CLI::IsMember({"uniqueness", "critical", "sw-sep"}));
  trials_cmd->add_option("--config", config_path, "TrialConfig JSON file");
  trials_cmd->add_option("--d", cfg_d, "Ambient dimension");
  trials_cmd->add_option("--n", cfg_n, "Number of atoms");
  trials_cmd->add_option("--block-dims", block_dims, "Block dimensions d_i")
      ->delimiter(',');
  trials_cmd->add_option("--law", law, "Row law")
      ->check(CLI::IsMember({"gaussian", "sphere"}));
  trials_cmd->add_option("--weights", weights, "Atom weights")
      ->check(CLI::IsMember({"uniform", "random"}));
  trials_cmd->add_option("--trials", cfg_trials, "Number of trials");
  trials_cmd->add_option("--seed", cfg_seed, "Master seed");
  trials_cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
  trials_cmd->add_flag("--timing", timing, "Include wall time in the JSON");
  trials_cmd->add_option("--csv", csv_path, "Write the cardinality histogram as CSV");
  trials_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
  trial_tols.attach(trials_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (support_cmd->parsed()) {
      auto [z, s] = support_in.load();
      const auto tols = support_tols.c_struct();
      char* text = nullptr;
      check(projrecon_candidate_support_json(z.get(), s.get(), &tols, &text));
      OwnedString owned(text);
      emit(json::parse(owned.get()).dump(2), out_path);
      return kExitOk;
    }

    if (recon_cmd->parsed()) {
      auto [z, s] = recon_in.load();
      const auto tols = recon_tols.c_struct();
      projrecon_report* raw = nullptr;
      check(projrecon_reconstruct(z.get(), s.get(), &tols, &raw));
      Report report(raw);
      char* text = nullptr;
      check(projrecon_report_to_json(report.get(), &text));
      OwnedString owned(text);
      emit(json::parse(owned.get()).dump(2), out_path);
      const bool unique =
          projrecon_report_verdict(report.get()) == PROJRECON_VERDICT_UNIQUE_SOLUTION;
      if ((expect == "unique" && !unique) || (expect == "non-unique" && unique)) {
        std::cerr << "verdict does not match --expect " << expect << '\n';
        return kExitCheckFailed;
      }
      return kExitOk;
    }

    if (sw_cmd->parsed()) {
      Measure a, b;
      Directions dirs;
      if (!sw_instance.empty()) {
        const json doc = read_json(sw_instance);
        if (!doc.contains("Y") || !doc.contains("Z") || !doc.contains("stack")) {
          throw UsageError("instance needs 'Y', 'Z' and 'stack'");
        }
        a = measure_from(doc.at("Y"));
        b = measure_from(doc.at("Z"));
        const Stack s = stack_from(doc.at("stack"));
        projrecon_directions* d = nullptr;
        check(projrecon_directions_from_stack(s.get(), &d));
        dirs.reset(d);
      } else {
        if (alpha_path.empty() || beta_path.empty()) {
          throw UsageError("sw needs --alpha and --beta, or --instance");
        }
        a = measure_from(read_json(alpha_path));
        b = measure_from(read_json(beta_path));
        projrecon_directions* d = nullptr;
        if (!dirs_path.empty()) {
          check(projrecon_directions_from_json(read_json(dirs_path).dump().c_str(), &d));
        } else if (num_dirs > 0) {
          check(projrecon_directions_sample(projrecon_measure_dim(a.get()),
                                            num_dirs, sw_seed, &d));
        } else {
          throw UsageError("sw needs --directions or --num-directions");
        }
        dirs.reset(d);
      }
      double value = 0.0;
      check(projrecon_empirical_sw(a.get(), b.get(), dirs.get(), &value));
      char* dirs_text = nullptr;
      check(projrecon_directions_to_json(dirs.get(), &dirs_text));
      OwnedString owned(dirs_text);
      const json doc = {{"sw", value},
                        {"sw_squared", value * value},
                        {"directions", json::parse(owned.get())}};
      emit(doc.dump(2), out_path);
      return kExitOk;
    }

    if (ce_cmd->parsed()) {
      char* text = nullptr;
      check(projrecon_counterexample_json(ce_n, &text));
      OwnedString owned(text);
      emit(json::parse(owned.get()).dump(2), out_path);
      return kExitOk;
    }

    if (trials_cmd->parsed()) {
      json config = config_path.empty() ? json::object() : read_json(config_path);
      if (!config.is_object()) throw UsageError("config must be a JSON object");
      if (cfg_d) config["d"] = *cfg_d;
      if (cfg_n) config["n"] = *cfg_n;
      if (!block_dims.empty()) config["block_dims"] = block_dims;
      if (!law.empty()) config["law"] = law;
      if (!weights.empty()) config["weights"] = weights;
      if (cfg_trials) config["trials"] = *cfg_trials;
      if (cfg_seed) config["seed"] = *cfg_seed;
      if (threads) config["threads"] = *threads;
      trial_tols.merge_into(config);

      const auto start = std::chrono::steady_clock::now();
      char* summary = nullptr;
      char* csv = nullptr;
      int passed = 0;
      check(projrecon_trials_run(*trial_kind(kind_name), config.dump().c_str(),
                                 timing ? 1 : 0, &summary,
                                 csv_path.empty() ? nullptr : &csv, &passed));
      OwnedString owned_summary(summary);
      OwnedString owned_csv(csv);
      emit(owned_summary.get(), out_path);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw UsageError("cannot write '" + csv_path + "'");
        out << owned_csv.get();
      }
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      const json parsed = json::parse(owned_summary.get());
      std::cerr << "trials " << kind_name << ": "
                << parsed.at("successes").get<std::uint64_t>() << '/'
                << parsed.at("trials_run").get<std::uint64_t>()
                << " succeeded in " << seconds << " s\n";
      return passed ? kExitOk : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
