#include <doctest.h>

#include "projrecon/error.hpp"
#include "projrecon/json_io.hpp"

using namespace projrecon;
using io::json;

TEST_CASE("measure round trip") {
  const auto m = uniform_measure(sample_gaussian_points(3, 4, 1));
  const auto back = io::measure_from_json(io::to_json(m));
  CHECK(measures_equal(m, back, 0.0));
  const auto j = io::to_json(m);
  CHECK(j.at("dim") == 3);
  CHECK(j.at("points").size() == 4);
}

TEST_CASE("measure parsing errors") {
  CHECK_THROWS_AS(io::measure_from_json(json::parse(R"({"dim": 2})")), Error);
  CHECK_THROWS_AS(io::measure_from_json(json::parse(
                      R"({"dim": 2, "points": [[0, 0], [1]], "weights": [0.5, 0.5]})")),
                  Error);
  try {
    io::measure_from_json(json::parse(
        R"({"dim": 1, "points": [[0], [0]], "weights": [0.5, 0.5]})"));
    FAIL("duplicate atoms accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicatePoints);
  }
}

TEST_CASE("stack and directions round trip") {
  const auto s = sample_stack(4, {2, 1, 3}, Law::SphereUniform, 9);
  const auto back = io::stack_from_json(io::to_json(s));
  REQUIRE(back.num_blocks() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.block(i) == s.block(i));
  CHECK(back.law() == Law::SphereUniform);
  CHECK(back.seed() == 9);

  const auto d = sample_directions(3, 5, 4);
  const auto j = io::to_json(d);
  CHECK(j.at("thetas").size() == 5);
  CHECK(io::directions_from_json(j).thetas() == d.thetas());
}

TEST_CASE("coupling round trip") {
  const auto c = independent_coupling(Eigen::Vector3d(0.2, 0.3, 0.5), 2);
  const auto j = io::to_json(c);
  CHECK(j.at("shape") == json::array({3, 3}));
  CHECK(io::coupling_from_json(j).entries() == c.entries());
  auto bad = j;
  bad["shape"] = json::array({3, 2});
  CHECK_THROWS_AS(io::coupling_from_json(bad), Error);
}

TEST_CASE("report JSON carries the verdict and support") {
  const auto Z = uniform_measure(sample_gaussian_points(2, 3, 3));
  const auto stack = sample_stack(2, {1, 1}, Law::GaussianStd, 4);
  const auto j = io::to_json(certify_uniqueness(Z, stack));
  CHECK(j.at("verdict") == "finitely_supported_family");
  CHECK(j.at("regime") == "critical");
  CHECK(j.at("support").at("points").size() == 9);
  CHECK(j.at("diagnostics").contains("max_diagonal_residual"));
}

TEST_CASE("trial config round trip and overrides") {
  TrialConfig cfg;
  cfg.d = 4;
  cfg.block_dims = {3, 2};
  cfg.tolerances.accept_tol = 1e-7;
  cfg.weights = WeightLaw::Random;
  const auto back = io::trial_config_from_json(io::to_json(cfg));
  CHECK(back.d == 4);
  CHECK(back.block_dims == cfg.block_dims);
  CHECK(back.tolerances.accept_tol == 1e-7);
  CHECK(back.weights == WeightLaw::Random);
  const auto partial = io::trial_config_from_json(json::parse(R"({"trials": 7})"));
  CHECK(partial.trials == 7);
  CHECK(partial.d == TrialConfig{}.d);
  CHECK_THROWS_AS(io::trial_config_from_json(json::parse(R"({"law": "cauchy"})")), Error);
  CHECK_THROWS_AS(io::trial_config_from_json(json::parse(R"({"d": "three"})")), Error);
}

TEST_CASE("summary JSON omits timing unless asked") {
  TrialSummary s;
  s.trials_run = 2;
  s.successes = 2;
  s.uniqueness_rate = 1.0;
  s.support_cardinality_histogram[9] = 2;
  s.wall_time = 1.5;
  CHECK_FALSE(io::to_json(s).contains("wall_time"));
  CHECK(io::to_json(s, true).at("wall_time") == 1.5);
  CHECK(io::histogram_csv(s) == "cardinality,frequency\n9,2\n");
}
