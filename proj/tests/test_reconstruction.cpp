#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "projrecon/counterexample.hpp"
#include "projrecon/error.hpp"
#include "projrecon/experiments.hpp"
#include "projrecon/random.hpp"
#include "projrecon/reconstruction.hpp"

using namespace projrecon;

namespace {

DiscreteMeasure gaussian_measure(Eigen::Index dim, Eigen::Index n,
                                 std::uint64_t seed) {
  return uniform_measure(sample_gaussian_points(dim, n, seed));
}

}  // namespace

TEST_CASE("regime classification") {
  CHECK(classify_regime(3, {2, 2}) == Regime::Supercritical);
  CHECK(classify_regime(2, {1, 1}) == Regime::Critical);
  CHECK(classify_regime(3, {1, 1}) == Regime::Subcritical);
}

TEST_CASE("critical grid in the plane matches line intersections") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto Z = gaussian_measure(2, 3, seed);
    const auto stack = sample_stack(2, {1, 1}, Law::GaussianStd, seed + 100);
    const auto S = candidate_support(Z, stack);
    REQUIRE(S.finite());
    REQUIRE(S.points.size() == 9);
    CHECK(S.tuples_enumerated == 9);
    const Eigen::Vector2d u = stack.block(0).row(0).transpose();
    const Eigen::Vector2d v = stack.block(1).row(0).transpose();
    for (const auto& pt : S.points) {
      REQUIRE(pt.generators.size() == 1);
      const auto& g = pt.generators[0];
      const Eigen::Vector2d expected = oracle::cramer_intersection(
          u, u.dot(Z.point(g[0])), v, v.dot(Z.point(g[1])));
      CHECK((pt.location - expected).norm() < 1e-9 * (1 + expected.norm()));
    }
    CHECK(oracle::columns_subset(Z.points(), [&] {
      Eigen::MatrixXd locs(2, 9);
      for (int k = 0; k < 9; ++k) locs.col(k) = S.points[static_cast<std::size_t>(k)].location;
      return locs;
    }(), 1e-9));
  }
}

TEST_CASE("supercritical support equals Z with every off-diagonal tuple rejected") {
  const auto Z = gaussian_measure(3, 5, 7);
  const auto stack = sample_stack(3, {2, 2}, Law::GaussianStd, 8);
  const auto S = candidate_support(Z, stack);
  CHECK(S.points.size() == 5);
  CHECK(S.tuples_enumerated == 25);
  const double tol = S.accept_tol;
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t b = 0; b < 5; ++b) {
      const auto sys = stacked_system(Z, stack, {a, b});
      const double r = oracle::svd_residual(sys.matrix, sys.rhs);
      if (a == b) {
        CHECK(r < 1e-10);
      } else {
        CHECK(r > tol);
      }
    }
  }
  CHECK(S.max_diagonal_residual < 1e-10);
  CHECK(S.min_rejected_residual > tol);
  for (const auto& pt : S.points) {
    REQUIRE(pt.generators.size() == 1);
    CHECK(pt.generators[0][0] == pt.generators[0][1]);
    CHECK((pt.location - Z.point(pt.generators[0][0])).norm() < 1e-10);
  }
}

TEST_CASE("single atom") {
  const auto Z = gaussian_measure(3, 1, 3);
  const auto stack = sample_stack(3, {2, 1, 2}, Law::SphereUniform, 4);
  const auto S = candidate_support(Z, stack);
  REQUIRE(S.points.size() == 1);
  CHECK((S.points[0].location - Z.point(0)).norm() < 1e-12);
  const auto report = certify_uniqueness(Z, stack);
  CHECK(report.verdict == Verdict::UniqueSolution);
}

TEST_CASE("certify_uniqueness on a random supercritical instance") {
  const auto Z = gaussian_measure(3, 5, 21);
  const auto stack = sample_stack(3, {2, 2}, Law::GaussianStd, 22);
  const auto report = certify_uniqueness(Z, stack);
  CHECK(report.support_equals_Z);
  CHECK(report.weights_unique);
  CHECK(report.verdict == Verdict::UniqueSolution);
  REQUIRE(report.weight_witness.has_value());
  CHECK(report.diagnostics.at("weight_max_spread") < 1e-8);
  CHECK(report.diagnostics.at("max_diagonal_residual") < 1e-10);
}

TEST_CASE("critical instance is a finitely supported family") {
  const auto Z = gaussian_measure(2, 3, 5);
  const auto stack = sample_stack(2, {1, 1}, Law::GaussianStd, 6);
  const auto report = certify_uniqueness(Z, stack);
  CHECK(report.support.points.size() == 9);
  CHECK_FALSE(report.support_equals_Z);
  CHECK_FALSE(report.weights_unique);
  CHECK(report.verdict == Verdict::FinitelySupportedFamily);
}

TEST_CASE("hexagon counterexample is not unique") {
  const auto inst = polygon_counterexample(3);
  const auto report = certify_uniqueness(inst.Z, inst.stack);
  CHECK(report.verdict != Verdict::UniqueSolution);
  // The other hexagon vertices sit in the candidate support.
  Eigen::MatrixXd locs(2, static_cast<Eigen::Index>(report.support.points.size()));
  for (std::size_t k = 0; k < report.support.points.size(); ++k) {
    locs.col(static_cast<Eigen::Index>(k)) = report.support.points[k].location;
  }
  CHECK(oracle::columns_subset(inst.Y.points(), locs, 1e-9));
  CHECK(oracle::columns_subset(inst.Z.points(), locs, 1e-9));
}

TEST_CASE("subcritical regime reports affine witnesses") {
  const auto Z = gaussian_measure(3, 4, 9);
  const auto stack = sample_stack(3, {1, 1}, Law::GaussianStd, 10);
  const auto S = candidate_support(Z, stack);
  CHECK(S.regime == Regime::Subcritical);
  CHECK_FALSE(S.finite());
  CHECK(S.points.empty());
  CHECK(S.subspace_witnesses.size() == 16);
  const Eigen::MatrixXd V = stack.stacked();
  for (const auto& w : S.subspace_witnesses) {
    CHECK(w.subspace.basis.cols() == 1);
    const auto sys = stacked_system(Z, stack, w.tuple);
    CHECK((V * w.subspace.base - sys.rhs).norm() < 1e-10);
    CHECK((V * w.subspace.basis).norm() < 1e-12);
  }
  const auto report = certify_uniqueness(Z, stack);
  CHECK(report.verdict == Verdict::UnboundedFamily);
  CHECK_FALSE(report.weights_unique);
}

TEST_CASE("tuple budget") {
  const auto Z = gaussian_measure(2, 10, 1);
  const auto stack = sample_stack(2, {1, 1, 1}, Law::GaussianStd, 2);
  ToleranceConfig tols;
  tols.tuple_budget = 999;
  try {
    candidate_support(Z, stack, tols);
    FAIL("budget not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TupleBudgetExceeded);
  }
  tols.tuple_budget = 1000;
  CHECK(candidate_support(Z, stack, tols).tuples_enumerated == 1000);
}

TEST_CASE("dimension mismatch between measure and stack") {
  const auto Z = gaussian_measure(3, 2, 1);
  const auto stack = sample_stack(2, {1, 1}, Law::GaussianStd, 2);
  CHECK_THROWS_AS(candidate_support(Z, stack), Error);
}

TEST_CASE("tuple rank is row-major with the last axis fastest") {
  CHECK(tuple_rank({0, 0, 0}, 3) == 0);
  CHECK(tuple_rank({0, 0, 1}, 3) == 1);
  CHECK(tuple_rank({1, 0, 0}, 3) == 9);
  CHECK(tuple_rank({2, 2, 2}, 3) == 26);
}

TEST_CASE("pairwise disjointness") {
  SUBCASE("random critical instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto Z = gaussian_measure(2, 3, seed);
      const auto stack = sample_stack(2, {1, 1}, Law::SphereUniform, seed + 40);
      CHECK(pairwise_tuple_disjointness_check(Z, stack));
    }
  }
  SUBCASE("single atom") {
    const auto Z = gaussian_measure(2, 1, 0);
    const auto stack = sample_stack(2, {1, 1}, Law::GaussianStd, 1);
    CHECK(pairwise_tuple_disjointness_check(Z, stack));
    CHECK(candidate_support(Z, stack).points.size() == 1);
  }
  SUBCASE("two bisector lines of the hexagon") {
    const auto inst = polygon_counterexample(3);
    const ProjectionStack two(2, {inst.stack.block(0), inst.stack.block(1)},
                              Law::Explicit, 0);
    CHECK(pairwise_tuple_disjointness_check(inst.Z, two));
    CHECK(candidate_support(inst.Z, two).points.size() == 9);
  }
  SUBCASE("outside the critical regime") {
    const auto Z = gaussian_measure(3, 2, 0);
    CHECK_THROWS_AS(pairwise_tuple_disjointness_check(
                        Z, sample_stack(3, {2, 2}, Law::GaussianStd, 1)),
                    Error);
  }
}

TEST_CASE("Z is contained in S for every stack") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.index(3));
    std::vector<Eigen::Index> dims;
    const std::size_t p = 1 + rng.index(3);
    for (std::size_t i = 0; i < p; ++i) {
      dims.push_back(1 + static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(dim - 1))));
    }
    const auto Z = gaussian_measure(dim, 1 + static_cast<Eigen::Index>(rng.index(4)), seed + 1);
    const auto stack = sample_stack(dim, dims, Law::GaussianStd, seed + 2);
    const auto S = candidate_support(Z, stack);
    CHECK(S.max_diagonal_residual < 1e-10);
    for (std::uint32_t l = 0; l < Z.size(); ++l) {
      const auto sys = stacked_system(Z, stack, IndexTuple(p, l));
      CHECK(oracle::svd_residual(sys.matrix, sys.rhs) < 1e-10);
    }
    if (S.finite()) {
      Eigen::MatrixXd locs(dim, static_cast<Eigen::Index>(S.points.size()));
      for (std::size_t k = 0; k < S.points.size(); ++k) {
        locs.col(static_cast<Eigen::Index>(k)) = S.points[k].location;
      }
      CHECK(oracle::columns_subset(Z.points(), locs, 1e-9));
      if (S.points.size() > 1) CHECK(oracle::min_pairwise_distance(locs) > 1e-7);
    }
  }
}

TEST_CASE("appending a block never enlarges S") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto Z = gaussian_measure(2, 3, seed);
    const auto base = sample_stack(2, {1, 1}, Law::GaussianStd, seed + 1);
    const auto extra = sample_stack(2, {1}, Law::GaussianStd, seed + 2).block(0);
    const auto small = candidate_support(Z, base);
    const auto big = candidate_support(Z, base.with_block(extra));
    Eigen::MatrixXd a(2, static_cast<Eigen::Index>(small.points.size()));
    Eigen::MatrixXd b(2, static_cast<Eigen::Index>(big.points.size()));
    for (std::size_t k = 0; k < small.points.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = small.points[k].location;
    for (std::size_t k = 0; k < big.points.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = big.points[k].location;
    CHECK(big.points.size() <= small.points.size());
    CHECK(oracle::columns_subset(b, a, 1e-7));
  }
}

TEST_CASE("identical inputs give identical reports") {
  const auto Z = gaussian_measure(3, 4, 77);
  const auto stack = sample_stack(3, {2, 1, 1}, Law::GaussianStd, 78);
  const auto a = certify_uniqueness(Z, stack);
  const auto b = certify_uniqueness(Z, stack);
  REQUIRE(a.support.points.size() == b.support.points.size());
  for (std::size_t k = 0; k < a.support.points.size(); ++k) {
    CHECK(a.support.points[k].location == b.support.points[k].location);
    CHECK(a.support.points[k].generators == b.support.points[k].generators);
  }
  CHECK(a.diagnostics == b.diagnostics);
  CHECK(a.verdict == b.verdict);
}

TEST_CASE("coincident candidates merge their generators") {
  // Both atoms share their y coordinate, so every tuple differing only in
  // the second index lands on the same point.
  Eigen::MatrixXd pts(2, 2);
  pts << 0, 1, 0, 0;
  const auto Z = uniform_measure(pts);
  Eigen::MatrixXd Px(1, 2), Py(1, 2);
  Px << 1, 0;
  Py << 0, 1;
  const ProjectionStack stack(2, {Px, Py}, Law::Explicit, 0);
  const auto S = candidate_support(Z, stack);
  REQUIRE(S.points.size() == 2);
  for (const auto& pt : S.points) CHECK(pt.generators.size() == 2);
  std::set<IndexTuple> all;
  for (const auto& pt : S.points) all.insert(pt.generators.begin(), pt.generators.end());
  CHECK(all.size() == 4);
}
