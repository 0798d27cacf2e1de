#include <doctest.h>

#include "oracles.hpp"
#include "projrecon/counterexample.hpp"
#include "projrecon/error.hpp"
#include "projrecon/experiments.hpp"
#include "projrecon/random.hpp"
#include "projrecon/sliced_wasserstein.hpp"

using namespace projrecon;

namespace {

struct Line {
  std::vector<double> x, w;
  DiscreteMeasure measure() const {
    Eigen::MatrixXd pts(1, static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXd wv(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < x.size(); ++k) {
      pts(0, static_cast<Eigen::Index>(k)) = x[k];
      wv[static_cast<Eigen::Index>(k)] = w[k];
    }
    return DiscreteMeasure(pts, wv);
  }
};

Line random_line(Rng& rng, std::size_t atoms) {
  Line out;
  double total = 0.0;
  for (std::size_t k = 0; k < atoms; ++k) {
    out.x.push_back(3.0 * rng.normal());
    out.w.push_back(0.05 + rng.uniform());
    total += out.w.back();
  }
  for (double& w : out.w) w /= total;
  return out;
}

DiscreteMeasure random_measure(Rng& rng, Eigen::Index dim, Eigen::Index n) {
  Eigen::MatrixXd pts(dim, n);
  for (Eigen::Index l = 0; l < n; ++l) pts.col(l) = rng.normal_vector(dim);
  Eigen::VectorXd w(n);
  for (Eigen::Index l = 0; l < n; ++l) w[l] = 0.05 + rng.uniform();
  return DiscreteMeasure(pts, w / w.sum());
}

}  // namespace

TEST_CASE("one-dimensional W2 basics") {
  Rng rng(1);
  const auto a = random_line(rng, 4).measure();
  CHECK(wasserstein2_1d(a, a) == 0.0);
  for (double t : {0.5, -3.0, 1e3}) {
    const DiscreteMeasure d0(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
    const DiscreteMeasure dt(Eigen::MatrixXd::Constant(1, 1, t), Eigen::VectorXd::Ones(1));
    CHECK(wasserstein2_1d(d0, dt) == doctest::Approx(std::abs(t)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(wasserstein2_1d(random_measure(rng, 2, 2), a), Error);
}

TEST_CASE("W2 sweep equals the transport LP on 5 vs 6 atoms") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_line(rng, 5);
    const auto b = random_line(rng, 6);
    const double lp = oracle::transport_lp_w2_squared(a.x, a.w, b.x, b.w);
    const double sweep = wasserstein2_1d(a.measure(), b.measure());
    CHECK(std::abs(sweep - std::sqrt(std::max(lp, 0.0))) < 1e-8);
  }
}

TEST_CASE("W2 is a metric on random triples") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_line(rng, 1 + rng.index(6)).measure();
    const auto b = random_line(rng, 1 + rng.index(6)).measure();
    const auto c = random_line(rng, 1 + rng.index(6)).measure();
    const double ab = wasserstein2_1d(a, b);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - wasserstein2_1d(b, a)) < 1e-12);
    CHECK(ab <= wasserstein2_1d(a, c) + wasserstein2_1d(c, b) + 1e-9);
  }
}

TEST_CASE("sweep handles coincident positions across measures") {
  const double sq = wasserstein2_1d_squared({{0.0, 0.5}, {1.0, 0.5}},
                                            {{0.0, 0.25}, {1.0, 0.75}});
  // Mass 0.25 moves a unit distance.
  CHECK(sq == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("rounding residue of split atoms is not transported") {
  // 0.1 + 0.2 != 0.3 in binary, the split side carries a residue of 5e-17.
  const double sq = wasserstein2_1d_squared({{0.0, 0.1}, {0.0, 0.2}, {5.0, 0.7}},
                                            {{0.0, 0.3}, {5.0, 0.7}});
  CHECK(sq == 0.0);
}

TEST_CASE("direction sampling") {
  const auto a = sample_directions(2, 3, 9);
  const auto b = sample_directions(2, 3, 9);
  CHECK(a.thetas() == b.thetas());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.theta(i).norm() - 1.0) < 1e-12);
  }
  const auto many = sample_directions(3, 10000, 1);
  CHECK(many.thetas().rowwise().mean().norm() < 0.05);
  CHECK_THROWS_AS(sample_directions(1, 3, 0), Error);
  CHECK_THROWS_AS(DirectionSet(Eigen::MatrixXd::Ones(2, 1), 0), Error);
}

TEST_CASE("empirical SW") {
  Rng rng(3);
  const auto dirs = sample_directions(3, 5, 11);
  const auto a = random_measure(rng, 3, 4);
  CHECK(empirical_sw(a, a, dirs) == 0.0);

  SUBCASE("matches the per-direction average") {
    const auto b = random_measure(rng, 3, 6);
    double total = 0.0;
    for (Eigen::Index i = 0; i < dirs.size(); ++i) {
      const Eigen::MatrixXd row = dirs.theta(i).transpose();
      const auto pa = pushforward(a, row);
      const auto pb = pushforward(b, row);
      std::vector<double> xa, wa, xb, wb;
      for (Eigen::Index k = 0; k < pa.size(); ++k) { xa.push_back(pa.point(k)[0]); wa.push_back(pa.weight(k)); }
      for (Eigen::Index k = 0; k < pb.size(); ++k) { xb.push_back(pb.point(k)[0]); wb.push_back(pb.weight(k)); }
      total += oracle::transport_lp_w2_squared(xa, wa, xb, wb);
    }
    CHECK(std::abs(empirical_sw(a, b, dirs) - std::sqrt(total / 5)) < 1e-8);
  }
  SUBCASE("pseudo-metric on random triples") {
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_measure(rng, 3, 1 + static_cast<Eigen::Index>(rng.index(5)));
      const auto y = random_measure(rng, 3, 1 + static_cast<Eigen::Index>(rng.index(5)));
      const auto z = random_measure(rng, 3, 1 + static_cast<Eigen::Index>(rng.index(5)));
      const double xy = empirical_sw(x, y, dirs);
      CHECK(xy > 0.0);
      CHECK(std::abs(xy - empirical_sw(y, x, dirs)) < 1e-12);
      CHECK(xy <= empirical_sw(x, z, dirs) + empirical_sw(z, y, dirs) + 1e-9);
    }
  }
  CHECK_THROWS_AS(empirical_sw(a, random_measure(rng, 2, 2), dirs), Error);
}

TEST_CASE("hexagon measures are SW-indistinguishable along the bisectors") {
  const auto inst = polygon_counterexample(3);
  const DirectionSet dirs(inst.stack.stacked().transpose(), 0);
  CHECK(empirical_sw(inst.Y, inst.Z, dirs) < 1e-12);
  CHECK(wasserstein2_exact(inst.Y, inst.Z) > 0.1);
  CHECK_FALSE(measures_equal(inst.Y, inst.Z, 1e-6));
}

TEST_CASE("ambient W2") {
  Rng rng(12);
  const auto a = random_measure(rng, 2, 4);
  CHECK(wasserstein2_exact(a, a) < 1e-12);
  const Eigen::Vector2d shift(3, -4);
  const DiscreteMeasure moved(a.points().colwise() + shift, a.weights());
  CHECK(std::abs(wasserstein2_exact(a, moved) - 5.0) < 1e-9);
}

TEST_CASE("SW zero iff directional pushforwards coincide") {
  Rng rng(90);
  const auto dirs = sample_directions(2, 2, 4);
  const auto a = random_measure(rng, 2, 3);
  const auto witness = null_sw_witness(a, dirs, {1.0, 3, 64});
  const auto far = random_measure(rng, 2, 3);
  for (const auto* other : {&witness, &far}) {
    bool all_equal = true;
    for (Eigen::Index i = 0; i < dirs.size(); ++i) {
      const Eigen::MatrixXd row = dirs.theta(i).transpose();
      all_equal = all_equal && measures_equal(pushforward(a, row), pushforward(*other, row), 1e-9);
    }
    CHECK((empirical_sw(a, *other, dirs) < 1e-12) == all_equal);
  }
}

TEST_CASE("null witnesses") {
  Rng rng(5);
  SUBCASE("kernel translation for p < d") {
    const auto Z = random_measure(rng, 3, 4);
    const auto dirs = sample_directions(3, 2, 8);
    for (double t : {10.0, 1e3, 1e6}) {
      const auto w = null_sw_witness(Z, dirs, {t, 0, 64});
      CHECK(empirical_sw(w, Z, dirs) / t < 1e-15);
      CHECK(std::abs(wasserstein2_exact(w, Z) - t) < 1e-9 * t);
    }
  }
  SUBCASE("coupling recombination for p = d") {
    const DiscreteMeasure Z = uniform_measure(sample_gaussian_points(2, 3, 2));
    const auto dirs = sample_directions(2, 2, 3);
    const auto w = null_sw_witness(Z, dirs, {1.0, 7, 64});
    CHECK(empirical_sw(w, Z, dirs) < 1e-12);
    CHECK_FALSE(measures_equal(w, Z, 1e-6));
  }
  SUBCASE("errors") {
    const auto Z2 = random_measure(rng, 2, 3);
    try {
      null_sw_witness(Z2, sample_directions(2, 3, 0));
      FAIL("expected SupercriticalRegime");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SupercriticalRegime);
    }
    try {
      null_sw_witness(random_measure(rng, 2, 1), sample_directions(2, 2, 0));
      FAIL("expected DegenerateInstance");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateInstance);
    }
    CHECK_THROWS_AS(null_sw_witness(Z2, sample_directions(3, 2, 0)), Error);
  }
}
