#include "projrecon/sliced_wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "projrecon/coupling.hpp"
#include "projrecon/error.hpp"
#include "projrecon/linear_program.hpp"
#include "projrecon/random.hpp"
#include "projrecon/reconstruction.hpp"

namespace projrecon {

DirectionSet::DirectionSet(Eigen::MatrixXd thetas, std::uint64_t seed)
    : thetas_(std::move(thetas)), seed_(seed) {
  if (thetas_.rows() < 1 || thetas_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "direction set is empty");
  }
  for (Eigen::Index i = 0; i < thetas_.cols(); ++i) {
    if (!(std::abs(thetas_.col(i).norm() - 1.0) <= 1e-12)) {
      throw Error(ErrorCode::InvalidArgument,
                  "direction " + std::to_string(i) + " is not a unit vector");
    }
  }
}

ProjectionStack DirectionSet::as_stack() const {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index i = 0; i < size(); ++i) {
    blocks.emplace_back(thetas_.col(i).transpose());
  }
  return ProjectionStack(dim(), std::move(blocks), Law::SphereUniform, seed_);
}

DirectionSet sample_directions(Eigen::Index dim, Eigen::Index p,
                               std::uint64_t seed) {
  if (dim < 2 || p < 1) {
    throw Error(ErrorCode::InvalidArgument, "need dim >= 2 and p >= 1");
  }
  Eigen::MatrixXd thetas(dim, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    Rng rng(child_seed(seed, static_cast<std::uint64_t>(i)));
    thetas.col(i) = rng.unit_vector(dim);
  }
  return DirectionSet(std::move(thetas), seed);
}

double wasserstein2_1d_squared(std::vector<std::pair<double, double>> alpha,
                               std::vector<std::pair<double, double>> beta) {
  if (alpha.empty() || beta.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty one-dimensional measure");
  }
  std::sort(alpha.begin(), alpha.end());
  std::sort(beta.begin(), beta.end());
  // Walk the merged cumulative-weight breakpoints; the slice between two
  // consecutive breakpoints is transported from the current alpha atom to
  // the current beta atom.
  // Remaining masses closer than kSliceTol count as one breakpoint, so
  // rounding residue of the weight sums is never carried across a gap.
  constexpr double kSliceTol = 1e-13;
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double left_a = alpha[0].second;
  double left_b = beta[0].second;
  while (i < alpha.size() && j < beta.size()) {
    const double diff = alpha[i].first - beta[j].first;
    if (left_a < left_b - kSliceTol) {
      total += left_a * diff * diff;
      left_b -= left_a;
      if (++i < alpha.size()) left_a = alpha[i].second;
    } else if (left_b < left_a - kSliceTol) {
      total += left_b * diff * diff;
      left_a -= left_b;
      if (++j < beta.size()) left_b = beta[j].second;
    } else {
      total += std::min(left_a, left_b) * diff * diff;
      if (++i < alpha.size()) left_a = alpha[i].second;
      if (++j < beta.size()) left_b = beta[j].second;
    }
  }
  return total;
}

namespace {

std::vector<std::pair<double, double>> projected_atoms(
    const DiscreteMeasure& m, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index l = 0; l < m.size(); ++l) {
    atoms.emplace_back(theta.dot(m.point(l)), m.weight(l));
  }
  return atoms;
}

}  // namespace

double wasserstein2_1d(const DiscreteMeasure& alpha,
                       const DiscreteMeasure& beta) {
  if (alpha.dim() != 1 || beta.dim() != 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "wasserstein2_1d expects measures on the line");
  }
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  return std::sqrt(wasserstein2_1d_squared(projected_atoms(alpha, one),
                                           projected_atoms(beta, one)));
}

double empirical_sw(const DiscreteMeasure& alpha, const DiscreteMeasure& beta,
                    const DirectionSet& dirs) {
  if (alpha.dim() != beta.dim() || alpha.dim() != dirs.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "measures and directions live in different dimensions");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < dirs.size(); ++i) {
    sum += wasserstein2_1d_squared(projected_atoms(alpha, dirs.theta(i)),
                                   projected_atoms(beta, dirs.theta(i)));
  }
  return std::sqrt(sum / static_cast<double>(dirs.size()));
}

double wasserstein2_exact(const DiscreteMeasure& alpha,
                          const DiscreteMeasure& beta) {
  if (alpha.dim() != beta.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measures differ in dimension");
  }
  const Eigen::Index n = alpha.size();
  const Eigen::Index m = beta.size();
  // Plan entry (i, j) is variable i * m + j.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + m, n * m);
  Eigen::VectorXd b(n + m);
  Eigen::VectorXd cost(n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      A(i, i * m + j) = 1.0;
      A(n + j, i * m + j) = 1.0;
      cost[i * m + j] = (alpha.point(i) - beta.point(j)).squaredNorm();
    }
  }
  b.head(n) = alpha.weights();
  b.tail(m) = beta.weights();
  const EqualityLp lp(A, b, 1e-9);
  const auto sol = lp.minimize(cost);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::Infeasible, "transport problem failed");
  }
  return std::sqrt(std::max(sol.objective, 0.0));
}

DiscreteMeasure null_sw_witness(const DiscreteMeasure& Z,
                                const DirectionSet& dirs,
                                const NullWitnessOptions& options) {
  const Eigen::Index d = Z.dim();
  const Eigen::Index p = dirs.size();
  if (dirs.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "directions and measure live in different dimensions");
  }
  if (p > d) {
    throw Error(ErrorCode::SupercriticalRegime,
                "p > d: gamma_Z is the only measure at sliced distance zero");
  }
  if (p < d) {
    if (options.translation == 0.0 || !std::isfinite(options.translation)) {
      throw Error(ErrorCode::InvalidArgument,
                  "translation magnitude must be finite and nonzero");
    }
    const Eigen::MatrixXd kernel = kernel_basis(dirs.thetas().transpose());
    const Eigen::VectorXd shift = options.translation * kernel.col(0);
    Eigen::MatrixXd moved = Z.points().colwise() + shift;
    return DiscreteMeasure(std::move(moved), Z.weights(), 0.0,
                           DiscreteMeasure::Normalize::No);
  }
  if (Z.size() == 1) {
    throw Error(ErrorCode::DegenerateInstance,
                "p = d with a single atom leaves no other solution");
  }
  const auto stack = dirs.as_stack();
  const auto grid = candidate_support(Z, stack);
  const auto coupling =
      sample_coupling(Z.weights(), static_cast<std::uint32_t>(p), options.seed,
                      options.coupling_steps);
  return coupling_to_measure(coupling, grid);
}

}  // namespace projrecon
