#include "projrecon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "projrecon/error.hpp"

namespace projrecon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TupleBudgetExceeded: return "TupleBudgetExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SupercriticalRegime: return "SupercriticalRegime";
    case ErrorCode::DegenerateInstance: return "DegenerateInstance";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool lexicographic_less(const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller index becomes the root, so roots are cluster minima.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<Eigen::Index> cluster_points(const Eigen::MatrixXd& points,
                                         double tol) {
  const auto n = static_cast<std::size_t>(points.cols());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (points.rows() > 0) {
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return points(0, a) < points(0, b) ||
             (points(0, a) == points(0, b) && a < b);
    });
  }
  DisjointSets sets(n);
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index a = order[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::Index b = order[j];
      if (points.rows() > 0 && points(0, b) - points(0, a) > tol) break;
      if ((points.col(a) - points.col(b)).squaredNorm() < tol2) {
        sets.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      }
    }
  }
  std::vector<Eigen::Index> root(n);
  for (std::size_t i = 0; i < n; ++i) {
    root[i] = static_cast<Eigen::Index>(sets.find(i));
  }
  return root;
}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points,
                                 Eigen::VectorXd weights, double dedup_tol,
                                 Normalize normalize)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "measure needs at least one atom");
  }
  if (points_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "measure dimension must be >= 1");
  }
  if (points_.cols() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "number of points and weights differ");
  }
  if (!points_.allFinite() || !weights_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate or weight");
  }
  for (Eigen::Index l = 0; l < weights_.size(); ++l) {
    if (!(weights_[l] > 0.0)) {
      std::ostringstream msg;
      msg << "weight " << l << " is not strictly positive (" << weights_[l]
          << ")";
      throw Error(ErrorCode::NonpositiveWeight, msg.str());
    }
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg << "weights sum to " << total << ", expected 1";
    throw Error(ErrorCode::WeightSumMismatch, msg.str());
  }
  if (normalize == Normalize::Yes) weights_ /= total;

  const auto roots = cluster_points(points_, dedup_tol);
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (roots[l] != static_cast<Eigen::Index>(l)) {
      std::ostringstream msg;
      msg << "points " << roots[l] << " and " << l << " are closer than "
          << dedup_tol;
      throw Error(ErrorCode::DuplicatePoints, msg.str());
    }
  }
}

double DiscreteMeasure::max_abs_coordinate() const {
  return points_.cwiseAbs().maxCoeff();
}

std::vector<Eigen::Index> DiscreteMeasure::canonical_order() const {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return lexicographic_less(points_.col(a), points_.col(b));
                   });
  return order;
}

DiscreteMeasure DiscreteMeasure::canonicalized() const {
  const auto order = canonical_order();
  Eigen::MatrixXd pts(dim(), size());
  Eigen::VectorXd w(size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    pts.col(static_cast<Eigen::Index>(k)) = points_.col(order[k]);
    w[static_cast<Eigen::Index>(k)] = weights_[order[k]];
  }
  return DiscreteMeasure(std::move(pts), std::move(w), 0.0, Normalize::No);
}

DiscreteMeasure new_discrete_measure(const std::vector<Eigen::VectorXd>& points,
                                     const std::vector<double>& weights,
                                     double dedup_tol) {
  if (points.empty() || weights.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty point or weight list");
  }
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "number of points and weights differ");
  }
  const Eigen::Index dim = points.front().size();
  Eigen::MatrixXd pts(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t l = 0; l < points.size(); ++l) {
    if (points[l].size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "points do not share one dimension");
    }
    pts.col(static_cast<Eigen::Index>(l)) = points[l];
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  return DiscreteMeasure(std::move(pts), std::move(w), dedup_tol);
}

DiscreteMeasure uniform_measure(Eigen::MatrixXd points, double dedup_tol) {
  const Eigen::Index n = points.cols();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "no points");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return DiscreteMeasure(std::move(points), std::move(w), dedup_tol);
}

DiscreteMeasure pushforward(const DiscreteMeasure& measure,
                            const Eigen::MatrixXd& P, double merge_tol) {
  if (P.cols() != measure.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "projection has " + std::to_string(P.cols()) +
                    " columns, measure dimension is " +
                    std::to_string(measure.dim()));
  }
  const Eigen::MatrixXd images = P * measure.points();
  const auto roots = cluster_points(images, merge_tol);

  std::vector<Eigen::Index> reps;
  std::vector<Eigen::Index> slot(roots.size(), -1);
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (roots[l] == static_cast<Eigen::Index>(l)) {
      slot[l] = static_cast<Eigen::Index>(reps.size());
      reps.push_back(static_cast<Eigen::Index>(l));
    }
  }
  Eigen::MatrixXd pts(images.rows(), static_cast<Eigen::Index>(reps.size()));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k) {
    pts.col(static_cast<Eigen::Index>(k)) = images.col(reps[k]);
  }
  for (std::size_t l = 0; l < roots.size(); ++l) {
    w[slot[static_cast<std::size_t>(roots[l])]] +=
        measure.weight(static_cast<Eigen::Index>(l));
  }
  // Clusters are single-linkage components, so representatives are already
  // more than merge_tol apart.
  return DiscreteMeasure(std::move(pts), std::move(w), 0.0,
                         DiscreteMeasure::Normalize::No);
}

bool measures_equal(const DiscreteMeasure& a, const DiscreteMeasure& b,
                    double tol) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  const auto order_a = a.canonical_order();
  const auto order_b = b.canonical_order();
  std::vector<bool> used(order_b.size(), false);
  for (const Eigen::Index ia : order_a) {
    std::size_t best = order_b.size();
    double best_dist = 0.0;
    for (std::size_t k = 0; k < order_b.size(); ++k) {
      if (used[k]) continue;
      const double dist = (a.point(ia) - b.point(order_b[k])).norm();
      if (best == order_b.size() || dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best_dist > tol ||
        std::abs(a.weight(ia) - b.weight(order_b[best])) > tol) {
      return false;
    }
    used[best] = true;
  }
  return true;
}

}  // namespace projrecon
