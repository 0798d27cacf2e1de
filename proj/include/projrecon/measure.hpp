#pragma once

#include <vector>

#include <Eigen/Dense>

namespace projrecon {

inline constexpr double kDefaultMergeTol = 1e-9;
inline constexpr double kWeightSumTol = 1e-9;

/// Weighted point cloud sum_l b_l delta_{z_l} on R^dim.
///
/// Points are stored as the columns of a dim x n matrix. Construction
/// validates positivity, distinctness and total mass; instances are immutable
/// afterwards.
class DiscreteMeasure {
 public:
  enum class Normalize { Yes, No };

  /// Throws DuplicatePoints, NonpositiveWeight, WeightSumMismatch or
  /// DimensionMismatch. With Normalize::Yes a weight sum within 1e-9 of 1 is
  /// rescaled to 1.
  DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights,
                  double dedup_tol = kDefaultMergeTol,
                  Normalize normalize = Normalize::Yes);

  Eigen::Index dim() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }

  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  auto point(Eigen::Index l) const { return points_.col(l); }
  double weight(Eigen::Index l) const { return weights_[l]; }

  /// max_l ||z_l||_inf
  double max_abs_coordinate() const;

  /// Indices of the atoms sorted lexicographically by coordinates.
  std::vector<Eigen::Index> canonical_order() const;

  /// Same measure with atoms rearranged in canonical order.
  DiscreteMeasure canonicalized() const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

/// Builds a measure from a list of points (all of equal dimension).
DiscreteMeasure new_discrete_measure(const std::vector<Eigen::VectorXd>& points,
                                     const std::vector<double>& weights,
                                     double dedup_tol = kDefaultMergeTol);

/// Uniform weights 1/n on the columns of `points`.
DiscreteMeasure uniform_measure(Eigen::MatrixXd points,
                                double dedup_tol = kDefaultMergeTol);

/// Image measure P#gamma. Images within merge_tol are merged (single linkage);
/// each output atom sits exactly at P z_l for the first l of its cluster.
DiscreteMeasure pushforward(const DiscreteMeasure& measure,
                            const Eigen::MatrixXd& P,
                            double merge_tol = kDefaultMergeTol);

/// Bijective atom matching within tol in position and weight.
bool measures_equal(const DiscreteMeasure& a, const DiscreteMeasure& b,
                    double tol);

/// Single-linkage clustering of the columns of `points`: two columns closer
/// than tol (Euclidean) share a cluster. Returns, per column, the index of its
/// cluster's smallest member.
std::vector<Eigen::Index> cluster_points(const Eigen::MatrixXd& points,
                                         double tol);

/// Lexicographic comparison of two vectors.
bool lexicographic_less(const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace projrecon
