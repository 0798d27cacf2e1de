#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace projrecon {

/// Sampling law of the projection rows. Explicit marks stacks given
/// verbatim (for instance the symmetric polygon configuration).
enum class Law { GaussianStd, SphereUniform, Explicit };

std::string_view to_string(Law law);
Law law_from_string(std::string_view name);

inline constexpr double kRankTol = 1e-10;

/// Smallest over largest singular value; 0 for an empty or zero matrix.
double inverse_condition(const Eigen::MatrixXd& m);

/// Ordered list of full-row-rank blocks P_i of shape d_i x dim with
/// 1 <= d_i < dim.
class ProjectionStack {
 public:
  /// Throws DimensionMismatch or RankDeficient when a block breaks the
  /// invariants.
  ProjectionStack(Eigen::Index dim, std::vector<Eigen::MatrixXd> blocks,
                  Law law, std::uint64_t seed);

  Eigen::Index dim() const { return dim_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }
  const Eigen::MatrixXd& block(std::size_t i) const { return blocks_[i]; }
  Law law() const { return law_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<Eigen::Index> block_dims() const;
  /// D = sum_i d_i
  Eigen::Index total_rows() const;
  /// All blocks stacked vertically into a D x dim matrix.
  Eigen::MatrixXd stacked() const;

  /// Copy with `extra` appended as a new last block.
  ProjectionStack with_block(Eigen::MatrixXd extra) const;

 private:
  Eigen::Index dim_;
  std::vector<Eigen::MatrixXd> blocks_;
  Law law_;
  std::uint64_t seed_;
};

/// Rows of block i are drawn from the stream child_seed(seed, i). A block
/// failing the rank check is redrawn from the same stream, at most 3 times.
ProjectionStack sample_stack(Eigen::Index dim,
                             const std::vector<Eigen::Index>& block_dims,
                             Law law, std::uint64_t seed);

/// P^{-1}(b) = lift * b + span(kernel_basis).
struct PreimageDecomposition {
  Eigen::MatrixXd lift;          // dim x d_i, equals P^T (P P^T)^{-1}
  Eigen::MatrixXd kernel_basis;  // dim x (dim - d_i), orthonormal columns
};

PreimageDecomposition preimage_decomposition(const Eigen::MatrixXd& P);

/// Orthogonal projector onto the row space of P.
Eigen::MatrixXd orthogonal_projector(const Eigen::MatrixXd& P);

/// Orthonormal basis of Ker M for an arbitrary matrix (rank decided with the
/// relative tolerance kRankTol).
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& M);

}  // namespace projrecon
