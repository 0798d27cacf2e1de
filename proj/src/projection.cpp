#include "projrecon/projection.hpp"

#include <string>

#include "projrecon/error.hpp"
#include "projrecon/random.hpp"

namespace projrecon {

std::string_view to_string(Law law) {
  switch (law) {
    case Law::GaussianStd: return "gaussian";
    case Law::SphereUniform: return "sphere";
    case Law::Explicit: return "explicit";
  }
  return "gaussian";
}

Law law_from_string(std::string_view name) {
  if (name == "gaussian") return Law::GaussianStd;
  if (name == "sphere") return Law::SphereUniform;
  if (name == "explicit") return Law::Explicit;
  throw Error(ErrorCode::ParseError, "unknown law '" + std::string(name) + "'");
}

double inverse_condition(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

namespace {

void check_block(const Eigen::MatrixXd& block, Eigen::Index dim,
                 std::size_t index) {
  const std::string where = "block " + std::to_string(index);
  if (block.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                where + " has " + std::to_string(block.cols()) +
                    " columns, expected " + std::to_string(dim));
  }
  if (block.rows() < 1 || block.rows() >= dim) {
    throw Error(ErrorCode::DimensionMismatch,
                where + " has " + std::to_string(block.rows()) +
                    " rows; need 1 <= d_i < " + std::to_string(dim));
  }
  if (!block.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, where + " has non-finite entries");
  }
  if (!(inverse_condition(block) > kRankTol)) {
    throw Error(ErrorCode::RankDeficient, where + " is not of full row rank");
  }
}

Eigen::MatrixXd draw_block(Rng& rng, Eigen::Index rows, Eigen::Index dim,
                           Law law) {
  Eigen::MatrixXd block(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    block.row(r) = law == Law::SphereUniform
                       ? rng.unit_vector(dim).transpose()
                       : rng.normal_vector(dim).transpose();
  }
  return block;
}

}  // namespace

ProjectionStack::ProjectionStack(Eigen::Index dim,
                                 std::vector<Eigen::MatrixXd> blocks, Law law,
                                 std::uint64_t seed)
    : dim_(dim), blocks_(std::move(blocks)), law_(law), seed_(seed) {
  if (dim_ < 2) {
    throw Error(ErrorCode::DimensionMismatch, "stack dimension must be >= 2");
  }
  if (blocks_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "stack needs at least one block");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    check_block(blocks_[i], dim_, i);
  }
}

std::vector<Eigen::Index> ProjectionStack::block_dims() const {
  std::vector<Eigen::Index> dims;
  dims.reserve(blocks_.size());
  for (const auto& b : blocks_) dims.push_back(b.rows());
  return dims;
}

Eigen::Index ProjectionStack::total_rows() const {
  Eigen::Index total = 0;
  for (const auto& b : blocks_) total += b.rows();
  return total;
}

Eigen::MatrixXd ProjectionStack::stacked() const {
  Eigen::MatrixXd V(total_rows(), dim_);
  Eigen::Index row = 0;
  for (const auto& b : blocks_) {
    V.middleRows(row, b.rows()) = b;
    row += b.rows();
  }
  return V;
}

ProjectionStack ProjectionStack::with_block(Eigen::MatrixXd extra) const {
  auto blocks = blocks_;
  blocks.push_back(std::move(extra));
  return ProjectionStack(dim_, std::move(blocks), law_, seed_);
}

ProjectionStack sample_stack(Eigen::Index dim,
                             const std::vector<Eigen::Index>& block_dims,
                             Law law, std::uint64_t seed) {
  if (law == Law::Explicit) {
    throw Error(ErrorCode::InvalidArgument, "explicit stacks are not sampled");
  }
  if (dim < 2) {
    throw Error(ErrorCode::DimensionMismatch, "stack dimension must be >= 2");
  }
  if (block_dims.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no blocks requested");
  }
  constexpr int kMaxRetries = 3;
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(block_dims.size());
  for (std::size_t i = 0; i < block_dims.size(); ++i) {
    const Eigen::Index rows = block_dims[i];
    if (rows < 1 || rows >= dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "block dimension " + std::to_string(rows) +
                      " outside [1, " + std::to_string(dim - 1) + "]");
    }
    Rng rng(child_seed(seed, i));
    Eigen::MatrixXd block = draw_block(rng, rows, dim, law);
    int retries = 0;
    while (!(inverse_condition(block) > kRankTol)) {
      if (++retries > kMaxRetries) {
        throw Error(ErrorCode::RankDeficient,
                    "block " + std::to_string(i) +
                        " stayed rank deficient after resampling");
      }
      block = draw_block(rng, rows, dim, law);
    }
    blocks.push_back(std::move(block));
  }
  return ProjectionStack(dim, std::move(blocks), law, seed);
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& M) {
  const Eigen::Index cols = M.cols();
  if (M.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  // Complete orthogonal decomposition of M^T: the trailing columns of its
  // orthogonal factor span the complement of the row space of M.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M.transpose());
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(cols - rank);
}

PreimageDecomposition preimage_decomposition(const Eigen::MatrixXd& P) {
  const Eigen::Index h = P.rows();
  const Eigen::Index dim = P.cols();
  if (h == 0 || h > dim || !(inverse_condition(P) > kRankTol)) {
    throw Error(ErrorCode::RankDeficient, "matrix is not of full row rank");
  }
  // P^T = Q R with Q orthogonal (dim x dim) and R upper triangular (h x h).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(P.transpose());
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R =
      qr.matrixQR().topRows(h).triangularView<Eigen::Upper>();
  // P^T (P P^T)^{-1} = Q_1 R (R^T R)^{-1} = Q_1 R^{-T}
  const Eigen::MatrixXd R_inv = R.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(h, h));
  PreimageDecomposition out;
  out.lift = Q.leftCols(h) * R_inv.transpose();
  out.kernel_basis = Q.rightCols(dim - h);
  return out;
}

Eigen::MatrixXd orthogonal_projector(const Eigen::MatrixXd& P) {
  const Eigen::Index h = P.rows();
  if (h == 0 || h > P.cols() || !(inverse_condition(P) > kRankTol)) {
    throw Error(ErrorCode::RankDeficient, "matrix is not of full row rank");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(P.transpose());
  const Eigen::MatrixXd Q1 =
      qr.householderQ() * Eigen::MatrixXd::Identity(P.cols(), h);
  const Eigen::MatrixXd Q = Q1 * Q1.transpose();
  return 0.5 * (Q + Q.transpose());
}

}  // namespace projrecon
