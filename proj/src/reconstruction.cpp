#include "projrecon/reconstruction.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "projrecon/coupling.hpp"
#include "projrecon/error.hpp"

namespace projrecon {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "supercritical";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::UniqueSolution: return "unique_solution";
    case Verdict::FinitelySupportedFamily: return "finitely_supported_family";
    case Verdict::UnboundedFamily: return "unbounded_family";
  }
  return "unbounded_family";
}

Regime classify_regime(Eigen::Index dim,
                       const std::vector<Eigen::Index>& block_dims) {
  Eigen::Index total = 0;
  for (const auto d : block_dims) total += d;
  if (total > dim) return Regime::Supercritical;
  if (total == dim) return Regime::Critical;
  return Regime::Subcritical;
}

std::uint64_t tuple_rank(const IndexTuple& tuple, std::uint32_t n) {
  std::uint64_t rank = 0;
  for (const auto l : tuple) rank = rank * n + l;
  return rank;
}

namespace {

void check_compatible(const DiscreteMeasure& Z, const ProjectionStack& stack) {
  if (Z.dim() != stack.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "measure lives in R^" + std::to_string(Z.dim()) +
                    ", stack acts on R^" + std::to_string(stack.dim()));
  }
}

std::uint64_t checked_tuple_count(std::uint64_t n, std::size_t p,
                                  std::uint64_t budget) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < p; ++i) {
    if (count > budget / n) {
      throw Error(ErrorCode::TupleBudgetExceeded,
                  std::to_string(n) + "^" + std::to_string(p) +
                      " tuples exceed the budget of " + std::to_string(budget));
    }
    count *= n;
  }
  if (count > budget) {
    throw Error(ErrorCode::TupleBudgetExceeded,
                "tuple count exceeds the budget of " + std::to_string(budget));
  }
  return count;
}

bool is_diagonal(const IndexTuple& tuple) {
  for (const auto l : tuple) {
    if (l != tuple.front()) return false;
  }
  return true;
}

/// Odometer over [0, n)^p, last axis fastest. Returns the first position that
/// changed, or p when the enumeration is exhausted.
std::size_t advance(IndexTuple& tuple, std::uint32_t n) {
  std::size_t pos = tuple.size();
  while (pos > 0) {
    --pos;
    if (++tuple[pos] < n) return pos;
    tuple[pos] = 0;
  }
  return tuple.size();
}

// Right-hand side of the stacked system from precomputed block images.
Eigen::VectorXd gather_rhs(const std::vector<Eigen::MatrixXd>& images,
                           const IndexTuple& tuple, Eigen::Index total_rows) {
  Eigen::VectorXd c(total_rows);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Eigen::Index h = images[i].rows();
    c.segment(row, h) = images[i].col(tuple[i]);
    row += h;
  }
  return c;
}

struct RawCandidate {
  IndexTuple tuple;
  Eigen::VectorXd location;
  double residual;
};

void merge_candidates(std::vector<RawCandidate>& raw, double dedup_tol,
                      CandidateSupport& out) {
  if (raw.empty()) return;
  const Eigen::Index dim = raw.front().location.size();
  Eigen::MatrixXd locations(dim, static_cast<Eigen::Index>(raw.size()));
  for (std::size_t k = 0; k < raw.size(); ++k) {
    locations.col(static_cast<Eigen::Index>(k)) = raw[k].location;
  }
  const auto roots = cluster_points(locations, dedup_tol);
  std::vector<std::size_t> slot(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto root = static_cast<std::size_t>(roots[k]);
    if (root == k) {
      slot[k] = out.points.size();
      out.points.push_back({raw[k].location, {raw[k].tuple}, raw[k].residual});
    } else {
      out.points[slot[root]].generators.push_back(std::move(raw[k].tuple));
    }
  }
}

}  // namespace

StackedSystem stacked_system(const DiscreteMeasure& Z,
                             const ProjectionStack& stack,
                             const IndexTuple& tuple) {
  check_compatible(Z, stack);
  if (tuple.size() != stack.num_blocks()) {
    throw Error(ErrorCode::DimensionMismatch, "tuple length differs from p");
  }
  StackedSystem sys;
  sys.matrix = stack.stacked();
  sys.rhs.resize(sys.matrix.rows());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= Z.size()) {
      throw Error(ErrorCode::InvalidArgument, "tuple index out of range");
    }
    const auto& P = stack.block(i);
    sys.rhs.segment(row, P.rows()) = P * Z.point(tuple[i]);
    row += P.rows();
  }
  return sys;
}

CandidateSupport candidate_support(const DiscreteMeasure& Z,
                                   const ProjectionStack& stack,
                                   const ToleranceConfig& tols) {
  check_compatible(Z, stack);
  const auto n = static_cast<std::uint32_t>(Z.size());
  const std::size_t p = stack.num_blocks();
  const Eigen::Index dim = Z.dim();
  const std::uint64_t count = checked_tuple_count(n, p, tols.tuple_budget);

  CandidateSupport out;
  out.regime = classify_regime(dim, stack.block_dims());
  out.accept_tol = tols.accept_tol_for(Z.max_abs_coordinate());
  out.tuples_enumerated = count;
  out.min_rejected_residual = std::numeric_limits<double>::infinity();

  const Eigen::MatrixXd V = stack.stacked();
  const Eigen::Index D = V.rows();
  out.stacked_inverse_condition = inverse_condition(V);

  std::vector<Eigen::MatrixXd> images;
  images.reserve(p);
  for (const auto& P : stack.blocks()) images.push_back(P * Z.points());

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(V);
  pivoted.setThreshold(kRankTol);
  out.stacked_rank = pivoted.rank();

  std::vector<RawCandidate> raw;
  IndexTuple tuple(p, 0);

  if (out.stacked_rank == dim) {
    // Full column rank: every S_l is empty or a single point. The residual
    // of the least-squares solution is ||Q_2^T c||, and c is a sum of block
    // contributions, so the screen runs on prefix sums of precomputed
    // (D - d)-vectors.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd Q2t = Q.rightCols(D - dim).transpose();
    std::vector<Eigen::MatrixXd> residual_parts(p);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const Eigen::Index h = images[i].rows();
      residual_parts[i] = Q2t.middleCols(row, h) * images[i];
      row += h;
    }
    std::vector<Eigen::VectorXd> prefix(p + 1, Eigen::VectorXd::Zero(D - dim));

    std::size_t changed = 0;
    for (std::uint64_t t = 0; t < count; ++t) {
      for (std::size_t i = changed; i < p; ++i) {
        prefix[i + 1] = prefix[i] + residual_parts[i].col(tuple[i]);
      }
      const double screened = prefix[p].norm();
      const bool diagonal = is_diagonal(tuple);
      if (screened < out.accept_tol || diagonal) {
        const Eigen::VectorXd c = gather_rhs(images, tuple, D);
        Eigen::VectorXd x = qr.solve(c);
        const double residual = (V * x - c).norm();
        if (diagonal) {
          out.max_diagonal_residual =
              std::max(out.max_diagonal_residual, residual);
        }
        if (residual < out.accept_tol) {
          raw.push_back({tuple, std::move(x), residual});
        } else {
          out.min_rejected_residual =
              std::min(out.min_rejected_residual, residual);
        }
      } else {
        out.min_rejected_residual =
            std::min(out.min_rejected_residual, screened);
      }
      changed = advance(tuple, n);
    }
  } else {
    // Each consistent tuple contributes an affine subspace of dimension
    // d - rank sharing the kernel of the stacked system.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(kRankTol);
    cod.compute(V);
    const Eigen::MatrixXd kernel = kernel_basis(V);
    for (std::uint64_t t = 0; t < count; ++t) {
      const Eigen::VectorXd c = gather_rhs(images, tuple, D);
      Eigen::VectorXd base = cod.solve(c);
      const double residual = (V * base - c).norm();
      if (is_diagonal(tuple)) {
        out.max_diagonal_residual =
            std::max(out.max_diagonal_residual, residual);
      }
      if (residual < out.accept_tol) {
        out.subspace_witnesses.push_back({tuple, {std::move(base), kernel}});
      } else {
        out.min_rejected_residual =
            std::min(out.min_rejected_residual, residual);
      }
      advance(tuple, n);
    }
  }

  merge_candidates(raw, tols.dedup_tol, out);
  return out;
}

bool support_matches(const CandidateSupport& support, const DiscreteMeasure& Z,
                     double tol) {
  if (!support.finite() ||
      support.points.size() != static_cast<std::size_t>(Z.size())) {
    return false;
  }
  std::vector<bool> used(support.points.size(), false);
  for (Eigen::Index l = 0; l < Z.size(); ++l) {
    std::size_t best = used.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < support.points.size(); ++k) {
      if (used[k]) continue;
      const double dist = (support.points[k].location - Z.point(l)).norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    if (best == used.size() || best_dist > tol) return false;
    used[best] = true;
  }
  return true;
}

ReconstructionReport certify_uniqueness(const DiscreteMeasure& Z,
                                        const ProjectionStack& stack,
                                        const ToleranceConfig& tols) {
  ReconstructionReport report;
  report.support = candidate_support(Z, stack, tols);
  const auto& support = report.support;
  report.support_equals_Z = support_matches(support, Z, tols.dedup_tol);

  auto& diag = report.diagnostics;
  diag["accept_tol"] = support.accept_tol;
  diag["max_diagonal_residual"] = support.max_diagonal_residual;
  diag["min_rejected_residual"] = support.min_rejected_residual;
  diag["stacked_inverse_condition"] = support.stacked_inverse_condition;
  diag["stacked_rank"] = static_cast<double>(support.stacked_rank);
  diag["tuples_enumerated"] = static_cast<double>(support.tuples_enumerated);
  diag["candidate_points"] = static_cast<double>(support.points.size());
  diag["subspace_witnesses"] =
      static_cast<double>(support.subspace_witnesses.size());
  double min_block_condition = std::numeric_limits<double>::infinity();
  for (const auto& P : stack.blocks()) {
    min_block_condition = std::min(min_block_condition, inverse_condition(P));
  }
  diag["min_block_inverse_condition"] = min_block_condition;

  if (support.finite()) {
    const auto weights = weight_polytope_uniqueness(support, Z, stack, tols);
    report.weights_unique = weights.unique;
    report.weight_witness = weights.witness;
    diag["weight_max_spread"] = weights.max_spread;
    report.verdict = report.support_equals_Z && report.weights_unique
                         ? Verdict::UniqueSolution
                         : Verdict::FinitelySupportedFamily;
  } else {
    report.weights_unique = false;
    report.verdict = Verdict::UnboundedFamily;
  }
  return report;
}

bool pairwise_tuple_disjointness_check(const DiscreteMeasure& Z,
                                       const ProjectionStack& stack,
                                       const ToleranceConfig& tols) {
  if (classify_regime(stack.dim(), stack.block_dims()) != Regime::Critical) {
    throw Error(ErrorCode::InvalidArgument,
                "disjointness check applies to the critical regime only");
  }
  const auto support = candidate_support(Z, stack, tols);
  if (!support.finite() ||
      support.points.size() != support.tuples_enumerated) {
    return false;
  }
  for (const auto& point : support.points) {
    if (point.generators.size() != 1) return false;
  }
  return true;
}

}  // namespace projrecon
