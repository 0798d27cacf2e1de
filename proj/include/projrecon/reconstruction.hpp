#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "projrecon/measure.hpp"
#include "projrecon/projection.hpp"
#include "projrecon/tolerances.hpp"

namespace projrecon {

enum class Regime { Subcritical, Critical, Supercritical };
enum class Verdict { UniqueSolution, FinitelySupportedFamily, UnboundedFamily };

std::string_view to_string(Regime regime);
std::string_view to_string(Verdict verdict);

/// Index tuple (l_1, ..., l_p), zero-based, one entry per block.
using IndexTuple = std::vector<std::uint32_t>;

Regime classify_regime(Eigen::Index dim,
                       const std::vector<Eigen::Index>& block_dims);

/// A point x_l of the candidate support with every tuple that produces it.
struct CandidatePoint {
  Eigen::VectorXd location;
  std::vector<IndexTuple> generators;  // canonical order
  double residual = 0.0;               // of the first generator
};

struct AffineSubspace {
  Eigen::VectorXd base;
  Eigen::MatrixXd basis;  // orthonormal columns
};

struct SubspaceWitness {
  IndexTuple tuple;
  AffineSubspace subspace;
};

/// The set S = intersection over blocks of (Z + Ker P_i), enumerated tuple by
/// tuple. Finite when the stacked system has full column rank; otherwise the
/// per-tuple solution sets are reported as affine witnesses.
struct CandidateSupport {
  Regime regime = Regime::Supercritical;
  std::vector<CandidatePoint> points;
  std::vector<SubspaceWitness> subspace_witnesses;

  std::uint64_t tuples_enumerated = 0;
  double accept_tol = 0.0;
  /// Largest residual among diagonal tuples (l, ..., l).
  double max_diagonal_residual = 0.0;
  /// Smallest residual among rejected tuples; +inf when none was rejected.
  double min_rejected_residual = 0.0;
  /// Inverse condition number of the stacked D x d system.
  double stacked_inverse_condition = 0.0;
  /// Rank of the stacked system.
  Eigen::Index stacked_rank = 0;

  bool finite() const { return subspace_witnesses.empty(); }
};

/// Rows of all blocks stacked (D x d) together with the right-hand side
/// v_k^T w_k for one tuple.
struct StackedSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

StackedSystem stacked_system(const DiscreteMeasure& Z,
                             const ProjectionStack& stack,
                             const IndexTuple& tuple);

/// Exhaustive enumeration of [0, n)^p. Throws DimensionMismatch or
/// TupleBudgetExceeded.
CandidateSupport candidate_support(const DiscreteMeasure& Z,
                                   const ProjectionStack& stack,
                                   const ToleranceConfig& tols = {});

/// Row-major rank of a tuple in [0, n)^p.
std::uint64_t tuple_rank(const IndexTuple& tuple, std::uint32_t n);

struct ReconstructionReport {
  CandidateSupport support;
  bool support_equals_Z = false;
  bool weights_unique = false;
  Verdict verdict = Verdict::UnboundedFamily;
  /// A feasible weight vector over support.points (finite supports only).
  std::optional<Eigen::VectorXd> weight_witness;
  std::map<std::string, double> diagnostics;
};

ReconstructionReport certify_uniqueness(const DiscreteMeasure& Z,
                                        const ProjectionStack& stack,
                                        const ToleranceConfig& tols = {});

/// Critical-regime diagnostic: true iff the n^p singleton solutions are
/// pairwise farther apart than tols.dedup_tol. Throws InvalidArgument outside
/// the critical regime.
bool pairwise_tuple_disjointness_check(const DiscreteMeasure& Z,
                                       const ProjectionStack& stack,
                                       const ToleranceConfig& tols = {});

/// True iff the candidate locations and the atoms of Z match one to one
/// within tol.
bool support_matches(const CandidateSupport& support, const DiscreteMeasure& Z,
                     double tol);

}  // namespace projrecon
