#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "projrecon/measure.hpp"
#include "projrecon/projection.hpp"
#include "projrecon/reconstruction.hpp"
#include "projrecon/tolerances.hpp"

namespace projrecon {

/// Dense nonnegative n^p tensor with every axis marginal equal to b. Entries
/// are stored in row-major tuple order (last axis fastest).
class CouplingTensor {
 public:
  CouplingTensor(std::uint32_t n, std::uint32_t p, std::vector<double> entries);

  std::uint32_t n() const { return n_; }
  std::uint32_t p() const { return p_; }
  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& mutable_entries() { return entries_; }

  double at(const IndexTuple& tuple) const;
  std::size_t size() const { return entries_.size(); }

  /// Marginal along `axis`: m_k = sum over tuples with l_axis = k.
  Eigen::VectorXd marginal(std::uint32_t axis) const;
  /// max over axes and k of |marginal_k - b_k|
  double marginal_residual(const Eigen::VectorXd& b) const;

  IndexTuple tuple_at(std::size_t flat) const;

 private:
  std::uint32_t n_;
  std::uint32_t p_;
  std::vector<double> entries_;
};

inline constexpr std::uint64_t kCouplingBudget = 10'000'000;

/// a_l = b_{l_1} ... b_{l_p}
CouplingTensor independent_coupling(const Eigen::VectorXd& b, std::uint32_t p);

/// a_(l,...,l) = b_l, zero elsewhere.
CouplingTensor diagonal_coupling(const Eigen::VectorXd& b, std::uint32_t p);

/// Random member of the marginal polytope: `steps` mass exchanges along 2x2
/// cycles starting at the independent coupling.
CouplingTensor sample_coupling(const Eigen::VectorXd& b, std::uint32_t p,
                               std::uint64_t seed, std::size_t steps);

/// sum_l a_l delta_{x_l} over the critical-case grid `support` (every tuple
/// must be present). Zero entries are dropped.
DiscreteMeasure coupling_to_measure(const CouplingTensor& coupling,
                                    const CandidateSupport& support,
                                    double dedup_tol = 1e-12);

struct WeightUniqueness {
  bool unique = false;
  std::optional<Eigen::VectorXd> witness;
  /// max_j (max a_j - min a_j) over the polytope
  double max_spread = 0.0;
};

/// Decides whether the weights over the candidate points are forced by the
/// pushforward constraints, by bounding every coordinate from both sides.
/// Throws Infeasible when gamma_Z's own marginals cannot be met, and
/// InvalidArgument for a support that is not finite.
WeightUniqueness weight_polytope_uniqueness(const CandidateSupport& candidates,
                                            const DiscreteMeasure& Z,
                                            const ProjectionStack& stack,
                                            const ToleranceConfig& tols = {});

}  // namespace projrecon
