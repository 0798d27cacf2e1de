#pragma once

#include <cstdint>
#include <optional>

namespace projrecon {

struct ToleranceConfig {
  /// Residual threshold for accepting a tuple; unset means
  /// 1e-8 * (1 + ||Z||_inf).
  std::optional<double> accept_tol;
  /// Candidate locations closer than this are one point.
  double dedup_tol = 1e-7;
  /// Pushforward images closer than this are one atom.
  double merge_tol = 1e-9;
  /// "Distance is zero" threshold on the sliced distance.
  double zero_tol = 1e-12;
  /// A sliced distance above this counts as a detected difference.
  double separation_tol = 1e-6;
  /// Coordinate bound spread below which a weight is unique.
  double uniqueness_tol = 1e-8;
  /// Residual allowed on the marginal constraints.
  double feasibility_tol = 1e-8;
  /// Cap on n^p enumerated tuples.
  std::uint64_t tuple_budget = 10'000'000;

  double accept_tol_for(double max_abs_coordinate) const {
    return accept_tol ? *accept_tol : 1e-8 * (1.0 + max_abs_coordinate);
  }
};

}  // namespace projrecon
