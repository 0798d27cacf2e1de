#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "projrecon/measure.hpp"
#include "projrecon/projection.hpp"

namespace projrecon {

/// p unit directions theta_i in R^dim (columns of `thetas`).
class DirectionSet {
 public:
  DirectionSet(Eigen::MatrixXd thetas, std::uint64_t seed);

  Eigen::Index dim() const { return thetas_.rows(); }
  Eigen::Index size() const { return thetas_.cols(); }
  const Eigen::MatrixXd& thetas() const { return thetas_; }
  auto theta(Eigen::Index i) const { return thetas_.col(i); }
  std::uint64_t seed() const { return seed_; }

  /// One 1 x dim block per direction.
  ProjectionStack as_stack() const;

 private:
  Eigen::MatrixXd thetas_;
  std::uint64_t seed_;
};

/// Direction i is drawn from child_seed(seed, i).
DirectionSet sample_directions(Eigen::Index dim, Eigen::Index p,
                               std::uint64_t seed);

/// Exact W2 between measures on the line (merged-CDF sweep).
double wasserstein2_1d(const DiscreteMeasure& alpha,
                       const DiscreteMeasure& beta);

/// Squared W2 on the line between raw weighted atoms (positions need not be
/// distinct or sorted).
double wasserstein2_1d_squared(std::vector<std::pair<double, double>> alpha,
                               std::vector<std::pair<double, double>> beta);

/// sqrt( 1/p sum_i W2^2(<theta_i, .>#alpha, <theta_i, .>#beta) )
double empirical_sw(const DiscreteMeasure& alpha, const DiscreteMeasure& beta,
                    const DirectionSet& dirs);

/// Exact W2 in R^d by solving the transport linear program. Intended for
/// desk-scale checks (n * m variables).
double wasserstein2_exact(const DiscreteMeasure& alpha,
                          const DiscreteMeasure& beta);

struct NullWitnessOptions {
  /// Translation magnitude along the common kernel (p < d).
  double translation = 1.0;
  /// Seed and length of the coupling walk (p = d).
  std::uint64_t seed = 0;
  std::size_t coupling_steps = 64;
};

/// A measure different from Z at empirical sliced distance zero.
/// Throws SupercriticalRegime for p > d and DegenerateInstance for p = d with
/// a single atom.
DiscreteMeasure null_sw_witness(const DiscreteMeasure& Z,
                                const DirectionSet& dirs,
                                const NullWitnessOptions& options = {});

}  // namespace projrecon
