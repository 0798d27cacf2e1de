#pragma once

#include <vector>

#include <Eigen/Dense>

namespace projrecon {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// Standard-form polytope {x : A x = b, x >= 0} solved by a dense two-phase
/// tableau simplex. Phase one runs once at construction; every objective then
/// restarts phase two from the stored feasible basis.
class EqualityLp {
 public:
  EqualityLp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
             double feasibility_tol = 1e-9);

  bool feasible() const { return feasible_; }
  /// Sum of artificial variables left by phase one.
  double infeasibility() const { return infeasibility_; }
  Eigen::Index num_variables() const { return num_vars_; }

  /// Basic feasible point found by phase one (empty when infeasible).
  Eigen::VectorXd feasible_point() const;

  LpSolution minimize(const Eigen::VectorXd& cost) const;
  LpSolution maximize(const Eigen::VectorXd& cost) const;

 private:
  struct Tableau {
    Eigen::MatrixXd body;  // rows x (cols + 1); last column is the rhs
    std::vector<Eigen::Index> basis;
  };

  static void pivot(Tableau& t, Eigen::Index row, Eigen::Index col);
  /// Minimizes the objective whose reduced costs are in `reduced` (length
  /// cols + 1, last entry = -objective). Columns flagged in `blocked` never
  /// enter. Returns false when unbounded.
  bool run_simplex(Tableau& t, Eigen::VectorXd& reduced,
                   const std::vector<bool>& blocked) const;

  Eigen::Index num_vars_ = 0;
  bool feasible_ = false;
  double infeasibility_ = 0.0;
  double pivot_tol_ = 1e-11;
  Tableau start_;
};

}  // namespace projrecon
