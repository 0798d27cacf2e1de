#include "projrecon/linear_program.hpp"

#include <cmath>
#include <limits>

#include "projrecon/error.hpp"

namespace projrecon {

namespace {
constexpr double kOptimalityTol = 1e-11;
constexpr int kDegenerateStreakForBland = 32;
constexpr long kMaxIterations = 1'000'000;
}  // namespace

void EqualityLp::pivot(Tableau& t, Eigen::Index row, Eigen::Index col) {
  t.body.row(row) /= t.body(row, col);
  for (Eigen::Index i = 0; i < t.body.rows(); ++i) {
    if (i == row) continue;
    const double factor = t.body(i, col);
    if (factor != 0.0) t.body.row(i) -= factor * t.body.row(row);
  }
  t.basis[static_cast<std::size_t>(row)] = col;
}

bool EqualityLp::run_simplex(Tableau& t, Eigen::VectorXd& reduced,
                             const std::vector<bool>& blocked) const {
  const Eigen::Index rows = t.body.rows();
  const Eigen::Index cols = t.body.cols() - 1;
  int degenerate_streak = 0;
  for (long iter = 0; iter < kMaxIterations; ++iter) {
    const bool bland = degenerate_streak >= kDegenerateStreakForBland;
    Eigen::Index enter = -1;
    double best = -kOptimalityTol;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (blocked[static_cast<std::size_t>(j)]) continue;
      if (reduced[j] < best) {
        enter = j;
        if (bland) break;
        best = reduced[j];
      }
    }
    if (enter < 0) return true;

    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double a = t.body(i, enter);
      if (a <= pivot_tol_) continue;
      const double ratio = std::max(t.body(i, cols), 0.0) / a;
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && leave >= 0 &&
           t.basis[static_cast<std::size_t>(i)] <
               t.basis[static_cast<std::size_t>(leave)])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) return false;

    degenerate_streak = best_ratio <= 1e-15 ? degenerate_streak + 1 : 0;
    pivot(t, leave, enter);
    const double factor = reduced[enter];
    reduced -= factor * t.body.row(leave).transpose();
    reduced[enter] = 0.0;
  }
  throw Error(ErrorCode::Infeasible, "simplex iteration limit reached");
}

EqualityLp::EqualityLp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       double feasibility_tol)
    : num_vars_(A.cols()) {
  if (A.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "constraint matrix and right-hand side disagree");
  }
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  Tableau t;
  t.body = Eigen::MatrixXd::Zero(m, n + m + 1);
  t.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    t.body.row(i).head(n) = sign * A.row(i);
    t.body(i, n + i) = 1.0;
    t.body(i, n + m) = sign * b[i];
    t.basis[static_cast<std::size_t>(i)] = n + i;
  }

  // Phase one: minimize the sum of artificials.
  Eigen::VectorXd reduced = Eigen::VectorXd::Zero(n + m + 1);
  reduced.segment(n, m).setOnes();
  for (Eigen::Index i = 0; i < m; ++i) reduced -= t.body.row(i).transpose();
  std::vector<bool> blocked(static_cast<std::size_t>(n + m), false);
  run_simplex(t, reduced, blocked);

  infeasibility_ = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] >= n) {
      infeasibility_ += std::abs(t.body(i, n + m));
    }
  }
  feasible_ = infeasibility_ <= feasibility_tol;
  if (!feasible_) return;

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are linearly dependent and dropped.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] >= n) {
      Eigen::Index col = -1;
      double best = pivot_tol_ * 1e3;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(t.body(i, j)) > best) {
          best = std::abs(t.body(i, j));
          col = j;
        }
      }
      if (col < 0) continue;
      pivot(t, i, col);
    }
    keep.push_back(i);
  }

  start_.body.resize(static_cast<Eigen::Index>(keep.size()), n + 1);
  start_.basis.clear();
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    start_.body.row(r).head(n) = t.body.row(keep[k]).head(n);
    start_.body(r, n) = std::max(t.body(keep[k], n + m), 0.0);
    start_.basis.push_back(t.basis[static_cast<std::size_t>(keep[k])]);
  }
}

Eigen::VectorXd EqualityLp::feasible_point() const {
  if (!feasible_) return {};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(num_vars_);
  for (std::size_t i = 0; i < start_.basis.size(); ++i) {
    x[start_.basis[i]] = start_.body(static_cast<Eigen::Index>(i), num_vars_);
  }
  return x;
}

LpSolution EqualityLp::minimize(const Eigen::VectorXd& cost) const {
  if (cost.size() != num_vars_) {
    throw Error(ErrorCode::DimensionMismatch, "cost vector has wrong length");
  }
  LpSolution out;
  if (!feasible_) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  Tableau t = start_;
  Eigen::VectorXd reduced = Eigen::VectorXd::Zero(num_vars_ + 1);
  reduced.head(num_vars_) = cost;
  for (std::size_t i = 0; i < t.basis.size(); ++i) {
    reduced -= cost[t.basis[i]] *
               t.body.row(static_cast<Eigen::Index>(i)).transpose();
  }
  const std::vector<bool> blocked(static_cast<std::size_t>(num_vars_), false);
  if (!run_simplex(t, reduced, blocked)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x = Eigen::VectorXd::Zero(num_vars_);
  for (std::size_t i = 0; i < t.basis.size(); ++i) {
    out.x[t.basis[i]] =
        std::max(t.body(static_cast<Eigen::Index>(i), num_vars_), 0.0);
  }
  out.objective = cost.dot(out.x);
  return out;
}

LpSolution EqualityLp::maximize(const Eigen::VectorXd& cost) const {
  LpSolution out = minimize(-cost);
  out.objective = -out.objective;
  return out;
}

}  // namespace projrecon
