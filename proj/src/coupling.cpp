#include "projrecon/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "projrecon/error.hpp"
#include "projrecon/linear_program.hpp"
#include "projrecon/random.hpp"

namespace projrecon {

namespace {

std::size_t tensor_size(std::uint32_t n, std::uint32_t p) {
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < p; ++i) {
    if (size > kCouplingBudget / std::max<std::uint32_t>(n, 1)) {
      throw Error(ErrorCode::TupleBudgetExceeded,
                  "coupling tensor larger than the dense budget");
    }
    size *= n;
  }
  return static_cast<std::size_t>(size);
}

void check_weights(const Eigen::VectorXd& b, std::uint32_t p) {
  if (b.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty weights");
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  if ((b.array() < 0.0).any() || std::abs(b.sum() - 1.0) > kWeightSumTol) {
    throw Error(ErrorCode::InvalidArgument, "b is not a probability vector");
  }
}

}  // namespace

CouplingTensor::CouplingTensor(std::uint32_t n, std::uint32_t p,
                               std::vector<double> entries)
    : n_(n), p_(p), entries_(std::move(entries)) {
  if (n_ == 0 || p_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "coupling needs n, p >= 1");
  }
  if (entries_.size() != tensor_size(n_, p_)) {
    throw Error(ErrorCode::DimensionMismatch,
                "coupling has " + std::to_string(entries_.size()) +
                    " entries, expected n^p");
  }
  for (const double e : entries_) {
    if (!(e >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "negative coupling entry");
    }
  }
}

double CouplingTensor::at(const IndexTuple& tuple) const {
  return entries_[static_cast<std::size_t>(tuple_rank(tuple, n_))];
}

IndexTuple CouplingTensor::tuple_at(std::size_t flat) const {
  IndexTuple tuple(p_);
  for (std::uint32_t i = p_; i-- > 0;) {
    tuple[i] = static_cast<std::uint32_t>(flat % n_);
    flat /= n_;
  }
  return tuple;
}

Eigen::VectorXd CouplingTensor::marginal(std::uint32_t axis) const {
  if (axis >= p_) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  // Stride of `axis` in row-major order.
  std::size_t stride = 1;
  for (std::uint32_t i = axis + 1; i < p_; ++i) stride *= n_;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n_);
  for (std::size_t flat = 0; flat < entries_.size(); ++flat) {
    m[static_cast<Eigen::Index>((flat / stride) % n_)] += entries_[flat];
  }
  return m;
}

double CouplingTensor::marginal_residual(const Eigen::VectorXd& b) const {
  if (b.size() != static_cast<Eigen::Index>(n_)) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector has wrong length");
  }
  double worst = 0.0;
  for (std::uint32_t axis = 0; axis < p_; ++axis) {
    worst = std::max(worst, (marginal(axis) - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

CouplingTensor independent_coupling(const Eigen::VectorXd& b, std::uint32_t p) {
  check_weights(b, p);
  const auto n = static_cast<std::uint32_t>(b.size());
  std::vector<double> entries(tensor_size(n, p), 1.0);
  std::size_t stride = entries.size();
  for (std::uint32_t axis = 0; axis < p; ++axis) {
    stride /= n;
    for (std::size_t flat = 0; flat < entries.size(); ++flat) {
      entries[flat] *= b[static_cast<Eigen::Index>((flat / stride) % n)];
    }
  }
  return CouplingTensor(n, p, std::move(entries));
}

CouplingTensor diagonal_coupling(const Eigen::VectorXd& b, std::uint32_t p) {
  check_weights(b, p);
  const auto n = static_cast<std::uint32_t>(b.size());
  std::vector<double> entries(tensor_size(n, p), 0.0);
  // Flat index of (l, ..., l) is l * (n^{p-1} + ... + n + 1).
  std::size_t diagonal_step = 0;
  for (std::uint32_t i = 0; i < p; ++i) diagonal_step = diagonal_step * n + 1;
  for (std::uint32_t l = 0; l < n; ++l) entries[l * diagonal_step] = b[l];
  return CouplingTensor(n, p, std::move(entries));
}

CouplingTensor sample_coupling(const Eigen::VectorXd& b, std::uint32_t p,
                               std::uint64_t seed, std::size_t steps) {
  CouplingTensor coupling = independent_coupling(b, p);
  const auto n = coupling.n();
  if (n < 2 || p < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "coupling exploration needs n >= 2 and p >= 2");
  }
  Rng rng(seed);
  auto& a = coupling.mutable_entries();
  IndexTuple tuple(p);
  for (std::size_t step = 0; step < steps; ++step) {
    const auto axis_i = static_cast<std::uint32_t>(rng.index(p));
    auto axis_j = static_cast<std::uint32_t>(rng.index(p - 1));
    if (axis_j >= axis_i) ++axis_j;
    const auto k1 = static_cast<std::uint32_t>(rng.index(n));
    auto k2 = static_cast<std::uint32_t>(rng.index(n - 1));
    if (k2 >= k1) ++k2;
    const auto m1 = static_cast<std::uint32_t>(rng.index(n));
    auto m2 = static_cast<std::uint32_t>(rng.index(n - 1));
    if (m2 >= m1) ++m2;
    for (auto& l : tuple) l = static_cast<std::uint32_t>(rng.index(n));

    auto flat = [&](std::uint32_t ki, std::uint32_t kj) {
      tuple[axis_i] = ki;
      tuple[axis_j] = kj;
      return static_cast<std::size_t>(tuple_rank(tuple, n));
    };
    const std::size_t e11 = flat(k1, m1);
    const std::size_t e22 = flat(k2, m2);
    const std::size_t e12 = flat(k1, m2);
    const std::size_t e21 = flat(k2, m1);

    // +eps on (k1,m1),(k2,m2) and -eps on (k1,m2),(k2,m1) leaves every axis
    // marginal unchanged.
    const double lo = -std::min(a[e11], a[e22]);
    const double hi = std::min(a[e12], a[e21]);
    const double eps = lo + rng.uniform() * (hi - lo);
    a[e11] = std::max(a[e11] + eps, 0.0);
    a[e22] = std::max(a[e22] + eps, 0.0);
    a[e12] = std::max(a[e12] - eps, 0.0);
    a[e21] = std::max(a[e21] - eps, 0.0);
  }
  return coupling;
}

DiscreteMeasure coupling_to_measure(const CouplingTensor& coupling,
                                    const CandidateSupport& support,
                                    double dedup_tol) {
  if (!support.finite() || support.points.empty()) {
    throw Error(ErrorCode::InvalidArgument, "support must be a finite grid");
  }
  const std::size_t size = coupling.size();
  std::vector<std::ptrdiff_t> owner(size, -1);
  for (std::size_t k = 0; k < support.points.size(); ++k) {
    for (const auto& g : support.points[k].generators) {
      if (g.size() != coupling.p()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "support tuples do not match the coupling order");
      }
      owner[static_cast<std::size_t>(tuple_rank(g, coupling.n()))] =
          static_cast<std::ptrdiff_t>(k);
    }
  }
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(support.points.size()));
  for (std::size_t flat = 0; flat < size; ++flat) {
    if (owner[flat] < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "support is missing a tuple of the coupling grid");
    }
    mass[owner[flat]] += coupling.entries()[flat];
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < mass.size(); ++k) {
    if (mass[k] > 0.0) kept.push_back(k);
  }
  const Eigen::Index dim = support.points.front().location.size();
  Eigen::MatrixXd pts(dim, static_cast<Eigen::Index>(kept.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    pts.col(static_cast<Eigen::Index>(k)) =
        support.points[static_cast<std::size_t>(kept[k])].location;
    w[static_cast<Eigen::Index>(k)] = mass[kept[k]];
  }
  return DiscreteMeasure(std::move(pts), std::move(w), dedup_tol);
}

WeightUniqueness weight_polytope_uniqueness(const CandidateSupport& candidates,
                                            const DiscreteMeasure& Z,
                                            const ProjectionStack& stack,
                                            const ToleranceConfig& tols) {
  if (!candidates.finite()) {
    throw Error(ErrorCode::InvalidArgument,
                "weight analysis needs a finite candidate support");
  }
  if (Z.dim() != stack.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measure and stack disagree");
  }
  const auto m = static_cast<Eigen::Index>(candidates.points.size());
  const std::size_t p = stack.num_blocks();

  // atom_of[i][l]: index of the atom of P_i#gamma_Z that receives z_l.
  std::vector<std::vector<Eigen::Index>> atom_of(p);
  std::vector<Eigen::VectorXd> atom_mass(p);
  Eigen::Index rows = 1;
  for (std::size_t i = 0; i < p; ++i) {
    const Eigen::MatrixXd images = stack.block(i) * Z.points();
    const auto roots = cluster_points(images, tols.merge_tol);
    std::vector<Eigen::Index> compact(roots.size(), -1);
    Eigen::Index atoms = 0;
    for (std::size_t l = 0; l < roots.size(); ++l) {
      if (roots[l] == static_cast<Eigen::Index>(l)) compact[l] = atoms++;
    }
    atom_of[i].resize(roots.size());
    atom_mass[i] = Eigen::VectorXd::Zero(atoms);
    for (std::size_t l = 0; l < roots.size(); ++l) {
      atom_of[i][l] = compact[static_cast<std::size_t>(roots[l])];
      atom_mass[i][atom_of[i][l]] += Z.weight(static_cast<Eigen::Index>(l));
    }
    rows += atoms;
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd c(rows);
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < p; ++i) {
    c.segment(offset, atom_mass[i].size()) = atom_mass[i];
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& tuple = candidates.points[static_cast<std::size_t>(j)]
                              .generators.front();
      A(offset + atom_of[i][tuple[i]], j) = 1.0;
    }
    offset += atom_mass[i].size();
  }
  A.row(rows - 1).setOnes();
  c[rows - 1] = 1.0;

  const EqualityLp lp(A, c, tols.feasibility_tol);
  if (!lp.feasible()) {
    throw Error(ErrorCode::Infeasible,
                "marginal constraints of gamma_Z are infeasible on the "
                "candidate support (infeasibility " +
                    std::to_string(lp.infeasibility()) + ")");
  }

  WeightUniqueness out;
  out.witness = lp.feasible_point();
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    unit[j] = 1.0;
    const auto lo = lp.minimize(unit);
    const auto hi = lp.maximize(unit);
    unit[j] = 0.0;
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal) {
      throw Error(ErrorCode::Infeasible, "coordinate bound problem failed");
    }
    out.max_spread = std::max(out.max_spread, hi.objective - lo.objective);
  }
  out.unique = out.max_spread <= tols.uniqueness_tol;
  return out;
}

}  // namespace projrecon
