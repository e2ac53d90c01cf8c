#include "ccrcp/lp.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ccrcp/errors.h"
#include "ccrcp/tolerances.h"

namespace ccrcp {

void Box::Validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw InvalidArgument("box bounds must be nonempty and of equal length");
  }
  if (!lower.allFinite() || !upper.allFinite()) {
    throw InvalidArgument("box bounds must be finite");
  }
  if ((upper - lower).minCoeff() <= 0.0) {
    throw InvalidArgument("box lower bound must be below upper bound");
  }
}

Box Box::Uniform(int dim, double lower, double upper) {
  return Box{Eigen::VectorXd::Constant(dim, lower),
             Eigen::VectorXd::Constant(dim, upper)};
}

BoxedLp::BoxedLp(Box box)
    : box_(std::move(box)), simplex_(Eigen::VectorXd::Zero(box_.dim())) {
  box_.Validate();
  const int d = dim();
  simplex_.Reserve(2 * d + 16);
  for (int k = 0; k < d; ++k) {
    simplex_.AddColumn(Eigen::VectorXd::Unit(d, k), box_.upper[k]);
  }
  for (int k = 0; k < d; ++k) {
    simplex_.AddColumn(-Eigen::VectorXd::Unit(d, k), -box_.lower[k]);
  }
  objective_ = Eigen::VectorXd::Zero(d);
  x_ = Eigen::VectorXd::Zero(d);
}

void BoxedLp::Reserve(int rows) {
  simplex_.Reserve(2 * dim() + rows);
  rhs_.reserve(rows);
}

int BoxedLp::AddRow(const Eigen::Ref<const Eigen::VectorXd>& normal,
                    double rhs) {
  if (normal.size() != dim()) throw InvalidArgument("LP row has wrong length");
  if (!normal.allFinite() || !std::isfinite(rhs)) {
    throw InvalidArgument("LP row has non-finite entry");
  }
  simplex_.AddColumn(normal, rhs);
  rhs_.push_back(rhs);
  return num_rows_++;
}

std::vector<int> BoxedLp::BoxBasis() const {
  const int d = dim();
  std::vector<int> basis(d);
  for (int k = 0; k < d; ++k) basis[k] = objective_[k] <= 0.0 ? k : d + k;
  std::sort(basis.begin(), basis.end());
  return basis;
}

LpStatus BoxedLp::Minimize(const Eigen::VectorXd& objective,
                           const SimplexOptions& options) {
  if (objective.size() != dim()) {
    throw InvalidArgument("LP objective has wrong length");
  }
  objective_ = objective;
  iterations_ = 0;
  phase1_violation_ = 0.0;
  if (relaxed_) {
    const int offset = 2 * dim();
    for (int r = 0; r < num_rows_; ++r) simplex_.SetCost(offset + r, rhs_[r]);
    relaxed_ = false;
  }
  simplex_.SetRhs(-objective_);
  simplex_.SetBasis(BoxBasis());
  return Finish(simplex_.Solve(options), options);
}

LpStatus BoxedLp::Reoptimize(const SimplexOptions& options) {
  return Finish(simplex_.Solve(options), options);
}

LpStatus BoxedLp::Finish(SimplexStatus status, const SimplexOptions& options) {
  iterations_ += simplex_.iterations();
  if (status == SimplexStatus::kIterationLimit) {
    throw NumericalFailure("LP iteration limit reached");
  }
  if (status == SimplexStatus::kUnbounded) {
    // The dual ray certifies primal infeasibility only up to rounding, so
    // measure the violation directly before giving up.
    const double violation = Phase1(options);
    phase1_violation_ = violation;
    if (violation > kFeasibilityTol) return LpStatus::kInfeasible;

    const double relax = violation + 1e-12;
    const int offset = 2 * dim();
    for (int r = 0; r < num_rows_; ++r) {
      simplex_.SetCost(offset + r, rhs_[r] + relax);
    }
    relaxed_ = true;
    simplex_.SetBasis(BoxBasis());
    status = simplex_.Solve(options);
    iterations_ += simplex_.iterations();
    if (status == SimplexStatus::kIterationLimit) {
      throw NumericalFailure("LP iteration limit reached");
    }
    if (status == SimplexStatus::kUnbounded) return LpStatus::kInfeasible;
  }
  simplex_.Canonicalize();
  x_ = simplex_.duals();
  return LpStatus::kOptimal;
}

double BoxedLp::Phase1(const SimplexOptions& options) const {
  const int d = dim();
  const double reach =
      box_.lower.cwiseAbs().cwiseMax(box_.upper.cwiseAbs()).maxCoeff();
  double smax = 1.0;
  const int offset = 2 * d;
  for (int r = 0; r < num_rows_; ++r) {
    smax = std::max(smax, std::abs(rhs_[r]) +
                              simplex_.column(offset + r).lpNorm<1>() * reach);
  }
  Box lifted;
  lifted.lower.resize(d + 1);
  lifted.upper.resize(d + 1);
  lifted.lower << box_.lower, 0.0;
  lifted.upper << box_.upper, 2.0 * smax;

  // Solved directly on the standard form: it is feasible by construction, so
  // an unbounded dual here means the numerics broke down.
  BoxedLp aux(lifted);
  aux.Reserve(num_rows_);
  Eigen::VectorXd row(d + 1);
  for (int r = 0; r < num_rows_; ++r) {
    row << simplex_.column(offset + r), -1.0;
    aux.AddRow(row, rhs_[r]);
  }
  aux.objective_ = Eigen::VectorXd::Unit(d + 1, d);
  aux.simplex_.SetRhs(-aux.objective_);
  aux.simplex_.SetBasis(aux.BoxBasis());
  if (aux.simplex_.Solve(options) != SimplexStatus::kOptimal) {
    throw NumericalFailure("phase-1 LP failed to reach an optimum");
  }
  aux.simplex_.Canonicalize();
  return std::max(0.0, aux.simplex_.duals()[d]);
}

std::vector<std::pair<int, double>> BoxedLp::RowMultipliers() const {
  std::vector<std::pair<int, double>> out;
  const int offset = 2 * dim();
  const auto& basis = simplex_.basis();
  const auto& values = simplex_.basic_values();
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
    if (basis[i] >= offset && values[i] > 0.0) {
      out.emplace_back(basis[i] - offset, values[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool BoxedLp::HasUniqueOptimum(double tol) const {
  const double scale =
      std::max(1.0, objective_.lpNorm<Eigen::Infinity>());
  return simplex_.basic_values().minCoeff() > tol * scale;
}

LexicographicResult SolveLexicographic(BoxedLp& lp,
                                       const Eigen::VectorXd& objective,
                                       const CutOracle& cuts,
                                       const LexicographicOptions& options) {
  LexicographicResult result;
  auto run_stage = [&](const Eigen::VectorXd& c) {
    LpStatus status = lp.Minimize(c, options.simplex);
    while (status == LpStatus::kOptimal && cuts) {
      auto cut = cuts(lp.x());
      if (!cut) break;
      if (++result.cuts > options.max_cuts) {
        throw NumericalFailure("cutting-plane loop did not converge");
      }
      const Eigen::VectorXd before = lp.x();
      lp.AddRow(cut->first, cut->second);
      status = lp.Reoptimize(options.simplex);
      // A cut violated by less than the simplex optimality tolerance cannot
      // move the point; the linearization is then as tight as it gets.
      if (status == LpStatus::kOptimal && lp.x() == before) break;
    }
    return status;
  };

  if (run_stage(objective) == LpStatus::kInfeasible) return result;
  result.status = LpStatus::kOptimal;
  result.multipliers = lp.RowMultipliers();
  result.stages = 1;

  Eigen::VectorXd fixed = objective;
  double fixed_value = lp.value();
  for (int k = 0; k < lp.dim() && !lp.HasUniqueOptimum(); ++k) {
    const double scale = std::max(fixed.lpNorm<Eigen::Infinity>(), 1e-300);
    const double bound = fixed_value / scale;
    lp.AddRow(fixed / scale, bound + 1e-12 * (1.0 + std::abs(bound)));
    const Eigen::VectorXd unit = Eigen::VectorXd::Unit(lp.dim(), k);
    if (run_stage(unit) == LpStatus::kInfeasible) {
      throw NumericalFailure("optimal face vanished during tie-breaking");
    }
    ++result.stages;
    fixed = unit;
    fixed_value = lp.x()[k];
  }
  result.x = lp.x();
  result.value = objective.dot(result.x);
  return result;
}

}  // namespace ccrcp
