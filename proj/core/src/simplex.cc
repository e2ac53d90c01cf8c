#include "ccrcp/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ccrcp/errors.h"

namespace ccrcp {

StandardFormSimplex::StandardFormSimplex(Eigen::VectorXd rhs)
    : rhs_(std::move(rhs)) {
  columns_.resize(rhs_.size(), 0);
}

void StandardFormSimplex::Reserve(int cols) {
  if (cols <= columns_.cols()) return;
  columns_.conservativeResize(Eigen::NoChange, cols);
  costs_.conservativeResize(cols);
}

int StandardFormSimplex::AddColumn(
    const Eigen::Ref<const Eigen::VectorXd>& column, double cost) {
  if (column.size() != rhs_.size()) {
    throw InvalidArgument("simplex column has wrong length");
  }
  if (num_cols_ == columns_.cols()) {
    Reserve(std::max<int>(16, 2 * static_cast<int>(columns_.cols())));
  }
  columns_.col(num_cols_) = column;
  costs_[num_cols_] = cost;
  return num_cols_++;
}

void StandardFormSimplex::SetBasis(std::vector<int> basis) {
  if (static_cast<int>(basis.size()) != rows()) {
    throw InvalidArgument("basis size must equal the number of rows");
  }
  basis_ = std::move(basis);
}

void StandardFormSimplex::SetRhs(Eigen::VectorXd rhs) {
  if (rhs.size() != rhs_.size()) {
    throw InvalidArgument("simplex rhs has wrong length");
  }
  rhs_ = std::move(rhs);
}

double StandardFormSimplex::objective() const {
  double value = 0.0;
  for (int i = 0; i < rows(); ++i) {
    value += costs_[basis_[i]] * basic_values_[i];
  }
  return value;
}

void StandardFormSimplex::Factor() {
  const int m = rows();
  Eigen::MatrixXd basis_matrix(m, m);
  Eigen::VectorXd basic_costs(m);
  for (int i = 0; i < m; ++i) {
    basis_matrix.col(i) = columns_.col(basis_[i]);
    basic_costs[i] = costs_[basis_[i]];
  }
  lu_.compute(basis_matrix);
  if (!lu_.isInvertible()) {
    throw NumericalFailure("simplex basis became singular");
  }
  basic_values_ = lu_.solve(rhs_);
  for (int i = 0; i < m; ++i) {
    if (basic_values_[i] < 0.0) basic_values_[i] = 0.0;
  }
  duals_ = lu_.transpose().solve(basic_costs);
}

void StandardFormSimplex::Canonicalize() {
  std::sort(basis_.begin(), basis_.end());
  Factor();
}

SimplexStatus StandardFormSimplex::Solve(const SimplexOptions& options) {
  const int n = num_cols_;
  const int m = rows();
  iterations_ = 0;
  unbounded_column_ = -1;

  std::vector<char> in_basis(n, 0);
  for (int j : basis_) in_basis[j] = 1;

  Eigen::VectorXd reduced(n);
  int degenerate_run = 0;
  bool bland = false;

  while (true) {
    Factor();
    reduced.noalias() =
        costs_.head(n) - columns_.leftCols(n).transpose() * duals_;

    int entering = -1;
    if (bland) {
      for (int j = 0; j < n; ++j) {
        if (!in_basis[j] && reduced[j] < -options.optimality_tol) {
          entering = j;
          break;
        }
      }
    } else {
      double best = -options.optimality_tol;
      for (int j = 0; j < n; ++j) {
        if (!in_basis[j] && reduced[j] < best) {
          best = reduced[j];
          entering = j;
        }
      }
    }
    if (entering < 0) return SimplexStatus::kOptimal;
    if (iterations_ >= options.max_iterations) {
      return SimplexStatus::kIterationLimit;
    }
    ++iterations_;

    const Eigen::VectorXd direction = lu_.solve(columns_.col(entering));
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (direction[i] <= options.pivot_tol) continue;
      const double ratio = basic_values_[i] / direction[i];
      if (leave < 0) {
        leave = i;
        best_ratio = ratio;
        continue;
      }
      const double slack = 1e-12 * std::max(1.0, std::abs(best_ratio));
      if (ratio < best_ratio - slack) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + slack) {
        // Tie: Bland takes the smallest column index, otherwise the largest
        // pivot.
        const bool take = bland ? basis_[i] < basis_[leave]
                                : direction[i] > direction[leave];
        if (take) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leave < 0) {
      unbounded_column_ = entering;
      return SimplexStatus::kUnbounded;
    }

    if (best_ratio <= 1e-13) {
      if (++degenerate_run >= options.degenerate_switch) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    in_basis[basis_[leave]] = 0;
    in_basis[entering] = 1;
    basis_[leave] = entering;
  }
}

}  // namespace ccrcp
