#ifndef CCRCP_SOLVE_H_
#define CCRCP_SOLVE_H_

#include <limits>
#include <map>

#include <Eigen/Core>

#include "ccrcp/index_set.h"
#include "ccrcp/program.h"
#include "ccrcp/tolerances.h"

namespace ccrcp {

enum class SolveStatus { kFeasible, kInfeasible };

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  // Empty when infeasible.
  Eigen::VectorXd x_star;
  double j_star = std::numeric_limits<double>::infinity();
  IndexSet active;
  // Nonzero multipliers by pool index; absent entries are zero. For
  // ellipsoids these are the barycentric MVEE weights.
  std::map<Index, double> multipliers;

  bool feasible() const { return status == SolveStatus::kFeasible; }
  double Multiplier(Index j) const {
    auto it = multipliers.find(j);
    return it == multipliers.end() ? 0.0 : it->second;
  }
};

Solution InfeasibleSolution();

// Unique minimizer of the program under the lexicographic tie-break. The
// result depends only on the set of indices, and the final point is
// recomputed from the active set alone, so any two index sets with the same
// active set produce bit-identical x_star and j_star.
//
// Throws NumericalFailure when an inner solver exceeds its iteration cap and
// DegenerateInput for ellipsoid programs whose points are not
// full-dimensional.
Solution Solve(const ConvexProgram& program);

// {j in C : |f_j(x*)| <= tol}; empty for an infeasible solution.
IndexSet ActiveSet(const ConvexProgram& program, const Solution& solution,
                   double tol = kActiveTol);

// f_j(x) for j = program.indices()[k], in index order. Same values as
// ConvexProgram::Evaluate, computed in bulk.
Eigen::VectorXd ConstraintValues(const ConvexProgram& program,
                                 const Eigen::VectorXd& x);

// Largest f_j(x) over the program's constraints (-inf for an empty set).
double MaxViolation(const ConvexProgram& program, const Eigen::VectorXd& x);

}  // namespace ccrcp

#endif  // CCRCP_SOLVE_H_
