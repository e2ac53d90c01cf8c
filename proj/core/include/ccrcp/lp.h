#ifndef CCRCP_LP_H_
#define CCRCP_LP_H_

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ccrcp/simplex.h"

namespace ccrcp {

// Axis-aligned box lower <= x <= upper with finite bounds.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  // Throws InvalidArgument unless bounds are finite with lower < upper.
  void Validate() const;
  static Box Uniform(int dim, double lower, double upper);
};

enum class LpStatus { kOptimal, kInfeasible };

// min c'x  subject to  g_r' x <= h_r (r = 0, 1, ...),  x in box.
//
// Solved as the primal simplex on the dual standard form
//
//   min  sum_j b_j y_j   s.t.  sum_j a_j y_j = -c,  y >= 0,
//
// whose columns are the rows a_j of the primal (the box contributes +-e_k).
// The box rows give a dual-feasible starting basis for every objective, and
// the simplex multipliers of the dual are the primal vertex. Adding a row adds
// a dual column, so cutting-plane loops re-optimize from the current basis.
class BoxedLp {
 public:
  explicit BoxedLp(Box box);

  int dim() const { return box_.dim(); }
  int num_rows() const { return num_rows_; }
  const Box& box() const { return box_; }

  void Reserve(int rows);
  // Returns the row number.
  int AddRow(const Eigen::Ref<const Eigen::VectorXd>& normal, double rhs);

  // Cold start from the box basis.
  LpStatus Minimize(const Eigen::VectorXd& objective,
                    const SimplexOptions& options = {});
  // Warm start after AddRow() with the objective of the last Minimize().
  LpStatus Reoptimize(const SimplexOptions& options = {});

  const Eigen::VectorXd& x() const { return x_; }
  double value() const { return objective_.dot(x_); }
  // Nonzero dual multipliers of added rows, as (row, multiplier), ascending.
  std::vector<std::pair<int, double>> RowMultipliers() const;
  // True when every basic dual is strictly positive, which pins x to the
  // intersection of d linearly independent tight rows.
  bool HasUniqueOptimum(double tol = 1e-9) const;
  // Smallest uniform relaxation of the added rows that made the problem
  // feasible; 0 unless the phase-1 path ran.
  double phase1_violation() const { return phase1_violation_; }
  int iterations() const { return iterations_; }

 private:
  LpStatus Finish(SimplexStatus status, const SimplexOptions& options);
  std::vector<int> BoxBasis() const;
  // Optimal value of min s s.t. g_r' x - s <= h_r, x in box, s >= 0.
  double Phase1(const SimplexOptions& options) const;

  Box box_;
  StandardFormSimplex simplex_;
  Eigen::VectorXd objective_;
  std::vector<double> rhs_;
  int num_rows_ = 0;
  Eigen::VectorXd x_;
  double phase1_violation_ = 0.0;
  int iterations_ = 0;
  bool relaxed_ = false;
};

// Cutting-plane hook: returns a row (normal, rhs) violated by x, if any.
using CutOracle = std::function<std::optional<std::pair<Eigen::VectorXd, double>>(
    const Eigen::VectorXd& x)>;

struct LexicographicResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double value = 0.0;
  // Dual multipliers of the first stage (the real objective).
  std::vector<std::pair<int, double>> multipliers;
  // 1 when the first stage already had a unique optimum.
  int stages = 0;
  int cuts = 0;
};

struct LexicographicOptions {
  SimplexOptions simplex;
  int max_cuts = 5000;
};

// Minimizes `objective` over the LP, then breaks ties by lexicographically
// minimizing x_1, x_2, ... over the optimal face, one refinement solve per
// coordinate, stopping early once a stage has a unique optimum. When `cuts`
// is given, each stage iterates until the oracle has nothing to add.
// Throws NumericalFailure when max_cuts is exceeded.
LexicographicResult SolveLexicographic(BoxedLp& lp,
                                       const Eigen::VectorXd& objective,
                                       const CutOracle& cuts = nullptr,
                                       const LexicographicOptions& options = {});

}  // namespace ccrcp

#endif  // CCRCP_LP_H_
