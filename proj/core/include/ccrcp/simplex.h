#ifndef CCRCP_SIMPLEX_H_
#define CCRCP_SIMPLEX_H_

#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

namespace ccrcp {

enum class SimplexStatus { kOptimal, kUnbounded, kIterationLimit };

struct SimplexOptions {
  // A reduced cost below -optimality_tol makes a column eligible to enter.
  double optimality_tol = 1e-10;
  // Smallest direction entry accepted as a ratio-test pivot.
  double pivot_tol = 1e-9;
  int max_iterations = 50000;
  // Consecutive degenerate pivots after which pricing switches from Dantzig
  // to Bland's rule. Bland stays on until a pivot makes strict progress.
  int degenerate_switch = 30;
};

// Primal revised simplex for
//
//   min c'z  subject to  E z = r,  z >= 0
//
// with few rows and many columns, started from a caller-supplied feasible
// basis. Columns can be appended between solves; the current basis stays
// feasible, so appending and re-solving is a warm start.
class StandardFormSimplex {
 public:
  explicit StandardFormSimplex(Eigen::VectorXd rhs);

  int rows() const { return static_cast<int>(rhs_.size()); }
  int cols() const { return num_cols_; }

  // Returns the new column index.
  int AddColumn(const Eigen::Ref<const Eigen::VectorXd>& column, double cost);
  void Reserve(int cols);

  // The basis must be nonsingular and primal feasible for the current rhs.
  void SetBasis(std::vector<int> basis);
  void SetRhs(Eigen::VectorXd rhs);
  void SetCost(int j, double cost) { costs_[j] = cost; }

  // Sorts the basis by column index and recomputes the basic solution and
  // multipliers, so that equal bases give bit-identical results regardless of
  // the pivoting path that reached them.
  void Canonicalize();

  SimplexStatus Solve(const SimplexOptions& options = {});

  const std::vector<int>& basis() const { return basis_; }
  // Values of the basic variables, aligned with basis().
  const Eigen::VectorXd& basic_values() const { return basic_values_; }
  // Simplex multipliers pi with B' pi = c_B.
  const Eigen::VectorXd& duals() const { return duals_; }
  double objective() const;
  // Column to enter when Solve() reported kUnbounded.
  int unbounded_column() const { return unbounded_column_; }
  int iterations() const { return iterations_; }

  Eigen::Ref<const Eigen::VectorXd> column(int j) const {
    return columns_.col(j);
  }
  double cost(int j) const { return costs_[j]; }

 private:
  void Factor();

  Eigen::VectorXd rhs_;
  Eigen::MatrixXd columns_;
  Eigen::VectorXd costs_;
  int num_cols_ = 0;

  std::vector<int> basis_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd basic_values_;
  Eigen::VectorXd duals_;
  int unbounded_column_ = -1;
  int iterations_ = 0;
};

}  // namespace ccrcp

#endif  // CCRCP_SIMPLEX_H_
