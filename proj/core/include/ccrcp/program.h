#ifndef CCRCP_PROGRAM_H_
#define CCRCP_PROGRAM_H_

#include <Eigen/Core>

#include "ccrcp/constraint_pool.h"
#include "ccrcp/index_set.h"
#include "ccrcp/lp.h"

namespace ccrcp {

// Half-width of the default box for classification variables.
inline constexpr double kClassificationBound = 1e3;
// Half-width of the nominal box for ellipsoid variables. The MVEE solver does
// not consult it; it only keeps the domain compact.
inline constexpr double kEllipsoidBound = 1e6;

// min a'x over x in the box subject to f_j(x) <= 0 for j in the index set.
// Immutable; copies share the pool.
class ConvexProgram {
 public:
  // Throws InvalidArgument on a zero or wrongly sized objective, an invalid
  // box, or indices outside the pool.
  ConvexProgram(PoolPtr pool, Eigen::VectorXd objective, Box domain,
                IndexSet indices);

  // Objective and domain used throughout the experiments for the pool's
  // family: a = -1 with box [-10, 10]^d for linear programs, minimizing
  // log det(W^{-1}) for ellipsoids, and minimizing phi = |theta| + nu for
  // classification.
  static ConvexProgram Default(PoolPtr pool, IndexSet indices);

  ConvexProgram WithIndices(IndexSet indices) const;

  const ConstraintPool& pool() const { return *pool_; }
  const PoolPtr& pool_ptr() const { return pool_; }
  Family family() const { return pool_->family(); }
  int dim() const { return static_cast<int>(objective_.size()); }
  const Eigen::VectorXd& objective() const { return objective_; }
  const Box& domain() const { return domain_; }
  // Sorted and duplicate-free.
  const IndexSet& indices() const { return indices_; }

  // f_j(x). Linear rows are evaluated in their unit-infinity-norm scaling.
  double Evaluate(Index j, const Eigen::VectorXd& x) const;

 private:
  PoolPtr pool_;
  Eigen::VectorXd objective_;
  Box domain_;
  IndexSet indices_;
};

Eigen::VectorXd DefaultObjective(const ConstraintPool& pool);
Box DefaultDomain(const ConstraintPool& pool);

// Ellipsoid decision vector [center; upper triangle of W row by row; J].
Eigen::VectorXd PackEllipsoid(const Eigen::VectorXd& center,
                              const Eigen::MatrixXd& shape, double value);
void UnpackEllipsoid(const Eigen::VectorXd& x, int q, Eigen::VectorXd* center,
                     Eigen::MatrixXd* shape);

}  // namespace ccrcp

#endif  // CCRCP_PROGRAM_H_
