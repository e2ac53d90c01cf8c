#ifndef CCRCP_HULL_H_
#define CCRCP_HULL_H_

#include <unordered_map>

#include <Eigen/Core>

#include "ccrcp/constraint_pool.h"
#include "ccrcp/index_set.h"
#include "ccrcp/tolerances.h"

namespace ccrcp {

struct VertexSet {
  IndexSet indices;  // column positions, ascending
  int dim = 0;
};

// Directions w under which a point was found to be the strict maximizer of
// w'x. A later call over a different point set re-checks the direction and
// skips the LP when it still certifies the point.
using HullHints = std::unordered_map<Index, Eigen::VectorXd>;

// Vertices of the convex hull of the columns of `points` (l x m). A point
// within L1 distance kHullTol of the hull of the other points is not a
// vertex, and among coincident points only the lowest column can be one.
// Uses a monotone chain for l = 2 and an LP-based frame algorithm otherwise.
VertexSet ComputeVertexSet(const Eigen::MatrixXd& points);

// Same result, always through the LP-based algorithm (any l).
VertexSet ComputeVertexSetLp(const Eigen::MatrixXd& points);

// Andrew's monotone chain; `points` must have two rows.
IndexSet PlanarHull(const Eigen::MatrixXd& points);

// False iff `point` lies within L1 distance kHullTol of conv(others).
// An empty `others` makes any point a vertex.
bool IsVertex(const Eigen::VectorXd& point, const Eigen::MatrixXd& others);

// L1 distance from `point` to conv(columns of others); +inf if empty.
double HullDistance(const Eigen::VectorXd& point, const Eigen::MatrixXd& others);

// vert over the pool's hull points restricted to `subset`. Returns pool
// indices in ascending order.
IndexSet VertexSubset(const ConstraintPool& pool, const IndexSet& subset,
                      HullHints* hints = nullptr);

}  // namespace ccrcp

#endif  // CCRCP_HULL_H_
