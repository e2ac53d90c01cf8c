#ifndef CCRCP_CONSTRAINT_POOL_H_
#define CCRCP_CONSTRAINT_POOL_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "ccrcp/index_set.h"

namespace ccrcp {

enum class Family {
  // delta = [u; v] in R^{d+1}; constraint u'x + v <= 0.
  kLinearHalfspace,
  // delta = y in R^q; constraint (y - c)' W (y - c) <= 1 on the ellipsoid
  // (c, W).
  kEllipsoidMembership,
  // delta = [b; l] in R^{p+1} with label l in {-1, +1}; constraint
  // l (b' theta + rho) >= 1 - nu.
  kClassificationMargin,
};

std::string_view FamilyName(Family family);
Family ParseFamily(std::string_view name);

// Content-derived identifier of a constraint. Stable across pool orderings.
using ConstraintId = std::uint64_t;

struct Constraint {
  ConstraintId id = 0;
  Family family = Family::kLinearHalfspace;
  Eigen::VectorXd delta;
};

// An immutable, canonically ordered collection of sampled constraints of one
// family. Positions (Index) follow ascending id, so two pools built from the
// same realizations in different orders are identical.
class ConstraintPool {
 public:
  // Throws InvalidArgument on empty dimension, non-finite data, mismatched
  // lengths or labels outside {-1, +1}.
  static std::shared_ptr<const ConstraintPool> Create(
      Family family, int dim, const std::vector<Eigen::VectorXd>& deltas);

  Family family() const { return family_; }
  // Length of every delta vector.
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(constraints_.size()); }
  // Dimension of the decision variable of programs over this pool.
  int decision_dim() const;

  const Constraint& operator[](Index i) const { return constraints_[i]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::optional<Index> Find(ConstraintId id) const;
  IndexSet AllIndices() const;

  // Linear families only: the row g with g' [x; 1] <= 0 equivalent to the
  // constraint, scaled to unit infinity norm. Length decision_dim() + 1.
  Eigen::Ref<const Eigen::VectorXd> Row(Index i) const {
    return rows_.col(i);
  }
  // Infinity norm that Row(i) was divided by.
  double RowScale(Index i) const { return row_scale_[i]; }

  // Coordinates in which the constraint is convex in the uncertain data: the
  // delta itself, except for classification where the point is [l b; l].
  Eigen::Ref<const Eigen::VectorXd> HullPoint(Index i) const {
    return hull_points_.col(i);
  }
  const Eigen::MatrixXd& HullPoints() const { return hull_points_; }

 private:
  ConstraintPool() = default;

  Family family_ = Family::kLinearHalfspace;
  int dim_ = 0;
  std::vector<Constraint> constraints_;
  std::unordered_map<ConstraintId, Index> by_id_;
  Eigen::MatrixXd rows_;         // (decision_dim + 1) x size, linear families
  Eigen::VectorXd row_scale_;
  Eigen::MatrixXd hull_points_;  // dim x size
};

using PoolPtr = std::shared_ptr<const ConstraintPool>;

// FNV-1a over the family tag and the raw bytes of delta (with -0.0 folded
// into 0.0), re-salted on collision.
ConstraintId HashDelta(Family family, const Eigen::VectorXd& delta,
                       std::uint64_t salt = 0);

}  // namespace ccrcp

#endif  // CCRCP_CONSTRAINT_POOL_H_
