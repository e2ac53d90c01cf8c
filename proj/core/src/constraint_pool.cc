#include "ccrcp/constraint_pool.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_set>

#include "ccrcp/errors.h"

namespace ccrcp {

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kLinearHalfspace:
      return "linear_halfspace";
    case Family::kEllipsoidMembership:
      return "ellipsoid_membership";
    case Family::kClassificationMargin:
      return "classification_margin";
  }
  return "unknown";
}

Family ParseFamily(std::string_view name) {
  if (name == "linear_halfspace") return Family::kLinearHalfspace;
  if (name == "ellipsoid_membership") return Family::kEllipsoidMembership;
  if (name == "classification_margin") return Family::kClassificationMargin;
  throw InvalidArgument("unknown constraint family: " + std::string(name));
}

ConstraintId HashDelta(Family family, const Eigen::VectorXd& delta,
                       std::uint64_t salt) {
  constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t h = kOffset;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= bytes[k];
      h *= kPrime;
    }
  };
  const auto tag = static_cast<std::uint8_t>(family);
  mix(&tag, sizeof(tag));
  for (Eigen::Index k = 0; k < delta.size(); ++k) {
    double v = delta[k] == 0.0 ? 0.0 : delta[k];
    mix(&v, sizeof(v));
  }
  mix(&salt, sizeof(salt));
  return h;
}

int ConstraintPool::decision_dim() const {
  switch (family_) {
    case Family::kLinearHalfspace:
      return dim_ - 1;
    case Family::kEllipsoidMembership:
      return dim_ * (dim_ + 3) / 2 + 1;
    case Family::kClassificationMargin:
      return dim_ + 2;
  }
  return 0;
}

std::optional<Index> ConstraintPool::Find(ConstraintId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

IndexSet ConstraintPool::AllIndices() const {
  IndexSet all(constraints_.size());
  for (Index i = 0; i < size(); ++i) all[i] = i;
  return all;
}

std::shared_ptr<const ConstraintPool> ConstraintPool::Create(
    Family family, int dim, const std::vector<Eigen::VectorXd>& deltas) {
  if (dim < 1) throw InvalidArgument("pool dimension must be positive");
  if (family == Family::kLinearHalfspace && dim < 2) {
    throw InvalidArgument("linear halfspace rows need at least [u; v]");
  }
  if (family == Family::kClassificationMargin && dim < 2) {
    throw InvalidArgument("classification rows need at least [b; l]");
  }

  std::shared_ptr<ConstraintPool> pool(new ConstraintPool());
  pool->family_ = family;
  pool->dim_ = dim;
  pool->constraints_.reserve(deltas.size());

  std::unordered_set<ConstraintId> seen;
  for (const Eigen::VectorXd& delta : deltas) {
    if (delta.size() != dim) {
      throw InvalidArgument("delta length " + std::to_string(delta.size()) +
                            " does not match pool dimension " +
                            std::to_string(dim));
    }
    if (!delta.allFinite()) throw InvalidArgument("delta has non-finite entry");
    if (family == Family::kClassificationMargin) {
      const double label = delta[dim - 1];
      if (label != 1.0 && label != -1.0) {
        throw InvalidArgument("classification label must be -1 or +1");
      }
    }
    if (family == Family::kLinearHalfspace &&
        delta.head(dim - 1).lpNorm<Eigen::Infinity>() == 0.0) {
      throw InvalidArgument("linear halfspace row has zero normal");
    }
    std::uint64_t salt = 0;
    ConstraintId id = HashDelta(family, delta, salt);
    while (!seen.insert(id).second) id = HashDelta(family, delta, ++salt);
    pool->constraints_.push_back(Constraint{id, family, delta});
  }
  std::sort(pool->constraints_.begin(), pool->constraints_.end(),
            [](const Constraint& a, const Constraint& b) { return a.id < b.id; });

  const int n = pool->size();
  for (Index i = 0; i < n; ++i) pool->by_id_[pool->constraints_[i].id] = i;

  pool->hull_points_.resize(dim, n);
  for (Index i = 0; i < n; ++i) {
    const Eigen::VectorXd& delta = pool->constraints_[i].delta;
    if (family == Family::kClassificationMargin) {
      const double label = delta[dim - 1];
      pool->hull_points_.col(i).head(dim - 1) = label * delta.head(dim - 1);
      pool->hull_points_(dim - 1, i) = label;
    } else {
      pool->hull_points_.col(i) = delta;
    }
  }

  if (family != Family::kEllipsoidMembership) {
    const int width = pool->decision_dim() + 1;
    pool->rows_.setZero(width, n);
    pool->row_scale_.resize(n);
    for (Index i = 0; i < n; ++i) {
      const Eigen::VectorXd& delta = pool->constraints_[i].delta;
      auto row = pool->rows_.col(i);
      if (family == Family::kLinearHalfspace) {
        row = delta;
      } else {
        // l (b' theta + rho) >= 1 - nu  <=>  -l b' theta - l rho - nu + 1 <= 0
        // over x = (theta, rho, nu, phi).
        const int p = dim - 1;
        const double label = delta[p];
        row.head(p) = -label * delta.head(p);
        row[p] = -label;
        row[p + 1] = -1.0;
        row[p + 2] = 0.0;
        row[p + 3] = 1.0;
      }
      const double scale = row.lpNorm<Eigen::Infinity>();
      pool->row_scale_[i] = scale;
      row /= scale;
    }
  }
  return pool;
}

}  // namespace ccrcp
