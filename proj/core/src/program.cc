#include "ccrcp/program.h"

#include <cmath>
#include <string>
#include <utility>

#include "ccrcp/errors.h"

namespace ccrcp {

ConvexProgram::ConvexProgram(PoolPtr pool, Eigen::VectorXd objective,
                             Box domain, IndexSet indices)
    : pool_(std::move(pool)),
      objective_(std::move(objective)),
      domain_(std::move(domain)),
      indices_(Normalize(std::move(indices))) {
  if (!pool_) throw InvalidArgument("program needs a constraint pool");
  if (objective_.size() != pool_->decision_dim()) {
    throw InvalidArgument("objective length " +
                          std::to_string(objective_.size()) +
                          " does not match decision dimension " +
                          std::to_string(pool_->decision_dim()));
  }
  if (!objective_.allFinite() || objective_.lpNorm<Eigen::Infinity>() == 0.0) {
    throw InvalidArgument("objective must be finite and nonzero");
  }
  domain_.Validate();
  if (domain_.dim() != objective_.size()) {
    throw InvalidArgument("domain dimension does not match objective");
  }
  for (Index j : indices_) {
    if (j < 0 || j >= pool_->size()) {
      throw InvalidArgument("constraint index " + std::to_string(j) +
                            " outside pool");
    }
  }
}

ConvexProgram ConvexProgram::Default(PoolPtr pool, IndexSet indices) {
  Eigen::VectorXd objective = DefaultObjective(*pool);
  Box domain = DefaultDomain(*pool);
  return ConvexProgram(std::move(pool), std::move(objective),
                       std::move(domain), std::move(indices));
}

ConvexProgram ConvexProgram::WithIndices(IndexSet indices) const {
  ConvexProgram copy = *this;
  copy.indices_ = Normalize(std::move(indices));
  for (Index j : copy.indices_) {
    if (j < 0 || j >= pool_->size()) {
      throw InvalidArgument("constraint index outside pool");
    }
  }
  return copy;
}

double ConvexProgram::Evaluate(Index j, const Eigen::VectorXd& x) const {
  if (pool_->family() == Family::kEllipsoidMembership) {
    const int q = pool_->dim();
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    UnpackEllipsoid(x, q, &center, &shape);
    const Eigen::VectorXd r = pool_->HullPoint(j) - center;
    return r.dot(shape * r) - 1.0;
  }
  const auto row = pool_->Row(j);
  const int d = dim();
  return row.head(d).dot(x) + row[d];
}

Eigen::VectorXd DefaultObjective(const ConstraintPool& pool) {
  const int d = pool.decision_dim();
  switch (pool.family()) {
    case Family::kLinearHalfspace:
      return Eigen::VectorXd::Constant(d, -1.0);
    case Family::kEllipsoidMembership:
    case Family::kClassificationMargin:
      return Eigen::VectorXd::Unit(d, d - 1);
  }
  return Eigen::VectorXd();
}

Box DefaultDomain(const ConstraintPool& pool) {
  const int d = pool.decision_dim();
  switch (pool.family()) {
    case Family::kLinearHalfspace:
      return Box::Uniform(d, -10.0, 10.0);
    case Family::kEllipsoidMembership:
      return Box::Uniform(d, -kEllipsoidBound, kEllipsoidBound);
    case Family::kClassificationMargin: {
      // (theta, rho, nu, phi) with nu >= 0 and phi <= |theta| + nu at most.
      const int p = pool.dim() - 1;
      const double b = kClassificationBound;
      Box box = Box::Uniform(d, -b, b);
      box.lower[p + 1] = 0.0;
      box.lower[p + 2] = 0.0;
      box.upper[p + 2] = (std::sqrt(static_cast<double>(p)) + 1.0) * b;
      return box;
    }
  }
  return Box();
}

Eigen::VectorXd PackEllipsoid(const Eigen::VectorXd& center,
                              const Eigen::MatrixXd& shape, double value) {
  const int q = static_cast<int>(center.size());
  Eigen::VectorXd x(q * (q + 3) / 2 + 1);
  x.head(q) = center;
  int k = q;
  for (int r = 0; r < q; ++r) {
    for (int c = r; c < q; ++c) x[k++] = shape(r, c);
  }
  x[k] = value;
  return x;
}

void UnpackEllipsoid(const Eigen::VectorXd& x, int q, Eigen::VectorXd* center,
                     Eigen::MatrixXd* shape) {
  if (x.size() != q * (q + 3) / 2 + 1) {
    throw InvalidArgument("ellipsoid vector has wrong length");
  }
  *center = x.head(q);
  shape->resize(q, q);
  int k = q;
  for (int r = 0; r < q; ++r) {
    for (int c = r; c < q; ++c) {
      (*shape)(r, c) = x[k];
      (*shape)(c, r) = x[k];
      ++k;
    }
  }
}

}  // namespace ccrcp
