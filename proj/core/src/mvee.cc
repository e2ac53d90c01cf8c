#include "ccrcp/mvee.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "ccrcp/errors.h"

namespace ccrcp {
namespace {

void CheckFullDimensional(const Eigen::MatrixXd& points) {
  const int q = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (m < q + 1) {
    throw DegenerateInput("MVEE needs at least q + 1 points");
  }
  if (!points.allFinite()) throw InvalidArgument("MVEE point is not finite");
  const Eigen::VectorXd mean = points.rowwise().mean();
  const Eigen::MatrixXd centered = points.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered * centered.transpose());
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv[0] <= 0.0 || sv[q - 1] <= 1e-20 * sv[0]) {
    throw DegenerateInput("MVEE points are not full-dimensional");
  }
}

// Lifted Mahalanobis norms z_i' X(u)^{-1} z_i of the columns of `lifted`.
Eigen::VectorXd LiftedNorms(const Eigen::LLT<Eigen::MatrixXd>& factor,
                            const Eigen::MatrixXd& lifted) {
  const Eigen::MatrixXd solved =
      factor.matrixL().solve(lifted);
  return solved.colwise().squaredNorm().transpose();
}

Eigen::LLT<Eigen::MatrixXd> Factor(const Eigen::MatrixXd& lifted,
                                   const Eigen::VectorXd& u) {
  const Eigen::MatrixXd x = lifted * u.asDiagonal() * lifted.transpose();
  Eigen::LLT<Eigen::MatrixXd> factor(x);
  if (factor.info() != Eigen::Success) {
    throw NumericalFailure("MVEE moment matrix lost positive definiteness");
  }
  return factor;
}

// Weighted-away-step Frank-Wolfe on the columns of `lifted`; u is updated in
// place. Returns the iteration count.
int RunWaTy(const Eigen::MatrixXd& lifted, Eigen::VectorXd& u, double tol,
            int budget) {
  const double n = static_cast<double>(lifted.rows());
  const int m = static_cast<int>(lifted.cols());
  int it = 0;
  for (; it < budget; ++it) {
    const Eigen::VectorXd g = LiftedNorms(Factor(lifted, u), lifted);
    int up = 0;
    int down = -1;
    for (int i = 0; i < m; ++i) {
      if (g[i] > g[up]) up = i;
      if (u[i] > 0.0 && (down < 0 || g[i] < g[down])) down = i;
    }
    const double rise = g[up] / n - 1.0;
    const double fall = 1.0 - g[down] / n;
    if (rise <= tol && fall <= tol) return it;

    if (rise >= fall) {
      const double alpha = (g[up] - n) / (n * (g[up] - 1.0));
      u *= 1.0 - alpha;
      u[up] += alpha;
    } else {
      const double limit = u[down] / (1.0 - u[down]);
      double alpha = g[down] > 1.0 ? (n - g[down]) / (n * (g[down] - 1.0))
                                   : limit;
      if (alpha >= limit) {
        u *= 1.0 + limit;
        u[down] = 0.0;
      } else {
        u *= 1.0 + alpha;
        u[down] -= alpha;
      }
    }
    if (it % 64 == 63) u /= u.sum();
  }
  throw NumericalFailure("MVEE iteration cap reached");
}

}  // namespace

MveeResult SolveMvee(const Eigen::MatrixXd& points, const MveeOptions& options) {
  CheckFullDimensional(points);
  const int q = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  const int n = q + 1;

  // The weights are affine invariant, so iterate on whitened points; far from
  // the origin the lifted columns are otherwise nearly parallel.
  const Eigen::VectorXd mean = points.rowwise().mean();
  const Eigen::MatrixXd centered_all = points.colwise() - mean;
  const Eigen::LLT<Eigen::MatrixXd> spread(
      centered_all * centered_all.transpose() / static_cast<double>(m));
  Eigen::MatrixXd lifted(n, m);
  lifted.topRows(q) = spread.info() == Eigen::Success
                          ? Eigen::MatrixXd(spread.matrixL().solve(centered_all))
                          : centered_all;
  lifted.row(q).setOnes();

  // Working set: the extreme points along each coordinate.
  std::vector<char> member(m, 0);
  std::vector<int> work;
  auto admit = [&](int i) {
    if (!member[i]) {
      member[i] = 1;
      work.push_back(i);
    }
  };
  for (int k = 0; k < q; ++k) {
    Eigen::Index lo = 0;
    Eigen::Index hi = 0;
    points.row(k).minCoeff(&lo);
    points.row(k).maxCoeff(&hi);
    admit(static_cast<int>(lo));
    admit(static_cast<int>(hi));
  }
  {
    Eigen::MatrixXd sub(n, work.size());
    for (std::size_t s = 0; s < work.size(); ++s) sub.col(s) = lifted.col(work[s]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (static_cast<int>(work.size()) < n || sv[n - 1] <= 1e-10 * sv[0]) {
      for (int i = 0; i < m; ++i) admit(i);
    }
  }

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(m);
  for (int i : work) weights[i] = 1.0 / static_cast<double>(work.size());

  int iterations = 0;
  Eigen::VectorXd g_all;
  while (true) {
    Eigen::MatrixXd sub(n, work.size());
    Eigen::VectorXd u(work.size());
    for (std::size_t s = 0; s < work.size(); ++s) {
      sub.col(s) = lifted.col(work[s]);
      u[s] = weights[work[s]];
    }
    u /= u.sum();
    iterations += RunWaTy(sub, u, options.tolerance,
                          options.max_iterations - iterations);
    for (std::size_t s = 0; s < work.size(); ++s) weights[work[s]] = u[s];

    g_all = LiftedNorms(Factor(sub, u), lifted);
    const double limit = n * (1.0 + options.tolerance);
    std::vector<int> violators;
    for (int i = 0; i < m; ++i) {
      if (!member[i] && g_all[i] > limit) violators.push_back(i);
    }
    if (violators.empty()) break;
    std::sort(violators.begin(), violators.end(), [&](int a, int b) {
      return g_all[a] != g_all[b] ? g_all[a] > g_all[b] : a < b;
    });
    const int take =
        std::min<int>(options.batch, static_cast<int>(violators.size()));
    for (int s = 0; s < take; ++s) admit(violators[s]);
    std::sort(work.begin(), work.end());
  }

  MveeResult result;
  result.iterations = iterations;
  result.weights = weights;
  const double eps = std::max(0.0, g_all.maxCoeff() / n - 1.0);
  result.volume_gap = std::expm1(0.5 * n * std::log1p(eps));

  result.center = points * weights;
  const Eigen::MatrixXd centered = points.colwise() - result.center;
  const Eigen::MatrixXd sigma =
      centered * weights.asDiagonal() * centered.transpose();
  Eigen::LLT<Eigen::MatrixXd> sigma_factor(sigma);
  if (sigma_factor.info() != Eigen::Success) {
    throw NumericalFailure("MVEE scatter matrix is not positive definite");
  }
  // With W = sigma^{-1} / q the outermost point sits at level
  // max_i |L^{-1}(y_i - c)|^2 / q; fold that level into W.
  const Eigen::MatrixXd whitened = sigma_factor.matrixL().solve(centered);
  const double level = whitened.colwise().squaredNorm().maxCoeff();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(q, q);
  Eigen::MatrixXd shape = sigma_factor.solve(identity) / level;
  shape = 0.5 * (shape + shape.transpose());
  result.shape = shape;

  const Eigen::LLT<Eigen::MatrixXd> shape_factor(shape);
  double log_det = 0.0;
  for (int k = 0; k < q; ++k) {
    log_det += 2.0 * std::log(shape_factor.matrixL()(k, k));
  }
  result.log_det_inv = -log_det;
  return result;
}

}  // namespace ccrcp
