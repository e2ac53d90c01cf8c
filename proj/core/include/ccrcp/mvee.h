#ifndef CCRCP_MVEE_H_
#define CCRCP_MVEE_H_

#include <Eigen/Core>

#include "ccrcp/tolerances.h"

namespace ccrcp {

struct MveeOptions {
  // Stop once every point satisfies g_i <= (q + 1)(1 + tolerance), where g_i
  // is the lifted Mahalanobis norm under the current weights.
  double tolerance = 1e-12;
  int max_iterations = 200000;
  // Points added to the working set per outer round.
  int batch = 32;
};

struct MveeResult {
  Eigen::VectorXd center;  // y-hat
  Eigen::MatrixXd shape;   // W_y, symmetric positive definite
  double log_det_inv = 0.0;  // log det(W_y^{-1})
  // Barycentric weights per input column, summing to 1; zero off the
  // boundary.
  Eigen::VectorXd weights;
  // Upper bound on vol(E) / vol(MVEE) - 1 from the weight certificate.
  double volume_gap = 0.0;
  int iterations = 0;
};

// Minimum-volume enclosing ellipsoid {y : (y - c)' W (y - c) <= 1} of the
// columns of `points` (q x m). Runs the Todd-Yildirim variant of Khachiyan's
// algorithm (with away steps) on a growing working set of points, then
// rescales W so the outermost point lies exactly on the boundary.
//
// Throws DegenerateInput when the points do not span R^q affinely, and
// NumericalFailure when the iteration cap is hit first.
MveeResult SolveMvee(const Eigen::MatrixXd& points,
                     const MveeOptions& options = {});

}  // namespace ccrcp

#endif  // CCRCP_MVEE_H_
