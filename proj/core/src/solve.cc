#include "ccrcp/solve.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccrcp/errors.h"
#include "ccrcp/lp.h"
#include "ccrcp/mvee.h"

namespace ccrcp {

bool SameObjective(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

Solution InfeasibleSolution() { return Solution{}; }

namespace {

// Relative accuracy of the outer linearization of |theta| + nu <= phi. Must
// stay above the simplex optimality tolerance, or cuts stop biting.
constexpr double kCutTol = 1e-9;

// The classification program min |theta| + nu over l_j (b_j'theta + rho) >=
// 1 - nu scales with 1 - nu, so J(nu) = (1 - nu) m + nu where m is the
// hard-margin value min |theta| over l_j (b_j'theta + rho) >= 1. When m < 1
// the optimum has nu = 0 and theta is the hard-margin solution, which an
// active-set iteration on the equality-constrained KKT system recovers
// exactly from the cutting-plane working set. Returns false when the
// iteration does not settle, leaving `s` untouched.
bool RefineClassification(const ConvexProgram& program,
                          const std::vector<Index>& start, Solution& s) {
  const ConstraintPool& pool = program.pool();
  const IndexSet& indices = program.indices();
  const int d = program.dim();
  const int p = d - 3;
  if (s.x_star[p + 1] > kFeasibilityTol || indices.empty()) return false;

  auto point = [&](Index j) { return pool[j].delta.head(p); };
  auto label = [&](Index j) { return pool[j].delta[p]; };
  std::vector<Index> work = start;
  Eigen::VectorXd theta(p);
  double rho = 0.0;
  Eigen::VectorXd lambda;
  for (int iter = 0; iter < 200; ++iter) {
    if (work.empty()) return false;
    std::sort(work.begin(), work.end());
    const int w = static_cast<int>(work.size());
    // [K l; l' 0] [lambda; rho] = [1; 0] with K_jk = l_j l_k b_j'b_k.
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(w + 1, w + 1);
    for (int a = 0; a < w; ++a) {
      for (int b = 0; b <= a; ++b) {
        kkt(a, b) = kkt(b, a) = label(work[a]) * label(work[b]) *
                                point(work[a]).dot(point(work[b]));
      }
      kkt(a, w) = kkt(w, a) = label(work[a]);
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(w + 1);
    rhs[w] = 0.0;
    const Eigen::VectorXd sol =
        kkt.completeOrthogonalDecomposition().solve(rhs);
    lambda = sol.head(w);
    rho = sol[w];
    theta.setZero();
    for (int a = 0; a < w; ++a) {
      theta += lambda[a] * label(work[a]) * point(work[a]);
    }
    if ((kkt * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-9) return false;

    const double lambda_scale = std::max(1e-300, lambda.lpNorm<Eigen::Infinity>());
    int worst = -1;
    for (int a = 0; a < w; ++a) {
      if (lambda[a] < -1e-12 * lambda_scale &&
          (worst < 0 || lambda[a] < lambda[worst])) {
        worst = a;
      }
    }
    if (worst >= 0) {
      work.erase(work.begin() + worst);
      continue;
    }
    Index violated = -1;
    double most = 1e-12;
    for (Index j : indices) {
      const double v = (1.0 - label(j) * (point(j).dot(theta) + rho)) /
                       pool.RowScale(j);
      if (v > most) {
        most = v;
        violated = j;
      }
    }
    if (violated < 0) break;
    if (std::find(work.begin(), work.end(), violated) != work.end()) {
      return false;
    }
    work.push_back(violated);
    if (iter == 199) return false;
  }

  const double norm = theta.norm();
  if (norm >= 1.0) return false;
  // With a single label in the working set rho is only bounded on one side;
  // the lexicographic rule then takes the smallest feasible rho.
  bool has_pos = false;
  bool has_neg = false;
  for (Index j : work) (label(j) > 0 ? has_pos : has_neg) = true;
  const Box& box = program.domain();
  if (!(has_pos && has_neg)) {
    double lower = box.lower[p];
    for (Index j : indices) {
      if (label(j) > 0) lower = std::max(lower, 1.0 - point(j).dot(theta));
    }
    rho = lower;
  }
  Eigen::VectorXd x(d);
  x << theta, rho, 0.0, norm;
  if ((x - box.lower).minCoeff() < 0.0 || (box.upper - x).minCoeff() < 0.0) {
    return false;
  }
  s.x_star = x;
  s.j_star = norm;
  s.multipliers.clear();
  if (norm > 0.0) {
    for (std::size_t a = 0; a < work.size(); ++a) {
      if (lambda[a] > 0.0) s.multipliers[work[a]] = lambda[a] / norm;
    }
  }
  return true;
}

Solution SolvePolyhedral(const ConvexProgram& program) {
  const ConstraintPool& pool = program.pool();
  const IndexSet& indices = program.indices();
  const int d = program.dim();
  const int m = static_cast<int>(indices.size());
  const bool classification = pool.family() == Family::kClassificationMargin;

  BoxedLp lp(program.domain());
  lp.Reserve(m + (classification ? 4 * d + 64 : 2 * d));
  for (Index j : indices) {
    const auto row = pool.Row(j);
    lp.AddRow(row.head(d), -row[d]);
  }

  CutOracle cuts;
  const int p = d - 3;
  if (classification) {
    // Seed the norm with the 2p facets of the l1 ball it dominates.
    Eigen::VectorXd cut = Eigen::VectorXd::Zero(d);
    cut[p + 1] = 1.0;
    cut[p + 2] = -1.0;
    for (int k = 0; k < p; ++k) {
      cut[k] = 1.0;
      lp.AddRow(cut, 0.0);
      cut[k] = -1.0;
      lp.AddRow(cut, 0.0);
      cut[k] = 0.0;
    }
    cuts = [p, d](const Eigen::VectorXd& x)
        -> std::optional<std::pair<Eigen::VectorXd, double>> {
      const double norm = x.head(p).norm();
      const double excess = norm + x[p + 1] - x[p + 2];
      if (norm == 0.0 || excess <= kCutTol * (1.0 + std::abs(x[p + 2]))) {
        return std::nullopt;
      }
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
      g.head(p) = x.head(p) / norm;
      g[p + 1] = 1.0;
      g[p + 2] = -1.0;
      return std::make_pair(std::move(g), 0.0);
    };
  }

  const LexicographicResult lex =
      SolveLexicographic(lp, program.objective(), cuts);
  if (lex.status == LpStatus::kInfeasible) return InfeasibleSolution();

  Solution s;
  s.status = SolveStatus::kFeasible;
  s.x_star = lex.x;
  if (classification) {
    s.j_star = s.x_star.head(p).norm() + s.x_star[p + 1];
    s.x_star[p + 2] = s.j_star;
  } else {
    s.j_star = program.objective().dot(s.x_star);
  }
  std::vector<Index> binding;
  for (const auto& [row, y] : lex.multipliers) {
    if (row < m) {
      s.multipliers[indices[row]] = y / pool.RowScale(indices[row]);
      binding.push_back(indices[row]);
    }
  }
  if (classification) RefineClassification(program, binding, s);
  return s;
}

Solution SolveEllipsoid(const ConvexProgram& program) {
  const ConstraintPool& pool = program.pool();
  const IndexSet& indices = program.indices();
  const int q = pool.dim();
  Eigen::MatrixXd points(q, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    points.col(k) = pool.HullPoint(indices[k]);
  }
  const MveeResult mvee = SolveMvee(points);
  Solution s;
  s.status = SolveStatus::kFeasible;
  s.x_star = PackEllipsoid(mvee.center, mvee.shape, mvee.log_det_inv);
  s.j_star = mvee.log_det_inv;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (mvee.weights[k] > 0.0) s.multipliers[indices[k]] = mvee.weights[k];
  }
  return s;
}

Solution SolveRaw(const ConvexProgram& program) {
  if (program.family() == Family::kEllipsoidMembership) {
    return SolveEllipsoid(program);
  }
  return SolvePolyhedral(program);
}

}  // namespace

Eigen::VectorXd ConstraintValues(const ConvexProgram& program,
                                 const Eigen::VectorXd& x) {
  const ConstraintPool& pool = program.pool();
  const IndexSet& indices = program.indices();
  Eigen::VectorXd values(indices.size());
  if (pool.family() == Family::kEllipsoidMembership) {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    UnpackEllipsoid(x, pool.dim(), &center, &shape);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const Eigen::VectorXd r = pool.HullPoint(indices[k]) - center;
      values[k] = r.dot(shape * r) - 1.0;
    }
  } else {
    const int d = program.dim();
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto row = pool.Row(indices[k]);
      values[k] = row.head(d).dot(x) + row[d];
    }
  }
  return values;
}

double MaxViolation(const ConvexProgram& program, const Eigen::VectorXd& x) {
  if (program.indices().empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  return ConstraintValues(program, x).maxCoeff();
}

IndexSet ActiveSet(const ConvexProgram& program, const Solution& solution,
                   double tol) {
  IndexSet active;
  if (!solution.feasible()) return active;
  const Eigen::VectorXd values = ConstraintValues(program, solution.x_star);
  for (std::size_t k = 0; k < program.indices().size(); ++k) {
    if (std::abs(values[k]) <= tol) active.push_back(program.indices()[k]);
  }
  return active;
}

Solution Solve(const ConvexProgram& program) {
  Solution s = SolveRaw(program);
  if (!s.feasible()) return s;
  s.active = ActiveSet(program, s);

  // Recompute from the active set alone. Different supersets of the same
  // active set then agree to the last bit, which keeps nodes in lockstep.
  if (s.active.size() < program.indices().size()) {
    const ConvexProgram reduced = program.WithIndices(s.active);
    std::optional<Solution> polished;
    try {
      polished = SolveRaw(reduced);
    } catch (const DegenerateInput&) {
      polished.reset();
    }
    if (polished && polished->feasible()) {
      const double scale = 1.0 + s.x_star.lpNorm<Eigen::Infinity>();
      const bool close =
          (polished->x_star - s.x_star).lpNorm<Eigen::Infinity>() <=
              1e-7 * scale &&
          SameObjective(polished->j_star, s.j_star, 1e-7);
      if (close && MaxViolation(program, polished->x_star) <= kFeasibilityTol) {
        s.x_star = std::move(polished->x_star);
        s.j_star = polished->j_star;
        s.multipliers = std::move(polished->multipliers);
        s.active = ActiveSet(program, s);
      }
    }
  }
  return s;
}

}  // namespace ccrcp
