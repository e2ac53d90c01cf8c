#include "ccrcp/hull.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "ccrcp/errors.h"
#include "ccrcp/simplex.h"

namespace ccrcp {
namespace {

using HintFn = std::function<const Eigen::VectorXd*(int)>;
using RecordFn = std::function<void(int, const Eigen::VectorXd&)>;

struct Membership {
  double distance = std::numeric_limits<double>::infinity();
  Eigen::VectorXd direction;  // w with w'x + w0 <= 0 on the hull, = dist at p
};

// min sum(s+ + s-)  s.t.  sum_i lambda_i x_i + s+ - s- = p,  sum lambda = 1.
// The multipliers of the coordinate rows give the separating direction.
Membership L1Membership(const Eigen::VectorXd& p, const Eigen::MatrixXd& x,
                        const std::vector<int>& cols) {
  Membership out;
  if (cols.empty()) return out;
  const int l = static_cast<int>(p.size());
  const int k = static_cast<int>(cols.size());
  Eigen::VectorXd rhs(l + 1);
  rhs << p, 1.0;
  StandardFormSimplex lp(rhs);
  lp.Reserve(k + 2 * l);
  Eigen::VectorXd column(l + 1);
  for (int c : cols) {
    column << x.col(c), 1.0;
    lp.AddColumn(column, 0.0);
  }
  for (int sign : {1, -1}) {
    for (int j = 0; j < l; ++j) {
      column.setZero();
      column[j] = sign;
      lp.AddColumn(column, 1.0);
    }
  }
  std::vector<int> basis{0};
  for (int j = 0; j < l; ++j) {
    basis.push_back(p[j] >= x(j, cols[0]) ? k + j : k + l + j);
  }
  std::sort(basis.begin(), basis.end());
  lp.SetBasis(basis);
  if (lp.Solve() != SimplexStatus::kOptimal) {
    throw NumericalFailure("hull membership LP did not reach an optimum");
  }
  out.distance = std::max(0.0, lp.objective());
  out.direction = lp.duals().head(l);
  return out;
}

bool LexLess(const Eigen::MatrixXd& x, int a, int b) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if (x(r, a) != x(r, b)) return x(r, a) < x(r, b);
  }
  return a < b;
}

bool SameColumn(const Eigen::MatrixXd& x, int a, int b) {
  return (x.col(a).array() == x.col(b).array()).all();
}

// Columns in lexicographic order with coincident copies dropped (the lowest
// column of each group survives).
std::vector<int> DistinctLexOrder(const Eigen::MatrixXd& x) {
  std::vector<int> order(x.cols());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return LexLess(x, a, b); });
  std::vector<int> distinct;
  for (int c : order) {
    if (distinct.empty() || !SameColumn(x, distinct.back(), c)) {
      distinct.push_back(c);
    }
  }
  return distinct;
}

double Cross(const Eigen::MatrixXd& x, int o, int a, int b) {
  return (x(0, a) - x(0, o)) * (x(1, b) - x(1, o)) -
         (x(1, a) - x(1, o)) * (x(0, b) - x(0, o));
}

// L1 distance from v to the segment [a, b] in the plane. The distance is
// piecewise linear in the segment parameter, so it is minimized at an
// endpoint or where one coordinate difference vanishes.
double SegmentL1(const Eigen::MatrixXd& x, int v, int a, int b) {
  auto at = [&](double t) {
    t = std::clamp(t, 0.0, 1.0);
    double s = 0.0;
    for (int r = 0; r < 2; ++r) {
      s += std::abs(x(r, a) + t * (x(r, b) - x(r, a)) - x(r, v));
    }
    return s;
  };
  double best = std::min(at(0.0), at(1.0));
  for (int r = 0; r < 2; ++r) {
    const double span = x(r, b) - x(r, a);
    if (span != 0.0) best = std::min(best, at((x(r, v) - x(r, a)) / span));
  }
  return best;
}

std::vector<int> FrameVertices(const Eigen::MatrixXd& x,
                               std::vector<int> distinct, const HintFn& hint,
                               const RecordFn& record) {
  enum : char { kUnknown, kVertex, kInterior };
  const int m = static_cast<int>(x.cols());
  std::vector<char> state(m, kInterior);
  for (int c : distinct) state[c] = kUnknown;
  std::vector<int> frame;
  auto mark_vertex = [&](int c) {
    state[c] = kVertex;
    frame.push_back(c);
  };

  // The lexicographic maximum is always extreme; it seeds the frame.
  const int lex_max = distinct.back();
  std::sort(distinct.begin(), distinct.end());

  Eigen::MatrixXd cand(x.rows(), distinct.size());
  for (std::size_t s = 0; s < distinct.size(); ++s) {
    cand.col(s) = x.col(distinct[s]);
  }

  // Returns (position in distinct of the maximizer, its value, runner-up).
  auto top_two = [&](const Eigen::VectorXd& w, Eigen::VectorXd* values) {
    *values = cand.transpose() * w;
    int best = 0;
    for (int s = 1; s < values->size(); ++s) {
      if ((*values)[s] > (*values)[best]) best = s;
    }
    double second = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < values->size(); ++s) {
      if (s != best) second = std::max(second, (*values)[s]);
    }
    return std::make_pair(best, second);
  };

  Eigen::VectorXd values;
  if (hint) {
    for (std::size_t s = 0; s < distinct.size(); ++s) {
      const Eigen::VectorXd* w = hint(distinct[s]);
      if (w == nullptr || w->size() != x.rows()) continue;
      const auto [best, second] = top_two(*w, &values);
      const double scale = w->lpNorm<Eigen::Infinity>();
      if (best == static_cast<int>(s) &&
          values[best] - second > kHullTol * scale) {
        mark_vertex(distinct[s]);
      }
    }
  }
  if (state[lex_max] == kUnknown) mark_vertex(lex_max);

  auto classify_fully = [&](int c) {
    std::vector<int> others;
    others.reserve(distinct.size());
    for (int o : distinct) {
      if (o != c) others.push_back(o);
    }
    const Membership mem = L1Membership(x.col(c), x, others);
    if (mem.distance > kHullTol) {
      mark_vertex(c);
      if (record) record(c, mem.direction);
      return true;
    }
    state[c] = kInterior;
    return false;
  };

  for (int c : distinct) {
    while (state[c] == kUnknown) {
      const Membership mem = L1Membership(x.col(c), x, frame);
      if (mem.distance <= kHullTol) {
        state[c] = kInterior;
        break;
      }
      const Eigen::VectorXd& w = mem.direction;
      const auto [best, second] = top_two(w, &values);
      const double slack = kHullTol * std::max(w.lpNorm<Eigen::Infinity>(),
                                               1e-300);
      const int z = distinct[best];
      if (values[best] - second > slack && state[z] == kUnknown) {
        mark_vertex(z);
        if (record) record(z, w);
        continue;
      }
      // Near tie along w: settle the tied points one by one.
      bool progress = false;
      for (int s = 0; s < values.size(); ++s) {
        const int u = distinct[s];
        if (values[s] >= values[best] - slack && state[u] == kUnknown) {
          progress |= classify_fully(u);
        }
      }
      if (!progress && state[c] == kUnknown) classify_fully(c);
    }
  }
  std::sort(frame.begin(), frame.end());
  return frame;
}

std::vector<int> VertexColumns(const Eigen::MatrixXd& x, bool allow_planar,
                               const HintFn& hint, const RecordFn& record) {
  if (x.cols() == 0) return {};
  if (!x.allFinite()) throw InvalidArgument("hull point is not finite");
  std::vector<int> distinct = DistinctLexOrder(x);
  if (distinct.size() == 1) return distinct;
  if (x.rows() == 1) {
    const int lo = distinct.front();
    const int hi = distinct.back();
    std::vector<int> out{lo};
    if (x(0, hi) - x(0, lo) > kHullTol) out.push_back(hi);
    std::sort(out.begin(), out.end());
    return out;
  }
  if (x.rows() == 2 && allow_planar) return PlanarHull(x);
  return FrameVertices(x, std::move(distinct), hint, record);
}

}  // namespace

IndexSet PlanarHull(const Eigen::MatrixXd& points) {
  if (points.rows() != 2) throw InvalidArgument("planar hull needs 2 rows");
  if (points.cols() == 0) return {};
  const std::vector<int> p = DistinctLexOrder(points);
  const int n = static_cast<int>(p.size());
  if (n <= 2) {
    IndexSet out(p.begin(), p.end());
    return Normalize(out);
  }
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && Cross(points, hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && Cross(points, hull[k - 2], hull[k - 1], p[i]) <= 0.0) {
      --k;
    }
    hull[k++] = p[i];
  }
  hull.resize(k - 1);

  // Drop vertices that sit within kHullTol of the chord of their neighbours.
  bool changed = true;
  while (changed && hull.size() > 2) {
    changed = false;
    for (std::size_t i = 0; i < hull.size() && hull.size() > 2; ++i) {
      const int prev = hull[(i + hull.size() - 1) % hull.size()];
      const int next = hull[(i + 1) % hull.size()];
      if (SegmentL1(points, hull[i], prev, next) <= kHullTol) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return Normalize(IndexSet(hull.begin(), hull.end()));
}

VertexSet ComputeVertexSet(const Eigen::MatrixXd& points) {
  const std::vector<int> cols = VertexColumns(points, true, nullptr, nullptr);
  return VertexSet{IndexSet(cols.begin(), cols.end()),
                   static_cast<int>(points.rows())};
}

VertexSet ComputeVertexSetLp(const Eigen::MatrixXd& points) {
  const std::vector<int> cols = VertexColumns(points, false, nullptr, nullptr);
  return VertexSet{IndexSet(cols.begin(), cols.end()),
                   static_cast<int>(points.rows())};
}

double HullDistance(const Eigen::VectorXd& point,
                    const Eigen::MatrixXd& others) {
  if (point.size() != others.rows() && others.cols() > 0) {
    throw InvalidArgument("hull point dimension mismatch");
  }
  std::vector<int> cols(others.cols());
  std::iota(cols.begin(), cols.end(), 0);
  return L1Membership(point, others, cols).distance;
}

bool IsVertex(const Eigen::VectorXd& point, const Eigen::MatrixXd& others) {
  return HullDistance(point, others) > kHullTol;
}

IndexSet VertexSubset(const ConstraintPool& pool, const IndexSet& subset,
                      HullHints* hints) {
  Eigen::MatrixXd x(pool.dim(), subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    x.col(k) = pool.HullPoint(subset[k]);
  }
  HintFn hint;
  RecordFn record;
  if (hints != nullptr) {
    hint = [&](int c) -> const Eigen::VectorXd* {
      auto it = hints->find(subset[c]);
      return it == hints->end() ? nullptr : &it->second;
    };
    record = [&](int c, const Eigen::VectorXd& w) { (*hints)[subset[c]] = w; };
  }
  const std::vector<int> cols = VertexColumns(x, true, hint, record);
  IndexSet out;
  out.reserve(cols.size());
  for (int c : cols) out.push_back(subset[c]);
  return out;
}

}  // namespace ccrcp
