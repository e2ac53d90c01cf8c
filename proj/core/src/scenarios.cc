#include "ccrcp/scenarios.h"

#include <cmath>
#include <numeric>
#include <string>

#include "ccrcp/errors.h"

namespace ccrcp {

std::string_view ScenarioName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kEllipsoidMixture:
      return "ellipsoid";
    case ScenarioKind::kGaussianClassification:
      return "classification";
    case ScenarioKind::kUncertainLp:
      return "linear";
  }
  return "unknown";
}

ScenarioKind ParseScenario(std::string_view name) {
  if (name == "ellipsoid" || name == "mixture") {
    return ScenarioKind::kEllipsoidMixture;
  }
  if (name == "classification") return ScenarioKind::kGaussianClassification;
  if (name == "linear" || name == "lp") return ScenarioKind::kUncertainLp;
  throw InvalidArgument("unknown scenario: " + std::string(name));
}

namespace {

void CheckCount(int n, int dim) {
  if (n < 1) throw InvalidArgument("scenario needs at least one sample");
  if (dim < 1) throw InvalidArgument("scenario dimension must be positive");
}

}  // namespace

PoolPtr GenMixture(int n, std::uint64_t seed, int q,
                   std::vector<Eigen::VectorXd>* draws,
                   std::vector<bool>* outlier) {
  CheckCount(n, q);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution pick(0.05);
  std::vector<Eigen::VectorXd> points;
  points.reserve(n);
  if (outlier != nullptr) outlier->clear();
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd y(q);
    const bool second = pick(rng);
    if (outlier != nullptr) outlier->push_back(second);
    if (second) {
      for (int k = 0; k < q; ++k) y[k] = unit(rng);
      for (int k = 0; k < q; ++k) y[k] += 10.0 * normal(rng);
    } else {
      for (int k = 0; k < q; ++k) y[k] = normal(rng);
    }
    points.push_back(std::move(y));
  }
  if (draws != nullptr) *draws = points;
  return ConstraintPool::Create(Family::kEllipsoidMembership, q, points);
}

PoolPtr GenClassification(int n, int p, std::uint64_t seed) {
  CheckCount(n, p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int positives = (n + 1) / 2;
  std::vector<Eigen::VectorXd> deltas;
  deltas.reserve(n);
  for (int s = 0; s < n; ++s) {
    const double label = s < positives ? 1.0 : -1.0;
    Eigen::VectorXd delta(p + 1);
    for (int k = 0; k < p; ++k) delta[k] = 10.0 * label + normal(rng);
    delta[p] = label;
    deltas.push_back(std::move(delta));
  }
  return ConstraintPool::Create(Family::kClassificationMargin, p + 1, deltas);
}

PoolPtr GenUncertainLp(int n, int d, std::uint64_t seed) {
  CheckCount(n, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(n);
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd row(d + 1);
    for (int k = 0; k < d; ++k) row[k] = normal(rng);
    row[d] = -(1.0 + std::abs(normal(rng)));
    rows.push_back(std::move(row));
  }
  return ConstraintPool::Create(Family::kLinearHalfspace, d + 1, rows);
}

PoolPtr GenerateScenario(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioKind::kEllipsoidMixture:
      return GenMixture(spec.n_samples, spec.seed, spec.dim);
    case ScenarioKind::kGaussianClassification:
      return GenClassification(spec.n_samples, spec.dim, spec.seed);
    case ScenarioKind::kUncertainLp:
      return GenUncertainLp(spec.n_samples, spec.dim, spec.seed);
  }
  throw InvalidArgument("unknown scenario kind");
}

Partition SizedPartition(int n_constraints, const std::vector<int>& sizes) {
  if (sizes.empty()) throw InvalidArgument("partition needs at least one node");
  long total = 0;
  for (int s : sizes) {
    if (s < 0) throw InvalidArgument("negative partition size");
    total += s;
  }
  if (total != n_constraints) {
    throw InvalidArgument("partition sizes sum to " + std::to_string(total) +
                          ", expected " + std::to_string(n_constraints));
  }
  Partition parts;
  parts.reserve(sizes.size());
  Index next = 0;
  for (int s : sizes) {
    IndexSet part(s);
    std::iota(part.begin(), part.end(), next);
    next += s;
    parts.push_back(std::move(part));
  }
  return parts;
}

Partition EvenPartition(int n_constraints, int n_nodes) {
  if (n_nodes < 1) throw InvalidArgument("partition needs at least one node");
  std::vector<int> sizes(n_nodes, n_constraints / n_nodes);
  for (int i = 0; i < n_constraints % n_nodes; ++i) ++sizes[i];
  return SizedPartition(n_constraints, sizes);
}

DirectedGraph MakeTopology(std::string_view name, int n, std::uint64_t seed) {
  if (name == "chain") return GenChain(n);
  if (name == "complete") return GenComplete(n);
  if (name == "ring") return GenRing(n);
  if (name == "geometric") {
    std::mt19937_64 rng(seed);
    return GenGeometric(n, 0.0, rng).graph;
  }
  throw InvalidArgument("unknown topology: " + std::string(name));
}

}  // namespace ccrcp
