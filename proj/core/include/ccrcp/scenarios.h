#ifndef CCRCP_SCENARIOS_H_
#define CCRCP_SCENARIOS_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ccrcp/consensus.h"
#include "ccrcp/constraint_pool.h"
#include "ccrcp/graph.h"

namespace ccrcp {

enum class ScenarioKind { kEllipsoidMixture, kGaussianClassification, kUncertainLp };

std::string_view ScenarioName(ScenarioKind kind);
ScenarioKind ParseScenario(std::string_view name);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kEllipsoidMixture;
  int n_samples = 200;
  // q for the mixture, p for classification, d for the uncertain LP.
  int dim = 2;
  std::uint64_t seed = 1;
  // Explicit per-node sizes N_i; empty means an even split.
  std::vector<int> sizes;
};

// With probability 0.95 a standard normal point, otherwise a point uniform in
// [-1, 1]^q plus ten times a standard normal one. `draws` and `outlier`,
// when given, receive the raw samples in draw order and which of them came
// from the second component.
PoolPtr GenMixture(int n, std::uint64_t seed, int q = 2,
                   std::vector<Eigen::VectorXd>* draws = nullptr,
                   std::vector<bool>* outlier = nullptr);

// n/2 points per label (label +1 first for odd n), class l drawn from
// N(10 l 1_p, I).
PoolPtr GenClassification(int n, int p, std::uint64_t seed);

// Rows u'x <= 1 + |e| with u ~ N(0, I_d) and e ~ N(0, 1). Every pool contains
// the origin, so the LP min -1'x over [-10, 10]^d is feasible.
PoolPtr GenUncertainLp(int n, int d, std::uint64_t seed);

PoolPtr GenerateScenario(const ScenarioSpec& spec);

// Consecutive blocks of the canonical index order; block sizes differ by at
// most one, larger blocks first.
Partition EvenPartition(int n_constraints, int n_nodes);
// Consecutive blocks with the given sizes; throws InvalidArgument when they
// do not sum to n_constraints.
Partition SizedPartition(int n_constraints, const std::vector<int>& sizes);

// "chain", "complete", "ring" or "geometric" (default radius, nodes seeded
// from `seed`).
DirectedGraph MakeTopology(std::string_view name, int n, std::uint64_t seed);

}  // namespace ccrcp

#endif  // CCRCP_SCENARIOS_H_
