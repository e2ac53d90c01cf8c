#ifndef CCRCP_REMOVAL_H_
#define CCRCP_REMOVAL_H_

#include <string>
#include <vector>

#include "ccrcp/consensus.h"
#include "ccrcp/constraint_pool.h"
#include "ccrcp/graph.h"
#include "ccrcp/program.h"
#include "ccrcp/solve.h"

namespace ccrcp {

struct RemovalStage {
  // Optimal value of the problem solved in this stage, before its removal.
  double j_star = 0.0;
  Index removed = -1;
  ConstraintId removed_id = 0;
  double multiplier = 0.0;
  int rounds = 0;  // consensus rounds used by the stage
};

struct RemovalReport {
  std::vector<Index> removed;  // in removal order
  std::vector<RemovalStage> per_stage;
  Solution final;  // P[C \ removed]
  // Set when the chosen protocol can miss constraints with a positive
  // multiplier (VCC and qVCC rank only the hull vertices).
  std::string warning;
};

// Index in `candidates` with the largest multiplier; values within 1e-9
// (relative) of the largest go to the lowest index. -1 for an empty set.
Index SelectMaxMultiplier(const Solution& solution, const IndexSet& candidates);

// r stages of: consensus over the remaining constraints, then every node drops
// the constraint with the largest multiplier in the agreed candidate set.
// Throws InfeasibleStage when an ACC stage is infeasible and InvalidArgument
// when r exceeds the number of constraints.
RemovalReport RemoveConstraints(const DirectedGraph& graph,
                                const ConvexProgram& program,
                                const Partition& partition, int r,
                                Protocol protocol,
                                const RunOptions& options = {});

// Centralized marginal-cost removal: solve P[C], drop the active constraint
// with the largest multiplier, repeat r times.
RemovalReport CentralizedRemoval(const ConvexProgram& program, int r);

}  // namespace ccrcp

#endif  // CCRCP_REMOVAL_H_
