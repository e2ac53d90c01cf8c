#ifndef CCRCP_EXPERIMENT_H_
#define CCRCP_EXPERIMENT_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "ccrcp/consensus.h"
#include "ccrcp/scenarios.h"

namespace ccrcp {

struct ExperimentSpec {
  ScenarioSpec scenario;
  std::string topology = "chain";
  int nodes = 10;
  Protocol protocol = Protocol::kAcc;
  int bandwidth = 0;  // qVCC only
  RunOptions run;
};

struct ExperimentResult {
  std::string topology;
  Protocol protocol = Protocol::kAcc;
  int nodes = 0;
  int n_constraints = 0;
  int diameter = 0;
  int iterations = 0;
  int max_constraints_exchanged = 0;
  double wall_time_s = 0.0;         // whole simulation on this machine
  double critical_path_s = 0.0;     // one processor per node
  double centralized_time_s = 0.0;  // solve of P[C]
  // Largest |x_i - x*| and |J_i - J*| over nodes against the centralized
  // solve; +inf when a node disagrees on feasibility.
  double consensus_error = 0.0;
  bool passed = false;  // consensus_error <= 1e-6 and the run converged
};

// Builds the scenario, the partition (even unless sizes are given) and the
// topology (seeded from the scenario seed), runs the protocol and compares
// every node against the centralized solution.
ExperimentResult RunExperiment(const ExperimentSpec& spec);

// Same, on a prepared instance.
ExperimentResult RunExperiment(const DirectedGraph& graph,
                               const ConvexProgram& program,
                               const Partition& partition,
                               const ExperimentSpec& spec);

// Largest deviation of the node solutions in `report` from `reference`.
double ConsensusError(const RunReport& report, const Solution& reference);

void WriteResultsCsv(const std::vector<ExperimentResult>& results,
                     std::ostream& out);

}  // namespace ccrcp

#endif  // CCRCP_EXPERIMENT_H_
