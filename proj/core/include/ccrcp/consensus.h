#ifndef CCRCP_CONSENSUS_H_
#define CCRCP_CONSENSUS_H_

#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ccrcp/graph.h"
#include "ccrcp/hull.h"
#include "ccrcp/index_set.h"
#include "ccrcp/program.h"
#include "ccrcp/solve.h"

namespace ccrcp {

enum class Protocol { kAcc, kVcc, kQvcc };

std::string_view ProtocolName(Protocol protocol);
Protocol ParseProtocol(std::string_view name);

// Local constraint sets C_i, one per node.
using Partition = std::vector<IndexSet>;

struct NodeState {
  int id = 0;
  IndexSet local;      // C_i
  IndexSet candidate;  // A_i (ACC) or V_i (VCC, qVCC)
  std::vector<Index> queue;  // qVCC transmission set T_i, FIFO order
  double j_local = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x_local;   // empty when infeasible or not yet solved
  int stagnation = 0;        // ACC: rounds with unchanged J_i
  // qVCC: rounds since a nonempty transmission set could last have been
  // seen anywhere within this many hops.
  int quiet = 0;
  bool running = true;
  int stop_round = -1;
};

struct NodeRecord {
  double j_local = 0.0;
  int candidate_size = 0;
  // Constraints this node broadcast at the end of the round.
  int sent = 0;
  bool running = true;
};

struct RoundRecord {
  int round = 0;
  std::vector<NodeRecord> nodes;
  // Filled when RunOptions::record_candidates is set.
  std::vector<IndexSet> candidates;
};

struct RunReport {
  Protocol protocol = Protocol::kAcc;
  int diameter = 0;
  // Rounds executed until every node stopped (VCC: exactly the diameter).
  int rounds = 0;
  // Last round in which any node's candidate set or J_i changed.
  int convergence_round = 0;
  std::vector<RoundRecord> per_round;  // per_round[t] for t = 0..rounds
  std::vector<NodeState> final_states;
  Solution final;  // solve over node 0's final candidate set
  int max_constraints_per_message = 0;
  bool converged = false;  // every node holds the same x and J
  bool infeasible_detected = false;
  // Sum over rounds of the slowest node's compute time: the wall time of an
  // ideal deployment with one processor per node.
  double critical_path_s = 0.0;
  // Sum of all node compute times (one processor simulating everyone).
  double total_compute_s = 0.0;
};

struct RunOptions {
  // qVCC bandwidth m; must be >= 1 for qVCC.
  int bandwidth = 0;
  // Worker threads per round; results do not depend on it.
  int threads = 1;
  // Order in which nodes are updated within a round; empty means 0..n-1.
  std::vector<int> update_order;
  bool record_candidates = false;
  // VCC and qVCC: solve P[V_i(t)] every round for the J trace. When false
  // only the final round is solved and J_i(t) is recorded as NaN before it.
  bool trace_objective = true;
  int max_rounds = 1000000;
};

// Synchronous round engine. Every node reads the previous round's broadcast
// of its in-neighbours and writes only its own next state, so the update
// order and the number of worker threads never affect the outcome.
class ConsensusEngine {
 public:
  // `program` supplies the pool, objective and domain; its index set is
  // ignored. Throws InvalidArgument when the partition does not match the
  // graph or references indices outside the pool.
  ConsensusEngine(Protocol protocol, const DirectedGraph& graph,
                  ConvexProgram program, Partition partition,
                  RunOptions options = {});

  // Round 0: local solves (ACC) or local hulls (VCC, qVCC).
  void Initialize();
  bool Done() const;
  // One synchronous round t -> t+1.
  void Step();
  // Completes the final local solves and assembles the report.
  RunReport Finish();
  RunReport Run();

  int round() const { return round_; }
  const std::vector<NodeState>& states() const { return states_; }

  // JSON text holding the node states and the trace so far. Hull hints are
  // a cache and are not included.
  std::string Snapshot() const;
  // Replaces the engine state with a snapshot taken from an engine built
  // with the same protocol, graph, program and partition.
  void Restore(const std::string& snapshot);

 private:
  void UpdateAcc(int i, const std::vector<NodeState>& prev, NodeState& next);
  void UpdateVcc(int i, const std::vector<NodeState>& prev, NodeState& next);
  void UpdateQvcc(int i, const std::vector<NodeState>& prev, NodeState& next,
                  const std::vector<IndexSet>& messages);
  void SolveLocal(NodeState& node, const IndexSet& set);
  void RecordRound(const std::vector<double>& times);
  std::vector<IndexSet> QvccMessages() const;
  int Sent(const NodeState& node) const;
  void ForEachNode(const std::function<void(int)>& work,
                   std::vector<double>& times);

  Protocol protocol_;
  const DirectedGraph& graph_;
  ConvexProgram program_;
  Partition partition_;
  RunOptions options_;
  std::vector<NodeState> states_;
  std::vector<HullHints> hints_;
  std::vector<RoundRecord> trace_;
  int round_ = -1;
  int last_change_ = 0;
  double critical_path_s_ = 0.0;
  double total_compute_s_ = 0.0;
};

RunReport RunAcc(const DirectedGraph& graph, const ConvexProgram& program,
                 const Partition& partition, const RunOptions& options = {});
RunReport RunVcc(const DirectedGraph& graph, const ConvexProgram& program,
                 const Partition& partition, const RunOptions& options = {});
RunReport RunQvcc(const DirectedGraph& graph, const ConvexProgram& program,
                  const Partition& partition, int bandwidth,
                  RunOptions options = {});
RunReport RunProtocol(Protocol protocol, const DirectedGraph& graph,
                      const ConvexProgram& program, const Partition& partition,
                      const RunOptions& options = {});

// Solution of P[set] treating a non-full-dimensional ellipsoid set as
// unbounded below: feasible, J = -inf, empty x, active = set.
Solution SolveOrUnbounded(const ConvexProgram& program);

}  // namespace ccrcp

#endif  // CCRCP_CONSENSUS_H_
