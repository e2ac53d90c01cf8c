#include "ccrcp/experiment.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace ccrcp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

double ValueGap(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) {
    return kInf;
  }
  return std::abs(a - b);
}

}  // namespace

double ConsensusError(const RunReport& report, const Solution& reference) {
  double worst = 0.0;
  for (const NodeState& s : report.final_states) {
    worst = std::max(worst, ValueGap(s.j_local, reference.j_star));
    if (s.x_local.size() != reference.x_star.size()) return kInf;
    if (s.x_local.size() > 0) {
      worst = std::max(
          worst, (s.x_local - reference.x_star).lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

ExperimentResult RunExperiment(const DirectedGraph& graph,
                               const ConvexProgram& program,
                               const Partition& partition,
                               const ExperimentSpec& spec) {
  ExperimentResult result;
  result.topology = spec.topology;
  result.protocol = spec.protocol;
  result.nodes = graph.size();
  result.n_constraints = static_cast<int>(program.indices().size());
  result.diameter = graph.diameter();

  auto start = std::chrono::steady_clock::now();
  const Solution reference = SolveOrUnbounded(program);
  result.centralized_time_s = Seconds(start);

  RunOptions options = spec.run;
  if (spec.protocol == Protocol::kQvcc) options.bandwidth = spec.bandwidth;
  start = std::chrono::steady_clock::now();
  const RunReport report =
      RunProtocol(spec.protocol, graph, program, partition, options);
  result.wall_time_s = Seconds(start);
  result.critical_path_s = report.critical_path_s;
  result.iterations = report.rounds;
  result.max_constraints_exchanged = report.max_constraints_per_message;
  result.consensus_error = ConsensusError(report, reference);
  result.passed = report.converged && result.consensus_error <= 1e-6;
  return result;
}

ExperimentResult RunExperiment(const ExperimentSpec& spec) {
  const PoolPtr pool = GenerateScenario(spec.scenario);
  const Partition partition =
      spec.scenario.sizes.empty()
          ? EvenPartition(pool->size(), spec.nodes)
          : SizedPartition(pool->size(), spec.scenario.sizes);
  const DirectedGraph graph = MakeTopology(
      spec.topology, static_cast<int>(partition.size()), spec.scenario.seed);
  const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  return RunExperiment(graph, program, partition, spec);
}

void WriteResultsCsv(const std::vector<ExperimentResult>& results,
                     std::ostream& out) {
  out << "topology,protocol,nodes,n_constraints,diameter,iterations,"
         "max_constraints_exchanged,wall_time_s,critical_path_s,"
         "centralized_time_s,consensus_error,passed\n";
  for (const ExperimentResult& r : results) {
    out << r.topology << ',' << ProtocolName(r.protocol) << ',' << r.nodes
        << ',' << r.n_constraints << ',' << r.diameter << ',' << r.iterations
        << ',' << r.max_constraints_exchanged << ',' << r.wall_time_s << ','
        << r.critical_path_s << ',' << r.centralized_time_s << ','
        << r.consensus_error << ',' << (r.passed ? 1 : 0) << '\n';
  }
}

}  // namespace ccrcp
