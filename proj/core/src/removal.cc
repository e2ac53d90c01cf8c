#include "ccrcp/removal.h"

#include <algorithm>
#include <cmath>

#include "ccrcp/errors.h"

namespace ccrcp {

Index SelectMaxMultiplier(const Solution& solution,
                          const IndexSet& candidates) {
  if (candidates.empty()) return -1;
  double best = -std::numeric_limits<double>::infinity();
  for (Index j : candidates) best = std::max(best, solution.Multiplier(j));
  const double floor = best - 1e-9 * std::max(1.0, std::abs(best));
  for (Index j : candidates) {
    if (solution.Multiplier(j) >= floor) return j;
  }
  return candidates.front();
}

namespace {

void CheckCount(const IndexSet& all, int r) {
  if (r < 0) throw InvalidArgument("r must be nonnegative");
  if (r > static_cast<int>(all.size())) {
    throw InvalidArgument("cannot remove " + std::to_string(r) + " of " +
                          std::to_string(all.size()) + " constraints");
  }
}

}  // namespace

RemovalReport RemoveConstraints(const DirectedGraph& graph,
                                const ConvexProgram& program,
                                const Partition& partition, int r,
                                Protocol protocol, const RunOptions& options) {
  IndexSet all;
  for (const IndexSet& part : partition) all = Union(all, Normalize(part));
  CheckCount(all, r);

  RemovalReport report;
  if (protocol != Protocol::kAcc) {
    report.warning =
        "hull-based removal ranks only vert(C); constraints with a positive "
        "multiplier outside the hull vertices are never considered";
  }
  Partition remaining = partition;
  for (IndexSet& part : remaining) part = Normalize(std::move(part));

  for (int stage = 0; stage < r; ++stage) {
    const RunReport run =
        RunProtocol(protocol, graph, program, remaining, options);
    if (!run.final.feasible()) {
      if (protocol == Protocol::kAcc) {
        throw InfeasibleStage("removal stage " + std::to_string(stage) +
                              " is infeasible");
      }
    }
    const IndexSet& agreed = run.final_states.front().candidate;
    const Index c = SelectMaxMultiplier(run.final, agreed);
    if (c < 0) {
      throw InfeasibleStage("removal stage " + std::to_string(stage) +
                            " has no candidate constraint");
    }
    report.per_stage.push_back(RemovalStage{run.final.j_star, c,
                                            program.pool()[c].id,
                                            run.final.Multiplier(c),
                                            run.rounds});
    report.removed.push_back(c);
    for (IndexSet& part : remaining) part = Difference(part, IndexSet{c});
  }
  IndexSet rest;
  for (const IndexSet& part : remaining) rest = Union(rest, part);
  report.final = SolveOrUnbounded(program.WithIndices(rest));
  return report;
}

RemovalReport CentralizedRemoval(const ConvexProgram& program, int r) {
  IndexSet rest = program.indices();
  CheckCount(rest, r);
  RemovalReport report;
  for (int stage = 0; stage < r; ++stage) {
    const Solution s = SolveOrUnbounded(program.WithIndices(rest));
    if (!s.feasible()) {
      throw InfeasibleStage("removal stage " + std::to_string(stage) +
                            " is infeasible");
    }
    const Index c = SelectMaxMultiplier(s, s.active);
    if (c < 0) {
      throw InfeasibleStage("removal stage " + std::to_string(stage) +
                            " has no active constraint");
    }
    report.per_stage.push_back(RemovalStage{s.j_star, c, program.pool()[c].id,
                                            s.Multiplier(c), 0});
    report.removed.push_back(c);
    rest = Difference(rest, IndexSet{c});
  }
  report.final = SolveOrUnbounded(program.WithIndices(rest));
  return report;
}

}  // namespace ccrcp
