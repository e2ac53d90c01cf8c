#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ccrcp/consensus.h"
#include "ccrcp/errors.h"
#include "ccrcp/experiment.h"
#include "ccrcp/hull.h"
#include "ccrcp/json_io.h"
#include "ccrcp/scenarios.h"

namespace ccrcp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Instance {
  PoolPtr pool;
  ConvexProgram program;
  Partition partition;
};

Instance Make(PoolPtr pool, int nodes) {
  ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  Partition partition = EvenPartition(pool->size(), nodes);
  return Instance{std::move(pool), std::move(program), std::move(partition)};
}

bool Below(double a, double b) {
  return a <= b + 1e-9 * (1.0 + std::abs(b)) || b == kInf;
}

void ExpectMonotone(const RunReport& r) {
  for (std::size_t t = 1; t < r.per_round.size(); ++t) {
    for (std::size_t i = 0; i < r.per_round[t].nodes.size(); ++i) {
      const double before = r.per_round[t - 1].nodes[i].j_local;
      const double after = r.per_round[t].nodes[i].j_local;
      if (std::isnan(before) || std::isnan(after)) continue;
      EXPECT_TRUE(Below(before, after)) << "node " << i << " round " << t;
    }
  }
}

void ExpectEdgeDominance(const RunReport& r, const DirectedGraph& g) {
  for (std::size_t t = 1; t < r.per_round.size(); ++t) {
    for (const auto& [i, j] : g.edges()) {
      const double from = r.per_round[t - 1].nodes[i].j_local;
      const double to = r.per_round[t].nodes[j].j_local;
      if (std::isnan(from) || std::isnan(to)) continue;
      EXPECT_TRUE(Below(from, to)) << i << "->" << j << " round " << t;
    }
  }
}

void ExpectMatchesCentral(const RunReport& r, const ConvexProgram& program) {
  const Solution central = SolveOrUnbounded(program);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(ConsensusError(r, central), 1e-6);
}

void ExpectSameRun(const RunReport& a, const RunReport& b) {
  ASSERT_EQ(a.rounds, b.rounds);
  ASSERT_EQ(a.per_round.size(), b.per_round.size());
  for (std::size_t t = 0; t < a.per_round.size(); ++t) {
    for (std::size_t i = 0; i < a.per_round[t].nodes.size(); ++i) {
      const NodeRecord& x = a.per_round[t].nodes[i];
      const NodeRecord& y = b.per_round[t].nodes[i];
      EXPECT_TRUE(x.j_local == y.j_local ||
                  (std::isnan(x.j_local) && std::isnan(y.j_local)));
      EXPECT_EQ(x.sent, y.sent);
      EXPECT_EQ(x.candidate_size, y.candidate_size);
    }
    EXPECT_EQ(a.per_round[t].candidates, b.per_round[t].candidates);
  }
  for (std::size_t i = 0; i < a.final_states.size(); ++i) {
    EXPECT_EQ(a.final_states[i].candidate, b.final_states[i].candidate);
    EXPECT_TRUE(a.final_states[i].x_local == b.final_states[i].x_local);
  }
}

TEST(Acc, EveryNodeHoldingEverythingStopsAfterTheWait) {
  const PoolPtr pool = GenMixture(100, 3);
  const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  for (const DirectedGraph& g : {GenComplete(4), GenChain(5)}) {
    const Partition all(g.size(), pool->AllIndices());
    const RunReport r = RunAcc(g, program, all);
    EXPECT_EQ(r.convergence_round, 0);
    EXPECT_EQ(r.rounds, 2 * g.diameter() + 1);
    for (const NodeState& s : r.final_states) {
      EXPECT_EQ(s.stop_round, 2 * g.diameter() + 1);
    }
    ExpectMatchesCentral(r, program);
  }
}

TEST(Acc, ChainEllipsoidMatchesCentralSolve) {
  const Instance inst = Make(GenMixture(2000, 11), 10);
  const DirectedGraph g = GenChain(10);
  const RunReport r = RunAcc(g, inst.program, inst.partition);
  ExpectMatchesCentral(r, inst.program);
  EXPECT_GE(r.rounds, g.diameter());
  EXPECT_LE(r.rounds, 4 * g.diameter());
  const IndexSet active = Solve(inst.program).active;
  for (const NodeState& s : r.final_states) EXPECT_EQ(s.candidate, active);
  ExpectMonotone(r);
  ExpectEdgeDominance(r, g);
}

TEST(Acc, MessagesCarryAtMostDConstraints) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (const PoolPtr& pool :
         {GenMixture(600, seed), GenClassification(600, 4, seed),
          GenUncertainLp(600, 3, seed)}) {
      const Instance inst = Make(pool, 8);
      const DirectedGraph g = MakeTopology("geometric", 8, seed);
      const RunReport r = RunAcc(g, inst.program, inst.partition);
      EXPECT_LE(r.max_constraints_per_message, inst.program.dim());
      ExpectMatchesCentral(r, inst.program);
      ExpectMonotone(r);
      ExpectEdgeDominance(r, g);
    }
  }
}

TEST(Acc, InfeasibilitySpreadsWithinTheDiameter) {
  // x <= -1 at node 0 and x >= 1 at node 4 of a five-node chain.
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 1.0;
  b << -1.0, 1.0;
  const PoolPtr pool =
      ConstraintPool::Create(Family::kLinearHalfspace, 2, {a, b});
  const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  Partition partition(5);
  partition[0] = {*pool->Find(HashDelta(Family::kLinearHalfspace, a))};
  partition[4] = {*pool->Find(HashDelta(Family::kLinearHalfspace, b))};
  const DirectedGraph g = GenChain(5);
  const RunReport r = RunAcc(g, program, partition);
  EXPECT_TRUE(r.infeasible_detected);
  EXPECT_FALSE(r.final.feasible());
  int first = std::numeric_limits<int>::max();
  for (const RoundRecord& rr : r.per_round) {
    for (const NodeRecord& n : rr.nodes) {
      if (n.j_local == kInf) first = std::min(first, rr.round);
    }
  }
  for (const NodeState& s : r.final_states) {
    EXPECT_EQ(s.j_local, kInf);
    EXPECT_TRUE(s.candidate.empty());
    EXPECT_LE(s.stop_round, first + g.diameter());
  }
  ExpectMonotone(r);
}

TEST(Vcc, RoundsEqualDiameterAndCandidatesEqualVert) {
  for (int n : {1, 4, 10}) {
    const Instance inst = Make(GenMixture(500, n), n);
    const DirectedGraph g = GenChain(n);
    const RunReport r = RunVcc(g, inst.program, inst.partition);
    EXPECT_EQ(r.rounds, g.diameter());
    const IndexSet vert = VertexSubset(*inst.pool, inst.pool->AllIndices());
    for (const NodeState& s : r.final_states) EXPECT_EQ(s.candidate, vert);
    ExpectMatchesCentral(r, inst.program);
    ExpectMonotone(r);
    ExpectEdgeDominance(r, g);
  }
}

TEST(Vcc, GeometricGraphMatchesCentralSolve) {
  const Instance inst = Make(GenUncertainLp(1000, 3, 4), 50);
  const DirectedGraph g = MakeTopology("geometric", 50, 4);
  const RunReport r = RunVcc(g, inst.program, inst.partition);
  EXPECT_EQ(r.rounds, g.diameter());
  ExpectMatchesCentral(r, inst.program);
}

TEST(Qvcc, BandwidthAndRoundBound) {
  for (int n : {3, 5, 10}) {
    for (int m : {1, 3, 5}) {
      const Instance inst = Make(GenMixture(300, 7 * n + m), n);
      const DirectedGraph g = GenChain(n);
      const RunReport r = RunQvcc(g, inst.program, inst.partition, m);
      EXPECT_LE(r.max_constraints_per_message, m);
      int n_max = 0;
      for (const IndexSet& part : inst.partition) {
        n_max = std::max<int>(n_max, part.size());
      }
      int d_max = 0;
      for (int i = 0; i < n; ++i) {
        d_max = std::max<int>(d_max, g.in_neighbors(i).size());
      }
      const double bound = std::ceil(static_cast<double>(n_max) / m) *
                           (std::pow(d_max + 1, g.diameter()) - 1) / d_max;
      EXPECT_LE(r.rounds, bound);
      ExpectMatchesCentral(r, inst.program);
      ExpectMonotone(r);
      const RunReport v = RunVcc(g, inst.program, inst.partition);
      for (std::size_t i = 0; i < r.final_states.size(); ++i) {
        EXPECT_EQ(r.final_states[i].candidate, v.final_states[i].candidate);
      }
    }
  }
}

TEST(Qvcc, UnboundedBandwidthReproducesVcc) {
  const Instance inst = Make(GenUncertainLp(400, 3, 9), 6);
  const DirectedGraph g = GenChain(6);
  RunOptions options;
  options.record_candidates = true;
  const RunReport v = RunVcc(g, inst.program, inst.partition, options);
  const RunReport q = RunQvcc(g, inst.program, inst.partition, 1 << 20, options);
  for (int t = 0; t <= g.diameter(); ++t) {
    EXPECT_EQ(q.per_round[t].candidates, v.per_round[t].candidates);
  }
}

TEST(Qvcc, SingleConstraintMessagesOnTwoNodes) {
  Eigen::VectorXd a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 0;
  c << 0, 1;
  const PoolPtr pool =
      ConstraintPool::Create(Family::kEllipsoidMembership, 2, {a, b, c});
  const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  const DirectedGraph g = GenComplete(2);
  RunOptions options;
  options.record_candidates = true;
  const RunReport r = RunQvcc(g, program, {{0, 1, 2}, {}}, 1, options);
  for (std::size_t t = 1; t < r.per_round.size(); ++t) {
    EXPECT_LE(r.per_round[t].nodes[1].candidate_size,
              r.per_round[t - 1].nodes[1].candidate_size + 1);
  }
  EXPECT_EQ(r.final_states[1].candidate, (IndexSet{0, 1, 2}));
  EXPECT_LE(r.rounds, 3 + g.diameter() + 1);
  ExpectMatchesCentral(r, program);
}

TEST(Engine, UpdateOrderAndThreadsDoNotMatter) {
  const Instance inst = Make(GenClassification(400, 3, 2), 7);
  const DirectedGraph g = MakeTopology("geometric", 7, 3);
  for (Protocol p : {Protocol::kAcc, Protocol::kVcc, Protocol::kQvcc}) {
    RunOptions base;
    base.record_candidates = true;
    base.bandwidth = 2;
    const RunReport r0 = RunProtocol(p, g, inst.program, inst.partition, base);
    RunOptions reordered = base;
    reordered.update_order = {6, 2, 4, 0, 1, 5, 3};
    ExpectSameRun(r0, RunProtocol(p, g, inst.program, inst.partition, reordered));
    RunOptions threaded = base;
    threaded.threads = 3;
    ExpectSameRun(r0, RunProtocol(p, g, inst.program, inst.partition, threaded));
  }
}

TEST(Engine, SnapshotReplayReproducesTheTrace) {
  const Instance inst = Make(GenMixture(800, 5), 6);
  const DirectedGraph g = GenChain(6);
  for (Protocol p : {Protocol::kAcc, Protocol::kVcc, Protocol::kQvcc}) {
    RunOptions options;
    options.record_candidates = true;
    options.bandwidth = 3;
    ConsensusEngine first(p, g, inst.program, inst.partition, options);
    first.Initialize();
    for (int t = 0; t < 3 && !first.Done(); ++t) first.Step();
    const std::string snapshot = first.Snapshot();
    while (!first.Done()) first.Step();
    const RunReport a = first.Finish();

    ConsensusEngine second(p, g, inst.program, inst.partition, options);
    second.Restore(snapshot);
    while (!second.Done()) second.Step();
    const RunReport b = second.Finish();
    ExpectSameRun(a, b);
    EXPECT_EQ(a.convergence_round, b.convergence_round);
  }
}

TEST(Engine, RejectsMismatchedInput) {
  const Instance inst = Make(GenMixture(50, 1), 3);
  EXPECT_THROW(RunAcc(GenChain(4), inst.program, inst.partition),
               InvalidArgument);
  EXPECT_THROW(RunQvcc(GenChain(3), inst.program, inst.partition, 0),
               InvalidArgument);
  const DirectedGraph chain = GenChain(3);
  ConsensusEngine engine(Protocol::kAcc, chain, inst.program, inst.partition);
  EXPECT_THROW(engine.Restore("{not json"), InvalidArgument);
}

TEST(Engine, ReportSerializes) {
  const Instance inst = Make(GenMixture(60, 1), 3);
  const RunReport r = RunAcc(GenChain(3), inst.program, inst.partition);
  const io::Json j = io::RunReportToJson(r);
  EXPECT_EQ(j.at("rounds").get<int>(), r.rounds);
  EXPECT_EQ(j.at("per_round").size(), r.per_round.size());
  std::ostringstream csv;
  io::WriteTraceCsv(r, csv);
  EXPECT_EQ(csv.str().rfind("round,node,j_local,msg_constraints\n", 0), 0u);
}

}  // namespace
}  // namespace ccrcp
