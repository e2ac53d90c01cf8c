// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccrcp/bounds.h"
#include "ccrcp/consensus.h"
#include "ccrcp/experiment.h"
#include "ccrcp/hull.h"
#include "ccrcp/oracles.h"
#include "ccrcp/removal.h"
#include "ccrcp/scenarios.h"
#include "ccrcp/solve.h"
#include "ccrcp/tolerances.h"

namespace ccrcp {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Failed only on a check recorded as unattainable with exact arithmetic.
  bool known_unattainable = false;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

PoolPtr MakePool(ScenarioKind kind, int n, std::uint64_t seed) {
  switch (kind) {
    case ScenarioKind::kEllipsoidMixture:
      return GenMixture(n, seed);
    case ScenarioKind::kGaussianClassification:
      return GenClassification(n, 2, seed);
    case ScenarioKind::kUncertainLp:
      return GenUncertainLp(n, 2, seed);
  }
  return nullptr;
}

constexpr ScenarioKind kKinds[] = {ScenarioKind::kEllipsoidMixture,
                                   ScenarioKind::kGaussianClassification,
                                   ScenarioKind::kUncertainLp};
constexpr Protocol kProtocols[] = {Protocol::kAcc, Protocol::kVcc,
                                   Protocol::kQvcc};
constexpr int kSweepBandwidth = 5;

bool NotBelow(double later, double earlier) {
  if (std::isnan(later) || std::isnan(earlier)) return true;
  if (later == std::numeric_limits<double>::infinity()) return true;
  return later >= earlier - 1e-9 * (1.0 + std::abs(earlier));
}

int MonotoneViolations(const RunReport& r) {
  int bad = 0;
  for (std::size_t t = 1; t < r.per_round.size(); ++t) {
    for (std::size_t i = 0; i < r.per_round[t].nodes.size(); ++i) {
      bad += !NotBelow(r.per_round[t].nodes[i].j_local,
                       r.per_round[t - 1].nodes[i].j_local);
    }
  }
  return bad;
}

int DominanceViolations(const RunReport& r, const DirectedGraph& g) {
  int bad = 0;
  for (std::size_t t = 1; t < r.per_round.size(); ++t) {
    for (const auto& [i, j] : g.edges()) {
      bad += !NotBelow(r.per_round[t].nodes[j].j_local,
                       r.per_round[t - 1].nodes[i].j_local);
    }
  }
  return bad;
}

// Counters shared by the criteria that read the consensus sweep.
struct Sweep {
  int runs = 0;
  int mismatches = 0;
  double worst_error = 0.0;
  double seconds = 0.0;
  int vcc_runs = 0;
  int vcc_wrong_rounds = 0;
  int acc_messages_over_d = 0;
  int acc_worst_message = 0;
  int acc_runs = 0;
  int acc_iterations_outside = 0;
  double acc_worst_ratio = 0.0;
  double acc_best_ratio = std::numeric_limits<double>::infinity();
  int traces = 0;
  int monotone_violations = 0;
  int dominance_violations = 0;
};

Sweep RunSweep() {
  Sweep sw;
  const auto start = std::chrono::steady_clock::now();
  const int node_counts[] = {5, 10, 25};
  const int sizes[] = {200, 2000};
  for (ScenarioKind kind : kKinds) {
    for (const char* topology : {"chain", "geometric"}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = node_counts[seed % 3];
        const int size = sizes[seed % 2];
        const PoolPtr pool = MakePool(kind, size, 100 + seed);
        const ConvexProgram program =
            ConvexProgram::Default(pool, pool->AllIndices());
        const Partition partition = EvenPartition(size, n);
        const DirectedGraph g = MakeTopology(topology, n, 100 + seed);
        const Solution central = SolveOrUnbounded(program);
        for (Protocol p : kProtocols) {
          RunOptions options;
          options.bandwidth = kSweepBandwidth;
          const RunReport r = RunProtocol(p, g, program, partition, options);
          const double err = ConsensusError(r, central);
          ++sw.runs;
          sw.worst_error = std::max(sw.worst_error, err);
          sw.mismatches += !(r.converged && err <= 1e-6);
          ++sw.traces;
          sw.monotone_violations += MonotoneViolations(r);
          if (p != Protocol::kQvcc) {
            sw.dominance_violations += DominanceViolations(r, g);
          }
          if (p == Protocol::kVcc) {
            ++sw.vcc_runs;
            sw.vcc_wrong_rounds += r.rounds != g.diameter();
          }
          if (p == Protocol::kAcc) {
            ++sw.acc_runs;
            sw.acc_worst_message =
                std::max(sw.acc_worst_message, r.max_constraints_per_message);
            sw.acc_messages_over_d +=
                r.max_constraints_per_message > program.dim();
            const int diam = g.diameter();
            sw.acc_iterations_outside +=
                r.rounds < diam || r.rounds > 5 * diam;
            const double ratio = static_cast<double>(r.rounds) / diam;
            sw.acc_worst_ratio = std::max(sw.acc_worst_ratio, ratio);
            sw.acc_best_ratio = std::min(sw.acc_best_ratio, ratio);
          }
        }
      }
    }
  }
  sw.seconds = std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return sw;
}

Outcome Criterion1(const Sweep& sw) {
  Outcome o;
  o.pass = sw.mismatches == 0 && sw.seconds < 120.0;
  o.detail = Format(
      "%d runs (3 protocols x chain/geometric x 3 families x 20 seeds), "
      "%d mismatches, worst error %.3g, %.1f s",
      sw.runs, sw.mismatches, sw.worst_error, sw.seconds);
  return o;
}

Outcome Criterion2(const Sweep& sw) {
  int extra_runs = 0, extra_wrong = 0;
  // Chains up to 30 nodes, one constraint family each.
  for (int n = 1; n <= 30; ++n) {
    const PoolPtr pool = MakePool(kKinds[n % 3], 150, n);
    const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
    const DirectedGraph g = GenChain(n);
    RunOptions options;
    options.trace_objective = false;
    const RunReport r = RunVcc(g, program, EvenPartition(150, n), options);
    ++extra_runs;
    extra_wrong += r.rounds != n - 1;
  }
  Outcome o;
  o.pass = sw.vcc_wrong_rounds == 0 && extra_wrong == 0;
  o.detail = Format("%d VCC runs with rounds != diameter out of %d",
                    sw.vcc_wrong_rounds + extra_wrong, sw.vcc_runs + extra_runs);
  return o;
}

Outcome Criterion3(const Sweep& sw) {
  Outcome o;
  o.pass = sw.acc_messages_over_d == 0;
  o.detail = Format("%d of %d ACC runs sent more than d constraints; largest "
                    "message %d",
                    sw.acc_messages_over_d, sw.acc_runs, sw.acc_worst_message);
  return o;
}

Outcome Criterion4() {
  int runs = 0, over_m = 0, over_bound = 0, wrong = 0, trace_diff = 0;
  for (int n : {3, 5, 10}) {
    const DirectedGraph g = GenChain(n);
    int d_max = 0;
    for (int i = 0; i < n; ++i) {
      d_max = std::max<int>(d_max, g.in_neighbors(i).size());
    }
    for (int m : {1, 3, 5}) {
      for (ScenarioKind kind : kKinds) {
        const PoolPtr pool = MakePool(kind, 300, 10 * n + m);
        const ConvexProgram program =
            ConvexProgram::Default(pool, pool->AllIndices());
        const Partition partition = EvenPartition(300, n);
        int n_max = 0;
        for (const IndexSet& part : partition) {
          n_max = std::max<int>(n_max, part.size());
        }
        const RunReport r = RunQvcc(g, program, partition, m);
        ++runs;
        over_m += r.max_constraints_per_message > m;
        const double bound = std::ceil(static_cast<double>(n_max) / m) *
                             (std::pow(d_max + 1.0, g.diameter()) - 1.0) / d_max;
        over_bound += r.rounds > bound;
        wrong += !(r.converged &&
                   ConsensusError(r, SolveOrUnbounded(program)) <= 1e-6);
      }
    }
    for (ScenarioKind kind : kKinds) {
      const PoolPtr pool = MakePool(kind, 300, 7 * n);
      const ConvexProgram program =
          ConvexProgram::Default(pool, pool->AllIndices());
      const Partition partition = EvenPartition(300, n);
      RunOptions options;
      options.record_candidates = true;
      const RunReport v = RunVcc(g, program, partition, options);
      const RunReport q = RunQvcc(g, program, partition, 300, options);
      for (int t = 0; t <= v.rounds; ++t) {
        trace_diff += q.per_round[t].candidates != v.per_round[t].candidates;
      }
    }
  }
  Outcome o;
  o.pass = over_m == 0 && over_bound == 0 && wrong == 0 && trace_diff == 0;
  o.detail = Format("%d runs: %d over bandwidth, %d over round bound, %d "
                    "wrong solutions, %d rounds where unbounded-m trace "
                    "differs from VCC",
                    runs, over_m, over_bound, wrong, trace_diff);
  return o;
}

Outcome Criterion5(const Sweep& sw) {
  Outcome o;
  o.pass = sw.monotone_violations == 0 && sw.dominance_violations == 0;
  o.detail = Format("%d traces: %d monotonicity violations, %d edge-dominance "
                    "violations (ACC and VCC)",
                    sw.traces, sw.monotone_violations, sw.dominance_violations);
  return o;
}

Outcome Criterion6() {
  int instances = 0, support = 0, essential = 0, active_value = 0, vert = 0;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(6, 12);
  for (int k = 0; k < 120; ++k) {
    const int n = size(rng);
    PoolPtr pool;
    switch (k % 3) {
      case 0: pool = GenUncertainLp(n, 2, 500 + k); break;
      case 1: pool = GenUncertainLp(n, 3, 500 + k); break;
      default: pool = GenMixture(n, 500 + k, 1); break;
    }
    const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
    const Solution s = Solve(program);
    if (!s.feasible()) continue;
    ++instances;
    const double j = OptimalValue(program);
    support += !IsSubset(SupportSetOracle(program), s.active);
    for (const IndexSet& e : EssentialSetsOracle(program)) {
      essential += !IsSubset(e, s.active);
    }
    active_value +=
        !SameObjective(OptimalValue(program.WithIndices(s.active)), j);
    vert += !SameObjective(
        OptimalValue(program.WithIndices(VertexSubset(*pool, pool->AllIndices()))),
        j);
  }
  Outcome o;
  o.pass = instances >= 100 && support + essential + active_value + vert == 0;
  o.detail = Format("%d instances: %d Sc not in Ac, %d essential sets not in "
                    "Ac, %d J*(Ac) != J*, %d J*(vert) != J*",
                    instances, support, essential, active_value, vert);
  return o;
}

// Binomial tail by direct summation in long double.
double PhiDirect(double eps, int q, int n) {
  const long double e = eps;
  long double term = std::exp(n * std::log1p(-e));
  long double sum = term;
  for (int j = 1; j <= q; ++j) {
    term *= static_cast<long double>(n - j + 1) / j * e / (1.0L - e);
    sum += term;
  }
  return static_cast<double>(sum);
}

Outcome Criterion7() {
  const double eps = EpsilonBound(1e-8, 3, 20000);
  const double phi = Phi(0.01, 5, 3000);
  int grid_bad = 0, exact_bad = 0;
  double worst = 0.0;
  for (int n : {30, 300, 3000}) {
    for (int q = 0; q <= 8; ++q) {
      double prev = 2.0;
      for (int k = 0; k <= 50; ++k) {
        const double e = k / 50.0;
        const double v = Phi(e, q, n);
        grid_bad += v > prev + 1e-15;
        grid_bad += Phi(e, q + 1, n) < v - 1e-15;
        prev = v;
        if (k > 0 && k < 50) {
          const double diff = std::abs(v - PhiDirect(e, q, n));
          worst = std::max(worst, diff);
          exact_bad += diff > 1e-12;
        }
      }
    }
  }
  Outcome o;
  const bool rest = eps >= 2.0e-3 && eps <= 2.1e-3 && grid_bad == 0 &&
                    exact_bad == 0;
  o.pass = rest && phi <= 2e-8;
  // The exact tail is 2.0309e-8; the 2e-8 figure is a rounded claim.
  o.known_unattainable = rest && !o.pass;
  o.detail = Format("epsilon_bound(1e-8, 3, 20000) = %.6g, phi(0.01, 5, 3000) "
                    "= %.3g, %d grid monotonicity violations, worst |phi - "
                    "direct sum| = %.2g",
                    eps, phi, grid_bad, worst);
  return o;
}

std::vector<ConstraintId> RemovedIds(const ConstraintPool& pool,
                                     const RemovalReport& r) {
  std::vector<ConstraintId> ids;
  for (Index j : r.removed) ids.push_back(pool[j].id);
  return ids;
}

Outcome Criterion8() {
  int instances = 0, differ = 0, permuted_differ = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int size = 40 + static_cast<int>(seed % 3) * 10;
    const PoolPtr pool = MakePool(kKinds[seed % 3], size, 900 + seed);
    const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
    const int r = 1 + static_cast<int>(seed % 5);
    const RemovalReport central = CentralizedRemoval(program, r);
    const DirectedGraph g = MakeTopology("geometric", 5, seed);
    const RemovalReport acc = RemoveConstraints(
        g, program, EvenPartition(size, 5), r, Protocol::kAcc);
    ++instances;
    const std::vector<ConstraintId> want = RemovedIds(*pool, central);
    differ += RemovedIds(*pool, acc) != want;

    // Same realizations fed in another order, spread over the nodes at random.
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> deltas;
    for (const Constraint& c : pool->constraints()) deltas.push_back(c.delta);
    std::shuffle(deltas.begin(), deltas.end(), rng);
    const PoolPtr shuffled =
        ConstraintPool::Create(pool->family(), pool->dim(), deltas);
    Partition partition(5);
    std::uniform_int_distribution<int> node(0, 4);
    for (Index j = 0; j < shuffled->size(); ++j) {
      partition[node(rng)].push_back(j);
    }
    const RemovalReport again = RemoveConstraints(
        g, ConvexProgram::Default(shuffled, shuffled->AllIndices()), partition,
        r, Protocol::kAcc);
    permuted_differ += RemovedIds(*shuffled, again) != want;
  }
  Outcome o;
  o.pass = differ == 0 && permuted_differ == 0;
  o.detail = Format("%d instances: %d sequences differ from centralized, %d "
                    "differ after shuffling pool and partition",
                    instances, differ, permuted_differ);
  return o;
}

double EllipseArea(const Solution& s) {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  UnpackEllipsoid(s.x_star, 2, &center, &shape);
  return M_PI / std::sqrt(shape.determinant());
}

Outcome Criterion9() {
  const PoolPtr pool = GenMixture(300, 2024);
  const ConvexProgram program = ConvexProgram::Default(pool, pool->AllIndices());
  const RemovalReport r = RemoveConstraints(
      MakeTopology("geometric", 10, 2024), program, EvenPartition(300, 10), 16,
      Protocol::kAcc);
  std::vector<double> area;
  IndexSet remaining = pool->AllIndices();
  area.push_back(EllipseArea(Solve(program)));
  for (Index j : r.removed) {
    remaining.erase(std::find(remaining.begin(), remaining.end(), j));
    area.push_back(EllipseArea(Solve(program.WithIndices(remaining))));
  }
  int increases = 0;
  for (std::size_t k = 1; k < area.size(); ++k) increases += area[k] >= area[k - 1];
  Outcome o;
  o.pass = r.removed.size() == 16 && increases == 0;
  o.detail = Format("16 removals, area %.4f -> %.4f, %d stages without a "
                    "strict decrease",
                    area.front(), area.back(), increases);
  return o;
}

Outcome Criterion10(const Sweep& sw) {
  std::vector<double> speedups;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ExperimentSpec spec;
    spec.scenario.kind = ScenarioKind::kUncertainLp;
    spec.scenario.n_samples = 200000;
    spec.scenario.seed = seed;
    spec.topology = "geometric";
    spec.nodes = 8;
    spec.run.trace_objective = false;
    const ExperimentResult r = RunExperiment(spec);
    speedups.push_back(r.passed ? r.centralized_time_s / r.critical_path_s
                                : 0.0);
  }
  std::sort(speedups.begin(), speedups.end());
  const double median = speedups[1];
  Outcome o;
  o.pass = median >= 2.0 && sw.acc_iterations_outside == 0;
  o.detail = Format("N=2e5 linear, 8 workers: median centralized/critical-path "
                    "speedup %.2f (need >= 2); ACC iterations/diam in "
                    "[%.2f, %.2f], %d runs outside [diam, 5 diam]",
                    median, sw.acc_best_ratio, sw.acc_worst_ratio,
                    sw.acc_iterations_outside);
  return o;
}

}  // namespace
}  // namespace ccrcp

// --allow-known-unattainable: a criterion that fails only on a check known to
// be unattainable still prints FAIL but does not set the exit status.
int main(int argc, char** argv) {
  using namespace ccrcp;
  const bool allow_known = argc > 1 && std::string(argv[1]) ==
                                           "--allow-known-unattainable";
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const Sweep sweep = RunSweep();
  const std::vector<std::function<Outcome()>> criteria = {
      [&] { return Criterion1(sweep); }, [&] { return Criterion2(sweep); },
      [&] { return Criterion3(sweep); }, [] { return Criterion4(); },
      [&] { return Criterion5(sweep); }, [] { return Criterion6(); },
      [] { return Criterion7(); },       [] { return Criterion8(); },
      [] { return Criterion9(); },       [&] { return Criterion10(sweep); },
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass && !(allow_known && o.known_unattainable);
    std::printf("%s criterion %zu: %s%s\n", o.pass ? "PASS" : "FAIL", k + 1,
                o.detail.c_str(),
                o.known_unattainable ? " [known unattainable]" : "");
  }
  return failed == 0 ? 0 : 1;
}
