#include "ccrcp/consensus.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "ccrcp/errors.h"
#include "ccrcp/json_io.h"

namespace ccrcp {

std::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kAcc:
      return "acc";
    case Protocol::kVcc:
      return "vcc";
    case Protocol::kQvcc:
      return "qvcc";
  }
  return "unknown";
}

Protocol ParseProtocol(std::string_view name) {
  if (name == "acc") return Protocol::kAcc;
  if (name == "vcc") return Protocol::kVcc;
  if (name == "qvcc") return Protocol::kQvcc;
  throw InvalidArgument("unknown protocol: " + std::string(name));
}

Solution SolveOrUnbounded(const ConvexProgram& program) {
  try {
    return Solve(program);
  } catch (const DegenerateInput&) {
    Solution s;
    s.status = SolveStatus::kFeasible;
    s.j_star = -std::numeric_limits<double>::infinity();
    s.active = program.indices();
    return s;
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool SameValue(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return SameObjective(a, b);
}

}  // namespace

ConsensusEngine::ConsensusEngine(Protocol protocol, const DirectedGraph& graph,
                                 ConvexProgram program, Partition partition,
                                 RunOptions options)
    : protocol_(protocol),
      graph_(graph),
      program_(std::move(program)),
      partition_(std::move(partition)),
      options_(std::move(options)) {
  const int n = graph_.size();
  if (static_cast<int>(partition_.size()) != n) {
    throw InvalidArgument("partition has " + std::to_string(partition_.size()) +
                          " parts for " + std::to_string(n) + " nodes");
  }
  for (IndexSet& part : partition_) {
    part = Normalize(std::move(part));
    for (Index j : part) {
      if (j < 0 || j >= program_.pool().size()) {
        throw InvalidArgument("partition references index outside the pool");
      }
    }
  }
  if (protocol_ == Protocol::kQvcc && options_.bandwidth < 1) {
    throw InvalidArgument("qVCC bandwidth must be at least 1");
  }
  if (!options_.update_order.empty()) {
    std::vector<int> sorted = options_.update_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[i] != i) {
        throw InvalidArgument("update order must be a permutation of nodes");
      }
    }
  }
  states_.resize(n);
  hints_.resize(n);
  for (int i = 0; i < n; ++i) {
    states_[i].id = i;
    states_[i].local = partition_[i];
  }
}

void ConsensusEngine::SolveLocal(NodeState& node, const IndexSet& set) {
  const Solution s = SolveOrUnbounded(program_.WithIndices(set));
  node.j_local = s.j_star;
  node.x_local = s.x_star;
  if (protocol_ == Protocol::kAcc) node.candidate = s.active;
}

void ConsensusEngine::ForEachNode(const std::function<void(int)>& work,
                                  std::vector<double>& times) {
  const int n = graph_.size();
  times.assign(n, 0.0);
  std::vector<int> order = options_.update_order;
  if (order.empty()) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
  }
  auto timed = [&](int i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      work(i);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("round " + std::to_string(round_ + 1) + " node " +
                             std::to_string(i) + ": " + e.what());
    }
    times[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
                   .count();
  };

  const int threads = std::min(options_.threads, n);
  if (threads <= 1) {
    for (int i : order) timed(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < n; k = next++) {
        try {
          timed(order[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int ConsensusEngine::Sent(const NodeState& node) const {
  if (!node.running) return 0;
  if (protocol_ == Protocol::kQvcc) {
    return std::min<int>(options_.bandwidth,
                         static_cast<int>(node.queue.size()));
  }
  return static_cast<int>(node.candidate.size());
}

void ConsensusEngine::RecordRound(const std::vector<double>& times) {
  RoundRecord record;
  record.round = round_;
  record.nodes.reserve(states_.size());
  for (const NodeState& s : states_) {
    record.nodes.push_back(NodeRecord{
        s.j_local, static_cast<int>(s.candidate.size()), Sent(s), s.running});
    if (options_.record_candidates) record.candidates.push_back(s.candidate);
  }
  double slowest = 0.0;
  for (double t : times) {
    slowest = std::max(slowest, t);
    total_compute_s_ += t;
  }
  critical_path_s_ += slowest;
  trace_.push_back(std::move(record));
}

void ConsensusEngine::Initialize() {
  round_ = -1;
  last_change_ = 0;
  trace_.clear();
  critical_path_s_ = 0.0;
  total_compute_s_ = 0.0;
  const int diam = graph_.diameter();
  std::vector<double> times;
  ForEachNode(
      [&](int i) {
        NodeState& node = states_[i];
        node.running = true;
        node.stop_round = -1;
        node.stagnation = 0;
        node.quiet = 0;
        if (protocol_ == Protocol::kAcc) {
          SolveLocal(node, node.local);
          if (node.j_local == kInf) {
            node.candidate.clear();
            node.running = false;
            node.stop_round = 0;
          }
          return;
        }
        node.candidate = VertexSubset(program_.pool(), node.local, &hints_[i]);
        if (protocol_ == Protocol::kQvcc) {
          node.queue.assign(node.candidate.begin(), node.candidate.end());
        }
        const bool last = protocol_ == Protocol::kVcc && diam == 0;
        if (options_.trace_objective || last) {
          SolveLocal(node, node.candidate);
        } else {
          node.j_local = std::numeric_limits<double>::quiet_NaN();
        }
        if (last) {
          node.running = false;
          node.stop_round = 0;
        }
      },
      times);
  round_ = 0;
  RecordRound(times);
}

bool ConsensusEngine::Done() const {
  return std::none_of(states_.begin(), states_.end(),
                      [](const NodeState& s) { return s.running; });
}

std::vector<IndexSet> ConsensusEngine::QvccMessages() const {
  std::vector<IndexSet> messages(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const NodeState& s = states_[i];
    if (!s.running) continue;
    const int m = Sent(s);
    messages[i].assign(s.queue.begin(), s.queue.begin() + m);
    messages[i] = Normalize(std::move(messages[i]));
  }
  return messages;
}

void ConsensusEngine::UpdateAcc(int i, const std::vector<NodeState>& prev,
                                NodeState& next) {
  const NodeState& me = prev[i];
  const int t1 = round_ + 1;
  IndexSet incoming;
  double j_max = -kInf;
  for (int j : graph_.in_neighbors(i)) {
    incoming = Union(incoming, prev[j].candidate);
    j_max = std::max(j_max, prev[j].j_local);
  }
  if (j_max == kInf) {
    next.candidate.clear();
    next.j_local = kInf;
    next.x_local.resize(0);
    next.running = false;
    next.stop_round = t1;
    return;
  }

  // When x_i(t) already satisfies every new constraint it stays optimal, and
  // only the active set can grow.
  const IndexSet fresh = Difference(incoming, Union(me.candidate, me.local));
  bool keep = me.x_local.size() > 0 && std::isfinite(me.j_local);
  Eigen::VectorXd values;
  if (keep && !fresh.empty()) {
    values = ConstraintValues(program_.WithIndices(fresh), me.x_local);
    keep = values.maxCoeff() <= kFeasibilityTol;
  }
  if (keep) {
    IndexSet grown;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      if (std::abs(values[k]) <= kActiveTol) grown.push_back(fresh[k]);
    }
    next.candidate = Union(me.candidate, grown);
  } else {
    SolveLocal(next, Union(Union(me.candidate, incoming), me.local));
  }

  if (next.j_local == kInf) {
    next.candidate.clear();
    next.running = false;
    next.stop_round = t1;
    return;
  }
  next.stagnation = SameObjective(next.j_local, me.j_local)
                        ? me.stagnation + 1
                        : 0;
  if (next.stagnation >= 2 * graph_.diameter() + 1) {
    next.running = false;
    next.stop_round = t1;
  }
}

void ConsensusEngine::UpdateVcc(int i, const std::vector<NodeState>& prev,
                                NodeState& next) {
  const int t1 = round_ + 1;
  IndexSet known = prev[i].candidate;
  for (int j : graph_.in_neighbors(i)) known = Union(known, prev[j].candidate);
  next.candidate = VertexSubset(program_.pool(), known, &hints_[i]);
  const bool last = t1 >= graph_.diameter();
  if (options_.trace_objective || last) {
    SolveLocal(next, next.candidate);
  }
  if (last) {
    next.running = false;
    next.stop_round = t1;
  }
}

void ConsensusEngine::UpdateQvcc(int i, const std::vector<NodeState>& prev,
                                 NodeState& next,
                                 const std::vector<IndexSet>& messages) {
  const NodeState& me = prev[i];
  const int t1 = round_ + 1;
  IndexSet known = me.candidate;
  int quiet_in = me.quiet;
  for (int j : graph_.in_neighbors(i)) {
    known = Union(known, messages[j]);
    const int q = prev[j].running ? prev[j].quiet
                                  : std::numeric_limits<int>::max() - 1;
    quiet_in = std::min(quiet_in, q);
  }
  next.candidate = VertexSubset(program_.pool(), known, &hints_[i]);

  // T(t+1) = T(t) \ (M(t) u (V(t) \ V(t+1)))  followed by  V(t+1) \ V(t).
  const IndexSet& sent = messages[i];
  std::vector<Index> queue;
  queue.reserve(me.queue.size() + next.candidate.size());
  for (Index c : me.queue) {
    if (!Contains(sent, c) && Contains(next.candidate, c)) queue.push_back(c);
  }
  for (Index c : Difference(next.candidate, me.candidate)) queue.push_back(c);
  next.queue = std::move(queue);

  next.quiet = next.queue.empty() ? quiet_in + 1 : 0;
  const bool last = next.quiet >= graph_.diameter() + 1;
  if (options_.trace_objective || last) {
    SolveLocal(next, next.candidate);
  } else {
    next.j_local = std::numeric_limits<double>::quiet_NaN();
  }
  if (last) {
    next.running = false;
    next.stop_round = t1;
  }
}

void ConsensusEngine::Step() {
  if (round_ < 0) throw InvalidArgument("engine not initialized");
  const std::vector<NodeState> prev = states_;
  std::vector<NodeState> next = prev;
  std::vector<IndexSet> messages;
  if (protocol_ == Protocol::kQvcc) messages = QvccMessages();

  std::vector<double> times;
  ForEachNode(
      [&](int i) {
        if (!prev[i].running) return;
        switch (protocol_) {
          case Protocol::kAcc:
            UpdateAcc(i, prev, next[i]);
            break;
          case Protocol::kVcc:
            UpdateVcc(i, prev, next[i]);
            break;
          case Protocol::kQvcc:
            UpdateQvcc(i, prev, next[i], messages);
            break;
        }
      },
      times);

  ++round_;
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (next[i].candidate != prev[i].candidate ||
        !SameValue(next[i].j_local, prev[i].j_local)) {
      last_change_ = round_;
    }
  }
  states_ = std::move(next);
  RecordRound(times);
}

RunReport ConsensusEngine::Finish() {
  RunReport report;
  report.protocol = protocol_;
  report.diameter = graph_.diameter();
  report.convergence_round = last_change_;
  for (const NodeState& s : states_) {
    report.rounds = std::max(report.rounds, s.running ? round_ : s.stop_round);
    report.infeasible_detected |= s.j_local == kInf;
  }
  report.per_round = trace_;
  for (const RoundRecord& r : trace_) {
    for (const NodeRecord& n : r.nodes) {
      report.max_constraints_per_message =
          std::max(report.max_constraints_per_message, n.sent);
    }
  }
  report.final_states = states_;
  report.critical_path_s = critical_path_s_;
  report.total_compute_s = total_compute_s_;

  const NodeState& lead = states_.front();
  report.final = lead.j_local == kInf
                     ? InfeasibleSolution()
                     : SolveOrUnbounded(program_.WithIndices(lead.candidate));

  bool agree = Done();
  for (const NodeState& s : states_) {
    if (!agree) break;
    if (!SameValue(s.j_local, lead.j_local)) agree = false;
    if (s.x_local.size() != lead.x_local.size()) {
      agree = false;
    } else if (s.x_local.size() > 0) {
      const double scale = 1.0 + lead.x_local.lpNorm<Eigen::Infinity>();
      agree = (s.x_local - lead.x_local).lpNorm<Eigen::Infinity>() <=
              1e-9 * scale;
    }
  }
  report.converged = agree;
  return report;
}

RunReport ConsensusEngine::Run() {
  Initialize();
  while (!Done()) {
    if (round_ >= options_.max_rounds) {
      throw NumericalFailure("consensus exceeded " +
                             std::to_string(options_.max_rounds) + " rounds");
    }
    Step();
  }
  return Finish();
}

std::string ConsensusEngine::Snapshot() const {
  using io::EncodeReal;
  io::Json states = io::Json::array();
  for (const NodeState& s : states_) {
    io::Json x = io::Json::array();
    for (Eigen::Index k = 0; k < s.x_local.size(); ++k) {
      x.push_back(EncodeReal(s.x_local[k]));
    }
    states.push_back({{"id", s.id},
                      {"local", s.local},
                      {"candidate", s.candidate},
                      {"queue", s.queue},
                      {"j_local", EncodeReal(s.j_local)},
                      {"x_local", x},
                      {"stagnation", s.stagnation},
                      {"quiet", s.quiet},
                      {"running", s.running},
                      {"stop_round", s.stop_round}});
  }
  io::Json trace = io::Json::array();
  for (const RoundRecord& r : trace_) {
    io::Json nodes = io::Json::array();
    for (const NodeRecord& n : r.nodes) {
      nodes.push_back({{"j_local", EncodeReal(n.j_local)},
                       {"candidate_size", n.candidate_size},
                       {"sent", n.sent},
                       {"running", n.running}});
    }
    trace.push_back(
        {{"round", r.round}, {"nodes", nodes}, {"candidates", r.candidates}});
  }
  const io::Json doc = {{"protocol", ProtocolName(protocol_)},
                        {"round", round_},
                        {"last_change", last_change_},
                        {"critical_path_s", critical_path_s_},
                        {"total_compute_s", total_compute_s_},
                        {"states", states},
                        {"trace", trace}};
  return doc.dump();
}

void ConsensusEngine::Restore(const std::string& snapshot) {
  using io::DecodeReal;
  io::Json doc;
  try {
    doc = io::Json::parse(snapshot);
  } catch (const io::Json::exception& e) {
    throw InvalidArgument(std::string("snapshot is not valid JSON: ") +
                          e.what());
  }
  try {
    if (ParseProtocol(doc.at("protocol").get<std::string>()) != protocol_) {
      throw InvalidArgument("snapshot was taken with another protocol");
    }
    const io::Json& states = doc.at("states");
    if (states.size() != states_.size()) {
      throw InvalidArgument("snapshot node count does not match the graph");
    }
    std::vector<NodeState> restored(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      const io::Json& js = states[i];
      NodeState& s = restored[i];
      s.id = js.at("id").get<int>();
      s.local = js.at("local").get<IndexSet>();
      s.candidate = js.at("candidate").get<IndexSet>();
      s.queue = js.at("queue").get<std::vector<Index>>();
      s.j_local = DecodeReal(js.at("j_local"));
      const io::Json& x = js.at("x_local");
      s.x_local.resize(static_cast<Eigen::Index>(x.size()));
      for (std::size_t k = 0; k < x.size(); ++k) s.x_local[k] = DecodeReal(x[k]);
      s.stagnation = js.at("stagnation").get<int>();
      s.quiet = js.at("quiet").get<int>();
      s.running = js.at("running").get<bool>();
      s.stop_round = js.at("stop_round").get<int>();
      if (s.local != partition_[i]) {
        throw InvalidArgument("snapshot partition does not match the engine");
      }
    }
    std::vector<RoundRecord> trace;
    for (const io::Json& jr : doc.at("trace")) {
      RoundRecord r;
      r.round = jr.at("round").get<int>();
      for (const io::Json& jn : jr.at("nodes")) {
        r.nodes.push_back(NodeRecord{DecodeReal(jn.at("j_local")),
                                     jn.at("candidate_size").get<int>(),
                                     jn.at("sent").get<int>(),
                                     jn.at("running").get<bool>()});
      }
      r.candidates = jr.at("candidates").get<std::vector<IndexSet>>();
      trace.push_back(std::move(r));
    }
    states_ = std::move(restored);
    trace_ = std::move(trace);
    round_ = doc.at("round").get<int>();
    last_change_ = doc.at("last_change").get<int>();
    critical_path_s_ = doc.at("critical_path_s").get<double>();
    total_compute_s_ = doc.at("total_compute_s").get<double>();
  } catch (const io::Json::exception& e) {
    throw InvalidArgument(std::string("malformed snapshot: ") + e.what());
  }
}

RunReport RunAcc(const DirectedGraph& graph, const ConvexProgram& program,
                 const Partition& partition, const RunOptions& options) {
  return ConsensusEngine(Protocol::kAcc, graph, program, partition, options)
      .Run();
}

RunReport RunVcc(const DirectedGraph& graph, const ConvexProgram& program,
                 const Partition& partition, const RunOptions& options) {
  return ConsensusEngine(Protocol::kVcc, graph, program, partition, options)
      .Run();
}

RunReport RunQvcc(const DirectedGraph& graph, const ConvexProgram& program,
                  const Partition& partition, int bandwidth,
                  RunOptions options) {
  options.bandwidth = bandwidth;
  return ConsensusEngine(Protocol::kQvcc, graph, program, partition,
                         std::move(options))
      .Run();
}

RunReport RunProtocol(Protocol protocol, const DirectedGraph& graph,
                      const ConvexProgram& program, const Partition& partition,
                      const RunOptions& options) {
  return ConsensusEngine(protocol, graph, program, partition, options).Run();
}

}  // namespace ccrcp
