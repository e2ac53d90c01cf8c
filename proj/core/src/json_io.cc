#include "ccrcp/json_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <vector>

#include "ccrcp/errors.h"

namespace ccrcp::io {

Json EncodeReal(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double DecodeReal(const Json& value) {
  if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("not a real number: " + s);
  }
  if (!value.is_number()) throw InvalidArgument("not a real number");
  return value.get<double>();
}

namespace {

Json VectorToJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(EncodeReal(v[k]));
  return out;
}

}  // namespace

Json PoolToJson(const ConstraintPool& pool) {
  Json deltas = Json::array();
  for (const Constraint& c : pool.constraints()) {
    deltas.push_back(VectorToJson(c.delta));
  }
  return {{"family", FamilyName(pool.family())},
          {"dim", pool.dim()},
          {"deltas", deltas}};
}

PoolPtr PoolFromJson(const Json& json) {
  try {
    const Family family = ParseFamily(json.at("family").get<std::string>());
    const int dim = json.at("dim").get<int>();
    std::vector<Eigen::VectorXd> deltas;
    for (const Json& row : json.at("deltas")) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
      for (std::size_t k = 0; k < row.size(); ++k) v[k] = DecodeReal(row[k]);
      deltas.push_back(std::move(v));
    }
    return ConstraintPool::Create(family, dim, deltas);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed pool JSON: ") + e.what());
  }
}

Json GraphToJson(const DirectedGraph& graph) {
  Json edges = Json::array();
  for (const auto& [from, to] : graph.edges()) edges.push_back({from, to});
  return {{"n", graph.size()}, {"edges", edges}};
}

DirectedGraph GraphFromJson(const Json& json) {
  try {
    std::vector<Edge> edges;
    for (const Json& e : json.at("edges")) {
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return DirectedGraph(json.at("n").get<int>(), std::move(edges));
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed graph JSON: ") + e.what());
  }
}

Json SolutionToJson(const Solution& solution) {
  Json multipliers = Json::object();
  for (const auto& [j, y] : solution.multipliers) {
    multipliers[std::to_string(j)] = y;
  }
  const bool feasible = solution.feasible();
  return {{"status", feasible ? "feasible" : "infeasible"},
          {"x_star", feasible ? VectorToJson(solution.x_star) : Json(nullptr)},
          {"j_star", feasible ? EncodeReal(solution.j_star) : Json(nullptr)},
          {"active", solution.active},
          {"multipliers", multipliers}};
}

Json RunReportToJson(const RunReport& report) {
  Json rounds = Json::array();
  for (const RoundRecord& r : report.per_round) {
    Json nodes = Json::array();
    for (const NodeRecord& n : r.nodes) {
      nodes.push_back({{"j_local", EncodeReal(n.j_local)},
                       {"candidate_size", n.candidate_size},
                       {"sent", n.sent},
                       {"running", n.running}});
    }
    rounds.push_back({{"round", r.round}, {"nodes", nodes}});
  }
  return {{"protocol", ProtocolName(report.protocol)},
          {"diameter", report.diameter},
          {"rounds", report.rounds},
          {"convergence_round", report.convergence_round},
          {"max_constraints_per_message", report.max_constraints_per_message},
          {"converged", report.converged},
          {"infeasible_detected", report.infeasible_detected},
          {"critical_path_s", report.critical_path_s},
          {"total_compute_s", report.total_compute_s},
          {"final", SolutionToJson(report.final)},
          {"per_round", rounds}};
}

void WriteTraceCsv(const RunReport& report, std::ostream& out) {
  out << "round,node,j_local,msg_constraints\n";
  out.precision(17);
  for (const RoundRecord& r : report.per_round) {
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double j = r.nodes[i].j_local;
      out << r.round << ',' << i << ',';
      if (std::isnan(j)) {
        out << "nan";
      } else if (std::isinf(j)) {
        out << (j > 0 ? "inf" : "-inf");
      } else {
        out << j;
      }
      out << ',' << r.nodes[i].sent << '\n';
    }
  }
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& json) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << json.dump(2) << '\n';
}

}  // namespace ccrcp::io
