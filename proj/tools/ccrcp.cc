// Command-line front end: scenario generation, protocol runs, constraint
// removal, scenario bounds and a small experiment sweep.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccrcp/bounds.h"
#include "ccrcp/consensus.h"
#include "ccrcp/errors.h"
#include "ccrcp/experiment.h"
#include "ccrcp/json_io.h"
#include "ccrcp/removal.h"
#include "ccrcp/scenarios.h"

namespace {

using ccrcp::io::Json;

constexpr int kExitConsensusFailure = 2;

struct InstanceFlags {
  std::string scenario = "ellipsoid";
  int n_constraints = 200;
  int dim = 2;
  std::uint64_t seed = 1;
  std::string pool_path;
  std::string topology = "chain";
  int nodes = 10;
  std::string graph_path;
  int threads = 1;
  std::string out = "json";
  std::string output;
  std::string config;
};

void AddScenarioFlags(CLI::App* cmd, InstanceFlags& f) {
  cmd->add_option("--scenario", f.scenario,
                  "ellipsoid | classification | linear");
  cmd->add_option("--n-constraints", f.n_constraints, "number of samples N");
  cmd->add_option("--dim", f.dim, "q (ellipsoid), p (classification), d (linear)");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--config", f.config, "JSON file with default flag values");
}

void AddInstanceFlags(CLI::App* cmd, InstanceFlags& f) {
  AddScenarioFlags(cmd, f);
  cmd->add_option("--pool", f.pool_path, "pool JSON instead of a scenario");
  cmd->add_option("--topology", f.topology, "chain | geometric | complete | ring");
  cmd->add_option("--nodes", f.nodes, "number of nodes");
  cmd->add_option("--graph", f.graph_path, "graph JSON instead of a topology");
  cmd->add_option("--threads", f.threads, "worker threads per round");
  cmd->add_option("--out", f.out, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", f.output, "output file (default stdout)");
}

// Flags not given on the command line take their value from the config file,
// whose keys are the long flag names without dashes.
void ApplyConfig(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  const Json config = ccrcp::io::ReadJsonFile(path);
  for (const auto& [key, value] : config.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw ccrcp::InvalidArgument("unknown config key: " + key);
    }
    if (opt->count() > 0) continue;
    opt->clear();
    if (value.is_array()) {
      for (const Json& v : value) {
        opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
    }
    opt->run_callback();
  }
}

ccrcp::PoolPtr LoadPool(const InstanceFlags& f) {
  if (!f.pool_path.empty()) {
    return ccrcp::io::PoolFromJson(ccrcp::io::ReadJsonFile(f.pool_path));
  }
  ccrcp::ScenarioSpec spec;
  spec.kind = ccrcp::ParseScenario(f.scenario);
  spec.n_samples = f.n_constraints;
  spec.dim = f.dim;
  spec.seed = f.seed;
  return ccrcp::GenerateScenario(spec);
}

ccrcp::DirectedGraph LoadGraph(const InstanceFlags& f) {
  if (!f.graph_path.empty()) {
    return ccrcp::io::GraphFromJson(ccrcp::io::ReadJsonFile(f.graph_path));
  }
  return ccrcp::MakeTopology(f.topology, f.nodes, f.seed);
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ccrcp::InvalidArgument("cannot write " + path);
  out << text;
}

int RunConsensus(ccrcp::Protocol protocol, const InstanceFlags& f,
                 int bandwidth) {
  const ccrcp::PoolPtr pool = LoadPool(f);
  const ccrcp::DirectedGraph graph = LoadGraph(f);
  const ccrcp::ConvexProgram program =
      ccrcp::ConvexProgram::Default(pool, pool->AllIndices());
  const ccrcp::Partition partition =
      ccrcp::EvenPartition(pool->size(), graph.size());
  ccrcp::RunOptions options;
  options.threads = f.threads;
  options.bandwidth = bandwidth;

  const ccrcp::RunReport report =
      ccrcp::RunProtocol(protocol, graph, program, partition, options);
  const ccrcp::Solution reference = ccrcp::SolveOrUnbounded(program);
  const double error = ccrcp::ConsensusError(report, reference);

  if (f.out == "csv") {
    std::ostringstream csv;
    ccrcp::io::WriteTraceCsv(report, csv);
    Emit(csv.str(), f.output);
  } else {
    Json doc = ccrcp::io::RunReportToJson(report);
    doc["consensus_error"] = ccrcp::io::EncodeReal(error);
    Emit(doc.dump(2) + "\n", f.output);
  }
  if (!report.converged || !(error <= 1e-6)) {
    std::cerr << "consensus failure: converged=" << report.converged
              << " error=" << error << "\n";
    return kExitConsensusFailure;
  }
  return 0;
}

int RunRemoval(const InstanceFlags& f, int r, const std::string& protocol,
               int bandwidth) {
  const ccrcp::PoolPtr pool = LoadPool(f);
  const ccrcp::DirectedGraph graph = LoadGraph(f);
  const ccrcp::ConvexProgram program =
      ccrcp::ConvexProgram::Default(pool, pool->AllIndices());
  ccrcp::RunOptions options;
  options.threads = f.threads;
  options.bandwidth = bandwidth;
  const ccrcp::RemovalReport report = ccrcp::RemoveConstraints(
      graph, program, ccrcp::EvenPartition(pool->size(), graph.size()), r,
      ccrcp::ParseProtocol(protocol), options);
  if (!report.warning.empty()) std::cerr << "warning: " << report.warning << "\n";

  if (f.out == "csv") {
    std::ostringstream csv;
    csv << "stage,index,id,multiplier,j_star,rounds\n";
    csv.precision(17);
    for (std::size_t k = 0; k < report.per_stage.size(); ++k) {
      const ccrcp::RemovalStage& s = report.per_stage[k];
      csv << k << ',' << s.removed << ',' << s.removed_id << ','
          << s.multiplier << ',' << s.j_star << ',' << s.rounds << '\n';
    }
    Emit(csv.str(), f.output);
    return 0;
  }
  Json stages = Json::array();
  for (const ccrcp::RemovalStage& s : report.per_stage) {
    stages.push_back({{"j_star", ccrcp::io::EncodeReal(s.j_star)},
                      {"index", s.removed},
                      {"id", s.removed_id},
                      {"multiplier", s.multiplier},
                      {"rounds", s.rounds}});
  }
  const Json doc = {{"removed", report.removed},
                    {"per_stage", stages},
                    {"final", ccrcp::io::SolutionToJson(report.final)},
                    {"warning", report.warning}};
  Emit(doc.dump(2) + "\n", f.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed random convex programming simulator"};
  app.require_subcommand(1);

  InstanceFlags gen_flags;
  CLI::App* gen = app.add_subcommand("gen", "sample a constraint pool");
  AddScenarioFlags(gen, gen_flags);
  gen->add_option("-o,--output", gen_flags.output, "output file (default stdout)");

  InstanceFlags run_flags;
  int bandwidth = 5;
  CLI::App* run_acc = app.add_subcommand("run-acc", "active constraints consensus");
  CLI::App* run_vcc = app.add_subcommand("run-vcc", "vertex constraints consensus");
  CLI::App* run_qvcc =
      app.add_subcommand("run-qvcc", "vertex consensus with bounded messages");
  for (CLI::App* cmd : {run_acc, run_vcc, run_qvcc}) {
    AddInstanceFlags(cmd, run_flags);
  }
  run_qvcc->add_option("--bandwidth", bandwidth, "constraints per message m")
      ->check(CLI::PositiveNumber);

  int r = 0;
  std::string protocol = "acc";
  CLI::App* remove = app.add_subcommand("remove", "distributed constraint removal");
  AddInstanceFlags(remove, run_flags);
  remove->add_option("--r", r, "constraints to remove")->required();
  remove->add_option("--protocol", protocol, "acc | vcc | qvcc")
      ->check(CLI::IsMember({"acc", "vcc", "qvcc"}));
  remove->add_option("--bandwidth", bandwidth, "qVCC constraints per message");

  double beta = 1e-9;
  std::int64_t zeta = 1;
  std::optional<std::int64_t> n_samples;
  std::optional<double> epsilon;
  CLI::App* bounds = app.add_subcommand("bounds", "scenario violation bounds");
  bounds->add_option("--beta", beta, "confidence parameter");
  bounds->add_option("--zeta", zeta, "Helly dimension (d, or d+1)")->required();
  auto* n_opt = bounds->add_option("--n", n_samples, "number of samples N");
  auto* eps_opt = bounds->add_option("--epsilon", epsilon, "target violation level");
  n_opt->excludes(eps_opt);

  InstanceFlags bench_flags;
  int seeds = 5;
  std::vector<std::string> topologies{"chain", "geometric"};
  std::vector<std::string> protocols{"acc", "vcc", "qvcc"};
  CLI::App* bench = app.add_subcommand("bench", "experiment sweep to CSV");
  AddScenarioFlags(bench, bench_flags);
  bench->add_option("--nodes", bench_flags.nodes, "number of nodes");
  bench->add_option("--topology", topologies, "topologies to sweep");
  bench->add_option("--protocol", protocols, "protocols to sweep");
  bench->add_option("--seeds", seeds, "seeds per configuration");
  bench->add_option("--bandwidth", bandwidth, "qVCC constraints per message");
  bench->add_option("-o,--output", bench_flags.output, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ApplyConfig(gen, gen_flags.config);
      Emit(ccrcp::io::PoolToJson(*LoadPool(gen_flags)).dump() + "\n",
           gen_flags.output);
      return 0;
    }
    for (auto [cmd, proto] : {std::pair{run_acc, ccrcp::Protocol::kAcc},
                              std::pair{run_vcc, ccrcp::Protocol::kVcc},
                              std::pair{run_qvcc, ccrcp::Protocol::kQvcc}}) {
      if (cmd->parsed()) {
        ApplyConfig(cmd, run_flags.config);
        return RunConsensus(proto, run_flags, bandwidth);
      }
    }
    if (remove->parsed()) {
      ApplyConfig(remove, run_flags.config);
      return RunRemoval(run_flags, r, protocol, bandwidth);
    }
    if (bounds->parsed()) {
      Json doc = {{"beta", beta}, {"zeta", zeta}};
      if (n_samples) {
        doc["n"] = *n_samples;
        doc["epsilon"] = ccrcp::EpsilonBound(beta, zeta, *n_samples);
        if (zeta <= *n_samples) {
          doc["epsilon_exact"] = ccrcp::EpsilonExact(beta, zeta, *n_samples);
        }
      } else if (epsilon) {
        doc["epsilon"] = *epsilon;
        doc["n"] = ccrcp::MinSamples(beta, zeta, *epsilon);
      } else {
        throw ccrcp::InvalidArgument("bounds needs --n or --epsilon");
      }
      std::cout << doc.dump(2) << "\n";
      return 0;
    }
    if (bench->parsed()) {
      ApplyConfig(bench, bench_flags.config);
      std::vector<ccrcp::ExperimentResult> results;
      bool all_passed = true;
      for (const std::string& topology : topologies) {
        for (const std::string& proto : protocols) {
          for (int s = 0; s < seeds; ++s) {
            ccrcp::ExperimentSpec spec;
            spec.scenario.kind = ccrcp::ParseScenario(bench_flags.scenario);
            spec.scenario.n_samples = bench_flags.n_constraints;
            spec.scenario.dim = bench_flags.dim;
            spec.scenario.seed = bench_flags.seed + static_cast<std::uint64_t>(s);
            spec.topology = topology;
            spec.nodes = bench_flags.nodes;
            spec.protocol = ccrcp::ParseProtocol(proto);
            spec.bandwidth = bandwidth;
            spec.run.trace_objective = false;
            results.push_back(ccrcp::RunExperiment(spec));
            all_passed &= results.back().passed;
          }
        }
      }
      std::ostringstream csv;
      ccrcp::WriteResultsCsv(results, csv);
      Emit(csv.str(), bench_flags.output);
      return all_passed ? 0 : kExitConsensusFailure;
    }
  } catch (const ccrcp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
