#ifndef CCRCP_JSON_IO_H_
#define CCRCP_JSON_IO_H_

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "ccrcp/consensus.h"
#include "ccrcp/constraint_pool.h"
#include "ccrcp/graph.h"
#include "ccrcp/solve.h"

namespace ccrcp::io {

using Json = nlohmann::json;

// Finite values are plain numbers; infinities become "inf" / "-inf" and NaN
// becomes null, since JSON has no literal for them.
Json EncodeReal(double value);
double DecodeReal(const Json& value);

// {"family": str, "dim": int, "deltas": [[...], ...]} in pool index order.
Json PoolToJson(const ConstraintPool& pool);
PoolPtr PoolFromJson(const Json& json);

// {"n": int, "edges": [[from, to], ...]}.
Json GraphToJson(const DirectedGraph& graph);
DirectedGraph GraphFromJson(const Json& json);

// {"status", "x_star", "j_star", "active", "multipliers"}; x_star and j_star
// are null for an infeasible solution.
Json SolutionToJson(const Solution& solution);

Json RunReportToJson(const RunReport& report);

// One line per (round, node): round,node,j_local,msg_constraints.
void WriteTraceCsv(const RunReport& report, std::ostream& out);

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& json);

}  // namespace ccrcp::io

#endif  // CCRCP_JSON_IO_H_
