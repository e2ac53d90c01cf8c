#include "ccrcp/oracles.h"

#include <cmath>
#include <limits>

#include "ccrcp/errors.h"
#include "ccrcp/solve.h"

namespace ccrcp {

double OptimalValue(const ConvexProgram& program) {
  try {
    return Solve(program).j_star;
  } catch (const DegenerateInput&) {
    return -std::numeric_limits<double>::infinity();
  }
}

IndexSet SupportSetOracle(const ConvexProgram& program) {
  const double full = OptimalValue(program);
  IndexSet support;
  for (Index c : program.indices()) {
    const double without =
        OptimalValue(program.WithIndices(Difference(program.indices(), {c})));
    const bool lower =
        std::isinf(full) ? without < full
                         : without < full - kObjectiveTol * (1.0 + std::abs(full));
    if (lower) support.push_back(c);
  }
  return support;
}

std::vector<IndexSet> EssentialSetsOracle(const ConvexProgram& program,
                                          int max_size) {
  const IndexSet& all = program.indices();
  const int n = static_cast<int>(all.size());
  if (n > max_size) {
    throw InvalidArgument("essential-set oracle limited to small programs");
  }
  const double full = OptimalValue(program);

  std::vector<IndexSet> found;
  std::vector<int> pick;
  for (int k = 0; k <= n && found.empty(); ++k) {
    // Enumerate k-subsets in lexicographic order of positions.
    pick.resize(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      IndexSet subset(k);
      for (int i = 0; i < k; ++i) subset[i] = all[pick[i]];
      if (SameObjective(OptimalValue(program.WithIndices(subset)), full)) {
        found.push_back(subset);
      }
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return found;
}

}  // namespace ccrcp
