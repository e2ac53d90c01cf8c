#ifndef CCRCP_ORACLES_H_
#define CCRCP_ORACLES_H_

#include <vector>

#include "ccrcp/index_set.h"
#include "ccrcp/program.h"

namespace ccrcp {

// Brute-force structure oracles. They solve O(|C|) or O(2^|C|) programs and
// exist for testing the consensus machinery on small instances.

// J*(C), with -inf for an ellipsoid program whose points do not span the
// space, where log det(W^{-1}) is unbounded below.
double OptimalValue(const ConvexProgram& program);

// {c in C : J*(C \ {c}) < J*(C) - tol (1 + |J*(C)|)}.
IndexSet SupportSetOracle(const ConvexProgram& program);

// Every invariant subset (J*(S) = J*(C)) of minimal cardinality, in
// lexicographic order. Throws InvalidArgument when |C| > max_size.
std::vector<IndexSet> EssentialSetsOracle(const ConvexProgram& program,
                                          int max_size = 16);

}  // namespace ccrcp

#endif  // CCRCP_ORACLES_H_
