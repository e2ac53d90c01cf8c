#ifndef CCRCP_BOUNDS_H_
#define CCRCP_BOUNDS_H_

#include <cstdint>

namespace ccrcp {

// Binomial lower tail sum_{j=0}^{q} C(N,j) eps^j (1-eps)^(N-j). Each term is
// evaluated with Loader's saddle-point expansion and the terms are added with
// compensated summation, giving an absolute error far below 1e-12 for
// N up to 1e7. Throws DomainError unless 0 <= eps <= 1 and 0 <= q <= N.
double Phi(double epsilon, std::int64_t q, std::int64_t n);

// 2 (ln(1/beta) + zeta - 1) / N, clamped to at most 1. Throws DomainError
// unless 0 < beta < 1, zeta >= 1 and N >= 1.
double EpsilonBound(double beta, std::int64_t zeta, std::int64_t n);

// Smallest N with EpsilonBound(beta, zeta, N) <= epsilon, for 0 < epsilon <= 1.
std::int64_t MinSamples(double beta, std::int64_t zeta, double epsilon);

// Smallest epsilon with Phi(epsilon, zeta - 1, N) <= beta, found by bisection
// to 1e-15. Never larger than EpsilonBound(beta, zeta, N).
double EpsilonExact(double beta, std::int64_t zeta, std::int64_t n);

}  // namespace ccrcp

#endif  // CCRCP_BOUNDS_H_
