#ifndef CCRCP_TOLERANCES_H_
#define CCRCP_TOLERANCES_H_

namespace ccrcp {

// Absolute feasibility tolerance on constraint values. Linear rows are scaled
// to unit infinity norm when a pool is built, so this is scale free.
inline constexpr double kFeasibilityTol = 1e-8;
// |f_j(x*)| below this marks j as active.
inline constexpr double kActiveTol = 1e-6;
// Two optimal values closer than kObjectiveTol * (1 + |J|) are equal.
inline constexpr double kObjectiveTol = 1e-9;
// Relative duality gap accepted from the MVEE solver.
inline constexpr double kMveeGapTol = 1e-7;
// L1 distance below which a point counts as lying on the hull of the others.
inline constexpr double kHullTol = 1e-9;

// True when two optimal values agree under kObjectiveTol. Infinite values are
// only equal to themselves.
bool SameObjective(double a, double b, double tol = kObjectiveTol);

}  // namespace ccrcp

#endif  // CCRCP_TOLERANCES_H_
