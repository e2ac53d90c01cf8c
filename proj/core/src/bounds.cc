#include "ccrcp/bounds.h"

#include <cmath>
#include <string>

#include "ccrcp/errors.h"

namespace ccrcp {
namespace {

constexpr double kLn2Pi = 1.837877066409345483560659472811;

// log(n!) - log(sqrt(2 pi n) (n/e)^n).
double StirlingError(double n) {
  if (n <= 15.0) {
    const long double ln = static_cast<long double>(n);
    return static_cast<double>(std::lgamma(ln + 1.0L) - (ln + 0.5L) * std::log(ln) +
                               ln - 0.5L * static_cast<long double>(kLn2Pi));
  }
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x, accurately when x is close to np.
double Deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// C(n,x) p^x q^(n-x) with q = 1 - p supplied separately.
double BinomialTerm(double x, double n, double p, double q) {
  if (p == 0.0) return x == 0.0 ? 1.0 : 0.0;
  if (q == 0.0) return x == n ? 1.0 : 0.0;
  if (x == 0.0) {
    const double lc = p < 0.1 ? -Deviance(n, n * q) - n * p : n * std::log(q);
    return std::exp(lc);
  }
  if (x == n) {
    const double lc = q < 0.1 ? -Deviance(n, n * p) - n * q : n * std::log(p);
    return std::exp(lc);
  }
  const double lc = StirlingError(n) - StirlingError(x) - StirlingError(n - x) -
                    Deviance(x, n * p) - Deviance(n - x, n * q);
  const double lf = kLn2Pi + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

void CheckBeta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta must lie in (0, 1), got " + std::to_string(beta));
  }
}

}  // namespace

double Phi(double epsilon, std::int64_t q, std::int64_t n) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [0, 1]");
  }
  if (n < 0 || q < 0 || q > n) throw DomainError("need 0 <= q <= N");
  if (q == n) return 1.0;
  const double dn = static_cast<double>(n);
  const double comp = 1.0 - epsilon;
  double sum = 0.0;
  double carry = 0.0;
  for (std::int64_t j = 0; j <= q; ++j) {
    const double t = BinomialTerm(static_cast<double>(j), dn, epsilon, comp);
    const double next = sum + t;
    carry += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
    sum = next;
  }
  return std::min(1.0, sum + carry);
}

double EpsilonBound(double beta, std::int64_t zeta, std::int64_t n) {
  CheckBeta(beta);
  if (zeta < 1) throw DomainError("zeta must be at least 1");
  if (n < 1) throw DomainError("N must be at least 1");
  const double value =
      2.0 * (std::log(1.0 / beta) + static_cast<double>(zeta) - 1.0) /
      static_cast<double>(n);
  return std::min(1.0, value);
}

std::int64_t MinSamples(double beta, std::int64_t zeta, double epsilon) {
  CheckBeta(beta);
  if (zeta < 1) throw DomainError("zeta must be at least 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in (0, 1]");
  }
  const double numerator =
      2.0 * (std::log(1.0 / beta) + static_cast<double>(zeta) - 1.0);
  std::int64_t n =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(numerator / epsilon)));
  while (n > 1 && EpsilonBound(beta, zeta, n - 1) <= epsilon) --n;
  while (EpsilonBound(beta, zeta, n) > epsilon) ++n;
  return n;
}

double EpsilonExact(double beta, std::int64_t zeta, std::int64_t n) {
  CheckBeta(beta);
  if (zeta < 1 || zeta > n) throw DomainError("need 1 <= zeta <= N");
  // Phi is decreasing in epsilon, from 1 at 0 to 0 at 1 (zeta - 1 < N).
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (Phi(mid, zeta - 1, n) <= beta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace ccrcp
