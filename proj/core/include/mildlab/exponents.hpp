#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace mildlab {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// 1/x with the convention 1/inf = 0.
inline double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

// Index tuple tying the space-time integrability of trajectories (q, theta
// and duals) to that of potentials (p, alpha, beta) in dimension n.
struct ExponentFamily {
  int n;
  double q, theta;
  double q_dual, theta_dual;
  double p, alpha, beta;
};

// True iff 2/theta = n(1/2 - 1/q) within 1e-12 and, when n >= 3,
// q < 2n/(n-2). Index values outside the range 2 <= q, 2 < theta yield
// false; only nonsense input (n < 1, non-positive or NaN exponents) throws.
bool check_admissible(int n, double q, double theta);

// Fills theta from the admissibility relation, the duals from 1/q + 1/q' = 1,
// and p from 1/p = 1 - 2/q. Throws for infeasible sets: no admissible theta,
// alpha < 1, beta <= 1, or 1/alpha >= 1 - 2/theta.
ExponentFamily derive_family(int n, double q, double alpha, double beta);

// Whether |x|^(-s) fits an admissible potential slot of L^p type in
// dimension n: local integrability s < n/p (strict), and p > n/2 when
// n >= 3 so that an admissible companion exponent q exists.
bool coulomb_membership(int n, double s, double p);

struct Interval {
  double lo, hi;
};

// Exponent window (n/2, 3) for an inverse-distance pair potential; empty
// from n = 6 on, where no p serves both constraints.
std::optional<Interval> coulomb_feasible_window(int n);

}  // namespace mildlab
