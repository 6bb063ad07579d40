#include "mildlab/exponents.hpp"

#include <stdexcept>

namespace mildlab {

namespace {

// Lebesgue dual: 1/x + 1/x' = 1.
double dual_exponent(double x) {
  const double r = 1.0 - reciprocal(x);
  return r == 0.0 ? inf : 1.0 / r;
}

void require_positive(double value, const char* msg) {
  if (std::isnan(value) || value <= 0.0) throw std::invalid_argument(msg);
}

}  // namespace

bool check_admissible(int n, double q, double theta) {
  if (n < 1) throw std::invalid_argument("check_admissible: n must be >= 1");
  require_positive(q, "check_admissible: q must be positive");
  require_positive(theta, "check_admissible: theta must be positive");
  if (q < 2.0 || theta <= 2.0) return false;
  if (n >= 3 && !(q < 2.0 * n / (n - 2))) return false;
  const double residual = 2.0 * reciprocal(theta) - n * (0.5 - reciprocal(q));
  return std::abs(residual) <= 1e-12;
}

ExponentFamily derive_family(int n, double q, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("derive_family: n must be >= 1");
  if (std::isnan(q) || q < 2.0) throw std::invalid_argument("derive_family: q must be >= 2");
  const double rhs = n * (0.5 - reciprocal(q));
  double theta;
  if (rhs == 0.0) {
    theta = inf;
  } else {
    theta = 2.0 / rhs;
    if (!(theta > 2.0))
      throw std::invalid_argument("derive_family: no admissible theta for this (n, q)");
  }
  const double p_inv = 1.0 - 2.0 * reciprocal(q);
  const double p = p_inv == 0.0 ? inf : 1.0 / p_inv;
  if (std::isnan(alpha) || alpha < 1.0)
    throw std::invalid_argument("derive_family: alpha must be >= 1");
  if (std::isnan(beta) || beta <= 1.0)
    throw std::invalid_argument("derive_family: beta must be > 1");
  if (!(reciprocal(alpha) < 1.0 - 2.0 * reciprocal(theta)))
    throw std::invalid_argument("derive_family: 1/alpha must stay below 1 - 2/theta");
  return {n, q, theta, dual_exponent(q), dual_exponent(theta), p, alpha, beta};
}

bool coulomb_membership(int n, double s, double p) {
  if (n < 1) throw std::invalid_argument("coulomb_membership: n must be >= 1");
  require_positive(s, "coulomb_membership: s must be positive");
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("coulomb_membership: p must be >= 1");
  if (!(s < static_cast<double>(n) / p)) return false;
  if (n >= 3 && !(p > 0.5 * n)) return false;
  return true;
}

std::optional<Interval> coulomb_feasible_window(int n) {
  if (n < 1) throw std::invalid_argument("coulomb_feasible_window: n must be >= 1");
  const double lo = 0.5 * n;
  if (!(lo < 3.0)) return std::nullopt;
  return Interval{lo, 3.0};
}

}  // namespace mildlab
