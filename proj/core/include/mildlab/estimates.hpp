#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mildlab/ensembles.hpp"
#include "mildlab/norms.hpp"

namespace mildlab {

// Empirical calibration constant: an ensemble maximum of a norm ratio. The
// value is a lower bound on the true operator constant and is reproducible
// from the ensemble seed.
struct ConstantEstimate {
  std::string name;  // "C0", "CQ" or "Cv"
  double value = 0.0;
  int ensemble_size = 0;
  std::string maximizing_witness;
};

// One checked inequality. satisfied <=> lhs <= rhs.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double slack = 0.0;  // rhs - lhs
  std::string scenario;
};

// Calibration inputs for the bound harnesses.
struct BoundConstants {
  double c0 = 0.0;   // free space-time norm constant, from estimate_c0
  double c_q = 1.0;  // trajectory-map operator constant, from estimate_cq
};

// Equal split of the sample lattice into count windows; windows[m] holds the
// inclusive sample range [first, last], consecutive windows share an endpoint.
struct Partition {
  int count = 1;
  std::vector<std::pair<int, int>> windows;
};

// Smallest window count M whose every window satisfies
//   c_q * t_star(window length) * (split norm of v restricted to the window) <= 1/2,
// found by scanning M = 1, 2, 3, ... The restricted norms use the threshold
// ladder of the full potential so the scan is cacheable per sample. M is
// capped at one window per step; the iteration's own residual monitor guards
// the (rare) case where even that fails.
Partition partition_interval(const SampledPotential& v, const ExponentFamily& family,
                             double horizon, double c_q);

// Contraction-series constant 2 * M^(1/theta) * (1 + c0).
double compute_cv(int subintervals, double theta, double c0);

// Max over ensemble members of mixed_norm(U0 psi0, q, theta) / l2(psi0).
ConstantEstimate estimate_c0(const ExponentFamily& family, const Grid& grid,
                             const TimeGrid& time, const StateEnsemble& states, int count);

// Max over (potential, trajectory) pairs of
// x_norm(Q_v phi) / (t_star * v_norm_upper(v) * x_norm(phi)); phi = U0 member.
ConstantEstimate estimate_cq(const ExponentFamily& family, const Grid& grid,
                             const TimeGrid& time, const PotentialEnsemble& potentials,
                             const StateEnsemble& states, int count);

// Checks sup-in-time l2 of the derivative trajectory against
// (1 + C_v)^2 * t_star(T) * v_norm_upper(w) * l2(psi0), with C_v built from
// the partition of v. Right-hand side uses upper bounds throughout, so a
// violation is a genuine red flag, not tightness.
BoundReport verify_frechet_bound(const SampledPotential& v, const SampledPotential& w,
                                 const StateVector& psi0, const ExponentFamily& family,
                                 const BoundConstants& constants);

// Same right-hand-side shape for the full difference of two solutions, with
// the constant maximized over the segment potentials v + lambda*w at
// lambda in {0, 1/2, 1} (the partition count is monotone in the potential
// norm, so the extremes sit near the sampled endpoints).
BoundReport verify_difference_bound(const SampledPotential& v, const SampledPotential& w,
                                    const StateVector& psi0, const ExponentFamily& family,
                                    const BoundConstants& constants);

// Residuals ||gateaux_fd(lambda) - delta_psi|| / ||delta_psi|| in the
// sup-in-time l2 norm, with a least-squares slope on log-log axes. When every
// residual sits at the floating-point floor the fit is meaningless and the
// study is reported saturated instead.
struct ConvergenceStudy {
  std::vector<double> lambdas;
  std::vector<double> residuals;
  double slope = 0.0;
  bool saturated = false;
};

ConvergenceStudy convergence_study(const SampledPotential& v, const SampledPotential& w,
                                   const StateVector& psi0, const std::vector<double>& lambdas);

}  // namespace mildlab
