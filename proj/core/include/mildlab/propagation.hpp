#pragma once

#include <stdexcept>
#include <string>

#include "mildlab/trajectory.hpp"

namespace mildlab {

// Controls the fixed-point iteration of solve_mild. tolerance is relative to
// l2(psi0) and measured in the sup-in-time l2 norm; subinterval_count = 0
// picks the window count automatically from the contraction condition.
struct PicardConfig {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int subinterval_count = 0;
};

// Iteration diagnostics, filled by solve_mild on request. The residual ratio
// is the effective contraction factor; the iteration count per window is the
// effective truncation order of the operator series.
struct PicardStats {
  int subintervals = 0;
  int total_iterations = 0;
  double worst_residual_ratio = 0.0;  // largest successive-residual ratio above tolerance
  double final_residual = 0.0;        // largest accepted window residual, absolute l2
};

struct PicardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Residuals grew over several consecutive iterations: the window map is not a
// contraction (potential too strong for the window length). Carries the last
// measured growth factor.
struct PicardDivergenceError : PicardError {
  double contraction_factor;

  PicardDivergenceError(const std::string& what, double factor)
      : PicardError(what), contraction_factor(factor) {}
};

// Trajectory map: (Q_v phi)(t_j) = -i * (trapezoid sum over samples r <= j) of
// U0(t_j - t_r) v_r phi_r * dt. Evaluated in momentum space with prefix sums,
// one forward and one inverse transform per sample.
Trajectory q_v_apply(const SampledPotential& v, const Trajectory& phi);

// Fixed point of phi = U0 psi0 + Q_v phi on the sample lattice. Iterated from
// the zero guess (the iterates are the partial sums of the operator series),
// window by window, continuing with the previous window's endpoint as the new
// initial value. The lattice fixed point restricted to a window equals the
// window's own fixed point, so the continuation introduces no splitting error.
Trajectory solve_mild(const SampledPotential& v, const StateVector& psi0,
                      const PicardConfig& cfg = {}, PicardStats* stats = nullptr);

// Symmetric split-step reference propagator: each substep applies
// exp(-i dt v_mid / 2) U0(dt) exp(-i dt v_mid / 2) with v_mid linearly
// interpolated at the substep midpoint. dt must divide the sample spacing;
// states are recorded at the sample nodes. Independent of solve_mild and
// exactly norm-conserving, so it cross-validates the fixed point.
Trajectory solve_strang(const SampledPotential& v, const StateVector& psi0, double dt);

// Propagates psi from sample time s to sample time t, 0 <= s <= t <= horizon,
// by restarting solve_mild on the time-shifted potential. Restarts compose:
// evolution(t, s) after evolution(s, r) matches evolution(t, r) to solver
// tolerance.
StateVector evolution(const SampledPotential& v, double t, double s, const StateVector& psi);

}  // namespace mildlab
