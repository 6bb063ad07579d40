#pragma once

#include <vector>

#include "mildlab/state.hpp"

namespace mildlab::detail {

// One interval of the trapezoid-discretized mild equation, solved for the
// right endpoint:
//   psi_b = diag(1 / (1 + i dt/2 v_b)) U0(dt) [(1 - i dt/2 v_a) psi_a].
// Stepping from psi0 reproduces the lattice fixed point of
// phi = U0 psi0 + Q_v phi at every sample, window splits included. forward
// and backward are exact mutual inverses; the response formulas rely on both
// properties.
StateVector one_step_forward(double dt, const std::vector<double>& v_a,
                             const std::vector<double>& v_b, const StateVector& psi_a);

StateVector one_step_backward(double dt, const std::vector<double>& v_a,
                              const std::vector<double>& v_b, const StateVector& psi_b);

}  // namespace mildlab::detail
