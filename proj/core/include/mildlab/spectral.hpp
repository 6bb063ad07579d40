#pragma once

#include <vector>

#include "mildlab/state.hpp"

namespace mildlab {

// Free evolution exp(it Laplacian): diagonal momentum-space phase
// exp(-i t |k|^2). t may be negative (group property).
StateVector free_propagate(const StateVector& state, double t);

// Spectral first derivative of a real periodic field along one axis. The
// Nyquist mode is zeroed, which keeps the derivative of a real field real.
std::vector<double> spectral_derivative(const Grid& grid, const std::vector<double>& field,
                                        int axis);

}  // namespace mildlab
