#pragma once

#include <vector>

#include "mildlab/state.hpp"

namespace mildlab::fourier {

// In-place DFT over the grid layout. backward carries the 1/size factor, so
// backward(forward(x)) reproduces x up to roundoff.
void forward(const Grid& grid, std::vector<cx_double>& data);
void backward(const Grid& grid, std::vector<cx_double>& data);

}  // namespace mildlab::fourier
