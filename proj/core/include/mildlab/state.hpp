#pragma once

#include <complex>
#include <vector>

#include "mildlab/grid.hpp"

namespace mildlab {

using cx_double = std::complex<double>;

// State on a Grid at one instant. 2D amplitudes are row-major with the x
// index outer: flat = ix * points_per_dim + iy.
struct StateVector {
  Grid grid;
  std::vector<cx_double> amplitudes;

  explicit StateVector(const Grid& g) : grid(g), amplitudes(g.size()) {}
  StateVector(const Grid& g, std::vector<cx_double> amps);

  // l2 norm with the dx^n quadrature weight.
  double l2_norm() const;
};

// <a, b> = sum conj(a) * b * dx^n; antilinear in the first slot.
cx_double inner_product(const StateVector& a, const StateVector& b);

// Pointwise product v(x) * psi(x).
StateVector apply_potential(const std::vector<double>& v_slice, const StateVector& state);

double position_mean(const StateVector& state, int axis);
double position_variance(const StateVector& state, int axis);

// In-place y += alpha * x.
void axpy(cx_double alpha, const StateVector& x, StateVector& y);

StateVector scaled(const StateVector& state, cx_double alpha);

// Normalized Gaussian wavepacket: per axis (2 pi sigma^2)^(-1/4)
// * exp(-(x-c)^2 / (4 sigma^2) + i p x), renormalized on the grid.
StateVector gaussian_state(const Grid& grid, double sigma, const std::vector<double>& center,
                           const std::vector<double>& momentum);

// Ground state of the harmonic trap v = |x|^2 in these units: per axis
// exp(-x^2/2) / pi^(1/4), energy 1 per axis; renormalized on the grid.
StateVector harmonic_ground_state(const Grid& grid);

}  // namespace mildlab
