#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mildlab {

inline constexpr double pi = 3.14159265358979323846;

// Periodic position lattice together with its discrete-Fourier dual.
// Units: hbar = 1, 2m = 1, so the free Hamiltonian is -Laplacian and the
// free group is exp(it Laplacian).
struct Grid {
  int n_dim;           // 1 or 2
  int points_per_dim;  // even, >= 8
  double box_length;   // period L

  Grid(int n_dim_, int points_per_dim_, double box_length_)
      : n_dim(n_dim_), points_per_dim(points_per_dim_), box_length(box_length_) {
    if (n_dim != 1 && n_dim != 2)
      throw std::invalid_argument("Grid: n_dim must be 1 or 2");
    if (points_per_dim < 8 || points_per_dim % 2 != 0)
      throw std::invalid_argument("Grid: points_per_dim must be even and >= 8");
    if (!std::isfinite(box_length) || box_length <= 0.0)
      throw std::invalid_argument("Grid: box_length must be positive and finite");
  }

  double spacing() const { return box_length / points_per_dim; }

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < n_dim; ++d) s *= static_cast<std::size_t>(points_per_dim);
    return s;
  }

  // Quadrature weight dx^n of one cell.
  double cell_volume() const { return std::pow(spacing(), n_dim); }

  // Position of index j along one axis, in [-L/2, L/2).
  double position(int j) const { return -0.5 * box_length + j * spacing(); }

  // Dual momentum of index j along one axis, k = 2*pi*j'/L with j' in the
  // symmetric integer range of the DFT.
  double momentum(int j) const {
    const int half = points_per_dim / 2;
    const int j_sym = (j <= half) ? j : j - points_per_dim;
    return 2.0 * pi * j_sym / box_length;
  }

  bool operator==(const Grid&) const = default;
};

// Uniform samples t_j = j*dt of [0, T] with dt = T/steps.
struct TimeGrid {
  double horizon;
  int steps;

  TimeGrid(double horizon_, int steps_) : horizon(horizon_), steps(steps_) {
    if (!std::isfinite(horizon) || horizon <= 0.0)
      throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }

  double dt() const { return horizon / steps; }
  double time(int j) const { return j * dt(); }

  bool operator==(const TimeGrid&) const = default;
};

}  // namespace mildlab
