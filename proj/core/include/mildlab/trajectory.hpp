#pragma once

#include <vector>

#include "mildlab/grid.hpp"
#include "mildlab/state.hpp"

namespace mildlab {

// Time-sampled trajectory: one state per TimeGrid node, steps + 1 in total,
// all on one Grid.
struct Trajectory {
  TimeGrid time;
  std::vector<StateVector> states;

  Trajectory(const TimeGrid& time_, std::vector<StateVector> states_);

  static Trajectory zero(const TimeGrid& time, const Grid& grid);

  const Grid& grid() const { return states.front().grid; }
};

// Elementwise a - b on a shared TimeGrid.
Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b);

// Real field v(t_j, x) sampled on TimeGrid x Grid; finite everywhere so the
// multiplication operator stays self-adjoint at every sample.
struct SampledPotential {
  TimeGrid time;
  Grid grid;
  std::vector<std::vector<double>> values;  // [steps + 1][grid.size()]

  SampledPotential(const TimeGrid& time_, const Grid& grid_,
                   std::vector<std::vector<double>> values_);

  static SampledPotential zero(const TimeGrid& time, const Grid& grid);

  // Samples f(t, x, y) at every node; y is passed as 0 on 1D grids.
  template <class F>
  static SampledPotential from_function(const TimeGrid& time, const Grid& grid, F&& f) {
    std::vector<std::vector<double>> values(time.steps + 1);
    const int n = grid.points_per_dim;
    for (int j = 0; j <= time.steps; ++j) {
      const double t = time.time(j);
      values[j].resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x =
            grid.position(grid.n_dim == 1 ? static_cast<int>(i) : static_cast<int>(i) / n);
        const double y = grid.n_dim == 2 ? grid.position(static_cast<int>(i) % n) : 0.0;
        values[j][i] = f(t, x, y);
      }
    }
    return SampledPotential(time, grid, std::move(values));
  }

  const std::vector<double>& slice(int j) const { return values[j]; }

  double max_abs() const;
};

// ca * a + cb * b on shared grids.
SampledPotential potential_lin_comb(double ca, const SampledPotential& a, double cb,
                                    const SampledPotential& b);

SampledPotential potential_scaled(const SampledPotential& pot, double factor);

}  // namespace mildlab
