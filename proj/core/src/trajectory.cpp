#include "mildlab/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace mildlab {

Trajectory::Trajectory(const TimeGrid& time_, std::vector<StateVector> states_)
    : time(time_), states(std::move(states_)) {
  if (states.size() != static_cast<std::size_t>(time.steps) + 1)
    throw std::invalid_argument("Trajectory: need steps + 1 states");
  for (const auto& s : states)
    if (s.grid != states.front().grid)
      throw std::invalid_argument("Trajectory: states must share one grid");
}

Trajectory Trajectory::zero(const TimeGrid& time, const Grid& grid) {
  return Trajectory(time, std::vector<StateVector>(time.steps + 1, StateVector(grid)));
}

Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (a.time != b.time || a.grid() != b.grid())
    throw std::invalid_argument("trajectory_difference: grids misaligned");
  Trajectory out = a;
  for (int j = 0; j <= a.time.steps; ++j) axpy(-1.0, b.states[j], out.states[j]);
  return out;
}

SampledPotential::SampledPotential(const TimeGrid& time_, const Grid& grid_,
                                   std::vector<std::vector<double>> values_)
    : time(time_), grid(grid_), values(std::move(values_)) {
  if (values.size() != static_cast<std::size_t>(time.steps) + 1)
    throw std::invalid_argument("SampledPotential: need steps + 1 samples");
  for (const auto& slice : values) {
    if (slice.size() != grid.size())
      throw std::invalid_argument("SampledPotential: sample does not match grid");
    for (double v : slice)
      if (!std::isfinite(v)) throw std::invalid_argument("SampledPotential: non-finite value");
  }
}

SampledPotential SampledPotential::zero(const TimeGrid& time, const Grid& grid) {
  return SampledPotential(time, grid,
                          std::vector<std::vector<double>>(time.steps + 1,
                                                           std::vector<double>(grid.size(), 0.0)));
}

double SampledPotential::max_abs() const {
  double m = 0.0;
  for (const auto& slice : values)
    for (double v : slice) m = std::max(m, std::abs(v));
  return m;
}

SampledPotential potential_lin_comb(double ca, const SampledPotential& a, double cb,
                                    const SampledPotential& b) {
  if (a.time != b.time || a.grid != b.grid)
    throw std::invalid_argument("potential_lin_comb: grids misaligned");
  auto values = a.values;
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t i = 0; i < values[j].size(); ++i)
      values[j][i] = ca * a.values[j][i] + cb * b.values[j][i];
  return SampledPotential(a.time, a.grid, std::move(values));
}

SampledPotential potential_scaled(const SampledPotential& pot, double factor) {
  auto values = pot.values;
  for (auto& slice : values)
    for (double& v : slice) v *= factor;
  return SampledPotential(pot.time, pot.grid, std::move(values));
}

}  // namespace mildlab
