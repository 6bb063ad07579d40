#pragma once

#include <cstdint>

#include "mildlab/trajectory.hpp"

namespace mildlab {

// Deterministic test-state generator: member(i) depends only on (seed, i), so
// ensemble maxima are reproducible and extending the index range never changes
// earlier members. Members cycle through Gaussian packets (varying width,
// center, momentum), plane-wave superpositions, and random-phase band-limited
// fields; all are normalized.
struct StateEnsemble {
  Grid grid;
  std::uint64_t seed = 1;

  StateEnsemble(const Grid& grid_, std::uint64_t seed_) : grid(grid_), seed(seed_) {}

  StateVector member(int index) const;
};

// Deterministic potential generator: few-mode products of cosines in space,
// modulated in time, with mixed amplitudes. Nonzero for every index.
struct PotentialEnsemble {
  Grid grid;
  TimeGrid time;
  std::uint64_t seed = 1;

  PotentialEnsemble(const Grid& grid_, const TimeGrid& time_, std::uint64_t seed_)
      : grid(grid_), time(time_), seed(seed_) {}

  SampledPotential member(int index) const;
};

}  // namespace mildlab
