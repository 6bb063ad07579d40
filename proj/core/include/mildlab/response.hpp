#pragma once

#include <vector>

#include "mildlab/state.hpp"
#include "mildlab/trajectory.hpp"

namespace mildlab {

// Self-adjoint bounded observable on a Grid. Only the operator itself is
// stored; interaction-picture images act through evolutions applied to
// states, never through conjugated matrices.
struct ObservableOperator {
  enum class Kind { field, projector, matrix };

  Kind kind;
  Grid grid;
  std::vector<double> field;      // kind == field: real multiplication operator
  StateVector state;              // kind == projector: unit vector of the rank-one projector
  std::vector<cx_double> matrix;  // kind == matrix: row-major, Hermitian to 1e-12

  static ObservableOperator multiplication(const Grid& grid, std::vector<double> values);
  // The state is normalized here; a zero state is rejected.
  static ObservableOperator rank_one_projector(const StateVector& state);
  // entries is size() x size() row-major; max |M - M^H| above 1e-12 is rejected.
  static ObservableOperator hermitian(const Grid& grid, std::vector<cx_double> entries);

  StateVector apply(const StateVector& psi) const;
  // <psi, A psi>; real by self-adjointness, the imaginary residue is dropped.
  double expectation(const StateVector& psi) const;
};

// One-particle density n = N integral |psi|^2 dxbar on the single-particle
// grid. particle_count 1 keeps the grid of psi; particle_count 2 (two 1D
// particles on a 2D grid) marginalizes the second coordinate.
struct DensityField {
  Grid grid;
  int particle_count;
  std::vector<double> values;  // >= -1e-12 everywhere, integral = particle_count
};

// Causal response kernel chi([v], t, x, s, y) on the single-particle grid,
// s <= t. Contracting with a one-body perturbation,
//   delta_n(t, x) = sum_s dt sum_y dy chi(t, x, s, y) w(s, y),
// with plain sums over all samples s = 0..t, reproduces delta_density; the
// endpoint quadrature halves are part of the kernel values.
struct ResponseKernel {
  double t;
  double s;
  Grid grid;
  int particle_count;
  std::vector<double> values;  // row-major [x index][y index], size() x size()
};

// Derivative of v -> psi[v] in direction w:
//   delta_psi(t) = -i integral_0^t U([v],t,s) w(s) psi[v](s) ds,
// realized as the exact parameter derivative of the sampled solver, so it is
// the limit of gateaux_fd as lambda -> 0 without a quadrature mismatch.
// delta_psi(0) = 0.
Trajectory delta_psi(const SampledPotential& v, const SampledPotential& w,
                     const StateVector& psi0);

// Difference quotient (psi[v + lambda w] - psi[v]) / lambda from two full
// solves; first-order reference for delta_psi. lambda must be nonzero.
Trajectory gateaux_fd(const SampledPotential& v, const SampledPotential& w,
                      const StateVector& psi0, double lambda);

// Kubo form of the observable variation,
//   delta<A>(t) = i integral_0^t <[w_hat(s), A_hat(t)]>_0 ds,
// with w_hat(s) = U(0,s) w(s) U(s,0) and A_hat(t) = U(0,t) A U(t,0) applied
// as evolutions to states. t must lie on the sample lattice. The result is
// real; an imaginary residue above 1e-10 aborts.
double kubo_delta_expectation(const ObservableOperator& a, const SampledPotential& v,
                              const SampledPotential& w, const StateVector& psi0, double t);

// psi must be normalized (the field's integral invariant is the state norm).
// particle_count 2 requires a 2D grid holding an (anti)symmetrized two-body
// state; the exchange symmetry of |psi| is checked.
DensityField density(const StateVector& psi, int particle_count);

// Density variation delta_n = N integral (conj(psi) delta_psi + c.c.) dxbar
// at sample time t, on the single-particle grid.
std::vector<double> delta_density(const SampledPotential& v, const SampledPotential& w,
                                  const StateVector& psi0, double t, int particle_count = 1);

// Kernel columns are the stepped evolution applied to quadrature delta spikes
// (amplitude 1/dy^n at one site); for two particles the spike acts on either
// coordinate and the second coordinate is marginalized. Grid size guards:
// size() <= 256 for one particle, points_per_dim <= 64 for two.
ResponseKernel response_kernel(const SampledPotential& v, const StateVector& psi0, double t,
                               double s, int particle_count = 1);

// Internal force density q = d^2 n / dt^2 - div(n grad v) with a central
// second difference in time and spectral spatial derivatives. One field per
// interior sample j = 1..steps-1; needs at least three samples.
std::vector<std::vector<double>> internal_force_density(const SampledPotential& v,
                                                        const Trajectory& traj);

}  // namespace mildlab
