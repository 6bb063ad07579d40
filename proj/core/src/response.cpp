#include "mildlab/response.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mildlab/propagation.hpp"
#include "mildlab/spectral.hpp"
#include "one_step.hpp"

namespace mildlab {

namespace {

// Lattice fixed point of the mild equation up to sample j_last, obtained by
// stepping the closed one-interval form. Identical to solve_mild up to its
// tolerance, but exact as a function of the samples, which the parameter
// derivative below differentiates term by term.
std::vector<StateVector> stepped_states(const SampledPotential& v, const StateVector& psi0,
                                        int j_last) {
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(j_last) + 1);
  out.push_back(psi0);
  const double dt = v.time.dt();
  for (int j = 0; j < j_last; ++j)
    out.push_back(detail::one_step_forward(dt, v.values[j], v.values[j + 1], out.back()));
  return out;
}

int to_sample_index(const SampledPotential& v, double x, const char* fn, const char* what) {
  const double dt = v.time.dt();
  const long j = std::lround(x / dt);
  if (j < 0 || j > v.time.steps ||
      std::abs(x - static_cast<double>(j) * dt) > 1e-9 * std::max(dt, 1.0))
    throw std::invalid_argument(std::string(fn) + ": " + what +
                                " is not on the sample lattice");
  return static_cast<int>(j);
}

void require_direction(const SampledPotential& v, const SampledPotential& w, const char* fn) {
  if (!(v.grid == w.grid) || !(v.time == w.time))
    throw std::invalid_argument(std::string(fn) + ": v and w must share grid and time samples");
}

void require_state(const SampledPotential& v, const StateVector& psi0, const char* fn) {
  if (!(v.grid == psi0.grid))
    throw std::invalid_argument(std::string(fn) + ": state grid mismatch");
}

}  // namespace

ObservableOperator ObservableOperator::multiplication(const Grid& grid,
                                                      std::vector<double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("ObservableOperator: field size does not match grid");
  for (double x : values)
    if (!std::isfinite(x))
      throw std::invalid_argument("ObservableOperator: field must be finite");
  return {Kind::field, grid, std::move(values), StateVector(grid), {}};
}

ObservableOperator ObservableOperator::rank_one_projector(const StateVector& state) {
  const double norm = state.l2_norm();
  if (norm == 0.0) throw std::invalid_argument("ObservableOperator: projector state is zero");
  return {Kind::projector, state.grid, {}, scaled(state, 1.0 / norm), {}};
}

ObservableOperator ObservableOperator::hermitian(const Grid& grid,
                                                 std::vector<cx_double> entries) {
  const std::size_t n = grid.size();
  if (entries.size() != n * n)
    throw std::invalid_argument("ObservableOperator: matrix size does not match grid");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cx_double gap = entries[i * n + j] - std::conj(entries[j * n + i]);
      if (!(std::abs(gap) <= 1e-12))
        throw std::invalid_argument("ObservableOperator: matrix is not Hermitian");
    }
  return {Kind::matrix, grid, {}, StateVector(grid), std::move(entries)};
}

StateVector ObservableOperator::apply(const StateVector& psi) const {
  if (!(psi.grid == grid))
    throw std::invalid_argument("ObservableOperator: state grid mismatch");
  switch (kind) {
    case Kind::field: {
      return apply_potential(field, psi);
    }
    case Kind::projector: {
      return scaled(state, inner_product(state, psi));
    }
    case Kind::matrix: {
      const std::size_t n = grid.size();
      StateVector out(grid);
      for (std::size_t i = 0; i < n; ++i) {
        cx_double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += matrix[i * n + j] * psi.amplitudes[j];
        out.amplitudes[i] = acc;
      }
      return out;
    }
  }
  throw std::logic_error("ObservableOperator: unknown kind");
}

double ObservableOperator::expectation(const StateVector& psi) const {
  return inner_product(psi, apply(psi)).real();
}

Trajectory delta_psi(const SampledPotential& v, const SampledPotential& w,
                     const StateVector& psi0) {
  require_direction(v, w, "delta_psi");
  require_state(v, psi0, "delta_psi");
  const double dt = v.time.dt();
  const double tau = 0.5 * dt;
  const std::size_t n = v.grid.size();

  const std::vector<StateVector> base = stepped_states(v, psi0, v.time.steps);
  Trajectory out = Trajectory::zero(v.time, v.grid);

  // Differentiating psi_{j+1} = (1 + i tau v_{j+1})^{-1} U0(dt) (1 - i tau v_j) psi_j
  // with respect to the strength of w inserts -i tau w psi at the departure
  // and the arrival sample of every step; together these are the trapezoid
  // pairing of the variation integral.
  StateVector cur(v.grid);
  StateVector work(v.grid);
  for (int j = 0; j < v.time.steps; ++j) {
    const auto& va = v.values[j];
    const auto& vb = v.values[j + 1];
    const auto& wa = w.values[j];
    const auto& wb = w.values[j + 1];
    const auto& pa = base[j].amplitudes;
    const auto& pb = base[j + 1].amplitudes;
    for (std::size_t i = 0; i < n; ++i)
      work.amplitudes[i] = cx_double(1.0, -tau * va[i]) * cur.amplitudes[i] -
                           cx_double(0.0, tau * wa[i]) * pa[i];
    work = free_propagate(work, dt);
    for (std::size_t i = 0; i < n; ++i)
      cur.amplitudes[i] = (work.amplitudes[i] - cx_double(0.0, tau * wb[i]) * pb[i]) /
                          cx_double(1.0, tau * vb[i]);
    out.states[j + 1] = cur;
  }
  return out;
}

Trajectory gateaux_fd(const SampledPotential& v, const SampledPotential& w,
                      const StateVector& psi0, double lambda) {
  require_direction(v, w, "gateaux_fd");
  require_state(v, psi0, "gateaux_fd");
  if (!std::isfinite(lambda) || lambda == 0.0)
    throw std::invalid_argument("gateaux_fd: lambda must be nonzero and finite");
  const Trajectory shifted = solve_mild(potential_lin_comb(1.0, v, lambda, w), psi0);
  const Trajectory ref = solve_mild(v, psi0);
  Trajectory out = trajectory_difference(shifted, ref);
  for (auto& state : out.states) state = scaled(state, 1.0 / lambda);
  return out;
}

double kubo_delta_expectation(const ObservableOperator& a, const SampledPotential& v,
                              const SampledPotential& w, const StateVector& psi0, double t) {
  require_direction(v, w, "kubo_delta_expectation");
  require_state(v, psi0, "kubo_delta_expectation");
  if (!(a.grid == v.grid))
    throw std::invalid_argument("kubo_delta_expectation: observable grid mismatch");
  const int jt = to_sample_index(v, t, "kubo_delta_expectation", "t");
  if (jt == 0) return 0.0;

  const double dt = v.time.dt();
  const std::vector<StateVector> base = stepped_states(v, psi0, jt);

  // y_s = U([v],s,t) A psi(t), marched with the inverse step so that A = 1
  // gives y_s = psi(s) identically; z_s = <psi_s, w_s y_s> is the first
  // commutator term and its conjugate is the second.
  StateVector y = a.apply(base[jt]);
  cx_double acc = 0.0;
  const auto add = [&](int j, double weight) {
    const cx_double z = inner_product(base[j], apply_potential(w.values[j], y));
    acc += weight * (z - std::conj(z));
  };
  add(jt, 0.5);
  for (int j = jt; j >= 1; --j) {
    y = detail::one_step_backward(dt, v.values[j - 1], v.values[j], y);
    add(j - 1, j == 1 ? 0.5 : 1.0);
  }
  const cx_double total = cx_double(0.0, dt) * acc;
  if (!(std::abs(total.imag()) <= 1e-10 * std::max(1.0, std::abs(total.real()))))
    throw std::runtime_error("kubo_delta_expectation: imaginary residue above 1e-10");
  return total.real();
}

DensityField density(const StateVector& psi, int particle_count) {
  const double mass = psi.l2_norm() * psi.l2_norm();
  if (!(std::abs(mass - 1.0) <= 1e-10))
    throw std::invalid_argument("density: state is not normalized");

  if (particle_count == 1) {
    std::vector<double> values(psi.grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::norm(psi.amplitudes[i]);
    return {psi.grid, 1, std::move(values)};
  }
  if (particle_count == 2) {
    if (psi.grid.n_dim != 2)
      throw std::invalid_argument("density: two 1D particles need a 2D grid");
    const int n = psi.grid.points_per_dim;
    double sup = 0.0, asym = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double m_jk = std::abs(psi.amplitudes[static_cast<std::size_t>(j) * n + k]);
        const double m_kj = std::abs(psi.amplitudes[static_cast<std::size_t>(k) * n + j]);
        sup = std::max(sup, m_jk);
        asym = std::max(asym, std::abs(m_jk - m_kj));
      }
    if (!(asym <= 1e-8 * sup))
      throw std::invalid_argument("density: state is not (anti)symmetrized");
    const double dy = psi.grid.spacing();
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += std::norm(psi.amplitudes[static_cast<std::size_t>(j) * n + k]);
      values[static_cast<std::size_t>(j)] = 2.0 * acc * dy;
    }
    return {Grid(1, n, psi.grid.box_length), 2, std::move(values)};
  }
  throw std::invalid_argument("density: particle_count must be 1 or 2");
}

std::vector<double> delta_density(const SampledPotential& v, const SampledPotential& w,
                                  const StateVector& psi0, double t, int particle_count) {
  if (particle_count != 1 && particle_count != 2)
    throw std::invalid_argument("delta_density: particle_count must be 1 or 2");
  if (particle_count == 2 && v.grid.n_dim != 2)
    throw std::invalid_argument("delta_density: two 1D particles need a 2D grid");
  const int jt = to_sample_index(v, t, "delta_density", "t");
  const std::vector<StateVector> base = stepped_states(v, psi0, jt);
  const Trajectory dp = delta_psi(v, w, psi0);
  const auto& pt = base[jt].amplitudes;
  const auto& qt = dp.states[jt].amplitudes;

  if (particle_count == 1) {
    std::vector<double> out(v.grid.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = 2.0 * (std::conj(pt[i]) * qt[i]).real();
    return out;
  }
  const int n = v.grid.points_per_dim;
  const double dy = v.grid.spacing();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * n + k;
      acc += (std::conj(pt[i]) * qt[i]).real();
    }
    out[static_cast<std::size_t>(j)] = 4.0 * acc * dy;
  }
  return out;
}

ResponseKernel response_kernel(const SampledPotential& v, const StateVector& psi0, double t,
                               double s, int particle_count) {
  require_state(v, psi0, "response_kernel");
  if (particle_count != 1 && particle_count != 2)
    throw std::invalid_argument("response_kernel: particle_count must be 1 or 2");
  if (particle_count == 1 && v.grid.size() > 256)
    throw std::invalid_argument("response_kernel: grid too large for a kernel matrix");
  if (particle_count == 2 &&
      (v.grid.n_dim != 2 || v.grid.points_per_dim > 64))
    throw std::invalid_argument(
        "response_kernel: two 1D particles need a 2D grid with at most 64 points per axis");
  const int jt = to_sample_index(v, t, "response_kernel", "t");
  const int js = to_sample_index(v, s, "response_kernel", "s");
  if (js > jt) throw std::invalid_argument("response_kernel: kernel is causal, needs s <= t");

  const double dt = v.time.dt();
  const double tau = 0.5 * dt;
  const int n = v.grid.points_per_dim;
  const bool two_body = particle_count == 2;
  const int m = two_body ? n : static_cast<int>(v.grid.size());
  const double dy = two_body ? v.grid.spacing() : v.grid.cell_volume();
  const Grid single = two_body ? Grid(1, n, v.grid.box_length) : v.grid;

  ResponseKernel kernel{t, s, single, particle_count,
                        std::vector<double>(static_cast<std::size_t>(m) * m, 0.0)};

  // The variation inserts -i tau w psi at the departure of the step leaving s
  // and at the arrival of the step reaching s; endpoint samples have only one
  // of the two, which is where the trapezoid halves of the contraction live.
  const bool departs = js < jt;
  const bool arrives = js >= 1;
  if (!departs && !arrives) return kernel;

  const std::vector<StateVector> base = stepped_states(v, psi0, jt);
  const auto& vs = v.values[js];
  const auto& ps = base[js].amplitudes;
  const auto& pt = base[jt].amplitudes;

  for (int y = 0; y < m; ++y) {
    StateVector column(v.grid);
    if (two_body) {
      for (int k = 0; k < n; ++k) {
        const std::size_t row = static_cast<std::size_t>(y) * n + k;
        const std::size_t col = static_cast<std::size_t>(k) * n + y;
        column.amplitudes[row] += ps[row] / dy;
        column.amplitudes[col] += ps[col] / dy;
      }
    } else {
      column.amplitudes[static_cast<std::size_t>(y)] = ps[static_cast<std::size_t>(y)] / dy;
    }
    // Departure route carries the inverse of the step's departure factor,
    // arrival route the arrival resolvent; both then march s -> t.
    for (std::size_t i = 0; i < column.amplitudes.size(); ++i) {
      cx_double gate = 0.0;
      if (departs) gate += 1.0 / cx_double(1.0, -tau * vs[i]);
      if (arrives) gate += 1.0 / cx_double(1.0, tau * vs[i]);
      column.amplitudes[i] *= gate;
    }
    for (int j = js; j < jt; ++j)
      column = detail::one_step_forward(dt, v.values[j], v.values[j + 1], column);

    if (two_body) {
      for (int x = 0; x < m; ++x) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          const std::size_t i = static_cast<std::size_t>(x) * n + k;
          acc += (std::conj(pt[i]) * column.amplitudes[i]).imag();
        }
        kernel.values[static_cast<std::size_t>(x) * m + y] = 2.0 * acc * dy;
      }
    } else {
      for (int x = 0; x < m; ++x)
        kernel.values[static_cast<std::size_t>(x) * m + y] =
            (std::conj(pt[static_cast<std::size_t>(x)]) *
             column.amplitudes[static_cast<std::size_t>(x)])
                .imag();
    }
  }
  return kernel;
}

std::vector<std::vector<double>> internal_force_density(const SampledPotential& v,
                                                        const Trajectory& traj) {
  if (!(v.grid == traj.grid()))
    throw std::invalid_argument("internal_force_density: grid mismatch");
  if (!(v.time == traj.time))
    throw std::invalid_argument("internal_force_density: time sample mismatch");
  if (traj.time.steps < 2)
    throw std::invalid_argument("internal_force_density: needs at least three time samples");

  const double dt = v.time.dt();
  const std::size_t n = v.grid.size();
  std::vector<std::vector<double>> dens(traj.states.size(), std::vector<double>(n));
  for (std::size_t j = 0; j < traj.states.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) dens[j][i] = std::norm(traj.states[j].amplitudes[i]);

  std::vector<std::vector<double>> out(static_cast<std::size_t>(traj.time.steps - 1),
                                       std::vector<double>(n));
  std::vector<double> flux(n);
  for (int j = 1; j < traj.time.steps; ++j) {
    auto& q = out[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < n; ++i)
      q[i] = (dens[j + 1][i] - 2.0 * dens[j][i] + dens[j - 1][i]) / (dt * dt);
    for (int axis = 0; axis < v.grid.n_dim; ++axis) {
      const std::vector<double> dv = spectral_derivative(v.grid, v.values[j], axis);
      for (std::size_t i = 0; i < n; ++i) flux[i] = dens[j][i] * dv[i];
      const std::vector<double> dflux = spectral_derivative(v.grid, flux, axis);
      for (std::size_t i = 0; i < n; ++i) q[i] -= dflux[i];
    }
  }
  return out;
}

}  // namespace mildlab
