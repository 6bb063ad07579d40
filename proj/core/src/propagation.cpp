#include "mildlab/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mildlab/estimates.hpp"
#include "mildlab/spectral.hpp"
#include "fourier.hpp"
#include "one_step.hpp"
#include "windows.hpp"

namespace mildlab {

namespace {

std::vector<double> k_squared_table(const Grid& grid) {
  const int n = grid.points_per_dim;
  std::vector<double> ksq(grid.size());
  if (grid.n_dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = grid.momentum(j);
      ksq[j] = k * k;
    }
    return ksq;
  }
  std::vector<double> axis(n);
  for (int j = 0; j < n; ++j) {
    const double k = grid.momentum(j);
    axis[j] = k * k;
  }
  for (int jx = 0; jx < n; ++jx)
    for (int jy = 0; jy < n; ++jy) ksq[static_cast<std::size_t>(jx) * n + jy] = axis[jx] + axis[jy];
  return ksq;
}

double l2_distance(const Grid& grid, const std::vector<cx_double>& a,
                   const std::vector<cx_double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * grid.cell_volume());
}

ExponentFamily default_family(int n_dim) {
  return n_dim == 1 ? derive_family(1, 6.0, inf, 2.0) : derive_family(2, 4.0, inf, 2.0);
}

struct WindowOutcome {
  int iterations = 0;
  double final_residual = 0.0;
  double worst_ratio = 0.0;
};

// Picard iteration of the window fixed point on samples [ja, jb].
// out.states[ja] holds the initial value on entry; samples ja..jb are written
// on success. Each iteration evaluates forcing + Q_v(iterate) in momentum
// space: with h_r = exp(+i r dt |k|^2) FFT(v_r phi_r) and S_r the trapezoid
// prefix sum of h, the new iterate is IFFT(exp(-i r dt |k|^2) (psi0_hat - i dt S_r)).
WindowOutcome solve_window(const SampledPotential& v, int ja, int jb,
                           const std::vector<double>& ksq, double abs_tol, int max_iterations,
                           Trajectory& out) {
  const Grid& grid = v.grid;
  const std::size_t size = grid.size();
  const double dt = v.time.dt();
  const int w = jb - ja;

  std::vector<std::vector<cx_double>> phase_minus(w + 1, std::vector<cx_double>(size));
  for (int r = 0; r <= w; ++r) {
    const double tr = r * dt;
    for (std::size_t i = 0; i < size; ++i) {
      const double a = tr * ksq[i];
      phase_minus[r][i] = cx_double(std::cos(a), -std::sin(a));
    }
  }

  std::vector<cx_double> value_hat = out.states[ja].amplitudes;
  fourier::forward(grid, value_hat);

  std::vector<std::vector<cx_double>> cur(w + 1, std::vector<cx_double>(size, cx_double(0)));
  std::vector<std::vector<cx_double>> next(w + 1, std::vector<cx_double>(size));
  std::vector<cx_double> h(size), h0(size), prefix(size);

  WindowOutcome outcome;
  double prev_diff = -1.0;
  int growth = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    std::fill(prefix.begin(), prefix.end(), cx_double(0));
    for (int r = 0; r <= w; ++r) {
      const auto& vr = v.values[ja + r];
      const auto& src = cur[r];
      for (std::size_t i = 0; i < size; ++i) h[i] = vr[i] * src[i];
      fourier::forward(grid, h);
      for (std::size_t i = 0; i < size; ++i) h[i] *= std::conj(phase_minus[r][i]);
      if (r == 0) h0 = h;
      auto& dst = next[r];
      for (std::size_t i = 0; i < size; ++i) {
        prefix[i] += h[i];
        const cx_double trap = prefix[i] - 0.5 * h0[i] - 0.5 * h[i];
        dst[i] = phase_minus[r][i] * (value_hat[i] - cx_double(0.0, dt) * trap);
      }
      fourier::backward(grid, dst);
    }

    double diff = 0.0;
    for (int r = 0; r <= w; ++r) diff = std::max(diff, l2_distance(grid, next[r], cur[r]));
    cur.swap(next);
    outcome.iterations = it;

    if (diff <= abs_tol) {
      for (int r = 0; r <= w; ++r) out.states[ja + r].amplitudes = cur[r];
      outcome.final_residual = diff;
      return outcome;
    }
    if (prev_diff > 0.0) {
      const double ratio = diff / prev_diff;
      outcome.worst_ratio = std::max(outcome.worst_ratio, ratio);
      if (ratio > 1.0) {
        if (++growth >= 3)
          throw PicardDivergenceError(
              "solve_mild: residual grows (factor " + std::to_string(ratio) +
                  " per iteration); the window map is not a contraction, raise subinterval_count",
              ratio);
      } else {
        growth = 0;
      }
    }
    prev_diff = diff;
  }
  throw PicardError("solve_mild: tolerance not reached within " +
                    std::to_string(max_iterations) + " iterations (residual " +
                    std::to_string(prev_diff) + ")");
}

}  // namespace

Trajectory q_v_apply(const SampledPotential& v, const Trajectory& phi) {
  if (!(v.grid == phi.grid()) || !(v.time == phi.time))
    throw std::invalid_argument("q_v_apply: misaligned grids");
  const Grid& grid = v.grid;
  const std::size_t size = grid.size();
  const double dt = v.time.dt();
  const std::vector<double> ksq = k_squared_table(grid);

  Trajectory out = Trajectory::zero(v.time, grid);
  std::vector<cx_double> h(size), h0(size), prefix(size, cx_double(0));
  for (int r = 0; r <= v.time.steps; ++r) {
    const auto& vr = v.values[r];
    const auto& src = phi.states[r].amplitudes;
    for (std::size_t i = 0; i < size; ++i) h[i] = vr[i] * src[i];
    fourier::forward(grid, h);
    const double tr = r * dt;
    for (std::size_t i = 0; i < size; ++i) {
      const double a = tr * ksq[i];
      h[i] *= cx_double(std::cos(a), std::sin(a));
    }
    if (r == 0) h0 = h;
    auto& dst = out.states[r].amplitudes;
    for (std::size_t i = 0; i < size; ++i) {
      prefix[i] += h[i];
      const cx_double trap = prefix[i] - 0.5 * h0[i] - 0.5 * h[i];
      const double a = tr * ksq[i];
      dst[i] = cx_double(std::cos(a), -std::sin(a)) * (cx_double(0.0, -dt) * trap);
    }
    fourier::backward(grid, dst);
  }
  return out;
}

Trajectory solve_mild(const SampledPotential& v, const StateVector& psi0, const PicardConfig& cfg,
                      PicardStats* stats) {
  if (!(v.grid == psi0.grid)) throw std::invalid_argument("solve_mild: grid mismatch");
  if (!std::isfinite(cfg.tolerance) || cfg.tolerance <= 0.0)
    throw std::invalid_argument("solve_mild: tolerance must be positive");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("solve_mild: max_iterations must be >= 1");
  const double norm0 = psi0.l2_norm();
  if (!(norm0 > 0.0)) throw std::invalid_argument("solve_mild: psi0 must be nonzero");

  const int steps = v.time.steps;
  std::vector<std::pair<int, int>> windows;
  if (cfg.subinterval_count > 0) {
    windows = detail::equal_windows(steps, std::min(cfg.subinterval_count, steps));
  } else {
    windows =
        partition_interval(v, default_family(v.grid.n_dim), v.time.horizon, 1.0).windows;
  }

  // Split the residual budget across windows; the floor keeps the target
  // reachable in double precision when the split becomes very fine.
  const double abs_tol =
      norm0 * std::max(cfg.tolerance / (2.0 * static_cast<double>(windows.size())),
                       20.0 * std::numeric_limits<double>::epsilon());

  const std::vector<double> ksq = k_squared_table(v.grid);
  Trajectory out = Trajectory::zero(v.time, v.grid);
  out.states[0] = psi0;
  PicardStats run;
  run.subintervals = static_cast<int>(windows.size());
  for (const auto& [ja, jb] : windows) {
    const WindowOutcome outcome = solve_window(v, ja, jb, ksq, abs_tol, cfg.max_iterations, out);
    run.total_iterations += outcome.iterations;
    run.worst_residual_ratio = std::max(run.worst_residual_ratio, outcome.worst_ratio);
    run.final_residual = std::max(run.final_residual, outcome.final_residual);
  }
  if (stats) *stats = run;
  return out;
}

Trajectory solve_strang(const SampledPotential& v, const StateVector& psi0, double dt) {
  if (!(v.grid == psi0.grid)) throw std::invalid_argument("solve_strang: grid mismatch");
  if (!std::isfinite(dt) || dt <= 0.0)
    throw std::invalid_argument("solve_strang: dt must be positive");
  const double ratio = v.time.dt() / dt;
  const long substeps = std::lround(ratio);
  if (substeps < 1 || std::abs(ratio - static_cast<double>(substeps)) > 1e-9 * ratio)
    throw std::invalid_argument("solve_strang: dt must divide the sample spacing");

  const std::size_t size = v.grid.size();
  Trajectory out = Trajectory::zero(v.time, v.grid);
  out.states[0] = psi0;
  StateVector state = psi0;
  std::vector<double> v_mid(size);
  for (int j = 0; j < v.time.steps; ++j) {
    const auto& va = v.values[j];
    const auto& vb = v.values[j + 1];
    for (long l = 0; l < substeps; ++l) {
      const double f = (static_cast<double>(l) + 0.5) / static_cast<double>(substeps);
      for (std::size_t i = 0; i < size; ++i) v_mid[i] = (1.0 - f) * va[i] + f * vb[i];
      for (std::size_t i = 0; i < size; ++i) {
        const double a = 0.5 * dt * v_mid[i];
        state.amplitudes[i] *= cx_double(std::cos(a), -std::sin(a));
      }
      state = free_propagate(state, dt);
      for (std::size_t i = 0; i < size; ++i) {
        const double a = 0.5 * dt * v_mid[i];
        state.amplitudes[i] *= cx_double(std::cos(a), -std::sin(a));
      }
    }
    out.states[j + 1] = state;
  }
  return out;
}

StateVector evolution(const SampledPotential& v, double t, double s, const StateVector& psi) {
  if (!(v.grid == psi.grid)) throw std::invalid_argument("evolution: grid mismatch");
  const double dt = v.time.dt();
  const auto to_index = [&](double x, const char* what) {
    const long j = std::lround(x / dt);
    if (j < 0 || j > v.time.steps ||
        std::abs(x - static_cast<double>(j) * dt) > 1e-9 * std::max(dt, 1.0))
      throw std::invalid_argument(std::string("evolution: ") + what +
                                  " is not on the sample lattice");
    return static_cast<int>(j);
  };
  const int jt = to_index(t, "t");
  const int js = to_index(s, "s");
  if (jt < js) throw std::invalid_argument("evolution: t must be >= s");
  if (jt == js) return psi;

  std::vector<std::vector<double>> rows(v.values.begin() + js, v.values.begin() + jt + 1);
  const SampledPotential shifted(TimeGrid((jt - js) * dt, jt - js), v.grid, std::move(rows));
  return solve_mild(shifted, psi).states.back();
}

namespace detail {

StateVector one_step_forward(double dt, const std::vector<double>& v_a,
                             const std::vector<double>& v_b, const StateVector& psi_a) {
  const double tau = 0.5 * dt;
  StateVector out = psi_a;
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i)
    out.amplitudes[i] *= cx_double(1.0, -tau * v_a[i]);
  out = free_propagate(out, dt);
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i)
    out.amplitudes[i] /= cx_double(1.0, tau * v_b[i]);
  return out;
}

StateVector one_step_backward(double dt, const std::vector<double>& v_a,
                              const std::vector<double>& v_b, const StateVector& psi_b) {
  const double tau = 0.5 * dt;
  StateVector out = psi_b;
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i)
    out.amplitudes[i] *= cx_double(1.0, tau * v_b[i]);
  out = free_propagate(out, -dt);
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i)
    out.amplitudes[i] /= cx_double(1.0, -tau * v_a[i]);
  return out;
}

}  // namespace detail

}  // namespace mildlab
