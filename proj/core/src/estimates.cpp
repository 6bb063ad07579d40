#include "mildlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "mildlab/propagation.hpp"
#include "mildlab/response.hpp"
#include "mildlab/spectral.hpp"
#include "windows.hpp"

namespace mildlab {

using detail::equal_windows;

namespace {

Trajectory free_trajectory(const TimeGrid& time, const StateVector& psi0) {
  std::vector<StateVector> states;
  states.reserve(static_cast<std::size_t>(time.steps) + 1);
  for (int j = 0; j <= time.steps; ++j) states.push_back(free_propagate(psi0, time.time(j)));
  return Trajectory(time, std::move(states));
}

std::string format_scenario(const char* bound, int subintervals, double cv) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s: M=%d, Cv=%.6g", bound, subintervals, cv);
  return buf;
}

void require_constants(const BoundConstants& constants, const char* fn) {
  if (!std::isfinite(constants.c0) || constants.c0 <= 0.0 || !std::isfinite(constants.c_q) ||
      constants.c_q <= 0.0)
    throw std::invalid_argument(std::string(fn) + ": constant estimates missing");
}

}  // namespace

Partition partition_interval(const SampledPotential& v, const ExponentFamily& family,
                             double horizon, double c_q) {
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw std::invalid_argument("partition_interval: horizon must be positive");
  if (!std::isfinite(c_q) || c_q <= 0.0)
    throw std::invalid_argument("partition_interval: c_q must be positive");

  const int steps = v.time.steps;
  const double dt = horizon / steps;
  const std::vector<double> ladder = default_thresholds(v);
  const std::size_t samples = v.values.size();

  // Per-threshold, per-sample spatial norms of the clamp decomposition. The
  // window scan reduces these in time with the same arithmetic mixed_norm
  // applies to the restricted potential, so the scan matches a brute-force
  // v_norm_upper on every window while the samples are visited only once.
  std::vector<std::vector<double>> excess_norm(ladder.size(), std::vector<double>(samples));
  std::vector<std::vector<double>> clamp_sup(ladder.size(), std::vector<double>(samples));
  std::vector<double> excess(v.grid.size()), clamped(v.grid.size());
  for (std::size_t ci = 0; ci < ladder.size(); ++ci) {
    const double c = ladder[ci];
    for (std::size_t j = 0; j < samples; ++j) {
      for (std::size_t i = 0; i < v.values[j].size(); ++i) {
        const double w = v.values[j][i];
        const double w2 = std::clamp(w, -c, c);
        clamped[i] = w2;
        excess[i] = w - w2;
      }
      excess_norm[ci][j] = spatial_norm(v.grid, excess, family.p);
      clamp_sup[ci][j] = spatial_norm(v.grid, clamped, inf);
    }
  }

  // Left-endpoint sum over [ja, jb) for finite theta, max over [ja, jb] for
  // theta = infinity; mirrors the mixed_norm time reduction.
  const auto window_combine = [&](const std::vector<double>& per_sample, double theta, int ja,
                                  int jb) {
    if (std::isinf(theta)) {
      double m = 0.0;
      for (int j = ja; j <= jb; ++j) m = std::max(m, per_sample[j]);
      return m;
    }
    double acc = 0.0;
    for (int j = ja; j < jb; ++j) acc += std::pow(per_sample[j], theta) * dt;
    return std::pow(acc, 1.0 / theta);
  };

  const auto window_norm = [&](int ja, int jb) {
    double best = 0.0;
    bool have = false;
    for (std::size_t ci = 0; ci < ladder.size(); ++ci) {
      const double value = window_combine(excess_norm[ci], family.alpha, ja, jb) +
                           window_combine(clamp_sup[ci], family.beta, ja, jb);
      if (!have || value < best) {
        best = value;
        have = true;
      }
    }
    return best;
  };

  const auto admissible = [&](int count) {
    for (const auto& [ja, jb] : equal_windows(steps, count)) {
      const double len = (jb - ja) * dt;
      if (!(c_q * t_star(len, family) * window_norm(ja, jb) <= 0.5)) return false;
    }
    return true;
  };

  for (int count = 1; count < steps; ++count)
    if (admissible(count)) return {count, equal_windows(steps, count)};
  return {steps, equal_windows(steps, steps)};
}

double compute_cv(int subintervals, double theta, double c0) {
  if (subintervals < 1)
    throw std::invalid_argument("compute_cv: subintervals must be >= 1");
  if (std::isnan(theta) || theta <= 2.0)
    throw std::invalid_argument("compute_cv: theta must be > 2");
  if (!std::isfinite(c0) || c0 <= 0.0)
    throw std::invalid_argument("compute_cv: c0 must be positive");
  return 2.0 * std::pow(subintervals, reciprocal(theta)) * (1.0 + c0);
}

ConstantEstimate estimate_c0(const ExponentFamily& family, const Grid& grid,
                             const TimeGrid& time, const StateEnsemble& states, int count) {
  if (count < 1) throw std::invalid_argument("estimate_c0: ensemble is empty");
  if (!(states.grid == grid)) throw std::invalid_argument("estimate_c0: grid mismatch");

  double best = 0.0;
  int witness = 0;
  for (int i = 0; i < count; ++i) {
    const StateVector psi = states.member(i);
    const double ratio =
        mixed_norm(free_trajectory(time, psi), family.q, family.theta) / psi.l2_norm();
    if (ratio > best) {
      best = ratio;
      witness = i;
    }
  }
  return {"C0", best, count, "member " + std::to_string(witness)};
}

ConstantEstimate estimate_cq(const ExponentFamily& family, const Grid& grid,
                             const TimeGrid& time, const PotentialEnsemble& potentials,
                             const StateEnsemble& states, int count) {
  if (count < 1) throw std::invalid_argument("estimate_cq: ensemble is empty");
  if (!(states.grid == grid) || !(potentials.grid == grid) || !(potentials.time == time))
    throw std::invalid_argument("estimate_cq: grid or time mismatch");

  const double prefactor = t_star(time.horizon, family);
  double best = 0.0;
  int witness = 0;
  for (int i = 0; i < count; ++i) {
    const SampledPotential v = potentials.member(i);
    const Trajectory phi = free_trajectory(time, states.member(i));
    const double v_norm = v_norm_upper(v, family, default_thresholds(v)).value;
    const double phi_norm = x_norm(phi, family);
    if (v_norm == 0.0 || phi_norm == 0.0)
      throw std::invalid_argument("estimate_cq: zero-norm inputs");
    const double ratio =
        x_norm(q_v_apply(v, phi), family) / (prefactor * v_norm * phi_norm);
    if (ratio > best) {
      best = ratio;
      witness = i;
    }
  }
  return {"CQ", best, count, "pair " + std::to_string(witness)};
}

BoundReport verify_frechet_bound(const SampledPotential& v, const SampledPotential& w,
                                 const StateVector& psi0, const ExponentFamily& family,
                                 const BoundConstants& constants) {
  require_constants(constants, "verify_frechet_bound");
  const double lhs = mixed_norm(delta_psi(v, w, psi0), 2.0, inf);
  const int m = partition_interval(v, family, v.time.horizon, constants.c_q).count;
  const double cv = compute_cv(m, family.theta, constants.c0);
  const double rhs = (1.0 + cv) * (1.0 + cv) * t_star(v.time.horizon, family) *
                     v_norm_upper(w, family, default_thresholds(w)).value * psi0.l2_norm();
  return {lhs, rhs, lhs <= rhs, rhs - lhs, format_scenario("frechet", m, cv)};
}

BoundReport verify_difference_bound(const SampledPotential& v, const SampledPotential& w,
                                    const StateVector& psi0, const ExponentFamily& family,
                                    const BoundConstants& constants) {
  require_constants(constants, "verify_difference_bound");
  const Trajectory shifted = solve_mild(potential_lin_comb(1.0, v, 1.0, w), psi0);
  const Trajectory ref = solve_mild(v, psi0);
  const double lhs = mixed_norm(trajectory_difference(shifted, ref), 2.0, inf);

  // The segment constant sup over v + lambda w, sampled at the ends and the
  // middle: the partition count is monotone in the restricted potential norm,
  // so the extremes sit at or near the sampled points.
  double c = 0.0;
  int worst_m = 1;
  double worst_cv = 0.0;
  for (const double lambda : {0.0, 0.5, 1.0}) {
    const SampledPotential seg = potential_lin_comb(1.0, v, lambda, w);
    const int m = partition_interval(seg, family, v.time.horizon, constants.c_q).count;
    const double cv = compute_cv(m, family.theta, constants.c0);
    if ((1.0 + cv) * (1.0 + cv) > c) {
      c = (1.0 + cv) * (1.0 + cv);
      worst_m = m;
      worst_cv = cv;
    }
  }
  const double rhs = c * t_star(v.time.horizon, family) *
                     v_norm_upper(w, family, default_thresholds(w)).value * psi0.l2_norm();
  return {lhs, rhs, lhs <= rhs, rhs - lhs, format_scenario("difference", worst_m, worst_cv)};
}

ConvergenceStudy convergence_study(const SampledPotential& v, const SampledPotential& w,
                                   const StateVector& psi0,
                                   const std::vector<double>& lambdas) {
  if (lambdas.size() < 3)
    throw std::invalid_argument("convergence_study: need at least three lambdas");
  double lo = inf, hi = 0.0;
  for (const double lambda : lambdas) {
    if (!std::isfinite(lambda) || lambda <= 0.0)
      throw std::invalid_argument("convergence_study: lambdas must be positive");
    lo = std::min(lo, lambda);
    hi = std::max(hi, lambda);
  }
  if (hi / lo < 1e3 * (1.0 - 1e-12))
    throw std::invalid_argument("convergence_study: lambdas must span three decades");

  const Trajectory dp = delta_psi(v, w, psi0);
  const double scale = mixed_norm(dp, 2.0, inf);

  ConvergenceStudy out;
  out.lambdas = lambdas;
  for (const double lambda : lambdas) {
    const double res =
        mixed_norm(trajectory_difference(gateaux_fd(v, w, psi0, lambda), dp), 2.0, inf);
    out.residuals.push_back(scale > 0.0 ? res / scale : res);
  }

  bool at_floor = true;
  for (const double r : out.residuals) at_floor = at_floor && r <= 1e-12;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int points = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (out.residuals[i] <= 0.0) continue;
    const double x = std::log(lambdas[i]);
    const double y = std::log(out.residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++points;
  }
  if (at_floor || points < 2) {
    out.saturated = true;
    return out;
  }
  out.slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  return out;
}

}  // namespace mildlab
