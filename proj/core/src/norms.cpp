#include "mildlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mildlab {

namespace {

void validate_norm_exponent(double e, const char* what) {
  if (std::isnan(e) || e < 1.0)
    throw std::invalid_argument(std::string("mixed_norm: ") + what + " must be >= 1");
}

// Left-endpoint Riemann sum in time for finite theta, max over all samples
// for theta = infinity. per_sample holds steps + 1 spatial norms.
double combine_in_time(const std::vector<double>& per_sample, double theta, double dt) {
  if (std::isinf(theta)) return *std::max_element(per_sample.begin(), per_sample.end());
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < per_sample.size(); ++j)
    acc += std::pow(per_sample[j], theta) * dt;
  return std::pow(acc, 1.0 / theta);
}

}  // namespace

double spatial_norm(const Grid& grid, const std::vector<double>& field, double q) {
  validate_norm_exponent(q, "q");
  if (field.size() != grid.size())
    throw std::invalid_argument("spatial_norm: field does not match grid");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : field) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (q == 2.0) {
    for (double v : field) acc += v * v;
  } else {
    for (double v : field) acc += std::pow(std::abs(v), q);
  }
  return std::pow(acc * grid.cell_volume(), 1.0 / q);
}

double spatial_norm(const StateVector& state, double q) {
  validate_norm_exponent(q, "q");
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& a : state.amplitudes) m = std::max(m, std::abs(a));
    return m;
  }
  double acc = 0.0;
  if (q == 2.0) {
    for (const auto& a : state.amplitudes) acc += std::norm(a);
  } else {
    for (const auto& a : state.amplitudes) acc += std::pow(std::abs(a), q);
  }
  return std::pow(acc * state.grid.cell_volume(), 1.0 / q);
}

double mixed_norm(const Trajectory& traj, double q, double theta) {
  validate_norm_exponent(q, "q");
  validate_norm_exponent(theta, "theta");
  std::vector<double> per_sample(traj.states.size());
  for (std::size_t j = 0; j < traj.states.size(); ++j)
    per_sample[j] = spatial_norm(traj.states[j], q);
  return combine_in_time(per_sample, theta, traj.time.dt());
}

double mixed_norm(const SampledPotential& field, double q, double theta) {
  validate_norm_exponent(q, "q");
  validate_norm_exponent(theta, "theta");
  std::vector<double> per_sample(field.values.size());
  for (std::size_t j = 0; j < field.values.size(); ++j)
    per_sample[j] = spatial_norm(field.grid, field.values[j], q);
  return combine_in_time(per_sample, theta, field.time.dt());
}

double x_norm(const Trajectory& traj, const ExponentFamily& fam) {
  return mixed_norm(traj, 2.0, inf) + mixed_norm(traj, fam.q, fam.theta);
}

NormReport v_norm_upper(const SampledPotential& pot, const ExponentFamily& fam,
                        const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("v_norm_upper: empty threshold list");
  NormReport best{};
  bool have_best = false;
  for (const double c : thresholds) {
    if (std::isnan(c) || c < 0.0)
      throw std::invalid_argument("v_norm_upper: thresholds must be >= 0");
    auto clamped = pot.values;   // v2
    auto excess = pot.values;    // v1 = v - v2
    for (std::size_t j = 0; j < clamped.size(); ++j)
      for (std::size_t i = 0; i < clamped[j].size(); ++i) {
        const double v = pot.values[j][i];
        const double v2 = std::clamp(v, -c, c);
        clamped[j][i] = v2;
        excess[j][i] = v - v2;
      }
    const SampledPotential v2(pot.time, pot.grid, std::move(clamped));
    const SampledPotential v1(pot.time, pot.grid, std::move(excess));
    const double a = mixed_norm(v1, fam.p, fam.alpha);
    const double b = mixed_norm(v2, inf, fam.beta);
    if (!have_best || a + b < best.value) {
      best = NormReport{a + b, c, a, b, ""};
      have_best = true;
    }
  }
  best.description = "threshold clamp scan, " + std::to_string(thresholds.size()) + " levels";
  return best;
}

std::vector<double> default_thresholds(const SampledPotential& pot, int count) {
  if (count < 2) throw std::invalid_argument("default_thresholds: count must be >= 2");
  const double m = pot.max_abs();
  if (m == 0.0) return {0.0};
  std::vector<double> out{0.0};
  const int ladder = count - 1;
  for (int i = 0; i < ladder; ++i) {
    const double frac = ladder == 1 ? 1.0 : static_cast<double>(i) / (ladder - 1);
    out.push_back(m * std::pow(1e-3, 1.0 - frac));
  }
  return out;
}

double t_star(double T, const ExponentFamily& fam) {
  if (!std::isfinite(T) || T <= 0.0) throw std::invalid_argument("t_star: T must be positive");
  const double e1 = 1.0 - reciprocal(fam.beta);
  const double e2 = 1.0 - 2.0 * reciprocal(fam.theta) - reciprocal(fam.alpha);
  return std::max(std::pow(T, e1), std::pow(T, e2));
}

}  // namespace mildlab
