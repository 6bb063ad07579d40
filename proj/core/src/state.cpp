#include "mildlab/state.hpp"

#include <cmath>
#include <stdexcept>

namespace mildlab {

StateVector::StateVector(const Grid& g, std::vector<cx_double> amps)
    : grid(g), amplitudes(std::move(amps)) {
  if (amplitudes.size() != grid.size())
    throw std::invalid_argument("StateVector: amplitude count does not match grid");
  for (const auto& a : amplitudes)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("StateVector: non-finite amplitude");
}

double StateVector::l2_norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s * grid.cell_volume());
}

cx_double inner_product(const StateVector& a, const StateVector& b) {
  if (a.grid != b.grid) throw std::invalid_argument("inner_product: grid mismatch");
  cx_double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s * a.grid.cell_volume();
}

StateVector apply_potential(const std::vector<double>& v_slice, const StateVector& state) {
  if (v_slice.size() != state.amplitudes.size())
    throw std::invalid_argument("apply_potential: grid mismatch");
  StateVector out(state.grid);
  for (std::size_t i = 0; i < v_slice.size(); ++i)
    out.amplitudes[i] = v_slice[i] * state.amplitudes[i];
  return out;
}

namespace {

// Coordinate of the flat index along the given axis.
double coordinate(const Grid& grid, std::size_t flat, int axis) {
  if (grid.n_dim == 1) return grid.position(static_cast<int>(flat));
  const int n = grid.points_per_dim;
  const int ix = static_cast<int>(flat) / n;
  const int iy = static_cast<int>(flat) % n;
  return grid.position(axis == 0 ? ix : iy);
}

}  // namespace

double position_mean(const StateVector& state, int axis) {
  if (axis < 0 || axis >= state.grid.n_dim)
    throw std::invalid_argument("position_mean: axis out of range");
  double w = 0.0, m = 0.0;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    w += p;
    m += p * coordinate(state.grid, i, axis);
  }
  if (w == 0.0) throw std::invalid_argument("position_mean: zero state");
  return m / w;
}

double position_variance(const StateVector& state, int axis) {
  const double mean = position_mean(state, axis);
  double w = 0.0, v = 0.0;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    const double d = coordinate(state.grid, i, axis) - mean;
    w += p;
    v += p * d * d;
  }
  return v / w;
}

void axpy(cx_double alpha, const StateVector& x, StateVector& y) {
  if (x.grid != y.grid) throw std::invalid_argument("axpy: grid mismatch");
  for (std::size_t i = 0; i < x.amplitudes.size(); ++i) y.amplitudes[i] += alpha * x.amplitudes[i];
}

StateVector scaled(const StateVector& state, cx_double alpha) {
  StateVector out = state;
  for (auto& a : out.amplitudes) a *= alpha;
  return out;
}

namespace {

void normalize(StateVector& state) {
  const double n = state.l2_norm();
  if (n == 0.0) throw std::invalid_argument("normalize: zero state");
  for (auto& a : state.amplitudes) a /= n;
}

}  // namespace

StateVector gaussian_state(const Grid& grid, double sigma, const std::vector<double>& center,
                           const std::vector<double>& momentum) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_state: sigma must be positive");
  if (center.size() != static_cast<std::size_t>(grid.n_dim) || momentum.size() != center.size())
    throw std::invalid_argument("gaussian_state: center/momentum size must match n_dim");
  StateVector out(grid);
  const int n = grid.points_per_dim;
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    double arg_re = 0.0, arg_im = 0.0;
    for (int axis = 0; axis < grid.n_dim; ++axis) {
      const int j = grid.n_dim == 1 ? static_cast<int>(i) : (axis == 0 ? static_cast<int>(i) / n : static_cast<int>(i) % n);
      const double x = grid.position(j);
      const double d = x - center[axis];
      arg_re -= d * d / (4.0 * sigma * sigma);
      arg_im += momentum[axis] * x;
    }
    out.amplitudes[i] = std::exp(arg_re) * cx_double(std::cos(arg_im), std::sin(arg_im));
  }
  normalize(out);
  return out;
}

StateVector harmonic_ground_state(const Grid& grid) {
  StateVector out(grid);
  const int n = grid.points_per_dim;
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    double arg = 0.0;
    for (int axis = 0; axis < grid.n_dim; ++axis) {
      const int j = grid.n_dim == 1 ? static_cast<int>(i) : (axis == 0 ? static_cast<int>(i) / n : static_cast<int>(i) % n);
      const double x = grid.position(j);
      arg -= 0.5 * x * x;
    }
    out.amplitudes[i] = std::exp(arg);
  }
  normalize(out);
  return out;
}

}  // namespace mildlab
