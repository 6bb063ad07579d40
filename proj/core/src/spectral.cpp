#include "mildlab/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "fourier.hpp"

namespace mildlab {

StateVector free_propagate(const StateVector& state, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("free_propagate: t must be finite");
  StateVector out = state;
  fourier::forward(out.grid, out.amplitudes);
  const int n = out.grid.points_per_dim;
  if (out.grid.n_dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = out.grid.momentum(j);
      const double phase = -t * k * k;
      out.amplitudes[j] *= cx_double(std::cos(phase), std::sin(phase));
    }
  } else {
    std::vector<double> k2(n);
    for (int j = 0; j < n; ++j) {
      const double k = out.grid.momentum(j);
      k2[j] = k * k;
    }
    for (int jx = 0; jx < n; ++jx)
      for (int jy = 0; jy < n; ++jy) {
        const double phase = -t * (k2[jx] + k2[jy]);
        out.amplitudes[static_cast<std::size_t>(jx) * n + jy] *=
            cx_double(std::cos(phase), std::sin(phase));
      }
  }
  fourier::backward(out.grid, out.amplitudes);
  return out;
}

std::vector<double> spectral_derivative(const Grid& grid, const std::vector<double>& field,
                                        int axis) {
  if (field.size() != grid.size())
    throw std::invalid_argument("spectral_derivative: field does not match grid");
  if (axis < 0 || axis >= grid.n_dim)
    throw std::invalid_argument("spectral_derivative: axis out of range");
  const int n = grid.points_per_dim;
  std::vector<cx_double> work(field.begin(), field.end());
  fourier::forward(grid, work);
  auto wavenumber = [&](int j) {  // odd-derivative convention: Nyquist -> 0
    return j == n / 2 ? 0.0 : grid.momentum(j);
  };
  if (grid.n_dim == 1) {
    for (int j = 0; j < n; ++j) work[j] *= cx_double(0.0, wavenumber(j));
  } else {
    for (int jx = 0; jx < n; ++jx)
      for (int jy = 0; jy < n; ++jy)
        work[static_cast<std::size_t>(jx) * n + jy] *=
            cx_double(0.0, wavenumber(axis == 0 ? jx : jy));
  }
  fourier::backward(grid, work);
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = work[i].real();
  return out;
}

}  // namespace mildlab
