#include "mildlab/ensembles.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace mildlab {

namespace {

// splitmix64: one 64-bit mixing round, decorrelates consecutive indices so
// member(i) draws are independent of the order members are requested in.
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t stream, int index) {
  if (index < 0) throw std::invalid_argument("ensemble: member index must be nonnegative");
  return std::mt19937_64(
      splitmix(seed ^ splitmix(stream + static_cast<std::uint64_t>(index))));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

StateVector StateEnsemble::member(int index) const {
  std::mt19937_64 rng = member_rng(seed, 0x5461u, index);
  const double l = grid.box_length;
  StateVector out(grid);

  switch (index % 3) {
    case 0: {
      std::vector<double> center(grid.n_dim), momentum(grid.n_dim);
      const double sigma = uniform(rng, 0.05 * l, 0.15 * l);
      for (int d = 0; d < grid.n_dim; ++d) {
        center[d] = uniform(rng, -0.2 * l, 0.2 * l);
        momentum[d] = uniform(rng, -3.0, 3.0);
      }
      out = gaussian_state(grid, sigma, center, momentum);
      break;
    }
    case 1: {
      // Four plane waves with small integer wave vectors.
      const int n = grid.points_per_dim;
      for (int mode = 0; mode < 4; ++mode) {
        int mx = uniform_int(rng, -4, 4);
        int my = grid.n_dim == 2 ? uniform_int(rng, -4, 4) : 0;
        const cx_double amp(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double x = grid.position(grid.n_dim == 1 ? static_cast<int>(i)
                                                         : static_cast<int>(i) / n);
          const double y = grid.n_dim == 2 ? grid.position(static_cast<int>(i) % n) : 0.0;
          const double phase = 2.0 * pi * (mx * x + my * y) / l;
          out.amplitudes[i] += amp * cx_double(std::cos(phase), std::sin(phase));
        }
      }
      break;
    }
    default: {
      // Random-phase field, band-limited by a Gaussian envelope over mode
      // numbers; assembled in position space from its cosine modes.
      const int band = std::max(2, grid.points_per_dim / 6);
      const int n = grid.points_per_dim;
      for (int mode = 0; mode < 8; ++mode) {
        int mx = uniform_int(rng, -band, band);
        int my = grid.n_dim == 2 ? uniform_int(rng, -band, band) : 0;
        const double envelope =
            std::exp(-(static_cast<double>(mx) * mx + static_cast<double>(my) * my) /
                     (band * band));
        const double theta = uniform(rng, 0.0, 2.0 * pi);
        const cx_double amp = envelope * cx_double(std::cos(theta), std::sin(theta));
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double x = grid.position(grid.n_dim == 1 ? static_cast<int>(i)
                                                         : static_cast<int>(i) / n);
          const double y = grid.n_dim == 2 ? grid.position(static_cast<int>(i) % n) : 0.0;
          const double phase = 2.0 * pi * (mx * x + my * y) / l;
          out.amplitudes[i] += amp * cx_double(std::cos(phase), std::sin(phase));
        }
      }
      break;
    }
  }

  const double norm = out.l2_norm();
  if (norm == 0.0) {
    StateVector fallback(grid);
    for (auto& a : fallback.amplitudes) a = 1.0;
    return scaled(fallback, 1.0 / fallback.l2_norm());
  }
  return scaled(out, 1.0 / norm);
}

SampledPotential PotentialEnsemble::member(int index) const {
  std::mt19937_64 rng = member_rng(seed, 0x504fu, index);
  const double l = grid.box_length;

  struct Mode {
    int mx, my;
    double amp, phase, wobble, rate, shift;
  };
  std::vector<Mode> modes;
  const int mode_count = uniform_int(rng, 2, 4);
  for (int m = 0; m < mode_count; ++m) {
    Mode mode;
    do {
      mode.mx = uniform_int(rng, -3, 3);
      mode.my = grid.n_dim == 2 ? uniform_int(rng, -3, 3) : 0;
    } while (mode.mx == 0 && mode.my == 0);
    mode.amp = uniform(rng, 0.1, 0.6);
    mode.phase = uniform(rng, 0.0, 2.0 * pi);
    mode.wobble = uniform(rng, 0.0, 0.4);
    mode.rate = uniform(rng, 0.0, 3.0);
    mode.shift = uniform(rng, 0.0, 2.0 * pi);
    modes.push_back(mode);
  }

  return SampledPotential::from_function(time, grid, [&](double t, double x, double y) {
    double acc = 0.0;
    for (const Mode& mode : modes)
      acc += mode.amp * std::cos(2.0 * pi * (mode.mx * x + mode.my * y) / l + mode.phase) *
             (1.0 + mode.wobble * std::sin(mode.rate * t + mode.shift));
    return acc;
  });
}

}  // namespace mildlab
