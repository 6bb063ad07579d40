#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "mildlab/propagation.hpp"
#include "mildlab/response.hpp"
#include "mildlab/spectral.hpp"

using namespace mildlab;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

StateVector random_state(const Grid& grid, std::mt19937_64& rng) {
  StateVector out(grid);
  for (auto& a : out.amplitudes) a = cx_double(uniform(rng, -1, 1), uniform(rng, -1, 1));
  return out;
}

StateVector normalized(const StateVector& state) {
  return scaled(state, 1.0 / state.l2_norm());
}

double sup_l2_diff(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    StateVector d = a.states[j];
    axpy(-1.0, b.states[j], d);
    m = std::max(m, d.l2_norm());
  }
  return m;
}

double sup_l2(const Trajectory& a) {
  double m = 0.0;
  for (const auto& s : a.states) m = std::max(m, s.l2_norm());
  return m;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// Orthonormal pair of real orbitals on a 1D grid, Gram-Schmidt from two
// displaced Gaussians.
std::pair<StateVector, StateVector> orbital_pair(const Grid& grid) {
  StateVector a = gaussian_state(grid, 1.0, {-1.2}, {0.0});
  StateVector b = gaussian_state(grid, 0.8, {1.2}, {0.0});
  axpy(-inner_product(a, b), a, b);
  return {a, normalized(b)};
}

// Two-body state on the 2D grid from one-body orbitals, psi(x, y) =
// (a(x) b(y) + sign b(x) a(y)) / norm.
StateVector two_body_state(const Grid& grid2, const StateVector& a, const StateVector& b,
                           double sign) {
  const int n = grid2.points_per_dim;
  StateVector out(grid2);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      out.amplitudes[static_cast<std::size_t>(j) * n + k] =
          a.amplitudes[j] * b.amplitudes[k] + sign * b.amplitudes[j] * a.amplitudes[k];
  return normalized(out);
}

// Marginal 2 * integral |psi|^2 dy on the first axis.
std::vector<double> two_body_marginal(const StateVector& psi) {
  const int n = psi.grid.points_per_dim;
  const double dy = psi.grid.spacing();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += std::norm(psi.amplitudes[static_cast<std::size_t>(j) * n + k]);
    out[static_cast<std::size_t>(j)] = 2.0 * acc * dy;
  }
  return out;
}

}  // namespace

TEST_CASE("observable kinds: multiplication, projector, Hermitian matrix") {
  const Grid grid(1, 16, 4.0);
  std::mt19937_64 rng(11);
  const StateVector psi = random_state(grid, rng);

  std::vector<double> field(grid.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    field[i] = std::cos(grid.position(static_cast<int>(i)));
  const auto mult = ObservableOperator::multiplication(grid, field);
  const StateVector mp = mult.apply(psi);
  for (std::size_t i = 0; i < field.size(); ++i)
    CHECK(std::abs(mp.amplitudes[i] - field[i] * psi.amplitudes[i]) == 0.0);
  CHECK(mult.expectation(psi) == doctest::Approx(inner_product(psi, mp).real()).epsilon(1e-15));

  const StateVector seed = random_state(grid, rng);
  const auto proj = ObservableOperator::rank_one_projector(scaled(seed, 3.0));
  CHECK(proj.state.l2_norm() == doctest::Approx(1.0).epsilon(1e-14));
  const StateVector once = proj.apply(psi);
  const StateVector twice = proj.apply(once);
  StateVector gap = twice;
  axpy(-1.0, once, gap);
  CHECK(gap.l2_norm() <= 1e-12 * once.l2_norm());
  CHECK(proj.expectation(proj.state) == doctest::Approx(1.0).epsilon(1e-13));

  const std::size_t n = grid.size();
  std::vector<cx_double> mat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const cx_double z(uniform(rng, -1, 1), uniform(rng, -1, 1));
      mat[i * n + j] = z;
      mat[j * n + i] = std::conj(z);
    }
  for (std::size_t i = 0; i < n; ++i) mat[i * n + i] = uniform(rng, -1, 1);
  const auto herm = ObservableOperator::hermitian(grid, mat);
  const StateVector hp = herm.apply(psi);
  for (std::size_t i = 0; i < n; ++i) {
    cx_double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += mat[i * n + j] * psi.amplitudes[j];
    CHECK(std::abs(hp.amplitudes[i] - acc) == 0.0);
  }
  CHECK(std::abs(herm.expectation(psi) - inner_product(psi, hp).real()) == 0.0);

  mat[3] += cx_double(0.0, 1e-6);
  CHECK_THROWS_AS(ObservableOperator::hermitian(grid, mat), std::invalid_argument);
  CHECK_THROWS_AS(ObservableOperator::multiplication(grid, std::vector<double>(n - 1, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ObservableOperator::rank_one_projector(StateVector(grid)),
                  std::invalid_argument);
  const Grid other(1, 32, 4.0);
  CHECK_THROWS_AS(mult.apply(StateVector(other)), std::invalid_argument);
}

TEST_CASE("delta_psi at v=0 equals the trapezoid sum of freely evolved insertions") {
  const Grid grid(1, 32, 8.0);
  const TimeGrid time(0.6, 6);
  std::mt19937_64 rng(5);
  const StateVector psi0 = normalized(random_state(grid, rng));
  const auto v = SampledPotential::zero(time, grid);
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.7 * std::exp(-0.5 * x * x) * std::cos(2.0 * t + 0.3);
  });

  const Trajectory dp = delta_psi(v, w, psi0);
  const double dt = time.dt();
  CHECK(dp.states[0].l2_norm() == 0.0);
  for (int j = 1; j <= time.steps; ++j) {
    StateVector acc(grid);
    for (int r = 0; r <= j; ++r) {
      const StateVector base = free_propagate(psi0, r * dt);
      const StateVector term =
          free_propagate(apply_potential(w.values[r], base), (j - r) * dt);
      const double weight = (r == 0 || r == j) ? 0.5 : 1.0;
      axpy(weight, term, acc);
    }
    StateVector expected = scaled(acc, cx_double(0.0, -dt));
    axpy(-1.0, dp.states[j], expected);
    CHECK(expected.l2_norm() <= 1e-12 * (1.0 + dp.states[j].l2_norm()));
  }
}

TEST_CASE("delta_psi: zero direction, scaling, additivity") {
  const Grid grid(1, 32, 8.0);
  const TimeGrid time(0.5, 40);
  std::mt19937_64 rng(7);
  const StateVector psi0 = normalized(random_state(grid, rng));
  const auto v = SampledPotential::from_function(
      time, grid, [](double t, double x, double) { return 0.4 * std::cos(x) + 0.1 * t; });
  const auto w1 = SampledPotential::from_function(
      time, grid, [](double t, double x, double) { return std::sin(x + t); });
  const auto w2 = SampledPotential::from_function(
      time, grid, [](double, double x, double) { return std::exp(-x * x); });

  CHECK(sup_l2(delta_psi(v, SampledPotential::zero(time, grid), psi0)) == 0.0);

  const Trajectory d1 = delta_psi(v, w1, psi0);
  const Trajectory d2 = delta_psi(v, w2, psi0);
  const Trajectory dsum = delta_psi(v, potential_lin_comb(2.0, w1, -0.5, w2), psi0);
  Trajectory expect = Trajectory::zero(time, grid);
  for (int j = 0; j <= time.steps; ++j) {
    axpy(2.0, d1.states[j], expect.states[j]);
    axpy(-0.5, d2.states[j], expect.states[j]);
  }
  CHECK(sup_l2_diff(dsum, expect) <= 1e-12 * sup_l2(expect));

  CHECK_THROWS_AS(delta_psi(v, SampledPotential::zero(TimeGrid(0.5, 39), grid), psi0),
                  std::invalid_argument);
}

TEST_CASE("delta_psi is the small-lambda limit of the difference quotient") {
  const Grid grid(1, 64, 10.0);
  const TimeGrid time(0.8, 200);
  const StateVector psi0 = gaussian_state(grid, 0.9, {-0.5}, {0.6});
  const auto v = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.3 * std::cos(2.0 * pi * x / 10.0) * (1.0 + 0.4 * std::sin(t));
  });
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.2 * std::exp(-0.5 * (x - 0.4) * (x - 0.4)) * std::cos(3.0 * t);
  });

  const Trajectory dp = delta_psi(v, w, psi0);
  const double scale = sup_l2(dp);
  REQUIRE(scale > 1e-3);

  // One-sided quotients converge at first order: residuals drop tenfold
  // per decade of lambda.
  const double r2 = sup_l2_diff(gateaux_fd(v, w, psi0, 1e-2), dp) / scale;
  const double r3 = sup_l2_diff(gateaux_fd(v, w, psi0, 1e-3), dp) / scale;
  CHECK(r2 / r3 == doctest::Approx(10.0).epsilon(0.5));

  // The two-sided average kills the leading term.
  const Trajectory plus = gateaux_fd(v, w, psi0, 1e-3);
  const Trajectory minus = gateaux_fd(v, w, psi0, -1e-3);
  Trajectory central = Trajectory::zero(time, grid);
  for (int j = 0; j <= time.steps; ++j) {
    axpy(0.5, plus.states[j], central.states[j]);
    axpy(0.5, minus.states[j], central.states[j]);
  }
  CHECK(sup_l2_diff(central, dp) <= 1e-4 * scale);
  CHECK(r3 <= 1e-2);

  CHECK_THROWS_AS(gateaux_fd(v, w, psi0, 0.0), std::invalid_argument);
}

TEST_CASE("delta_psi at v=0 stays within O(lambda) of the quotient") {
  const Grid grid(1, 64, 10.0);
  const TimeGrid time(0.8, 160);
  const StateVector psi0 = gaussian_state(grid, 1.0, {0.0}, {0.5});
  const auto v = SampledPotential::zero(time, grid);
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.25 * std::exp(-x * x) * (1.0 + 0.5 * std::cos(4.0 * t));
  });
  const Trajectory dp = delta_psi(v, w, psi0);
  const double rel = sup_l2_diff(gateaux_fd(v, w, psi0, 1e-3), dp) / sup_l2(dp);
  CHECK(rel <= 1e-2);
}

TEST_CASE("kubo: identity observable and zero direction vanish") {
  const Grid grid(1, 48, 10.0);
  const TimeGrid time(0.7, 140);
  const StateVector psi0 = gaussian_state(grid, 1.0, {0.3}, {-0.4});
  const auto v = SampledPotential::from_function(
      time, grid, [](double t, double x, double) { return 0.35 * std::sin(x) + 0.05 * t; });
  const auto w = SampledPotential::from_function(
      time, grid, [](double t, double x, double) { return 0.3 * std::cos(x - t); });

  const auto identity =
      ObservableOperator::multiplication(grid, std::vector<double>(grid.size(), 1.0));
  CHECK(std::abs(kubo_delta_expectation(identity, v, w, psi0, time.horizon)) <= 1e-12);

  const auto proj = ObservableOperator::rank_one_projector(psi0);
  CHECK(kubo_delta_expectation(proj, v, SampledPotential::zero(time, grid), psi0,
                               time.horizon) == 0.0);
  CHECK(kubo_delta_expectation(proj, v, w, psi0, 0.0) == 0.0);
  CHECK_THROWS_AS(kubo_delta_expectation(proj, v, w, psi0, 0.37 * time.dt()),
                  std::invalid_argument);
}

TEST_CASE("kubo matches the derivative of the expectation value") {
  const Grid grid(1, 64, 10.0);
  const TimeGrid time(1.0, 400);
  const StateVector psi0 = gaussian_state(grid, 0.9, {-0.6}, {0.8});
  const auto v = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.3 * std::cos(2.0 * pi * x / 10.0) * (1.0 + 0.3 * std::sin(2.0 * t));
  });
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.2 * std::exp(-0.5 * x * x) * std::cos(t);
  });
  const ObservableOperator proj =
      ObservableOperator::rank_one_projector(gaussian_state(grid, 1.1, {0.4}, {0.0}));
  std::vector<double> xfield(grid.size());
  for (std::size_t i = 0; i < xfield.size(); ++i)
    xfield[i] = grid.position(static_cast<int>(i));
  const ObservableOperator pos = ObservableOperator::multiplication(grid, xfield);

  const Trajectory base = solve_mild(v, psi0);
  const Trajectory dp = delta_psi(v, w, psi0);
  for (const ObservableOperator* a : {&proj, &pos}) {
    const double kubo = kubo_delta_expectation(*a, v, w, psi0, time.horizon);
    const double direct =
        2.0 * inner_product(dp.states.back(), a->apply(base.states.back())).real();
    REQUIRE(std::abs(direct) > 1e-4);
    CHECK(kubo == doctest::Approx(direct).epsilon(1e-3));
  }

  // Independent reference: central difference quotient of <A>(t) from full
  // solves on the perturbed potentials.
  const double lambda = 1e-3;
  const Trajectory up = solve_mild(potential_lin_comb(1.0, v, lambda, w), psi0);
  const Trajectory down = solve_mild(potential_lin_comb(1.0, v, -lambda, w), psi0);
  const double quot = (proj.expectation(up.states.back()) -
                       proj.expectation(down.states.back())) /
                      (2.0 * lambda);
  CHECK(kubo_delta_expectation(proj, v, w, psi0, time.horizon) ==
        doctest::Approx(quot).epsilon(2e-3));
}

TEST_CASE("density: one particle, product pair, Slater pair, rejections") {
  const Grid grid(1, 64, 12.0);
  const StateVector psi = gaussian_state(grid, 1.0, {0.5}, {0.2});
  const DensityField n1 = density(psi, 1);
  double mass = 0.0;
  for (double x : n1.values) mass += x * grid.cell_volume();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < n1.values.size(); ++i) {
    CHECK(n1.values[i] >= 0.0);
    CHECK(n1.values[i] == doctest::Approx(std::norm(psi.amplitudes[i])).epsilon(1e-15));
  }

  const Grid grid2(2, 64, 12.0);
  const auto [phi1, phi2] = orbital_pair(grid);
  CHECK(std::abs(inner_product(phi1, phi2)) <= 1e-12);

  const StateVector product = two_body_state(grid2, phi1, phi1, 0.0);
  const DensityField np = density(product, 2);
  CHECK(np.grid.n_dim == 1);
  for (int j = 0; j < grid.points_per_dim; ++j)
    CHECK(np.values[j] ==
          doctest::Approx(2.0 * std::norm(phi1.amplitudes[j])).epsilon(1e-10));

  const StateVector slater = two_body_state(grid2, phi1, phi2, -1.0);
  const DensityField ns = density(slater, 2);
  double mass2 = 0.0;
  for (double x : ns.values) mass2 += x * grid.spacing();
  CHECK(mass2 == doctest::Approx(2.0).epsilon(1e-12));
  for (int j = 0; j < grid.points_per_dim; ++j) {
    const double closed =
        std::norm(phi1.amplitudes[j]) + std::norm(phi2.amplitudes[j]);
    CHECK(ns.values[j] == doctest::Approx(closed).epsilon(1e-10));
  }

  CHECK_THROWS_AS(density(scaled(psi, 1.1), 1), std::invalid_argument);
  CHECK_THROWS_AS(density(psi, 2), std::invalid_argument);
  CHECK_THROWS_AS(density(psi, 3), std::invalid_argument);
  StateVector lopsided(grid2);
  for (int j = 0; j < grid2.points_per_dim; ++j)
    for (int k = 0; k < grid2.points_per_dim; ++k)
      lopsided.amplitudes[static_cast<std::size_t>(j) * grid2.points_per_dim + k] =
          phi1.amplitudes[j] * phi2.amplitudes[k];
  CHECK_THROWS_AS(density(normalized(lopsided), 2), std::invalid_argument);
}

TEST_CASE("delta_density: zero direction, zero mean, quotient convergence") {
  const Grid grid(1, 128, 12.0);
  const TimeGrid time(0.5, 1500);
  const StateVector psi0 = gaussian_state(grid, 1.0, {-0.4}, {0.5});
  const auto v = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.3 * std::cos(2.0 * pi * x / 12.0) * (1.0 + 0.2 * std::sin(t));
  });
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.2 * std::exp(-0.5 * (x + 0.3) * (x + 0.3)) * std::cos(2.0 * t);
  });

  CHECK(sup_abs(delta_density(v, SampledPotential::zero(time, grid), psi0, time.horizon)) ==
        0.0);

  const std::vector<double> dn = delta_density(v, w, psi0, time.horizon);
  double mean = 0.0;
  for (double x : dn) mean += x * grid.cell_volume();
  CHECK(std::abs(mean) <= 1e-8);

  // Quotient of densities from full solves: first-order convergence to dn.
  const Trajectory ref = solve_mild(v, psi0);
  const auto quotient = [&](double lambda) {
    const Trajectory up = solve_mild(potential_lin_comb(1.0, v, lambda, w), psi0);
    std::vector<double> q(grid.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] = (std::norm(up.states.back().amplitudes[i]) -
              std::norm(ref.states.back().amplitudes[i])) /
             lambda;
    return q;
  };
  const double scale = sup_abs(dn);
  REQUIRE(scale > 1e-4);
  const double r2 = sup_abs_diff(quotient(1e-2), dn) / scale;
  const double r3 = sup_abs_diff(quotient(1e-3), dn) / scale;
  CHECK(r2 / r3 == doctest::Approx(10.0).epsilon(0.5));
  CHECK(r3 <= 1e-2);
}

TEST_CASE("delta_density for two particles matches the marginal quotient") {
  const Grid grid2(2, 24, 8.0);
  const TimeGrid time(0.4, 60);
  const Grid axis(1, 24, 8.0);
  const auto [phi1, phi2] = orbital_pair(axis);
  const StateVector psi0 = two_body_state(grid2, phi1, phi2, 1.0);
  const auto v = SampledPotential::from_function(time, grid2, [](double, double x, double y) {
    return 0.3 * (std::cos(2.0 * pi * x / 8.0) + std::cos(2.0 * pi * y / 8.0));
  });
  const auto w = SampledPotential::from_function(time, grid2, [](double t, double x, double y) {
    return 0.2 * (std::exp(-x * x) + std::exp(-y * y)) * std::cos(t);
  });

  const std::vector<double> dn = delta_density(v, w, psi0, time.horizon, 2);
  const double scale = sup_abs(dn);
  REQUIRE(scale > 1e-4);

  const Trajectory ref = solve_mild(v, psi0);
  const auto quotient = [&](double lambda) {
    const Trajectory up = solve_mild(potential_lin_comb(1.0, v, lambda, w), psi0);
    const std::vector<double> mu = two_body_marginal(up.states.back());
    const std::vector<double> m0 = two_body_marginal(ref.states.back());
    std::vector<double> q(mu.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = (mu[i] - m0[i]) / lambda;
    return q;
  };
  const double r2 = sup_abs_diff(quotient(1e-2), dn) / scale;
  const double r3 = sup_abs_diff(quotient(1e-3), dn) / scale;
  CHECK(r2 / r3 == doctest::Approx(10.0).epsilon(0.5));
  CHECK(r3 <= 1e-2);
}

TEST_CASE("response kernel contraction reproduces delta_density, one particle") {
  const Grid grid(1, 64, 10.0);
  const TimeGrid time(0.6, 48);
  const StateVector psi0 = gaussian_state(grid, 1.0, {-0.3}, {0.4});
  const auto v = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.4 * std::cos(2.0 * pi * x / 10.0) * (1.0 + 0.3 * std::sin(2.0 * t));
  });
  const auto w = SampledPotential::from_function(time, grid, [](double t, double x, double) {
    return 0.25 * std::exp(-x * x) * std::sin(3.0 * t + 0.4);
  });

  const double dt = time.dt();
  const double dy = grid.cell_volume();
  const std::size_t m = grid.size();
  std::vector<double> contracted(m, 0.0);
  for (int js = 0; js <= time.steps; ++js) {
    const ResponseKernel chi = response_kernel(v, psi0, time.horizon, js * dt);
    for (std::size_t x = 0; x < m; ++x) {
      double acc = 0.0;
      for (std::size_t y = 0; y < m; ++y)
        acc += chi.values[x * m + y] * w.values[js][y];
      contracted[x] += acc * dy * dt;
    }
  }
  const std::vector<double> direct = delta_density(v, w, psi0, time.horizon);
  CHECK(sup_abs_diff(contracted, direct) <= 1e-10 * sup_abs(direct));

  const ResponseKernel origin = response_kernel(v, psi0, 0.0, 0.0);
  CHECK(sup_abs(origin.values) == 0.0);
  CHECK_THROWS_AS(response_kernel(v, psi0, 0.0, dt), std::invalid_argument);
  CHECK_THROWS_AS(response_kernel(v, psi0, 0.4 * dt, 0.0), std::invalid_argument);
  const Grid big(1, 512, 10.0);
  CHECK_THROWS_AS(response_kernel(SampledPotential::zero(time, big), StateVector(big),
                                  time.horizon, 0.0),
                  std::invalid_argument);
}

TEST_CASE("response kernel contraction reproduces delta_density, two particles") {
  const Grid grid2(2, 16, 8.0);
  const TimeGrid time(0.5, 24);
  const Grid axis(1, 16, 8.0);
  const auto [phi1, phi2] = orbital_pair(axis);
  const StateVector psi0 = two_body_state(grid2, phi1, phi2, 1.0);
  const auto one_body_w = [](double t, double x) {
    return 0.2 * std::exp(-0.5 * x * x) * std::cos(2.0 * t);
  };
  const auto v = SampledPotential::from_function(time, grid2, [](double, double x, double y) {
    return 0.25 * (std::cos(2.0 * pi * x / 8.0) + std::cos(2.0 * pi * y / 8.0));
  });
  const auto w = SampledPotential::from_function(
      time, grid2,
      [&](double t, double x, double y) { return one_body_w(t, x) + one_body_w(t, y); });

  const double dt = time.dt();
  const double dy = axis.spacing();
  const int m = axis.points_per_dim;
  std::vector<double> contracted(static_cast<std::size_t>(m), 0.0);
  for (int js = 0; js <= time.steps; ++js) {
    const ResponseKernel chi = response_kernel(v, psi0, time.horizon, js * dt, 2);
    CHECK(chi.grid.n_dim == 1);
    for (int x = 0; x < m; ++x) {
      double acc = 0.0;
      for (int y = 0; y < m; ++y)
        acc += chi.values[static_cast<std::size_t>(x) * m + y] *
               one_body_w(js * dt, axis.position(y));
      contracted[static_cast<std::size_t>(x)] += acc * dy * dt;
    }
  }
  const std::vector<double> direct = delta_density(v, w, psi0, time.horizon, 2);
  CHECK(sup_abs_diff(contracted, direct) <= 1e-10 * sup_abs(direct));

  const Grid wide(2, 80, 8.0);
  CHECK_THROWS_AS(response_kernel(SampledPotential::zero(time, wide), StateVector(wide),
                                  time.horizon, 0.0, 2),
                  std::invalid_argument);
}

TEST_CASE("internal force density: free Gaussian obeys the variance law") {
  // The box is wide enough that the periodic images of the spreading packet
  // stay below roundoff; their interference is fast in t and would otherwise
  // be amplified by the 1/dt^2 of the second difference.
  const Grid grid(1, 160, 20.0);
  const TimeGrid time(0.4, 100);
  const double sigma = 1.0;
  const StateVector psi0 = gaussian_state(grid, sigma, {0.0}, {0.0});
  const auto v = SampledPotential::zero(time, grid);
  const Trajectory traj = solve_mild(v, psi0);
  const auto q = internal_force_density(v, traj);
  REQUIRE(q.size() == static_cast<std::size_t>(time.steps - 1));

  const double dx = grid.cell_volume();
  for (int j : {1, time.steps / 2, time.steps - 1}) {
    const auto& qj = q[static_cast<std::size_t>(j - 1)];
    double mass = 0.0, second = 0.0;
    for (std::size_t i = 0; i < qj.size(); ++i) {
      const double x = grid.position(static_cast<int>(i));
      mass += qj[i] * dx;
      second += x * x * qj[i] * dx;
    }
    // d^2/dt^2 of the second moment sigma^2 + t^2/sigma^2 is constant, and
    // the central difference of a quadratic is exact.
    CHECK(std::abs(mass) <= 1e-8);
    CHECK(second == doctest::Approx(2.0 / (sigma * sigma)).epsilon(1e-5));

    // Pointwise curvature of the spreading Gaussian profile.
    const double t = time.time(j);
    const double var = sigma * sigma + t * t / (sigma * sigma);
    const double dvar = 2.0 * t / (sigma * sigma);
    const double ddvar = 2.0 / (sigma * sigma);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < qj.size(); ++i) {
      const double x = grid.position(static_cast<int>(i));
      const double n = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * pi * var);
      const double g = 0.5 * x * x / (var * var) - 0.5 / var;
      const double gp = -x * x / (var * var * var) + 0.5 / (var * var);
      const double curv = n * ((g * g + gp) * dvar * dvar + g * ddvar);
      worst = std::max(worst, std::abs(qj[i] - curv));
      scale = std::max(scale, std::abs(curv));
    }
    CHECK(worst <= 1e-4 * scale);
  }
}

TEST_CASE("internal force density: stationary trap balance and constant gauge") {
  const Grid grid(1, 256, 16.0);
  const TimeGrid time(0.5, 600);
  const StateVector psi0 = harmonic_ground_state(grid);
  const auto v = SampledPotential::from_function(
      time, grid, [](double, double x, double) { return x * x; });
  const Trajectory traj = solve_mild(v, psi0);
  const auto q = internal_force_density(v, traj);

  for (int j : {1, time.steps / 2, time.steps - 1}) {
    const auto& qj = q[static_cast<std::size_t>(j - 1)];
    std::vector<double> dens(grid.size());
    for (std::size_t i = 0; i < dens.size(); ++i)
      dens[i] = std::norm(traj.states[j].amplitudes[i]);
    const std::vector<double> dv = spectral_derivative(grid, v.values[j], 0);
    std::vector<double> flux(grid.size());
    for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = dens[i] * dv[i];
    const std::vector<double> gauge = spectral_derivative(grid, flux, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < qj.size(); ++i)
      worst = std::max(worst, std::abs(qj[i] + gauge[i]));
    CHECK(worst <= 1e-4);
  }

  const TimeGrid short_time(0.3, 4);
  const Grid small(1, 32, 8.0);
  const auto vc = SampledPotential::from_function(
      short_time, small, [](double, double, double) { return 0.7; });
  const Trajectory tc = solve_mild(vc, gaussian_state(small, 0.8, {0.0}, {0.0}));
  const auto qc = internal_force_density(vc, tc);
  const double dt = short_time.dt();
  for (int j = 1; j < short_time.steps; ++j) {
    for (std::size_t i = 0; i < small.size(); ++i) {
      const double d2 = (std::norm(tc.states[j + 1].amplitudes[i]) -
                         2.0 * std::norm(tc.states[j].amplitudes[i]) +
                         std::norm(tc.states[j - 1].amplitudes[i])) /
                        (dt * dt);
      CHECK(std::abs(qc[static_cast<std::size_t>(j - 1)][i] - d2) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(
      internal_force_density(
          SampledPotential::zero(TimeGrid(0.1, 1), small),
          solve_mild(SampledPotential::zero(TimeGrid(0.1, 1), small),
                     gaussian_state(small, 0.8, {0.0}, {0.0}))),
      std::invalid_argument);
  CHECK_THROWS_AS(internal_force_density(vc, solve_mild(SampledPotential::zero(
                                                            short_time, grid),
                                                        psi0)),
                  std::invalid_argument);
}
