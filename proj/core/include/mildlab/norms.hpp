#pragma once

#include <string>
#include <vector>

#include "mildlab/exponents.hpp"
#include "mildlab/trajectory.hpp"

namespace mildlab {

// Upper-bound report for a sum-space norm, produced by a one-parameter
// threshold-decomposition scan. value bounds the true infimum from above.
struct NormReport {
  double value;
  double threshold;     // clamp level c attaining the scan minimum
  double part_p_alpha;  // ||v - clamp(v, -c, c)||_{p, alpha} at that c
  double part_inf_beta; // ||clamp(v, -c, c)||_{infinity, beta} at that c
  std::string description;
};

// (sum_x |field|^q dx^n)^(1/q) of one spatial sample; q = infinity -> max.
double spatial_norm(const Grid& grid, const std::vector<double>& field, double q);
double spatial_norm(const StateVector& state, double q);

// Space-time norm (sum_t (sum_x |phi|^q dx^n)^(theta/q) dt)^(1/theta).
// Time quadrature is the left-endpoint Riemann sum on the TimeGrid; q or
// theta = infinity means max over samples (all steps + 1 of them).
double mixed_norm(const Trajectory& traj, double q, double theta);
double mixed_norm(const SampledPotential& field, double q, double theta);

// ||phi||_{2, infinity} + ||phi||_{q, theta}.
double x_norm(const Trajectory& traj, const ExponentFamily& fam);

// For each threshold c: v2 = clamp(v, -c, c), v1 = v - v2, candidate value
// ||v1||_{p, alpha} + ||v2||_{infinity, beta}. Returns the scan minimum.
NormReport v_norm_upper(const SampledPotential& pot, const ExponentFamily& fam,
                        const std::vector<double>& thresholds);

// 0 plus a geometric ladder from 1e-3 * max|v| up to max|v|.
std::vector<double> default_thresholds(const SampledPotential& pot, int count = 17);

// Time prefactor max{T^(1 - 1/beta), T^(1 - 2/theta - 1/alpha)} of the
// potential-multiplication bound; monotone increasing in T for valid
// families (both exponents are positive).
double t_star(double T, const ExponentFamily& fam);

}  // namespace mildlab
