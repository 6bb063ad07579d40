#include "fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace mildlab::fourier {

namespace {

using PlanKey = std::tuple<int, int, int>;  // n_dim, points_per_dim, sign

// The FFTW planner is not thread-safe; plan execution on distinct buffers is.
// Plans are created once per shape with FFTW_UNALIGNED so they stay valid for
// any std::vector buffer via fftw_execute_dft, and live for the process.
std::mutex planner_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
  static std::map<PlanKey, fftw_plan> cache;
  return cache;
}

fftw_plan plan_for(const Grid& grid, int sign, fftw_complex* ptr) {
  const PlanKey key{grid.n_dim, grid.points_per_dim, sign};
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto& cache = plan_cache();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const int n = grid.points_per_dim;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;  // ESTIMATE leaves the buffer untouched
  fftw_plan plan = grid.n_dim == 1 ? fftw_plan_dft_1d(n, ptr, ptr, sign, flags)
                                   : fftw_plan_dft_2d(n, n, ptr, ptr, sign, flags);
  if (plan == nullptr) throw std::runtime_error("fourier: plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(const Grid& grid, std::vector<cx_double>& data, int sign) {
  if (data.size() != grid.size()) throw std::invalid_argument("fourier: buffer does not match grid");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(grid, sign, ptr), ptr, ptr);
}

}  // namespace

void forward(const Grid& grid, std::vector<cx_double>& data) { execute(grid, data, FFTW_FORWARD); }

void backward(const Grid& grid, std::vector<cx_double>& data) {
  execute(grid, data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& a : data) a *= scale;
}

}  // namespace mildlab::fourier
