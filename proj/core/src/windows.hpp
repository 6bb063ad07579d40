#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace mildlab::detail {

// Near-equal split of the sample range [0, steps] into count windows of
// inclusive index pairs. count <= steps keeps every window nonempty; rounded
// boundaries of an increment >= 1 are strictly increasing.
inline std::vector<std::pair<int, int>> equal_windows(int steps, int count) {
  std::vector<std::pair<int, int>> w(count);
  for (int m = 0; m < count; ++m)
    w[m] = {static_cast<int>(std::lround(m * steps / static_cast<double>(count))),
            static_cast<int>(std::lround((m + 1) * steps / static_cast<double>(count)))};
  return w;
}

}  // namespace mildlab::detail
