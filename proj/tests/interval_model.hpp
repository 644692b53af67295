#pragma once

// Set system of n intervals of length `len` evenly placed in [0, 1], sampled
// uniformly. Every interval has mass exactly `len`.

#include "polyfine/cover.hpp"

#include <algorithm>
#include <vector>

namespace testing_support {

inline polyfine::SetSystem<double> interval_system(std::size_t n, double len) {
  auto start = [n, len](std::size_t i) { return n == 1 ? 0.0 : (1.0 - len) * static_cast<double>(i) / (n - 1); };
  polyfine::SetSystem<double> sys;
  sys.n_sets = n;
  sys.sample = [](polyfine::Rng& rng) { return rng.uniform(); };
  sys.covers = [start, len](std::size_t i, const double& x) { return x >= start(i) && x <= start(i) + len; };
  sys.patch_point = [start, len](std::size_t i) { return start(i) + 0.5 * len; };
  sys.hits = [n, start, len](const std::vector<double>& pts) {
    std::vector<double> s = pts;
    std::sort(s.begin(), s.end());
    std::vector<std::size_t> h(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto lo = std::lower_bound(s.begin(), s.end(), start(i));
      const auto hi = std::upper_bound(s.begin(), s.end(), start(i) + len);
      h[i] = static_cast<std::size_t>(hi - lo);
    }
    return h;
  };
  return sys;
}

}  // namespace testing_support
