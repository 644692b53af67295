#pragma once

#include "polyfine/linalg.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace polyfine {

// Seeded random stream. Independent streams are derived with `stream(i)`,
// whose identity is `seed ^ i` (mixed through splitmix64 before seeding the
// engine), so a (seed, partition) pair fixes every draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng stream(std::uint64_t index) const;

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  bool coin();
  std::uint64_t below(std::uint64_t n);

  Vec gaussian_vector(int d);
  Vec unit_vector(int d);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

// Runs `fn(worker, begin, end)` over `workers` contiguous blocks of [0, n).
// Block boundaries depend only on (n, workers).
void parallel_blocks(std::size_t n, int workers,
                     const std::function<void(int, std::size_t, std::size_t)>& fn);

}  // namespace polyfine
