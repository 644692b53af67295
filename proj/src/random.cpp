#include "polyfine/random.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace polyfine {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t index) const { return Rng(seed_ ^ splitmix64(index + 1)); }

double Rng::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() { return normal_(engine_); }

bool Rng::coin() { return (engine_() >> 63) != 0; }

std::uint64_t Rng::below(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

Vec Rng::gaussian_vector(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = normal();
  return v;
}

Vec Rng::unit_vector(int d) {
  for (;;) {
    Vec v = gaussian_vector(d);
    const double n = v.norm();
    if (n > 1e-300) return v / n;
  }
}

void parallel_blocks(std::size_t n, int workers,
                     const std::function<void(int, std::size_t, std::size_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace polyfine
