#pragma once

// The sampling measure on the boundary: half cone-volume of K, half the
// cone-volume of the polar body pulled back through the star map. Also
// uniform-in-body sampling and Monte Carlo volumes.

#include "polyfine/bodies.hpp"
#include "polyfine/random.hpp"

#include <cstddef>

namespace polyfine {

// S(x, eps) = {y on the boundary : <y, nu> >= (1 - eps) <x, nu>}
struct Cap {
  BoundaryPoint apex;
  double eps = 0.0;
  double threshold = 0.0;

  static Cap make(BoundaryPoint apex, double eps);
  bool contains(const Vec& y) const { return y.dot(apex.nu) >= threshold; }
};

enum class SamplerMethod { kAuto, kRejection, kHitAndRun };

struct SamplerOptions {
  SamplerMethod method = SamplerMethod::kAuto;  // rejection for d <= 6
  int burn_in = 0;                              // 0 means 50 d
  int thinning = 0;                             // 0 means d
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Draws uniform points from a body. Rejection draws are independent; a
// hit-and-run sampler keeps its chain between calls.
class UniformSampler {
 public:
  UniformSampler(const ConvexBody& body, SamplerOptions options = {});

  Vec draw(Rng& rng);

  // Accepted / proposed for rejection sampling.
  double acceptance() const;
  bool uses_rejection() const { return rejection_; }

 private:
  Vec draw_rejection(Rng& rng);
  Vec draw_hit_and_run(Rng& rng);

  const ConvexBody& body_;
  SamplerOptions options_;
  bool rejection_;
  double box_;
  Vec state_;
  bool warmed_ = false;
  std::size_t proposed_ = 0;
  std::size_t accepted_ = 0;
};

// One uniform point (a fresh sampler per call; hit-and-run pays burn-in).
Vec uniform_in_body(const ConvexBody& body, Rng& rng, SamplerOptions options = {});

// radial(x / |x|) x / |x|. Throws invalid-argument for x = 0.
Vec radial_project(const ConvexBody& body, const Vec& x);

// x* = nu / <x, nu>. Throws invalid-position when <x, nu> <= 0.
Vec star_map(const BoundaryPoint& bp);

// Support point of K in direction y, paired with y / |y|.
BoundaryPoint star_inverse(const ConvexBody& body, const Vec& y);

// Samples the measure mu on the boundary of `body`.
class CapSampler {
 public:
  explicit CapSampler(BodyPtr body, SamplerOptions options = {});

  const ConvexBody& body() const { return *body_; }
  const ConvexBody& polar() const { return *polar_; }
  const SamplerOptions& options() const { return options_; }

  // Single draws (stateless; hit-and-run restarts its chain).
  Vec sample(Rng& rng) const;

  // n draws in fixed chunks of `kChunk`, chunk c using rng.stream(c). The
  // output does not depend on `workers`.
  PointList sample_many(std::size_t n, const Rng& rng, int workers = 1) const;

  static constexpr std::size_t kChunk = 1024;

 private:
  BodyPtr body_;
  BodyPtr polar_;
  SamplerOptions options_;
};

Vec sample_mu(const CapSampler& sampler, Rng& rng);

// Fraction of n draws of mu inside the cap, with binomial standard error.
Estimate mu_cap_estimate(const CapSampler& sampler, const Cap& cap, std::size_t n, Rng& rng);
Estimate cap_fraction(const PointList& samples, const Cap& cap);

// Bounding-box rejection estimate of vol(K).
Estimate mc_volume(const ConvexBody& body, std::size_t n, Rng& rng);

}  // namespace polyfine
