#pragma once

// Random transversals of the net caps and certification of the result.

#include "polyfine/bodies.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/random.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace polyfine {

// Counts points y with <y, nu> >= t using a kd-tree over a fixed point set.
class HalfspaceCounter {
 public:
  explicit HalfspaceCounter(const PointList& points);

  std::size_t count(const Vec& nu, double t) const;
  // Some index with <y, nu> >= t, or -1.
  long first(const Vec& nu, double t) const;

 private:
  struct Node {
    Vec lo, hi;
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
  };
  int build(std::size_t begin, std::size_t end);
  std::size_t count_node(int node, const Vec& nu, double t) const;
  long first_node(int node, const Vec& nu, double t) const;

  PointList points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

struct TransversalResult {
  PointList points;
  std::size_t sampled_count = 0;   // M
  std::size_t retained_count = 0;  // samples kept in Y
  std::size_t patched_count = 0;
  double theta_used = 0.0;
  std::vector<std::size_t> per_cap_hits;
  std::vector<std::size_t> patched_caps;
  std::size_t rounds = 0;
};

// ceil(log(N theta) / theta), or 0 when N theta <= 1.
std::size_t rogers_sample_count(std::size_t n_sets, double theta);

// Rogers' construction for an abstract set system: draw M points, then add
// the patch point of every set that is still missed, in index order.
// `hits(samples)` returns per-set hit counts; `covers(set, point)` is used
// while patching.
template <class Point>
struct SetSystem {
  std::size_t n_sets = 0;
  std::function<Point(Rng&)> sample;
  std::function<std::vector<std::size_t>(const std::vector<Point>&)> hits;
  std::function<bool(std::size_t, const Point&)> covers;
  std::function<Point(std::size_t)> patch_point;
};

template <class Point>
struct GenericTransversal {
  std::vector<Point> points;
  std::size_t sampled_count = 0;
  std::size_t patched_count = 0;
  std::vector<std::size_t> per_cap_hits;
  std::vector<std::size_t> patched_sets;
};

template <class Point>
void patch_uncovered(const SetSystem<Point>& sys, std::vector<Point>& points,
                     std::vector<std::size_t>& hits, std::vector<std::size_t>& patched) {
  for (std::size_t i = 0; i < sys.n_sets; ++i) {
    if (hits[i] > 0) continue;
    const Point p = sys.patch_point(i);
    points.push_back(p);
    patched.push_back(i);
    for (std::size_t j = 0; j < sys.n_sets; ++j)
      if (sys.covers(j, p)) ++hits[j];
  }
}

template <class Point>
GenericTransversal<Point> rogers_transversal(const SetSystem<Point>& sys, double theta, Rng& rng) {
  GenericTransversal<Point> out;
  out.sampled_count = rogers_sample_count(sys.n_sets, theta);
  for (std::size_t k = 0; k < out.sampled_count; ++k) out.points.push_back(sys.sample(rng));
  out.per_cap_hits = sys.hits(out.points);
  patch_uncovered(sys, out.points, out.per_cap_hits, out.patched_sets);
  out.patched_count = out.patched_sets.size();
  return out;
}

// theta = safety * min over caps of max(estimate - 3 SE, 1 / n), using one
// shared sample set of size n.
double estimate_theta(const PointList& mu_samples, const std::vector<Cap>& caps, double safety = 0.5);
double estimate_theta(const CapSampler& sampler, const std::vector<Cap>& caps, std::size_t n_samples,
                      double safety, Rng& rng, int workers = 1);

// Per-cap hit counts of a point set.
std::vector<std::size_t> cap_hits(const std::vector<Cap>& caps, const PointList& points);

TransversalResult rogers_cover(const std::vector<Cap>& caps, const CapSampler& sampler, double theta,
                               Rng& rng, int workers = 1);

// Sampling rounds with M doubling from 2 sqrt(N) until at most 5% of caps are
// missed or 64 N samples have been drawn; the rest are patched.
TransversalResult adaptive_cover(const std::vector<Cap>& caps, const CapSampler& sampler, Rng& rng,
                                 int workers = 1);

struct Certificate {
  double eps_target = std::numeric_limits<double>::quiet_NaN();
  double eps_achieved = 0.0;
  std::size_t n_directions = 0;
  Vec worst_direction;
  double max_gauge_violation = 0.0;
};

// 1 - min over probes of h_Y(u) / h_K(u). Probes are n_random uniform
// directions followed by `extra_directions`. Throws Y-not-inside-K when some
// y has gauge above 1 + 1e-6.
Certificate achieved_epsilon(const ConvexBody& body, const PointList& y, std::size_t n_random, Rng& rng,
                             const PointList& extra_directions = {}, int workers = 1);

struct CoverageCheck {
  bool all_covered = false;
  std::vector<std::size_t> misses;
};

// For every net point (x, nu): some y with <y, nu> >= (1 - eps_half) <x, nu>.
CoverageCheck cap_coverage_check(const std::vector<BoundaryPoint>& net, const PointList& y, double eps_half);

}  // namespace polyfine
