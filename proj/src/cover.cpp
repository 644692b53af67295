#include "polyfine/cover.hpp"

#include "polyfine/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyfine {

namespace {

constexpr std::size_t kLeafSize = 16;

// Range of <y, nu> over the box [lo, hi].
std::pair<double, double> box_range(const Vec& lo, const Vec& hi, const Vec& nu) {
  double mn = 0.0;
  double mx = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    const double a = nu(i) * lo(i);
    const double b = nu(i) * hi(i);
    mn += std::min(a, b);
    mx += std::max(a, b);
  }
  return {mn, mx};
}

}  // namespace

HalfspaceCounter::HalfspaceCounter(const PointList& points) : points_(points), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points_.empty()) build(0, points_.size());
}

int HalfspaceCounter::build(std::size_t begin, std::size_t end) {
  const int d = static_cast<int>(points_.front().size());
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = points_[order_[begin]];
  node.hi = node.lo;
  for (std::size_t i = begin + 1; i < end; ++i) {
    node.lo = node.lo.cwiseMin(points_[order_[i]]);
    node.hi = node.hi.cwiseMax(points_[order_[i]]);
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin > kLeafSize) {
    int axis = 0;
    (node.hi - node.lo).maxCoeff(&axis);
    (void)d;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<long>(begin), order_.begin() + static_cast<long>(mid),
                     order_.begin() + static_cast<long>(end), [&](std::size_t a, std::size_t b) {
                       return points_[a](axis) < points_[b](axis);
                     });
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
  }
  return id;
}

std::size_t HalfspaceCounter::count_node(int id, const Vec& nu, double t) const {
  const Node& n = nodes_[id];
  const auto [mn, mx] = box_range(n.lo, n.hi, nu);
  if (mx < t) return 0;
  if (mn >= t) return n.end - n.begin;
  if (n.left < 0) {
    std::size_t c = 0;
    for (std::size_t i = n.begin; i < n.end; ++i) c += points_[order_[i]].dot(nu) >= t ? 1 : 0;
    return c;
  }
  return count_node(n.left, nu, t) + count_node(n.right, nu, t);
}

long HalfspaceCounter::first_node(int id, const Vec& nu, double t) const {
  const Node& n = nodes_[id];
  const auto [mn, mx] = box_range(n.lo, n.hi, nu);
  (void)mn;
  if (mx < t) return -1;
  if (n.left < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i)
      if (points_[order_[i]].dot(nu) >= t) return static_cast<long>(order_[i]);
    return -1;
  }
  const long l = first_node(n.left, nu, t);
  return l >= 0 ? l : first_node(n.right, nu, t);
}

std::size_t HalfspaceCounter::count(const Vec& nu, double t) const {
  return nodes_.empty() ? 0 : count_node(0, nu, t);
}

long HalfspaceCounter::first(const Vec& nu, double t) const {
  return nodes_.empty() ? -1 : first_node(0, nu, t);
}

// ---------------------------------------------------------------------------

std::size_t rogers_sample_count(std::size_t n_sets, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, 1]");
  const double nt = static_cast<double>(n_sets) * theta;
  if (nt <= 1.0) return 0;
  return static_cast<std::size_t>(std::ceil(std::log(nt) / theta - 1e-9));
}

std::vector<std::size_t> cap_hits(const std::vector<Cap>& caps, const PointList& points) {
  std::vector<std::size_t> hits(caps.size(), 0);
  if (points.empty()) return hits;
  HalfspaceCounter counter(points);
  for (std::size_t i = 0; i < caps.size(); ++i) hits[i] = counter.count(caps[i].apex.nu, caps[i].threshold);
  return hits;
}

double estimate_theta(const PointList& mu_samples, const std::vector<Cap>& caps, double safety) {
  if (caps.empty()) throw Error(ErrorCode::kInvalidArgument, "no caps");
  if (mu_samples.empty()) throw Error(ErrorCode::kInvalidArgument, "no samples");
  const double n = static_cast<double>(mu_samples.size());
  const auto hits = cap_hits(caps, mu_samples);
  double lowest = 1.0;
  for (std::size_t h : hits) {
    const double p = static_cast<double>(h) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    lowest = std::min(lowest, std::max(p - 3.0 * se, 1.0 / n));
  }
  return safety * lowest;
}

double estimate_theta(const CapSampler& sampler, const std::vector<Cap>& caps, std::size_t n_samples,
                      double safety, Rng& rng, int workers) {
  if (n_samples < 1000) throw Error(ErrorCode::kInvalidArgument, "estimate_theta needs >= 1000 samples");
  return estimate_theta(sampler.sample_many(n_samples, rng, workers), caps, safety);
}

namespace {

SetSystem<Vec> cap_system(const std::vector<Cap>& caps) {
  SetSystem<Vec> sys;
  sys.n_sets = caps.size();
  sys.hits = [&caps](const PointList& pts) { return cap_hits(caps, pts); };
  sys.covers = [&caps](std::size_t i, const Vec& p) { return caps[i].contains(p); };
  sys.patch_point = [&caps](std::size_t i) { return caps[i].apex.x; };
  return sys;
}

TransversalResult finish(const std::vector<Cap>& caps, PointList samples, std::vector<std::size_t> hits,
                         double theta, std::size_t rounds) {
  TransversalResult out;
  out.sampled_count = samples.size();
  out.retained_count = samples.size();
  out.points = std::move(samples);
  out.per_cap_hits = std::move(hits);
  patch_uncovered(cap_system(caps), out.points, out.per_cap_hits, out.patched_caps);
  out.patched_count = out.patched_caps.size();
  out.theta_used = theta;
  out.rounds = rounds;
  return out;
}

}  // namespace

TransversalResult rogers_cover(const std::vector<Cap>& caps, const CapSampler& sampler, double theta, Rng& rng,
                               int workers) {
  if (caps.empty()) throw Error(ErrorCode::kInvalidArgument, "no caps");
  const std::size_t m = rogers_sample_count(caps.size(), theta);
  PointList samples = sampler.sample_many(m, rng, workers);
  auto hits = cap_hits(caps, samples);
  return finish(caps, std::move(samples), std::move(hits), theta, 1);
}

TransversalResult adaptive_cover(const std::vector<Cap>& caps, const CapSampler& sampler, Rng& rng,
                                 int workers) {
  if (caps.empty()) throw Error(ErrorCode::kInvalidArgument, "no caps");
  const std::size_t n = caps.size();
  const std::size_t budget = 64 * n;
  std::size_t batch = static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(n))));
  PointList samples;
  std::vector<std::size_t> hits(n, 0);
  std::size_t rounds = 0;
  for (;;) {
    batch = std::min(batch, budget - samples.size());
    const PointList fresh = sampler.sample_many(batch, rng.stream(rounds), workers);
    const auto more = cap_hits(caps, fresh);
    for (std::size_t i = 0; i < n; ++i) hits[i] += more[i];
    samples.insert(samples.end(), fresh.begin(), fresh.end());
    ++rounds;
    const auto missed = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), std::size_t{0}));
    if (20 * missed <= n || samples.size() >= budget) break;
    batch *= 2;
  }
  return finish(caps, std::move(samples), std::move(hits), 0.0, rounds);
}

Certificate achieved_epsilon(const ConvexBody& body, const PointList& y, std::size_t n_random, Rng& rng,
                             const PointList& extra_directions, int workers) {
  if (y.empty()) throw Error(ErrorCode::kInvalidArgument, "empty vertex set");
  const int d = body.dim();
  Certificate cert;
  for (const auto& p : y) cert.max_gauge_violation = std::max(cert.max_gauge_violation, gauge(body, p) - 1.0);
  if (cert.max_gauge_violation > 1e-6) {
    throw Error(ErrorCode::kNotInsideBody,
                "a vertex lies outside K (gauge excess " + std::to_string(cert.max_gauge_violation) + ")");
  }
  PointList dirs;
  dirs.reserve(n_random + extra_directions.size());
  for (std::size_t i = 0; i < n_random; ++i) dirs.push_back(rng.unit_vector(d));
  for (const auto& u : extra_directions) dirs.push_back(u / u.norm());

  const int w = std::max(1, workers);
  std::vector<double> block_min(w, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> block_arg(w, 0);
  parallel_blocks(dirs.size(), w, [&](int worker, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double hk = body.support(dirs[i]).h;
      double hy = -std::numeric_limits<double>::infinity();
      for (const auto& p : y) hy = std::max(hy, p.dot(dirs[i]));
      const double ratio = hy / hk;
      if (ratio < block_min[worker]) {
        block_min[worker] = ratio;
        block_arg[worker] = i;
      }
    }
  });
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (int k = 0; k < w; ++k) {
    if (block_min[k] < best) {
      best = block_min[k];
      arg = block_arg[k];
    }
  }
  cert.n_directions = dirs.size();
  cert.eps_achieved = dirs.empty() ? 0.0 : 1.0 - best;
  cert.worst_direction = dirs.empty() ? zeros(d) : dirs[arg];
  return cert;
}

CoverageCheck cap_coverage_check(const std::vector<BoundaryPoint>& net, const PointList& y, double eps_half) {
  CoverageCheck out;
  HalfspaceCounter counter(y);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double t = (1.0 - eps_half) * net[i].x.dot(net[i].nu);
    if (counter.first(net[i].nu, t) < 0) out.misses.push_back(i);
  }
  out.all_covered = out.misses.empty();
  return out;
}

}  // namespace polyfine
