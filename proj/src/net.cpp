#include "polyfine/net.hpp"

#include "polyfine/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace polyfine {

double rho_for_epsilon(int d, double R, double eps) {
  return std::sqrt(eps) / (4.0 * (d * d + 1.0 + d * std::sqrt(R)));
}

double net_cardinality_bound(int d, double rho) {
  return std::pow(2.0, d) * std::pow(d * d + 3.0, d) * std::pow(rho, 1.0 - d);
}

double cap_diameter_bound(int d, double R, double eps) { return std::sqrt(2.0 * R) * d * std::sqrt(eps); }

double dv_margin(double rho, double eps, int d, double dist) {
  return 2.0 * rho * (rho + eps * d * d + dist);
}

namespace {

// Uniform grid with cell size 2 rho. Points within rho of a query lie in the
// 2^d cells formed by its own cell and the nearer neighbour along each axis.
class Grid {
 public:
  Grid(int d, double rho) : d_(d), cell_(2.0 * rho) {}

  void insert(const Vec& p, int index) {
    Cell c;
    for (int i = 0; i < d_; ++i) c[i] = static_cast<std::int64_t>(std::floor(p(i) / cell_));
    cells_[key(c)].push_back(index);
  }

  // Smallest distance to a stored point among the candidate cells, or
  // infinity if none is stored there.
  double nearest(const Vec& p, const PointList& pts) const {
    Cell c, side, q;
    for (int i = 0; i < d_; ++i) {
      const double t = p(i) / cell_;
      const double f = std::floor(t);
      c[i] = static_cast<std::int64_t>(f);
      side[i] = (t - f < 0.5) ? -1 : 1;
    }
    double best2 = std::numeric_limits<double>::infinity();
    const unsigned total = 1u << d_;
    for (unsigned mask = 0; mask < total; ++mask) {
      for (int i = 0; i < d_; ++i) q[i] = c[i] + (((mask >> i) & 1u) ? side[i] : 0);
      auto it = cells_.find(key(q));
      if (it == cells_.end()) continue;
      for (int j : it->second) best2 = std::min(best2, (pts[j] - p).squaredNorm());
    }
    return std::sqrt(best2);
  }

 private:
  using Cell = std::array<std::int64_t, kMaxDim>;

  std::uint64_t key(const Cell& c) const {
    std::uint64_t h = 0;
    for (int i = 0; i < d_; ++i) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(c[i] + (1 << 20));
    return h;
  }

  struct Hash {
    std::size_t operator()(std::uint64_t k) const { return static_cast<std::size_t>(splitmix64(k)); }
  };

  int d_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>, Hash> cells_;
};

double brute_nearest(const Vec& p, const PointList& pts) {
  double best2 = std::numeric_limits<double>::infinity();
  for (const auto& q : pts) best2 = std::min(best2, (q - p).squaredNorm());
  return std::sqrt(best2);
}

std::vector<BoundaryPoint> boundary_batch(const ConvexBody& body, const PointList& dirs, int workers) {
  std::vector<BoundaryPoint> out(dirs.size());
  parallel_blocks(dirs.size(), workers, [&](int, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = body.boundary(dirs[i]);
  });
  return out;
}

void grow(LiftedNet& net, const ConvexBody& body, Rng& rng, const NetOptions& options) {
  const int d = body.dim();
  Grid grid(d, net.rho);
  for (std::size_t i = 0; i < net.lifted.size(); ++i) grid.insert(net.lifted[i], static_cast<int>(i));
  const double bound = net_cardinality_bound(d, net.rho);
  std::size_t streak = 0;
  auto limit = [&] {
    if (options.stop_streak > 0) return options.stop_streak;
    return static_cast<std::size_t>(options.streak_factor * static_cast<double>(net.size())) + options.streak_offset;
  };
  PointList dirs;
  while (streak < limit()) {
    dirs.clear();
    for (std::size_t i = 0; i < options.batch; ++i) dirs.push_back(rng.unit_vector(d));
    const auto cands = boundary_batch(body, dirs, options.workers);
    for (const auto& bp : cands) {
      ++net.candidates;
      const Vec lifted = bp.x + bp.nu;
      if (grid.nearest(lifted, net.lifted) >= net.rho) {
        grid.insert(lifted, static_cast<int>(net.lifted.size()));
        net.points.push_back(bp);
        net.lifted.push_back(lifted);
        streak = 0;
        if (static_cast<double>(net.size()) > bound)
          throw Error(ErrorCode::kInternal, "net exceeds its cardinality bound");
      } else if (++streak >= limit()) {
        break;
      }
    }
  }
  net.rejection_streak = streak;
}

}  // namespace

LiftedNet build_net(const ConvexBody& body, double rho, Rng& rng, NetOptions options) {
  if (!(rho > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  LiftedNet net;
  net.rho = rho;
  grow(net, body, rng, options);
  spdlog::debug("net: N = {}, candidates = {}", net.size(), net.candidates);
  return net;
}

void extend_net(LiftedNet& net, const ConvexBody& body, Rng& rng, NetOptions options) {
  grow(net, body, rng, options);
}

CoverageReport coverage_probe(const LiftedNet& net, const ConvexBody& body, std::size_t n_probe, Rng& rng,
                              int workers) {
  CoverageReport out;
  if (net.size() == 0) {
    out.radius = std::numeric_limits<double>::infinity();
    return out;
  }
  const int d = body.dim();
  Grid grid(d, net.rho);
  for (std::size_t i = 0; i < net.lifted.size(); ++i) grid.insert(net.lifted[i], static_cast<int>(i));
  PointList dirs;
  const std::size_t batch = 4096;
  for (std::size_t done = 0; done < n_probe; done += batch) {
    dirs.clear();
    for (std::size_t i = 0; i < std::min(batch, n_probe - done); ++i) dirs.push_back(rng.unit_vector(d));
    const auto probes = boundary_batch(body, dirs, workers);
    for (const auto& bp : probes) {
      const Vec lifted = bp.x + bp.nu;
      double dist = grid.nearest(lifted, net.lifted);
      if (dist > net.rho) {
        dist = brute_nearest(lifted, net.lifted);
        if (dist > net.rho) out.holes.push_back(bp);
      }
      out.radius = std::max(out.radius, dist);
    }
  }
  return out;
}

double coverage_radius_check(const LiftedNet& net, const ConvexBody& body, std::size_t n_probe, Rng& rng,
                             int workers) {
  return coverage_probe(net, body, n_probe, rng, workers).radius;
}

std::size_t insert_points(LiftedNet& net, const std::vector<BoundaryPoint>& points) {
  if (points.empty()) return 0;
  const int d = static_cast<int>(points.front().x.size());
  Grid grid(d, net.rho);
  for (std::size_t i = 0; i < net.lifted.size(); ++i) grid.insert(net.lifted[i], static_cast<int>(i));
  std::size_t added = 0;
  for (const auto& bp : points) {
    const Vec lifted = bp.x + bp.nu;
    if (grid.nearest(lifted, net.lifted) >= net.rho) {
      grid.insert(lifted, static_cast<int>(net.lifted.size()));
      net.points.push_back(bp);
      net.lifted.push_back(lifted);
      ++added;
    }
  }
  if (static_cast<double>(net.size()) > net_cardinality_bound(d, net.rho))
    throw Error(ErrorCode::kInternal, "net exceeds its cardinality bound");
  return added;
}

double min_separation(const LiftedNet& net) {
  double best2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.lifted.size(); ++i)
    for (std::size_t j = i + 1; j < net.lifted.size(); ++j)
      best2 = std::min(best2, (net.lifted[i] - net.lifted[j]).squaredNorm());
  return std::sqrt(best2);
}

}  // namespace polyfine
