#pragma once

// Bronshtein–Ivanov nets: maximal rho-separated sets of lifted boundary points
// x + nu_x, plus the parameter formulas that size them.

#include "polyfine/bodies.hpp"
#include "polyfine/random.hpp"

#include <cstddef>
#include <vector>

namespace polyfine {

// sqrt(eps) / (4 (d² + 1 + d sqrt(R)))
double rho_for_epsilon(int d, double R, double eps);
// 2^d (d² + 3)^d rho^{1-d}
double net_cardinality_bound(int d, double rho);
// sqrt(2R) d sqrt(eps)
double cap_diameter_bound(int d, double R, double eps);
// 2 rho (rho + eps d² + dist)
double dv_margin(double rho, double eps, int d, double dist);

struct LiftedNet {
  std::vector<BoundaryPoint> points;
  PointList lifted;
  double rho = 0.0;
  std::size_t rejection_streak = 0;
  std::size_t candidates = 0;

  std::size_t size() const { return points.size(); }
};

struct NetOptions {
  // Consecutive rejections before stopping. 0 means the adaptive rule
  // streak_factor * N + streak_offset with N the current net size.
  std::size_t stop_streak = 0;
  double streak_factor = 50.0;
  std::size_t streak_offset = 1000;
  int workers = 1;
  // Candidates evaluated per batch; affects speed only.
  std::size_t batch = 4096;
};

// Greedy insertion of lifted points at uniformly random normal directions.
LiftedNet build_net(const ConvexBody& body, double rho, Rng& rng, NetOptions options = {});

// Continues the greedy process on an existing net with a new stop rule.
void extend_net(LiftedNet& net, const ConvexBody& body, Rng& rng, NetOptions options);

// Max over n_probe random boundary points of the lifted distance to the net.
double coverage_radius_check(const LiftedNet& net, const ConvexBody& body, std::size_t n_probe,
                             Rng& rng, int workers = 1);

struct CoverageReport {
  double radius = 0.0;
  std::vector<BoundaryPoint> holes;  // probes farther than rho from the net
};

CoverageReport coverage_probe(const LiftedNet& net, const ConvexBody& body, std::size_t n_probe, Rng& rng,
                              int workers = 1);

// Greedy insertion of the given boundary points in order, keeping the net
// rho-separated. Returns the number inserted.
std::size_t insert_points(LiftedNet& net, const std::vector<BoundaryPoint>& points);

// Exact O(N²) minimum pairwise lifted distance (infinity for N < 2).
double min_separation(const LiftedNet& net);

}  // namespace polyfine
