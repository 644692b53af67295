#pragma once

// Standard position: recenter at the (estimated) center of mass, then map the
// minimum-volume ellipsoid of L = K ∩ -K to a ball so that B ⊂ K ⊂ d² B.

#include "polyfine/bodies.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/random.hpp"

#include <cstddef>

namespace polyfine {

struct CenterEstimate {
  Vec mean;
  Vec std_error;  // per coordinate
};

CenterEstimate center_of_mass(const ConvexBody& body, std::size_t n_samples, Rng& rng,
                              int workers = 1);

// Origin-centred minimum-volume ellipsoid {x : xᵀ Q x <= 1} containing the
// points (Khachiyan iteration). Returns Q.
Mat mvee(const PointList& points, double tol = 1e-3);

struct StandardizeOptions {
  std::size_t n_boundary_samples = 0;  // 0 means 200 d²
  std::size_t n_verify = 1000;
  double mvee_tol = 1e-3;
  double slack = 0.02;
};

// body = T (K - t)
struct StandardizedBody {
  BodyPtr body;
  Mat matrix;
  Vec translation;
  double inner_radius_check = 0.0;
  double outer_radius_check = 0.0;

  Vec to_standard(const Vec& x) const { return matrix * (x - translation); }
  Vec from_standard(const Vec& y) const;
};

// Expects the origin in the interior of `body`; the translation is left at 0.
StandardizedBody standardize(BodyPtr body, Rng& rng, StandardizeOptions options = {});

}  // namespace polyfine
