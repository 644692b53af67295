#pragma once

// The radial contraction Phi_delta(x) = x phi_delta(|x|), its inverse, and the
// smoothed body Phi_delta(K), which has a rolling ball of radius 1/delta.

#include "polyfine/bodies.hpp"

#include <optional>
#include <vector>

namespace polyfine {

// Positive root of phi + delta r² phi² = 1.
double phi(double delta, double r);
Vec phi_map(double delta, const Vec& x);
// y / (1 - delta |y|²); throws out-of-range for |y| >= delta^{-1/2}.
Vec phi_inverse(double delta, const Vec& y);

// Image of the half-space {<x, nu> <= h}: the open ball of radius
// delta^{-1/2} intersected with the ball below.
struct HalfSpaceImage {
  Vec nu;
  double h = 0.0;
  Vec center;
  double radius = 0.0;
};

HalfSpaceImage halfspace_image(double delta, const Vec& nu, double h);

struct SmoothParams {
  int dim = 2;
  double delta = 0.0;
  double R = 0.0;

  // delta = 1 / (4 d^5), R = 1 / delta.
  static SmoothParams defaults(int d);
  static SmoothParams with_delta(int d, double delta);
  // delta in (0, 1/2), R > 0.
  void validate() const;
  // delta < 1 / (4 d^4), needed for the epsilon transfer.
  bool admits_transfer() const;
};

// eps / 2; requires eps in (0, 1/2).
double transfer_epsilon(double eps);

class SmoothedBody final : public ConvexBody {
 public:
  SmoothedBody(BodyPtr inner, double delta);

  int dim() const override { return inner_->dim(); }
  bool contains(const Vec& y) const override;
  SupportResult support(const Vec& w) const override;
  double radial(const Vec& u) const override;
  Vec normal_at(const Vec& y) const override;
  BoundaryPoint boundary(const Vec& u) const override;
  double bounding_radius() const override;
  double inradius() const override;

  const ConvexBody& inner() const { return *inner_; }
  double delta() const { return delta_; }
  bool exact_support() const { return !balls_.empty(); }

  // Boundary point of K' over the inner boundary point with normal nu.
  BoundaryPoint lift(const BoundaryPoint& inner_point) const;

 private:
  struct ActiveSet;
  std::optional<ActiveSet> intersect(const std::vector<int>& set) const;
  SupportResult support_balls(const Vec& w) const;
  SupportResult support_search(const Vec& w) const;
  double radial_objective(const Vec& v, const Vec& w) const;

  // Intersection of the spheres of an active set: centre, radius and the
  // projector onto the directions it spans.
  struct ActiveSet {
    Vec center;
    double radius = 0.0;
    Mat projector;
  };

  BodyPtr inner_;
  double delta_;
  std::vector<HalfSpaceImage> balls_;  // set when the inner body is a polytope
  std::vector<ActiveSet> active_sets_;
};

BodyPtr smooth_body(BodyPtr standardized, const SmoothParams& params);

}  // namespace polyfine
