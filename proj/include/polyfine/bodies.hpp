#pragma once

// Convex body oracles. Every other module talks to a body only through the
// `ConvexBody` interface: membership, support, radial/ray exit, normals and a
// few radii used to set up sampling boxes.

#include "polyfine/linalg.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

namespace polyfine {

struct SupportResult {
  double h = 0.0;  // sup over K of <., u>
  Vec point;       // a maximizer
};

// A boundary point paired with an outer unit normal.
struct BoundaryPoint {
  Vec x;
  Vec nu;
};

// {x : <normals[i], x> <= offsets[i]}
struct HalfspaceRep {
  std::vector<Vec> normals;
  std::vector<double> offsets;
};

class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  virtual int dim() const = 0;
  virtual bool contains(const Vec& x) const = 0;

  // Throws invalid-argument on a zero direction.
  virtual SupportResult support(const Vec& u) const = 0;

  // Largest t >= 0 with p + t v in K, for p in the interior. The default
  // bisects on `contains` to 1e-12 relative.
  virtual double ray_exit(const Vec& p, const Vec& v) const;

  // r > 0 with r u on the boundary, for unit u. Throws invalid-body when the
  // origin is not interior.
  virtual double radial(const Vec& u) const { return ray_exit(zeros(dim()), u); }

  // An outer unit normal at a boundary point x (deterministic choice on
  // non-smooth points).
  virtual Vec normal_at(const Vec& x) const = 0;

  // Boundary parameterized by normal directions: the support point in
  // direction u together with the normal u/|u|.
  virtual BoundaryPoint boundary(const Vec& u) const;

  // Some R with K inside R*B.
  virtual double bounding_radius() const = 0;

  // A lower bound on the distance from the origin to the boundary.
  virtual double inradius() const = 0;

  // A lower bound on the distance from an interior point p to the boundary.
  // The default uses p + (1 - g(p)) K  inside K.
  virtual double boundary_distance(const Vec& p) const;

  virtual std::optional<HalfspaceRep> halfspaces() const { return std::nullopt; }
  virtual std::optional<std::vector<Vec>> vertices() const { return std::nullopt; }
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

// Minkowski functional |x| / radial(x/|x|); zero at the origin.
double gauge(const ConvexBody& body, const Vec& x);

// ---------------------------------------------------------------------------
// Concrete kinds.

class Ball final : public ConvexBody {
 public:
  Ball(Vec center, double radius);
  static std::shared_ptr<Ball> unit(int d) { return std::make_shared<Ball>(zeros(d), 1.0); }

  int dim() const override { return static_cast<int>(center_.size()); }
  bool contains(const Vec& x) const override;
  SupportResult support(const Vec& u) const override;
  double ray_exit(const Vec& p, const Vec& v) const override;
  Vec normal_at(const Vec& x) const override;
  double bounding_radius() const override { return center_.norm() + radius_; }
  double inradius() const override { return std::max(0.0, radius_ - center_.norm()); }
  double boundary_distance(const Vec& p) const override;

 private:
  Vec center_;
  double radius_;
};

// K = center + A B.
class Ellipsoid final : public ConvexBody {
 public:
  Ellipsoid(Mat matrix, Vec center);

  int dim() const override { return static_cast<int>(center_.size()); }
  bool contains(const Vec& x) const override;
  SupportResult support(const Vec& u) const override;
  double ray_exit(const Vec& p, const Vec& v) const override;
  Vec normal_at(const Vec& x) const override;
  double bounding_radius() const override { return center_.norm() + sigma_max_; }
  double inradius() const override { return boundary_distance(zeros(dim())); }
  double boundary_distance(const Vec& p) const override;

 private:
  Mat a_;
  Mat a_inv_;
  Vec center_;
  double sigma_max_;
  double sigma_min_;
};

// {x : ||x||_p <= radius}, p >= 1 finite.
class LpBall final : public ConvexBody {
 public:
  LpBall(int d, double p, double radius);

  int dim() const override { return d_; }
  bool contains(const Vec& x) const override;
  SupportResult support(const Vec& u) const override;
  double radial(const Vec& u) const override;
  Vec normal_at(const Vec& x) const override;
  double bounding_radius() const override;
  double inradius() const override;
  std::optional<HalfspaceRep> halfspaces() const override;
  std::optional<std::vector<Vec>> vertices() const override;

  double pnorm(const Vec& x) const;

 private:
  int d_;
  double p_;
  double radius_;
};

// center + [-half_width, half_width]^d
class Cube final : public ConvexBody {
 public:
  Cube(Vec center, double half_width);

  int dim() const override { return static_cast<int>(center_.size()); }
  bool contains(const Vec& x) const override;
  SupportResult support(const Vec& u) const override;
  double ray_exit(const Vec& p, const Vec& v) const override;
  Vec normal_at(const Vec& x) const override;
  double bounding_radius() const override;
  double inradius() const override { return boundary_distance(zeros(dim())); }
  double boundary_distance(const Vec& p) const override;
  std::optional<HalfspaceRep> halfspaces() const override;
  std::optional<std::vector<Vec>> vertices() const override;

 private:
  Vec center_;
  double hw_;
};

// Polytope carrying both representations. Built from either one; the other is
// enumerated by brute force over d-subsets, which is fine for the small
// polytopes this library targets.
class Polytope final : public ConvexBody {
 public:
  static std::shared_ptr<Polytope> from_halfspaces(std::vector<Vec> normals,
                                                   std::vector<double> offsets);
  static std::shared_ptr<Polytope> from_points(std::vector<Vec> points);

  int dim() const override { return d_; }
  bool contains(const Vec& x) const override;
  // Ties go to the lowest vertex index.
  SupportResult support(const Vec& u) const override;
  double ray_exit(const Vec& p, const Vec& v) const override;
  Vec normal_at(const Vec& x) const override;
  double bounding_radius() const override { return bounding_radius_; }
  double inradius() const override { return boundary_distance(zeros(d_)); }
  double boundary_distance(const Vec& p) const override;
  std::optional<HalfspaceRep> halfspaces() const override;
  std::optional<std::vector<Vec>> vertices() const override { return vertices_; }

 private:
  Polytope(int d, std::vector<Vec> normals, std::vector<double> offsets,
           std::vector<Vec> vertices);

  int d_;
  std::vector<Vec> normals_;  // unit
  std::vector<double> offsets_;
  std::vector<Vec> vertices_;
  double bounding_radius_;
};

// y = T x + t applied to an inner body.
class AffineImage final : public ConvexBody {
 public:
  AffineImage(BodyPtr inner, Mat matrix, Vec translation);
  // `inradius_bound`, when given, replaces the sigma_min estimate of inradius().
  AffineImage(BodyPtr inner, Mat matrix, Vec translation, double inradius_bound);

  int dim() const override { return inner_->dim(); }
  bool contains(const Vec& y) const override;
  SupportResult support(const Vec& u) const override;
  double ray_exit(const Vec& p, const Vec& v) const override;
  Vec normal_at(const Vec& y) const override;
  double bounding_radius() const override { return bounding_radius_; }
  double inradius() const override;
  double boundary_distance(const Vec& p) const override;
  std::optional<HalfspaceRep> halfspaces() const override;
  std::optional<std::vector<Vec>> vertices() const override;

  const Mat& matrix() const { return t_; }
  const Vec& translation() const { return shift_; }
  Vec to_inner(const Vec& y) const { return t_inv_ * (y - shift_); }
  Vec from_inner(const Vec& x) const { return t_ * x + shift_; }

 private:
  BodyPtr inner_;
  Mat t_;
  Mat t_inv_;
  Vec shift_;
  double sigma_min_;
  double bounding_radius_;
  double inradius_bound_ = 0.0;
};

BodyPtr translate(BodyPtr body, const Vec& shift);

// K° = {y : <x, y> <= 1 for all x in K}; requires the origin interior to K.
class PolarBody final : public ConvexBody {
 public:
  explicit PolarBody(BodyPtr inner);

  int dim() const override { return inner_->dim(); }
  bool contains(const Vec& y) const override;
  SupportResult support(const Vec& u) const override;
  double radial(const Vec& u) const override;
  Vec normal_at(const Vec& y) const override;
  double bounding_radius() const override { return 1.0 / inner_->inradius(); }
  double inradius() const override { return 1.0 / inner_->bounding_radius(); }
  std::optional<HalfspaceRep> halfspaces() const override;
  std::optional<std::vector<Vec>> vertices() const override;

  const ConvexBody& inner() const { return *inner_; }

 private:
  BodyPtr inner_;
};

BodyPtr polar(BodyPtr body);

}  // namespace polyfine
