#include "polyfine/bodies.hpp"

#include "polyfine/error.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace polyfine {

namespace {

void require_direction(const Vec& u) {
  if (!(u.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero direction");
}

// Largest t with |q + t w| <= 1, given |q| < 1.
double unit_ball_exit(const Vec& q, const Vec& w) {
  const double a = w.squaredNorm();
  const double b = 2.0 * q.dot(w);
  const double c = q.squaredNorm() - 1.0;
  if (!(c < 0.0)) throw Error(ErrorCode::kInvalidBody, "ray origin is not interior");
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  return b > 0.0 ? -2.0 * c / (b + disc) : (-b + disc) / (2.0 * a);
}

}  // namespace

double ConvexBody::ray_exit(const Vec& p, const Vec& v) const {
  require_direction(v);
  if (!contains(p)) throw Error(ErrorCode::kInvalidBody, "ray origin is not interior");
  double lo = 0.0;
  double hi = 1.01 * (bounding_radius() + p.norm()) / v.norm() + 1e-12;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (contains(p + mid * v)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 0.0)) throw Error(ErrorCode::kInvalidBody, "ray origin is not interior");
  return lo;
}

BoundaryPoint ConvexBody::boundary(const Vec& u) const {
  SupportResult s = support(u);
  return {std::move(s.point), u / u.norm()};
}

double ConvexBody::boundary_distance(const Vec& p) const {
  return std::max(0.0, 1.0 - gauge(*this, p)) * inradius();
}

double gauge(const ConvexBody& body, const Vec& x) {
  const double n = x.norm();
  if (n == 0.0) return 0.0;
  return n / body.radial(x / n);
}

// ---------------------------------------------------------------------------

Ball::Ball(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0)) throw Error(ErrorCode::kInvalidBody, "ball radius must be positive");
}

bool Ball::contains(const Vec& x) const {
  return (x - center_).squaredNorm() <= radius_ * radius_;
}

SupportResult Ball::support(const Vec& u) const {
  require_direction(u);
  const double n = u.norm();
  return {center_.dot(u) + radius_ * n, center_ + (radius_ / n) * u};
}

double Ball::ray_exit(const Vec& p, const Vec& v) const {
  require_direction(v);
  return radius_ * unit_ball_exit((p - center_) / radius_, v / radius_);
}

Vec Ball::normal_at(const Vec& x) const {
  const Vec r = x - center_;
  return r / r.norm();
}

double Ball::boundary_distance(const Vec& p) const { return radius_ - (p - center_).norm(); }

// ---------------------------------------------------------------------------

Ellipsoid::Ellipsoid(Mat matrix, Vec center) : a_(std::move(matrix)), center_(std::move(center)) {
  if (a_.rows() != a_.cols() || a_.rows() != center_.size())
    throw Error(ErrorCode::kInvalidBody, "ellipsoid matrix must be d x d");
  Eigen::JacobiSVD<Mat> svd(a_);
  sigma_max_ = svd.singularValues()(0);
  sigma_min_ = svd.singularValues()(a_.rows() - 1);
  if (!(sigma_min_ > 1e-12 * sigma_max_))
    throw Error(ErrorCode::kInvalidBody, "ellipsoid matrix is singular");
  a_inv_ = a_.inverse();
}

bool Ellipsoid::contains(const Vec& x) const {
  return (a_inv_ * (x - center_)).squaredNorm() <= 1.0;
}

SupportResult Ellipsoid::support(const Vec& u) const {
  require_direction(u);
  const Vec w = a_.transpose() * u;
  const double n = w.norm();
  return {center_.dot(u) + n, center_ + a_ * (w / n)};
}

double Ellipsoid::ray_exit(const Vec& p, const Vec& v) const {
  require_direction(v);
  return unit_ball_exit(a_inv_ * (p - center_), a_inv_ * v);
}

Vec Ellipsoid::normal_at(const Vec& x) const {
  const Vec g = a_inv_.transpose() * (a_inv_ * (x - center_));
  return g / g.norm();
}

double Ellipsoid::boundary_distance(const Vec& p) const {
  return sigma_min_ * (1.0 - (a_inv_ * (p - center_)).norm());
}

// ---------------------------------------------------------------------------

LpBall::LpBall(int d, double p, double radius) : d_(d), p_(p), radius_(radius) {
  if (d < 1 || d > kMaxDim) throw Error(ErrorCode::kInvalidBody, "unsupported dimension");
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::kInvalidBody, "lp_ball needs finite p >= 1");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidBody, "lp_ball radius must be positive");
}

double LpBall::pnorm(const Vec& x) const {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < d_; ++i) s += std::pow(std::abs(x(i)) / m, p_);
  return m * std::pow(s, 1.0 / p_);
}

bool LpBall::contains(const Vec& x) const { return pnorm(x) <= radius_; }

SupportResult LpBall::support(const Vec& u) const {
  require_direction(u);
  Vec point = zeros(d_);
  if (p_ == 1.0) {
    int k = 0;
    for (int i = 1; i < d_; ++i)
      if (std::abs(u(i)) > std::abs(u(k))) k = i;
    point(k) = u(k) >= 0.0 ? radius_ : -radius_;
    return {radius_ * std::abs(u(k)), point};
  }
  const double q = p_ / (p_ - 1.0);
  const double m = u.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (int i = 0; i < d_; ++i) s += std::pow(std::abs(u(i)) / m, q);
  const double qnorm = std::pow(s, 1.0 / q);  // of u / m
  for (int i = 0; i < d_; ++i) {
    const double a = std::pow(std::abs(u(i)) / m / qnorm, q - 1.0);
    point(i) = radius_ * (u(i) >= 0.0 ? a : -a);
  }
  return {radius_ * m * qnorm, point};
}

double LpBall::radial(const Vec& u) const { return radius_ / pnorm(u); }

Vec LpBall::normal_at(const Vec& x) const {
  Vec g(d_);
  const double m = x.cwiseAbs().maxCoeff();
  for (int i = 0; i < d_; ++i) {
    const double s = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
    g(i) = p_ == 1.0 ? s : s * std::pow(std::abs(x(i)) / m, p_ - 1.0);
  }
  return g / g.norm();
}

double LpBall::bounding_radius() const {
  return radius_ * std::max(1.0, std::pow(d_, 0.5 - 1.0 / p_));
}

double LpBall::inradius() const { return radius_ * std::min(1.0, std::pow(d_, 0.5 - 1.0 / p_)); }

std::optional<HalfspaceRep> LpBall::halfspaces() const {
  if (p_ != 1.0) return std::nullopt;
  HalfspaceRep rep;
  const double s = 1.0 / std::sqrt(static_cast<double>(d_));
  for (unsigned mask = 0; mask < (1u << d_); ++mask) {
    Vec n(d_);
    for (int i = 0; i < d_; ++i) n(i) = (mask >> i) & 1u ? -s : s;
    rep.normals.push_back(n);
    rep.offsets.push_back(radius_ * s);
  }
  return rep;
}

std::optional<std::vector<Vec>> LpBall::vertices() const {
  if (p_ != 1.0) return std::nullopt;
  std::vector<Vec> v;
  for (int i = 0; i < d_; ++i) {
    v.push_back(radius_ * unit(d_, i));
    v.push_back(-radius_ * unit(d_, i));
  }
  return v;
}

// ---------------------------------------------------------------------------

Cube::Cube(Vec center, double half_width) : center_(std::move(center)), hw_(half_width) {
  if (!(hw_ > 0.0)) throw Error(ErrorCode::kInvalidBody, "cube half width must be positive");
}

bool Cube::contains(const Vec& x) const { return (x - center_).cwiseAbs().maxCoeff() <= hw_; }

SupportResult Cube::support(const Vec& u) const {
  require_direction(u);
  Vec point = center_;
  for (int i = 0; i < u.size(); ++i) point(i) += u(i) >= 0.0 ? hw_ : -hw_;
  return {point.dot(u), point};
}

double Cube::ray_exit(const Vec& p, const Vec& v) const {
  require_direction(v);
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.size(); ++i) {
    const double rel = p(i) - center_(i);
    if (!(std::abs(rel) < hw_)) throw Error(ErrorCode::kInvalidBody, "ray origin is not interior");
    if (v(i) > 0.0) t = std::min(t, (hw_ - rel) / v(i));
    if (v(i) < 0.0) t = std::min(t, (-hw_ - rel) / v(i));
  }
  return t;
}

Vec Cube::normal_at(const Vec& x) const {
  const Vec r = x - center_;
  int k = 0;
  for (int i = 1; i < r.size(); ++i)
    if (std::abs(r(i)) > std::abs(r(k))) k = i;
  Vec n = zeros(dim());
  n(k) = r(k) >= 0.0 ? 1.0 : -1.0;
  return n;
}

double Cube::bounding_radius() const {
  return center_.norm() + hw_ * std::sqrt(static_cast<double>(dim()));
}

double Cube::boundary_distance(const Vec& p) const {
  return hw_ - (p - center_).cwiseAbs().maxCoeff();
}

std::optional<HalfspaceRep> Cube::halfspaces() const {
  HalfspaceRep rep;
  for (int i = 0; i < dim(); ++i) {
    rep.normals.push_back(unit(dim(), i));
    rep.offsets.push_back(hw_ + center_(i));
    rep.normals.push_back(-unit(dim(), i));
    rep.offsets.push_back(hw_ - center_(i));
  }
  return rep;
}

std::optional<std::vector<Vec>> Cube::vertices() const {
  std::vector<Vec> v;
  const int d = dim();
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Vec c = center_;
    for (int i = 0; i < d; ++i) c(i) += (mask >> i) & 1u ? -hw_ : hw_;
    v.push_back(c);
  }
  return v;
}

// ---------------------------------------------------------------------------

AffineImage::AffineImage(BodyPtr inner, Mat matrix, Vec translation)
    : inner_(std::move(inner)), t_(std::move(matrix)), shift_(std::move(translation)) {
  const int d = inner_->dim();
  if (t_.rows() != d || t_.cols() != d || shift_.size() != d)
    throw Error(ErrorCode::kInvalidBody, "linear image dimensions do not match");
  Eigen::JacobiSVD<Mat> svd(t_);
  const auto& s = svd.singularValues();
  if (!(s(d - 1) > 1e-12 * s(0))) throw Error(ErrorCode::kInvalidBody, "linear map is singular");
  sigma_min_ = s(d - 1);
  t_inv_ = t_.inverse();
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) {
    const double hp = support(unit(d, i)).h;
    const double hm = support(-unit(d, i)).h;
    const double m = std::max(std::abs(hp), std::abs(hm));
    r2 += m * m;
  }
  bounding_radius_ = std::sqrt(r2);
}

AffineImage::AffineImage(BodyPtr inner, Mat matrix, Vec translation, double inradius_bound)
    : AffineImage(std::move(inner), std::move(matrix), std::move(translation)) {
  inradius_bound_ = inradius_bound;
}

double AffineImage::inradius() const {
  return std::max(inradius_bound_, boundary_distance(zeros(dim())));
}

bool AffineImage::contains(const Vec& y) const { return inner_->contains(to_inner(y)); }

SupportResult AffineImage::support(const Vec& u) const {
  require_direction(u);
  SupportResult s = inner_->support(t_.transpose() * u);
  return {s.h + shift_.dot(u), from_inner(s.point)};
}

double AffineImage::ray_exit(const Vec& p, const Vec& v) const {
  require_direction(v);
  return inner_->ray_exit(to_inner(p), t_inv_ * v);
}

Vec AffineImage::normal_at(const Vec& y) const {
  const Vec n = t_inv_.transpose() * inner_->normal_at(to_inner(y));
  return n / n.norm();
}

double AffineImage::boundary_distance(const Vec& p) const {
  return sigma_min_ * inner_->boundary_distance(to_inner(p));
}

std::optional<HalfspaceRep> AffineImage::halfspaces() const {
  auto inner = inner_->halfspaces();
  if (!inner) return std::nullopt;
  HalfspaceRep rep;
  for (std::size_t i = 0; i < inner->normals.size(); ++i) {
    const Vec n = t_inv_.transpose() * inner->normals[i];
    const double len = n.norm();
    rep.normals.push_back(n / len);
    rep.offsets.push_back((inner->offsets[i] + n.dot(shift_)) / len);
  }
  return rep;
}

std::optional<std::vector<Vec>> AffineImage::vertices() const {
  auto inner = inner_->vertices();
  if (!inner) return std::nullopt;
  for (auto& v : *inner) v = from_inner(v);
  return inner;
}

BodyPtr translate(BodyPtr body, const Vec& shift) {
  const int d = body->dim();
  return std::make_shared<AffineImage>(std::move(body), Mat::Identity(d, d), shift);
}

// ---------------------------------------------------------------------------

PolarBody::PolarBody(BodyPtr inner) : inner_(std::move(inner)) {
  if (!(inner_->inradius() > 0.0) || !inner_->contains(zeros(inner_->dim())))
    throw Error(ErrorCode::kInvalidBody, "polar body needs the origin in the interior");
}

bool PolarBody::contains(const Vec& y) const {
  if (y.norm() == 0.0) return true;
  return inner_->support(y).h <= 1.0;
}

SupportResult PolarBody::support(const Vec& u) const {
  require_direction(u);
  const double n = u.norm();
  const Vec dir = u / n;
  const double r = inner_->radial(dir);
  const Vec x = r * dir;
  const Vec nu = inner_->normal_at(x);
  return {n / r, nu / x.dot(nu)};
}

double PolarBody::radial(const Vec& u) const { return 1.0 / inner_->support(u).h; }

Vec PolarBody::normal_at(const Vec& y) const {
  const Vec x = inner_->support(y).point;
  return x / x.norm();
}

std::optional<HalfspaceRep> PolarBody::halfspaces() const {
  auto verts = inner_->vertices();
  if (!verts) return std::nullopt;
  HalfspaceRep rep;
  for (const auto& v : *verts) {
    const double len = v.norm();
    rep.normals.push_back(v / len);
    rep.offsets.push_back(1.0 / len);
  }
  return rep;
}

std::optional<std::vector<Vec>> PolarBody::vertices() const {
  auto rep = inner_->halfspaces();
  if (!rep) return std::nullopt;
  std::vector<Vec> v;
  for (std::size_t i = 0; i < rep->normals.size(); ++i) v.push_back(rep->normals[i] / rep->offsets[i]);
  return v;
}

BodyPtr polar(BodyPtr body) { return std::make_shared<PolarBody>(std::move(body)); }

}  // namespace polyfine
