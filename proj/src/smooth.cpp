#include "polyfine/smooth.hpp"

#include "polyfine/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace polyfine {

namespace {

constexpr std::size_t kMaxActiveSets = 5000;
constexpr double kFeasibilityTol = 1e-9;

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

template <class Fn>
void for_each_subset_up_to(int m, int kmax, Fn&& fn) {
  std::vector<int> idx;
  for (int k = 1; k <= std::min(kmax, m); ++k) {
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      fn(idx);
      int i = k - 1;
      while (i >= 0 && idx[i] == m - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace

double phi(double delta, double r) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * delta * r * r)); }

Vec phi_map(double delta, const Vec& x) { return phi(delta, x.norm()) * x; }

Vec phi_inverse(double delta, const Vec& y) {
  const double s = 1.0 - delta * y.squaredNorm();
  if (!(s > 0.0)) throw Error(ErrorCode::kOutOfRange, "|y| must be below delta^{-1/2}");
  return y / s;
}

HalfSpaceImage halfspace_image(double delta, const Vec& nu, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "half-space offset must be positive");
  if (std::abs(nu.norm() - 1.0) > 1e-9) throw Error(ErrorCode::kInvalidArgument, "normal must be a unit vector");
  const double a = 1.0 / (2.0 * delta * h);
  return {nu, h, -a * nu, std::sqrt(a * a + 1.0 / delta)};
}

SmoothParams SmoothParams::defaults(int d) { return with_delta(d, 1.0 / (4.0 * std::pow(d, 5))); }

SmoothParams SmoothParams::with_delta(int d, double delta) { return {d, delta, 1.0 / delta}; }

void SmoothParams::validate() const {
  if (!(delta > 0.0 && delta < 0.5)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1/2)");
  if (!(R > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rolling radius must be positive");
}

bool SmoothParams::admits_transfer() const { return delta < 1.0 / (4.0 * std::pow(dim, 4)); }

double transfer_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1/2)");
  return eps / 2.0;
}

// ---------------------------------------------------------------------------

SmoothedBody::SmoothedBody(BodyPtr inner, double delta) : inner_(std::move(inner)), delta_(delta) {
  if (!(delta_ > 0.0 && delta_ < 0.5)) throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1/2)");
  if (auto hs = inner_->halfspaces()) {
    const int m = static_cast<int>(hs->normals.size());
    const int d = dim();
    std::size_t sets = 0;
    for (int k = 1; k <= std::min(d, m); ++k) sets += binomial(m, k);
    if (sets <= kMaxActiveSets) {
      for (int i = 0; i < m; ++i) {
        const double n = hs->normals[i].norm();
        balls_.push_back(halfspace_image(delta_, hs->normals[i] / n, hs->offsets[i] / n));
      }
      for_each_subset_up_to(m, d, [&](const std::vector<int>& s) {
        if (auto a = intersect(s)) active_sets_.push_back(std::move(*a));
      });
    }
  }
}

std::optional<SmoothedBody::ActiveSet> SmoothedBody::intersect(const std::vector<int>& s) const {
  const int d = dim();
  const int k = static_cast<int>(s.size());
  const HalfSpaceImage& b0 = balls_[s[0]];
  ActiveSet out;
  out.center = b0.center;
  out.projector = Mat::Identity(d, d);
  if (k > 1) {
    Mat a(k - 1, d);
    Vec rhs(k - 1);
    for (int j = 1; j < k; ++j) {
      const HalfSpaceImage& bj = balls_[s[j]];
      a.row(j - 1) = 2.0 * (bj.center - b0.center).transpose();
      rhs(j - 1) = bj.center.squaredNorm() - b0.center.squaredNorm() - bj.radius * bj.radius +
                   b0.radius * b0.radius;
    }
    const Mat gram = a * a.transpose();
    Eigen::JacobiSVD<Mat> svd(gram);
    const auto& sv = svd.singularValues();
    if (!(sv(k - 2) > 1e-12 * sv(0))) return std::nullopt;
    Eigen::LDLT<Mat> ldlt(gram);
    const Vec lam = ldlt.solve(rhs - a * b0.center);
    if (!lam.allFinite()) return std::nullopt;
    out.center = b0.center + a.transpose() * lam;
    out.projector -= a.transpose() * ldlt.solve(a);
  }
  const double r2 = b0.radius * b0.radius - (out.center - b0.center).squaredNorm();
  if (r2 < 0.0) return std::nullopt;
  out.radius = std::sqrt(r2);
  return out;
}

bool SmoothedBody::contains(const Vec& y) const {
  if (!(delta_ * y.squaredNorm() < 1.0)) return false;
  return inner_->contains(phi_inverse(delta_, y));
}

double SmoothedBody::radial(const Vec& u) const {
  const double r = inner_->radial(u);
  return r * phi(delta_, r);
}

BoundaryPoint SmoothedBody::lift(const BoundaryPoint& bp) const {
  const Vec p = phi_map(delta_, bp.x);
  const Vec n = p + bp.nu / (2.0 * delta_ * bp.x.dot(bp.nu));
  return {p, n / n.norm()};
}

Vec SmoothedBody::normal_at(const Vec& y) const {
  const Vec x = phi_inverse(delta_, y);
  return lift({x, inner_->normal_at(x)}).nu;
}

BoundaryPoint SmoothedBody::boundary(const Vec& u) const {
  if (!balls_.empty()) {
    SupportResult s = support(u);
    return {std::move(s.point), u / u.norm()};
  }
  return lift(inner_->boundary(u));
}

double SmoothedBody::bounding_radius() const {
  const double r = inner_->bounding_radius();
  return r * phi(delta_, r);
}

double SmoothedBody::inradius() const {
  const double r = inner_->inradius();
  return r * phi(delta_, r);
}

SupportResult SmoothedBody::support(const Vec& w) const {
  if (!(w.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero direction");
  return balls_.empty() ? support_search(w) : support_balls(w);
}

// K' is the intersection of the ball images of the facet half-spaces. The
// maximizer of <y, w> lies on the intersection of some k <= d of the spheres,
// at one of the two extreme points of that (d - k)-sphere in direction w.
SupportResult SmoothedBody::support_balls(const Vec& w) const {
  const int m = static_cast<int>(balls_.size());
  double best = -std::numeric_limits<double>::infinity();
  Vec best_y;
  Vec y;
  for (const ActiveSet& a : active_sets_) {
    const Vec pw = a.projector * w;
    const double pn = pw.norm();
    if (!(pn > 1e-14 * w.norm())) continue;
    const double cw = a.center.dot(w);
    const double reach = a.radius * pn;
    for (const double sgn : {1.0, -1.0}) {
      const double val = cw + sgn * reach;
      if (val <= best) continue;
      y = a.center + (sgn * a.radius / pn) * pw;
      bool ok = true;
      for (int i = 0; i < m && ok; ++i)
        ok = (y - balls_[i].center).squaredNorm() <= (balls_[i].radius + kFeasibilityTol) * (balls_[i].radius + kFeasibilityTol);
      if (ok) {
        best = val;
        best_y = y;
      }
    }
  }
  if (best_y.size() == 0) return support_search(w);
  const Vec u = best_y / best_y.norm();
  const Vec p = radial(u) * u;
  return {p.dot(w), p};
}

double SmoothedBody::radial_objective(const Vec& v, const Vec& w) const {
  return radial(v) * v.dot(w);
}

// Compass search over radial directions, started from w and from the image
// of the inner support point.
SupportResult SmoothedBody::support_search(const Vec& w) const {
  const int d = dim();
  const Vec wn = w / w.norm();
  Vec v = wn;
  double val = radial_objective(v, wn);
  {
    const Vec alt = inner_->support(w).point;
    if (alt.norm() > 0.0) {
      const Vec va = alt / alt.norm();
      const double fa = radial_objective(va, wn);
      if (fa > val) {
        v = va;
        val = fa;
      }
    }
  }
  // Move the radial direction until the normal matches w. Exact in one step
  // for balls about the origin; falls through to the compass search when it
  // stalls.
  {
    Vec cur = v;
    double fcur = val;
    double alpha = 1.0;
    for (int it = 0; it < 60; ++it) {
      const Vec y = radial(cur) * cur;
      const Vec n = normal_at(y);
      const Vec gap = wn - n;
      if (gap.norm() < 1e-9) return {y.dot(w), y};
      Vec next = cur + alpha * gap;
      next /= next.norm();
      const double fnext = radial_objective(next, wn);
      if (fnext >= fcur) {
        cur = next;
        fcur = fnext;
        alpha = std::min(1.0, 2.0 * alpha);
      } else {
        alpha *= 0.5;
        if (alpha < 1e-6) break;
      }
    }
    if (fcur > val) {
      v = cur;
      val = fcur;
    }
  }
  double step = 1e-3;
  Vec trial(d);
  while (step > 1e-8) {
    bool moved = false;
    for (int i = 0; i < d; ++i) {
      for (const double sgn : {1.0, -1.0}) {
        trial = v;
        trial(i) += sgn * step;
        trial /= trial.norm();
        const double f = radial_objective(trial, wn);
        if (f > val) {
          v = trial;
          val = f;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  const Vec y = radial(v) * v;
  return {y.dot(w), y};
}

BodyPtr smooth_body(BodyPtr standardized, const SmoothParams& params) {
  params.validate();
  return std::make_shared<SmoothedBody>(std::move(standardized), params.delta);
}

}  // namespace polyfine
