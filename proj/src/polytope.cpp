#include "polyfine/bodies.hpp"
#include "polyfine/error.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace polyfine {

namespace {

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double scale_of(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1.0);
}

}  // namespace

Polytope::Polytope(int d, std::vector<Vec> normals, std::vector<double> offsets,
                   std::vector<Vec> vertices)
    : d_(d), normals_(std::move(normals)), offsets_(std::move(offsets)),
      vertices_(std::move(vertices)), bounding_radius_(0.0) {
  for (const auto& v : vertices_) bounding_radius_ = std::max(bounding_radius_, v.norm());
}

std::shared_ptr<Polytope> Polytope::from_halfspaces(std::vector<Vec> normals,
                                                    std::vector<double> offsets) {
  if (normals.empty() || normals.size() != offsets.size())
    throw Error(ErrorCode::kInvalidBody, "polytope_h needs matching normals and offsets");
  const int d = static_cast<int>(normals.front().size());
  if (d < 1 || d > kMaxDim) throw Error(ErrorCode::kInvalidBody, "unsupported dimension");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != d) throw Error(ErrorCode::kInvalidBody, "normal has wrong dimension");
    const double len = normals[i].norm();
    if (!(len > 0.0)) throw Error(ErrorCode::kInvalidBody, "zero facet normal");
    normals[i] /= len;
    offsets[i] /= len;
  }
  const int m = static_cast<int>(normals.size());
  double scale = 1.0;
  for (double b : offsets) scale = std::max(scale, std::abs(b));
  std::vector<Vec> verts;
  for_each_subset(m, d, [&](const std::vector<int>& s) {
    Mat a(d, d);
    Vec b(d);
    for (int r = 0; r < d; ++r) {
      a.row(r) = normals[s[r]].transpose();
      b(r) = offsets[s[r]];
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.rank() < d) return;
    const Vec x = lu.solve(b);
    for (int i = 0; i < m; ++i)
      if (normals[i].dot(x) > offsets[i] + 1e-9 * scale) return;
    for (const auto& v : verts)
      if ((v - x).norm() <= 1e-9 * scale) return;
    verts.push_back(x);
  });
  if (static_cast<int>(verts.size()) < d + 1)
    throw Error(ErrorCode::kInvalidBody, "polytope_h is unbounded or degenerate");
  return std::shared_ptr<Polytope>(
      new Polytope(d, std::move(normals), std::move(offsets), std::move(verts)));
}

std::shared_ptr<Polytope> Polytope::from_points(std::vector<Vec> points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidBody, "polytope_v needs points");
  const int d = static_cast<int>(points.front().size());
  if (d < 1 || d > kMaxDim) throw Error(ErrorCode::kInvalidBody, "unsupported dimension");
  for (const auto& p : points)
    if (p.size() != d) throw Error(ErrorCode::kInvalidBody, "point has wrong dimension");
  const int n = static_cast<int>(points.size());
  const double scale = scale_of(points);
  Vec centroid = zeros(d);
  for (const auto& p : points) centroid += p;
  centroid /= n;

  std::vector<Vec> normals;
  std::vector<double> offsets;
  for_each_subset(n, d, [&](const std::vector<int>& s) {
    Vec normal(d);
    if (d == 1) {
      normal(0) = 1.0;
    } else {
      Mat diff(d - 1, d);
      for (int r = 1; r < d; ++r) diff.row(r - 1) = (points[s[r]] - points[s[0]]).transpose();
      Eigen::FullPivLU<Mat> lu(diff);
      if (lu.rank() < d - 1) return;
      normal = lu.kernel().col(0);
    }
    normal /= normal.norm();
    double off = normal.dot(points[s[0]]);
    if (normal.dot(centroid) > off) {
      normal = -normal;
      off = -off;
    }
    for (const auto& p : points)
      if (normal.dot(p) > off + 1e-9 * scale) return;
    if (normal.dot(centroid) >= off - 1e-12 * scale) return;  // all points on the plane
    for (std::size_t f = 0; f < normals.size(); ++f)
      if ((normals[f] - normal).norm() < 1e-9 && std::abs(offsets[f] - off) < 1e-9 * scale) return;
    normals.push_back(normal);
    offsets.push_back(off);
  });
  if (static_cast<int>(normals.size()) < d + 1)
    throw Error(ErrorCode::kInvalidBody, "polytope_v points do not span a full-dimensional body");
  return std::shared_ptr<Polytope>(
      new Polytope(d, std::move(normals), std::move(offsets), std::move(points)));
}

bool Polytope::contains(const Vec& x) const {
  for (std::size_t i = 0; i < normals_.size(); ++i)
    if (normals_[i].dot(x) > offsets_[i]) return false;
  return true;
}

SupportResult Polytope::support(const Vec& u) const {
  if (!(u.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero direction");
  std::size_t best = 0;
  double h = vertices_[0].dot(u);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const double v = vertices_[i].dot(u);
    if (v > h) {
      h = v;
      best = i;
    }
  }
  return {h, vertices_[best]};
}

double Polytope::ray_exit(const Vec& p, const Vec& v) const {
  if (!(v.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero direction");
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    const double slack = offsets_[i] - normals_[i].dot(p);
    if (!(slack > 0.0)) throw Error(ErrorCode::kInvalidBody, "ray origin is not interior");
    const double rate = normals_[i].dot(v);
    if (rate > 0.0) t = std::min(t, slack / rate);
  }
  return t;
}

Vec Polytope::normal_at(const Vec& x) const {
  std::size_t best = 0;
  double viol = normals_[0].dot(x) - offsets_[0];
  for (std::size_t i = 1; i < normals_.size(); ++i) {
    const double v = normals_[i].dot(x) - offsets_[i];
    if (v > viol) {
      viol = v;
      best = i;
    }
  }
  return normals_[best];
}

double Polytope::boundary_distance(const Vec& p) const {
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < normals_.size(); ++i)
    dist = std::min(dist, offsets_[i] - normals_[i].dot(p));
  return dist;
}

std::optional<HalfspaceRep> Polytope::halfspaces() const {
  return HalfspaceRep{normals_, offsets_};
}

}  // namespace polyfine
