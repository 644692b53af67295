#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's geometry; only plain vectors and closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using P2 = Eigen::Vector2d;

inline double cross(const P2& o, const P2& a, const P2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
inline std::vector<P2> convex_hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const P2& p = pts[i];
    while (k >= t && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  return h;
}

// Point in a counter-clockwise convex polygon (boundary counts as inside).
inline bool in_convex_polygon(const std::vector<P2>& poly, const P2& p, double tol = 1e-12) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (cross(poly[i], poly[(i + 1) % n], p) < -tol) return false;
  return true;
}

// Root of a monotone f on [lo, hi] with f(lo), f(hi) of opposite sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const bool rising = f(hi) > f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == rising) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Worst relative support gap of a regular k-gon inscribed in the unit circle.
inline double regular_polygon_eps(int k) { return 1.0 - std::cos(std::numbers::pi / k); }

// Local maximum of f over unit vectors near `start`: random-direction pattern
// search with a shrinking step.
inline double refine_on_sphere(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd u,
                               double step, double min_step = 1e-10) {
  u.normalize();
  double best = f(u);
  const int d = static_cast<int>(u.size());
  unsigned state = 12345;
  auto next = [&state] {
    state = state * 1103515245u + 12345u;
    return ((state >> 8) & 0xffff) / 65536.0 - 0.5;
  };
  while (step > min_step) {
    bool moved = false;
    for (int k = 0; k < 8 * d; ++k) {
      Eigen::VectorXd dir(d);
      for (int i = 0; i < d; ++i) dir(i) = next();
      Eigen::VectorXd cand = u + step * dir.normalized();
      cand.normalize();
      const double v = f(cand);
      if (v > best) {
        best = v;
        u = cand;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

// Smallest-area axis-aligned ellipse a x² + b y² <= 1 containing the points,
// by a fine scan over a with b chosen as large as feasible.
inline Eigen::Vector2d axis_mvee_scan(const std::vector<P2>& pts, int steps = 200000) {
  double amax = std::numeric_limits<double>::infinity();
  for (const auto& p : pts)
    if (std::abs(p.x()) > 0) amax = std::min(amax, 1.0 / (p.x() * p.x()));
  Eigen::Vector2d best(0, 0);
  double best_ab = -1;
  for (int i = 1; i < steps; ++i) {
    const double a = amax * i / steps;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& p : pts)
      if (p.y() != 0) b = std::min(b, (1.0 - a * p.x() * p.x()) / (p.y() * p.y()));
    if (b > 0 && a * b > best_ab) {
      best_ab = a * b;
      best = {a, b};
    }
  }
  return best;
}

// Mass fraction of the cap {<y, e> >= 1 - eps} of the uniform sphere measure.
inline double sphere_cap_fraction(int d, double eps) {
  if (d == 2) return std::acos(1.0 - eps) / std::numbers::pi;
  if (d == 3) return eps / 2.0;  // Archimedes: area 2 pi h over 4 pi
  return std::nan("");
}

// Minimal well-formedness check of an XML document: balanced start/end tags.
inline bool xml_well_formed(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    const std::size_t j = s.find('>', i);
    if (j == std::string::npos) return false;
    std::string tag = s.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    if (tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
  }
  return stack.empty();
}

// Chi-square statistic of observed counts against equal expected counts.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  const double e = total / static_cast<double>(counts.size());
  double x = 0;
  for (auto c : counts) x += (c - e) * (c - e) / e;
  return x;
}

// Upper 1% critical values of chi-square for the given degrees of freedom,
// via the Wilson-Hilferty approximation.
inline double chi_square_crit_01(int dof) {
  const double z = 2.326347874040841;
  const double k = dof;
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

// Kolmogorov-Smirnov statistic of samples in [0, 1) against the uniform law.
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, (i + 1) / n - x[i]);
    d = std::max(d, x[i] - i / n);
  }
  return d;
}

// 1% critical value of the one-sample KS statistic.
inline double ks_crit_01(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace oracle
