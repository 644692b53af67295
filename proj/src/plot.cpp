#include "polyfine/plot.hpp"

#include "polyfine/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace polyfine {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

PointList angular_order(const PointList& vertices, const Vec& center) {
  PointList out = vertices;
  std::stable_sort(out.begin(), out.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a(1) - center(1), a(0) - center(0)) < std::atan2(b(1) - center(1), b(0) - center(0));
  });
  return out;
}

std::string plot2d_svg(const ConvexBody& body, const Vec& center, const PointList& vertices, double eps) {
  if (body.dim() != 2) throw Error(ErrorCode::kUnsupported, "plots are planar only");
  const int samples = 720;
  PointList outer, inner;
  for (int k = 0; k < samples; ++k) {
    const double a = 2.0 * std::numbers::pi * k / samples;
    Vec u(2);
    u << std::cos(a), std::sin(a);
    const Vec p = body.ray_exit(center, u) * u;
    outer.push_back(center + p);
    inner.push_back(center + (1.0 - eps) * p);
  }
  double lo_x = outer[0](0), hi_x = lo_x, lo_y = outer[0](1), hi_y = lo_y;
  for (const auto& p : outer) {
    lo_x = std::min(lo_x, p(0));
    hi_x = std::max(hi_x, p(0));
    lo_y = std::min(lo_y, p(1));
    hi_y = std::max(hi_y, p(1));
  }
  const double size = 600.0;
  const double pad = 20.0;
  const double scale = (size - 2 * pad) / std::max(hi_x - lo_x, hi_y - lo_y);
  auto sx = [&](double x) { return fmt(pad + (x - lo_x) * scale); };
  auto sy = [&](double y) { return fmt(size - pad - (y - lo_y) * scale); };
  auto poly = [&](const PointList& pts) {
    std::string s;
    for (const auto& p : pts) s += sx(p(0)) + "," + sy(p(1)) + " ";
    if (!s.empty()) s.pop_back();
    return s;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<polygon id=\"body\" points=\"" << poly(outer) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "<polygon id=\"inner\" points=\"" << poly(inner)
      << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n"
      << "<polygon id=\"hull\" points=\"" << poly(angular_order(vertices, center))
      << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n"
      << "<g id=\"vertices\" fill=\"crimson\">\n";
  for (const auto& v : vertices) svg << "<circle cx=\"" << sx(v(0)) << "\" cy=\"" << sy(v(1)) << "\" r=\"2\"/>\n";
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void plot2d(const ConvexBody& body, const Vec& center, const PointList& vertices, double eps,
            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << plot2d_svg(body, center, vertices, eps);
}

}  // namespace polyfine
