#pragma once

#include "polyfine/bodies.hpp"

#include <string>

namespace polyfine {

// SVG of a planar approximation: the boundary of K and of (1 - eps) K (720
// radial samples about `center`), the polygon of the vertices sorted by angle
// about `center`, and vertex markers. Throws unsupported unless d = 2.
std::string plot2d_svg(const ConvexBody& body, const Vec& center, const PointList& vertices, double eps);
void plot2d(const ConvexBody& body, const Vec& center, const PointList& vertices, double eps,
            const std::string& path);

// Vertices ordered by angle about `center`.
PointList angular_order(const PointList& vertices, const Vec& center);

}  // namespace polyfine
