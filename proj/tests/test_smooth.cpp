#include "polyfine/bodies.hpp"
#include "polyfine/body_spec.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/error.hpp"
#include "polyfine/position.hpp"
#include "polyfine/smooth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace polyfine;

namespace {

Vec e1(int d) { return unit(d, 0); }

// Standardized, smoothed copies of a few bodies with the default delta.
std::vector<std::pair<std::string, std::shared_ptr<const SmoothedBody>>> smoothed_zoo() {
  std::vector<std::pair<std::string, std::shared_ptr<const SmoothedBody>>> out;
  const std::vector<std::pair<std::string, BodySpec>> specs = {
      {"disk", ball_spec(2)}, {"square", cube_spec(2)}, {"ellipse", ellipse_spec({2.0, 0.5})},
      {"ball3", ball_spec(3)}, {"cube3", cube_spec(3)}};
  for (const auto& [name, spec] : specs) {
    Rng rng(21);
    const BodyPtr body = make_body(spec);
    const auto s = standardize(body, rng);
    out.push_back({name, std::make_shared<SmoothedBody>(s.body, SmoothParams::defaults(spec.dim()).delta)});
  }
  return out;
}

}  // namespace

TEST_CASE("phi examples") {
  for (double delta : {0.01, 0.25, 0.49}) CHECK(phi(delta, 0.0) == 1.0);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double p = phi(0.25, 2.0);
  CHECK(p == doctest::Approx(golden).epsilon(1e-15));
  CHECK(std::abs(p + 0.25 * 4.0 * p * p - 1.0) < 1e-14);
  const double far = phi(0.25, 1e6) * 1e6;
  CHECK(far > 2.0 - 1e-5);
  CHECK(far < 2.0);
}

TEST_CASE("phi_map examples") {
  CHECK(phi_map(0.25, zeros(2)).norm() == 0.0);
  CHECK((phi_map(0.25, 2.0 * e1(2)) - 1.2360679774997898 * e1(2)).norm() < 1e-12);
  CHECK((phi_map(0.25, e1(2)) - 2.0 * (std::sqrt(2.0) - 1.0) * e1(2)).norm() < 1e-12);
}

TEST_CASE("phi_inverse examples") {
  CHECK(phi_inverse(0.25, zeros(3)).norm() == 0.0);
  CHECK((phi_inverse(0.25, phi_map(0.25, 2.0 * e1(2))) - 2.0 * e1(2)).norm() < 1e-12);
  const double got = phi_inverse(0.25, 1.999 * e1(2)).norm();
  const double ref = oracle::bisect([](double r) { return r * phi(0.25, r) - 1.999; }, 0.0, 1e7);
  CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  CHECK(got == doctest::Approx(1999.0).epsilon(1e-3));
  try {
    (void)phi_inverse(0.25, 2.0 * e1(2));
    FAIL("expected out-of-range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
}

TEST_CASE("halfspace image examples") {
  const auto hs = halfspace_image(0.25, e1(2), 1.0);
  CHECK((hs.center + 2.0 * e1(2)).norm() < 1e-15);
  CHECK(hs.radius == doctest::Approx(std::sqrt(8.0)));
  CHECK((phi_map(0.25, e1(2)) - hs.center).norm() == doctest::Approx(std::sqrt(8.0)));
  const auto far = halfspace_image(0.25, e1(2), 1e9);
  CHECK(far.center.norm() < 1e-8);
  CHECK(far.radius == doctest::Approx(2.0));
  CHECK_THROWS_AS(halfspace_image(0.25, e1(2), 0.0), Error);
  CHECK_THROWS_AS(halfspace_image(0.25, 2.0 * e1(2), 1.0), Error);
}

// The radius stays below 1/delta once h >= 1/(2 sqrt(1 - delta)), in
// particular for h >= 1 as after standardization.
TEST_CASE("halfspace image radius and side") {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const double delta = rng.uniform(0.001, 0.49);
    const double h = rng.uniform(1.0, 10.0);
    const auto hs = halfspace_image(delta, rng.unit_vector(3), h);
    CHECK(hs.radius <= 1.0 / delta + 1e-12);
    CHECK(hs.center.dot(hs.nu) < 0.0);
  }
}

TEST_CASE("halfspace image identity on hyperplane points") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const double delta = rng.uniform(0.001, 0.49);
    const double h = rng.uniform(0.1, 5.0);
    const Vec nu = rng.unit_vector(d);
    const auto hs = halfspace_image(delta, nu, h);
    for (int i = 0; i < 1000; ++i) {
      Vec t = rng.gaussian_vector(d) * rng.uniform(0, 20);
      t -= t.dot(nu) * nu;
      const Vec x = h * nu + t;
      CHECK(std::abs((phi_map(delta, x) - hs.center).norm() - hs.radius) < 1e-9 * hs.radius);
    }
  }
}

TEST_CASE("phi is decreasing and r phi(r) increasing") {
  Rng rng(24);
  for (int i = 0; i < 1000; ++i) {
    const double delta = rng.uniform(0.001, 0.49);
    double a = rng.uniform(0, 50), b = rng.uniform(0, 50);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-9) continue;
    CHECK(phi(delta, a) > phi(delta, b));
    CHECK(a * phi(delta, a) < b * phi(delta, b));
  }
}

TEST_CASE("phi_map contracts along rays") {
  Rng rng(25);
  for (int i = 0; i < 1000; ++i) {
    const double delta = rng.uniform(0.001, 0.49);
    const Vec x = rng.gaussian_vector(3) * rng.uniform(0, 10);
    const Vec y = phi_map(delta, x);
    CHECK(y.norm() <= x.norm());
    CHECK(y.norm() < 1.0 / std::sqrt(delta));
    CHECK((y - y.dot(x) / x.squaredNorm() * x).norm() < 1e-12 * x.norm());
  }
}

TEST_CASE("phi round trip") {
  Rng rng(26);
  for (int i = 0; i < 10000; ++i) {
    const int d = 2 + i % 4;
    const double delta = 1.0 / (4.0 * std::pow(d, 5));
    const Vec x = rng.unit_vector(d) * rng.uniform(0, d * d);
    const Vec back = phi_inverse(delta, phi_map(delta, x));
    CHECK((back - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("smoothing parameters") {
  const auto p = SmoothParams::defaults(3);
  CHECK(p.delta == doctest::Approx(1.0 / 972.0));
  CHECK(p.R == doctest::Approx(972.0));
  CHECK(p.admits_transfer());
  CHECK_FALSE(SmoothParams::with_delta(2, 0.25).admits_transfer());
  CHECK(transfer_epsilon(0.1) == doctest::Approx(0.05));
  CHECK_THROWS_AS(transfer_epsilon(0.5), Error);
  CHECK_THROWS_AS(SmoothParams::with_delta(2, 0.6).validate(), Error);
}

TEST_CASE("smoothed ball") {
  SmoothedBody kb(Ball::unit(2), 0.25);
  Rng rng(27);
  for (int i = 0; i < 100; ++i) CHECK(kb.radial(rng.unit_vector(2)) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)));
  const Vec y = phi_map(0.25, e1(2));
  CHECK((kb.normal_at(y) - e1(2)).norm() < 1e-12);
  CHECK((kb.lift({e1(2), e1(2)}).nu - e1(2)).norm() < 1e-12);
}

TEST_CASE("smoothed body sandwich") {
  Rng rng(28);
  for (const auto& [name, kp] : smoothed_zoo()) {
    INFO(name);
    const ConvexBody& k = kp->inner();
    const int d = kp->dim();
    const double shrink = 1.0 - kp->delta() * std::pow(d, 4);
    for (int i = 0; i < 1000; ++i) {
      const Vec u = rng.unit_vector(d);
      const double rk = k.radial(u);
      const double rp = kp->radial(u);
      CHECK(rp <= rk * (1 + 1e-12));
      CHECK(rp >= shrink * rk * (1 - 1e-12));
    }
  }
}

TEST_CASE("smoothed membership matches the radial function") {
  Rng rng(29);
  for (const auto& [name, kp] : smoothed_zoo()) {
    INFO(name);
    for (int i = 0; i < 300; ++i) {
      const Vec u = rng.unit_vector(kp->dim());
      const double r = kp->radial(u);
      CHECK(kp->contains((1 - 1e-9) * r * u));
      CHECK_FALSE(kp->contains((1 + 1e-9) * r * u));
    }
  }
}

// Max of <Phi(T c), w> over the faces of the cube [-1, 1]^d, each face
// searched by a zooming grid. Independent of how the library treats K'.
double cube_image_support(const Mat& t, double delta, const Vec& w) {
  const int d = static_cast<int>(t.rows());
  double best = -1e300;
  for (int fixed = 0; fixed < d; ++fixed) {
    for (double side : {-1.0, 1.0}) {
      Vec lo = -Vec::Ones(d), hi = Vec::Ones(d);
      lo(fixed) = hi(fixed) = side;
      Vec c = 0.5 * (lo + hi);
      double width = 2.0;
      auto value = [&](const Vec& q) { return phi_map(delta, t * q).dot(w); };
      double face_best = value(c);
      const int g = 24;
      for (int round = 0; round < 40; ++round) {
        Vec centre = c;
        const int total = static_cast<int>(std::pow(g + 1, d - 1));
        for (int k = 0; k < total; ++k) {
          Vec q = centre;
          int rem = k;
          for (int i = 0; i < d; ++i) {
            if (i == fixed) continue;
            const int step = rem % (g + 1);
            rem /= (g + 1);
            q(i) = std::clamp(centre(i) + width * (static_cast<double>(step) / g - 0.5), -1.0, 1.0);
          }
          const double v = value(q);
          if (v > face_best) {
            face_best = v;
            c = q;
          }
        }
        width *= 0.5;
      }
      best = std::max(best, face_best);
    }
  }
  return best;
}

TEST_CASE("smoothed support against independent maximization") {
  Rng rng(30);
  for (const auto& [name, kp] : smoothed_zoo()) {
    INFO(name);
    const int d = kp->dim();
    const auto* img = dynamic_cast<const AffineImage*>(&kp->inner());
    const bool cube = name == "square" || name == "cube3";
    PointList boundary;
    if (!cube) {
      for (int i = 0; i < 20000; ++i) {
        const Vec u = rng.unit_vector(d);
        boundary.push_back(kp->radial(u) * u);
      }
    }
    for (int t = 0; t < 30; ++t) {
      const Vec w = rng.unit_vector(d);
      double ref;
      if (cube) {
        REQUIRE(img != nullptr);
        ref = cube_image_support(img->matrix(), kp->delta(), w);
      } else {
        double brute = -1e300;
        Vec best;
        for (const auto& p : boundary)
          if (p.dot(w) > brute) {
            brute = p.dot(w);
            best = p / p.norm();
          }
        ref = oracle::refine_on_sphere([&](const Vec& u) { return kp->radial(u) * u.dot(w); }, best, 0.05);
      }
      const auto s = kp->support(w);
      CHECK(s.h == doctest::Approx(ref).epsilon(1e-8));
      CHECK(s.point.dot(w) == doctest::Approx(s.h).epsilon(1e-12));
      CHECK(gauge(*kp, s.point) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("smoothed boundary points carry their support normal") {
  Rng rng(31);
  for (const auto& [name, kp] : smoothed_zoo()) {
    INFO(name);
    for (int i = 0; i < 100; ++i) {
      const BoundaryPoint bp = kp->boundary(rng.unit_vector(kp->dim()));
      CHECK(bp.x.dot(bp.nu) == doctest::Approx(kp->support(bp.nu).h).epsilon(1e-8));
      CHECK(bp.nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("rolling ball property of the smoothed body") {
  for (const auto& [name, kp] : smoothed_zoo()) {
    INFO(name);
    const int d = kp->dim();
    const double radius = 1.0 / kp->delta();
    Rng rng(32);
    UniformSampler sampler(*kp);
    PointList inside;
    for (int i = 0; i < 1000; ++i) inside.push_back(sampler.draw(rng));
    for (int j = 0; j < 100; ++j) {
      const BoundaryPoint bp = kp->boundary(rng.unit_vector(d));
      const Vec c = bp.x - radius * bp.nu;
      int outside = 0;
      for (const auto& y : inside)
        if ((y - c).norm() > radius * (1 + 1e-9)) ++outside;
      CHECK(outside == 0);
    }
  }
}
