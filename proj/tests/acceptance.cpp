// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "polyfine/bodies.hpp"
#include "polyfine/body_spec.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/cover.hpp"
#include "polyfine/net.hpp"
#include "polyfine/pipeline.hpp"
#include "polyfine/position.hpp"
#include "polyfine/smooth.hpp"
#include "polyfine/sweep.hpp"

#include "interval_model.hpp"
#include "oracles.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace polyfine;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Ray length from c along u to the boundary of an axis-aligned ellipse.
double ellipse_ray(double a, double b, const Vec& c, const Vec& u) {
  const double qa = u(0) * u(0) / (a * a) + u(1) * u(1) / (b * b);
  const double qb = 2 * (c(0) * u(0) / (a * a) + c(1) * u(1) / (b * b));
  const double qc = c(0) * c(0) / (a * a) + c(1) * c(1) / (b * b) - 1;
  return (-qb + std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
}

double square_ray(const Vec& c, const Vec& u) {
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i)
    if (u(i) != 0) t = std::min(t, ((u(i) > 0 ? 1.0 : -1.0) - c(i)) / u(i));
  return t;
}

int polygon_failures(const ApproxResult& r, const std::function<double(const Vec&, const Vec&)>& ray) {
  std::vector<oracle::P2> pts;
  for (const auto& y : r.vertices) pts.push_back({y(0), y(1)});
  const auto hull = oracle::convex_hull(pts);
  int bad = 0;
  for (int i = 0; i < 720; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 720;
    const Vec u = v2(std::cos(t), std::sin(t));
    const Vec p = r.center + (1.0 - r.eps_target) * ray(r.center, u) * u;
    if (!oracle::in_convex_polygon(hull, {p(0), p(1)}, 1e-12)) ++bad;
  }
  return bad;
}

PipelineConfig config_for(BodySpec spec, double eps, std::uint64_t seed = 42) {
  PipelineConfig c;
  c.body = std::move(spec);
  c.eps = eps;
  c.seed = seed;
  return c;
}

Outcome end_to_end() {
  Outcome o;
  struct Case {
    std::string name;
    BodySpec spec;
    std::function<double(const Vec&, const Vec&)> ray;
  };
  const std::vector<Case> cases = {
      {"disk", ball_spec(2), [](const Vec& c, const Vec& u) { return ellipse_ray(1, 1, c, u); }},
      {"square", cube_spec(2), square_ray},
      {"ellipse", ellipse_spec({2.0, 0.5}), [](const Vec& c, const Vec& u) { return ellipse_ray(2, 0.5, c, u); }},
      {"ball3", ball_spec(3), nullptr},
      {"cube3", cube_spec(3), nullptr}};
  for (const auto& c : cases) {
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto t0 = std::chrono::steady_clock::now();
      bool ok = false;
      std::string info;
      try {
        const ApproxResult r = approximate(config_for(c.spec, eps));
        const double secs = seconds_since(t0);
        ok = r.success && r.eps_achieved <= eps && r.certificate.n_directions >= 10000 && secs < 120.0;
        int poly = 0;
        if (c.ray) {
          poly = polygon_failures(r, c.ray);
          ok = ok && poly == 0;
        }
        info = fmt::format("{} eps={} n={} achieved={:.4f} t={:.1f}s{}", c.name, eps, r.vertices.size(),
                           r.eps_achieved, secs, c.ray ? fmt::format(" polygon_misses={}", poly) : "");
      } catch (const std::exception& e) {
        info = fmt::format("{} eps={} error: {}", c.name, eps, e.what());
      }
      std::cerr << "  C1 " << info << "\n";
      if (!ok) note(o, false, info);
    }
  }
  if (o.pass) o.detail = "15 runs certified, d=2 polygon oracle clean, all under 120 s";
  return o;
}

Outcome scaling() {
  Outcome o;
  PipelineConfig tmpl = config_for(ball_spec(2), 0.1, 1000);
  auto report = [](const SweepRow& r) {
    std::cerr << fmt::format("  C2 {} eps={} trial={} n={} status={} t={:.1f}s\n", r.body, r.eps, r.trial,
                             r.n_vertices, r.status, r.wall_time);
  };
  std::vector<SweepRow> rows = sweep(tmpl, {0.2, 0.1, 0.05, 0.025, 0.0125}, {{"disk", ball_spec(2)}}, 5, report);
  const auto more = sweep(tmpl, {0.2, 0.1, 0.05}, {{"ball3", ball_spec(3)}}, 5, report);
  rows.insert(rows.end(), more.begin(), more.end());
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++failed;
  note(o, failed == 0, fmt::format("{} failed rows", failed));
  for (const auto& f : fit_slopes(rows)) {
    const bool d2 = f.body == "disk";
    const double lo = d2 ? 0.35 : 0.8, hi = d2 ? 0.8 : 1.3;
    note(o, f.slope >= lo && f.slope <= hi, fmt::format("{} slope {:.3f} in [{}, {}]", f.body, f.slope, lo, hi));
    note(o, f.monotone, fmt::format("{} means nonincreasing in eps", f.body));
  }
  return o;
}

Outcome phi_geometry() {
  Outcome o;
  Rng rng(301);
  double worst_identity = 0.0, worst_radius = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const double delta = rng.uniform(0.001, 0.49);
    const double h = rng.uniform(0.1, 5.0);
    const Vec nu = rng.unit_vector(d);
    const auto hs = halfspace_image(delta, nu, h);
    const double closed = std::sqrt(1.0 / (4 * delta * delta * h * h) + 1.0 / delta);
    worst_radius = std::max(worst_radius, std::abs(hs.radius - closed) / closed);
    for (int i = 0; i < 1000; ++i) {
      Vec t = rng.gaussian_vector(d) * rng.uniform(0, 20);
      t -= t.dot(nu) * nu;
      const Vec x = h * nu + t;
      worst_identity = std::max(worst_identity, std::abs((phi_map(delta, x) - hs.center).norm() - hs.radius) / hs.radius);
    }
  }
  double worst_trip = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int d = 2 + i % 4;
    const double delta = 1.0 / (4.0 * std::pow(d, 5));
    const Vec x = rng.unit_vector(d) * rng.uniform(0.01, d * d);
    worst_trip = std::max(worst_trip, (phi_inverse(delta, phi_map(delta, x)) - x).norm() / x.norm());
  }
  note(o, worst_identity <= 1e-9, fmt::format("half-space identity rel err {:.2e} <= 1e-9", worst_identity));
  note(o, worst_radius <= 1e-9, fmt::format("radius closed form rel err {:.2e}", worst_radius));
  note(o, worst_trip <= 1e-12, fmt::format("round trip rel err {:.2e} <= 1e-12", worst_trip));
  return o;
}

Outcome net_criterion() {
  Outcome o;
  const SmoothedBody kp(Ball::unit(2), 0.25);
  Rng rng(302);
  const LiftedNet net = build_net(kp, 0.1, rng);
  const std::size_t n = net.size();
  note(o, n >= 57 && n <= 126, fmt::format("N = {} in [57, 126]", n));
  note(o, static_cast<double>(n) <= net_cardinality_bound(2, 0.1), fmt::format("N <= {}", net_cardinality_bound(2, 0.1)));
  Rng probe(303);
  const double cov = coverage_radius_check(net, kp, 100 * n, probe);
  note(o, cov <= 0.1, fmt::format("covering radius {:.4f} <= 0.1", cov));
  int bad = 0;
  Rng pairs(304);
  for (int i = 0; i < 10000; ++i) {
    const BoundaryPoint a = kp.boundary(pairs.unit_vector(2));
    const BoundaryPoint b = kp.boundary(pairs.unit_vector(2));
    const double lhs = ((a.x + a.nu) - (b.x + b.nu)).squaredNorm();
    const double rhs = (a.x - b.x).squaredNorm() + (a.nu - b.nu).squaredNorm();
    if (lhs < rhs - 1e-9) ++bad;
  }
  note(o, bad == 0, fmt::format("lifting inequality violations {}/10000", bad));
  return o;
}

Outcome measure_criterion() {
  Outcome o;
  for (int d : {2, 3}) {
    const CapSampler sampler(Ball::unit(d));
    Rng rng(305 + d);
    const Cap cap = Cap::make(Ball::unit(d)->boundary(unit(d, 0)), 0.5);
    const Estimate e = mu_cap_estimate(sampler, cap, 100000, rng);
    const double exact = d == 2 ? 1.0 / 3.0 : 0.25;
    note(o, std::abs(e.value - exact) <= 3 * e.std_error,
         fmt::format("d={} cap mass {:.4f} vs {:.4f} (3 SE = {:.4f})", d, e.value, exact, 3 * e.std_error));
  }
  Rng rng(310);
  const auto s = standardize(make_body(cube_spec(2)), rng);
  const auto kp = std::make_shared<SmoothedBody>(s.body, SmoothParams::defaults(2).delta);
  const CapSampler sampler(kp);
  const PointList mu = sampler.sample_many(100000, rng.stream(1));
  std::vector<BoundaryPoint> apex;
  Rng dirs(311);
  for (int i = 0; i < 50; ++i) apex.push_back(kp->boundary(dirs.unit_vector(2)));
  std::vector<double> ratio;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    double lo = 1.0;
    for (const auto& a : apex) lo = std::min(lo, cap_fraction(mu, Cap::make(a, eps)).value);
    ratio.push_back(lo / std::sqrt(eps));
  }
  const auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());
  note(o, *mn > 0 && *mx / *mn < 4.0, fmt::format("smoothed square min mu/sqrt(eps) spread {:.3f} < 4", *mx / *mn));
  return o;
}

Outcome rogers_criterion() {
  Outcome o;
  const auto sys = testing_support::interval_system(1000, 0.01);
  std::vector<double> sizes;
  bool hits = true;
  for (int t = 0; t < 20; ++t) {
    Rng rng(400 + t);
    const auto tr = rogers_transversal(sys, 0.01, rng);
    for (auto h : tr.per_cap_hits) hits = hits && h >= 1;
    sizes.push_back(static_cast<double>(tr.points.size()));
  }
  const double m = oracle::mean(sizes);
  note(o, m <= 331 * 1.1, fmt::format("mean |Y| {:.1f} <= {:.1f}", m, 331 * 1.1));
  note(o, hits, "every interval hit in every run");
  return o;
}

Outcome santalo_criterion() {
  Outcome o;
  struct Case {
    std::string name;
    BodyPtr body;
    double expected, tol;
  };
  const double ball3 = 4.0 * std::numbers::pi / 3.0;
  const std::vector<Case> cases = {{"disk", Ball::unit(2), std::numbers::pi * std::numbers::pi, 0.05},
                                   {"square", make_body(cube_spec(2)), 8.0, 0.05},
                                   {"ball3", Ball::unit(3), ball3 * ball3, 0.07}};
  for (const auto& c : cases) {
    Rng rng(500);
    const SantaloResult s = santalo_product(c.body, 1000000, rng);
    const double rel = std::abs(s.product - c.expected) / c.expected;
    note(o, rel <= c.tol, fmt::format("{} {:.4f} vs {:.4f} (rel {:.3f} <= {})", c.name, s.product, c.expected, rel, c.tol));
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  for (int workers : {1, 2}) {
    PipelineConfig c = config_for(ball_spec(2), 0.1, 42);
    c.workers = workers;
    const std::string a = result_to_json(approximate(c), c).dump();
    const std::string b = result_to_json(approximate(c), c).dump();
    note(o, a == b, fmt::format("workers={} byte-identical ({} bytes)", workers, a.size()));
  }
  PipelineConfig c = config_for(ball_spec(3), 0.2, 42);
  const std::string a = result_to_json(approximate(c), c).dump();
  const std::string b = result_to_json(approximate(c), c).dump();
  note(o, a == b, "ball3 byte-identical");
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 end-to-end", end_to_end},       {"C2 scaling", scaling},
      {"C3 phi geometry", phi_geometry},   {"C4 net", net_criterion},
      {"C5 measure", measure_criterion},   {"C6 rogers", rogers_criterion},
      {"C7 santalo", santalo_criterion},   {"C8 determinism", determinism}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail
              << fmt::format(" [{:.1f}s]", seconds_since(t0)) << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
