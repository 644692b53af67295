#include "polyfine/pipeline.hpp"

#include "polyfine/error.hpp"
#include "polyfine/net.hpp"
#include "polyfine/position.hpp"
#include "polyfine/smooth.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>

namespace polyfine {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class Fn>
auto run_stage(const char* name, std::vector<StageTiming>& timings, Fn&& fn) {
  Stopwatch watch;
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      timings.push_back({name, watch.seconds()});
    } else {
      auto out = fn();
      timings.push_back({name, watch.seconds()});
      return out;
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.detail());
  }
}

}  // namespace

std::string to_string(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::kEstimated: return "estimated";
    case ThetaMode::kAdaptive: return "adaptive";
    case ThetaMode::kFixed: return "fixed";
  }
  return "unknown";
}

std::string to_string(RhoMode mode) {
  switch (mode) {
    case RhoMode::kPractical: return "practical";
    case RhoMode::kTheory: return "theory";
    case RhoMode::kFixed: return "fixed";
  }
  return "unknown";
}

void PipelineConfig::validate() const {
  if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1/2)");
  if (delta_override && !(*delta_override > 0.0 && *delta_override < 0.5))
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1/2)");
  if (rolling_radius && !(*rolling_radius > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "rolling radius must be positive");
  if (theta_mode == ThetaMode::kFixed && !(theta_value > 0.0 && theta_value <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "fixed theta must lie in (0, 1]");
  if (!(theta_safety > 0.0 && theta_safety <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "theta safety must lie in (0, 1]");
  if (theta_mode == ThetaMode::kEstimated && theta_samples < 1000)
    throw Error(ErrorCode::kInvalidArgument, "theta estimation needs >= 1000 samples");
  if (rho_mode == RhoMode::kPractical && !(rho_coefficient > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "rho coefficient must be positive");
  if (rho_mode == RhoMode::kFixed && !(rho_value > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  if (com_samples < 1000) throw Error(ErrorCode::kInvalidArgument, "center of mass needs >= 1000 samples");
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  if (max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

Prepared prepare(const PipelineConfig& config, std::vector<StageTiming>& timings) {
  Prepared p;
  const Rng master(config.seed);
  p.body = run_stage("body", timings, [&] { return make_body(config.body); });
  const int d = p.body->dim();

  run_stage("position", timings, [&] {
    Rng r = master.stream(1);
    p.center = center_of_mass(*p.body, config.com_samples, r, config.workers);
    p.centered = translate(p.body, -p.center.mean);
    Rng s = master.stream(2);
    p.standard = standardize(p.centered, s);
  });

  p.params = config.delta_override ? SmoothParams::with_delta(d, *config.delta_override) : SmoothParams::defaults(d);
  if (config.rolling_radius) p.params.R = *config.rolling_radius;
  if (!p.params.admits_transfer())
    spdlog::warn("delta = {} is not below 1/(4 d^4); the epsilon transfer is not guaranteed", p.params.delta);
  p.smoothed = run_stage("smooth", timings, [&] {
    return std::static_pointer_cast<const SmoothedBody>(smooth_body(p.standard.body, p.params));
  });
  return p;
}

ApproxResult approximate(const PipelineConfig& config) {
  config.validate();
  ApproxResult res;
  const Rng master(config.seed);
  auto& timings = res.timings;

  const Prepared prep = prepare(config, timings);
  const int d = prep.body->dim();
  const BodyPtr& centered = prep.centered;
  const SmoothParams& params = prep.params;
  const auto& smoothed = prep.smoothed;
  res.center = prep.center.mean;
  res.center_std_error = prep.center.std_error;
  res.std_matrix = prep.standard.matrix;
  res.inner_radius_check = prep.standard.inner_radius_check;
  res.outer_radius_check = prep.standard.outer_radius_check;
  const Mat t_inv = prep.standard.matrix.inverse();

  res.delta = params.delta;
  res.R = params.R;
  res.eps_target = config.eps;
  res.eps_inner = transfer_epsilon(config.eps);
  res.cap_eps = res.eps_inner / 2.0;
  res.rho_theory = rho_for_epsilon(d, params.R, res.eps_inner);
  res.rho_mode = config.rho_mode;
  res.theta_mode = config.theta_mode;

  double coefficient = config.rho_coefficient;
  const CapSampler sampler(smoothed, config.sampler);

  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    res.attempts = static_cast<std::size_t>(attempt) + 1;
    const Rng round = master.stream(100 + static_cast<std::uint64_t>(attempt));
    switch (config.rho_mode) {
      case RhoMode::kPractical: res.rho = coefficient * std::sqrt(res.eps_inner); break;
      case RhoMode::kTheory: res.rho = res.rho_theory; break;
      case RhoMode::kFixed: res.rho = config.rho_value; break;
    }
    res.rho_coefficient = res.rho / std::sqrt(res.eps_inner);

    // Net on the smoothed body, then fill the holes the covering check finds.
    LiftedNet net = run_stage("net", timings, [&] {
      NetOptions opts;
      opts.stop_streak = config.stop_streak;
      opts.streak_factor = config.streak_factor;
      opts.workers = config.workers;
      Rng r = round.stream(1);
      LiftedNet n = build_net(*smoothed, res.rho, r, opts);
      Rng probe = round.stream(2);
      res.net_repaired = 0;
      for (int rep = 0;; ++rep) {
        CoverageReport report = coverage_probe(n, *smoothed, 100 * n.size(), probe, config.workers);
        res.coverage_radius = report.radius;
        if (report.radius <= res.rho || rep >= config.repair_rounds) break;
        res.net_repaired += insert_points(n, report.holes);
      }
      if (res.coverage_radius > res.rho)
        spdlog::info("net covering radius {:.4g} exceeds rho {:.4g} after repair", res.coverage_radius, res.rho);
      return n;
    });
    res.net_size = net.size();
    res.net_candidates = net.candidates;
    spdlog::info("attempt {}: rho = {:.5g}, N = {}, covering radius {:.4g}", attempt + 1, res.rho, net.size(),
                 res.coverage_radius);

    std::vector<Cap> caps;
    caps.reserve(net.size());
    for (const auto& bp : net.points) caps.push_back(Cap::make(bp, res.cap_eps));

    // Transversal.
    TransversalResult tr = run_stage("cover", timings, [&] {
      Rng r = round.stream(3);
      switch (config.theta_mode) {
        case ThetaMode::kAdaptive: res.theta_samples = 0; return adaptive_cover(caps, sampler, r, config.workers);
        case ThetaMode::kFixed:
          res.theta_samples = 0;
          return rogers_cover(caps, sampler, config.theta_value, r, config.workers);
        case ThetaMode::kEstimated: break;
      }
      Rng rt = round.stream(4);
      res.theta_samples = config.theta_samples;
      const double theta = estimate_theta(sampler, caps, config.theta_samples, config.theta_safety, rt, config.workers);
      return rogers_cover(caps, sampler, theta, r, config.workers);
    });
    res.theta_used = tr.theta_used;
    res.sampled_count = tr.sampled_count;
    res.patched_count = tr.patched_count;
    res.samples_used = res.theta_samples + tr.sampled_count;
    spdlog::info("theta = {:.4g}, M = {}, patched = {}", tr.theta_used, tr.sampled_count, tr.patched_count);

    // Map back and certify on the recentered body.
    run_stage("certify", timings, [&] {
      PointList y;
      y.reserve(tr.points.size());
      for (const auto& p : tr.points) y.push_back(t_inv * phi_inverse(params.delta, p));
      PointList dirs;
      for (const auto& p : y) dirs.push_back(centered->normal_at(p));
      for (const auto& bp : net.points) dirs.push_back(centered->normal_at(t_inv * phi_inverse(params.delta, bp.x)));
      Rng r = round.stream(5);
      res.certificate = achieved_epsilon(*centered, y, config.n_dirs_verify, r, dirs, config.workers);
      res.certificate.eps_target = config.eps;
      res.eps_achieved = res.certificate.eps_achieved;
      const CoverageCheck cc = cap_coverage_check(net.points, tr.points, res.cap_eps);
      res.caps_covered = cc.all_covered;
      res.cap_misses = cc.misses.size();
      res.vertices.clear();
      for (const auto& p : y) res.vertices.push_back(p + res.center);
    });
    res.success = res.eps_achieved <= config.eps && res.caps_covered;
    spdlog::info("eps achieved {:.6g} (target {})", res.eps_achieved, config.eps);
    if (res.success || config.rho_mode != RhoMode::kPractical) break;
    coefficient /= 2.0;
  }
  return res;
}

ApproxResult baseline_sphere_sampling(const ConvexBody& body, double eps, Rng& rng, std::size_t n_dirs,
                                      std::size_t cap) {
  const int d = body.dim();
  ApproxResult res;
  res.eps_target = eps;
  res.center = zeros(d);
  Rng probes = rng.stream(1);
  for (;;) {
    const std::size_t batch = std::max<std::size_t>(16, res.vertices.size() / 4);
    for (std::size_t i = 0; i < batch; ++i) res.vertices.push_back(body.support(rng.unit_vector(d)).point);
    Rng r = probes;
    res.certificate = achieved_epsilon(body, res.vertices, n_dirs, r);
    res.eps_achieved = res.certificate.eps_achieved;
    res.sampled_count = res.vertices.size();
    res.samples_used = res.vertices.size();
    if (res.eps_achieved <= eps) break;
    if (res.vertices.size() >= cap)
      throw Error(ErrorCode::kBaselineFailed, "no eps-approximation within " + std::to_string(cap) + " points");
  }
  res.certificate.eps_target = eps;
  res.success = true;
  return res;
}

json certificate_to_json(const Certificate& c) {
  return {{"eps_target", c.eps_target},
          {"eps_achieved", c.eps_achieved},
          {"n_directions", c.n_directions},
          {"worst_direction", vec_to_json(c.worst_direction)},
          {"max_gauge_violation", c.max_gauge_violation}};
}

json result_to_json(const ApproxResult& r, const PipelineConfig& config) {
  json verts = json::array();
  for (const auto& v : r.vertices) verts.push_back(vec_to_json(v));
  json j;
  j["success"] = r.success;
  j["body"] = body_spec_to_json(config.body);
  j["dim"] = config.body.dim();
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  j["eps_target"] = r.eps_target;
  j["eps_achieved"] = r.eps_achieved;
  j["eps_inner"] = r.eps_inner;
  j["cap_eps"] = r.cap_eps;
  j["n_vertices"] = r.vertices.size();
  j["vertices"] = std::move(verts);
  j["net_size"] = r.net_size;
  j["net_candidates"] = r.net_candidates;
  j["net_repaired"] = r.net_repaired;
  j["coverage_radius"] = r.coverage_radius;
  j["rho"] = r.rho;
  j["rho_theory"] = r.rho_theory;
  j["rho_mode"] = to_string(r.rho_mode);
  j["rho_coefficient"] = r.rho_coefficient;
  j["delta"] = r.delta;
  j["R"] = r.R;
  j["theta_mode"] = to_string(r.theta_mode);
  j["theta_used"] = r.theta_used;
  j["theta_samples"] = r.theta_samples;
  j["sampled_count"] = r.sampled_count;
  j["patched_count"] = r.patched_count;
  j["samples_used"] = r.samples_used;
  j["attempts"] = r.attempts;
  j["center"] = vec_to_json(r.center);
  j["center_std_error"] = vec_to_json(r.center_std_error);
  j["standardization"] = {{"matrix", mat_to_json(r.std_matrix)},
                          {"translation", vec_to_json(r.center)},
                          {"inner_radius_check", r.inner_radius_check},
                          {"outer_radius_check", r.outer_radius_check}};
  j["certificate"] = certificate_to_json(r.certificate);
  j["cap_coverage"] = {{"all_covered", r.caps_covered}, {"misses", r.cap_misses}};
  return j;
}

json timings_to_json(const ApproxResult& r) {
  json j = json::object();
  for (const auto& t : r.timings) j[t.stage] = j.value(t.stage, 0.0) + t.seconds;
  return j;
}

}  // namespace polyfine
