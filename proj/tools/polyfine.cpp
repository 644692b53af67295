#include "polyfine/body_spec.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/cover.hpp"
#include "polyfine/error.hpp"
#include "polyfine/net.hpp"
#include "polyfine/pipeline.hpp"
#include "polyfine/plot.hpp"
#include "polyfine/sweep.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polyfine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMiss = 2;
constexpr int kExitStage = 3;
constexpr int kExitConfig = 4;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("polyfine");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("POLYFINE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
}

// Emits to <out>/<name> when an output directory is set, else to stdout.
void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
  } else {
    write_text(fs::path(out_dir) / name, text);
  }
}

struct Common {
  std::string body;
  double eps = 0.1;
  std::uint64_t seed = 42;
  std::size_t dirs = 10'000;
  int workers = 1;
  std::string out;
  std::optional<double> delta;
  std::optional<double> rolling_radius;
};

void add_body(CLI::App* app, Common& c) {
  app->add_option("--body", c.body, "Body spec JSON file")->required()->check(CLI::ExistingFile);
}

void add_seed_workers(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--workers", c.workers, "Worker threads (fixes the partition)")->capture_default_str();
}

void add_smoothing(CLI::App* app, Common& c) {
  app->add_option("--delta", c.delta, "Smoothing parameter (default 1/(4 d^5))");
  app->add_option("--rolling-radius", c.rolling_radius, "Rolling radius R (default 1/delta)");
}

PipelineConfig base_config(const Common& c) {
  PipelineConfig cfg;
  cfg.body = load_body_spec(c.body);
  cfg.eps = c.eps;
  cfg.seed = c.seed;
  cfg.n_dirs_verify = c.dirs;
  cfg.workers = c.workers;
  cfg.delta_override = c.delta;
  cfg.rolling_radius = c.rolling_radius;
  return cfg;
}

// Vertex files are either a bare array of points or a result document.
PointList read_vertices(const json& j) {
  const json& arr = j.is_object() ? j.at("vertices") : j;
  PointList pts;
  for (const auto& v : arr) pts.push_back(vec_from_json(v));
  return pts;
}

// --- approximate -----------------------------------------------------------

struct ApproxArgs {
  Common c;
  bool adaptive = false;
  std::optional<double> theta;
  std::optional<double> rho;
  std::string rho_mode = "practical";
  double rho_coefficient = 0.25;
  std::size_t stop_streak = 0;
  bool plot = false;
};

int run_approximate(const ApproxArgs& a) {
  PipelineConfig cfg = base_config(a.c);
  if (a.adaptive) cfg.theta_mode = ThetaMode::kAdaptive;
  if (a.theta) {
    cfg.theta_mode = ThetaMode::kFixed;
    cfg.theta_value = *a.theta;
  }
  cfg.rho_coefficient = a.rho_coefficient;
  if (a.rho_mode == "theory") cfg.rho_mode = RhoMode::kTheory;
  if (a.rho) {
    cfg.rho_mode = RhoMode::kFixed;
    cfg.rho_value = *a.rho;
  }
  cfg.stop_streak = a.stop_streak;
  cfg.validate();

  const ApproxResult res = approximate(cfg);
  const std::string doc = result_to_json(res, cfg).dump(2) + "\n";
  if (a.c.out.empty()) {
    std::cout << doc;
  } else {
    write_text(fs::path(a.c.out) / "result.json", doc);
    write_text(fs::path(a.c.out) / "timings.json", timings_to_json(res).dump(2) + "\n");
    if (a.plot && cfg.body.dim() == 2)
      plot2d(*make_body(cfg.body), res.center, res.vertices, cfg.eps, (fs::path(a.c.out) / "plot.svg").string());
    std::cerr << "n_vertices " << res.vertices.size() << "  eps_achieved " << res.eps_achieved << "  net " << res.net_size
              << (res.success ? "  ok" : "  MISS") << "\n";
  }
  return res.success ? kExitOk : kExitMiss;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  Common c;
  std::string vertices;
  std::optional<std::vector<double>> center;
};

int run_verify(const VerifyArgs& a) {
  const BodyPtr body = make_body(load_body_spec(a.c.body));
  const int d = body->dim();
  const json vj = read_json(a.vertices);
  PointList y = read_vertices(vj);
  if (y.empty()) throw Error(ErrorCode::kInvalidArgument, "no vertices");
  for (const auto& p : y)
    if (p.size() != d) throw Error(ErrorCode::kInvalidArgument, "vertex dimension does not match the body");
  if (!(a.c.eps > 0.0 && a.c.eps < 0.5)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1/2)");

  // (1 - eps) K is taken about the center stored with the vertices, the given
  // center, or else an estimated center of mass.
  Rng master(a.c.seed);
  Vec center;
  if (a.center) {
    center = Eigen::Map<const Vec>(a.center->data(), static_cast<Eigen::Index>(a.center->size()));
    if (center.size() != d) throw Error(ErrorCode::kInvalidArgument, "center dimension does not match the body");
  } else if (vj.is_object() && vj.contains("center")) {
    center = vec_from_json(vj.at("center"));
  } else {
    Rng r = master.stream(1);
    center = center_of_mass(*body, 100'000, r, a.c.workers).mean;
  }
  const BodyPtr centered = translate(body, -center);
  for (auto& p : y) p -= center;
  PointList extra;
  for (const auto& p : y) extra.push_back(centered->normal_at(p));
  Rng r = master.stream(5);
  Certificate cert = achieved_epsilon(*centered, y, a.c.dirs, r, extra, a.c.workers);
  cert.eps_target = a.c.eps;
  json j = certificate_to_json(cert);
  j["center"] = vec_to_json(center);
  j["n_vertices"] = y.size();
  j["success"] = cert.eps_achieved <= a.c.eps;
  emit(a.c.out, "certificate.json", j.dump(2) + "\n");
  return cert.eps_achieved <= a.c.eps ? kExitOk : kExitMiss;
}

// --- net -------------------------------------------------------------------

struct NetArgs {
  Common c;
  std::optional<double> rho;
  std::size_t stop_streak = 0;
};

int run_net(const NetArgs& a) {
  PipelineConfig cfg = base_config(a.c);
  cfg.validate();
  std::vector<StageTiming> timings;
  const Prepared prep = prepare(cfg, timings);
  const int d = prep.body->dim();
  const double eps_inner = transfer_epsilon(cfg.eps);
  const double rho = a.rho ? *a.rho : cfg.rho_coefficient * std::sqrt(eps_inner);
  if (!(rho > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rho must be positive");

  const Rng master(cfg.seed);
  NetOptions opts;
  opts.stop_streak = a.stop_streak;
  opts.workers = cfg.workers;
  Rng r = master.stream(101);
  const LiftedNet net = build_net(*prep.smoothed, rho, r, opts);
  Rng probe = master.stream(102);
  const double coverage = coverage_radius_check(net, *prep.smoothed, 100 * net.size(), probe, cfg.workers);

  json pts = json::array();
  for (const auto& bp : net.points) pts.push_back({{"x", vec_to_json(bp.x)}, {"nu", vec_to_json(bp.nu)}});
  json j;
  j["dim"] = d;
  j["rho"] = rho;
  j["rho_theory"] = rho_for_epsilon(d, prep.params.R, eps_inner);
  j["delta"] = prep.params.delta;
  j["R"] = prep.params.R;
  j["size"] = net.size();
  j["cardinality_bound"] = net_cardinality_bound(d, rho);
  j["within_bound"] = static_cast<double>(net.size()) <= net_cardinality_bound(d, rho);
  j["candidates"] = net.candidates;
  j["rejection_streak"] = net.rejection_streak;
  j["coverage_radius"] = coverage;
  j["points"] = std::move(pts);
  emit(a.c.out, "net.json", j.dump(2) + "\n");
  return kExitOk;
}

// --- measure ---------------------------------------------------------------

struct MeasureArgs {
  Common c;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  std::size_t apexes = 16;
  std::size_t samples = 100'000;
};

int run_measure(const MeasureArgs& a) {
  PipelineConfig cfg = base_config(a.c);
  cfg.eps = 0.1;
  cfg.validate();
  for (double e : a.eps_list)
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::kInvalidArgument, "cap eps must lie in (0, 1)");
  if (a.apexes < 1 || a.samples < 1000) throw Error(ErrorCode::kInvalidArgument, "need >= 1 apex and >= 1000 samples");
  std::vector<StageTiming> timings;
  const Prepared prep = prepare(cfg, timings);
  const int d = prep.body->dim();
  const Rng master(cfg.seed);

  Rng ra = master.stream(201);
  std::vector<BoundaryPoint> apex;
  for (std::size_t i = 0; i < a.apexes; ++i) apex.push_back(prep.smoothed->boundary(ra.unit_vector(d)));
  const CapSampler sampler(prep.smoothed, cfg.sampler);
  const PointList mu = sampler.sample_many(a.samples, master.stream(202), cfg.workers);

  std::ostringstream csv, table;
  csv << "eps,apex_id,estimate,std_error\n";
  table << "eps,min_estimate,min_over_scale\n";
  csv.precision(10);
  table.precision(10);
  for (double e : a.eps_list) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < apex.size(); ++i) {
      const Estimate est = cap_fraction(mu, Cap::make(apex[i], e));
      csv << e << "," << i << "," << est.value << "," << est.std_error << "\n";
      lo = std::min(lo, est.value);
    }
    table << e << "," << lo << "," << lo / std::pow(e, 0.5 * (d - 1)) << "\n";
  }
  if (a.c.out.empty()) {
    std::cout << csv.str();
    std::cerr << table.str();
  } else {
    write_text(fs::path(a.c.out) / "measure.csv", csv.str());
    write_text(fs::path(a.c.out) / "scaling.csv", table.str());
  }
  return kExitOk;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  Common c;
  std::vector<std::string> bodies;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  int trials = 5;
};

int run_sweep(const SweepArgs& a) {
  PipelineConfig tmpl;
  tmpl.seed = a.c.seed;
  tmpl.n_dirs_verify = a.c.dirs;
  tmpl.workers = a.c.workers;
  tmpl.delta_override = a.c.delta;
  tmpl.rolling_radius = a.c.rolling_radius;
  if (a.eps_list.size() < 3) throw Error(ErrorCode::kInvalidArgument, "sweep needs >= 3 eps values");
  std::vector<SweepBody> bodies;
  for (const auto& path : a.bodies) bodies.push_back({fs::path(path).stem().string(), load_body_spec(path)});

  const auto rows = sweep(tmpl, a.eps_list, bodies, a.trials, [](const SweepRow& r) {
    spdlog::info("{} eps {} trial {}: n = {} ({})", r.body, r.eps, r.trial, r.n_vertices, r.status);
  });
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  json fits = json::array();
  for (const auto& f : fit_slopes(rows)) {
    fits.push_back({{"body", f.body},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"eps", f.eps},
                    {"mean_vertices", f.mean_vertices},
                    {"monotone", f.monotone}});
  }
  if (a.c.out.empty()) {
    std::cout << csv.str();
    std::cerr << fits.dump(2) << "\n";
  } else {
    write_text(fs::path(a.c.out) / "sweep.csv", csv.str());
    write_text(fs::path(a.c.out) / "slopes.json", fits.dump(2) + "\n");
  }
  return kExitOk;
}

// --- santalo ---------------------------------------------------------------

struct SantaloArgs {
  Common c;
  std::size_t samples = 1'000'000;
  bool recenter = false;
};

int run_santalo(const SantaloArgs& a) {
  BodyPtr body = make_body(load_body_spec(a.c.body));
  Rng master(a.c.seed);
  Vec center = zeros(body->dim());
  if (a.recenter) {
    Rng r = master.stream(1);
    center = center_of_mass(*body, 100'000, r, a.c.workers).mean;
    body = translate(body, -center);
  }
  Rng r = master.stream(2);
  const SantaloResult s = santalo_product(body, a.samples, r);
  json j{{"volume", s.volume.value},
         {"volume_std_error", s.volume.std_error},
         {"polar_volume", s.polar_volume.value},
         {"polar_volume_std_error", s.polar_volume.std_error},
         {"product", s.product},
         {"product_std_error", s.product_std_error},
         {"center", vec_to_json(center)},
         {"samples", a.samples}};
  emit(a.c.out, "santalo.json", j.dump(2) + "\n");
  return kExitOk;
}

// --- standardize -----------------------------------------------------------

int run_standardize(const Common& c) {
  PipelineConfig cfg = base_config(c);
  cfg.validate();
  std::vector<StageTiming> timings;
  const Prepared prep = prepare(cfg, timings);
  json j{{"matrix", mat_to_json(prep.standard.matrix)},
         {"translation", vec_to_json(prep.center.mean)},
         {"translation_std_error", vec_to_json(prep.center.std_error)},
         {"inner_radius_check", prep.standard.inner_radius_check},
         {"outer_radius_check", prep.standard.outer_radius_check},
         {"outer_limit", prep.body->dim() * prep.body->dim()}};
  emit(c.out, "standardize.json", j.dump(2) + "\n");
  return kExitOk;
}

// --- plot ------------------------------------------------------------------

struct PlotArgs {
  Common c;
  std::string result;
  std::string svg = "plot.svg";
};

int run_plot(const PlotArgs& a) {
  const json r = read_json(a.result);
  const BodyPtr body = r.contains("body") && a.c.body.empty() ? make_body(body_spec_from_json(r.at("body")))
                                                                : make_body(load_body_spec(a.c.body));
  const PointList y = read_vertices(r);
  const Vec center = r.contains("center") ? vec_from_json(r.at("center")) : zeros(body->dim());
  const double eps = r.value("eps_target", a.c.eps);
  const fs::path path = a.c.out.empty() ? fs::path(a.svg) : fs::path(a.c.out) / a.svg;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  plot2d(*body, center, y, eps, path.string());
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidBody:
    case ErrorCode::kUnsupported: return kExitConfig;
    default: return kExitStage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"polyfine: polytope approximation of convex bodies"};
  app.require_subcommand(1);

  ApproxArgs approx;
  auto* ap = app.add_subcommand("approximate", "Build P with (1 - eps) K inside P inside K");
  add_body(ap, approx.c);
  ap->add_option("--eps", approx.c.eps, "Target epsilon in (0, 1/2)")->capture_default_str();
  add_seed_workers(ap, approx.c);
  ap->add_option("--dirs", approx.c.dirs, "Random certification directions")->capture_default_str();
  ap->add_flag("--adaptive", approx.adaptive, "Adaptive transversal instead of estimated theta");
  ap->add_option("--theta", approx.theta, "Fixed theta in (0, 1]");
  ap->add_option("--rho", approx.rho, "Fixed net mesh");
  ap->add_option("--rho-mode", approx.rho_mode, "practical or theory")
      ->check(CLI::IsMember({"practical", "theory"}))
      ->capture_default_str();
  ap->add_option("--rho-coefficient", approx.rho_coefficient, "c in rho = c sqrt(eps/2)")->capture_default_str();
  ap->add_option("--stop-streak", approx.stop_streak, "Fixed net stop streak (0: adaptive rule)");
  add_smoothing(ap, approx.c);
  ap->add_option("--out", approx.c.out, "Output directory for result.json and timings.json");
  ap->add_flag("--plot", approx.plot, "Also write plot.svg (d = 2)");

  VerifyArgs verify;
  auto* vp = app.add_subcommand("verify", "Certify a vertex set against a body");
  add_body(vp, verify.c);
  vp->add_option("--vertices", verify.vertices, "JSON array of points or a result.json")
      ->required()
      ->check(CLI::ExistingFile);
  vp->add_option("--eps", verify.c.eps, "Target epsilon")->capture_default_str();
  vp->add_option("--dirs", verify.c.dirs, "Random certification directions")->capture_default_str();
  vp->add_option("--center", verify.center, "Scaling center (default: from the vertex file or center of mass)");
  add_seed_workers(vp, verify.c);
  vp->add_option("--out", verify.c.out, "Output directory for certificate.json");

  NetArgs net;
  auto* np = app.add_subcommand("net", "Build a lifted net on the smoothed body");
  add_body(np, net.c);
  np->add_option("--eps", net.c.eps, "Epsilon used for the default mesh")->capture_default_str();
  np->add_option("--rho", net.rho, "Net mesh");
  np->add_option("--stop-streak", net.stop_streak, "Fixed stop streak (0: adaptive rule)");
  add_seed_workers(np, net.c);
  add_smoothing(np, net.c);
  np->add_option("--out", net.c.out, "Output directory for net.json");

  MeasureArgs measure;
  auto* mp = app.add_subcommand("measure", "Estimate cap masses on the smoothed body");
  add_body(mp, measure.c);
  mp->add_option("--eps", measure.eps_list, "Cap parameters")->capture_default_str();
  mp->add_option("--apexes", measure.apexes, "Random cap apexes")->capture_default_str();
  mp->add_option("--samples", measure.samples, "Samples of the boundary measure")->capture_default_str();
  add_seed_workers(mp, measure.c);
  add_smoothing(mp, measure.c);
  mp->add_option("--out", measure.c.out, "Output directory for measure.csv and scaling.csv");

  SweepArgs sw;
  auto* sp = app.add_subcommand("sweep", "Vertex counts over epsilon and the log-log slope");
  sp->add_option("--body", sw.bodies, "Body spec JSON files")->required()->check(CLI::ExistingFile);
  sp->add_option("--eps", sw.eps_list, "Epsilon values (>= 3)")->capture_default_str();
  sp->add_option("--trials", sw.trials, "Trials per (body, eps)")->capture_default_str();
  sp->add_option("--dirs", sw.c.dirs, "Random certification directions")->capture_default_str();
  add_seed_workers(sp, sw.c);
  add_smoothing(sp, sw.c);
  sp->add_option("--out", sw.c.out, "Output directory for sweep.csv and slopes.json");

  SantaloArgs santalo;
  auto* tp = app.add_subcommand("santalo", "Monte Carlo vol(K) vol(K polar)");
  add_body(tp, santalo.c);
  tp->add_option("--samples", santalo.samples, "Samples per volume")->capture_default_str();
  tp->add_flag("--recenter", santalo.recenter, "Translate to the estimated center of mass first");
  add_seed_workers(tp, santalo.c);
  tp->add_option("--out", santalo.c.out, "Output directory for santalo.json");

  Common stdz;
  auto* zp = app.add_subcommand("standardize", "Standard position map and check radii");
  add_body(zp, stdz);
  add_seed_workers(zp, stdz);
  zp->add_option("--out", stdz.out, "Output directory for standardize.json");

  PlotArgs plot;
  auto* pp = app.add_subcommand("plot", "SVG of a planar result");
  pp->add_option("--result", plot.result, "result.json")->required()->check(CLI::ExistingFile);
  pp->add_option("--body", plot.c.body, "Body spec (default: the one in the result)")->check(CLI::ExistingFile);
  pp->add_option("--svg", plot.svg, "File name")->capture_default_str();
  pp->add_option("--out", plot.c.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*ap) return run_approximate(approx);
    if (*vp) return run_verify(verify);
    if (*np) return run_net(net);
    if (*mp) return run_measure(measure);
    if (*sp) return run_sweep(sw);
    if (*tp) return run_santalo(santalo);
    if (*zp) return run_standardize(stdz);
    if (*pp) return run_plot(plot);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitStage;
  }
  return kExitConfig;
}
