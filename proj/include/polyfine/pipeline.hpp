#pragma once

// End-to-end approximation: standard position, smoothing, net, caps, random
// transversal, map back, certification.

#include "polyfine/body_spec.hpp"
#include "polyfine/capmeasure.hpp"
#include "polyfine/cover.hpp"
#include "polyfine/position.hpp"
#include "polyfine/smooth.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyfine {

enum class ThetaMode { kEstimated, kAdaptive, kFixed };

// How the net mesh is chosen. kPractical uses rho = coefficient * sqrt(eps')
// and halves the coefficient after a certification miss; kTheory uses the
// closed-form mesh, which is far too fine for d >= 3 at desk scale.
enum class RhoMode { kPractical, kTheory, kFixed };

struct PipelineConfig {
  BodySpec body;
  double eps = 0.1;
  std::uint64_t seed = 42;
  std::optional<double> delta_override;
  std::optional<double> rolling_radius;
  std::size_t n_dirs_verify = 10'000;
  SamplerOptions sampler;
  ThetaMode theta_mode = ThetaMode::kEstimated;
  double theta_value = 0.0;
  double theta_safety = 0.5;
  std::size_t theta_samples = 100'000;
  RhoMode rho_mode = RhoMode::kPractical;
  double rho_coefficient = 0.25;
  double rho_value = 0.0;
  // Net stop rule: a fixed streak when nonzero, else streak_factor N + 1000.
  // Holes found by the covering check are then inserted, for up to
  // repair_rounds rounds of 100 N probes.
  std::size_t stop_streak = 0;
  double streak_factor = 2.0;
  int repair_rounds = 2;
  std::size_t com_samples = 100'000;
  int workers = 1;
  int max_retries = 3;

  // Throws invalid-argument.
  void validate() const;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct ApproxResult {
  bool success = false;
  PointList vertices;  // original coordinates
  double eps_target = 0.0;
  double eps_achieved = 0.0;
  double eps_inner = 0.0;  // target on the smoothed body
  double cap_eps = 0.0;    // cap parameter on the smoothed body

  std::size_t net_size = 0;
  std::size_t net_candidates = 0;
  std::size_t net_repaired = 0;  // points inserted from covering-check holes
  double coverage_radius = 0.0;
  double rho = 0.0;
  double rho_theory = 0.0;
  RhoMode rho_mode = RhoMode::kPractical;
  double rho_coefficient = 0.0;
  double delta = 0.0;
  double R = 0.0;

  ThetaMode theta_mode = ThetaMode::kEstimated;
  double theta_used = 0.0;
  std::size_t theta_samples = 0;
  std::size_t sampled_count = 0;
  std::size_t patched_count = 0;
  std::size_t samples_used = 0;
  std::size_t attempts = 0;

  Vec center;
  Vec center_std_error;
  Mat std_matrix;  // standardized = std_matrix (x - center)
  double inner_radius_check = 0.0;
  double outer_radius_check = 0.0;

  Certificate certificate;
  bool caps_covered = false;
  std::size_t cap_misses = 0;

  std::vector<StageTiming> timings;
};

// The stages before the net: the body, its center of mass, the standardized
// body and its smoothing.
struct Prepared {
  BodyPtr body;
  BodyPtr centered;  // body - center
  CenterEstimate center;
  StandardizedBody standard;
  SmoothParams params;
  std::shared_ptr<const SmoothedBody> smoothed;
};

Prepared prepare(const PipelineConfig& config, std::vector<StageTiming>& timings);

// Throws Error (message prefixed with the stage name) when a stage fails. A
// certification miss is returned with success = false.
ApproxResult approximate(const PipelineConfig& config);

// Picks boundary points at uniform random normals until the achieved epsilon
// drops to eps. The body must contain the origin in its interior.
ApproxResult baseline_sphere_sampling(const ConvexBody& body, double eps, Rng& rng,
                                      std::size_t n_dirs = 10'000, std::size_t cap = 1'000'000);

// Result document without timings (byte-identical across identical runs).
nlohmann::json result_to_json(const ApproxResult& result, const PipelineConfig& config);
nlohmann::json timings_to_json(const ApproxResult& result);
nlohmann::json certificate_to_json(const Certificate& cert);

std::string to_string(ThetaMode mode);
std::string to_string(RhoMode mode);

}  // namespace polyfine
