#pragma once

// Vertex-count sweeps over epsilon, the log-log slope fit, and Santaló
// products.

#include "polyfine/pipeline.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace polyfine {

struct SweepBody {
  std::string name;
  BodySpec spec;
};

struct SweepRow {
  std::string body;
  int dim = 0;
  double eps = 0.0;
  int trial = 0;
  std::size_t n_vertices = 0;
  std::size_t net_size = 0;
  double eps_achieved = 0.0;
  double wall_time = 0.0;
  std::string status;  // "ok", "miss" or the error text
};

struct SlopeFit {
  std::string body;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> eps;          // ascending
  std::vector<double> mean_vertices;
  bool monotone = false;            // mean count nonincreasing in eps
};

// Trial t of every (body, eps) uses seed template.seed + t. Failures are
// recorded in the row and the sweep continues.
std::vector<SweepRow> sweep(const PipelineConfig& config_template, const std::vector<double>& eps_list,
                            const std::vector<SweepBody>& bodies, int trials,
                            const std::function<void(const SweepRow&)>& on_row = {});

// Least-squares slope of log(mean n_vertices) against log(1/eps), per body,
// over the successful rows.
std::vector<SlopeFit> fit_slopes(const std::vector<SweepRow>& rows);

double regression_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct SantaloResult {
  Estimate volume;
  Estimate polar_volume;
  double product = 0.0;
  double product_std_error = 0.0;
};

// Monte Carlo vol(K) vol(K°) with n samples each; origin must be interior.
SantaloResult santalo_product(const BodyPtr& body, std::size_t n, Rng& rng);

}  // namespace polyfine
