#include "polyfine/capmeasure.hpp"

#include "polyfine/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyfine {

namespace {

constexpr std::size_t kMaxRejections = 10'000'000;  // acceptance floor 1e-7 per draw

}  // namespace

Cap Cap::make(BoundaryPoint apex, double eps) {
  Cap c;
  c.threshold = (1.0 - eps) * apex.x.dot(apex.nu);
  c.eps = eps;
  c.apex = std::move(apex);
  return c;
}

UniformSampler::UniformSampler(const ConvexBody& body, SamplerOptions options)
    : body_(body), options_(options) {
  const int d = body.dim();
  rejection_ = options_.method == SamplerMethod::kRejection ||
               (options_.method == SamplerMethod::kAuto && d <= 6);
  if (options_.burn_in <= 0) options_.burn_in = 50 * d;
  if (options_.thinning <= 0) options_.thinning = d;
  box_ = body.bounding_radius();
  if (!(box_ > 0.0) || !std::isfinite(box_))
    throw Error(ErrorCode::kSamplingFailure, "body has no finite bounding radius");
}

double UniformSampler::acceptance() const {
  return proposed_ == 0 ? 1.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

Vec UniformSampler::draw(Rng& rng) { return rejection_ ? draw_rejection(rng) : draw_hit_and_run(rng); }

Vec UniformSampler::draw_rejection(Rng& rng) {
  const int d = body_.dim();
  Vec x(d);
  for (std::size_t tries = 0; tries < kMaxRejections; ++tries) {
    for (int i = 0; i < d; ++i) x(i) = rng.uniform(-box_, box_);
    ++proposed_;
    if (body_.contains(x)) {
      ++accepted_;
      return x;
    }
  }
  throw Error(ErrorCode::kSamplingFailure,
              "rejection acceptance below 1e-6; the bounding box is too loose");
}

Vec UniformSampler::draw_hit_and_run(Rng& rng) {
  const int d = body_.dim();
  if (!warmed_) {
    state_ = zeros(d);
    if (!body_.contains(state_)) throw Error(ErrorCode::kSamplingFailure, "origin is not interior");
  }
  const int steps = warmed_ ? options_.thinning : options_.burn_in;
  for (int s = 0; s < steps; ++s) {
    const Vec v = rng.unit_vector(d);
    const double hi = body_.ray_exit(state_, v);
    const double lo = -body_.ray_exit(state_, -v);
    state_ += rng.uniform(lo, hi) * v;
  }
  warmed_ = true;
  return state_;
}

Vec uniform_in_body(const ConvexBody& body, Rng& rng, SamplerOptions options) {
  UniformSampler sampler(body, options);
  return sampler.draw(rng);
}

Vec radial_project(const ConvexBody& body, const Vec& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cannot project the origin");
  const Vec u = x / n;
  return body.radial(u) * u;
}

Vec star_map(const BoundaryPoint& bp) {
  const double h = bp.x.dot(bp.nu);
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidPosition, "<x, nu> must be positive");
  return bp.nu / h;
}

BoundaryPoint star_inverse(const ConvexBody& body, const Vec& y) {
  SupportResult s = body.support(y);
  return {std::move(s.point), y / y.norm()};
}

CapSampler::CapSampler(BodyPtr body, SamplerOptions options)
    : body_(std::move(body)), polar_(::polyfine::polar(body_)), options_(options) {}

Vec CapSampler::sample(Rng& rng) const {
  if (rng.coin()) return radial_project(*body_, uniform_in_body(*body_, rng, options_));
  // The support point of K in direction z is the same for every positive
  // multiple of z, so projecting onto the polar boundary first is redundant.
  const Vec z = uniform_in_body(*polar_, rng, options_);
  return body_->support(z).point;
}

PointList CapSampler::sample_many(std::size_t n, const Rng& rng, int workers) const {
  PointList out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_blocks(chunks, workers, [&](int, std::size_t begin, std::size_t end) {
    UniformSampler inner(*body_, options_);
    UniformSampler outer(*polar_, options_);
    for (std::size_t c = begin; c < end; ++c) {
      Rng r = rng.stream(c);
      const std::size_t stop = std::min(n, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < stop; ++i) {
        if (r.coin()) {
          out[i] = radial_project(*body_, inner.draw(r));
        } else {
          out[i] = body_->support(outer.draw(r)).point;
        }
      }
    }
  });
  return out;
}

Vec sample_mu(const CapSampler& sampler, Rng& rng) { return sampler.sample(rng); }

Estimate cap_fraction(const PointList& samples, const Cap& cap) {
  std::size_t hits = 0;
  for (const auto& y : samples) hits += cap.contains(y) ? 1 : 0;
  const double n = static_cast<double>(samples.size());
  const double p = n > 0 ? static_cast<double>(hits) / n : 0.0;
  return {p, n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0};
}

Estimate mu_cap_estimate(const CapSampler& sampler, const Cap& cap, std::size_t n, Rng& rng) {
  if (n < 1000) throw Error(ErrorCode::kInvalidArgument, "mu_cap_estimate needs n >= 1000");
  return cap_fraction(sampler.sample_many(n, rng), cap);
}

Estimate mc_volume(const ConvexBody& body, std::size_t n, Rng& rng) {
  if (n < 10'000) throw Error(ErrorCode::kInvalidArgument, "mc_volume needs n >= 10^4");
  const int d = body.dim();
  const double r = body.bounding_radius();
  const double box = std::pow(2.0 * r, d);
  std::size_t hits = 0;
  Vec x(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i) x(i) = rng.uniform(-r, r);
    hits += body.contains(x) ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace polyfine
