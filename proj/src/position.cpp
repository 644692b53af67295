#include "polyfine/position.hpp"

#include "polyfine/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polyfine {

namespace {
constexpr double kInradiusSafety = 0.95;
}  // namespace

CenterEstimate center_of_mass(const ConvexBody& body, std::size_t n_samples, Rng& rng, int workers) {
  if (n_samples < 1000) throw Error(ErrorCode::kInvalidArgument, "center_of_mass needs >= 1000 samples");
  const int d = body.dim();
  const std::size_t chunk = 4096;
  const std::size_t chunks = (n_samples + chunk - 1) / chunk;
  std::vector<Vec> sums(chunks, zeros(d));
  std::vector<Vec> squares(chunks, zeros(d));
  const Rng base = rng.stream(0x63656e);
  parallel_blocks(chunks, workers, [&](int, std::size_t begin, std::size_t end) {
    UniformSampler sampler(body);
    for (std::size_t c = begin; c < end; ++c) {
      Rng r = base.stream(c);
      const std::size_t stop = std::min(n_samples, (c + 1) * chunk);
      for (std::size_t i = c * chunk; i < stop; ++i) {
        const Vec x = sampler.draw(r);
        sums[c] += x;
        squares[c] += x.cwiseProduct(x);
      }
    }
  });
  Vec sum = zeros(d);
  Vec sq = zeros(d);
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sq += squares[c];
  }
  const double n = static_cast<double>(n_samples);
  CenterEstimate out;
  out.mean = sum / n;
  const Vec var = (sq / n - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0);
  out.std_error = (var / n).cwiseSqrt();
  return out;
}

Mat mvee(const PointList& points, double tol) {
  if (points.empty()) throw Error(ErrorCode::kRankDeficient, "no points");
  const int d = static_cast<int>(points.front().size());
  const std::size_t n = points.size();
  Eigen::MatrixXd p(d, n);
  for (std::size_t i = 0; i < n; ++i) p.col(static_cast<Eigen::Index>(i)) = points[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
  const auto& sv = svd.singularValues();
  if (sv.size() < d || sv(d - 1) <= 1e-12 * sv(0)) throw Error(ErrorCode::kRankDeficient, "points do not span R^d");

  Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  Eigen::VectorXd kappa(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd xinv;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::MatrixXd x = p * u.asDiagonal() * p.transpose();
    xinv = x.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    kappa = (p.transpose() * xinv).cwiseProduct(p.transpose()).rowwise().sum();
    Eigen::Index j = 0;
    const double kmax = kappa.maxCoeff(&j);
    if (kmax <= d * (1.0 + tol)) break;
    const double step = (kmax - d) / (d * (kmax - 1.0));
    u *= (1.0 - step);
    u(j) += step;
  }
  // Scale so every point is inside.
  const Mat q = xinv / kappa.maxCoeff();
  return q;
}

Vec StandardizedBody::from_standard(const Vec& y) const {
  return matrix.partialPivLu().solve(y) + translation;
}

StandardizedBody standardize(BodyPtr body, Rng& rng, StandardizeOptions options) {
  const int d = body->dim();
  const std::size_t n = options.n_boundary_samples > 0 ? options.n_boundary_samples
                                                       : static_cast<std::size_t>(200 * d * d);
  Rng dirs = rng.stream(0x6c);
  PointList pts;
  pts.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec u = dirs.unit_vector(d);
    const double r = std::min(body->radial(u), body->radial(-u));
    pts.push_back(r * u);
    pts.push_back(-r * u);
  }
  const Mat q = mvee(pts, options.mvee_tol);
  Eigen::SelfAdjointEigenSolver<Mat> eig(q);
  const Mat w = eig.operatorSqrt();

  // The ellipsoid contains L; scale up until the ball sits inside.
  double rmin = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) rmin = std::min(rmin, (w * p).norm());
  Mat t = w / rmin;

  auto image = std::make_shared<AffineImage>(body, t, zeros(d));
  Rng check = rng.stream(0x76);
  double inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.n_verify; ++i) inner = std::min(inner, image->radial(check.unit_vector(d)));
  if (inner < 1.0) {
    // Rescale to the measured inner radius.
    t /= inner;
    image = std::make_shared<AffineImage>(body, t, zeros(d));
    inner = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.n_verify; ++i) inner = std::min(inner, image->radial(check.unit_vector(d)));
  }
  // Sampled directions overestimate the true minimum radial slightly.
  image = std::make_shared<AffineImage>(body, t, zeros(d), kInradiusSafety * inner);
  const double outer = image->bounding_radius();

  StandardizedBody out{image, t, zeros(d), inner, outer};
  spdlog::debug("standardize: inner {:.6f} outer {:.6f}", inner, outer);
  if (inner < 1.0 - options.slack || outer > static_cast<double>(d * d)) {
    throw Error(ErrorCode::kStandardizationFailed,
                "inner radius " + std::to_string(inner) + ", outer radius " + std::to_string(outer));
  }
  return out;
}

}  // namespace polyfine
