#include "polyfine/sweep.hpp"

#include "polyfine/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace polyfine {

std::vector<SweepRow> sweep(const PipelineConfig& tmpl, const std::vector<double>& eps_list,
                            const std::vector<SweepBody>& bodies, int trials,
                            const std::function<void(const SweepRow&)>& on_row) {
  if (eps_list.size() < 3) throw Error(ErrorCode::kInvalidArgument, "a sweep needs at least 3 eps values");
  std::vector<SweepRow> rows;
  for (const auto& b : bodies) {
    for (double eps : eps_list) {
      for (int t = 0; t < trials; ++t) {
        PipelineConfig cfg = tmpl;
        cfg.body = b.spec;
        cfg.eps = eps;
        cfg.seed = tmpl.seed + static_cast<std::uint64_t>(t);
        SweepRow row;
        row.body = b.name;
        row.dim = b.spec.dim();
        row.eps = eps;
        row.trial = t;
        const auto start = std::chrono::steady_clock::now();
        try {
          const ApproxResult r = approximate(cfg);
          row.n_vertices = r.vertices.size();
          row.net_size = r.net_size;
          row.eps_achieved = r.eps_achieved;
          row.status = r.success ? "ok" : "miss";
        } catch (const std::exception& e) {
          row.status = e.what();
        }
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

std::vector<SlopeFit> fit_slopes(const std::vector<SweepRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::map<double, std::pair<double, int>>> acc;
  for (const auto& r : rows) {
    if (!acc.count(r.body)) order.push_back(r.body);
    auto& cell = acc[r.body][r.eps];
    if (r.status == "ok") {
      cell.first += static_cast<double>(r.n_vertices);
      cell.second += 1;
    }
  }
  std::vector<SlopeFit> fits;
  for (const auto& name : order) {
    SlopeFit f;
    f.body = name;
    std::vector<double> x, y;
    for (const auto& [eps, cell] : acc[name]) {
      if (cell.second == 0) continue;
      const double mean = cell.first / cell.second;
      f.eps.push_back(eps);
      f.mean_vertices.push_back(mean);
      x.push_back(std::log(1.0 / eps));
      y.push_back(std::log(mean));
    }
    f.monotone = true;
    for (std::size_t i = 1; i < f.mean_vertices.size(); ++i)
      f.monotone = f.monotone && f.mean_vertices[i] <= f.mean_vertices[i - 1];
    f.slope = x.size() >= 2 ? regression_slope(x, y, &f.intercept) : std::nan("");
    fits.push_back(std::move(f));
  }
  return fits;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "body,d,eps,trial,n_vertices,net_size,eps_achieved,wall_time,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.body << ',' << r.dim << ',' << r.eps << ',' << r.trial << ',' << r.n_vertices << ',' << r.net_size
        << ',' << r.eps_achieved << ',' << r.wall_time << ',' << status << '\n';
  }
}

SantaloResult santalo_product(const BodyPtr& body, std::size_t n, Rng& rng) {
  SantaloResult out;
  Rng a = rng.stream(1);
  Rng b = rng.stream(2);
  out.volume = mc_volume(*body, n, a);
  out.polar_volume = mc_volume(*polar(body), n, b);
  out.product = out.volume.value * out.polar_volume.value;
  const double rel = std::hypot(out.volume.std_error / out.volume.value,
                                out.polar_volume.std_error / out.polar_volume.value);
  out.product_std_error = out.product * rel;
  return out;
}

}  // namespace polyfine
