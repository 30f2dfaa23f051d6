#include "rsa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rsa {

namespace {

struct Vertex {
  double x;
  double y;
};

// Vertex of the parabola through three points; the middle point when the
// parabola is not concave or its vertex falls outside [x0, x2].
Vertex parabola_max(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (!(a < 0.0)) return {x1, y1};
  const double b = d01 - a * (x0 + x1);
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return {x1, y1};
  // Newton form p(x) = y0 + d01 (x - x0) + a (x - x0)(x - x1).
  return {xv, y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1)};
}

}  // namespace

Peak find_peak(std::span<const double> x, std::span<const double> y, std::span<const double> errors) {
  const std::size_t n = x.size();
  if (n < 5 || y.size() != n) throw std::invalid_argument("find_peak: need at least 5 (x, y) points");
  if (!errors.empty() && errors.size() != n) throw std::invalid_argument("find_peak: error size mismatch");
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) throw NoPeak("find_peak: all-zero curve");

  std::size_t best = 1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double smoothed = (y[i - 1] + y[i] + y[i + 1]) / 3.0;
    if (smoothed > best_value) {
      best_value = smoothed;
      best = i;
    }
  }

  auto vertex = [&](double ym, double y0, double yp) {
    return parabola_max(x[best - 1], ym, x[best], y0, x[best + 1], yp);
  };
  const Vertex v = vertex(y[best - 1], y[best], y[best + 1]);

  Peak peak{v.x, v.y, 0.0, best == 1 || best == n - 2};
  if (!errors.empty()) {
    // Linear propagation with numerically differentiated sensitivities.
    double var = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t i = best - 1 + k;
      const double h = std::max(1e-8, 1e-6 * std::abs(y[i]));
      double ys[3] = {y[best - 1], y[best], y[best + 1]};
      ys[k] += h;
      const double dy = (vertex(ys[0], ys[1], ys[2]).y - v.y) / h;
      var += dy * dy * errors[i] * errors[i];
    }
    peak.error = std::sqrt(var);
  }
  return peak;
}

std::string_view to_string(PeakSource source) {
  switch (source) {
    case PeakSource::Sim1D: return "sim1d";
    case PeakSource::Sim2D: return "sim2d";
    case PeakSource::Kinetics: return "kinetics";
    case PeakSource::Exact: return "exact";
  }
  return "sim1d";
}

PeakSource peak_source_from_string(std::string_view name) {
  if (name == "sim1d") return PeakSource::Sim1D;
  if (name == "sim2d") return PeakSource::Sim2D;
  if (name == "kinetics") return PeakSource::Kinetics;
  if (name == "exact") return PeakSource::Exact;
  throw std::invalid_argument("unknown peak source: " + std::string(name));
}

void PeakSeries::add(double t_over_tau, double value, double error) {
  if (!points.empty() && !(t_over_tau > points.back().t_over_tau))
    throw std::invalid_argument("peak series: times must increase strictly");
  if (error < 0.0) throw std::invalid_argument("peak series: negative error");
  points.push_back({t_over_tau, value, error});
}

LogFit log_fit(const PeakSeries& series, double t_min) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : series.points) {
    if (p.t_over_tau >= t_min) {
      xs.push_back(std::log(p.t_over_tau));
      ys.push_back(p.value);
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) throw FitError("log_fit: need at least 3 points with t >= t_min");

  const double nd = static_cast<double>(n);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nd;
  my /= nd;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("log_fit: degenerate time points");

  LogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.slope_error = std::sqrt(ssr / (nd - 2.0) / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.t_min = t_min;
  fit.n_points = n;
  fit.source = series.source;
  return fit;
}

}  // namespace rsa
