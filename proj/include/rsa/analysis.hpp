#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rsa {

class NoPeak : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Peak {
  double x = 0.0;
  double y = 0.0;
  double error = 0.0;
  bool boundary = false;  // maximum at the first or last interior bin
};

/// Smooth with a centered 3-point moving average, take the largest interior
/// smoothed bin, then the vertex of the parabola through the raw values of
/// that bin and its neighbors. `errors` (optional, per point) are propagated
/// linearly to the peak value.
Peak find_peak(std::span<const double> x, std::span<const double> y, std::span<const double> errors = {});

enum class PeakSource { Sim1D, Sim2D, Kinetics, Exact };

std::string_view to_string(PeakSource source);
PeakSource peak_source_from_string(std::string_view name);

struct PeakPoint {
  double t_over_tau = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct PeakSeries {
  PeakSource source = PeakSource::Sim1D;
  std::vector<PeakPoint> points;

  /// Appends a point; times must increase strictly, errors be non-negative.
  void add(double t_over_tau, double value, double error);
};

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;  // from the residual variance
  double r_squared = 0.0;
  double t_min = 0.0;
  std::size_t n_points = 0;
  PeakSource source = PeakSource::Sim1D;
  // Residual-based errors on a handful of points of a slowly drifting
  // logarithmic fit say little about the asymptotic slope.
  bool low_reliability = true;
};

/// Unweighted least squares of peak value against ln(t / tau) over the
/// points with t / tau >= t_min.
LogFit log_fit(const PeakSeries& series, double t_min);

}  // namespace rsa
