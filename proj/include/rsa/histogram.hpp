#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string_view>

namespace rsa {

enum class HistogramKind { GapDensity, PairCorrelation };

std::string_view to_string(HistogramKind kind);

struct Normalization {
  double measure = 0.0;   // box length (1D) or area (2D), per replica
  std::size_t replicas = 1;
  double density = 0.0;   // mean particle count per unit measure
};

/// Binned estimate on [0, bins * bin_width). For gap densities the values
/// integrate to the gap density n(t), with gaps beyond the last bin kept in
/// `overflow` (already multiplied by bin width, i.e. a density).
struct DistributionHistogram {
  HistogramKind kind = HistogramKind::GapDensity;
  double bin_width = 0.0;
  double snapshot_time = 0.0;
  Eigen::ArrayXd values;
  Eigen::ArrayXd std_error;
  double overflow = 0.0;
  Normalization normalization;

  DistributionHistogram() = default;
  DistributionHistogram(HistogramKind k, double width, Eigen::Index bins, double t);

  Eigen::Index bins() const { return values.size(); }
  double bin_center(Eigen::Index i) const { return (static_cast<double>(i) + 0.5) * bin_width; }
  double upper_edge() const { return static_cast<double>(bins()) * bin_width; }

  /// sum(values) * bin_width + overflow; equals n(t) for GapDensity.
  double total_mass() const;
  /// sum(x * values) * bin_width using bin centers.
  double first_moment() const;
};

/// Streaming per-bin mean and standard error over replicas (Welford).
/// Histograms must share kind, binning and snapshot time.
class ReplicaAccumulator {
 public:
  void add(const DistributionHistogram& h);
  std::size_t count() const { return count_; }
  DistributionHistogram result() const;

 private:
  DistributionHistogram shape_;
  Eigen::ArrayXd mean_;
  Eigen::ArrayXd m2_;
  double overflow_ = 0.0;
  double density_ = 0.0;
  std::size_t replicas_ = 0;
  std::size_t count_ = 0;
};

/// Per-bin mean and standard error of the mean over replicas.
DistributionHistogram replica_average(std::span<const DistributionHistogram> histograms);

}  // namespace rsa
