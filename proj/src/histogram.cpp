#include "rsa/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace rsa {

std::string_view to_string(HistogramKind kind) {
  return kind == HistogramKind::GapDensity ? "gap_density" : "pair_correlation";
}

DistributionHistogram::DistributionHistogram(HistogramKind k, double width, Eigen::Index bins, double t)
    : kind(k), bin_width(width), snapshot_time(t),
      values(Eigen::ArrayXd::Zero(bins)), std_error(Eigen::ArrayXd::Zero(bins)) {
  if (!(width > 0.0)) throw std::domain_error("histogram: bin width must be positive");
}

double DistributionHistogram::total_mass() const { return values.sum() * bin_width + overflow; }

double DistributionHistogram::first_moment() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < bins(); ++i) m += bin_center(i) * values[i];
  return m * bin_width;
}

void ReplicaAccumulator::add(const DistributionHistogram& h) {
  if (count_ == 0) {
    shape_ = DistributionHistogram(h.kind, h.bin_width, h.bins(), h.snapshot_time);
    shape_.normalization.measure = h.normalization.measure;
    mean_ = Eigen::ArrayXd::Zero(h.bins());
    m2_ = Eigen::ArrayXd::Zero(h.bins());
  } else if (h.kind != shape_.kind || h.bins() != shape_.bins() || h.bin_width != shape_.bin_width ||
             h.snapshot_time != shape_.snapshot_time) {
    throw std::invalid_argument("replica_average: histogram schema mismatch");
  }
  ++count_;
  const Eigen::ArrayXd delta = h.values - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (h.values - mean_);
  overflow_ += h.overflow;
  density_ += h.normalization.density;
  replicas_ += h.normalization.replicas;
}

DistributionHistogram ReplicaAccumulator::result() const {
  if (count_ == 0) throw std::invalid_argument("replica_average: no histograms");
  const auto n = static_cast<double>(count_);
  DistributionHistogram out = shape_;
  out.values = mean_;
  if (count_ > 1) out.std_error = (m2_.max(0.0) / (n - 1.0)).sqrt() / std::sqrt(n);
  out.overflow = overflow_ / n;
  out.normalization.replicas = replicas_;
  out.normalization.density = density_ / n;
  return out;
}

DistributionHistogram replica_average(std::span<const DistributionHistogram> histograms) {
  ReplicaAccumulator acc;
  for (const auto& h : histograms) acc.add(h);
  return acc.result();
}

}  // namespace rsa
