#include "rsa/ensemble.hpp"

#include "rsa/line_deposit.hpp"
#include "rsa/parallel.hpp"
#include "rsa/plane_deposit.hpp"
#include "rsa/rng.hpp"

#include <cmath>

namespace rsa {

namespace {

struct ReplicaOutput {
  std::vector<DistributionHistogram> histograms;
  std::vector<double> density;
};

template <typename Produce>
EnsembleResult reduce(std::size_t replicas, std::size_t snapshots, unsigned threads, Produce produce) {
  std::vector<ReplicaAccumulator> acc(snapshots);
  std::vector<double> sum(snapshots, 0.0);
  std::vector<double> sum_sq(snapshots, 0.0);
  for_each_replica(replicas, threads, produce, [&](std::size_t, ReplicaOutput out) {
    for (std::size_t s = 0; s < snapshots; ++s) {
      acc[s].add(out.histograms[s]);
      sum[s] += out.density[s];
      sum_sq[s] += out.density[s] * out.density[s];
    }
  });

  EnsembleResult result;
  const auto n = static_cast<double>(replicas);
  for (std::size_t s = 0; s < snapshots; ++s) {
    result.histograms.push_back(acc[s].result());
    const double mean = sum[s] / n;
    result.density.push_back(mean);
    const double var = replicas > 1 ? std::max(0.0, (sum_sq[s] - n * mean * mean) / (n - 1.0)) : 0.0;
    result.density_error.push_back(std::sqrt(var / n));
  }
  return result;
}

}  // namespace

EnsembleResult line_ensemble(const Schedule& schedule, double box_length, std::size_t replicas,
                             std::uint64_t master_seed, std::span<const double> times, double bin_width,
                             double x_max, unsigned threads) {
  return reduce(replicas, times.size(), threads, [&](std::size_t i) {
    ReplicaOutput out;
    for (const auto& snap : run_line(schedule, box_length, replica_seed(master_seed, i), times)) {
      out.histograms.push_back(gap_histogram(snap, bin_width, x_max));
      out.density.push_back(density(snap));
    }
    return out;
  });
}

EnsembleResult plane_ensemble(const Schedule& schedule, double box_side, std::size_t replicas,
                              std::uint64_t master_seed, std::span<const double> times, double r_max, double dr,
                              unsigned threads) {
  return reduce(replicas, times.size(), threads, [&](std::size_t i) {
    ReplicaOutput out;
    for (const auto& snap : run_plane(schedule, box_side, replica_seed(master_seed, i), times)) {
      out.histograms.push_back(pair_correlation(snap, r_max, dr));
      out.density.push_back(coverage(snap));
    }
    return out;
  });
}

}  // namespace rsa
