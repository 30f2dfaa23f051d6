#pragma once

#include "rsa/histogram.hpp"
#include "rsa/schedule.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rsa {

/// Replica-averaged measurements at each snapshot time. Densities are
/// n(t) in 1D and the area fraction in 2D.
struct EnsembleResult {
  std::vector<DistributionHistogram> histograms;
  std::vector<double> density;
  std::vector<double> density_error;
};

/// Replica i uses seed replica_seed(master_seed, i). All lengths and times
/// are physical.
EnsembleResult line_ensemble(const Schedule& schedule, double box_length, std::size_t replicas,
                             std::uint64_t master_seed, std::span<const double> times, double bin_width,
                             double x_max, unsigned threads = 1);

EnsembleResult plane_ensemble(const Schedule& schedule, double box_side, std::size_t replicas,
                              std::uint64_t master_seed, std::span<const double> times, double r_max, double dr,
                              unsigned threads = 1);

}  // namespace rsa
