#pragma once

#include "rsa/histogram.hpp"
#include "rsa/schedule.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rsa {

enum class AttemptResult { Accepted, Rejected };

/// Segment centers on the periodic interval [0, L). Centers live in a
/// uniform array of slots of width <= final_size, so each slot holds at
/// most one center and slot order is position order.
class LineDeposit {
 public:
  LineDeposit(const Schedule& schedule, double box_length);

  /// Deposit a segment centered at `position` at time t if both circular
  /// neighbors are at least l(t) away. Contact (== l(t)) is accepted.
  AttemptResult attempt(double position, double t);

  /// Let time pass without attempts (segments keep shrinking).
  void advance_to(double t);

  double box_length() const { return box_; }
  double current_time() const { return time_; }
  double segment_length() const { return size(schedule_, time_); }
  std::size_t count() const { return count_; }
  const Schedule& schedule() const { return schedule_; }

  /// Centers in increasing order.
  std::vector<double> centers() const;

  /// Smallest circular spacing between adjacent centers (full scan);
  /// +inf with fewer than two centers.
  double min_spacing() const;

 private:
  std::int64_t slot_of(double position) const;

  Schedule schedule_;
  double box_;
  double slot_width_;
  double time_ = 0.0;
  std::size_t count_ = 0;
  std::vector<double> slots_;  // NaN marks an empty slot
};

/// Run one replica from an empty line. Attempt k (k = 1, 2, ...) happens at
/// t_k = (k - 1/2) / (R L), so exactly round(R L t) attempts precede time t.
/// Returns one deposit copy per snapshot time (ascending).
std::vector<LineDeposit> run_line(const Schedule& schedule, double box_length, std::uint64_t seed,
                                  std::span<const double> snapshot_times);

/// Gap histogram on [0, x_max); gaps are center spacing minus l(t).
/// Values are densities per unit length per unit gap length.
DistributionHistogram gap_histogram(const LineDeposit& deposit, double bin_width, double x_max);
DistributionHistogram gap_histogram(const LineDeposit& deposit, double bin_width);

/// Segments per unit length.
double density(const LineDeposit& deposit);

}  // namespace rsa
