#include "rsa/line_deposit.hpp"

#include "rsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsa {

namespace {

constexpr double kEmpty = std::numeric_limits<double>::quiet_NaN();

}  // namespace

LineDeposit::LineDeposit(const Schedule& schedule, double box_length)
    : schedule_(schedule), box_(box_length) {
  if (!(box_length > 0.0)) throw std::invalid_argument("line deposit: box length must be positive");
  const auto slots = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(box_ / schedule_.final_size)));
  slot_width_ = box_ / static_cast<double>(slots);
  slots_.assign(static_cast<std::size_t>(slots), kEmpty);
}

std::int64_t LineDeposit::slot_of(double position) const {
  const auto n = static_cast<std::int64_t>(slots_.size());
  return std::min(n - 1, static_cast<std::int64_t>(position / slot_width_));
}

AttemptResult LineDeposit::attempt(double position, double t) {
  if (!(position >= 0.0 && position < box_)) throw std::domain_error("line deposit: position outside box");
  if (t < time_) throw std::invalid_argument("line deposit: attempt time precedes current time");
  time_ = t;

  const double length = size(schedule_, t);
  const auto n = static_cast<std::int64_t>(slots_.size());
  const std::int64_t reach = static_cast<std::int64_t>(std::ceil(length / slot_width_));
  const std::int64_t home = slot_of(position);
  const std::int64_t span = std::min(2 * reach + 1, n);

  for (std::int64_t k = 0; k < span; ++k) {
    std::int64_t s = (home - reach + k) % n;
    if (s < 0) s += n;
    const double other = slots_[static_cast<std::size_t>(s)];
    if (std::isnan(other)) continue;
    double d = std::abs(position - other);
    d = std::min(d, box_ - d);
    if (d < length) return AttemptResult::Rejected;
  }

  slots_[static_cast<std::size_t>(home)] = position;
  ++count_;
  return AttemptResult::Accepted;
}

void LineDeposit::advance_to(double t) {
  if (t < time_) throw std::invalid_argument("line deposit: cannot move back in time");
  time_ = t;
}

std::vector<double> LineDeposit::centers() const {
  std::vector<double> out;
  out.reserve(count_);
  for (double c : slots_)
    if (!std::isnan(c)) out.push_back(c);
  return out;
}

double LineDeposit::min_spacing() const {
  const auto c = centers();
  if (c.size() < 2) return std::numeric_limits<double>::infinity();
  double best = c.front() + box_ - c.back();
  for (std::size_t i = 1; i < c.size(); ++i) best = std::min(best, c[i] - c[i - 1]);
  return best;
}

std::vector<LineDeposit> run_line(const Schedule& schedule, double box_length, std::uint64_t seed,
                                  std::span<const double> snapshot_times) {
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("run_line: snapshot times must be ascending");

  LineDeposit deposit(schedule, box_length);
  Rng rng(seed);
  const double attempts_per_time = schedule.flux * box_length;
  std::int64_t done = 0;

  std::vector<LineDeposit> snapshots;
  snapshots.reserve(snapshot_times.size());
  for (double t : snapshot_times) {
    const auto target = std::llround(attempts_per_time * t);
    while (done < target) {
      ++done;
      const double t_k = (static_cast<double>(done) - 0.5) / attempts_per_time;
      deposit.attempt(box_length * rng.uniform(), t_k);
    }
    deposit.advance_to(t);
    snapshots.push_back(deposit);
  }
  return snapshots;
}

DistributionHistogram gap_histogram(const LineDeposit& deposit, double bin_width, double x_max) {
  if (!(bin_width > 0.0)) throw std::domain_error("gap_histogram: bin width must be positive");
  if (!(x_max > 0.0)) throw std::domain_error("gap_histogram: x_max must be positive");

  const auto bins = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(x_max / bin_width)));
  DistributionHistogram h(HistogramKind::GapDensity, bin_width, bins, deposit.current_time());
  const double box = deposit.box_length();
  h.normalization = {box, 1, static_cast<double>(deposit.count()) / box};

  const auto c = deposit.centers();
  if (c.size() < 2) return h;

  const double length = deposit.segment_length();
  const double unit = 1.0 / (box * bin_width);
  auto add_gap = [&](double spacing) {
    const double gap = std::max(0.0, spacing - length);
    const auto b = static_cast<Eigen::Index>(gap / bin_width);
    if (b < bins)
      h.values[b] += unit;
    else
      h.overflow += 1.0 / box;
  };
  for (std::size_t i = 1; i < c.size(); ++i) add_gap(c[i] - c[i - 1]);
  add_gap(c.front() + box - c.back());
  return h;
}

DistributionHistogram gap_histogram(const LineDeposit& deposit, double bin_width) {
  return gap_histogram(deposit, bin_width, 20.0 * deposit.schedule().final_size);
}

double density(const LineDeposit& deposit) {
  return static_cast<double>(deposit.count()) / deposit.box_length();
}

}  // namespace rsa
