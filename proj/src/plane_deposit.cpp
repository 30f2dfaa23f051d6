#include "rsa/plane_deposit.hpp"

#include "rsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rsa {

namespace {

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Cells within `rings` of `cell` on an n x n periodic grid, without repeats.
std::vector<int> cells_around(int cell, int n, int rings) {
  std::vector<int> out;
  const int cx = cell % n;
  const int cy = cell / n;
  const int span = std::min(2 * rings + 1, n);
  out.reserve(static_cast<std::size_t>(span * span));
  for (int dy = 0; dy < span; ++dy)
    for (int dx = 0; dx < span; ++dx) out.push_back(wrap(cy - rings + dy, n) * n + wrap(cx - rings + dx, n));
  return out;
}

int grid_cell(const Point2& p, double side, int n) {
  const int ix = std::min(n - 1, static_cast<int>(p.x() / side));
  const int iy = std::min(n - 1, static_cast<int>(p.y() / side));
  return iy * n + ix;
}

}  // namespace

PlaneDeposit::PlaneDeposit(const Schedule& schedule, double box_side) : schedule_(schedule), box_(box_side) {
  if (!(box_side > 0.0)) throw std::invalid_argument("plane deposit: box side must be positive");
  const double largest = size(schedule_, 0.0);
  cells_per_side_ = std::max(1, static_cast<int>(std::floor(box_ / largest)));
  cell_side_ = box_ / cells_per_side_;
  cells_.resize(static_cast<std::size_t>(cells_per_side_) * cells_per_side_);
}

int PlaneDeposit::cell_of(const Point2& p) const { return grid_cell(p, cell_side_, cells_per_side_); }

std::vector<int> PlaneDeposit::neighborhood(int cell) const { return cells_around(cell, cells_per_side_, 1); }

bool PlaneDeposit::overlaps(const Point2& p, double diameter) const {
  const double d2 = diameter * diameter;
  for (int c : neighborhood(cell_of(p)))
    for (std::uint32_t i : cells_[static_cast<std::size_t>(c)])
      if (minimum_image(p, centers_[i], box_).squaredNorm() < d2) return true;
  return false;
}

bool PlaneDeposit::overlaps_brute(const Point2& p, double diameter) const {
  const double d2 = diameter * diameter;
  return std::any_of(centers_.begin(), centers_.end(),
                     [&](const Point2& c) { return minimum_image(p, c, box_).squaredNorm() < d2; });
}

AttemptResult PlaneDeposit::attempt(const Point2& position, double t) {
  if (!(position.x() >= 0.0 && position.x() < box_ && position.y() >= 0.0 && position.y() < box_))
    throw std::domain_error("plane deposit: position outside box");
  if (t < time_) throw std::invalid_argument("plane deposit: attempt time precedes current time");
  time_ = t;
  if (overlaps(position, size(schedule_, t))) return AttemptResult::Rejected;
  cells_[static_cast<std::size_t>(cell_of(position))].push_back(static_cast<std::uint32_t>(centers_.size()));
  centers_.push_back(position);
  return AttemptResult::Accepted;
}

void PlaneDeposit::advance_to(double t) {
  if (t < time_) throw std::invalid_argument("plane deposit: cannot move back in time");
  time_ = t;
}

bool PlaneDeposit::index_consistent() const {
  std::size_t indexed = 0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (std::uint32_t i : cells_[c])
      if (i >= centers_.size() || static_cast<std::size_t>(cell_of(centers_[i])) != c) return false;
    indexed += cells_[c].size();
  }
  return indexed == centers_.size();
}

double PlaneDeposit::min_pair_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers_.size(); ++i)
    for (std::size_t j = i + 1; j < centers_.size(); ++j)
      best = std::min(best, minimum_image(centers_[i], centers_[j], box_).norm());
  return best;
}

std::vector<PlaneDeposit> run_plane(const Schedule& schedule, double box_side, std::uint64_t seed,
                                    std::span<const double> snapshot_times) {
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("run_plane: snapshot times must be ascending");

  PlaneDeposit deposit(schedule, box_side);
  Rng rng(seed);
  const double attempts_per_time = schedule.flux * box_side * box_side;
  std::int64_t done = 0;

  std::vector<PlaneDeposit> snapshots;
  snapshots.reserve(snapshot_times.size());
  for (double t : snapshot_times) {
    const auto target = std::llround(attempts_per_time * t);
    while (done < target) {
      ++done;
      const double t_k = (static_cast<double>(done) - 0.5) / attempts_per_time;
      const double x = box_side * rng.uniform();
      const double y = box_side * rng.uniform();
      deposit.attempt(Point2(x, y), t_k);
    }
    deposit.advance_to(t);
    snapshots.push_back(deposit);
  }
  return snapshots;
}

DistributionHistogram pair_correlation(std::span<const Point2> points, double box_side, double r_max, double dr,
                                       double snapshot_time) {
  if (!(dr > 0.0)) throw std::domain_error("pair_correlation: dr must be positive");
  if (!(r_max > 0.0) || r_max > box_side / 2.0)
    throw std::domain_error("pair_correlation: r_max must lie in (0, L/2]");

  const auto bins = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(r_max / dr)));
  DistributionHistogram h(HistogramKind::PairCorrelation, dr, bins, snapshot_time);
  const double area = box_side * box_side;
  const auto n = points.size();
  const double rho = static_cast<double>(n) / area;
  h.normalization = {area, 1, rho};
  if (n < 2) return h;

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  const double r_max2 = r_max * r_max;
  auto tally = [&](const Point2& a, const Point2& b) {
    const double d2 = minimum_image(a, b, box_side).squaredNorm();
    if (d2 >= r_max2) return;
    const auto bin = static_cast<std::size_t>(std::sqrt(d2) / dr);
    if (bin < counts.size()) ++counts[bin];
  };

  const int per_side = static_cast<int>(std::floor(box_side / r_max));
  if (per_side < 3) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) tally(points[i], points[j]);
  } else {
    const double side = box_side / per_side;
    std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(per_side) * per_side);
    for (std::size_t i = 0; i < n; ++i)
      cells[static_cast<std::size_t>(grid_cell(points[i], side, per_side))].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < n; ++i)
      for (int c : cells_around(grid_cell(points[i], side, per_side), per_side, 1))
        for (std::uint32_t j : cells[static_cast<std::size_t>(c)])
          if (j != i) tally(points[i], points[j]);
  }

  for (Eigen::Index b = 0; b < bins; ++b) {
    const double shell = 2.0 * std::numbers::pi * h.bin_center(b) * dr;
    h.values[b] = static_cast<double>(counts[static_cast<std::size_t>(b)]) / (static_cast<double>(n) * shell * rho);
  }
  return h;
}

DistributionHistogram pair_correlation(const PlaneDeposit& deposit, double r_max, double dr) {
  return pair_correlation(deposit.centers(), deposit.box_side(), r_max, dr, deposit.current_time());
}

double coverage(const PlaneDeposit& deposit) {
  const double d = deposit.diameter();
  const double area = deposit.box_side() * deposit.box_side();
  return static_cast<double>(deposit.count()) / area * std::numbers::pi * d * d / 4.0;
}

}  // namespace rsa
