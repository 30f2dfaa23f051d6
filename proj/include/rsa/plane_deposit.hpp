#pragma once

#include "rsa/histogram.hpp"
#include "rsa/line_deposit.hpp"
#include "rsa/schedule.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace rsa {

using Point2 = Eigen::Vector2d;

/// Minimum-image separation on the periodic square of side `box`.
inline Point2 minimum_image(const Point2& a, const Point2& b, double box) {
  Point2 d = a - b;
  d -= box * (d / box).array().round().matrix();
  return d;
}

/// Disk centers on the periodic square [0, L)^2 with a static cell grid.
/// Cells have side >= D(0) for the whole run, so the 3x3 block around a
/// point holds every disk that can overlap it.
class PlaneDeposit {
 public:
  PlaneDeposit(const Schedule& schedule, double box_side);

  AttemptResult attempt(const Point2& position, double t);
  void advance_to(double t);

  double box_side() const { return box_; }
  double current_time() const { return time_; }
  double diameter() const { return size(schedule_, time_); }
  std::size_t count() const { return centers_.size(); }
  const Schedule& schedule() const { return schedule_; }
  std::span<const Point2> centers() const { return centers_; }

  int cells_per_side() const { return cells_per_side_; }
  int cell_of(const Point2& p) const;

  /// True if some disk center is closer than `diameter` to p (cell search).
  bool overlaps(const Point2& p, double diameter) const;
  /// Same query by scanning every center.
  bool overlaps_brute(const Point2& p, double diameter) const;

  /// Every center sits in exactly the cell its coordinates map to.
  bool index_consistent() const;
  /// Smallest pairwise minimum-image distance, O(N^2).
  double min_pair_distance() const;

 private:
  std::vector<int> neighborhood(int cell) const;

  Schedule schedule_;
  double box_;
  int cells_per_side_;
  double cell_side_;
  double time_ = 0.0;
  std::vector<Point2> centers_;
  std::vector<std::vector<std::uint32_t>> cells_;
};

/// One replica from an empty plane; attempt k happens at (k - 1/2) / (R L^2).
std::vector<PlaneDeposit> run_plane(const Schedule& schedule, double box_side, std::uint64_t seed,
                                    std::span<const double> snapshot_times);

/// P2(r) of an arbitrary point set on the periodic square: ordered pair
/// counts per bin divided by N * 2 pi r_mid dr * rho. Needs r_max <= L/2.
DistributionHistogram pair_correlation(std::span<const Point2> points, double box_side, double r_max, double dr,
                                       double snapshot_time = 0.0);
DistributionHistogram pair_correlation(const PlaneDeposit& deposit, double r_max, double dr);

/// Area fraction (N / L^2) * pi D(t)^2 / 4.
double coverage(const PlaneDeposit& deposit);

}  // namespace rsa
