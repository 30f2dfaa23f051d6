#pragma once

#include "rsa/schedule.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <utility>
#include <vector>

namespace rsa {

/// Thrown when a requested step violates the accuracy constraints.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KineticSettings {
  double max_step_tau = 0.1;   // dt <= max_step_tau * tau
  double max_step_cells = 4.0; // dt <= max_step_cells * tau * dx / final_size
  double max_step_relative = 0.05;  // dt <= max_step_relative * t
  double trim_threshold = 1e-15;
};

struct KineticDiagnostics {
  double density = 0.0;       // n(t)
  double first_moment = 0.0;  // int x G dx
  double residual = 0.0;      // |l n + int x G - 1|
  double total_shift = 0.0;   // drift applied by whole-cell shifts
  long steps = 0;
};

/// Discretized gap distribution G(x, t) on a grid that drifts with the
/// gaps: node j sits at x_j = j * dx + offset, offset in [0, dx). Segment
/// shrinkage moves every node right at speed -l'(t); when the offset
/// reaches dx the values shift one cell right and a zero enters at x = 0,
/// which is the boundary condition G(0, t) = 0 for shrinking segments.
///
/// Once the drift slows, a whole cell can take many tau to open and G rises
/// from zero inside it roughly like log x. Markers resolve that: after every
/// step a characteristic enters at x = 0 with G = 0 and then gains
/// 2R int_{x+l}^inf G along its path. Gaps below the total drift are shorter
/// than l, so markers are never destroyed; they do not feed back into the
/// grid and serve the moments and the exported curve only.
class KineticState {
 public:
  const Schedule& schedule() const { return schedule_; }
  double time() const { return time_; }
  double dx() const { return dx_; }
  double offset() const { return offset_; }
  const Eigen::ArrayXd& values() const { return values_; }
  const KineticSettings& settings() const { return settings_; }
  const KineticDiagnostics& diagnostics() const { return diagnostics_; }

  double position(Eigen::Index j) const { return static_cast<double>(j) * dx_ + offset_; }
  double upper_edge() const { return position(values_.size() - 1); }

  /// G at x = 0: zero while segments shrink, the first node otherwise.
  double boundary_value() const;

  /// Boundary point, markers and nodes, ordered by x.
  std::vector<std::pair<double, double>> samples() const;
  /// Piecewise-linear G(x) through samples(); zero beyond the last node.
  double value_at(double x) const;

  /// Largest step allowed at the current time (step caps and one-cell drift).
  double max_step() const;

 private:
  friend KineticState initialize(const Schedule&, double, double, double, const KineticSettings&);
  friend KineticState step(KineticState, double);
  friend KineticState advance_to(KineticState, double);

  struct Marker {
    double entry_size;  // l at entry, so x = entry_size - l(t)
    double value;
  };

  void refresh_diagnostics();
  void thin_markers();

  Schedule schedule_;
  KineticSettings settings_;
  double dx_ = 0.0;
  double offset_ = 0.0;
  double time_ = 0.0;
  Eigen::ArrayXd values_;
  KineticDiagnostics diagnostics_;
  std::vector<Marker> markers_;  // oldest first, so x decreases
};

/// Small-time seed G(x, t0) = (R t0)^2 exp(-R t0 (x + l(0))), zero at x = 0
/// for shrinking schedules. Requires 0 < t0 <= 0.1 tau and
/// x_max >= 30 / (R t0).
KineticState initialize(const Schedule& schedule, double t0, double dx, double x_max,
                        const KineticSettings& settings = {});
KineticState initialize(const Schedule& schedule, double t0, double dx);

/// One step: exact exponential destruction, creation 2R int_{x+l}^inf G
/// (integrating-factor RK4), exact drift of the node positions.
KineticState step(KineticState state, double dt);

/// Step until `t`, landing on it exactly.
KineticState advance_to(KineticState state, double t);

/// |l(t) n(t) + int x G dx - 1| with trapezoid moments over samples().
double conservation_residual(const KineticState& state);

/// Sampled curve (x, G), i.e. state.samples().
std::vector<std::pair<double, double>> gap_curve(const KineticState& state);

}  // namespace rsa
