#include "rsa/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

namespace rsa {

namespace {

// Relative slack on the one-cell drift limit (the stepper aims the drift at
// the cell edge with a bisection on the schedule).
constexpr double kDriftSlack = 1e-9;

// Markers closer than this fraction of their position to the previous kept
// one are dropped, which keeps them geometrically spaced towards x = 0.
constexpr double kMarkerSpacing = 0.005;

// suffix_k = int from node k to the last node of the piecewise-linear G.
void suffix_sums(const Eigen::ArrayXd& g, double dx, Eigen::ArrayXd& suffix) {
  const Eigen::Index last = g.size() - 1;
  suffix.resize(g.size());
  suffix[last] = 0.0;
  for (Eigen::Index k = last - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + 0.5 * dx * (g[k] + g[k + 1]);
}

// Integral from fractional node index q to the last node; the partial cell
// is exact for the linear interpolant.
double tail(const Eigen::ArrayXd& g, const Eigen::ArrayXd& suffix, double dx, double q) {
  const Eigen::Index last = g.size() - 1;
  q = std::max(q, 0.0);
  if (q >= static_cast<double>(last)) return 0.0;
  const auto k = static_cast<Eigen::Index>(std::floor(q));
  const double frac = q - static_cast<double>(k);
  const double g_lo = g[k] + frac * (g[k + 1] - g[k]);
  return suffix[k + 1] + 0.5 * (1.0 - frac) * dx * (g_lo + g[k + 1]);
}

// out_j = 2 R int_{x_j + length}^inf G; the lower limit sits length / dx
// cells above node j.
void creation(const Eigen::ArrayXd& g, double dx, double length, double flux, Eigen::ArrayXd& suffix,
              Eigen::ArrayXd& out) {
  suffix_sums(g, dx, suffix);
  const Eigen::Index last = g.size() - 1;
  const double shift = length / dx;
  const auto whole = static_cast<Eigen::Index>(std::floor(shift));
  const double frac = shift - static_cast<double>(whole);
  out.resize(g.size());
  for (Eigen::Index j = 0; j <= last; ++j) {
    const Eigen::Index k = j + whole;
    if (k >= last) {
      out[j] = 0.0;
      continue;
    }
    const double g_lo = g[k] + frac * (g[k + 1] - g[k]);
    const double partial = 0.5 * (1.0 - frac) * dx * (g_lo + g[k + 1]);
    out[j] = 2.0 * flux * (suffix[k + 1] + partial);
  }
}

}  // namespace

double KineticState::boundary_value() const { return schedule_.shrinking() ? 0.0 : values_[0]; }

std::vector<std::pair<double, double>> KineticState::samples() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(markers_.size() + static_cast<std::size_t>(values_.size()) + 1);
  if (!schedule_.shrinking()) {
    for (Eigen::Index j = 0; j < values_.size(); ++j) out.emplace_back(position(j), values_[j]);
    return out;
  }
  const double now = size(schedule_, time_);
  out.emplace_back(0.0, 0.0);
  auto m = markers_.rbegin();
  Eigen::Index j = 0;
  while (m != markers_.rend() || j < values_.size()) {
    const double xm = m != markers_.rend() ? std::max(0.0, m->entry_size - now) : 0.0;
    if (j == values_.size() || (m != markers_.rend() && xm < position(j))) {
      out.emplace_back(xm, m->value);
      ++m;
    } else {
      out.emplace_back(position(j), values_[j]);
      ++j;
    }
  }
  return out;
}

double KineticState::value_at(double x) const {
  if (x < 0.0) throw std::domain_error("kinetics: negative gap length");
  const auto pts = samples();
  if (x > pts.back().first) return 0.0;
  const auto hi = std::upper_bound(pts.begin(), pts.end(), x,
                                   [](double v, const std::pair<double, double>& p) { return v < p.first; });
  if (hi == pts.end()) return pts.back().second;
  if (hi == pts.begin()) return pts.front().second;
  const auto lo = std::prev(hi);
  const double w = hi->first - lo->first;
  return w > 0.0 ? lo->second + (hi->second - lo->second) * (x - lo->first) / w : hi->second;
}

double KineticState::max_step() const {
  const double tau = time_scale(schedule_);
  double h = std::min({settings_.max_step_tau * tau, settings_.max_step_cells * tau * dx_ / schedule_.final_size,
                       settings_.max_step_relative * time_});
  if (schedule_.shrinking()) {
    const double remaining = dx_ - offset_;
    const double hit = time_at_size(schedule_, size(schedule_, time_) - remaining, time_);
    h = std::min(h, hit - time_);
  }
  return h;
}

void KineticState::refresh_diagnostics() {
  const auto pts = samples();
  double n = 0.0;
  double m1 = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const auto [xa, ga] = pts[k - 1];
    const auto [xb, gb] = pts[k];
    n += 0.5 * (xb - xa) * (ga + gb);
    m1 += 0.5 * (xb - xa) * (xa * ga + xb * gb);
  }
  diagnostics_.density = n;
  diagnostics_.first_moment = m1;
  diagnostics_.residual = std::abs(size(schedule_, time_) * n + m1 - 1.0);
}

void KineticState::thin_markers() {
  // Walk from x = 0 outwards (newest first).
  const double now = size(schedule_, time_);
  std::vector<Marker> kept;
  kept.reserve(markers_.size());
  double last_x = -1.0;
  for (auto m = markers_.rbegin(); m != markers_.rend(); ++m) {
    const double x = m->entry_size - now;
    if (last_x < 0.0 || x - last_x > kMarkerSpacing * x) {
      kept.push_back(*m);
      last_x = x;
    }
  }
  markers_.assign(kept.rbegin(), kept.rend());
}

KineticState initialize(const Schedule& schedule, double t0, double dx, double x_max,
                        const KineticSettings& settings) {
  const double tau = time_scale(schedule);
  if (!(t0 > 0.0) || t0 > 0.1 * tau) throw std::invalid_argument("kinetics: start time must lie in (0, 0.1 tau]");
  if (!(dx > 0.0)) throw std::invalid_argument("kinetics: dx must be positive");
  const double rt0 = schedule.flux * t0;
  if (x_max < 30.0 / rt0 * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "kinetics: x_max = " << x_max << " too small for t0 = " << t0 << " (need >= " << 30.0 / rt0 << ")";
    throw std::invalid_argument(msg.str());
  }

  KineticState s;
  s.schedule_ = schedule;
  s.settings_ = settings;
  s.dx_ = dx;
  s.time_ = t0;
  const auto nodes = static_cast<Eigen::Index>(std::ceil(x_max / dx)) + 1;
  const double initial_length = size(schedule, 0.0);
  s.values_ = (-rt0 * (Eigen::ArrayXd::LinSpaced(nodes, 0.0, dx * static_cast<double>(nodes - 1)) + initial_length))
                  .exp() *
              (rt0 * rt0);
  if (schedule.shrinking()) s.values_[0] = 0.0;
  s.refresh_diagnostics();
  return s;
}

KineticState initialize(const Schedule& schedule, double t0, double dx) {
  return initialize(schedule, t0, dx, 30.0 / (schedule.flux * t0));
}

KineticState step(KineticState s, double dt) {
  const Schedule& sched = s.schedule_;
  const double t0 = s.time_;
  const double allowed = s.max_step();
  if (!(dt > 0.0) || dt > allowed * (1.0 + kDriftSlack)) {
    std::ostringstream msg;
    msg << "kinetics: step dt = " << dt << " rejected at t = " << t0 << " (allowed " << allowed << ")";
    throw StepRejected(msg.str());
  }

  const double flux = sched.flux;
  const double dx = s.dx_;
  const double l0 = size(sched, t0);
  const Eigen::Index nodes = s.values_.size();
  const Eigen::ArrayXd base =
      Eigen::ArrayXd::LinSpaced(nodes, 0.0, dx * static_cast<double>(nodes - 1)) + s.offset_ + l0;

  // exp(-int a_j ds) over [a, b] by the midpoint rule, where
  // a_j(s) = R max(x_j(s) - l(s), 0) and x_j(s) = base_j - l(s).
  auto decay = [&](double a, double b) {
    const double mid = size(sched, 0.5 * (a + b));
    return (-(flux * (b - a)) * (base - 2.0 * mid).max(0.0)).exp().eval();
  };
  const double t_mid = t0 + 0.5 * dt;
  const double t1 = t0 + dt;
  const Eigen::ArrayXd e1 = decay(t0, t_mid);
  const Eigen::ArrayXd e2 = decay(t_mid, t1);
  const Eigen::ArrayXd e = e1 * e2;

  // Markers gain creation only; at stage time u a marker's lower limit
  // x + l(u) equals its entry size, and node 0 sits at offset + l0 - l(u).
  Eigen::ArrayXd marker_rate = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(s.markers_.size()));
  auto marker_stage = [&](const Eigen::ArrayXd& stage, const Eigen::ArrayXd& suffix, double u, double weight) {
    const double origin = s.offset_ + l0 - size(sched, u);
    for (std::size_t m = 0; m < s.markers_.size(); ++m) {
      const double q = (s.markers_[m].entry_size - origin) / dx;
      marker_rate[static_cast<Eigen::Index>(m)] += weight * 2.0 * flux * tail(stage, suffix, dx, q);
    }
  };

  Eigen::ArrayXd suffix;
  Eigen::ArrayXd k1, k2, k3, k4, stage;
  const Eigen::ArrayXd& g = s.values_;
  creation(g, dx, l0, flux, suffix, k1);
  marker_stage(g, suffix, t0, 1.0);
  stage = e1 * (g + 0.5 * dt * k1);
  creation(stage, dx, size(sched, t_mid), flux, suffix, k2);
  marker_stage(stage, suffix, t_mid, 2.0);
  stage = e1 * g + 0.5 * dt * k2;
  creation(stage, dx, size(sched, t_mid), flux, suffix, k3);
  marker_stage(stage, suffix, t_mid, 2.0);
  stage = e * g + dt * e2 * k3;
  creation(stage, dx, size(sched, t1), flux, suffix, k4);
  marker_stage(stage, suffix, t1, 1.0);
  s.values_ = e * g + dt / 6.0 * (e * k1 + 2.0 * e2 * (k2 + k3) + k4);
  for (std::size_t m = 0; m < s.markers_.size(); ++m)
    s.markers_[m].value += dt / 6.0 * marker_rate[static_cast<Eigen::Index>(m)];

  s.time_ = t1;
  s.offset_ += l0 - size(sched, t1);
  if (s.offset_ >= dx * (1.0 - kDriftSlack)) {
    const auto cells = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(s.offset_ / dx + kDriftSlack)));
    Eigen::ArrayXd shifted = Eigen::ArrayXd::Zero(nodes + cells);
    shifted.tail(nodes) = s.values_;
    s.values_ = std::move(shifted);
    s.offset_ = std::max(0.0, s.offset_ - static_cast<double>(cells) * dx);
    s.diagnostics_.total_shift += static_cast<double>(cells) * dx;
  }
  if (sched.shrinking()) {
    s.markers_.push_back({size(sched, t1), 0.0});
    s.thin_markers();
  }

  // Drop the tail once it falls below round-off relevance.
  const double peak = s.values_.maxCoeff();
  Eigen::Index keep = s.values_.size();
  while (keep > 2 && s.values_[keep - 1] <= s.settings_.trim_threshold * peak) --keep;
  keep = std::min<Eigen::Index>(s.values_.size(), keep + 8);
  if (keep < s.values_.size()) s.values_.conservativeResize(keep);

  ++s.diagnostics_.steps;
  s.refresh_diagnostics();
  return s;
}

KineticState advance_to(KineticState s, double t) {
  if (t < s.time_) throw std::invalid_argument("kinetics: cannot integrate backwards");
  while (s.time_ < t) {
    const double remaining = t - s.time_;
    const double allowed = s.max_step();
    // A leftover sliver below round-off is folded into the last step.
    const bool last = remaining <= allowed * (1.0 + kDriftSlack);
    s = step(std::move(s), last ? remaining : allowed);
    if (last) s.time_ = t;
  }
  return s;
}

double conservation_residual(const KineticState& state) { return state.diagnostics().residual; }

std::vector<std::pair<double, double>> gap_curve(const KineticState& state) { return state.samples(); }

}  // namespace rsa
