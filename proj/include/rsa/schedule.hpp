#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rsa {

enum class ScheduleKind { Exponential, Logarithmic, Reciprocal, Constant };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

/// Monotone size schedule D(t) (2D) or l(t) (1D) shared by arriving and
/// deposited objects. Immutable; evaluate through the free functions below.
///
/// With u = t / tau and f(u) the decaying part,
///   size(t) = final_size * (1 + f(u)),  f(0) = 1 for every shrinking kind.
template <typename Scalar>
struct SizeSchedule {
  ScheduleKind kind = ScheduleKind::Exponential;
  Scalar final_size = Scalar(1);
  Scalar flux = Scalar(1);
  int dimension = 1;

  SizeSchedule() = default;
  SizeSchedule(ScheduleKind k, Scalar final, Scalar r, int dim)
      : kind(k), final_size(final), flux(r), dimension(dim) {
    if (!(final_size > Scalar(0))) throw std::invalid_argument("schedule: final_size must be > 0");
    if (!(flux > Scalar(0))) throw std::invalid_argument("schedule: flux must be > 0");
    if (dimension != 1 && dimension != 2) throw std::invalid_argument("schedule: dimension must be 1 or 2");
  }

  bool shrinking() const { return kind != ScheduleKind::Constant; }

  friend bool operator==(const SizeSchedule&, const SizeSchedule&) = default;
};

using Schedule = SizeSchedule<double>;

/// tau = 1 / (R * final_size^d).
template <typename Scalar>
Scalar time_scale(const SizeSchedule<Scalar>& s) {
  using std::pow;
  return Scalar(1) / (s.flux * pow(s.final_size, Scalar(s.dimension)));
}

namespace detail {

template <typename Scalar>
void check_time(Scalar t) {
  if (!(t >= Scalar(0))) throw std::domain_error("schedule evaluated at negative time");
}

// Decaying part f(u) and its derivative df/du in reduced time u = t / tau.
template <typename Scalar>
Scalar decay(ScheduleKind kind, Scalar u) {
  using std::exp;
  using std::log;
  const Scalar e = std::numbers::e_v<Scalar>;
  switch (kind) {
    case ScheduleKind::Exponential: return exp(-u);
    case ScheduleKind::Logarithmic: return Scalar(1) / log(e + u);
    case ScheduleKind::Reciprocal: return Scalar(1) / (Scalar(1) + u);
    case ScheduleKind::Constant: return Scalar(0);
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar decay_derivative(ScheduleKind kind, Scalar u) {
  using std::exp;
  using std::log;
  const Scalar e = std::numbers::e_v<Scalar>;
  switch (kind) {
    case ScheduleKind::Exponential: return -exp(-u);
    case ScheduleKind::Logarithmic: {
      const Scalar l = log(e + u);
      return Scalar(-1) / ((e + u) * l * l);
    }
    case ScheduleKind::Reciprocal: return Scalar(-1) / ((Scalar(1) + u) * (Scalar(1) + u));
    case ScheduleKind::Constant: return Scalar(0);
  }
  return Scalar(0);
}

}  // namespace detail

template <typename Scalar>
Scalar size(const SizeSchedule<Scalar>& s, Scalar t) {
  detail::check_time(t);
  return s.final_size * (Scalar(1) + detail::decay(s.kind, t / time_scale(s)));
}

/// Exact derivative d size / dt; never positive.
template <typename Scalar>
Scalar rate(const SizeSchedule<Scalar>& s, Scalar t) {
  detail::check_time(t);
  const Scalar tau = time_scale(s);
  return s.final_size * detail::decay_derivative(s.kind, t / tau) / tau;
}

/// Time at which size(t) has fallen to `target`; +inf if it never does.
/// Bisection on the monotone schedule, so it works for every kind.
template <typename Scalar>
Scalar time_at_size(const SizeSchedule<Scalar>& s, Scalar target, Scalar t_from = Scalar(0)) {
  if (!s.shrinking() || target <= s.final_size) return std::numeric_limits<Scalar>::infinity();
  if (size(s, t_from) <= target) return t_from;
  const Scalar tau = time_scale(s);
  Scalar lo = t_from;
  Scalar hi = t_from + tau;
  while (size(s, hi) > target) {
    lo = hi;
    hi = t_from + Scalar(2) * (hi - t_from);
    if (!std::isfinite(hi)) return std::numeric_limits<Scalar>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > std::numeric_limits<Scalar>::epsilon() * hi; ++i) {
    const Scalar mid = (lo + hi) / 2;
    (size(s, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace rsa
