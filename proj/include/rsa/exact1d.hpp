#pragma once

// Closed-form gap distribution for 1D RSA of fixed-length segments, in
// reduced units (segment length 1, flux 1, so tau = 1):
//
//   G(x, t) = t^2 exp(-t (x - 1)) Phi(t)             x >= 1
//   G(x, t) = 2 int_0^t u exp(-u x) Phi(u) du          0 <= x < 1
//   Phi(u)  = exp(-2 Ein(u)),  Ein(u) = int_0^u (1 - e^-v) / v dv
//
// coverage(t) = int_0^t Phi(u) du is also the gap (= segment) density.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rsa::exact {

template <typename Scalar>
inline constexpr Scalar euler_gamma = std::numbers::egamma_v<Scalar>;

/// Switchover points for the three evaluation routes of Ein.
inline constexpr double kSeriesLimit = 1.0;
inline constexpr double kAsymptoticLimit = 30.0;

/// Beyond this reduced time Phi(u) = e^{-2 gamma} / u^2 to round-off.
inline constexpr double kTailStart = 40.0;

namespace detail {

template <typename Scalar, typename F>
Scalar integrate(F f, Scalar a, Scalar b) {
  using boost::math::quadrature::gauss_kronrod;
  if (b <= a) return Scalar(0);
  return gauss_kronrod<Scalar, 61>::integrate(f, a, b, 10, Scalar(1e-12));
}

// Sum over geometrically growing panels [0,1], [1,2], [2,4], ... up to t.
template <typename Scalar, typename F>
Scalar integrate_panels(F f, Scalar t) {
  Scalar total = integrate<Scalar>(f, Scalar(0), std::min(t, Scalar(1)));
  for (Scalar a = 1; a < t; a *= 2) total += integrate<Scalar>(f, a, std::min(Scalar(2) * a, t));
  return total;
}

}  // namespace detail

/// Alternating series sum_k (-1)^{k+1} u^k / (k k!). Accurate for small u.
template <typename Scalar>
Scalar ein_series(Scalar u) {
  using std::abs;
  Scalar term = u;  // u^k / k!
  Scalar sum = 0;
  for (int k = 1; k < 200; ++k) {
    const Scalar contribution = term / Scalar(k);
    sum += (k % 2 == 1) ? contribution : -contribution;
    if (abs(contribution) <= std::numeric_limits<Scalar>::epsilon() * abs(sum)) break;
    term *= u / Scalar(k + 1);
  }
  return sum;
}

/// gamma + ln u + E1(u), with E1 from its asymptotic series. Large u only.
template <typename Scalar>
Scalar ein_asymptotic(Scalar u) {
  using std::abs;
  using std::exp;
  using std::log;
  Scalar term = 1;
  Scalar sum = 1;
  for (int k = 1; k < 100; ++k) {
    const Scalar next = -term * Scalar(k) / u;
    if (abs(next) >= abs(term)) break;
    term = next;
    sum += term;
    if (abs(term) <= std::numeric_limits<Scalar>::epsilon()) break;
  }
  return euler_gamma<Scalar> + log(u) + exp(-u) / u * sum;
}

namespace detail {

template <typename Scalar>
Scalar ein_integrand(Scalar v) {
  using std::expm1;
  return -expm1(-v) / v;
}

// 30-point Gauss-Legendre over at most one unit; the integrand is entire, so
// this is exact to round-off.
template <typename Scalar>
Scalar ein_piece(Scalar a, Scalar b) {
  return boost::math::quadrature::gauss<Scalar, 30>::integrate(ein_integrand<Scalar>, a, b);
}

// Ein at the integer knots 1 .. 30, chained from the series value at 1.
template <typename Scalar>
const std::array<Scalar, 31>& ein_knots() {
  static const std::array<Scalar, 31> knots = [] {
    std::array<Scalar, 31> k{};
    k[1] = ein_series(Scalar(1));
    for (int i = 1; i < 30; ++i) k[i + 1] = k[i] + ein_piece(Scalar(i), Scalar(i + 1));
    return k;
  }();
  return knots;
}

}  // namespace detail

/// Ein(u) = int_0^u (1 - e^-v) / v dv.
template <typename Scalar>
Scalar ein(Scalar u) {
  using std::floor;
  if (u < Scalar(0)) throw std::domain_error("ein: negative argument");
  if (u <= Scalar(kSeriesLimit)) return ein_series(u);
  if (u > Scalar(kAsymptoticLimit)) return ein_asymptotic(u);
  const Scalar knot = floor(u);
  return detail::ein_knots<Scalar>()[static_cast<std::size_t>(knot)] + detail::ein_piece(knot, u);
}

/// Phi(u) = exp(-2 Ein(u)); the probability that an interval of length one
/// stays available up to time u.
template <typename Scalar>
Scalar phi(Scalar u) {
  using std::exp;
  return exp(Scalar(-2) * ein(u));
}

/// Exact gap density G(x, t), reduced units.
template <typename Scalar>
Scalar gap_exact(Scalar x, Scalar t) {
  using std::exp;
  if (x < Scalar(0) || t < Scalar(0)) throw std::domain_error("gap_exact: negative argument");
  if (t == Scalar(0)) return Scalar(0);
  if (x >= Scalar(1)) return t * t * exp(-t * (x - Scalar(1))) * phi(t);
  auto integrand = [x](Scalar u) { return u * exp(-u * x) * phi(u); };
  return Scalar(2) * detail::integrate_panels<Scalar>(integrand, t);
}

/// Covered fraction l*n(t) = int_0^t Phi(u) du; accepts t = +inf.
template <typename Scalar>
Scalar coverage_exact(Scalar t) {
  using std::exp;
  if (t < Scalar(0)) throw std::domain_error("coverage_exact: negative time");
  auto integrand = [](Scalar u) { return phi(u); };
  const Scalar tail_start(kTailStart);
  if (t <= tail_start) return detail::integrate_panels<Scalar>(integrand, t);
  const Scalar head = detail::integrate_panels<Scalar>(integrand, tail_start);
  const Scalar c = exp(Scalar(-2) * euler_gamma<Scalar>);
  const Scalar inv_t = std::isinf(t) ? Scalar(0) : Scalar(1) / t;
  return head + c * (Scalar(1) / tail_start - inv_t);
}

/// Large-time contact asymptote l^2 G(0, t) ~ slope * ln(t / tau).
template <typename Scalar>
Scalar contact_log_slope() {
  using std::exp;
  return Scalar(2) * exp(Scalar(-2) * euler_gamma<Scalar>);
}

}  // namespace rsa::exact
