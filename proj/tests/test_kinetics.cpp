#include <doctest.h>

#include "rsa/exact1d.hpp"
#include "rsa/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rsa;

namespace {

const Schedule kExp(ScheduleKind::Exponential, 1.0, 1.0, 1);
const Schedule kConst(ScheduleKind::Constant, 1.0, 1.0, 1);

// R int (x - l)_+ G dx over the sampled curve (trapezoid on the samples).
double deposition_rate(const KineticState& s) {
  const auto pts = s.samples();
  const double l = size(s.schedule(), s.time());
  double sum = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double fa = std::max(0.0, pts[k - 1].first - l) * pts[k - 1].second;
    const double fb = std::max(0.0, pts[k].first - l) * pts[k].second;
    sum += 0.5 * (pts[k].first - pts[k - 1].first) * (fa + fb);
  }
  return s.schedule().flux * sum;
}

double max_node_difference(const KineticState& a, const KineticState& b) {
  double diff = 0.0;
  for (Eigen::Index j = 0; j < a.values().size(); ++j) {
    const double x = a.position(j);
    if (x > 20.0) break;
    diff = std::max(diff, std::abs(a.values()[j] - b.value_at(x)));
  }
  return diff;
}

}  // namespace

TEST_CASE("initialize validates its arguments") {
  CHECK_THROWS_AS(initialize(kExp, 0.01, 0.005, 100.0), std::invalid_argument);  // needs 3000
  CHECK_THROWS_AS(initialize(kExp, 0.0, 0.005), std::invalid_argument);
  CHECK_THROWS_AS(initialize(kExp, 0.2, 0.005), std::invalid_argument);
  CHECK_THROWS_AS(initialize(kExp, 0.01, 0.0), std::invalid_argument);
  CHECK_NOTHROW(initialize(kExp, 0.01, 0.005, 3000.0));
}

TEST_CASE("bootstrap density and conservation match the analytic moments") {
  const double t0 = 0.01;
  for (const Schedule& s : {kExp, kConst}) {
    const auto state = initialize(s, t0, 0.005);
    const double l0 = size(s, 0.0);
    // int_0^inf a^2 e^{-a(x + l0)} dx = a e^{-a l0};  first moment e^{-a l0}
    const double n = t0 * std::exp(-t0 * l0);
    CHECK(state.diagnostics().density == doctest::Approx(n).epsilon(1e-3));
    const double residual = std::abs(size(s, t0) * n + std::exp(-t0 * l0) - 1.0);
    CHECK(conservation_residual(state) == doctest::Approx(residual).epsilon(0.02));
    CHECK(state.boundary_value() == (s.shrinking() ? 0.0 : t0 * t0 * std::exp(-t0)));
  }
  CHECK(conservation_residual(initialize(kConst, 0.01, 0.005)) <= 1e-4);
}

TEST_CASE("steps outside the accuracy limits are rejected") {
  auto s = initialize(kExp, 0.01, 0.01);
  const double h = s.max_step();
  CHECK(h > 0.0);
  CHECK(h <= 0.05 * 0.01 * (1.0 + 1e-12));
  CHECK_THROWS_AS(step(s, 2.0 * h), StepRejected);
  CHECK_THROWS_AS(step(s, 0.0), StepRejected);
  CHECK_THROWS_AS(step(s, -h), StepRejected);
  CHECK_NOTHROW(step(s, h));
  CHECK_THROWS_AS(advance_to(s, 0.001), std::invalid_argument);
}

TEST_CASE("advance_to lands exactly on the requested time") {
  auto s = advance_to(initialize(kExp, 0.01, 0.01), 1.2345);
  CHECK(s.time() == 1.2345);
  CHECK(s.offset() >= 0.0);
  CHECK(s.offset() < s.dx());
}

TEST_CASE("shrinking schedules keep G(0, t) = 0 and stay positive") {
  for (auto kind : {ScheduleKind::Exponential, ScheduleKind::Logarithmic, ScheduleKind::Reciprocal}) {
    const Schedule sched(kind, 1.0, 1.0, 1);
    auto s = initialize(sched, 0.01, 0.01);
    double previous_n = s.diagnostics().density;
    long violations = 0;
    long decreases = 0;
    while (s.time() < 6.0) {
      s = step(std::move(s), s.max_step());
      const auto pts = s.samples();
      if (pts.front().first != 0.0 || pts.front().second != 0.0) ++violations;
      if (s.offset() == 0.0 && s.values()[0] != 0.0) ++violations;
      for (const auto& [x, g] : pts)
        if (!(g >= 0.0)) ++violations;
      if (s.diagnostics().density < previous_n) ++decreases;
      previous_n = s.diagnostics().density;
    }
    CHECK(violations == 0);
    CHECK(decreases == 0);
    CHECK(s.boundary_value() == 0.0);
    CHECK(s.value_at(0.0) == 0.0);
  }
}

TEST_CASE("constant length matches the exact solution") {
  auto s = advance_to(initialize(kConst, 0.01, 0.005), 8.0);
  double max_g = 0.0;
  double err = 0.0;
  for (Eigen::Index j = 0; j < s.values().size(); ++j) {
    const double x = s.position(j);
    const double g = exact::gap_exact(x, 8.0);
    max_g = std::max(max_g, g);
    if (std::abs(x - 1.0) > 1e-9) err = std::max(err, std::abs(g - s.values()[j]));
  }
  MESSAGE("relative L-inf error " << err / max_g);
  CHECK(err <= 1e-3 * max_g);
  CHECK(s.diagnostics().density == doctest::Approx(exact::coverage_exact(8.0)).epsilon(1e-4));
  CHECK(conservation_residual(s) <= 1e-3);
}

TEST_CASE("gap number grows at the deposition rate") {
  // each deposition splits one gap into two: dn/dt = R int (x - l)_+ G dx
  auto s = advance_to(initialize(kExp, 0.01, 0.005), 2.0);
  const double rate0 = deposition_rate(s);
  const double n0 = s.diagnostics().density;
  const double dt = 1e-3;
  s = advance_to(std::move(s), 2.0 + dt);
  const double rate1 = deposition_rate(s);
  const double dn = (s.diagnostics().density - n0) / dt;
  CHECK(dn == doctest::Approx(0.5 * (rate0 + rate1)).epsilon(2e-3));
}

TEST_CASE("conservation holds up to 24 tau for every shrinking schedule") {
  for (auto kind : {ScheduleKind::Exponential, ScheduleKind::Logarithmic, ScheduleKind::Reciprocal}) {
    const Schedule sched(kind, 1.0, 1.0, 1);
    auto s = initialize(sched, 0.01, 0.005);
    double worst = conservation_residual(s);
    for (double t : {1.0, 2.0, 4.0, 6.0, 8.0, 12.0, 18.0, 24.0}) {
      s = advance_to(std::move(s), t);
      worst = std::max(worst, conservation_residual(s));
    }
    MESSAGE(to_string(kind) << " worst residual " << worst);
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("physical units: results scale with the final length") {
  // l = 0.5, R = 4 has tau = 0.5; reduced-unit results must agree
  const Schedule scaled(ScheduleKind::Exponential, 0.5, 4.0, 1);
  const double tau = time_scale(scaled);
  auto a = advance_to(initialize(kExp, 0.01, 0.01), 3.0);
  auto b = advance_to(initialize(scaled, 0.01 * tau, 0.01 * 0.5), 3.0 * tau);
  CHECK(b.diagnostics().density * 0.5 == doctest::Approx(a.diagnostics().density).epsilon(1e-9));
  CHECK(conservation_residual(b) == doctest::Approx(conservation_residual(a)).epsilon(1e-6));
}

TEST_CASE("the bootstrap start time barely matters") {
  const auto a = advance_to(initialize(kExp, 0.01, 0.005), 0.5);
  const auto b = advance_to(initialize(kExp, 0.005, 0.005), 0.5);
  const double peak = a.values().maxCoeff();
  const double diff = max_node_difference(a, b);
  MESSAGE("relative change " << diff / peak);
  CHECK(diff < 0.005 * peak);
}

TEST_CASE("peak of G grows with ln t for the exponential schedule") {
  auto s = initialize(kExp, 0.01, 0.005);
  double previous = 0.0;
  for (double t : {4.0, 6.0, 8.0, 12.0, 18.0, 24.0}) {
    s = advance_to(std::move(s), t);
    const double peak = s.values().maxCoeff();
    CHECK(peak > previous);
    previous = peak;
  }
}

TEST_CASE("gap curve integrates to n") {
  const auto s = advance_to(initialize(kExp, 0.01, 0.005), 3.0);
  const auto curve = gap_curve(s);
  double n = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    CHECK(curve[k].first >= curve[k - 1].first);
    n += 0.5 * (curve[k].first - curve[k - 1].first) * (curve[k].second + curve[k - 1].second);
  }
  CHECK(n == doctest::Approx(s.diagnostics().density).epsilon(1e-12));
  CHECK(s.value_at(s.position(10)) == doctest::Approx(s.values()[10]));
  CHECK(s.value_at(1e6) == 0.0);
  CHECK_THROWS_AS(s.value_at(-1.0), std::domain_error);
}
