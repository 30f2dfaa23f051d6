#include <doctest.h>

#include "rsa/ensemble.hpp"
#include "rsa/exact1d.hpp"
#include "rsa/line_deposit.hpp"
#include "rsa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rsa;

namespace {

const Schedule kExp(ScheduleKind::Exponential, 1.0, 1.0, 1);
const Schedule kConst(ScheduleKind::Constant, 1.0, 1.0, 1);

// mean of the exact solution over [a, b], Simpson on 16 panels
double exact_bin_mean(double a, double b, double t) {
  const int m = 16;
  const double h = (b - a) / m;
  double s = exact::gap_exact(a, t) + exact::gap_exact(b, t);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * exact::gap_exact(a + i * h, t);
  return s * h / 3.0 / (b - a);
}

}  // namespace

TEST_CASE("attempt acceptance rules") {
  LineDeposit d(kExp, 10.0);
  const double l = size(kExp, 0.0);
  CHECK(l == 2.0);
  CHECK(d.attempt(0.0, 0.0) == AttemptResult::Accepted);
  CHECK(d.attempt(0.5 * l, 0.0) == AttemptResult::Rejected);
  CHECK(d.attempt(l, 0.0) == AttemptResult::Accepted);  // contact
  // circular neighbor across the seam
  CHECK(d.attempt(10.0 - 0.5 * l, 0.0) == AttemptResult::Rejected);
  CHECK(d.count() == 2);
  CHECK_THROWS_AS(d.attempt(-0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(d.attempt(10.0, 0.0), std::domain_error);
}

TEST_CASE("attempt time may not go backwards") {
  LineDeposit d(kExp, 10.0);
  d.attempt(1.0, 2.0);
  CHECK_THROWS_AS(d.attempt(5.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(d.advance_to(1.0), std::invalid_argument);
}

TEST_CASE("shrunken segments accept closer neighbors") {
  LineDeposit d(kExp, 10.0);
  d.attempt(0.0, 0.0);
  const double t = 3.0;
  const double l = size(kExp, t);
  CHECK(d.attempt(1.5, 0.5) == AttemptResult::Rejected);
  CHECK(d.attempt(l, t) == AttemptResult::Accepted);
}

TEST_CASE("t = 0 gives an empty deposit") {
  const std::vector<double> times{0.0};
  const auto snaps = run_line(kExp, 100.0, 1, times);
  REQUIRE(snaps.size() == 1);
  CHECK(snaps[0].count() == 0);
  CHECK(density(snaps[0]) == 0.0);
}

TEST_CASE("unsorted snapshots are rejected") {
  const std::vector<double> times{2.0, 1.0};
  CHECK_THROWS_AS(run_line(kExp, 100.0, 1, times), std::invalid_argument);
}

TEST_CASE("low-coverage density grows as R t") {
  const double L = 1e5;
  const std::vector<double> times{1e-3};
  const auto snaps = run_line(kExp, L, 5, times);
  // round(R L t) = 100 attempts, almost all accepted
  CHECK(snaps[0].count() <= 100);
  CHECK(snaps[0].count() >= 97);
}

TEST_CASE("runs are deterministic per seed") {
  const std::vector<double> times{1.0, 4.0};
  const auto a = run_line(kExp, 500.0, 99, times);
  const auto b = run_line(kExp, 500.0, 99, times);
  const auto c = run_line(kExp, 500.0, 100, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(a[i].centers() == b[i].centers());
  CHECK(a[1].centers() != c[1].centers());
}

TEST_CASE("hard-core invariant and monotone density for every schedule") {
  const std::vector<double> times{0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0};
  for (auto kind : {ScheduleKind::Exponential, ScheduleKind::Logarithmic, ScheduleKind::Reciprocal,
                    ScheduleKind::Constant}) {
    const Schedule s(kind, 1.0, 1.0, 1);
    const auto snaps = run_line(s, 2000.0, 11, times);
    std::size_t previous = 0;
    for (const auto& d : snaps) {
      CHECK(d.min_spacing() >= d.segment_length());
      CHECK(d.count() >= previous);
      previous = d.count();
      const auto c = d.centers();
      CHECK(std::is_sorted(c.begin(), c.end()));
    }
  }
}

TEST_CASE("physical units: tau scales with the final length") {
  const Schedule s(ScheduleKind::Exponential, 0.5, 4.0, 1);
  const std::vector<double> times{3.0 * time_scale(s)};
  const auto snaps = run_line(s, 1000.0, 3, times);
  CHECK(snaps[0].min_spacing() >= snaps[0].segment_length());
  // jammed-ish state: coverage of order one in units of the final length
  CHECK(snaps[0].count() * s.final_size / 1000.0 > 0.5);
}

TEST_CASE("gap histogram of two centers on a circle") {
  LineDeposit d(kConst, 3.0);
  d.attempt(0.0, 0.0);
  d.attempt(1.5, 0.0);
  const double bw = 0.1;
  const auto h = gap_histogram(d, bw, 2.0);
  CHECK(h.values[5] == doctest::Approx(2.0 / (3.0 * bw)));
  CHECK(h.values.sum() == doctest::Approx(2.0 / (3.0 * bw)));
  CHECK(h.total_mass() == doctest::Approx(density(d)));
  CHECK_THROWS_AS(gap_histogram(d, 0.0), std::domain_error);
  CHECK_THROWS_AS(gap_histogram(d, -0.1), std::domain_error);
}

TEST_CASE("one segment gives an empty histogram") {
  LineDeposit d(kConst, 3.0);
  d.attempt(1.0, 0.0);
  const auto h = gap_histogram(d, 0.1);
  CHECK(h.values.sum() == 0.0);
  CHECK(h.normalization.density == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("histogram identities at every snapshot") {
  const std::vector<double> times{1.0, 2.0, 4.0, 8.0, 24.0};
  const double L = 5000.0;
  for (auto kind : {ScheduleKind::Exponential, ScheduleKind::Constant}) {
    const Schedule s(kind, 1.0, 1.0, 1);
    for (const auto& d : run_line(s, L, 21, times)) {
      for (double bw : {0.02, 0.1}) {
        const auto h = gap_histogram(d, bw, L);
        const double n = density(d);
        CHECK(h.total_mass() == doctest::Approx(n).epsilon(1e-12));
        CHECK((h.values >= 0.0).all());
        const double residual = std::abs(d.segment_length() * n + h.first_moment() - 1.0);
        CHECK(residual <= 2.0 * bw * n);
      }
    }
  }
}

TEST_CASE("constant length agrees with the exact solution within 3 standard errors") {
  const std::vector<double> times{2.0};
  const double bw = 0.05;
  const auto result = line_ensemble(kConst, 1000.0, 400, 2024, times, bw, 4.0);
  const auto& h = result.histograms[0];
  int tested = 0;
  int within = 0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < h.bins(); ++i) {
    const double a = i * bw;
    const double g = exact_bin_mean(a, a + bw, 2.0);
    if (g < 1e-3) continue;
    REQUIRE(h.std_error[i] > 0.0);
    const double z = std::abs(h.values[i] - g) / h.std_error[i];
    worst = std::max(worst, z);
    ++tested;
    if (z <= 3.0) ++within;
  }
  MESSAGE("bins tested " << tested << ", within 3 SE " << within << ", worst z " << worst);
  CHECK(tested > 50);
  // 3 SE per bin holds for 99.7% of bins under Gaussian noise
  CHECK(within >= 0.97 * tested);
  CHECK(worst < 5.0);
  // unit length: n(t) equals the covered fraction
  CHECK(result.density[0] == doctest::Approx(exact::coverage_exact(2.0)).epsilon(3.0 * result.density_error[0] / result.density[0]));
}

TEST_CASE("constant length approaches the jamming coverage") {
  const std::vector<double> times{1000.0};
  const auto snaps = run_line(kConst, 20000.0, 8, times);
  const double coverage = density(snaps[0]);
  CHECK(coverage == doctest::Approx(0.7475979202534114).epsilon(0.002 / 0.7476));
  CHECK(coverage == doctest::Approx(exact::coverage_exact(1000.0)).epsilon(0.002 / 0.7476));
}
