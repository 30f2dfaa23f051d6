#include <doctest.h>

#include "rsa/histogram.hpp"
#include "rsa/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rsa;

namespace {

DistributionHistogram make(std::vector<double> v, double t = 1.0) {
  DistributionHistogram h(HistogramKind::GapDensity, 0.5, static_cast<Eigen::Index>(v.size()), t);
  for (std::size_t i = 0; i < v.size(); ++i) h.values[static_cast<Eigen::Index>(i)] = v[i];
  h.normalization = {10.0, 1, 0.3};
  return h;
}

}  // namespace

TEST_CASE("bin width must be positive") {
  CHECK_THROWS_AS(DistributionHistogram(HistogramKind::GapDensity, 0.0, 4, 1.0), std::domain_error);
  CHECK_THROWS_AS(DistributionHistogram(HistogramKind::GapDensity, -1.0, 4, 1.0), std::domain_error);
}

TEST_CASE("mass and first moment") {
  auto h = make({1.0, 2.0, 0.0, 4.0});
  h.overflow = 0.25;
  CHECK(h.total_mass() == doctest::Approx(7.0 * 0.5 + 0.25));
  // centers 0.25, 0.75, 1.25, 1.75
  CHECK(h.first_moment() == doctest::Approx((0.25 + 1.5 + 7.0) * 0.5));
}

TEST_CASE("two replicas {0, 2} give mean 1 and standard error 1") {
  std::vector<DistributionHistogram> hs{make({0.0}), make({2.0})};
  const auto avg = replica_average(hs);
  CHECK(avg.values[0] == doctest::Approx(1.0));
  CHECK(avg.std_error[0] == doctest::Approx(1.0));
  CHECK(avg.normalization.replicas == 2);
}

TEST_CASE("identical replicas have zero error") {
  std::vector<DistributionHistogram> hs(7, make({0.1, 3.0, 2.5}));
  const auto avg = replica_average(hs);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(avg.values[i] == doctest::Approx(hs[0].values[i]));
    CHECK(avg.std_error[i] == 0.0);
  }
  CHECK(avg.normalization.density == doctest::Approx(0.3));
}

TEST_CASE("merge is order independent") {
  std::vector<DistributionHistogram> hs{make({1.0, 5.0}), make({2.0, 0.5}), make({7.0, 1.5}), make({0.0, 2.0})};
  const auto a = replica_average(hs);
  std::vector<DistributionHistogram> rev(hs.rbegin(), hs.rend());
  const auto b = replica_average(rev);
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-14));
    CHECK(a.std_error[i] == doctest::Approx(b.std_error[i]).epsilon(1e-14));
  }
}

TEST_CASE("schema mismatch is rejected") {
  std::vector<DistributionHistogram> bins{make({1.0, 2.0}), make({1.0})};
  CHECK_THROWS_AS(replica_average(bins), std::invalid_argument);
  std::vector<DistributionHistogram> times{make({1.0}, 1.0), make({1.0}, 2.0)};
  CHECK_THROWS_AS(replica_average(times), std::invalid_argument);
  auto other = make({1.0});
  other.kind = HistogramKind::PairCorrelation;
  std::vector<DistributionHistogram> kinds{make({1.0}), other};
  CHECK_THROWS_AS(replica_average(kinds), std::invalid_argument);
  CHECK_THROWS_AS(replica_average({}), std::invalid_argument);
}

TEST_CASE("standard error scales as 1/sqrt(N)") {
  // unit-variance noise: SE should be close to 1/sqrt(N) in every bin
  Rng rng(42);
  const int n = 100;
  const Eigen::Index bins = 200;
  std::vector<DistributionHistogram> hs;
  for (int r = 0; r < n; ++r) {
    DistributionHistogram h(HistogramKind::PairCorrelation, 0.1, bins, 0.0);
    for (Eigen::Index i = 0; i < bins; ++i) h.values[i] = std::sqrt(12.0) * (rng.uniform() - 0.5);
    hs.push_back(h);
  }
  const auto avg = replica_average(hs);
  const double mean_se = avg.std_error.mean();
  CHECK(mean_se == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(0.2));
}
