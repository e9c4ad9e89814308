#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nulleq/errors.hpp"
#include "nulleq/proportion.hpp"

using namespace nulleq::proportion;

TEST_CASE("worked example 60 of 100 against 0.5") {
  const auto r = proportion_test({60, 100}, 0.5, 0.05);
  CHECK(r.p_hat == doctest::Approx(0.6));
  CHECK(std::fabs(r.z_null - 2.0) <= 1e-12);
  CHECK(std::fabs(r.z_wald - 0.1 / std::sqrt(0.0024)) <= 1e-12);
  CHECK(r.z_wald == doctest::Approx(2.0412415).epsilon(1e-7));
  CHECK(r.ci_lower == doctest::Approx(0.5039818).epsilon(1e-7));
  CHECK(r.ci_upper == doctest::Approx(0.6960182).epsilon(1e-7));
  // Two-sided normal tail at 2 is 0.04550026...
  CHECK(r.p_value_null == doctest::Approx(0.0455002638963584).epsilon(1e-10));
  CHECK_FALSE(r.wald_degenerate);
}

TEST_CASE("p_hat equal to p0 gives zero statistics") {
  const auto r = proportion_test({50, 100}, 0.5, 0.05);
  CHECK(r.z_null == 0.0);
  CHECK(r.z_wald == 0.0);
  CHECK(r.p_value_null == doctest::Approx(1.0));
  CHECK(r.p_value_wald == doctest::Approx(1.0));
}

TEST_CASE("normal critical value") {
  CHECK(normal_critical_value(0.05) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_critical_value(0.01) == doctest::Approx(2.5758293035489).epsilon(1e-12));
}

TEST_CASE("one-sided p-values") {
  CHECK(normal_p_value(2.0, Alternative::Greater) == doctest::Approx(0.0227501319481792).epsilon(1e-10));
  CHECK(normal_p_value(2.0, Alternative::Less) == doctest::Approx(1.0 - 0.0227501319481792).epsilon(1e-10));
  CHECK(normal_p_value(-2.0, Alternative::Less) == doctest::Approx(0.0227501319481792).epsilon(1e-10));
  CHECK(normal_p_value(INFINITY, Alternative::Greater) == 0.0);
  CHECK(normal_p_value(-INFINITY, Alternative::Greater) == 1.0);
}

TEST_CASE("degenerate p_hat flags the Wald statistic") {
  const auto all = proportion_test({20, 20}, 0.7, 0.05);
  CHECK(all.wald_degenerate);
  CHECK(std::isinf(all.z_wald));
  CHECK(all.z_wald > 0);
  CHECK(std::isfinite(all.z_null));
  CHECK(all.p_value_wald == 0.0);
  CHECK(all.ci_lower == 1.0);
  CHECK(all.ci_upper == 1.0);

  const auto none = proportion_test({0, 15}, 0.2, 0.05);
  CHECK(none.wald_degenerate);
  CHECK(none.z_wald < 0);
  CHECK(std::isinf(none.z_wald));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(proportion_test({1, 10}, 0.0, 0.05), nulleq::DomainError);
  CHECK_THROWS_AS(proportion_test({1, 10}, 1.0, 0.05), nulleq::DomainError);
  CHECK_THROWS_AS(proportion_test({1, 10}, 0.5, 1.5), nulleq::DomainError);
  CHECK_THROWS_AS(proportion_test({11, 10}, 0.5, 0.05), nulleq::DomainError);
  CHECK_THROWS_AS(proportion_test({0, 0}, 0.5, 0.05), nulleq::DomainError);
}

TEST_CASE("properties on random instances") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> ndist(1, 500);
  std::uniform_real_distribution<double> unit(0.001, 0.999);
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::uint64_t>(ndist(rng));
    const auto k = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
    const double p0 = unit(rng);
    const auto r = proportion_test({k, n}, p0, 0.05);
    if (std::isfinite(r.z_wald) && r.z_null != 0.0) {
      CHECK(std::signbit(r.z_null) == std::signbit(r.z_wald));
    }
    CHECK((r.z_null == 0.0) == (r.z_wald == 0.0));
    CHECK(r.ci_lower <= r.p_hat);
    CHECK(r.p_hat <= r.ci_upper);
    // |z_null| > |z_wald| exactly when the null variance is the smaller one.
    const double v0 = p0 * (1.0 - p0);
    const double vh = r.p_hat * (1.0 - r.p_hat);
    if (r.z_null != 0.0 && std::fabs(v0 - vh) > 1e-12) {
      CHECK((std::fabs(r.z_null) > std::fabs(r.z_wald)) == (v0 < vh));
    }
  }
}

TEST_CASE("z_null strictly decreasing in p0") {
  const ProportionData data{37, 90};
  double prev = INFINITY;
  for (int i = 1; i < 1000; ++i) {
    const double z = proportion_test(data, i / 1000.0, 0.05).z_null;
    CHECK(z < prev);
    prev = z;
  }
}
