#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nulleq/errors.hpp"
#include "nulleq/ttest.hpp"

using namespace nulleq;
using namespace nulleq::ttest;

namespace {

bool rel_close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b)); }

// Student t with 2 df: two-sided tail 1 - t / sqrt(2 + t^2); quantile
// (2p - 1) / sqrt(2 p (1 - p)).
double t2_two_sided(double t) { return 1.0 - std::fabs(t) / std::sqrt(2.0 + t * t); }
double t2_quantile(double p) { return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p)); }

Sample random_sample(std::mt19937_64& rng, std::size_t n, double shift, double scale) {
  std::normal_distribution<double> g(shift, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return Sample(v);
}

}  // namespace

TEST_CASE("three-point worked example") {
  const Sample y({1, 2, 3});
  const auto r = t_test(y, 0.0);
  CHECK(r.status == Status::Ok);
  CHECK(rel_close(r.t, 2.0 * std::sqrt(3.0), 1e-14));
  CHECK(rel_close(r.t0, 6.0 / std::sqrt(14.0), 1e-14));
  CHECK(r.t == doctest::Approx(3.4641016).epsilon(1e-7));
  CHECK(r.t0 == doctest::Approx(1.6035675).epsilon(1e-7));
  CHECK(rel_close(r.r_ratio, 7.0, 1e-14));
  CHECK(rel_close(r.ssto, 14.0, 1e-15));
  CHECK(rel_close(r.sst, 12.0, 1e-15));
  CHECK(rel_close(r.sse, 2.0, 1e-15));
  CHECK(r.s2 == doctest::Approx(1.0));
  CHECK(r.s0_2 == doctest::Approx(14.0 / 3.0));
  CHECK(r.df == 2);
  CHECK(std::fabs(r.p_value_t - t2_two_sided(r.t)) <= 1e-12);
  CHECK(r.p_value_t == doctest::Approx(0.0741800).epsilon(1e-6));
  CHECK(std::fabs(r.p_value_t - r.p_value_t0) <= 1e-10);
}

TEST_CASE("all observations equal to mu0 is degenerate") {
  const auto r = t_test(Sample({5, 5, 5, 5}), 5.0);
  CHECK(r.status == Status::Degenerate);
  CHECK(r.t == 0.0);
  CHECK(r.t0 == 0.0);
  CHECK(r.p_value_t == 1.0);
  CHECK(r.p_value_t0 == 1.0);
  CHECK_THROWS_AS(lrt_ratio(Sample({5, 5, 5, 5}), 5.0), DegenerateError);
  CHECK_THROWS_AS(geometry(Sample({5, 5, 5, 5}), 5.0), DegenerateError);
}

TEST_CASE("all observations equal but not mu0 sits on the boundary") {
  const auto r = t_test(Sample({2, 2, 2, 2}), 0.5);
  CHECK(r.status == Status::Boundary);
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0);
  CHECK(r.t0 == 2.0);
  CHECK(r.p_value_t == 0.0);
  CHECK(r.p_value_t0 == 0.0);
  const auto below = t_test(Sample({-1, -1, -1}), 0.0);
  CHECK(below.t0 == doctest::Approx(-std::sqrt(3.0)));
  CHECK(below.t < 0);
  CHECK_THROWS_AS(lrt_ratio(Sample({2, 2, 2}), 0.5), DegenerateError);
  // v is parallel to 1
  CHECK(geometry(Sample({2, 2, 2}), 0.5).theta == 0.0);
  CHECK(geometry(Sample({-2, -2, -2}), 0.5).theta == doctest::Approx(std::numbers::pi));
}

TEST_CASE("sample symmetric about mu0") {
  const auto r = t_test(Sample({-1, 1}), 0.0);
  CHECK(r.t == 0.0);
  CHECK(r.t0 == 0.0);
  CHECK(r.p_value_t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.p_value_t0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(geometry(Sample({-1, 1}), 0.0).theta == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("n below 2 is rejected") {
  CHECK_THROWS_AS(t_test(Sample({1.0}), 0.0), DomainError);
  CHECK_THROWS_AS(Sample(std::vector<double>{}), DataError);
  CHECK_THROWS_AS(Sample({1.0, NAN}), DataError);
}

TEST_CASE("map_t0_to_t") {
  CHECK(map_t0_to_t(0.0, 7) == 0.0);
  CHECK(map_t0_to_t(6.0 / std::sqrt(14.0), 3) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(map_t0_to_t(1.6035675, 3) == doctest::Approx(3.4641016).epsilon(1e-6));
  CHECK(map_t0_to_t(std::sqrt(5.0) * (1.0 - 1e-9), 5) > 1e3);
  CHECK(map_t0_to_t(-0.7, 4) == doctest::Approx(-map_t0_to_t(0.7, 4)));
  CHECK_THROWS_AS(map_t0_to_t(std::sqrt(3.0), 3), DomainError);
  CHECK_THROWS_AS(map_t0_to_t(-2.0, 3), DomainError);
  double prev = -INFINITY;
  for (int i = -999; i <= 999; ++i) {
    const double v = map_t0_to_t(i / 1000.0 * std::sqrt(6.0), 6);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("critical values on both scales") {
  CHECK(map_critical_value(0.0, 10) == 0.0);
  CHECK(map_critical_value(1.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(map_critical_value(std::sqrt(3.0), 3), DomainError);
  CHECK_THROWS_AS(map_critical_value(-0.1, 3), DomainError);

  // n = 3: T0^2 / 3 ~ Beta(1/2, 1) has cdf sqrt(x), so c = (1 - alpha) sqrt(3).
  const double c = t0_critical_value(3, 0.05);
  CHECK(c == doctest::Approx(0.95 * std::sqrt(3.0)).epsilon(1e-10));
  CHECK(map_critical_value(c, 3) == doctest::Approx(t2_quantile(0.975)).epsilon(1e-9));
  CHECK(map_critical_value(c, 3) == doctest::Approx(4.3026527).epsilon(1e-7));
  CHECK(t_critical_value(3, 0.05) == doctest::Approx(t2_quantile(0.975)).epsilon(1e-10));

  for (std::size_t n : {2u, 3u, 5u, 12u, 50u, 400u}) {
    for (double alpha : {0.01, 0.05, 0.1}) {
      CHECK(map_critical_value(t0_critical_value(n, alpha), n) ==
            doctest::Approx(t_critical_value(n, alpha)).epsilon(1e-8));
    }
  }
}

TEST_CASE("lrt ratio through both statistics") {
  const auto r = lrt_ratio(Sample({1, 2, 3}), 0.0);
  CHECK(r.via_t == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(r.via_t0 == doctest::Approx(7.0).epsilon(1e-14));
  const auto same = lrt_ratio(Sample({1, 2, 3}), 2.0);
  CHECK(same.via_t == 1.0);
  CHECK(same.via_t0 == 1.0);
}

TEST_CASE("geometry of the three-point sample") {
  const auto g = geometry(Sample({1, 2, 3}), 0.0);
  CHECK(std::cos(g.theta) * std::cos(g.theta) == doctest::Approx(12.0 / 14.0).epsilon(1e-14));
  CHECK(g.ssto == doctest::Approx(14.0));
}

TEST_CASE("identities on random samples") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> ndist(2, 50);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  std::uniform_real_distribution<double> logscale(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::size_t>(ndist(rng));
    const double scale = std::pow(10.0, logscale(rng));
    const double center = std::uniform_real_distribution<double>(-100, 100)(rng);
    const Sample y = random_sample(rng, n, center + shift(rng) * scale, scale);
    const double mu0 = center;
    const auto r = t_test(y, mu0);
    REQUIRE(r.status == Status::Ok);
    const double nd = static_cast<double>(n);

    CHECK(rel_close(r.ssto, r.sst + r.sse, 1e-12));
    CHECK(rel_close(r.t0 * r.t0, nd * r.cos2_theta, 1e-12));
    CHECK(rel_close(map_t0_to_t(r.t0, n), r.t, 1e-10));
    const auto lrt = lrt_ratio(y, mu0);
    CHECK(rel_close(lrt.via_t, r.r_ratio, 1e-10));
    CHECK(rel_close(lrt.via_t0, r.r_ratio, 1e-10));
    const auto g = geometry(y, mu0);
    const double cos2 = std::cos(g.theta) * std::cos(g.theta);
    CHECK(rel_close(r.t0 * r.t0, nd * cos2, 1e-10));
    if (std::fabs(std::cos(g.theta)) > 1e-3) {
      const double cot = std::cos(g.theta) / std::sin(g.theta);
      CHECK(rel_close(r.t * r.t, (nd - 1.0) * cot * cot, 1e-10));
    }
    CHECK(std::fabs(r.p_value_t - r.p_value_t0) <= 1e-10);
  }
}

TEST_CASE("decision equivalence between T and T0") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> ndist(2, 50);
  std::uniform_real_distribution<double> effect(-1.5, 1.5);
  int disagreements = 0;
  int rejections = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::size_t>(ndist(rng));
    const Sample y = random_sample(rng, n, effect(rng), 1.0);
    const auto r = t_test(y, 0.0);
    for (double alpha : {0.01, 0.05, 0.1}) {
      const bool by_t = std::fabs(r.t) >= t_critical_value(n, alpha);
      const bool by_t0 = std::fabs(r.t0) >= t0_critical_value(n, alpha);
      disagreements += by_t != by_t0;
      rejections += by_t;
    }
  }
  CHECK(disagreements == 0);
  CHECK(rejections > 100);
}

TEST_CASE("location-scale equivariance") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + i % 30;
    const Sample y = random_sample(rng, n, 0.4, 1.0);
    const double mu0 = 0.1;
    const double a = std::uniform_real_distribution<double>(-20, 20)(rng);
    const double b = std::uniform_real_distribution<double>(-50, 50)(rng);
    if (std::fabs(a) < 0.05) continue;
    std::vector<double> z(y.values().begin(), y.values().end());
    for (auto& v : z) v = a * v + b;
    const auto r1 = t_test(y, mu0);
    const auto r2 = t_test(Sample(z), a * mu0 + b);
    CHECK(rel_close(r1.t * r1.t, r2.t * r2.t, 1e-10));
    CHECK(rel_close(r1.t0 * r1.t0, r2.t0 * r2.t0, 1e-10));
    CHECK(rel_close(r1.r_ratio, r2.r_ratio, 1e-10));
    CHECK(std::fabs(r1.cos2_theta - r2.cos2_theta) <= 1e-10);
  }
}
