#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

using namespace nulleq::specfun;
using nulleq::DomainError;

namespace {

// Composite Simpson on [lo, hi]; test-only oracle for the incomplete beta.
template <class F>
double simpson(F f, double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double beta_by_quadrature(double x, double a, double b) {
  auto integrand = [&](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  return simpson(integrand, 0.0, x, 20000) / simpson(integrand, 0.0, 1.0, 20000);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Chi-square with even df = 2m: 1 - exp(-x/2) * sum_{j<m} (x/2)^j / j!
double chi_square_even_cdf(int df, double x) {
  double sum = 0.0;
  for (int j = 0; j < df / 2; ++j) sum += std::pow(x / 2.0, j) / factorial(j);
  return 1.0 - std::exp(-x / 2.0) * sum;
}

}  // namespace

TEST_CASE("log_gamma matches closed forms") {
  CHECK(std::fabs(log_gamma(1.0)) < 1e-16);
  CHECK(std::fabs(log_gamma(2.0)) < 1e-16);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  // 9! by integer multiplication
  long long fact9 = 1;
  for (int i = 2; i <= 9; ++i) fact9 *= i;
  CHECK(fact9 == 362880);
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(static_cast<double>(fact9))).epsilon(1e-14));
}

TEST_CASE("log_gamma relative error on [1e-3, 1e6]") {
  // 40-digit multiprecision references at the exact binary value of each x.
  const std::vector<std::pair<double, double>> ref = {
      {0.001, 6.907178885383853661684},      {0.1, 2.252712651734205902006},
      {0.5, 0.5723649429247000870717},       {0.9999, 0.0000577297915611938628083},
      {1.0001, -0.00005771334222047126800518}, {1.2, -0.08537409000331583688375},
      {1.5, -0.1207822376352452223455},      {1.9, -0.03898427592308336167429},
      {2.0001, 0.00004228165811291994631743}, {2.3, 0.1541894549596304745014},
      {3.7, 1.4280723266653881292},          {10.0, 12.80182748008146961121},
      {57.3, 173.5638682796914189366},       {1000.5, 5908.674175848677488684},
      {123456.7, 1323900.97539091826082},    {1000000.0, 12815504.56914761165998}};
  for (const auto& [x, expected] : ref) {
    INFO("x = " << x);
    CHECK(std::fabs(log_gamma(x) - expected) <= 1e-13 * std::fabs(expected));
  }
}

TEST_CASE("log_gamma tracks the recurrence lnG(x+1) = lnG(x) + ln x") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-3.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double x = std::pow(10.0, unif(rng));
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    CHECK(std::fabs(lhs - rhs) <= 1e-13 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("log_gamma domain errors") {
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
  CHECK_THROWS_AS(log_gamma(INFINITY), DomainError);
}

TEST_CASE("reg_inc_beta closed forms and endpoints") {
  for (double a : {0.1, 0.5, 1.0, 3.0, 17.5, 250.0}) {
    CHECK(std::fabs(reg_inc_beta(0.5, a, a) - 0.5) <= 1e-12);
    CHECK(reg_inc_beta(0.0, a, 2.0) == 0.0);
    CHECK(reg_inc_beta(1.0, a, 2.0) == 1.0);
  }
  CHECK(std::fabs(reg_inc_beta(0.3, 1.0, 2.0) - 0.51) <= 1e-12);
  // I_x(1, b) = 1 - (1-x)^b and I_x(a, 1) = x^a
  for (double x : {0.01, 0.2, 0.5, 0.77, 0.999}) {
    for (double s : {0.3, 1.0, 2.5, 40.0}) {
      CHECK(std::fabs(reg_inc_beta(x, 1.0, s) - (1.0 - std::pow(1.0 - x, s))) <= 1e-12);
      CHECK(std::fabs(reg_inc_beta(x, s, 1.0) - std::pow(x, s)) <= 1e-12);
    }
  }
}

TEST_CASE("reg_inc_beta agrees with Simpson quadrature") {
  for (double a : {2.0, 3.0, 4.5, 7.0}) {
    for (double b : {2.0, 3.5, 6.0}) {
      for (double x : {0.05, 0.3, 0.5, 0.8, 0.95}) {
        INFO("a=" << a << " b=" << b << " x=" << x);
        CHECK(std::fabs(reg_inc_beta(x, a, b) - beta_by_quadrature(x, a, b)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("reg_inc_beta complement property") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> logshape(-1.0, 2.5);
  for (int i = 0; i < 2000; ++i) {
    const double x = unit(rng);
    const double a = std::pow(10.0, logshape(rng));
    const double b = std::pow(10.0, logshape(rng));
    CHECK(std::fabs(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) - 1.0) <= 1e-12);
  }
}

TEST_CASE("reg_inc_beta domain errors") {
  CHECK_THROWS_AS(reg_inc_beta(-0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(reg_inc_beta(1.1, 1, 1), DomainError);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0, 1), DomainError);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 1, -2), DomainError);
}

TEST_CASE("reg_inc_gamma_lower closed forms") {
  CHECK(std::fabs(reg_inc_gamma_lower(1.0, 1.0) - (1.0 - std::exp(-1.0))) <= 1e-12);
  CHECK(reg_inc_gamma_lower(3.3, 0.0) == 0.0);
  CHECK(std::fabs(cdf(DistParams::chi_square(2), 2.0) - (1.0 - std::exp(-1.0))) <= 1e-12);
  for (int df : {2, 4, 6, 10, 30}) {
    for (double x : {0.1, 1.0, 3.0, 9.0, 25.0, 60.0}) {
      INFO("df=" << df << " x=" << x);
      CHECK(std::fabs(cdf(DistParams::chi_square(df), x) - chi_square_even_cdf(df, x)) <= 1e-12);
    }
  }
  CHECK(std::fabs(reg_inc_gamma_lower(2.5, 4.0) + reg_inc_gamma_upper(2.5, 4.0) - 1.0) <= 1e-15);
  CHECK_THROWS_AS(reg_inc_gamma_lower(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(reg_inc_gamma_lower(1.0, -1.0), DomainError);
}

TEST_CASE("cdf closed forms") {
  CHECK(std::fabs(cdf(DistParams::student_t(1), 1.0) - 0.75) <= 1e-12);
  CHECK(std::fabs(cdf(DistParams::fisher_f(2, 2), 1.0) - 0.5) <= 1e-12);
  const double t = 2.0 * std::sqrt(3.0);
  CHECK(std::fabs(cdf(DistParams::student_t(2), t) - (0.5 + t / (2.0 * std::sqrt(2.0 + t * t)))) <= 1e-12);
  CHECK(cdf(DistParams::student_t(2), 3.4641016) == doctest::Approx(0.9629100).epsilon(1e-7));
  for (double x : {-30.0, -2.0, -0.3, 0.0, 0.4, 1.7, 12.0}) {
    CHECK(std::fabs(cdf(DistParams::student_t(1), x) - (0.5 + std::atan(x) / std::numbers::pi)) <= 1e-12);
    CHECK(std::fabs(cdf(DistParams::student_t(2), x) - (0.5 + x / (2.0 * std::sqrt(2.0 + x * x)))) <= 1e-12);
  }
  for (double x : {0.01, 0.5, 1.0, 3.0, 100.0}) {
    CHECK(std::fabs(cdf(DistParams::fisher_f(2, 2), x) - x / (1.0 + x)) <= 1e-12);
  }
}

TEST_CASE("cdf and sf are complementary and sf keeps small tails") {
  const DistParams t5 = DistParams::student_t(5);
  CHECK(std::fabs(cdf(t5, 1.3) + sf(t5, 1.3) - 1.0) <= 1e-15);
  // Cauchy upper tail at 1e6 is ~ 1/(pi * 1e6)
  const double tail = sf(DistParams::student_t(1), 1e6);
  CHECK(tail == doctest::Approx(0.5 - std::atan(1e6) / std::numbers::pi).epsilon(1e-9));
  CHECK(tail > 3e-7);
}

TEST_CASE("cdf monotone on grids") {
  const std::vector<DistParams> families = {DistParams::student_t(0.7), DistParams::student_t(9),
                                            DistParams::fisher_f(3, 11),  DistParams::fisher_f(0.5, 4),
                                            DistParams::beta(0.5, 7.5),   DistParams::beta(12, 0.9),
                                            DistParams::chi_square(1),    DistParams::chi_square(44)};
  for (const auto& d : families) {
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = d.family == Family::Beta ? i / 2000.0 : (d.family == Family::StudentT ? -20.0 + i * 0.02 : i * 0.05);
      const double c = cdf(d, x);
      CHECK(c >= prev);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      prev = c;
    }
  }
}

TEST_CASE("quantile closed forms") {
  for (double nu : {1.0, 2.0, 7.5, 100.0}) CHECK(quantile(DistParams::student_t(nu), 0.5) == 0.0);
  CHECK(std::fabs(quantile(DistParams::student_t(1), 0.75) - 1.0) <= 1e-10);
  CHECK(std::fabs(quantile(DistParams::fisher_f(2, 2), 0.5) - 1.0) <= 1e-10);
  CHECK(std::fabs(quantile(DistParams::student_t(2), 0.975) - 4.302652729749464) <= 1e-9);
  // chi-square(1) 0.95 quantile is z_{0.025}^2
  CHECK(std::sqrt(quantile(DistParams::chi_square(1), 0.95)) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(upper_quantile(DistParams::student_t(1), 0.25) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(upper_quantile(DistParams::student_t(1), 0.75) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("quantile round trip on random parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> logdf(-0.5, 2.5);
  // Beta shapes are kept where the quantile is resolvable in doubles: with
  // a >> 1 > b the mass sits within 1e-14 of 1 and neighbouring doubles
  // differ in cdf by more than the 1e-10 target.
  std::uniform_real_distribution<double> logshape(-0.3, 2.0);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int i = 0; i < 1500; ++i) {
    const double q = unit(rng);
    const auto family = static_cast<Family>(pick(rng));
    const bool beta = family == Family::Beta;
    const double a = std::pow(10.0, beta ? logshape(rng) : logdf(rng));
    const double b = std::pow(10.0, beta ? logshape(rng) : logdf(rng));
    DistParams d{family, a, b};
    const double x = quantile(d, q);
    INFO(to_string(d.family) << " df1=" << a << " df2=" << b << " q=" << q);
    CHECK(std::fabs(cdf(d, x) - q) <= 1e-9);
    const double xu = upper_quantile(d, q);
    CHECK(std::fabs(sf(d, xu) - q) <= 1e-9);
  }
}

TEST_CASE("quantile reports non-convergence where doubles cannot resolve it") {
  CHECK_THROWS_AS(quantile(DistParams::beta(258.20506401539433, 0.35354854116037088), 0.98161558610359578),
                  nulleq::NumericError);
}

TEST_CASE("two-sided t tail equals F(1, nu) tail of t^2") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tdist(0.0, 8.0);
  std::uniform_real_distribution<double> nudist(1.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = tdist(rng);
    const double nu = nudist(rng);
    const double via_t = 2.0 * sf(DistParams::student_t(nu), t);
    const double via_f = sf(DistParams::fisher_f(1.0, nu), t * t);
    CHECK(std::fabs(via_t - via_f) <= 1e-10);
  }
}

TEST_CASE("unread parameters are ignored") {
  DistParams t{Family::StudentT, 4.0, -7.0};
  CHECK_NOTHROW(cdf(t, 1.0));
  DistParams c{Family::ChiSquare, 3.0, std::nan("")};
  CHECK_NOTHROW(cdf(c, 1.0));
  CHECK_THROWS_AS(cdf(DistParams::fisher_f(2, 0), 1.0), DomainError);
  CHECK_THROWS_AS(cdf(DistParams::beta(-1, 2), 0.5), DomainError);
  CHECK_THROWS_AS(quantile(DistParams::student_t(3), 0.0), DomainError);
  CHECK_THROWS_AS(quantile(DistParams::student_t(3), 1.0), DomainError);
}
