#include "nulleq/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "nulleq/errors.hpp"

namespace nulleq::specfun {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kCfTolerance = 1e-15;
constexpr int kCfMaxIterations = 500;
constexpr int kSeriesMaxIterations = 100000;

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// zeta(k) for k = 2..30, used by the Taylor series of ln Gamma(1 + z).
constexpr std::array<double, 29> kZeta = {
    1.64493406684822643647, 1.2020569031595942854,  1.08232323371113819152,
    1.03692775514336992633, 1.01734306198444913971, 1.00834927738192282684,
    1.00407735619794433938, 1.00200839282608221442, 1.00099457512781808534,
    1.00049418860411946456, 1.0002460865533080483,  1.00012271334757848915,
    1.00006124813505870483, 1.00003058823630702049, 1.00001528225940865187,
    1.00000763719763789976, 1.00000381729326499984, 1.00000190821271655394,
    1.0000009539620338728,  1.00000047693298678781, 1.00000023845050272773,
    1.00000011921992596531, 1.00000005960818905126, 1.00000002980350351465,
    1.00000001490155482837, 1.00000000745071178984, 1.00000000372533402479,
    1.00000000186265972351, 1.00000000093132743242};

constexpr double kSeriesRadius = 0.25;

// ln Gamma(1 + z) for |z| <= 0.25; keeps relative precision near the zero.
double log_gamma1p_series(double z) {
  double sum = 0.0;
  double power = z;
  for (std::size_t i = 0; i < kZeta.size(); ++i) {
    power *= z;
    const double k = static_cast<double>(i + 2);
    const double term = kZeta[i] * power / k;
    sum += (i % 2 == 0) ? term : -term;
  }
  return -std::numbers::egamma * z + sum;
}

double log_gamma_lanczos(double x) {
  const double xm1 = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(series);
}

// x^a (1-x)^b / (a B(a,b)) times the continued fraction for I_x(a,b).
// `y` is 1 - x supplied by the caller so it need not be recomputed.
double beta_continued_fraction(double x, double y, double a, double b) {
  const double front = std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b)) / a;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIterations; ++m) {
    const double md = m;
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kCfTolerance) return front * h;
  }
  throw NumericError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                     ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

// (I_x(a,b), 1 - I_x(a,b)) with the smaller side always evaluated directly.
std::pair<double, double> inc_beta_pair(double x, double y, double a, double b) {
  if (x <= 0.0) return {0.0, 1.0};
  if (y <= 0.0) return {1.0, 0.0};
  if (x > (a + 1.0) / (a + b + 2.0)) {
    const double upper = beta_continued_fraction(y, x, b, a);
    return {1.0 - upper, upper};
  }
  const double lower = beta_continued_fraction(x, y, a, b);
  return {lower, 1.0 - lower};
}

void check_shape(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

double gamma_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int n = 0; n < kSeriesMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kCfTolerance) {
      return sum * std::exp(-x + s * std::log(x) - log_gamma(s));
    }
  }
  throw NumericError("incomplete gamma series did not converge");
}

double gamma_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kCfMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kCfTolerance) return std::exp(-x + s * std::log(x) - log_gamma(s)) * h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

std::pair<double, double> inc_gamma_pair(double s, double x) {
  check_shape(s, "shape s");
  if (std::isnan(x) || x < 0.0) throw DomainError("incomplete gamma requires x >= 0");
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  if (x < s + 1.0) {
    const double p = gamma_series(s, x);
    return {p, 1.0 - p};
  }
  const double q = gamma_continued_fraction(s, x);
  return {1.0 - q, q};
}

// (cdf, sf) evaluated together; each side comes from a direct evaluation
// whenever it is the smaller one.
std::pair<double, double> cdf_pair(const DistParams& d, double x) {
  validate(d);
  if (std::isnan(x)) throw DomainError("cdf argument is NaN");
  switch (d.family) {
    case Family::StudentT: {
      if (std::isinf(x)) return x > 0 ? std::pair{1.0, 0.0} : std::pair{0.0, 1.0};
      const double nu = d.df1;
      const double t2 = x * x;
      // tail = P(T > |x|) = I_{nu/(nu+t^2)}(nu/2, 1/2) / 2
      const auto [tail2, body2] = inc_beta_pair(nu / (nu + t2), t2 / (nu + t2), 0.5 * nu, 0.5);
      const double tail = 0.5 * tail2;
      const double body = 0.5 + 0.5 * body2;
      return x >= 0.0 ? std::pair{body, tail} : std::pair{tail, body};
    }
    case Family::FisherF: {
      if (x <= 0.0) return {0.0, 1.0};
      if (std::isinf(x)) return {1.0, 0.0};
      const double num = d.df1 * x;
      const double den = num + d.df2;
      return inc_beta_pair(num / den, d.df2 / den, 0.5 * d.df1, 0.5 * d.df2);
    }
    case Family::Beta: {
      if (x <= 0.0) return {0.0, 1.0};
      if (x >= 1.0) return {1.0, 0.0};
      return inc_beta_pair(x, 1.0 - x, d.df1, d.df2);
    }
    case Family::ChiSquare: {
      if (x <= 0.0) return {0.0, 1.0};
      return inc_gamma_pair(0.5 * d.df1, 0.5 * x);
    }
  }
  throw DomainError("unknown distribution family");
}

struct Support {
  double lo;
  double hi;
};

Support support_of(const DistParams& d) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (d.family) {
    case Family::StudentT: return {-inf, inf};
    case Family::Beta: return {0.0, 1.0};
    default: return {0.0, inf};
  }
}

double initial_guess(const DistParams& d) {
  switch (d.family) {
    case Family::StudentT: return 1.0;
    case Family::FisherF: return 1.0;
    case Family::Beta: return d.df1 / (d.df1 + d.df2);
    case Family::ChiSquare: return d.df1;
  }
  return 1.0;
}

// Solves cdf(d, x) = target (upper == false) or sf(d, x) = target
// (upper == true) for x in [lo, +inf) or [0, 1]. Brackets by doubling from
// a family-specific guess, then runs Newton steps that fall back to
// bisection whenever they leave the bracket.
double solve_for_probability(const DistParams& d, double target, bool upper, double lo) {
  const Support support = support_of(d);
  auto residual = [&](double x) {
    const auto [c, s] = cdf_pair(d, x);
    return upper ? (target - s) : (c - target);  // increasing in x either way
  };

  double hi;
  if (std::isinf(support.hi)) {
    hi = std::max(initial_guess(d), lo + 1.0);
    int doublings = 0;
    while (residual(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 2000 || std::isinf(hi)) throw NumericError("quantile bracket search diverged");
    }
  } else {
    hi = support.hi;
  }

  double x = initial_guess(d);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  constexpr int kMaxIterations = 400;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;

    const double density = pdf(d, x);
    double next = (density > 0.0 && std::isfinite(density)) ? x - f / density : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);

    const double step = std::fabs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x)) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x))) {
      break;
    }
  }
  if (std::fabs(residual(x)) > 1e-10) {
    throw NumericError(std::string("quantile solver did not converge for ") + to_string(d.family));
  }
  return x;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma requires finite x > 0");
  if (x < 0.5) {
    // Gamma(x) = Gamma(1 + x) / x keeps the small-x branch away from reflection.
    const double shifted = x <= kSeriesRadius ? log_gamma1p_series(x) : log_gamma_lanczos(1.0 + x);
    return shifted - std::log(x);
  }
  if (std::fabs(x - 1.0) <= kSeriesRadius) return log_gamma1p_series(x - 1.0);
  if (std::fabs(x - 2.0) <= kSeriesRadius) {
    const double z = x - 2.0;
    return log_gamma1p_series(z) + std::log1p(z);
  }
  return log_gamma_lanczos(x);
}

double log_beta(double a, double b) {
  check_shape(a, "shape a");
  check_shape(b, "shape b");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double x, double a, double b) {
  check_shape(a, "shape a");
  check_shape(b, "shape b");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta requires 0 <= x <= 1");
  return inc_beta_pair(x, 1.0 - x, a, b).first;
}

double reg_inc_gamma_lower(double s, double x) { return inc_gamma_pair(s, x).first; }

double reg_inc_gamma_upper(double s, double x) { return inc_gamma_pair(s, x).second; }

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::StudentT: return "StudentT";
    case Family::FisherF: return "FisherF";
    case Family::Beta: return "Beta";
    case Family::ChiSquare: return "ChiSquare";
  }
  return "unknown";
}

void validate(const DistParams& d) {
  switch (d.family) {
    case Family::StudentT:
    case Family::ChiSquare:
      check_shape(d.df1, "degrees of freedom");
      return;
    case Family::FisherF:
      check_shape(d.df1, "numerator degrees of freedom");
      check_shape(d.df2, "denominator degrees of freedom");
      return;
    case Family::Beta:
      check_shape(d.df1, "shape a");
      check_shape(d.df2, "shape b");
      return;
  }
  throw DomainError("unknown distribution family");
}

double pdf(const DistParams& d, double x) {
  validate(d);
  if (std::isnan(x)) throw DomainError("pdf argument is NaN");
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (d.family) {
    case Family::StudentT: {
      const double nu = d.df1;
      return std::exp(log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
                      0.5 * (nu + 1.0) * std::log1p(x * x / nu));
    }
    case Family::FisherF: {
      if (x < 0.0 || std::isinf(x)) return 0.0;
      const double d1 = d.df1;
      const double d2 = d.df2;
      if (x == 0.0) return d1 < 2.0 ? inf : (d1 == 2.0 ? 1.0 : 0.0);
      return std::exp(0.5 * d1 * std::log(d1 * x) + 0.5 * d2 * std::log(d2) - 0.5 * (d1 + d2) * std::log(d1 * x + d2) -
                      std::log(x) - log_beta(0.5 * d1, 0.5 * d2));
    }
    case Family::Beta: {
      const double a = d.df1;
      const double b = d.df2;
      if (x < 0.0 || x > 1.0) return 0.0;
      if (x == 0.0) return a < 1.0 ? inf : (a == 1.0 ? b : 0.0);
      if (x == 1.0) return b < 1.0 ? inf : (b == 1.0 ? a : 0.0);
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
    }
    case Family::ChiSquare: {
      const double k = d.df1;
      if (x < 0.0 || std::isinf(x)) return 0.0;
      if (x == 0.0) return k < 2.0 ? inf : (k == 2.0 ? 0.5 : 0.0);
      return std::exp((0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * std::numbers::ln2 - log_gamma(0.5 * k));
    }
  }
  throw DomainError("unknown distribution family");
}

double cdf(const DistParams& d, double x) { return cdf_pair(d, x).first; }

double sf(const DistParams& d, double x) { return cdf_pair(d, x).second; }

double quantile(const DistParams& d, double q) {
  validate(d);
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile requires 0 < q < 1");
  if (d.family == Family::StudentT) {
    if (q == 0.5) return 0.0;
    if (q < 0.5) return -solve_for_probability(d, q, true, 0.0);
    return solve_for_probability(d, q, false, 0.0);
  }
  return solve_for_probability(d, q, false, 0.0);
}

double upper_quantile(const DistParams& d, double q) {
  validate(d);
  if (!(q > 0.0 && q < 1.0)) throw DomainError("upper_quantile requires 0 < q < 1");
  if (d.family == Family::StudentT) {
    if (q == 0.5) return 0.0;
    if (q > 0.5) return -solve_for_probability(d, 1.0 - q, true, 0.0);
    return solve_for_probability(d, q, true, 0.0);
  }
  return solve_for_probability(d, q, true, 0.0);
}

}  // namespace nulleq::specfun
