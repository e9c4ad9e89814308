#include "nulleq/ttest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

namespace nulleq::ttest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_n(std::size_t n) {
  if (n < 2) throw DomainError("one-sample t-test needs n >= 2, got " + std::to_string(n));
}

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::Degenerate: return "degenerate";
    case Status::Boundary: return "boundary";
  }
  return "unknown";
}

TTestResult t_test(const Sample& y, double mu0) {
  if (!std::isfinite(mu0)) throw DomainError("mu0 must be finite");
  const auto values = y.values();
  const std::size_t n = values.size();
  require_n(n);
  const double nd = static_cast<double>(n);

  TTestResult r;
  r.n = n;
  r.mu0 = mu0;
  r.df = n - 1;

  if (all_equal(values)) {
    r.mean = values.front();
    const double dev = r.mean - mu0;
    if (dev == 0.0) {
      r.status = Status::Degenerate;
      return r;
    }
    r.status = Status::Boundary;
    r.s0_2 = dev * dev;
    r.ssto = nd * dev * dev;
    r.sst = r.ssto;
    r.t = std::copysign(kInf, dev);
    r.t0 = std::copysign(std::sqrt(nd), dev);
    r.r_ratio = kInf;
    r.cos2_theta = 1.0;
    r.p_value_t = 0.0;
    r.p_value_t0 = 0.0;
    return r;
  }

  // Work in coordinates centred at mu0 so mean - mu0 keeps its relative
  // precision when the data sit far from zero. Mean first (with one
  // correction pass), then centred squares.
  double sum = 0.0;
  for (double v : values) sum += v - mu0;
  double dev = sum / nd;
  double correction = 0.0;
  for (double v : values) correction += (v - mu0) - dev;
  dev += correction / nd;
  r.mean = mu0 + dev;

  for (double v : values) {
    const double c0 = v - mu0;
    const double c = c0 - dev;
    r.sse += c * c;
    r.ssto += c0 * c0;
  }
  r.sst = nd * dev * dev;

  r.s2 = r.sse / (nd - 1.0);
  r.s0_2 = r.ssto / nd;
  r.t = dev / std::sqrt(r.s2 / nd);
  r.t0 = dev / std::sqrt(r.s0_2 / nd);
  r.r_ratio = r.ssto / r.sse;
  r.cos2_theta = r.sst / r.ssto;

  const double abs_t = std::fabs(r.t);
  r.p_value_t = std::min(1.0, 2.0 * specfun::sf(specfun::DistParams::student_t(nd - 1.0), abs_t));
  // Independent route: T0^2 / n ~ Beta(1/2, (n-1)/2) under H0.
  const double scaled = std::min(1.0, r.t0 * r.t0 / nd);
  r.p_value_t0 = specfun::sf(specfun::DistParams::beta(0.5, 0.5 * (nd - 1.0)), scaled);
  return r;
}

double map_t0_to_t(double t0, std::size_t n) {
  require_n(n);
  const double nd = static_cast<double>(n);
  if (!(std::fabs(t0) < std::sqrt(nd))) throw DomainError("|t0| must be below sqrt(n)");
  return std::sqrt(nd - 1.0) * t0 / std::sqrt(nd - t0 * t0);
}

double map_critical_value(double c_alpha, std::size_t n) {
  if (!(c_alpha >= 0.0)) throw DomainError("critical value must be non-negative");
  return map_t0_to_t(c_alpha, n);
}

double t_critical_value(std::size_t n, double alpha) {
  require_n(n);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return specfun::upper_quantile(specfun::DistParams::student_t(static_cast<double>(n) - 1.0), 0.5 * alpha);
}

double t0_critical_value(std::size_t n, double alpha) {
  require_n(n);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  return std::sqrt(nd * specfun::upper_quantile(specfun::DistParams::beta(0.5, 0.5 * (nd - 1.0)), alpha));
}

LrtRatio lrt_ratio(const Sample& y, double mu0) {
  const TTestResult r = t_test(y, mu0);
  if (r.status != Status::Ok) throw DegenerateError("likelihood ratio undefined: SSE = 0");
  const double nd = static_cast<double>(r.n);
  return {1.0 + r.t * r.t / (nd - 1.0), 1.0 / (1.0 - r.t0 * r.t0 / nd)};
}

Geometry geometry(const Sample& y, double mu0) {
  const TTestResult r = t_test(y, mu0);
  if (r.status == Status::Degenerate) throw DegenerateError("y - mu0 is the zero vector");
  // cos(theta) = sqrt(n) (mean - mu0) / ||v||, sin(theta) = sqrt(SSE) / ||v||
  const double theta = std::atan2(std::sqrt(r.sse), std::sqrt(static_cast<double>(r.n)) * (r.mean - mu0));
  return {theta, r.ssto, r.sst, r.sse};
}

}  // namespace nulleq::ttest
