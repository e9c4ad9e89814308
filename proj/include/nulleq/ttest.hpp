#pragma once

#include "nulleq/sample.hpp"

namespace nulleq::ttest {

enum class Status {
  Ok,
  /// All observations equal mu0: both statistics are 0/0. Reported as 0
  /// with p-values 1.
  Degenerate,
  /// All observations equal but differ from mu0: S = 0, |T0| = sqrt(n),
  /// T infinite, p-values 0.
  Boundary,
};

const char* to_string(Status status) noexcept;

struct TTestResult {
  Status status = Status::Ok;
  std::size_t n = 0;
  double mean = 0.0;
  double mu0 = 0.0;
  double s2 = 0.0;    ///< sum (y - mean)^2 / (n - 1)
  double s0_2 = 0.0;  ///< sum (y - mu0)^2 / n
  double t = 0.0;
  double t0 = 0.0;
  double r_ratio = 1.0;  ///< SSTO / SSE
  double ssto = 0.0;
  double sst = 0.0;
  double sse = 0.0;
  double cos2_theta = 0.0;
  std::size_t df = 0;
  double p_value_t = 1.0;   ///< two-sided StudentT(n - 1) tail at |T|
  double p_value_t0 = 1.0;  ///< Beta(1/2, (n - 1)/2) upper tail at T0^2 / n
};

/// One-sample t-test of H0: mu = mu0 in the traditional form (T, sample
/// variance) and the null form (T0, variance about mu0). Requires n >= 2.
TTestResult t_test(const Sample& y, double mu0);

/// T as a function of T0: sqrt(n - 1) t0 / sqrt(n - t0^2), |t0| < sqrt(n).
double map_t0_to_t(double t0, std::size_t n);

/// The T-scale critical value whose rejection region {|T| >= value} equals
/// {|T0| >= c_alpha}. Requires 0 <= c_alpha < sqrt(n).
double map_critical_value(double c_alpha, std::size_t n);

/// Size-alpha critical value for |T|: upper alpha/2 point of StudentT(n-1).
double t_critical_value(std::size_t n, double alpha);

/// Size-alpha critical value for |T0|, from the null law
/// T0^2 / n ~ Beta(1/2, (n - 1)/2).
double t0_critical_value(std::size_t n, double alpha);

struct LrtRatio {
  double via_t;   ///< 1 + T^2 / (n - 1)
  double via_t0;  ///< 1 / (1 - T0^2 / n)
};

/// Ratio of the null and full residual sums of squares, through both test
/// statistics. Throws DegenerateError when SSE = 0.
LrtRatio lrt_ratio(const Sample& y, double mu0);

struct Geometry {
  double theta;  ///< angle between y - mu0 1 and 1, in [0, pi]
  double ssto;
  double sst;
  double sse;
};

/// Right-triangle picture of SSTO = SST + SSE. Throws DegenerateError when
/// y == mu0 1.
Geometry geometry(const Sample& y, double mu0);

}  // namespace nulleq::ttest
