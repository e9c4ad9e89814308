#pragma once

#include <cstdint>

namespace nulleq::proportion {

struct ProportionData {
  std::uint64_t successes = 0;
  std::uint64_t n = 1;
};

enum class Alternative { TwoSided, Greater, Less };

const char* to_string(Alternative alt) noexcept;

struct ProportionTestResult {
  double p_hat = 0.0;
  double p0 = 0.0;
  /// (p_hat - p0) / sqrt(p0 (1 - p0) / n): variance taken from the null.
  double z_null = 0.0;
  /// (p_hat - p0) / sqrt(p_hat (1 - p_hat) / n): variance from the estimate.
  double z_wald = 0.0;
  double p_value_null = 1.0;
  double p_value_wald = 1.0;
  /// Wald interval p_hat +/- z_{alpha/2} sqrt(p_hat (1 - p_hat) / n).
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double alpha = 0.05;
  Alternative alternative = Alternative::TwoSided;
  /// Set when p_hat is 0 or 1. The Wald variance is then zero, z_wald is a
  /// signed infinity (or 0 when p_hat == p0 is impossible here) and the CI
  /// collapses to the point p_hat.
  bool wald_degenerate = false;
};

/// Large-sample one-sample proportion test in both plug-in forms, no
/// continuity correction. Throws DomainError on p0 or alpha outside (0, 1)
/// or successes > n, n == 0.
ProportionTestResult proportion_test(const ProportionData& data, double p0, double alpha,
                                     Alternative alternative = Alternative::TwoSided);

/// z_{alpha/2}, the upper alpha/2 point of N(0, 1).
double normal_critical_value(double alpha);

/// p-value of a standard normal statistic under the given alternative.
double normal_p_value(double z, Alternative alternative);

}  // namespace nulleq::proportion
