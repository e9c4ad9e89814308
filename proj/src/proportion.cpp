#include "nulleq/proportion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

namespace nulleq::proportion {

namespace {

const specfun::DistParams kChiSquare1 = specfun::DistParams::chi_square(1.0);

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

}  // namespace

const char* to_string(Alternative alt) noexcept {
  switch (alt) {
    case Alternative::TwoSided: return "two-sided";
    case Alternative::Greater: return "greater";
    case Alternative::Less: return "less";
  }
  return "unknown";
}

double normal_critical_value(double alpha) {
  check_unit_open(alpha, "alpha");
  // Z^2 ~ chi-square(1), so P(|Z| > z) = alpha  <=>  z^2 is the upper alpha point.
  return std::sqrt(specfun::upper_quantile(kChiSquare1, alpha));
}

double normal_p_value(double z, Alternative alternative) {
  if (std::isnan(z)) throw DomainError("normal_p_value of NaN");
  const double two_sided = std::isinf(z) ? 0.0 : specfun::sf(kChiSquare1, z * z);
  switch (alternative) {
    case Alternative::TwoSided: return two_sided;
    case Alternative::Greater: return z >= 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
    case Alternative::Less: return z <= 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
  }
  return two_sided;
}

ProportionTestResult proportion_test(const ProportionData& data, double p0, double alpha, Alternative alternative) {
  if (data.n == 0) throw DomainError("proportion test needs n >= 1");
  if (data.successes > data.n) throw DomainError("successes exceed the number of trials");
  check_unit_open(p0, "p0");
  check_unit_open(alpha, "alpha");

  ProportionTestResult r;
  const double n = static_cast<double>(data.n);
  r.p_hat = static_cast<double>(data.successes) / n;
  r.p0 = p0;
  r.alpha = alpha;
  r.alternative = alternative;

  const double diff = r.p_hat - p0;
  r.z_null = diff / std::sqrt(p0 * (1.0 - p0) / n);

  const double wald_var = r.p_hat * (1.0 - r.p_hat) / n;
  if (wald_var > 0.0) {
    r.z_wald = diff / std::sqrt(wald_var);
  } else {
    // p_hat is 0 or 1 and p0 is strictly inside, so diff != 0.
    r.wald_degenerate = true;
    r.z_wald = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }

  r.p_value_null = normal_p_value(r.z_null, alternative);
  r.p_value_wald = normal_p_value(r.z_wald, alternative);

  const double half_width = normal_critical_value(alpha) * std::sqrt(wald_var);
  r.ci_lower = r.p_hat - half_width;
  r.ci_upper = r.p_hat + half_width;
  return r;
}

}  // namespace nulleq::proportion
