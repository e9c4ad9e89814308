#pragma once

#include <cstdint>
#include <vector>

namespace nulleq::montecarlo {

enum class Scenario { OneSampleT, NestedF, Proportion };

const char* to_string(Scenario scenario) noexcept;

/// Simulation settings.
///
/// OneSampleT draws y_i ~ N(effect, 1) and tests mu0 = 0 with |T| and |T0|.
/// NestedF uses one fixed design (intercept plus standard normal columns,
/// p = p1 + p2, drawn from the seed) and y = X1 1 + effect X2 1 + N(0, 1),
/// testing beta2 = 0 with F_trad and F_null.
/// Proportion draws Binomial(n, p0 + effect) and tests p = p0 with the
/// null-variance and Wald z statistics.
struct SimConfig {
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 20240101;
  std::size_t n = 10;
  double effect = 0.0;
  double alpha = 0.05;
  Scenario scenario = Scenario::OneSampleT;
  std::size_t p1 = 2;
  std::size_t p2 = 2;
  double p0 = 0.5;
  unsigned threads = 0;  ///< 0 picks the hardware count
};

/// Throws DomainError on an unusable configuration (no replicates, alpha
/// outside (0, 1), n too small for the scenario, p0 + effect outside [0, 1]).
void validate(const SimConfig& cfg);

struct SizePowerResult {
  double reject_rate_trad = 0.0;
  double reject_rate_null = 0.0;
  std::uint64_t disagreements = 0;  ///< replicates where the two decisions differ
  std::uint64_t replicates = 0;
};

/// Empirical rejection rates of the traditional and the null-hypothesis
/// test forms at level alpha. Replicate i draws from its own generator
/// seeded with mix64(seed + i), so results are bit-identical for any
/// worker count.
SizePowerResult simulate_size_power(const SimConfig& cfg);

/// Kolmogorov-Smirnov distance between the simulated null statistic and
/// its Beta law: T0^2 / n against Beta(1/2, (n - 1)/2) for OneSampleT,
/// p2 F_null / (n - p1) against Beta(p2/2, (n - p)/2) for NestedF.
/// Requires effect == 0; the Proportion scenario has no such law.
double null_law_check(const SimConfig& cfg);

/// Two-sided 1% critical value of the KS distance, 1.63 / sqrt(m).
double ks_critical_value_1pct(std::uint64_t m);

/// sup |F_emp - F| for a sample already sorted ascending, against reference
/// cdf values evaluated at each sample point.
double ks_distance_sorted(const std::vector<double>& reference_cdf_at_sorted);

/// SplitMix64 finalizer, used to derive per-replicate seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace nulleq::montecarlo
