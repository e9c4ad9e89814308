#include "nulleq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "nulleq/errors.hpp"
#include "nulleq/linmodel.hpp"
#include "nulleq/proportion.hpp"
#include "nulleq/specfun.hpp"
#include "nulleq/ttest.hpp"

namespace nulleq::montecarlo {

namespace {

constexpr std::uint64_t kDesignStream = 0xD1B54A32D192ED03ull;

// mt19937_64 output is fixed by the standard; the normal variates are
// produced here (Marsaglia polar method) because std::normal_distribution
// is implementation-defined.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Outcome {
  bool trad = false;
  bool null = false;
  double statistic = 0.0;  // scaled null-form statistic, used by the KS check
};

// Runs `draw(rng)` once per replicate on up to cfg.threads workers and
// returns the outcomes in replicate order.
template <class Draw>
std::vector<Outcome> run_replicates(const SimConfig& cfg, Draw draw) {
  const std::uint64_t m = cfg.replicates;
  std::vector<Outcome> out(m);
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, m));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    try {
      for (std::uint64_t i = begin; i < end; ++i) {
        NormalStream rng(mix64(cfg.seed + i));
        out[i] = draw(rng);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0, m);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (m + threads - 1) / threads;
    for (std::uint64_t begin = 0; begin < m; begin += chunk) pool.emplace_back(work, begin, std::min(m, begin + chunk));
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

linmodel::DesignMatrix simulation_design(const SimConfig& cfg) {
  NormalStream rng(mix64(cfg.seed ^ kDesignStream));
  const std::size_t p = cfg.p1 + cfg.p2;
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> c(cfg.n);
    if (j == 0) {
      std::fill(c.begin(), c.end(), 1.0);
    } else {
      for (auto& v : c) v = rng.normal();
    }
    cols.push_back(std::move(c));
    labels.push_back(j == 0 ? "(intercept)" : "x" + std::to_string(j));
  }
  return linmodel::DesignMatrix(std::move(cols), std::move(labels));
}

std::vector<Outcome> simulate(const SimConfig& cfg) {
  validate(cfg);
  switch (cfg.scenario) {
    case Scenario::OneSampleT: {
      const double t_crit = ttest::t_critical_value(cfg.n, cfg.alpha);
      const double t0_crit = ttest::t0_critical_value(cfg.n, cfg.alpha);
      const double nd = static_cast<double>(cfg.n);
      return run_replicates(cfg, [&](NormalStream& rng) {
        std::vector<double> y(cfg.n);
        for (auto& v : y) v = cfg.effect + rng.normal();
        const auto r = ttest::t_test(Sample(std::move(y)), 0.0);
        return Outcome{std::fabs(r.t) >= t_crit, std::fabs(r.t0) >= t0_crit, r.t0 * r.t0 / nd};
      });
    }
    case Scenario::NestedF: {
      const linmodel::NestedSpec spec{simulation_design(cfg), cfg.p1};
      const double trad_crit = linmodel::f_trad_critical_value(cfg.n, cfg.p1, cfg.p2, cfg.alpha);
      const double null_crit = linmodel::f_null_critical_value(cfg.n, cfg.p1, cfg.p2, cfg.alpha);
      const double scale = static_cast<double>(cfg.p2) / static_cast<double>(cfg.n - cfg.p1);
      return run_replicates(cfg, [&](NormalStream& rng) {
        std::vector<double> y(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) {
          double mean = 0.0;
          for (std::size_t j = 0; j < cfg.p1; ++j) mean += spec.full(i, j);
          for (std::size_t j = cfg.p1; j < spec.p(); ++j) mean += cfg.effect * spec.full(i, j);
          y[i] = mean + rng.normal();
        }
        const auto r = linmodel::nested_f_test(spec, Sample(std::move(y)));
        return Outcome{r.f_trad >= trad_crit, r.f_null >= null_crit, scale * r.f_null};
      });
    }
    case Scenario::Proportion: {
      const double z_crit = proportion::normal_critical_value(cfg.alpha);
      const double p_true = cfg.p0 + cfg.effect;
      return run_replicates(cfg, [&](NormalStream& rng) {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < cfg.n; ++i) k += rng.uniform() < p_true;
        const auto r = proportion::proportion_test({k, cfg.n}, cfg.p0, cfg.alpha);
        return Outcome{std::fabs(r.z_wald) >= z_crit, std::fabs(r.z_null) >= z_crit, r.z_null};
      });
    }
  }
  throw DomainError("unknown scenario");
}

}  // namespace

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::OneSampleT: return "one-sample-t";
    case Scenario::NestedF: return "nested-f";
    case Scenario::Proportion: return "proportion";
  }
  return "unknown";
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void validate(const SimConfig& cfg) {
  if (cfg.replicates < 1) throw DomainError("replicates must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!std::isfinite(cfg.effect)) throw DomainError("effect must be finite");
  switch (cfg.scenario) {
    case Scenario::OneSampleT:
      if (cfg.n < 2) throw DomainError("one-sample t simulation needs n >= 2");
      return;
    case Scenario::NestedF:
      if (cfg.p2 < 1) throw DomainError("nested F simulation needs p2 >= 1");
      if (cfg.p1 + cfg.p2 >= cfg.n) throw DomainError("nested F simulation needs p1 + p2 < n");
      return;
    case Scenario::Proportion:
      if (cfg.n < 1) throw DomainError("proportion simulation needs n >= 1");
      if (!(cfg.p0 > 0.0 && cfg.p0 < 1.0)) throw DomainError("p0 must lie in (0, 1)");
      if (!(cfg.p0 + cfg.effect >= 0.0 && cfg.p0 + cfg.effect <= 1.0)) {
        throw DomainError("p0 + effect must be a probability");
      }
      return;
  }
}

SizePowerResult simulate_size_power(const SimConfig& cfg) {
  const std::vector<Outcome> outcomes = simulate(cfg);
  std::uint64_t trad = 0;
  std::uint64_t null = 0;
  SizePowerResult r;
  for (const auto& o : outcomes) {
    trad += o.trad;
    null += o.null;
    r.disagreements += o.trad != o.null;
  }
  r.replicates = cfg.replicates;
  r.reject_rate_trad = static_cast<double>(trad) / static_cast<double>(cfg.replicates);
  r.reject_rate_null = static_cast<double>(null) / static_cast<double>(cfg.replicates);
  return r;
}

double ks_critical_value_1pct(std::uint64_t m) { return 1.63 / std::sqrt(static_cast<double>(m)); }

double ks_distance_sorted(const std::vector<double>& reference_cdf_at_sorted) {
  const double m = static_cast<double>(reference_cdf_at_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < reference_cdf_at_sorted.size(); ++i) {
    const double f = reference_cdf_at_sorted[i];
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

double null_law_check(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.effect != 0.0) throw DomainError("null-law check requires effect = 0");
  specfun::DistParams law{};
  switch (cfg.scenario) {
    case Scenario::OneSampleT:
      law = specfun::DistParams::beta(0.5, 0.5 * static_cast<double>(cfg.n - 1));
      break;
    case Scenario::NestedF:
      law = specfun::DistParams::beta(0.5 * static_cast<double>(cfg.p2),
                                      0.5 * static_cast<double>(cfg.n - cfg.p1 - cfg.p2));
      break;
    case Scenario::Proportion:
      throw DomainError("the proportion scenario has no exact null law to check");
  }
  const std::vector<Outcome> outcomes = simulate(cfg);
  std::vector<double> stats(outcomes.size());
  std::transform(outcomes.begin(), outcomes.end(), stats.begin(), [](const Outcome& o) { return o.statistic; });
  std::sort(stats.begin(), stats.end());
  for (auto& s : stats) s = specfun::cdf(law, s);
  return ks_distance_sorted(stats);
}

}  // namespace nulleq::montecarlo
