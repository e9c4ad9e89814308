#include "nulleq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

namespace nulleq::diagnostics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLeverageOne = 1.0 - 1e-10;

DiagnosticsRow diagnose_one(const linmodel::DesignMatrix& x, const Sample& y, std::size_t i, double residual,
                            double leverage) {
  DiagnosticsRow row;
  row.leverage = leverage;
  row.raw_residual = residual;
  if (leverage >= kLeverageOne) {
    row.full_leverage = true;
    row.standardized = row.studentized = row.f_null = row.f_trad = kNaN;
    row.outlier_p_value = row.bonferroni_p_value = row.gap = kNaN;
    return row;
  }

  const std::size_t n = x.rows();
  std::vector<double> indicator(n, 0.0);
  indicator[i] = 1.0;
  const linmodel::NestedSpec spec{x.with_column(indicator, "indicator"), x.cols()};
  const linmodel::NestedFTestResult f = linmodel::nested_f_test(spec, y);

  row.f_null = f.f_null;
  row.f_trad = f.f_trad;
  const double sign = residual > 0.0 ? 1.0 : (residual < 0.0 ? -1.0 : 0.0);
  row.standardized = sign * std::sqrt(f.f_null);
  row.studentized = sign == 0.0 ? 0.0 : sign * std::sqrt(f.f_trad);

  const double df = static_cast<double>(n - x.cols() - 1);
  row.outlier_p_value = std::isinf(row.studentized)
                            ? 0.0
                            : std::min(1.0, 2.0 * specfun::sf(specfun::DistParams::student_t(df),
                                                               std::fabs(row.studentized)));
  row.bonferroni_p_value = std::min(1.0, static_cast<double>(n) * row.outlier_p_value);
  row.gap = std::fabs(row.studentized - row.standardized);
  return row;
}

}  // namespace

DiagnosticsTable residual_diagnostics(const linmodel::DesignMatrix& x, const Sample& y,
                                      std::vector<std::string> labels, unsigned threads) {
  const std::size_t n = y.size();
  const std::size_t p1 = x.cols();
  if (x.rows() != n) throw DataError("design rows and response length differ");
  if (n <= p1 + 1) {
    throw DomainError("outlier test needs n > p + 1 (n = " + std::to_string(n) + ", p = " + std::to_string(p1) + ")");
  }
  if (!labels.empty() && labels.size() != n) throw DataError("one label per observation is required");
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  }

  const linmodel::FitResult base = linmodel::fit(x, y);
  const std::vector<double> leverage = linmodel::hat_diagonal(x);

  DiagnosticsTable table;
  table.n = n;
  table.p1 = p1;
  table.df = n - p1 - 1;
  table.rows.resize(n);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        table.rows[i] = diagnose_one(x, y, i, base.residuals[i], leverage[i]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(work, begin, std::min(n, begin + chunk));
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < n; ++i) {
    table.rows[i].label = std::move(labels[i]);
    table.rows[i].fitted = base.fitted[i];
  }
  return table;
}

double map_standardized_to_studentized(double r, std::size_t n, std::size_t p1) {
  if (n < p1 + 2) throw DomainError("need n >= p1 + 2");
  const double m = static_cast<double>(n - p1);
  if (!(std::fabs(r) < std::sqrt(m))) throw DomainError("|r| must be below sqrt(n - p1)");
  const double r2 = r * r;
  return std::copysign(std::sqrt((m - 1.0) * r2 / (m - r2)), r);
}

double studentized_critical_value(std::size_t n, std::size_t p1, double alpha) {
  if (n < p1 + 2) throw DomainError("need n >= p1 + 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return specfun::upper_quantile(specfun::DistParams::student_t(static_cast<double>(n - p1 - 1)), 0.5 * alpha);
}

double standardized_critical_value(std::size_t n, std::size_t p1, double alpha) {
  return std::sqrt(linmodel::f_null_critical_value(n, p1, 1, alpha));
}

std::vector<GapEntry> residual_gaps(const DiagnosticsTable& table) {
  std::vector<GapEntry> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.full_leverage) continue;
    out.push_back({i, row.label, row.gap});
  }
  std::stable_sort(out.begin(), out.end(), [](const GapEntry& a, const GapEntry& b) { return a.gap > b.gap; });
  return out;
}

}  // namespace nulleq::diagnostics
