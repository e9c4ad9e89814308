#pragma once

#include <string>
#include <vector>

#include "nulleq/linmodel.hpp"
#include "nulleq/sample.hpp"

namespace nulleq::diagnostics {

/// Per-observation outlier statistics. Each row is the nested F-test of the
/// model augmented with the indicator of that observation against the
/// model without it (p2 = 1).
struct DiagnosticsRow {
  std::string label;
  double fitted = 0.0;
  double leverage = 0.0;
  double raw_residual = 0.0;
  double standardized = 0.0;  ///< sign(e) sqrt(F_null)
  double studentized = 0.0;   ///< sign(e) sqrt(F_trad)
  double f_null = 0.0;
  double f_trad = 0.0;
  double outlier_p_value = 1.0;     ///< two-sided StudentT(n - p1 - 1), unadjusted
  double bonferroni_p_value = 1.0;  ///< min(1, n * outlier_p_value)
  double gap = 0.0;                 ///< |studentized - standardized|
  /// h_i = 1: the observation fixes its own fit and the residual statistics
  /// are undefined (stored as NaN).
  bool full_leverage = false;
};

struct DiagnosticsTable {
  std::size_t n = 0;
  std::size_t p1 = 0;  ///< predictors in the fitted (reduced) model
  std::size_t df = 0;  ///< residual df of the augmented model, n - p1 - 1
  std::vector<DiagnosticsRow> rows;
};

/// Builds the table for y regressed on x. Requires n > p1 + 1. `labels`
/// names the observations (defaults to "1", "2", ...). Observations are
/// processed on up to `threads` workers (0 picks the hardware count); the
/// result does not depend on the worker count.
DiagnosticsTable residual_diagnostics(const linmodel::DesignMatrix& x, const Sample& y,
                                      std::vector<std::string> labels = {}, unsigned threads = 0);

/// Studentized residual as a function of the standardized one:
/// sign(r) sqrt((n - p1 - 1) r^2 / (n - p1 - r^2)), for |r| < sqrt(n - p1).
double map_standardized_to_studentized(double r, std::size_t n, std::size_t p1);

/// Size-alpha critical value for |studentized|.
double studentized_critical_value(std::size_t n, std::size_t p1, double alpha);

/// Size-alpha critical value for |standardized|, from the Beta law of
/// F_null / (n - p1).
double standardized_critical_value(std::size_t n, std::size_t p1, double alpha);

struct GapEntry {
  std::size_t index;
  std::string label;
  double gap;
};

/// Rows ordered by |studentized - standardized|, largest first (ties keep
/// observation order). Full-leverage rows are omitted.
std::vector<GapEntry> residual_gaps(const DiagnosticsTable& table);

}  // namespace nulleq::diagnostics
