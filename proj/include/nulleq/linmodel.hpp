#pragma once

#include <span>
#include <string>
#include <vector>

#include "nulleq/sample.hpp"

namespace nulleq::linmodel {

/// n x p design, stored column-major, with one label per column.
class DesignMatrix {
 public:
  DesignMatrix() = default;

  /// Throws DataError on ragged or non-finite columns, or when the label
  /// count does not match. Empty labels are filled with "x1", "x2", ...
  DesignMatrix(std::vector<std::vector<double>> columns, std::vector<std::string> labels = {});

  static DesignMatrix intercept(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// The first `p` columns.
  DesignMatrix leading_columns(std::size_t p) const;

  /// A copy with one more column on the right.
  DesignMatrix with_column(std::span<const double> values, std::string label) const;

 private:
  std::size_t rows_ = 0;
  std::vector<double> data_;
  std::vector<std::string> labels_;
};

struct FitResult {
  std::vector<double> coefficients;
  std::vector<double> fitted;
  std::vector<double> residuals;
  double sse = 0.0;
  std::size_t df_resid = 0;
};

/// Least squares by Householder QR. Fitted values and residuals are
/// obtained by applying Q to the split of Q^T y, so no n x n projection is
/// ever formed. Throws RankDeficientError naming the first column whose R
/// diagonal falls below 1e-10 of the largest one, DomainError when p >= n,
/// DataError when rows and y disagree.
FitResult fit(const DesignMatrix& x, const Sample& y);

/// Diagonal of the hat projection onto the column space of x (row norms
/// of the thin Q factor).
std::vector<double> hat_diagonal(const DesignMatrix& x);

/// Full design X = [X1 | X2]; the reduced design is the first p1 columns.
struct NestedSpec {
  DesignMatrix full;
  std::size_t p1 = 0;

  std::size_t p() const noexcept { return full.cols(); }
  std::size_t p2() const noexcept { return full.cols() - p1; }
};

enum class FStatus {
  Ok,
  /// SSE12 = 0: the full model reproduces y. F_trad is infinite, F_null at
  /// its supremum (n - p1) / p2 and both p-values are 0.
  Saturated,
  /// SSE1 = 0: y already lies in the reduced column space, 0/0 for both
  /// statistics. Reported as 0 with p-values 1.
  Degenerate,
};

const char* to_string(FStatus status) noexcept;

struct NestedFTestResult {
  FStatus status = FStatus::Ok;
  double sse1 = 0.0;
  double sse12 = 0.0;
  double ss2given1 = 0.0;
  double f_trad = 0.0;
  double f_null = 0.0;
  double p_value_f = 1.0;     ///< upper tail of F(p2, n - p) at f_trad
  double p_value_beta = 1.0;  ///< upper tail of Beta(p2/2, (n-p)/2) at p2 f_null / (n - p1)
  double cos2_theta = 0.0;    ///< SS2|1 / SSE1
  std::size_t n = 0;
  std::size_t p1 = 0;
  std::size_t p2 = 0;
};

/// Throws DomainError unless 1 <= p2 and p1 + p2 < n.
void validate(const NestedSpec& spec, std::size_t n);

/// F-test of H0: beta2 = 0 in both the traditional and the null-hypothesis
/// forms. With p1 = 0 the reduced model is the zero function, SSE1 = |y|^2.
NestedFTestResult nested_f_test(const NestedSpec& spec, const Sample& y);

/// F_trad as a function of F_null: (n - p) f / (n - p1 - p2 f), defined for
/// 0 <= f < (n - p1) / p2.
double map_fnull_to_ftrad(double f_null, std::size_t n, std::size_t p1, std::size_t p2);

/// Size-alpha critical value of F_trad, the upper alpha point of F(p2, n-p).
double f_trad_critical_value(std::size_t n, std::size_t p1, std::size_t p2, double alpha);

/// Size-alpha critical value of F_null from
/// p2 F_null / (n - p1) ~ Beta(p2/2, (n - p)/2).
double f_null_critical_value(std::size_t n, std::size_t p1, std::size_t p2, double alpha);

struct FGeometry {
  double theta;  ///< arccos(b / a)
  double a;      ///< sqrt(SSE1)
  double b;      ///< sqrt(SS2|1)
  double c;      ///< sqrt(SSE12)
};

/// Throws DegenerateError when SSE1 = 0.
FGeometry f_geometry(const NestedSpec& spec, const Sample& y);

}  // namespace nulleq::linmodel
