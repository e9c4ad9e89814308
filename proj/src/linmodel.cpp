#include "nulleq/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nulleq/errors.hpp"
#include "nulleq/specfun.hpp"

namespace nulleq::linmodel {

namespace {

constexpr double kRankTolerance = 1e-10;
// A residual sum of squares at or below this fraction of |y|^2 is zero
// (residual norm within 1e-12 of |y|).
constexpr double kZeroResidual = 1e-24;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(std::span<const double> a) { return dot(a, a); }

// Compact Householder QR of an n x p column-major matrix, p < n.
// Reflector k is H_k = I - beta_k v_k v_k^T acting on rows k..n-1, with v_k
// stored in a separate n-vector (entries below k are zero).
class HouseholderQr {
 public:
  explicit HouseholderQr(const DesignMatrix& x) : n_(x.rows()), p_(x.cols()), r_(p_ * p_, 0.0) {
    std::vector<double> a(n_ * p_);
    for (std::size_t j = 0; j < p_; ++j) std::copy_n(x.column(j).begin(), n_, a.begin() + j * n_);

    vs_.assign(p_, std::vector<double>(n_, 0.0));
    betas_.assign(p_, 0.0);
    for (std::size_t k = 0; k < p_; ++k) {
      double* col = a.data() + k * n_;
      double scale = 0.0;
      for (std::size_t i = k; i < n_; ++i) scale = std::max(scale, std::fabs(col[i]));
      double norm = 0.0;
      if (scale > 0.0) {
        for (std::size_t i = k; i < n_; ++i) norm += (col[i] / scale) * (col[i] / scale);
        norm = scale * std::sqrt(norm);
      }
      auto& v = vs_[k];
      if (norm == 0.0) {
        betas_[k] = 0.0;
        for (std::size_t j = k; j < p_; ++j) r_[j * p_ + k] = a[j * n_ + k];
        continue;
      }
      const double alpha = col[k] > 0.0 ? -norm : norm;
      for (std::size_t i = k; i < n_; ++i) v[i] = col[i];
      v[k] -= alpha;
      const double vtv = sum_squares(std::span<const double>(v).subspan(k));
      betas_[k] = 2.0 / vtv;
      r_[k * p_ + k] = alpha;
      for (std::size_t j = k + 1; j < p_; ++j) {
        double* cj = a.data() + j * n_;
        double s = 0.0;
        for (std::size_t i = k; i < n_; ++i) s += v[i] * cj[i];
        s *= betas_[k];
        for (std::size_t i = k; i < n_; ++i) cj[i] -= s * v[i];
        r_[j * p_ + k] = cj[k];
      }
    }
  }

  double r(std::size_t i, std::size_t j) const { return r_[j * p_ + i]; }

  /// Index of the first column with |R_kk| < tol * max |R_jj|, or p.
  std::size_t first_deficient_column() const {
    double largest = 0.0;
    for (std::size_t k = 0; k < p_; ++k) largest = std::max(largest, std::fabs(r(k, k)));
    for (std::size_t k = 0; k < p_; ++k) {
      if (!(std::fabs(r(k, k)) > kRankTolerance * largest)) return k;
    }
    return p_;
  }

  /// z <- Q^T z
  void apply_qt(std::vector<double>& z) const {
    for (std::size_t k = 0; k < p_; ++k) reflect(k, z);
  }

  /// z <- Q z
  void apply_q(std::vector<double>& z) const {
    for (std::size_t k = p_; k-- > 0;) reflect(k, z);
  }

  std::vector<double> solve_upper(std::span<const double> rhs) const {
    std::vector<double> beta(p_);
    for (std::size_t k = p_; k-- > 0;) {
      double s = rhs[k];
      for (std::size_t j = k + 1; j < p_; ++j) s -= r(k, j) * beta[j];
      beta[k] = s / r(k, k);
    }
    return beta;
  }

 private:
  void reflect(std::size_t k, std::vector<double>& z) const {
    if (betas_[k] == 0.0) return;
    const auto& v = vs_[k];
    double s = 0.0;
    for (std::size_t i = k; i < n_; ++i) s += v[i] * z[i];
    s *= betas_[k];
    for (std::size_t i = k; i < n_; ++i) z[i] -= s * v[i];
  }

  std::size_t n_;
  std::size_t p_;
  std::vector<double> r_;  // p x p column-major, upper triangle used
  std::vector<std::vector<double>> vs_;
  std::vector<double> betas_;
};

HouseholderQr factorize(const DesignMatrix& x) {
  if (x.cols() >= x.rows()) {
    throw DomainError("design has p = " + std::to_string(x.cols()) + " columns but only n = " +
                      std::to_string(x.rows()) + " rows; need p < n");
  }
  HouseholderQr qr(x);
  const std::size_t bad = qr.first_deficient_column();
  if (bad < x.cols()) throw RankDeficientError(x.labels()[bad], bad);
  return qr;
}

double upper_tail_beta(double x, double a, double b) {
  return specfun::sf(specfun::DistParams::beta(a, b), std::clamp(x, 0.0, 1.0));
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::vector<double>> columns, std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != columns.size()) {
    throw DataError("design has " + std::to_string(columns.size()) + " columns but " + std::to_string(labels.size()) +
                    " labels");
  }
  rows_ = columns.empty() ? 0 : columns.front().size();
  data_.reserve(rows_ * columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows_) throw DataError("design columns have unequal lengths");
    for (double v : columns[j]) {
      if (!std::isfinite(v)) throw DataError("design column " + std::to_string(j) + " has a non-finite entry");
    }
    data_.insert(data_.end(), columns[j].begin(), columns[j].end());
  }
  if (labels.empty()) {
    for (std::size_t j = 0; j < columns.size(); ++j) labels.push_back("x" + std::to_string(j + 1));
  }
  labels_ = std::move(labels);
}

DesignMatrix DesignMatrix::intercept(std::size_t n) {
  return DesignMatrix({std::vector<double>(n, 1.0)}, {"(intercept)"});
}

DesignMatrix DesignMatrix::leading_columns(std::size_t p) const {
  if (p > cols()) throw DomainError("leading_columns beyond the design width");
  DesignMatrix out;
  out.rows_ = rows_;
  out.data_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(p * rows_));
  out.labels_.assign(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(p));
  return out;
}

DesignMatrix DesignMatrix::with_column(std::span<const double> values, std::string label) const {
  if (cols() > 0 && values.size() != rows_) throw DataError("appended column has the wrong length");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("appended column has a non-finite entry");
  }
  DesignMatrix out = *this;
  out.rows_ = values.size();
  out.data_.insert(out.data_.end(), values.begin(), values.end());
  out.labels_.push_back(std::move(label));
  return out;
}

FitResult fit(const DesignMatrix& x, const Sample& y) {
  const std::size_t n = x.rows();
  if (y.size() != n) {
    throw DataError("design has " + std::to_string(n) + " rows but y has " + std::to_string(y.size()) + " values");
  }
  const std::size_t p = x.cols();
  const HouseholderQr qr = factorize(x);

  std::vector<double> qty(y.values().begin(), y.values().end());
  qr.apply_qt(qty);

  FitResult out;
  out.coefficients = qr.solve_upper(std::span<const double>(qty).first(p));

  out.fitted.assign(n, 0.0);
  std::copy_n(qty.begin(), p, out.fitted.begin());
  qr.apply_q(out.fitted);

  out.residuals.assign(n, 0.0);
  std::copy(qty.begin() + static_cast<std::ptrdiff_t>(p), qty.end(),
            out.residuals.begin() + static_cast<std::ptrdiff_t>(p));
  qr.apply_q(out.residuals);

  out.sse = sum_squares(out.residuals);
  out.df_resid = n - p;
  return out;
}

std::vector<double> hat_diagonal(const DesignMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  std::vector<double> h(n, 0.0);
  if (p == 0) return h;
  const HouseholderQr qr = factorize(x);
  std::vector<double> q(n);
  for (std::size_t j = 0; j < p; ++j) {
    std::fill(q.begin(), q.end(), 0.0);
    q[j] = 1.0;
    qr.apply_q(q);
    for (std::size_t i = 0; i < n; ++i) h[i] += q[i] * q[i];
  }
  return h;
}

const char* to_string(FStatus status) noexcept {
  switch (status) {
    case FStatus::Ok: return "ok";
    case FStatus::Saturated: return "saturated";
    case FStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

void validate(const NestedSpec& spec, std::size_t n) {
  if (spec.p1 > spec.full.cols()) throw DomainError("p1 exceeds the number of design columns");
  if (spec.p2() < 1) throw DomainError("the tested block must have at least one column (p2 >= 1)");
  if (spec.p() >= n) {
    throw DomainError("need p = p1 + p2 < n (p = " + std::to_string(spec.p()) + ", n = " + std::to_string(n) + ")");
  }
}

NestedFTestResult nested_f_test(const NestedSpec& spec, const Sample& y) {
  const std::size_t n = y.size();
  if (spec.full.rows() != n) {
    throw DataError("design has " + std::to_string(spec.full.rows()) + " rows but y has " + std::to_string(n) +
                    " values");
  }
  validate(spec, n);

  NestedFTestResult r;
  r.n = n;
  r.p1 = spec.p1;
  r.p2 = spec.p2();
  const double nd = static_cast<double>(n);
  const double p1 = static_cast<double>(r.p1);
  const double p2 = static_cast<double>(r.p2);
  const double p = p1 + p2;

  const double yy = sum_squares(y.values());
  r.sse1 = spec.p1 == 0 ? yy : fit(spec.full.leading_columns(spec.p1), y).sse;
  r.sse12 = fit(spec.full, y).sse;
  r.ss2given1 = std::max(0.0, r.sse1 - r.sse12);

  if (r.sse1 <= kZeroResidual * yy) {
    r.status = FStatus::Degenerate;
    return r;
  }
  r.cos2_theta = r.ss2given1 / r.sse1;
  if (r.sse12 <= kZeroResidual * yy) {
    r.status = FStatus::Saturated;
    r.f_trad = std::numeric_limits<double>::infinity();
    r.f_null = (nd - p1) / p2;
    r.cos2_theta = 1.0;
    r.p_value_f = 0.0;
    r.p_value_beta = 0.0;
    return r;
  }

  r.f_trad = (r.ss2given1 / p2) / (r.sse12 / (nd - p));
  r.f_null = (r.ss2given1 / p2) / (r.sse1 / (nd - p1));
  r.p_value_f = specfun::sf(specfun::DistParams::fisher_f(p2, nd - p), r.f_trad);
  r.p_value_beta = upper_tail_beta(p2 * r.f_null / (nd - p1), 0.5 * p2, 0.5 * (nd - p));
  return r;
}

double map_fnull_to_ftrad(double f_null, std::size_t n, std::size_t p1, std::size_t p2) {
  if (p2 < 1 || p1 + p2 >= n) throw DomainError("need p2 >= 1 and p1 + p2 < n");
  const double nd = static_cast<double>(n);
  const double supremum = (nd - static_cast<double>(p1)) / static_cast<double>(p2);
  if (!(f_null >= 0.0 && f_null < supremum)) {
    throw DomainError("F_null must lie in [0, (n - p1) / p2)");
  }
  const double p = static_cast<double>(p1 + p2);
  return (nd - p) * f_null / (nd - static_cast<double>(p1) - static_cast<double>(p2) * f_null);
}

double f_trad_critical_value(std::size_t n, std::size_t p1, std::size_t p2, double alpha) {
  if (p2 < 1 || p1 + p2 >= n) throw DomainError("need p2 >= 1 and p1 + p2 < n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double df2 = static_cast<double>(n - p1 - p2);
  return specfun::upper_quantile(specfun::DistParams::fisher_f(static_cast<double>(p2), df2), alpha);
}

double f_null_critical_value(std::size_t n, std::size_t p1, std::size_t p2, double alpha) {
  if (p2 < 1 || p1 + p2 >= n) throw DomainError("need p2 >= 1 and p1 + p2 < n");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double a = 0.5 * static_cast<double>(p2);
  const double b = 0.5 * static_cast<double>(n - p1 - p2);
  return static_cast<double>(n - p1) / static_cast<double>(p2) *
         specfun::upper_quantile(specfun::DistParams::beta(a, b), alpha);
}

FGeometry f_geometry(const NestedSpec& spec, const Sample& y) {
  const NestedFTestResult r = nested_f_test(spec, y);
  if (r.status == FStatus::Degenerate) throw DegenerateError("SSE1 = 0: y lies in the reduced column space");
  FGeometry g{};
  g.a = std::sqrt(r.sse1);
  g.b = std::sqrt(r.ss2given1);
  g.c = r.status == FStatus::Saturated ? 0.0 : std::sqrt(r.sse12);
  g.theta = std::atan2(g.c, g.b);
  return g;
}

}  // namespace nulleq::linmodel
