#pragma once

// Special functions and the distribution kernel used by every test in the
// library. Everything here is a pure function of its arguments.

namespace nulleq::specfun {

/// ln Gamma(x) for x > 0. Relative error below 1e-13 on [1e-3, 1e6],
/// including the neighbourhoods of the zeros at x = 1 and x = 2.
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(s, x).
double reg_inc_gamma_lower(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed
/// without cancellation.
double reg_inc_gamma_upper(double s, double x);

enum class Family { StudentT, FisherF, Beta, ChiSquare };

const char* to_string(Family family) noexcept;

/// Distribution selector. StudentT and ChiSquare read only `df1`; FisherF
/// reads (df1, df2) as numerator/denominator degrees of freedom; Beta reads
/// (df1, df2) as the shapes (a, b). Unread fields are never validated.
struct DistParams {
  Family family;
  double df1;
  double df2 = 1.0;

  static DistParams student_t(double df) { return {Family::StudentT, df, 1.0}; }
  static DistParams fisher_f(double df1, double df2) { return {Family::FisherF, df1, df2}; }
  static DistParams beta(double a, double b) { return {Family::Beta, a, b}; }
  static DistParams chi_square(double df) { return {Family::ChiSquare, df, 1.0}; }
};

/// Throws DomainError unless the parameters read by `d.family` are finite
/// and strictly positive.
void validate(const DistParams& d);

double pdf(const DistParams& d, double x);

/// P(X <= x).
double cdf(const DistParams& d, double x);

/// P(X > x). Evaluated directly from the complementary incomplete function,
/// so small upper tails keep full relative precision.
double sf(const DistParams& d, double x);

/// Smallest x with cdf(d, x) = q, for q in (0, 1). Throws NumericError if
/// the solver does not reach |cdf(d, x) - q| <= 1e-10.
double quantile(const DistParams& d, double q);

/// Upper-tail quantile: x with sf(d, x) = q.
double upper_quantile(const DistParams& d, double q);

}  // namespace nulleq::specfun
