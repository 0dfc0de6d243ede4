#pragma once

// Special functions used by the parametric loss families.
//
// Normal: cdf via erfc, quantile via Wichura's AS241 (PPND16), ~1e-16 relative.
// Gamma family: regularized incomplete gamma P/Q by series and Lentz continued
// fraction, inverse by Halley iteration from the DiDonato-Morris start.
// Student-t: cdf through the regularized incomplete beta function, quantile by
// safeguarded Newton on the tail probability.

namespace pelvar::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail 1 - Phi(x) without cancellation.
double normal_sf(double x);
/// Phi^{-1}(p) for p in (0,1).
double normal_quantile(double p);

double log_gamma(double x);
double gamma_fn(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);
/// Unregularized lower incomplete gamma: gamma(a, x) = P(a, x) * Gamma(a).
double lower_incomplete_gamma(double a, double x);
/// x such that P(a, x) = p. `q` must equal 1 - p; passing it separately keeps
/// precision when p is close to 1.
double gamma_p_inverse(double a, double p, double q);
inline double gamma_p_inverse(double a, double p) { return gamma_p_inverse(a, p, 1.0 - p); }

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double student_t_pdf(double t, double nu);
double student_t_cdf(double t, double nu);
/// P(T > t).
double student_t_sf(double t, double nu);
/// t such that P(T <= t) = p, with q = 1 - p carried separately.
double student_t_quantile(double p, double q, double nu);
inline double student_t_quantile(double p, double nu) { return student_t_quantile(p, 1.0 - p, nu); }

/// Logarithmic integral li(x) = int_0^x dt / ln t for 0 < x < 1.
double log_integral(double x);

}  // namespace pelvar::special
