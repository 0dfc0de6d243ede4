#include "pelvar/special_functions.hpp"

#include <cmath>
#include <limits>

#include "pelvar/errors.hpp"

namespace pelvar::special {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Wichura AS241 (PPND16) evaluated on the lower tail probability r <= 0.5
// or the central region; `q` is p - 0.5.
double ppnd16(double q, double r_tail) {
  constexpr double a0 = 3.3871328727963666080, a1 = 1.3314166789178437745e2,
                   a2 = 1.9715909503065514427e3, a3 = 1.3731693765509461125e4,
                   a4 = 4.5921953931549871457e4, a5 = 6.7265770927008700853e4,
                   a6 = 3.3430575583588128105e4, a7 = 2.5090809287301226727e3;
  constexpr double b1 = 4.2313330701600911252e1, b2 = 6.8718700749205790830e2,
                   b3 = 5.3941960214247511077e3, b4 = 2.1213794301586595867e4,
                   b5 = 3.9307895800092710610e4, b6 = 2.8729085735721942674e4,
                   b7 = 5.2264952788528545610e3;
  constexpr double c0 = 1.42343711074968357734, c1 = 4.63033784615654529590,
                   c2 = 5.76949722146069140550, c3 = 3.64784832476320460504,
                   c4 = 1.27045825245236838258, c5 = 2.41780725177450611770e-1,
                   c6 = 2.27238449892691845833e-2, c7 = 7.74545014278341407640e-4;
  constexpr double d1 = 2.05319162663775882187, d2 = 1.67638483018380384940,
                   d3 = 6.89767334985100004550e-1, d4 = 1.48103976427480074590e-1,
                   d5 = 1.51986665636164571966e-2, d6 = 5.47593808499534494600e-4,
                   d7 = 1.05075007164441684324e-9;
  constexpr double e0 = 6.65790464350110377720, e1 = 5.46378491116411436990,
                   e2 = 1.78482653991729133580, e3 = 2.96560571828504891230e-1,
                   e4 = 2.65321895265761230930e-2, e5 = 1.24266094738807843860e-3,
                   e6 = 2.71155556874348757815e-5, e7 = 2.01033439929228813265e-7;
  constexpr double f1 = 5.99832206555887937690e-1, f2 = 1.36929880922735805310e-1,
                   f3 = 1.48753612908506148525e-2, f4 = 7.86869131145613259100e-4,
                   f5 = 1.84631831751005468180e-5, f6 = 1.42151175831644588870e-7,
                   f7 = 2.04426310338993978564e-15;

  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * (((((((a7 * r + a6) * r + a5) * r + a4) * r + a3) * r + a2) * r + a1) * r + a0) /
           (((((((b7 * r + b6) * r + b5) * r + b4) * r + b3) * r + b2) * r + b1) * r + 1.0);
  }
  double r = std::sqrt(-std::log(r_tail));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    z = (((((((c7 * r + c6) * r + c5) * r + c4) * r + c3) * r + c2) * r + c1) * r + c0) /
        (((((((d7 * r + d6) * r + d5) * r + d4) * r + d3) * r + d2) * r + d1) * r + 1.0);
  } else {
    r -= 5.0;
    z = (((((((e7 * r + e6) * r + e5) * r + e4) * r + e3) * r + e2) * r + e1) * r + e0) /
        (((((((f7 * r + f6) * r + f5) * r + f4) * r + f3) * r + f2) * r + f1) * r + 1.0);
  }
  return q < 0.0 ? -z : z;
}

// Series for P(a, x), valid for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw ComputationError("gamma_p: series did not converge for a=" + std::to_string(a) +
                         " x=" + std::to_string(x));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_cfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw ComputationError("gamma_q: continued fraction did not converge for a=" +
                         std::to_string(a) + " x=" + std::to_string(x));
}

double beta_cfrac(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ComputationError("beta_inc: continued fraction did not converge");
}

// E1(y) for y > 0.
double exp_integral_e1(double y) {
  if (y <= 1.0) {
    // -gamma - ln y + sum_{k>=1} (-1)^{k+1} y^k / (k k!)
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -y / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < std::abs(sum) * kEps) break;
    }
    return -kEulerGamma - std::log(y) + sum;
  }
  // Lentz continued fraction.
  double b = y + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h * std::exp(-y);
  }
  throw ComputationError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  const double q = p - 0.5;
  return ppnd16(q, q < 0.0 ? p : 1.0 - p);
}

double log_gamma(double x) { return std::lgamma(x); }

double gamma_fn(double x) { return std::tgamma(x); }

double gamma_p(double a, double x) {
  if (a <= 0.0) throw DomainError("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_cfrac(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0) throw DomainError("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_cfrac(a, x);
}

double lower_incomplete_gamma(double a, double x) { return gamma_p(a, x) * gamma_fn(a); }

double gamma_p_inverse(double a, double p, double q) {
  if (a <= 0.0) throw DomainError("gamma_p_inverse: shape must be positive");
  if (!(p > 0.0 && q > 0.0)) {
    throw DomainError("gamma_p_inverse: probability must lie in (0,1)");
  }
  const bool use_upper = p > 0.5;
  const double gln = log_gamma(a);
  const double a1 = a - 1.0;
  double lna1 = 0.0, afac = 0.0;
  double x;
  if (a > 1.0) {
    lna1 = std::log(a1);
    afac = std::exp(a1 * (lna1 - 1.0) - gln);
    const double pp = use_upper ? q : p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (!use_upper) z = -z;
    // z approximates -Phi^{-1}(p); Wilson-Hilferty start.
    x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3));
  } else {
    const double t = 1.0 - a * (0.253 + a * 0.12);
    if (p < t) {
      x = std::pow(p / t, 1.0 / a);
    } else {
      x = 1.0 - std::log(q / (1.0 - t));
    }
  }

  // Halley iteration on the residual in whichever tail keeps precision.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    if (!(x > 0.0)) x = std::isfinite(hi) ? 0.5 * (lo + hi) : 0.5 * lo + 1e-300;
    const double err = use_upper ? (q - gamma_q(a, x)) : (gamma_p(a, x) - p);
    if (err > 0.0) {
      hi = std::min(hi, x);
    } else {
      lo = std::max(lo, x);
    }
    const double dens = a > 1.0 ? afac * std::exp(-(x - a1) + a1 * (std::log(x) - lna1))
                                : std::exp(-x + a1 * std::log(x) - gln);
    if (!(dens > 0.0)) break;
    const double u = err / dens;
    const double step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - 1.0)));
    double next = x - step;
    if (!(next > lo && next < hi)) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x + 1.0;
    }
    const bool done = std::abs(next - x) <= 4.0 * kEps * next;
    x = next;
    if (done) return x;
  }
  // Halley stalled: finish by bisection inside the bracket collected so far.
  if (!std::isfinite(hi)) {
    hi = std::max(1.0, x);
    while ((use_upper ? gamma_q(a, hi) > q : gamma_p(a, hi) < p)) hi *= 2.0;
  }
  for (int it = 0; it < 2000 && hi - lo > 4.0 * kEps * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = use_upper ? gamma_q(a, mid) > q : gamma_p(a, mid) < p;
    (below ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double beta_inc(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("beta_inc: x must lie in [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double bt = std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
                             b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cfrac(a, b, x) / a;
  return 1.0 - bt * beta_cfrac(b, a, 1.0 - x) / b;
}

double student_t_pdf(double t, double nu) {
  const double lc = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) - 0.5 * std::log(nu * kPi);
  return std::exp(lc - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

double student_t_sf(double t, double nu) {
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  // x = nu / (nu + t^2) and 1 - x computed separately to avoid cancellation.
  const double x = nu / (nu + t2);
  const double tail = t2 < nu ? 0.5 * (1.0 - beta_inc(0.5, 0.5 * nu, t2 / (nu + t2)))
                              : 0.5 * beta_inc(0.5 * nu, 0.5, x);
  return t > 0.0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double nu) { return student_t_sf(-t, nu); }

double student_t_quantile(double p, double q, double nu) {
  if (!(p > 0.0 && q > 0.0)) {
    throw DomainError("student_t_quantile: probability must lie in (0,1)");
  }
  if (!(nu > 0.0)) throw DomainError("student_t_quantile: degrees of freedom must be positive");
  if (p == q) return 0.0;
  // Solve in the smaller tail and mirror.
  const bool upper = p > q;
  const double tail = upper ? q : p;
  double sign = upper ? 1.0 : -1.0;

  if (nu == 1.0) return sign * std::tan(kPi * (0.5 - tail));
  if (nu == 2.0) {
    // t = (1 - 2s) / sqrt(2 s (1 - s)) for upper tail probability s.
    const double s = tail;
    return sign * (1.0 - 2.0 * s) / std::sqrt(2.0 * s * (1.0 - s));
  }

  // Cornish-Fisher start from the normal quantile of the tail probability.
  const double z = -ppnd16(tail - 0.5, tail);
  double t = z + (z * z * z + z) / (4.0 * nu) +
             (5.0 * std::pow(z, 5) + 16.0 * z * z * z + 3.0 * z) / (96.0 * nu * nu);
  // Polynomial tail start sf(t) ~ C t^{-nu}; take the larger of the two.
  const double log_c = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                       0.5 * std::log(nu * kPi) + 0.5 * (nu - 1.0) * std::log(nu) - std::log(nu);
  const double t_tail = std::exp((log_c - std::log(tail)) / nu);
  if (std::isfinite(t_tail) && t_tail > t) t = t_tail;
  if (!(t > 0.0)) t = 1.0;

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  const double log_tail = std::log(tail);
  for (int it = 0; it < 200; ++it) {
    const double sf = student_t_sf(t, nu);
    if (sf > tail) {
      lo = t;
    } else {
      hi = t;
    }
    // Newton on log sf(t) - log tail.
    const double f = std::log(sf) - log_tail;
    const double df = -student_t_pdf(t, nu) / sf;
    double next = t - f / df;
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * t;
    const bool done = std::abs(next - t) <= 4.0 * kEps * next;
    t = next;
    if (done) return sign * t;
  }
  throw ComputationError("student_t_quantile: iteration did not converge");
}

double log_integral(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("log_integral: x must lie in (0,1)");
  return -exp_integral_e1(-std::log(x));
}

}  // namespace pelvar::special
