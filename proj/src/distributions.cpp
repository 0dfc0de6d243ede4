#include "pelvar/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pelvar/errors.hpp"
#include "pelvar/quadrature.hpp"
#include "pelvar/special_functions.hpp"

namespace pelvar {
namespace {

using namespace special;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// Ein(y) = int_0^y (1 - e^{-t}) / t dt, alternating series; only called for y < 1.
double ein(double y) {
  double term = y;
  double sum = y;
  for (int k = 2; k < 60; ++k) {
    term *= -y / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// (1 + a)^{-(a + 1)/a}, continuous at a = 0 where it is 1/e.
double gp_mean_survival(double a) {
  if (a == 0.0) return std::exp(-1.0);
  return std::exp(-(a + 1.0) / a * std::log1p(a));
}

double gp_tail_quantile(double alpha, double beta, double s) {
  const double log_s = std::log(s);
  if (alpha == 0.0) return -beta * log_s;
  return beta / alpha * std::expm1(-(alpha / (alpha + 1.0)) * log_s);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Uniform: return "Uniform";
    case Family::Normal: return "Normal";
    case Family::Exponential: return "Exponential";
    case Family::StudentT: return "StudentT";
    case Family::LogNormal: return "LogNormal";
    case Family::Gamma: return "Gamma";
    case Family::Weibull: return "Weibull";
    case Family::ParetoII: return "ParetoII";
    case Family::GeneralizedPareto: return "GeneralizedPareto";
    case Family::GEV: return "GEV";
  }
  return "?";
}

void require_level(double p, const char* where) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(where) + ": probability level must lie in (0,1), got " + fmt(p));
  }
}

LossModel::LossModel(Family f, std::vector<double> params) : family_(f), params_(std::move(params)) {}

LossModel LossModel::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "Uniform: need a < b");
  return LossModel(Family::Uniform, {a, b});
}

LossModel LossModel::normal(double mu, double sigma) {
  require(std::isfinite(mu) && finite_positive(sigma), "Normal: need finite mu and sigma > 0");
  return LossModel(Family::Normal, {mu, sigma});
}

LossModel LossModel::exponential(double lambda) {
  require(finite_positive(lambda), "Exponential: need lambda > 0");
  return LossModel(Family::Exponential, {lambda});
}

LossModel LossModel::student_t(double nu, double loc, double scale) {
  require(std::isfinite(nu) && nu > 1.0, "StudentT: need nu > 1 for a finite mean");
  require(std::isfinite(loc) && finite_positive(scale), "StudentT: need finite loc and scale > 0");
  return LossModel(Family::StudentT, {nu, loc, scale});
}

LossModel LossModel::lognormal(double mu, double sigma) {
  require(std::isfinite(mu) && finite_positive(sigma), "LogNormal: need finite mu and sigma > 0");
  return LossModel(Family::LogNormal, {mu, sigma});
}

LossModel LossModel::gamma(double alpha, double lambda) {
  require(finite_positive(alpha) && finite_positive(lambda), "Gamma: need alpha > 0 and lambda > 0");
  return LossModel(Family::Gamma, {alpha, lambda});
}

LossModel LossModel::weibull(double alpha, double lambda) {
  require(finite_positive(alpha) && finite_positive(lambda), "Weibull: need alpha > 0 and lambda > 0");
  return LossModel(Family::Weibull, {alpha, lambda});
}

LossModel LossModel::pareto2(double alpha, double kappa) {
  require(std::isfinite(alpha) && alpha > 1.0, "ParetoII: need alpha > 1 for a finite mean");
  require(finite_positive(kappa), "ParetoII: need kappa > 0");
  return LossModel(Family::ParetoII, {alpha, kappa});
}

LossModel LossModel::generalized_pareto(double alpha, double beta) {
  require(std::isfinite(alpha) && alpha > -1.0, "GeneralizedPareto: need alpha > -1");
  require(finite_positive(beta), "GeneralizedPareto: need beta > 0");
  return LossModel(Family::GeneralizedPareto, {alpha, beta});
}

LossModel LossModel::gev(double mu, double sigma, double xi) {
  require(std::isfinite(mu) && finite_positive(sigma) && std::isfinite(xi),
          "GEV: need finite mu, xi and sigma > 0");
  LossModel m(Family::GEV, {mu, sigma, xi});
  if (xi >= 1.0) m.warnings_.push_back("GEV with xi >= 1 has an infinite mean; theta-index is 0 by convention");
  return m;
}

LossModel LossModel::gp_lomax(double a, double kappa) {
  require(std::isfinite(a) && a > 1.0, "Lomax: need a > 1");
  require(finite_positive(kappa), "Lomax: need kappa > 0");
  return generalized_pareto(1.0 / (a - 1.0), kappa / (a - 1.0));
}

LossModel LossModel::gp_exponential(double lambda) {
  require(finite_positive(lambda), "Exponential: need lambda > 0");
  return generalized_pareto(0.0, 1.0 / lambda);
}

LossModel LossModel::gp_rescaled_beta(double c, double omega) {
  require(finite_positive(c) && finite_positive(omega), "RescaledBeta: need c > 0 and omega > 0");
  return generalized_pareto(-1.0 / (c + 1.0), omega / (c + 1.0));
}

LossModel LossModel::gp_uniform(double omega) { return gp_rescaled_beta(1.0, omega); }

LossModel LossModel::affine(double a, double b) const {
  require(finite_positive(a) && std::isfinite(b), "affine: need a > 0 and finite b");
  LossModel m = *this;
  m.shift_ = a * shift_ + b;
  m.scale_ = a * scale_;
  return m;
}

std::string LossModel::describe() const {
  static const char* names[][3] = {
      {"a", "b", ""},          {"mu", "sigma", ""},    {"lambda", "", ""},   {"nu", "loc", "scale"},
      {"mu", "sigma", ""},     {"alpha", "lambda", ""}, {"alpha", "lambda", ""}, {"alpha", "kappa", ""},
      {"alpha", "beta", ""},   {"mu", "sigma", "xi"},
  };
  std::ostringstream os;
  os << family_name(family_) << '(';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) os << ',';
    os << names[static_cast<int>(family_)][i] << '=' << fmt(params_[i]);
  }
  os << ')';
  if (scale_ != 1.0 || shift_ != 0.0) os << "*" << fmt(scale_) << "+" << fmt(shift_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Base (un-shifted) family functions.

double LossModel::base_cdf(double x) const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform:
      if (x <= q[0]) return 0.0;
      if (x >= q[1]) return 1.0;
      return (x - q[0]) / (q[1] - q[0]);
    case Family::Normal: return normal_cdf((x - q[0]) / q[1]);
    case Family::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-q[0] * x);
    case Family::StudentT: return student_t_cdf((x - q[1]) / q[2], q[0]);
    case Family::LogNormal: return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - q[0]) / q[1]);
    case Family::Gamma: return x <= 0.0 ? 0.0 : gamma_p(q[0], q[1] * x);
    case Family::Weibull: return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(q[1] * x, q[0]));
    case Family::ParetoII: return x <= 0.0 ? 0.0 : 1.0 - std::pow(q[1] / (q[1] + x), q[0]);
    case Family::GeneralizedPareto: {
      if (x <= 0.0) return 0.0;
      const double a = q[0], b = q[1];
      if (a == 0.0) return -std::expm1(-x / b);
      const double base = 1.0 + a * x / b;
      if (base <= 0.0) return 1.0;
      return -std::expm1(-(a + 1.0) / a * std::log(base));
    }
    case Family::GEV: {
      const double z = (x - q[0]) / q[1];
      const double xi = q[2];
      if (xi == 0.0) return std::exp(-std::exp(-z));
      const double base = 1.0 + xi * z;
      if (base <= 0.0) return xi > 0.0 ? 0.0 : 1.0;
      return std::exp(-std::pow(base, -1.0 / xi));
    }
  }
  return 0.0;
}

double LossModel::base_pdf(double x) const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform: return (x < q[0] || x > q[1]) ? 0.0 : 1.0 / (q[1] - q[0]);
    case Family::Normal: return normal_pdf((x - q[0]) / q[1]) / q[1];
    case Family::Exponential: return x < 0.0 ? 0.0 : q[0] * std::exp(-q[0] * x);
    case Family::StudentT: return student_t_pdf((x - q[1]) / q[2], q[0]) / q[2];
    case Family::LogNormal:
      return x <= 0.0 ? 0.0 : normal_pdf((std::log(x) - q[0]) / q[1]) / (q[1] * x);
    case Family::Gamma:
      if (x <= 0.0) return 0.0;
      return std::exp(q[0] * std::log(q[1]) + (q[0] - 1.0) * std::log(x) - q[1] * x - log_gamma(q[0]));
    case Family::Weibull: {
      if (x <= 0.0) return 0.0;
      const double lx = std::pow(q[1] * x, q[0]);
      return q[0] / x * lx * std::exp(-lx);
    }
    case Family::ParetoII:
      return x < 0.0 ? 0.0 : q[0] / q[1] * std::pow(q[1] / (q[1] + x), q[0] + 1.0);
    case Family::GeneralizedPareto: {
      if (x < 0.0) return 0.0;
      const double a = q[0], b = q[1];
      if (a == 0.0) return std::exp(-x / b) / b;
      const double base = 1.0 + a * x / b;
      if (base <= 0.0) return 0.0;
      return (a + 1.0) / b * std::pow(base, -(a + 1.0) / a - 1.0);
    }
    case Family::GEV: {
      const double z = (x - q[0]) / q[1];
      const double xi = q[2];
      if (xi == 0.0) return std::exp(-z - std::exp(-z)) / q[1];
      const double base = 1.0 + xi * z;
      if (base <= 0.0) return 0.0;
      const double t = std::pow(base, -1.0 / xi);
      return t / base * std::exp(-t) / q[1];
    }
  }
  return 0.0;
}

double LossModel::base_quantile(double p) const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform: return q[0] + (q[1] - q[0]) * p;
    case Family::Normal: return q[0] + q[1] * normal_quantile(p);
    case Family::Exponential: return -std::log1p(-p) / q[0];
    case Family::StudentT: return q[1] + q[2] * student_t_quantile(p, 1.0 - p, q[0]);
    case Family::LogNormal: return std::exp(q[0] + q[1] * normal_quantile(p));
    case Family::Gamma: return gamma_p_inverse(q[0], p, 1.0 - p) / q[1];
    case Family::Weibull: return std::pow(-std::log1p(-p), 1.0 / q[0]) / q[1];
    case Family::GEV: {
      const double y = -std::log(p);
      const double xi = q[2];
      if (xi == 0.0) return q[0] - q[1] * std::log(y);
      return q[0] + q[1] * std::expm1(-xi * std::log(y)) / xi;
    }
    default: return base_tail_quantile(1.0 - p);
  }
}

double LossModel::base_tail_quantile(double s) const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform: return q[1] - (q[1] - q[0]) * s;
    case Family::Normal: return q[0] - q[1] * normal_quantile(s);
    case Family::Exponential: return -std::log(s) / q[0];
    case Family::StudentT: return q[1] + q[2] * student_t_quantile(1.0 - s, s, q[0]);
    case Family::LogNormal: return std::exp(q[0] - q[1] * normal_quantile(s));
    case Family::Gamma: return gamma_p_inverse(q[0], 1.0 - s, s) / q[1];
    case Family::Weibull: return std::pow(-std::log(s), 1.0 / q[0]) / q[1];
    case Family::ParetoII: return q[1] * std::expm1(-std::log(s) / q[0]);
    case Family::GeneralizedPareto: return gp_tail_quantile(q[0], q[1], s);
    case Family::GEV: {
      const double y = -std::log1p(-s);
      const double xi = q[2];
      if (xi == 0.0) return q[0] - q[1] * std::log(y);
      return q[0] + q[1] * std::expm1(-xi * std::log(y)) / xi;
    }
  }
  return 0.0;
}

double LossModel::base_mean() const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform: return 0.5 * (q[0] + q[1]);
    case Family::Normal: return q[0];
    case Family::Exponential: return 1.0 / q[0];
    case Family::StudentT: return q[1];
    case Family::LogNormal: return std::exp(q[0] + 0.5 * q[1] * q[1]);
    case Family::Gamma: return q[0] / q[1];
    case Family::Weibull: return gamma_fn(1.0 + 1.0 / q[0]) / q[1];
    case Family::ParetoII: return q[1] / (q[0] - 1.0);
    case Family::GeneralizedPareto: return q[1];
    case Family::GEV: {
      const double xi = q[2];
      if (xi >= 1.0) return kInf;
      if (xi == 0.0) return q[0] + q[1] * kEulerGamma;
      return q[0] + q[1] * (gamma_fn(1.0 - xi) - 1.0) / xi;
    }
  }
  return 0.0;
}

double LossModel::es_by_quadrature(double p) const {
  quad::Tolerance tol;
  tol.relative = 1e-13;
  const auto r = quad::upper_quantile_mean([this](double s) { return base_tail_quantile(s); }, p,
                                           1.0 - p, tol);
  return r.value;
}

double LossModel::base_es(double p) const {
  const auto& q = params_;
  const double tail = 1.0 - p;
  switch (family_) {
    case Family::Uniform: return q[0] + (q[1] - q[0]) * 0.5 * (1.0 + p);
    case Family::Normal: {
      const double z = normal_quantile(p);
      return q[0] + q[1] * normal_pdf(z) / tail;
    }
    case Family::Exponential: return (1.0 - std::log1p(-p)) / q[0];
    case Family::StudentT: {
      const double nu = q[0];
      const double t = student_t_quantile(p, tail, nu);
      return q[1] + q[2] * student_t_pdf(t, nu) * (nu + t * t) / ((nu - 1.0) * tail);
    }
    case Family::LogNormal: {
      const double z = normal_quantile(p);
      return std::exp(q[0] + 0.5 * q[1] * q[1]) * normal_cdf(q[1] - z) / tail;
    }
    case Family::Gamma: {
      const double v = gamma_p_inverse(q[0], p, tail);
      return q[0] / q[1] * gamma_q(q[0] + 1.0, v) / tail;
    }
    case Family::Weibull: {
      const double k = q[0];
      const double y = -std::log1p(-p);
      return gamma_fn(1.0 + 1.0 / k) * gamma_q(1.0 + 1.0 / k, y) / (q[1] * tail);
    }
    case Family::ParetoII: {
      const double a = q[0];
      return q[1] * (a / (a - 1.0) * std::exp(-std::log(tail) / a) - 1.0);
    }
    case Family::GeneralizedPareto: {
      const double v = gp_tail_quantile(q[0], q[1], tail);
      return (1.0 + q[0]) * v + q[1];
    }
    case Family::GEV:
      if (q[2] >= 1.0) return kInf;
      return es_by_quadrature(p);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

double LossModel::cdf(double x) const { return base_cdf((x - shift_) / scale_); }

double LossModel::pdf(double x) const { return base_pdf((x - shift_) / scale_) / scale_; }

double LossModel::quantile(double p) const {
  require_level(p, "quantile");
  return scale_ * base_quantile(p) + shift_;
}

double LossModel::tail_quantile(double s) const {
  require_level(s, "tail_quantile");
  return scale_ * base_tail_quantile(s) + shift_;
}

double LossModel::mean() const { return scale_ * base_mean() + shift_; }

double LossModel::es(double p) const {
  require_level(p, "es");
  return scale_ * base_es(p) + shift_;
}

double LossModel::dx_lower_bound() const {
  const auto& q = params_;
  switch (family_) {
    case Family::Uniform:
    case Family::Normal:
    case Family::StudentT: return 0.5;
    case Family::Exponential: return -std::expm1(-1.0);
    case Family::LogNormal: return normal_cdf(0.5 * q[1]);
    case Family::Gamma: return gamma_p(q[0], q[0]);
    case Family::Weibull: return -std::expm1(-std::pow(gamma_fn(1.0 + 1.0 / q[0]), q[0]));
    case Family::ParetoII: return 1.0 - std::pow((q[0] - 1.0) / q[0], q[0]);
    case Family::GeneralizedPareto: return 1.0 - gp_mean_survival(q[0]);
    case Family::GEV: {
      const double xi = q[2];
      if (xi >= 1.0) return 1.0;
      if (xi == 0.0) return std::exp(-std::exp(-kEulerGamma));
      return std::exp(-std::pow(gamma_fn(1.0 - xi), -1.0 / xi));
    }
  }
  return 0.0;
}

double LossModel::theta_closed(double p) const {
  require_level(p, "theta_closed");
  const auto& q = params_;
  if (family_ == Family::GEV && q[2] >= 1.0) return 0.0;
  const double bound = dx_lower_bound();
  if (!(p > bound)) {
    throw DomainError("theta_closed: " + describe() + " requires p > " + fmt(bound) + ", got " + fmt(p));
  }
  const double tail = 1.0 - p;
  switch (family_) {
    case Family::Uniform: return tail * tail / (2.0 * p - 1.0);
    case Family::Normal: {
      const double z = normal_quantile(p);
      return normal_pdf(z) / z - tail;
    }
    case Family::Exponential: return -tail / (std::log(tail) + 1.0);
    case Family::StudentT: {
      const double nu = q[0];
      const double t = student_t_quantile(p, tail, nu);
      return student_t_pdf(t, nu) * (nu + t * t) / ((nu - 1.0) * t) - tail;
    }
    case Family::LogNormal: {
      const double s = q[1];
      const double z = normal_quantile(p);
      const double half_var = std::exp(0.5 * s * s);
      const double esz = std::exp(s * z);
      return (half_var * normal_cdf(s - z) - tail * esz) / (esz - half_var);
    }
    case Family::Gamma:
    case Family::Weibull: {
      // Quadrature of the quantile; es() uses incomplete-gamma closed forms instead.
      const double v = base_quantile(p);
      const double m = base_mean();
      return tail * (es_by_quadrature(p) - v) / (v - m);
    }
    case Family::ParetoII: {
      const double a = q[0];
      return tail / ((a - 1.0) - a * std::pow(tail, 1.0 / a));
    }
    case Family::GeneralizedPareto: return gp_theta(q[0], q[1], p);
    case Family::GEV: {
      const double xi = q[2];
      const double y = -std::log(p);
      if (xi == 0.0) return ein(y) / (-std::log(y) - kEulerGamma);
      const double yx = std::pow(y, -xi);
      return (lower_incomplete_gamma(1.0 - xi, y) - tail * yx) / (yx - gamma_fn(1.0 - xi));
    }
  }
  return 0.0;
}

double gp_theta(double alpha, double beta, double p) {
  require_level(p, "gp_theta");
  require(std::isfinite(alpha) && alpha > -1.0, "gp_theta: need alpha > -1");
  require(finite_positive(beta), "gp_theta: need beta > 0");
  const double bound = 1.0 - gp_mean_survival(alpha);
  if (!(p > bound)) {
    throw DomainError("gp_theta: requires p > " + fmt(bound) + ", got " + fmt(p));
  }
  const double v = gp_tail_quantile(alpha, beta, 1.0 - p);
  if (v == beta) return kInf;
  return (1.0 - p) * (alpha * v + beta) / (v - beta);
}

}  // namespace pelvar
