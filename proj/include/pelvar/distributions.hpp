#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pelvar {

enum class Family {
  Uniform,
  Normal,
  Exponential,
  StudentT,
  LogNormal,
  Gamma,
  Weibull,
  ParetoII,
  GeneralizedPareto,
  GEV,
};

std::string family_name(Family f);

/// Parametric absolutely continuous loss distribution.
///
/// Parameter conventions:
///   Uniform(a, b)                 support [a, b]
///   Normal(mu, sigma)
///   Exponential(lambda)           rate, mean 1/lambda
///   StudentT(nu, loc, scale)      nu > 1
///   LogNormal(mu, sigma)          log X ~ N(mu, sigma^2)
///   Gamma(alpha, lambda)          shape, rate
///   Weibull(alpha, lambda)        F(x) = 1 - exp(-(lambda x)^alpha)
///   ParetoII(alpha, kappa)        F(x) = 1 - (kappa / (kappa + x))^alpha, alpha > 1
///   GeneralizedPareto(alpha, beta) mean-excess form e(x) = alpha x + beta, alpha > -1
///   GEV(mu, sigma, xi)            F(x) = exp(-(1 + xi (x - mu) / sigma)^(-1/xi))
///
/// Every model may carry an increasing affine map x -> a x + b applied on top
/// of the family (see `affine`).
class LossModel {
 public:
  static LossModel uniform(double a, double b);
  static LossModel normal(double mu, double sigma);
  static LossModel exponential(double lambda);
  static LossModel student_t(double nu, double loc = 0.0, double scale = 1.0);
  static LossModel lognormal(double mu, double sigma);
  static LossModel gamma(double alpha, double lambda);
  static LossModel weibull(double alpha, double lambda);
  static LossModel pareto2(double alpha, double kappa);
  static LossModel generalized_pareto(double alpha, double beta);
  static LossModel gev(double mu, double sigma, double xi);

  // Special members of the GeneralizedPareto family.
  static LossModel gp_lomax(double a, double kappa);
  static LossModel gp_exponential(double lambda);
  /// Survival (1 - x/omega)^c on [0, omega], c > 0.
  static LossModel gp_rescaled_beta(double c, double omega);
  static LossModel gp_uniform(double omega);

  /// Distribution of a X + b for a > 0.
  LossModel affine(double a, double b) const;

  Family family() const { return family_; }
  const std::vector<double>& parameters() const { return params_; }
  double affine_scale() const { return scale_; }
  double affine_shift() const { return shift_; }
  /// Short label such as "Normal(mu=0,sigma=1)".
  std::string describe() const;
  /// Non-fatal construction notes (for example an infinite mean).
  const std::vector<std::string>& warnings() const { return warnings_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;
  /// Q(1 - s), accurate for tiny s.
  double tail_quantile(double s) const;
  double mean() const;
  double es(double p) const;
  /// Family-specific closed or semi-closed theta-index at level p.
  double theta_closed(double p) const;
  /// inf D_X = F(E[X]).
  double dx_lower_bound() const;

 private:
  LossModel(Family f, std::vector<double> params);

  double base_cdf(double z) const;
  double base_pdf(double z) const;
  double base_tail_quantile(double s) const;
  double base_quantile(double p) const;
  double base_mean() const;
  double base_es(double p) const;
  double es_by_quadrature(double p) const;

  Family family_;
  std::vector<double> params_;
  double scale_ = 1.0;
  double shift_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Theta-index of GeneralizedPareto(alpha, beta) at level p.
double gp_theta(double alpha, double beta, double p);

/// Throws DomainError unless 0 < p < 1.
void require_level(double p, const char* where);

// Free-function spellings.
inline double quantile(const LossModel& m, double p) { return m.quantile(p); }
inline double mean(const LossModel& m) { return m.mean(); }
inline double es(const LossModel& m, double p) { return m.es(p); }
inline double theta_closed(const LossModel& m, double p) { return m.theta_closed(p); }
inline double dx_lower_bound(const LossModel& m) { return m.dx_lower_bound(); }

}  // namespace pelvar
