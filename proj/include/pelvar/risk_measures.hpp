#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pelvar/distributions.hpp"
#include "pelvar/empirical.hpp"

namespace pelvar {

/// Either an analytic LossModel or an empirical Sample.
class RiskSource {
 public:
  RiskSource(LossModel model) : impl_(std::move(model)) {}  // NOLINT(google-explicit-constructor)
  RiskSource(Sample sample)                                  // NOLINT(google-explicit-constructor)
      : impl_(std::make_shared<const Sample>(std::move(sample))) {}
  RiskSource(std::shared_ptr<const Sample> sample) : impl_(std::move(sample)) {}  // NOLINT

  bool is_sample() const { return std::holds_alternative<std::shared_ptr<const Sample>>(impl_); }
  const LossModel* model() const { return std::get_if<LossModel>(&impl_); }
  const Sample* sample() const;

  double var(double p) const;
  double es(double p) const;
  double mean() const;
  double dx_lower_bound() const;

 private:
  std::variant<LossModel, std::shared_ptr<const Sample>> impl_;
};

struct RiskAssessment {
  double p = 0.0;
  double var = 0.0;
  double es = 0.0;
  double mean = 0.0;
  double theta = 0.0;
  double fes = 0.0;  // FES at the requested flexibility (theta_p when none given)
  double pelvar = 0.0;
};

/// mean + (1-p)(ES_p - mean) / (1 - p + theta), the convex mix of ES and mean.
double fes(const RiskSource& source, double p, double theta);

/// (1-p)(ES_p - VaR_p) / (VaR_p - mean); +inf when VaR_p equals the mean.
double theta_index(const RiskSource& source, double p);

/// FES at theta_p. Domain error outside D_X.
double pelvar(const RiskSource& source, double p);

/// Unique p in D_X whose theta-index equals theta.
double solve_p_theta(const RiskSource& source, double theta);

struct FesMaximum {
  double p = 0.0;
  double value = 0.0;
};

/// argmax_p FES_p(theta) by golden-section search.
FesMaximum fes_maximizer(const RiskSource& source, double theta);

struct ThetaOrderResult {
  bool holds = false;            // right-spread ratio nondecreasing across the grid
  bool pointwise_holds = false;  // theta_p(X) <= theta_p(Y) at every grid point
  std::vector<double> levels;    // grid points inside D_X and D_Y
  std::vector<double> ratio;     // (ES_p(Y) - EY) / (ES_p(X) - EX)
  std::vector<double> theta_x;
  std::vector<double> theta_y;
};

ThetaOrderResult theta_order_holds(const RiskSource& x, const RiskSource& y,
                                   const std::vector<double>& grid);

RiskAssessment assess(const RiskSource& source, double p,
                      std::optional<double> flexibility = std::nullopt);

}  // namespace pelvar
