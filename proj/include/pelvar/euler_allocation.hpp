#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pelvar/empirical.hpp"

namespace pelvar {

/// N joint loss scenarios over d components, stored column-wise.
class PortfolioSample {
 public:
  /// Throws DomainError unless N >= 100, d >= 1, all columns equally long and finite.
  PortfolioSample(std::vector<std::vector<double>> columns, std::vector<std::string> labels = {});

  std::size_t rows() const { return aggregate_.size(); }
  std::size_t components() const { return columns_.size(); }
  const std::vector<double>& column(std::size_t j) const { return columns_[j]; }
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& aggregate() const { return aggregate_; }
  /// Empirical view of the aggregate (sorted, cached).
  const Sample& aggregate_sample() const { return *aggregate_sample_; }
  double column_mean(std::size_t j) const { return means_[j]; }

 private:
  std::vector<std::vector<double>> columns_;
  std::vector<std::string> labels_;
  std::vector<double> aggregate_;
  std::vector<double> means_;
  std::shared_ptr<const Sample> aggregate_sample_;
};

enum class VarScheme { Linear, Kernel };

std::string to_string(VarScheme s);
VarScheme var_scheme_from_string(const std::string& s);

struct KernelVarResult {
  std::vector<double> contributions;
  double bandwidth = 0.0;
  double smoothed_var = 0.0;  // VaR_p of the aggregate plus eta Z
  double effective_sample_size = 0.0;
  std::vector<std::string> warnings;
};

/// Column means over rows whose aggregate exceeds the empirical VaR.
std::vector<double> es_contribution(const PortfolioSample& ps, double p);

/// E[X_j] + Cov(X_j, X) / Var(X) (VaR - E[X]).
std::vector<double> var_contribution_linear(const PortfolioSample& ps, double p);

/// Gaussian-kernel conditional mean of X_j at VaR_p(X + eta Z).
/// `bandwidth` defaults to Silverman's rule on the aggregate.
KernelVarResult var_contribution_kernel(const PortfolioSample& ps, double p, std::optional<double> bandwidth,
                                        std::uint64_t seed);

std::vector<double> fes_contribution(const PortfolioSample& ps, double p, double theta);

/// Aggregate theta times the difference of the two normalized spreads.
std::vector<double> theta_contribution(const PortfolioSample& ps, double p, const std::vector<double>& var_contrib);

std::vector<double> pelvar_contribution(const PortfolioSample& ps, double p, const std::vector<double>& var_contrib);

// Convenience overloads computing the VaR contributions with the given scheme.
std::vector<double> theta_contribution(const PortfolioSample& ps, double p, VarScheme scheme,
                                       std::uint64_t seed = 0);
std::vector<double> pelvar_contribution(const PortfolioSample& ps, double p, VarScheme scheme,
                                        std::uint64_t seed = 0);

struct AggregateValues {
  double mean = 0.0;
  double var = 0.0;
  double es = 0.0;
  double theta = 0.0;
  double fes = 0.0;     // at `flexibility`
  double pelvar = 0.0;  // FES at theta
};

struct MeasureTriple {
  std::vector<double> contributions;
  std::vector<double> proportions;  // contribution / aggregate value (theta: / aggregate theta)
  double residual = 0.0;            // |sum - aggregate|, theta against 0
};

struct AllocationReport {
  double p = 0.0;
  VarScheme scheme = VarScheme::Kernel;
  double flexibility = 0.0;  // theta used for the FES row
  std::vector<std::string> labels;
  AggregateValues aggregate;
  std::vector<double> means;
  MeasureTriple var, es, fes, pelvar, theta;
  /// (1-p)(ES_j - VaR_j)/(VaR_j - E_j), NaN when VaR_j <= E_j.
  std::vector<double> component_theta;
  /// theta_j < 0 exactly when component_theta_j < theta, wherever defined.
  bool negative_contribution_rule_holds = true;
  double kernel_bandwidth = 0.0;
  double effective_sample_size = 0.0;
  std::vector<std::string> warnings;
};

AllocationReport allocate(const PortfolioSample& ps, double p, VarScheme scheme, std::uint64_t seed,
                          std::optional<double> flexibility = std::nullopt,
                          std::optional<double> bandwidth = std::nullopt);

}  // namespace pelvar
