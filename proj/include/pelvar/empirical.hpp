#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pelvar/distributions.hpp"

namespace pelvar {

/// Finite observations with a cached ascending copy and suffix sums.
class Sample {
 public:
  /// Throws DomainError when fewer than two values or any value is not finite.
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }
  double mean() const { return mean_; }
  /// Sum of sorted()[i..n).
  double upper_sum(std::size_t i) const { return static_cast<double>(suffix_[i]); }
  /// Empirical cdf #{X <= x} / n.
  double cdf(double x) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::vector<long double> suffix_;
  double mean_ = 0.0;
};

/// 1-based rank ceil(n p) in [1, n], tolerant of rounding in n * p.
std::size_t quantile_rank(std::size_t n, double p);

/// Ascending order statistic X_(ceil(n p)).
double empirical_quantile(const Sample& s, double p);
/// Mean of the observations strictly above empirical_quantile.
double empirical_es(const Sample& s, double p);
/// (1 - p)(ES - VaR) / (VaR - mean) on the sample.
double empirical_theta(const Sample& s, double p);
/// F_n(sample mean), the empirical counterpart of inf D_X.
double empirical_dx_lower_bound(const Sample& s);

/// Same estimator as empirical_theta working in place on unsorted data in
/// O(n) (the vector is reordered). Used by Monte Carlo loops.
double empirical_theta_inplace(std::vector<double>& values, double p);

struct KernelConfig {
  /// Gaussian is the only kernel offered.
  std::optional<double> bandwidth;  // nullopt = Silverman rule on anchor abscissas
};

/// 0.9 min(sd, IQR/1.349) m^{-1/5}.
double silverman_bandwidth(const std::vector<double>& x);

/// Nadaraya-Watson average of anchor values at `query`.
double kernel_theta(const std::vector<std::pair<double, double>>& anchors, double query,
                    const KernelConfig& cfg = {});

/// Normalized Nadaraya-Watson weights (exposed for testing).
std::vector<double> kernel_weights(const std::vector<double>& anchor_p, double query, double h);

/// Default anchor grid: `count` equispaced levels on (F_n(mean) + 0.01, 0.999).
std::vector<double> default_anchor_grid(const Sample& s, int count = 41);

/// Empirical theta evaluated at each anchor level.
std::vector<std::pair<double, double>> theta_anchors(const Sample& s, const std::vector<double>& levels);

struct ConsistencyPoint {
  std::size_t n = 0;
  double mae = 0.0;
};

/// Mean absolute error of empirical_theta against model.theta_closed(p)
/// over `replications` independent samples for each n.
std::vector<ConsistencyPoint> consistency_probe(const LossModel& model, double p,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t seed, int replications = 50);

}  // namespace pelvar
