#include "pelvar/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "pelvar/errors.hpp"
#include "pelvar/parallel.hpp"
#include "pelvar/rng.hpp"

namespace pelvar {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double type7_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw DomainError("Sample: need at least 2 observations");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("Sample: observation " + std::to_string(i) + " is not finite");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
  suffix_.assign(sorted_.size() + 1, 0.0L);
  for (std::size_t i = sorted_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + sorted_[i];
  mean_ = static_cast<double>(suffix_[0] / static_cast<long double>(sorted_.size()));
}

double Sample::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::size_t quantile_rank(std::size_t n, double p) {
  require_level(p, "empirical_quantile");
  const double np = static_cast<double>(n) * p;
  const double nearest = std::round(np);
  // n * p that should be an integer may land a few ulps above it.
  double k = std::abs(np - nearest) <= 1e-9 * std::max(1.0, np) ? nearest : std::ceil(np);
  k = std::clamp(k, 1.0, static_cast<double>(n));
  return static_cast<std::size_t>(k);
}

double empirical_quantile(const Sample& s, double p) {
  return s.sorted()[quantile_rank(s.size(), p) - 1];
}

double empirical_es(const Sample& s, double p) {
  const double q = empirical_quantile(s, p);
  const auto& x = s.sorted();
  const auto first = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), q) - x.begin());
  if (first == x.size()) {
    throw DomainError("empirical_es: no observation exceeds the empirical quantile at p=" + fmt(p) +
                      "; use a lower level");
  }
  return s.upper_sum(first) / static_cast<double>(x.size() - first);
}

double empirical_theta(const Sample& s, double p) {
  const double q = empirical_quantile(s, p);
  const double m = s.mean();
  if (!(q > m)) {
    throw DomainError("empirical_theta: p=" + fmt(p) + " is outside the empirical D_X (bound " +
                      fmt(empirical_dx_lower_bound(s)) + ")");
  }
  const double e = empirical_es(s, p);
  return (1.0 - p) * (e - q) / (q - m);
}

double empirical_dx_lower_bound(const Sample& s) { return s.cdf(s.mean()); }

double empirical_theta_inplace(std::vector<double>& v, double p) {
  if (v.size() < 2) throw DomainError("empirical_theta: need at least 2 observations");
  long double total = 0.0L;
  for (double x : v) total += x;
  const double m = static_cast<double>(total / static_cast<long double>(v.size()));
  const std::size_t k = quantile_rank(v.size(), p);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  const double q = v[k - 1];
  if (!(q > m)) throw DomainError("empirical_theta: p=" + fmt(p) + " is outside the empirical D_X");
  long double excess = 0.0L;
  std::size_t count = 0;
  for (std::size_t i = k; i < v.size(); ++i) {
    if (v[i] > q) {
      excess += v[i] - q;
      ++count;
    }
  }
  if (count == 0) throw DomainError("empirical_theta: empty exceedance set at p=" + fmt(p));
  return (1.0 - p) * static_cast<double>(excess / static_cast<long double>(count)) / (q - m);
}

double silverman_bandwidth(const std::vector<double>& x) {
  if (x.size() < 2) throw DomainError("silverman_bandwidth: need at least 2 points");
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = type7_quantile(sorted, 0.75) - type7_quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.349);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) throw DomainError("silverman_bandwidth: points have zero spread");
  return 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
}

std::vector<double> kernel_weights(const std::vector<double>& anchor_p, double query, double h) {
  if (!(h > 0.0)) throw DomainError("kernel_weights: bandwidth must be positive");
  std::vector<double> w(anchor_p.size());
  double total = 0.0;
  for (std::size_t k = 0; k < anchor_p.size(); ++k) {
    const double u = (query - anchor_p[k]) / h;
    w[k] = std::exp(-0.5 * u * u);
    total += w[k];
  }
  if (!(total > 0.0)) {
    throw ComputationError("kernel_theta: all kernel weights underflow to zero (bandwidth " + fmt(h) +
                           " too small)");
  }
  for (double& v : w) v /= total;
  return w;
}

double kernel_theta(const std::vector<std::pair<double, double>>& anchors, double query,
                    const KernelConfig& cfg) {
  if (anchors.size() < 2) throw DomainError("kernel_theta: need at least 2 anchors");
  std::vector<double> ps;
  ps.reserve(anchors.size());
  for (const auto& a : anchors) ps.push_back(a.first);
  const auto [lo, hi] = std::minmax_element(ps.begin(), ps.end());
  if (query < *lo || query > *hi) {
    throw DomainError("kernel_theta: query " + fmt(query) + " outside anchor range [" + fmt(*lo) +
                      ", " + fmt(*hi) + "]");
  }
  if (cfg.bandwidth && !(*cfg.bandwidth > 0.0)) throw DomainError("kernel_theta: bandwidth must be positive");
  const double h = cfg.bandwidth ? *cfg.bandwidth : silverman_bandwidth(ps);
  const auto w = kernel_weights(ps, query, h);
  double out = 0.0;
  for (std::size_t k = 0; k < anchors.size(); ++k) out += w[k] * anchors[k].second;
  return out;
}

std::vector<double> default_anchor_grid(const Sample& s, int count) {
  if (count < 2) throw DomainError("default_anchor_grid: need at least 2 anchors");
  const double lo = empirical_dx_lower_bound(s) + 0.01;
  const double hi = 0.999;
  if (!(lo < hi)) throw DomainError("default_anchor_grid: empirical D_X leaves no room for anchors");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return grid;
}

std::vector<std::pair<double, double>> theta_anchors(const Sample& s, const std::vector<double>& levels) {
  std::vector<std::pair<double, double>> out;
  out.reserve(levels.size());
  for (double p : levels) out.emplace_back(p, empirical_theta(s, p));
  return out;
}

std::vector<ConsistencyPoint> consistency_probe(const LossModel& model, double p,
                                                const std::vector<std::size_t>& sizes,
                                                std::uint64_t seed, int replications) {
  if (replications < 1) throw DomainError("consistency_probe: need at least one replication");
  const double truth = model.theta_closed(p);
  const std::size_t reps = static_cast<std::size_t>(replications);
  std::vector<double> errors(sizes.size() * reps);
  parallel_for(errors.size(), [&](std::size_t job) {
    const std::size_t n = sizes[job / reps];
    Philox rng(seed, stream_id({n, job % reps}));
    std::vector<double> draws(n);
    for (double& x : draws) x = model.quantile(rng.uniform());
    errors[job] = std::abs(empirical_theta_inplace(draws, p) - truth);
  });
  std::vector<ConsistencyPoint> curve;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += errors[i * reps + r];
    curve.push_back({sizes[i], sum / static_cast<double>(reps)});
  }
  return curve;
}

}  // namespace pelvar
