#include "pelvar/euler_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pelvar/errors.hpp"
#include "pelvar/rng.hpp"
#include "pelvar/risk_measures.hpp"

namespace pelvar {
namespace {

constexpr std::size_t kMinTail = 30;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

struct Aggregates {
  double mean, var, es, theta;
};

Aggregates aggregates(const PortfolioSample& ps, double p) {
  const Sample& s = ps.aggregate_sample();
  Aggregates a{};
  a.mean = s.mean();
  a.var = empirical_quantile(s, p);
  a.es = empirical_es(s, p);
  a.theta = empirical_theta(s, p);
  return a;
}

double sum(const std::vector<double>& v) {
  long double t = 0.0L;
  for (double x : v) t += x;
  return static_cast<double>(t);
}

std::vector<double> ratio(const std::vector<double>& v, double denom) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] / denom;
  return out;
}

std::vector<double> theta_from_parts(const PortfolioSample& ps, double p, const Aggregates& a,
                                     const std::vector<double>& es_c, const std::vector<double>& var_c) {
  (void)p;
  std::vector<double> out(ps.components());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = a.theta * ((es_c[j] - var_c[j]) / (a.es - a.var) - (var_c[j] - ps.column_mean(j)) / (a.var - a.mean));
  }
  return out;
}

std::vector<double> pelvar_from_parts(const PortfolioSample& ps, double p, const Aggregates& a,
                                      const std::vector<double>& es_c, const std::vector<double>& theta_c) {
  const double tail = 1.0 - p;
  const double denom = tail + a.theta;
  const double pel = a.mean + tail * (a.es - a.mean) / denom;
  std::vector<double> out(ps.components());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (tail * es_c[j] + a.theta * ps.column_mean(j)) / denom - theta_c[j] * (pel - a.mean) / denom;
  }
  return out;
}

void check_lengths(const PortfolioSample& ps, const std::vector<double>& v, const char* where) {
  if (v.size() != ps.components()) {
    throw DomainError(std::string(where) + ": expected " + std::to_string(ps.components()) +
                      " VaR contributions, got " + std::to_string(v.size()));
  }
}

}  // namespace

PortfolioSample::PortfolioSample(std::vector<std::vector<double>> columns, std::vector<std::string> labels)
    : columns_(std::move(columns)), labels_(std::move(labels)) {
  if (columns_.empty()) throw DomainError("PortfolioSample: need at least one component");
  const std::size_t n = columns_.front().size();
  if (n < 100) throw DomainError("PortfolioSample: need at least 100 scenarios, got " + std::to_string(n));
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != n) throw DomainError("PortfolioSample: column " + std::to_string(j) + " has wrong length");
  }
  if (labels_.empty()) {
    for (std::size_t j = 0; j < columns_.size(); ++j) labels_.push_back("X" + std::to_string(j + 1));
  }
  if (labels_.size() != columns_.size()) throw DomainError("PortfolioSample: label count does not match components");
  aggregate_.assign(n, 0.0);
  means_.assign(columns_.size(), 0.0);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    long double t = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = columns_[j][i];
      if (!std::isfinite(x)) {
        throw DomainError("PortfolioSample: non-finite value in column " + std::to_string(j) + ", row " +
                          std::to_string(i));
      }
      aggregate_[i] += x;
      t += x;
    }
    means_[j] = static_cast<double>(t / static_cast<long double>(n));
  }
  aggregate_sample_ = std::make_shared<const Sample>(aggregate_);
}

std::string to_string(VarScheme s) { return s == VarScheme::Linear ? "linear" : "kernel"; }

VarScheme var_scheme_from_string(const std::string& s) {
  if (s == "linear") return VarScheme::Linear;
  if (s == "kernel") return VarScheme::Kernel;
  throw DomainError("unknown VaR contribution scheme '" + s + "' (expected linear or kernel)");
}

std::vector<double> es_contribution(const PortfolioSample& ps, double p) {
  const double v = empirical_quantile(ps.aggregate_sample(), p);
  const auto& agg = ps.aggregate();
  std::vector<long double> acc(ps.components(), 0.0L);
  std::size_t count = 0;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    if (agg[i] > v) {
      ++count;
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += ps.column(j)[i];
    }
  }
  if (count < kMinTail) {
    throw DomainError("es_contribution: only " + std::to_string(count) + " scenarios exceed VaR at p=" + fmt(p) +
                      " (need " + std::to_string(kMinTail) + ")");
  }
  std::vector<double> out(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = static_cast<double>(acc[j] / static_cast<long double>(count));
  return out;
}

std::vector<double> var_contribution_linear(const PortfolioSample& ps, double p) {
  const Sample& s = ps.aggregate_sample();
  const double v = empirical_quantile(s, p);
  const double m = s.mean();
  const auto& agg = ps.aggregate();
  long double var_x = 0.0L;
  for (double x : agg) var_x += (x - m) * (x - m);
  if (!(var_x > 0.0L)) throw DomainError("var_contribution_linear: aggregate has zero variance");
  std::vector<double> out(ps.components());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto& col = ps.column(j);
    const double mj = ps.column_mean(j);
    long double cov = 0.0L;
    for (std::size_t i = 0; i < agg.size(); ++i) cov += (col[i] - mj) * (agg[i] - m);
    out[j] = mj + static_cast<double>(cov / var_x) * (v - m);
  }
  return out;
}

KernelVarResult var_contribution_kernel(const PortfolioSample& ps, double p, std::optional<double> bandwidth,
                                        std::uint64_t seed) {
  require_level(p, "var_contribution_kernel");
  const auto& agg = ps.aggregate();
  KernelVarResult r;
  if (bandwidth && !(*bandwidth > 0.0)) throw DomainError("var_contribution_kernel: bandwidth must be positive");
  r.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(agg);
  const double eta = r.bandwidth;

  Philox rng(seed, stream_id({0x6B65726E656CULL}));
  std::vector<double> noisy(agg.size());
  for (std::size_t i = 0; i < agg.size(); ++i) noisy[i] = agg[i] + eta * rng.normal();
  const std::size_t k = quantile_rank(noisy.size(), p);
  std::nth_element(noisy.begin(), noisy.begin() + static_cast<std::ptrdiff_t>(k - 1), noisy.end());
  r.smoothed_var = noisy[k - 1];

  std::vector<double> w(agg.size());
  long double total = 0.0L;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    const double u = (r.smoothed_var - agg[i]) / eta;
    w[i] = std::exp(-0.5 * u * u);
    total += w[i];
  }
  if (!(total > 0.0L)) throw ComputationError("var_contribution_kernel: all kernel weights are zero");
  long double sq = 0.0L;
  for (double& x : w) {
    x = static_cast<double>(x / total);
    sq += static_cast<long double>(x) * x;
  }
  r.effective_sample_size = static_cast<double>(1.0L / sq);
  if (r.effective_sample_size < 30.0) {
    r.warnings.push_back("kernel VaR contributions rest on an effective sample size of " +
                         fmt(r.effective_sample_size) + " (< 30)");
  }
  r.contributions.assign(ps.components(), 0.0);
  for (std::size_t j = 0; j < ps.components(); ++j) {
    const auto& col = ps.column(j);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < col.size(); ++i) acc += static_cast<long double>(w[i]) * col[i];
    r.contributions[j] = static_cast<double>(acc);
  }
  return r;
}

std::vector<double> fes_contribution(const PortfolioSample& ps, double p, double theta) {
  if (!(theta > 0.0)) throw DomainError("fes_contribution: theta must be positive, got " + fmt(theta));
  const auto es_c = es_contribution(ps, p);
  const double tail = 1.0 - p;
  std::vector<double> out(es_c.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::isinf(theta) ? ps.column_mean(j)
                               : (tail * es_c[j] + theta * ps.column_mean(j)) / (tail + theta);
  }
  return out;
}

std::vector<double> theta_contribution(const PortfolioSample& ps, double p, const std::vector<double>& var_c) {
  check_lengths(ps, var_c, "theta_contribution");
  const Aggregates a = aggregates(ps, p);
  return theta_from_parts(ps, p, a, es_contribution(ps, p), var_c);
}

std::vector<double> pelvar_contribution(const PortfolioSample& ps, double p, const std::vector<double>& var_c) {
  check_lengths(ps, var_c, "pelvar_contribution");
  const Aggregates a = aggregates(ps, p);
  const auto es_c = es_contribution(ps, p);
  return pelvar_from_parts(ps, p, a, es_c, theta_from_parts(ps, p, a, es_c, var_c));
}

namespace {
std::vector<double> scheme_var(const PortfolioSample& ps, double p, VarScheme scheme, std::uint64_t seed) {
  if (scheme == VarScheme::Linear) return var_contribution_linear(ps, p);
  return var_contribution_kernel(ps, p, std::nullopt, seed).contributions;
}
}  // namespace

std::vector<double> theta_contribution(const PortfolioSample& ps, double p, VarScheme scheme, std::uint64_t seed) {
  return theta_contribution(ps, p, scheme_var(ps, p, scheme, seed));
}

std::vector<double> pelvar_contribution(const PortfolioSample& ps, double p, VarScheme scheme, std::uint64_t seed) {
  return pelvar_contribution(ps, p, scheme_var(ps, p, scheme, seed));
}

AllocationReport allocate(const PortfolioSample& ps, double p, VarScheme scheme, std::uint64_t seed,
                          std::optional<double> flexibility, std::optional<double> bandwidth) {
  AllocationReport r;
  r.p = p;
  r.scheme = scheme;
  r.labels = ps.labels();
  const Aggregates a = aggregates(ps, p);
  const double tail = 1.0 - p;
  r.flexibility = flexibility ? *flexibility : a.theta;
  if (!(r.flexibility > 0.0)) throw DomainError("allocate: flexibility must be positive");

  r.aggregate.mean = a.mean;
  r.aggregate.var = a.var;
  r.aggregate.es = a.es;
  r.aggregate.theta = a.theta;
  r.aggregate.pelvar = a.mean + tail * (a.es - a.mean) / (tail + a.theta);
  r.aggregate.fes = a.mean + tail * (a.es - a.mean) / (tail + r.flexibility);

  for (std::size_t j = 0; j < ps.components(); ++j) r.means.push_back(ps.column_mean(j));

  if (scheme == VarScheme::Linear) {
    r.var.contributions = var_contribution_linear(ps, p);
  } else {
    auto k = var_contribution_kernel(ps, p, bandwidth, seed);
    r.var.contributions = std::move(k.contributions);
    r.kernel_bandwidth = k.bandwidth;
    r.effective_sample_size = k.effective_sample_size;
    r.warnings = std::move(k.warnings);
  }
  r.es.contributions = es_contribution(ps, p);
  r.fes.contributions.resize(ps.components());
  for (std::size_t j = 0; j < ps.components(); ++j) {
    r.fes.contributions[j] = (tail * r.es.contributions[j] + r.flexibility * r.means[j]) / (tail + r.flexibility);
  }
  r.theta.contributions = theta_from_parts(ps, p, a, r.es.contributions, r.var.contributions);
  r.pelvar.contributions = pelvar_from_parts(ps, p, a, r.es.contributions, r.theta.contributions);

  auto finish = [](MeasureTriple& m, double aggregate, double target) {
    m.proportions = ratio(m.contributions, aggregate);
    m.residual = std::abs(sum(m.contributions) - target);
  };
  finish(r.var, a.var, a.var);
  finish(r.es, a.es, a.es);
  finish(r.fes, r.aggregate.fes, r.aggregate.fes);
  finish(r.pelvar, r.aggregate.pelvar, r.aggregate.pelvar);
  finish(r.theta, a.theta, 0.0);

  for (std::size_t j = 0; j < ps.components(); ++j) {
    const double vj = r.var.contributions[j];
    const double ej = r.es.contributions[j];
    const double mj = r.means[j];
    if (vj > mj) {
      const double ct = tail * (ej - vj) / (vj - mj);
      r.component_theta.push_back(ct);
      if ((r.theta.contributions[j] < 0.0) != (ct < a.theta)) {
        // Allow for rounding when the two sides are essentially equal.
        if (std::abs(ct - a.theta) > 1e-12 * a.theta) r.negative_contribution_rule_holds = false;
      }
    } else {
      r.component_theta.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return r;
}

}  // namespace pelvar
