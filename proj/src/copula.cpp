#include "pelvar/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pelvar/errors.hpp"
#include "pelvar/parallel.hpp"
#include "pelvar/rng.hpp"
#include "pelvar/special_functions.hpp"

namespace pelvar {
namespace {

using special::normal_cdf;
using special::normal_sf;

constexpr std::size_t kBlockRows = 4096;
constexpr double kTiny = std::numeric_limits<double>::min();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

/// A uniform as the pair (u, 1 - u) so that upper tails keep full precision.
struct Uniform2 {
  double u;
  double s;
};

Uniform2 from_normal(double y) {
  if (y > 0.0) {
    const double s = std::max(normal_sf(y), kTiny);
    return {1.0 - s, s};
  }
  const double u = std::max(normal_cdf(y), kTiny);
  return {u, 1.0 - u};
}

Uniform2 from_student_t(double t, int nu) {
  if (nu == 2) {
    const double root = std::sqrt(2.0 + t * t);
    // Lower tail of |t|: 1 / (root (root + |t|)), cancellation free.
    const double small = std::max(1.0 / (root * (root + std::abs(t))), kTiny);
    return t > 0.0 ? Uniform2{1.0 - small, small} : Uniform2{small, 1.0 - small};
  }
  if (t > 0.0) {
    const double s = std::max(special::student_t_sf(t, nu), kTiny);
    return {1.0 - s, s};
  }
  const double u = std::max(special::student_t_sf(-t, nu), kTiny);
  return {u, 1.0 - u};
}

double marginal_value(const LossModel& m, Uniform2 v) {
  return v.u <= 0.5 ? m.quantile(v.u) : m.tail_quantile(v.s);
}

/// Generates rows in fixed-size blocks with one RNG stream per block, so the
/// output does not depend on the number of worker threads.
template <class Emit>
void generate(const CopulaSpec& spec, std::size_t d, std::size_t n, std::uint64_t seed, std::uint64_t repetition,
              Emit&& emit) {
  spec.validate(d);
  std::vector<double> chol;
  if (spec.kind != CopulaKind::Gumbel) chol = compound_cholesky(spec.r, d);
  const std::size_t blocks = (n + kBlockRows - 1) / kBlockRows;
  parallel_for(blocks, [&](std::size_t b) {
    Philox rng(seed, stream_id({repetition, b}));
    std::vector<double> z(d), y(d);
    const std::size_t end = std::min(n, (b + 1) * kBlockRows);
    for (std::size_t i = b * kBlockRows; i < end; ++i) {
      if (spec.kind == CopulaKind::Gumbel) {
        const double alpha = 1.0 / spec.xi;
        double log_s = 0.0;
        if (alpha < 1.0) {
          // Kanter's representation of the positive alpha-stable frailty.
          const double theta = special::kPi * rng.uniform();
          const double w = rng.exponential();
          log_s = std::log(std::sin(alpha * theta)) - std::log(std::sin(theta)) / alpha +
                  (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * theta)) - std::log(w));
        }
        for (std::size_t j = 0; j < d; ++j) {
          const double e = rng.exponential();
          const double t = std::exp(alpha * (std::log(e) - log_s));
          const double s = std::max(-std::expm1(-t), kTiny);
          emit(i, j, s < 0.5 ? Uniform2{1.0 - s, s} : Uniform2{std::max(std::exp(-t), kTiny), s});
        }
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
      for (std::size_t j = 0; j < d; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= j; ++k) acc += chol[j * d + k] * z[k];
        y[j] = acc;
      }
      if (spec.kind == CopulaKind::Gaussian) {
        for (std::size_t j = 0; j < d; ++j) emit(i, j, from_normal(y[j]));
      } else {
        double w = 0.0;
        for (int k = 0; k < spec.nu; ++k) {
          const double g = rng.normal();
          w += g * g;
        }
        const double scale = 1.0 / std::sqrt(w / spec.nu);
        for (std::size_t j = 0; j < d; ++j) emit(i, j, from_student_t(y[j] * scale, spec.nu));
      }
    }
  });
}

struct TailStats {
  double var, es, mean;
};

// VaR as X_(k) and ES as the mean of the n - k largest values.
TailStats tail_stats(const std::vector<double>& sorted, const std::vector<long double>& suffix, double p) {
  const std::size_t n = sorted.size();
  const std::size_t k = quantile_rank(n, p);
  TailStats t{};
  t.var = sorted[k - 1];
  t.mean = static_cast<double>(suffix[0] / static_cast<long double>(n));
  t.es = k < n ? static_cast<double>(suffix[k] / static_cast<long double>(n - k)) : t.var;
  return t;
}

double fes_value(const TailStats& t, double p, double theta) {
  if (std::isinf(theta)) return t.mean;
  return t.mean + (1.0 - p) * (t.es - t.mean) / (1.0 - p + theta);
}

}  // namespace

CopulaSpec CopulaSpec::gaussian(double r) {
  if (!(r > -1.0 && r < 1.0)) throw DomainError("Gaussian copula: need -1 < r < 1, got " + fmt(r));
  CopulaSpec s;
  s.kind = CopulaKind::Gaussian;
  s.r = r;
  return s;
}

CopulaSpec CopulaSpec::student_t(double r, int nu) {
  if (!(r > -1.0 && r < 1.0)) throw DomainError("t copula: need -1 < r < 1, got " + fmt(r));
  if (nu < 1) throw DomainError("t copula: need a positive integer nu");
  CopulaSpec s;
  s.kind = CopulaKind::StudentT;
  s.r = r;
  s.nu = nu;
  return s;
}

CopulaSpec CopulaSpec::gumbel(double xi) {
  if (!(xi >= 1.0) || !std::isfinite(xi)) throw DomainError("Gumbel copula: need finite xi >= 1, got " + fmt(xi));
  CopulaSpec s;
  s.kind = CopulaKind::Gumbel;
  s.xi = xi;
  return s;
}

void CopulaSpec::validate(std::size_t d) const {
  if (d == 0) throw DomainError("copula: dimension must be positive");
  if (kind == CopulaKind::Gumbel) return;
  const double lower = d > 1 ? -1.0 / static_cast<double>(d - 1) : -1.0;
  if (!(r > lower && r < 1.0)) {
    throw DomainError("copula: compound correlation r=" + fmt(r) + " is not positive definite in dimension " +
                      std::to_string(d) + " (need " + fmt(lower) + " < r < 1)");
  }
}

std::string CopulaSpec::describe() const {
  switch (kind) {
    case CopulaKind::Gaussian: return "gaussian(r=" + fmt(r) + ")";
    case CopulaKind::StudentT: return "t(r=" + fmt(r) + ",nu=" + std::to_string(nu) + ")";
    case CopulaKind::Gumbel: return "gumbel(xi=" + fmt(xi) + ")";
  }
  return "?";
}

std::vector<double> compound_cholesky(double r, std::size_t d) {
  std::vector<double> l(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = (i == j) ? 1.0 : r;
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (!(acc > 0.0)) throw DomainError("compound correlation matrix is not positive definite");
        l[i * d + i] = std::sqrt(acc);
      } else {
        l[i * d + j] = acc / l[j * d + j];
      }
    }
  }
  return l;
}

PortfolioSample sample_copula(const CopulaSpec& spec, const std::vector<LossModel>& marginals, std::size_t n,
                              std::uint64_t seed, std::uint64_t repetition) {
  const std::size_t d = marginals.size();
  std::vector<std::vector<double>> cols(d, std::vector<double>(n));
  generate(spec, d, n, seed, repetition,
           [&](std::size_t i, std::size_t j, Uniform2 v) { cols[j][i] = marginal_value(marginals[j], v); });
  std::vector<std::string> labels;
  for (const auto& m : marginals) labels.push_back(m.describe());
  return PortfolioSample(std::move(cols), std::move(labels));
}

std::vector<std::vector<double>> sample_copula_uniforms(const CopulaSpec& spec, std::size_t d, std::size_t n,
                                                        std::uint64_t seed, std::uint64_t repetition) {
  std::vector<std::vector<double>> cols(d, std::vector<double>(n));
  generate(spec, d, n, seed, repetition, [&](std::size_t i, std::size_t j, Uniform2 v) { cols[j][i] = v.u; });
  return cols;
}

std::vector<LossModel> scenario_marginals(char scenario) {
  const auto normal = LossModel::normal(100.0, 10.0);
  const auto t4 = LossModel::student_t(4.0, 100.0, 10.0);
  const auto expo = LossModel::exponential(0.01);
  // Shape 1/1.4 with the rate chosen for mean 100.
  const double shape = 1.0 / 1.4;
  const auto weibull = LossModel::weibull(shape, special::gamma_fn(1.0 + 1.0 / shape) / 100.0);
  const auto pareto = LossModel::pareto2(2.0, 100.0);
  switch (scenario) {
    case 'a': return {normal, t4, expo};
    case 'b': return {normal, expo, weibull};
    case 'c': return {t4, expo, pareto};
    case 'd': return {expo, weibull, pareto};
    default: throw DomainError(std::string("unknown scenario '") + scenario + "' (expected a, b, c or d)");
  }
}

std::vector<LossModel> stress_marginals() {
  return {LossModel::exponential(0.01), LossModel::normal(100.0, 20.0), LossModel::pareto2(2.0, 100.0)};
}

std::vector<AllocationReport> run_allocation_scenario(const ScenarioConfig& cfg, VarScheme scheme) {
  if (cfg.marginals.empty()) throw DomainError("scenario: no marginals given");
  if (cfg.n < 1000) throw DomainError("scenario: need n >= 1000");
  PortfolioSample ps = sample_copula(cfg.copula, cfg.marginals, cfg.n, cfg.seed);
  if (!cfg.labels.empty()) ps = PortfolioSample(ps.columns(), cfg.labels);
  std::vector<AllocationReport> out;
  for (std::size_t k = 0; k < cfg.levels.size(); ++k) {
    out.push_back(allocate(ps, cfg.levels[k], scheme, mix64(cfg.seed ^ mix64(k + 1))));
  }
  return out;
}

std::vector<StressReport> run_stress(const std::vector<LossModel>& marginals, const std::vector<CopulaSpec>& copulas,
                                     const std::vector<double>& levels, std::size_t n, int repetitions,
                                     std::uint64_t seed) {
  if (repetitions < 1) throw DomainError("run_stress: need at least one repetition");
  if (n < 2) throw DomainError("run_stress: need n >= 2");
  for (double p : levels) require_level(p, "run_stress");
  const std::size_t d = marginals.size();
  const std::size_t reps = static_cast<std::size_t>(repetitions);
  // Relative slack that keeps floating-point rounding from counting as a violation.
  constexpr double kSlack = 1e-12;

  std::vector<StressReport> reports;
  for (std::size_t c = 0; c < copulas.size(); ++c) {
    copulas[c].validate(d);
    // flags[rep][level] bit 0 = VaR, 1 = PELVaR, 2 = ES
    std::vector<std::vector<int>> flags(reps, std::vector<int>(levels.size(), 0));
    const std::uint64_t copula_seed = mix64(seed ^ mix64(0x5354524553530000ULL + c));
    parallel_for(reps, [&](std::size_t rep) {
      const PortfolioSample ps = sample_copula(copulas[c], marginals, n, copula_seed, rep);
      std::vector<std::vector<double>> sorted(d + 1);
      std::vector<std::vector<long double>> suffix(d + 1);
      for (std::size_t s = 0; s <= d; ++s) {
        sorted[s] = s < d ? ps.column(s) : ps.aggregate();
        std::sort(sorted[s].begin(), sorted[s].end());
        suffix[s].assign(n + 1, 0.0L);
        for (std::size_t i = n; i-- > 0;) suffix[s][i] = suffix[s][i + 1] + sorted[s][i];
      }
      for (std::size_t k = 0; k < levels.size(); ++k) {
        const double p = levels[k];
        const TailStats agg = tail_stats(sorted[d], suffix[d], p);
        const double theta = agg.var > agg.mean ? (1.0 - p) * (agg.es - agg.var) / (agg.var - agg.mean)
                                                : std::numeric_limits<double>::infinity();
        double sum_var = 0.0, sum_es = 0.0, sum_fes = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const TailStats m = tail_stats(sorted[j], suffix[j], p);
          sum_var += m.var;
          sum_es += m.es;
          sum_fes += fes_value(m, p, theta);
        }
        const double pel = fes_value(agg, p, theta);
        int f = 0;
        if (agg.var > sum_var + kSlack * std::abs(sum_var)) f |= 1;
        if (pel > sum_fes + kSlack * std::abs(sum_fes)) f |= 2;
        if (agg.es > sum_es + kSlack * std::abs(sum_es)) f |= 4;
        flags[rep][k] = f;
      }
    });
    StressReport rep;
    rep.copula = copulas[c];
    rep.n = n;
    rep.repetitions = repetitions;
    rep.seed = seed;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      StressCell cell;
      cell.p = levels[k];
      for (std::size_t r = 0; r < reps; ++r) {
        cell.var += (flags[r][k] & 1) ? 1 : 0;
        cell.pelvar += (flags[r][k] & 2) ? 1 : 0;
        cell.es += (flags[r][k] & 4) ? 1 : 0;
      }
      rep.cells.push_back(cell);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace pelvar
