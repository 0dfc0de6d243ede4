#include "pelvar/claims_backtest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "pelvar/empirical.hpp"
#include "pelvar/errors.hpp"
#include "pelvar/parallel.hpp"

namespace pelvar {
namespace {

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
  s.erase(0, i);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double type7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

Sample window_sample(const ClaimsTable& t, int target, int width, const char* what) {
  std::vector<double> pooled = t.pooled(target - width, target - 1);
  if (pooled.size() < 2) {
    throw DomainError(std::string("predict_var: ") + what + " window [" + std::to_string(target - width) + ", " +
                      std::to_string(target - 1) + "] for target " + std::to_string(target) + " holds " +
                      std::to_string(pooled.size()) + " claims");
  }
  return Sample(std::move(pooled));
}

}  // namespace

ClaimsTable::ClaimsTable(std::vector<ClaimRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw InputError("claims table is empty");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!(std::isfinite(r.amount) && r.amount > 0.0)) {
      throw InputError("claim " + std::to_string(i + 1) + " has non-positive amount " + fmt(r.amount));
    }
    by_year_[r.year].push_back(r.amount);
  }
  for (auto& [y, v] : by_year_) std::sort(v.begin(), v.end());
}

std::vector<int> ClaimsTable::years() const {
  std::vector<int> out;
  for (const auto& [y, v] : by_year_) out.push_back(y);
  return out;
}

const std::vector<double>& ClaimsTable::year(int y) const {
  const auto it = by_year_.find(y);
  if (it == by_year_.end()) throw InputError("no claims recorded for year " + std::to_string(y));
  return it->second;
}

std::vector<double> ClaimsTable::pooled(int first, int last) const {
  std::vector<double> out;
  for (auto it = by_year_.lower_bound(first); it != by_year_.end() && it->first <= last; ++it) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

ClaimsTable parse_claims(std::istream& in, const ClaimsCsvOptions& opts) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t row_no = 0;
  int year_idx = 0;
  int amount_idx = 1;
  bool first = true;
  std::vector<ClaimRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (first) {
      first = false;
      int y = 0;
      double a = 0.0;
      const bool numeric = fields.size() >= 2 && parse_int(fields[0], y) && parse_double(fields[1], a);
      if (!numeric) {
        year_idx = amount_idx = -1;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (lower(fields[i]) == lower(opts.year_column)) year_idx = static_cast<int>(i);
          if (lower(fields[i]) == lower(opts.amount_column)) amount_idx = static_cast<int>(i);
        }
        if (year_idx < 0 || amount_idx < 0) {
          throw InputError("claims header must name columns '" + opts.year_column + "' and '" + opts.amount_column +
                           "', got: " + line);
        }
        continue;
      }
    }
    ++row_no;
    const auto need = static_cast<std::size_t>(std::max(year_idx, amount_idx)) + 1;
    const std::string where = "row " + std::to_string(row_no) + " (line " + std::to_string(line_no) + ")";
    if (fields.size() < need) throw InputError("claims " + where + ": expected at least " + std::to_string(need) + " fields");
    ClaimRecord r;
    if (!parse_int(fields[static_cast<std::size_t>(year_idx)], r.year)) {
      throw InputError("claims " + where + ": malformed year '" + fields[static_cast<std::size_t>(year_idx)] + "'");
    }
    if (!parse_double(fields[static_cast<std::size_t>(amount_idx)], r.amount) || !std::isfinite(r.amount)) {
      throw InputError("claims " + where + ": malformed amount '" + fields[static_cast<std::size_t>(amount_idx)] + "'");
    }
    if (!(r.amount > 0.0)) throw InputError("claims " + where + ": amount must be positive, got " + fmt(r.amount));
    records.push_back(r);
  }
  if (records.empty()) throw InputError("claims file contains no data rows");
  return ClaimsTable(std::move(records));
}

ClaimsTable load_claims(const std::string& path, const ClaimsCsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open claims file '" + path + "'");
  return parse_claims(in, opts);
}

ClaimsStats describe_values(std::vector<double> v, int year) {
  if (v.empty()) throw InputError("describe: no claims");
  std::sort(v.begin(), v.end());
  ClaimsStats s;
  s.year = year;
  s.count = v.size();
  const double n = static_cast<double>(v.size());
  long double total = 0.0L;
  for (double x : v) total += x;
  s.mean = static_cast<double>(total / v.size());
  long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L;
  for (double x : v) {
    const long double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.sd = v.size() > 1 ? std::sqrt(static_cast<double>(m2) * n / (n - 1.0)) : 0.0;
  if (m2 > 0.0L) {
    s.skewness = static_cast<double>(m3 / std::pow(m2, 1.5L));
    s.kurtosis = static_cast<double>(m4 / (m2 * m2));
  }
  s.iqr = type7(v, 0.75) - type7(v, 0.25);
  s.cv_percent = 100.0 * s.sd / s.mean;
  s.min = v.front();
  s.max = v.back();
  return s;
}

ClaimsStats describe(const ClaimsTable& table, int year) { return describe_values(table.year(year), year); }

std::vector<CurvePoint> annual_risk_curves(const ClaimsTable& table, int year, const std::vector<double>& levels) {
  const auto& v = table.year(year);
  if (v.size() < 50) {
    throw DomainError("annual_risk_curves: year " + std::to_string(year) + " has " + std::to_string(v.size()) +
                      " claims (need at least 50)");
  }
  const Sample s(v);
  const double bound = empirical_dx_lower_bound(s);
  std::vector<CurvePoint> out;
  for (double p : levels) {
    CurvePoint c;
    c.p = p;
    c.var = empirical_quantile(s, p);
    c.es = empirical_es(s, p);
    if (p > bound) c.theta = empirical_theta(s, p);
    out.push_back(c);
  }
  return out;
}

std::vector<PredictionRecord> predict_var(const ClaimsTable& table, const BacktestConfig& cfg) {
  require_level(cfg.level, "predict_var");
  if (cfg.window_var < 1 || cfg.window_theta < 1) throw DomainError("predict_var: windows must be at least 1 year");
  if (!(cfg.lambda_under >= 1.0)) throw DomainError("predict_var: lambda_under must be >= 1");
  if (cfg.first_target > cfg.last_target) throw DomainError("predict_var: empty target range");
  const double p = cfg.level;
  std::vector<PredictionRecord> out;
  for (int t = cfg.first_target; t <= cfg.last_target; ++t) {
    const Sample actual(table.year(t));
    const Sample base = window_sample(table, t, cfg.window_var, "base");
    PredictionRecord r;
    r.year = t;
    r.actual_var = empirical_quantile(actual, p);
    r.var_hat = empirical_quantile(base, p);
    r.theta_hat = cfg.window_theta == cfg.window_var
                      ? empirical_theta(base, p)
                      : empirical_theta(window_sample(table, t, cfg.window_theta, "theta"), p);
    const double m = base.mean();
    r.pelvar_hat = m + (1.0 - p) * (empirical_es(base, p) - m) / (1.0 - p + r.theta_hat);
    r.error_var = r.var_hat - r.actual_var;
    r.error_pelvar = r.pelvar_hat - r.actual_var;
    out.push_back(r);
  }
  return out;
}

double asymmetric_loss(double e, double lambda_under) { return e >= 0.0 ? e : lambda_under * -e; }

TuneResult tune_windows(const ClaimsTable& table, const TuneConfig& cfg) {
  if (cfg.windows_var.empty() || cfg.windows_theta.empty()) throw DomainError("tune_windows: empty window grid");
  if (!(cfg.lambda_under >= 1.0)) throw DomainError("tune_windows: lambda_under must be >= 1");
  const auto years = table.years();
  const int widest = std::max(*std::max_element(cfg.windows_var.begin(), cfg.windows_var.end()),
                              *std::max_element(cfg.windows_theta.begin(), cfg.windows_theta.end()));
  const int first = cfg.first_target.value_or(years.front() + widest);
  const int last = cfg.last_target.value_or(years.back());
  if (last - first + 1 < 3) {
    throw DomainError("tune_windows: need at least 3 target years, have [" + std::to_string(first) + ", " +
                      std::to_string(last) + "]");
  }
  const bool lexicographic = std::isinf(cfg.lambda_under);

  struct Job {
    int s, r;
  };
  std::vector<Job> jobs;
  for (int s : cfg.windows_var) {
    for (int r : cfg.windows_theta) jobs.push_back({s, r});
  }
  std::vector<std::vector<PredictionRecord>> preds(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    BacktestConfig b{first, last, cfg.level, jobs[i].s, jobs[i].r, lexicographic ? 1.0 : cfg.lambda_under};
    preds[i] = predict_var(table, b);
  });

  auto score_row = [&](const std::vector<PredictionRecord>& pr, bool pel, int s, int r) {
    ScoreRow row;
    row.predictor = pel ? "pelvar_hat" : "var_hat";
    row.window_var = s;
    row.window_theta = pel ? r : 0;
    double abs_sum = 0.0, loss = 0.0;
    for (const auto& rec : pr) {
      const double e = pel ? rec.error_pelvar : rec.error_var;
      abs_sum += std::abs(e);
      if (e < 0.0) ++row.underestimations;
      if (!lexicographic) loss += asymmetric_loss(e, cfg.lambda_under);
    }
    row.mae = abs_sum / static_cast<double>(pr.size());
    row.score = lexicographic ? std::numeric_limits<double>::quiet_NaN() : loss;
    return row;
  };
  auto better = [&](const ScoreRow& a, const ScoreRow& b) {
    if (lexicographic) {
      if (a.underestimations != b.underestimations) return a.underestimations < b.underestimations;
      return a.mae < b.mae;
    }
    return a.score < b.score;
  };

  TuneResult res;
  bool have_var = false, have_pel = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    // VaR-hat ignores r; score it once per s.
    if (jobs[i].r == cfg.windows_theta.front()) {
      const ScoreRow row = score_row(preds[i], false, jobs[i].s, 0);
      res.table.push_back(row);
      if (!have_var || better(row, res.best_var_row)) {
        res.best_var_row = row;
        have_var = true;
      }
    }
    const ScoreRow row = score_row(preds[i], true, jobs[i].s, jobs[i].r);
    res.table.push_back(row);
    if (!have_pel || better(row, res.best_pelvar_row)) {
      res.best_pelvar_row = row;
      have_pel = true;
    }
  }
  const double lam = cfg.lambda_under;
  res.best_var = {first, last, cfg.level, res.best_var_row.window_var, res.best_var_row.window_var, lam};
  res.best_pelvar = {first, last, cfg.level, res.best_pelvar_row.window_var, res.best_pelvar_row.window_theta, lam};
  return res;
}

}  // namespace pelvar
