#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pelvar {

struct ClaimRecord {
  int year = 0;
  double amount = 0.0;
};

/// Claim amounts grouped by year.
class ClaimsTable {
 public:
  explicit ClaimsTable(std::vector<ClaimRecord> records);

  const std::vector<ClaimRecord>& records() const { return records_; }
  std::vector<int> years() const;
  bool has_year(int year) const { return by_year_.count(year) != 0; }
  /// Ascending amounts of one year; InputError when the year is absent.
  const std::vector<double>& year(int y) const;
  /// Claims of all present years in [first, last], unsorted.
  std::vector<double> pooled(int first, int last) const;

 private:
  std::vector<ClaimRecord> records_;
  std::map<int, std::vector<double>> by_year_;
};

struct ClaimsCsvOptions {
  std::string year_column = "year";
  std::string amount_column = "amount";
};

/// CSV with a header row naming the columns, or a bare two-column
/// "year,amount" file without header. Rejects non-positive or malformed rows.
ClaimsTable load_claims(const std::string& path, const ClaimsCsvOptions& opts = {});
ClaimsTable parse_claims(std::istream& in, const ClaimsCsvOptions& opts = {});

struct ClaimsStats {
  int year = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;                  // n - 1 denominator
  std::optional<double> skewness;   // m3 / m2^1.5, absent for constant data
  std::optional<double> kurtosis;   // m4 / m2^2 (not excess), absent for constant data
  double iqr = 0.0;                 // type-7 quartiles
  double cv_percent = 0.0;          // 100 sd / mean
  double min = 0.0;
  double max = 0.0;
};

ClaimsStats describe(const ClaimsTable& table, int year);
/// Same statistics for an arbitrary vector of amounts.
ClaimsStats describe_values(std::vector<double> values, int year = 0);

struct CurvePoint {
  double p = 0.0;
  double var = 0.0;
  double es = 0.0;
  std::optional<double> theta;  // only above the empirical D_X bound
};

std::vector<CurvePoint> annual_risk_curves(const ClaimsTable& table, int year, const std::vector<double>& levels);

struct BacktestConfig {
  int first_target = 0;
  int last_target = 0;
  double level = 0.95;
  int window_var = 1;    // s: years pooled for the base estimator
  int window_theta = 1;  // r: years pooled for the theta-index
  double lambda_under = 2.0;
};

struct PredictionRecord {
  int year = 0;
  double actual_var = 0.0;
  double var_hat = 0.0;
  double pelvar_hat = 0.0;
  double theta_hat = 0.0;
  double error_var = 0.0;     // var_hat - actual
  double error_pelvar = 0.0;  // pelvar_hat - actual
};

std::vector<PredictionRecord> predict_var(const ClaimsTable& table, const BacktestConfig& cfg);

/// e if e >= 0, lambda |e| otherwise.
double asymmetric_loss(double error, double lambda_under);

struct TuneConfig {
  double level = 0.95;
  std::vector<int> windows_var{1, 2, 3, 5, 10};
  std::vector<int> windows_theta{1, 2, 3, 5, 10};
  /// Infinity selects by fewest underestimations, ties broken by MAE.
  double lambda_under = 2.0;
  /// Defaults: first year + largest window .. last year.
  std::optional<int> first_target;
  std::optional<int> last_target;
};

struct ScoreRow {
  std::string predictor;  // "var_hat" or "pelvar_hat"
  int window_var = 0;
  int window_theta = 0;   // 0 for var_hat
  double score = 0.0;     // sum of asymmetric losses (NaN when lambda is infinite)
  int underestimations = 0;
  double mae = 0.0;
};

struct TuneResult {
  BacktestConfig best_var;     // best window for VaR-hat
  BacktestConfig best_pelvar;  // best (s, r) for PELVaR-hat
  ScoreRow best_var_row;
  ScoreRow best_pelvar_row;
  std::vector<ScoreRow> table;
};

TuneResult tune_windows(const ClaimsTable& table, const TuneConfig& cfg);

}  // namespace pelvar
