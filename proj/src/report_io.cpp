#include "pelvar/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pelvar {
namespace {

nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::json vec(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

nlohmann::json triple(const MeasureTriple& m) {
  return {{"contributions", vec(m.contributions)}, {"proportions", vec(m.proportions)}, {"residual", m.residual}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_fixed4(double x) {
  if (!std::isfinite(x)) return format_number(x);
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4f", x);
  std::string s(buf.data());
  if (s == "-0.0000") s = "0.0000";
  return s;
}

nlohmann::json allocation_to_json(const AllocationReport& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["var_scheme"] = to_string(r.scheme);
  j["flexibility"] = r.flexibility;
  j["labels"] = r.labels;
  j["aggregate"] = {{"mean", r.aggregate.mean}, {"var", r.aggregate.var},       {"es", r.aggregate.es},
                    {"theta", r.aggregate.theta}, {"fes", r.aggregate.fes}, {"pelvar", r.aggregate.pelvar}};
  j["means"] = vec(r.means);
  j["var"] = triple(r.var);
  j["es"] = triple(r.es);
  j["fes"] = triple(r.fes);
  j["pelvar"] = triple(r.pelvar);
  j["theta"] = triple(r.theta);
  j["component_theta"] = vec(r.component_theta);
  j["negative_contribution_rule_holds"] = r.negative_contribution_rule_holds;
  if (r.scheme == VarScheme::Kernel) {
    j["kernel_bandwidth"] = r.kernel_bandwidth;
    j["effective_sample_size"] = r.effective_sample_size;
  }
  j["warnings"] = r.warnings;
  return j;
}

std::string allocation_csv(const std::vector<AllocationReport>& reports) {
  std::ostringstream os;
  os << "p,scheme,component,mean,var,es,fes,pelvar,theta,prop_var,prop_es,prop_fes,prop_pelvar,prop_theta,"
        "component_theta\n";
  for (const auto& r : reports) {
    const std::string head = format_number(r.p) + "," + to_string(r.scheme) + ",";
    for (std::size_t j = 0; j < r.labels.size(); ++j) {
      os << head << csv_field(r.labels[j]) << ',' << format_number(r.means[j]) << ','
         << format_number(r.var.contributions[j]) << ',' << format_number(r.es.contributions[j]) << ','
         << format_number(r.fes.contributions[j]) << ',' << format_number(r.pelvar.contributions[j]) << ','
         << format_number(r.theta.contributions[j]) << ',' << format_number(r.var.proportions[j]) << ','
         << format_number(r.es.proportions[j]) << ',' << format_number(r.fes.proportions[j]) << ','
         << format_number(r.pelvar.proportions[j]) << ',' << format_number(r.theta.proportions[j]) << ','
         << format_number(r.component_theta[j]) << '\n';
    }
    const auto& a = r.aggregate;
    os << head << "aggregate," << format_number(a.mean) << ',' << format_number(a.var) << ',' << format_number(a.es)
       << ',' << format_number(a.fes) << ',' << format_number(a.pelvar) << ',' << format_number(a.theta)
       << ",1,1,1,1,1," << format_number(a.theta) << '\n';
  }
  return os.str();
}

nlohmann::json stress_to_json(const StressReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) cells.push_back({{"p", c.p}, {"var", c.var}, {"pelvar", c.pelvar}, {"es", c.es}});
  return {{"copula", r.copula.describe()}, {"n", r.n}, {"repetitions", r.repetitions}, {"seed", r.seed},
          {"violations", cells}};
}

std::string stress_csv(const std::vector<StressReport>& reports) {
  std::ostringstream os;
  os << "copula,p,n,repetitions,var_violations,pelvar_violations,es_violations\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      os << csv_field(r.copula.describe()) << ',' << format_number(c.p) << ',' << r.n << ',' << r.repetitions << ','
         << c.var << ',' << c.pelvar << ',' << c.es << '\n';
    }
  }
  return os.str();
}

nlohmann::json predictions_to_json(const std::vector<PredictionRecord>& recs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : recs) {
    a.push_back({{"year", r.year},
                 {"actual_var", r.actual_var},
                 {"var_hat", r.var_hat},
                 {"pelvar_hat", r.pelvar_hat},
                 {"theta_hat", number_or_null(r.theta_hat)},
                 {"error_var", r.error_var},
                 {"error_pelvar", r.error_pelvar}});
  }
  return a;
}

std::string predictions_csv(const std::vector<PredictionRecord>& recs) {
  std::ostringstream os;
  os << "year,actual_var,var_hat,pelvar_hat,theta_hat,error_var,error_pelvar\n";
  for (const auto& r : recs) {
    os << r.year << ',' << format_number(r.actual_var) << ',' << format_number(r.var_hat) << ','
       << format_number(r.pelvar_hat) << ',' << format_number(r.theta_hat) << ',' << format_number(r.error_var) << ','
       << format_number(r.error_pelvar) << '\n';
  }
  return os.str();
}

nlohmann::json scores_to_json(const std::vector<ScoreRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows) {
    a.push_back({{"predictor", r.predictor},
                 {"window_var", r.window_var},
                 {"window_theta", r.window_theta},
                 {"score", number_or_null(r.score)},
                 {"underestimations", r.underestimations},
                 {"mae", r.mae}});
  }
  return a;
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::ostringstream os;
  os << "predictor,window_var,window_theta,score,underestimations,mae\n";
  for (const auto& r : rows) {
    os << r.predictor << ',' << r.window_var << ',' << r.window_theta << ',' << format_number(r.score) << ','
       << r.underestimations << ',' << format_number(r.mae) << '\n';
  }
  return os.str();
}

nlohmann::json stats_to_json(const ClaimsStats& s) {
  nlohmann::json j{{"year", s.year}, {"count", s.count}, {"mean", s.mean},   {"sd", s.sd},
                   {"iqr", s.iqr},   {"cv_percent", s.cv_percent}, {"min", s.min}, {"max", s.max}};
  j["skewness"] = s.skewness ? nlohmann::json(*s.skewness) : nlohmann::json(nullptr);
  j["kurtosis"] = s.kurtosis ? nlohmann::json(*s.kurtosis) : nlohmann::json(nullptr);
  return j;
}

}  // namespace pelvar
