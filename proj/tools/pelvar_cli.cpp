// pelvar: command-line front end for the risk library.
//
// Every subcommand resolves one JSON config (defaults, then --config file, then
// flags), runs it, and writes data to stdout or to --out DIR alongside a
// manifest.json that echoes the resolved config.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pelvar/claims_backtest.hpp"
#include "pelvar/copula.hpp"
#include "pelvar/distributions.hpp"
#include "pelvar/errors.hpp"
#include "pelvar/euler_allocation.hpp"
#include "pelvar/model_spec.hpp"
#include "pelvar/parallel.hpp"
#include "pelvar/report_io.hpp"
#include "pelvar/risk_measures.hpp"

#ifndef PELVAR_VERSION
#define PELVAR_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pelvar;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitComputation = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
  unsigned threads = 0;
};

// A named output produced by a subcommand: one text body per format.
struct Artifact {
  std::string stem;
  std::string csv;
  json data;
  std::string table;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError("config file '" + path + "' must hold a JSON object");
  // A manifest written by a previous run can be fed back verbatim.
  if (j.contains("config") && j.contains("command")) return j["config"];
  return j;
}

void check_keys(const json& cfg, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const auto& [key, value] : cfg.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw DomainError(cmd + ": unknown config key '" + key + "'");
  }
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw DomainError("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty level list");
  return out;
}

double number_or_inf(const json& j, const std::string& key) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw DomainError("'" + key + "' must be a number or \"inf\"");
  }
  return j.get<double>();
}

std::string cell(double x) { return std::isfinite(x) ? format_fixed4(x) : "n/a"; }

std::string csv_cell(double x) { return std::isfinite(x) ? format_number(x) : "n/a"; }

json json_cell(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Right-aligned fixed-width console table.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) os << "  ";
      os << std::string(width[c] - r[c].size(), ' ') << r[c];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

// ---------------------------------------------------------------- theta-table

struct Column {
  std::string label;
  std::string spec;
};

std::vector<Column> default_theta_columns() {
  return {{"Exp", "exp:lambda=1"},
          {"Normal", "normal:mu=0,sigma=1"},
          {"Uniform", "uniform:a=0,b=1"},
          {"t(2)", "t:nu=2"},
          {"t(4)", "t:nu=4"},
          {"t(20)", "t:nu=20"},
          {"LN(0.2)", "lognormal:mu=0,sigma=0.2"},
          {"LN(0.5)", "lognormal:mu=0,sigma=0.5"},
          {"LN(1)", "lognormal:mu=0,sigma=1"},
          {"W(0.75)", "weibull:alpha=0.75,lambda=1"},
          {"W(1.5)", "weibull:alpha=1.5,lambda=1"},
          {"W(10)", "weibull:alpha=10,lambda=1"},
          {"G(0.25)", "gamma:alpha=0.25,lambda=1"},
          {"G(0.5)", "gamma:alpha=0.5,lambda=1"},
          {"G(1.5)", "gamma:alpha=1.5,lambda=1"},
          {"G(20)", "gamma:alpha=20,lambda=1"},
          {"GEV(-1)", "gev:xi=-1"},
          {"GEV(0)", "gev:xi=0"},
          {"GEV(0.2)", "gev:xi=0.2"},
          {"GEV(0.4)", "gev:xi=0.4"},
          {"P(1.5)", "pareto2:alpha=1.5,kappa=1"},
          {"P(2)", "pareto2:alpha=2,kappa=1"},
          {"P(4)", "pareto2:alpha=4,kappa=1"},
          {"P(10)", "pareto2:alpha=10,kappa=1"}};
}

const std::vector<double> kTableLevels{0.9, 0.95, 0.975, 0.99, 0.995};

std::vector<Artifact> run_theta_table(const json& cfg) {
  check_keys(cfg, {"models", "levels"}, "theta-table");
  std::vector<Column> cols;
  if (cfg.contains("models")) {
    for (const auto& m : cfg["models"]) {
      const std::string s = m.get<std::string>();
      cols.push_back({s, s});
    }
  } else {
    cols = default_theta_columns();
  }
  const auto levels = cfg.contains("levels") ? cfg["levels"].get<std::vector<double>>() : kTableLevels;
  for (double p : levels) require_level(p, "theta-table");

  std::vector<LossModel> models;
  for (const auto& c : cols) {
    models.push_back(parse_model_spec(c.spec));
    for (const auto& w : models.back().warnings()) std::cerr << "warning: " << c.label << ": " << w << '\n';
  }
  std::vector<std::vector<double>> values(levels.size(), std::vector<double>(cols.size()));
  bool any_na = false;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double bound = models[j].dx_lower_bound();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const bool inside = levels[i] > bound;
      values[i][j] = inside ? models[j].theta_closed(levels[i]) : std::numeric_limits<double>::quiet_NaN();
      any_na = any_na || !inside;
    }
  }
  const std::string footnote = "n/a: level lies outside the domain D_X (VaR does not exceed the mean)";

  Artifact a{"theta_table", {}, json::object(), {}};
  std::ostringstream csv;
  csv << 'p';
  for (const auto& c : cols) csv << ',' << (c.label.find(',') == std::string::npos ? c.label : '"' + c.label + '"');
  csv << '\n';
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    csv << format_number(levels[i]);
    std::vector<std::string> row{format_fixed4(levels[i])};
    for (std::size_t j = 0; j < cols.size(); ++j) {
      csv << ',' << csv_cell(values[i][j]);
      row.push_back(cell(values[i][j]));
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }
  a.csv = csv.str();
  std::vector<std::string> header{"p"};
  for (const auto& c : cols) header.push_back(c.label);
  a.table = render_table(header, rows);
  if (any_na) a.table += "\n" + footnote + "\n";

  json columns = json::array();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    json v = json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) v.push_back(json_cell(values[i][j]));
    columns.push_back({{"label", cols[j].label}, {"model", model_to_json(models[j])}, {"theta", v}});
  }
  a.data = {{"levels", levels}, {"columns", columns}};
  if (any_na) a.data["footnote"] = footnote;
  if (any_na) std::cerr << "note: " << footnote << '\n';
  return {a};
}

// -------------------------------------------------------------------- curves

std::vector<double> read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sample file '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    // first field of each line; a non-numeric first line is a header
    std::string field = line.substr(b, line.find_first_of(",; \t\r", b) - b);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || used == 0) {
      if (out.empty() && lineno == 1) continue;
      throw InputError("sample file '" + path + "' line " + std::to_string(lineno) + ": not a number: '" + field + "'");
    }
    out.push_back(v);
  }
  if (out.size() < 2) throw InputError("sample file '" + path + "' holds fewer than 2 values");
  return out;
}

std::vector<Artifact> run_curves(const json& cfg) {
  check_keys(cfg, {"model", "sample", "p_min", "p_max", "step", "theta_star"}, "curves");
  const bool has_model = cfg.contains("model");
  const bool has_sample = cfg.contains("sample");
  if (has_model == has_sample) throw DomainError("curves: give exactly one of a model or a sample file");
  const RiskSource src = has_model ? RiskSource(model_from_json(cfg["model"]))
                                   : RiskSource(Sample(read_sample_file(cfg["sample"].get<std::string>())));
  const double p_min = cfg.value("p_min", 0.5);
  const double p_max = cfg.value("p_max", 0.995);
  const double step = cfg.value("step", 0.005);
  const double theta_star = cfg.value("theta_star", 0.01);
  require_level(p_min, "curves p_min");
  require_level(p_max, "curves p_max");
  if (!(step > 0.0) || p_max < p_min) throw DomainError("curves: need step > 0 and p_min <= p_max");
  if (!(theta_star > 0.0)) throw DomainError("curves: theta_star must be positive");

  const double bound = src.dx_lower_bound();
  const auto count = static_cast<std::size_t>(std::floor((p_max - p_min) / step + 1e-9)) + 1;
  std::ostringstream csv;
  csv << "p,var,es,theta,fes,pelvar\n";
  std::vector<std::vector<std::string>> rows;
  json points = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    // recompute from the index so the grid does not drift
    const double p = std::round((p_min + static_cast<double>(i) * step) * 1e12) / 1e12;
    const double v = src.var(p);
    const double e = src.es(p);
    double th = std::numeric_limits<double>::quiet_NaN();
    double pv = th;
    if (p > bound) {
      th = theta_index(src, p);
      pv = pelvar::pelvar(src, p);
    }
    const double f = fes(src, p, theta_star);
    csv << format_number(p) << ',' << format_number(v) << ',' << format_number(e) << ',' << csv_cell(th) << ','
        << format_number(f) << ',' << csv_cell(pv) << '\n';
    rows.push_back({format_fixed4(p), cell(v), cell(e), cell(th), cell(f), cell(pv)});
    points.push_back({{"p", p}, {"var", v}, {"es", e}, {"theta", json_cell(th)}, {"fes", f}, {"pelvar", json_cell(pv)}});
  }
  Artifact a{"curves", csv.str(), {}, {}};
  a.table = render_table({"p", "VaR", "ES", "theta", "FES(theta*)", "PELVaR"}, rows);
  a.data = {{"mean", src.mean()}, {"dx_lower_bound", bound}, {"theta_star", theta_star}, {"points", points}};
  return {a};
}

// ------------------------------------------------------------------ allocate

std::vector<std::string> default_labels(std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < d; ++j) out.push_back("X" + std::to_string(j + 1));
  return out;
}

std::vector<Artifact> run_allocate(const json& cfg, std::uint64_t seed) {
  check_keys(cfg, {"scenario", "marginals", "labels", "copula", "n", "levels", "var_scheme"}, "allocate");
  ScenarioConfig sc;
  if (cfg.contains("marginals")) {
    for (const auto& m : cfg["marginals"]) sc.marginals.push_back(model_from_json(m));
  } else {
    const std::string s = cfg.value("scenario", std::string("a"));
    if (s.size() != 1) throw DomainError("allocate: scenario must be one of a, b, c, d");
    sc.marginals = scenario_marginals(s[0]);
  }
  sc.labels = cfg.contains("labels") ? cfg["labels"].get<std::vector<std::string>>() : default_labels(sc.marginals.size());
  if (sc.labels.size() != sc.marginals.size()) throw DomainError("allocate: labels and marginals differ in length");
  sc.copula = cfg.contains("copula") ? copula_from_json(cfg["copula"]) : CopulaSpec::gaussian(0.25);
  sc.n = cfg.value("n", std::size_t{1000000});
  if (cfg.contains("levels")) sc.levels = cfg["levels"].get<std::vector<double>>();
  sc.seed = seed;
  const VarScheme scheme = var_scheme_from_string(cfg.value("var_scheme", std::string("kernel")));

  const auto reports = run_allocation_scenario(sc, scheme);
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) std::cerr << "warning: p=" << format_number(r.p) << ": " << w << '\n';
  }

  Artifact a{"allocation", allocation_csv(reports), json::array(), {}};
  for (const auto& r : reports) a.data.push_back(allocation_to_json(r));
  std::ostringstream tbl;
  for (const auto& r : reports) {
    tbl << "p = " << format_fixed4(r.p) << "  theta_p = " << format_fixed4(r.aggregate.theta)
        << "  VaR = " << format_fixed4(r.aggregate.var) << "  ES = " << format_fixed4(r.aggregate.es)
        << "  PELVaR = " << format_fixed4(r.aggregate.pelvar) << '\n';
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < r.labels.size(); ++j) {
      rows.push_back({r.labels[j], cell(r.var.proportions[j]), cell(r.es.proportions[j]),
                      cell(r.fes.proportions[j]), cell(r.pelvar.proportions[j]), cell(r.theta.contributions[j])});
    }
    tbl << render_table({"component", "VaR", "ES", "FES", "PELVaR", "theta_j"}, rows) << '\n';
  }
  a.table = tbl.str();
  return {a};
}

// -------------------------------------------------------------------- stress

std::vector<CopulaSpec> default_stress_copulas() {
  std::vector<CopulaSpec> out;
  for (double r : {0.75, 0.9, 0.95, 0.98}) out.push_back(CopulaSpec::gaussian(r));
  for (double r : {0.75, 0.9, 0.95, 0.98}) out.push_back(CopulaSpec::student_t(r, 2));
  for (double xi : {1.5, 2.0, 5.0, 10.0}) out.push_back(CopulaSpec::gumbel(xi));
  return out;
}

std::vector<Artifact> run_stress_cmd(const json& cfg, std::uint64_t seed) {
  check_keys(cfg, {"marginals", "copulas", "levels", "n", "B"}, "stress");
  std::vector<LossModel> marginals;
  if (cfg.contains("marginals")) {
    for (const auto& m : cfg["marginals"]) marginals.push_back(model_from_json(m));
  } else {
    marginals = stress_marginals();
  }
  std::vector<CopulaSpec> copulas;
  if (cfg.contains("copulas")) {
    for (const auto& c : cfg["copulas"]) copulas.push_back(copula_from_json(c));
  } else {
    copulas = default_stress_copulas();
  }
  const auto levels = cfg.contains("levels") ? cfg["levels"].get<std::vector<double>>() : kTableLevels;
  const std::size_t n = cfg.value("n", std::size_t{5000});
  const int reps = cfg.value("B", 1000);
  const auto reports = run_stress(marginals, copulas, levels, n, reps, seed);

  Artifact a{"stress", stress_csv(reports), json::array(), {}};
  for (const auto& r : reports) a.data.push_back(stress_to_json(r));
  std::ostringstream tbl;
  for (const auto& r : reports) {
    tbl << r.copula.describe() << "  (n = " << r.n << ", B = " << r.repetitions << ")\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : r.cells) {
      rows.push_back({format_fixed4(c.p), std::to_string(c.var), std::to_string(c.pelvar), std::to_string(c.es)});
    }
    tbl << render_table({"level", "VaR", "PELVaR", "ES"}, rows) << '\n';
  }
  a.table = tbl.str();
  return {a};
}

// ------------------------------------------------------------------ backtest

std::vector<Artifact> run_backtest(const json& cfg) {
  check_keys(cfg,
             {"claims", "year_column", "amount_column", "level", "tune", "window_var", "window_theta", "windows_var",
              "windows_theta", "lambda_under", "first_target", "last_target"},
             "backtest");
  if (!cfg.contains("claims")) throw DomainError("backtest: no claims file given");
  ClaimsCsvOptions opts;
  opts.year_column = cfg.value("year_column", opts.year_column);
  opts.amount_column = cfg.value("amount_column", opts.amount_column);
  const ClaimsTable table = load_claims(cfg["claims"].get<std::string>(), opts);
  const double level = cfg.value("level", 0.95);
  const double lambda = cfg.contains("lambda_under") ? number_or_inf(cfg["lambda_under"], "lambda_under") : 2.0;
  const bool tune = cfg.value("tune", true);

  std::vector<Artifact> out;
  {
    Artifact s{"stats", {}, json::array(), {}};
    std::ostringstream csv;
    csv << "year,count,mean,sd,skewness,kurtosis,iqr,cv_percent,min,max\n";
    std::vector<std::vector<std::string>> rows;
    for (int y : table.years()) {
      const ClaimsStats st = describe(table, y);
      const double sk = st.skewness.value_or(std::numeric_limits<double>::quiet_NaN());
      const double ku = st.kurtosis.value_or(std::numeric_limits<double>::quiet_NaN());
      csv << y << ',' << st.count << ',' << format_number(st.mean) << ',' << format_number(st.sd) << ','
          << csv_cell(sk) << ',' << csv_cell(ku) << ',' << format_number(st.iqr) << ','
          << format_number(st.cv_percent) << ',' << format_number(st.min) << ',' << format_number(st.max) << '\n';
      rows.push_back({std::to_string(y), std::to_string(st.count), cell(st.mean), cell(st.sd), cell(sk), cell(ku),
                      cell(st.iqr), cell(st.cv_percent), cell(st.min), cell(st.max)});
      s.data.push_back(stats_to_json(st));
    }
    s.csv = csv.str();
    s.table = render_table({"year", "n", "mean", "sd", "skew", "kurt", "IQR", "CV%", "min", "max"}, rows);
    out.push_back(std::move(s));
  }

  BacktestConfig var_cfg;
  BacktestConfig pel_cfg;
  std::optional<TuneResult> tuned;
  const auto years = table.years();
  if (tune) {
    TuneConfig tc;
    tc.level = level;
    tc.lambda_under = lambda;
    if (cfg.contains("windows_var")) tc.windows_var = cfg["windows_var"].get<std::vector<int>>();
    if (cfg.contains("windows_theta")) tc.windows_theta = cfg["windows_theta"].get<std::vector<int>>();
    if (cfg.contains("first_target")) tc.first_target = cfg["first_target"].get<int>();
    if (cfg.contains("last_target")) tc.last_target = cfg["last_target"].get<int>();
    tuned = tune_windows(table, tc);
    var_cfg = tuned->best_var;
    pel_cfg = tuned->best_pelvar;
  } else {
    BacktestConfig bc;
    bc.level = level;
    bc.lambda_under = std::isinf(lambda) ? 1e300 : lambda;
    bc.window_var = cfg.value("window_var", 1);
    bc.window_theta = cfg.value("window_theta", bc.window_var);
    const int widest = std::max(bc.window_var, bc.window_theta);
    bc.first_target = cfg.value("first_target", years.front() + widest);
    bc.last_target = cfg.value("last_target", years.back());
    var_cfg = pel_cfg = bc;
  }

  // VaR-hat columns come from its own best window, PELVaR-hat columns from its (s, r).
  const auto var_pred = predict_var(table, var_cfg);
  auto pred = predict_var(table, pel_cfg);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred[i].var_hat = var_pred[i].var_hat;
    pred[i].error_var = var_pred[i].error_var;
  }
  Artifact p{"predictions", predictions_csv(pred), {}, {}};
  p.data = {{"level", level},
            {"var_hat_window", var_cfg.window_var},
            {"pelvar_hat_windows", {{"s", pel_cfg.window_var}, {"r", pel_cfg.window_theta}}},
            {"records", predictions_to_json(pred)}};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : pred) {
    rows.push_back({std::to_string(r.year), cell(r.actual_var), cell(r.var_hat), cell(r.pelvar_hat), cell(r.theta_hat)});
  }
  p.table = "VaR-hat window s = " + std::to_string(var_cfg.window_var) + "; PELVaR-hat windows (s, r) = (" +
            std::to_string(pel_cfg.window_var) + ", " + std::to_string(pel_cfg.window_theta) + ")\n" +
            render_table({"year", "actual VaR", "VaR-hat", "PELVaR-hat", "theta-hat"}, rows);
  out.push_back(std::move(p));

  if (tuned) {
    Artifact s{"scores", scores_csv(tuned->table), scores_to_json(tuned->table), {}};
    std::vector<std::vector<std::string>> srows;
    for (const auto& r : tuned->table) {
      srows.push_back({r.predictor, std::to_string(r.window_var), std::to_string(r.window_theta), cell(r.score),
                       std::to_string(r.underestimations), cell(r.mae)});
    }
    s.table = render_table({"predictor", "s", "r", "score", "under", "MAE"}, srows);
    out.push_back(std::move(s));
  }
  return out;
}

// ------------------------------------------------------------------- driver

std::string body_for(const Artifact& a, const std::string& format) {
  if (format == "json") return a.data.dump(2) + "\n";
  if (format == "table") return a.table;
  return a.csv;
}

std::string extension(const std::string& format) {
  if (format == "json") return ".json";
  if (format == "table") return ".txt";
  return ".csv";
}

void emit(const std::string& command, const Common& common, const json& cfg, const std::vector<Artifact>& artifacts,
          double wall_seconds, const std::vector<std::string>& argv) {
  if (common.out_dir.empty()) {
    if (common.format == "json" && artifacts.size() > 1) {
      json all = json::object();
      for (const auto& a : artifacts) all[a.stem] = a.data;
      std::cout << all.dump(2) << '\n';
    } else {
      // several CSV/table artifacts go to stdout back to back, separated by a blank line
      for (std::size_t i = 0; i < artifacts.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << body_for(artifacts[i], common.format);
      }
    }
    return;
  }
  fs::create_directories(common.out_dir);
  json files = json::array();
  for (const auto& a : artifacts) {
    const fs::path path = fs::path(common.out_dir) / (a.stem + extension(common.format));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << body_for(a, common.format);
    files.push_back(path.filename().string());
  }
  json manifest{{"command", command},
                {"config", cfg},
                {"format", common.format},
                {"tool_version", PELVAR_VERSION},
                {"threads", worker_count()},
                {"outputs", files},
                {"argv", argv},
                {"wall_time_seconds", wall_seconds}};
  if (common.seed) manifest["seed"] = *common.seed;
  std::ofstream m(fs::path(common.out_dir) / "manifest.json", std::ios::binary);
  m << manifest.dump(2) << '\n';
  std::cerr << "wrote " << files.size() << " file(s) and manifest.json to " << common.out_dir << '\n';
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON config file (a previous manifest.json also works)");
  sub->add_option("--seed", c.seed, "Master RNG seed");
  sub->add_option("--out", c.out_dir, "Write outputs and manifest.json into this directory");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "table"}));
  sub->add_option("--threads", c.threads, "Cap on worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PELVaR risk toolkit: theta-index tables, risk curves, Euler allocation, stress tests, backtests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PELVAR_VERSION);

  Common common;
  json flags = json::object();
  constexpr std::uint64_t kDefaultSeed = 20240101;

  auto* theta = app.add_subcommand("theta-table", "theta-index table for closed-form loss models");
  add_common(theta, common);
  std::vector<std::string> t_models;
  std::string t_levels;
  theta->add_option("--model", t_models, "Model spec such as 'pareto2:alpha=2,kappa=1' (repeatable)");
  theta->add_option("--levels", t_levels, "Comma-separated levels");

  auto* curves = app.add_subcommand("curves", "VaR, ES, theta, FES and PELVaR over a grid of levels");
  add_common(curves, common);
  std::string c_model, c_sample;
  std::optional<double> c_pmin, c_pmax, c_step, c_theta;
  curves->add_option("--model", c_model, "Model spec");
  curves->add_option("--sample", c_sample, "File of loss values (first column)");
  curves->add_option("--p-min", c_pmin, "Lowest level (default 0.5)");
  curves->add_option("--p-max", c_pmax, "Highest level (default 0.995)");
  curves->add_option("--step", c_step, "Grid step (default 0.005)");
  curves->add_option("--theta-star", c_theta, "Flexibility for the FES column (default 0.01)");

  auto* alloc = app.add_subcommand("allocate", "Euler allocation of a copula-simulated portfolio");
  add_common(alloc, common);
  std::string a_scenario, a_scheme, a_levels;
  std::optional<double> a_r;
  std::optional<std::size_t> a_n;
  alloc->add_option("--scenario", a_scenario, "Built-in marginals: a, b, c or d")->check(CLI::IsMember({"a", "b", "c", "d"}));
  alloc->add_option("--r", a_r, "Gaussian copula correlation (overrides the config copula)");
  alloc->add_option("--n", a_n, "Number of simulated rows");
  alloc->add_option("--levels", a_levels, "Comma-separated levels");
  alloc->add_option("--var-scheme", a_scheme, "VaR contribution scheme")->check(CLI::IsMember({"kernel", "linear"}));

  auto* stress = app.add_subcommand("stress", "Subadditivity violation counts under copula stress");
  add_common(stress, common);
  std::optional<std::size_t> s_n;
  std::optional<int> s_b;
  std::string s_levels;
  stress->add_option("--n", s_n, "Rows per repetition (default 5000)");
  stress->add_option("--B", s_b, "Repetitions per copula (default 1000)");
  stress->add_option("--levels", s_levels, "Comma-separated levels");

  auto* back = app.add_subcommand("backtest", "One-year-ahead VaR prediction on a claims file");
  add_common(back, common);
  std::string b_claims, b_lambda;
  std::optional<double> b_level;
  std::optional<int> b_s, b_r;
  bool b_no_tune = false;
  back->add_option("claims", b_claims, "Claims CSV with year and amount columns");
  back->add_option("--level", b_level, "Prediction level (default 0.95)");
  back->add_option("--window-var", b_s, "Fixed base window s in years (implies --no-tune)");
  back->add_option("--window-theta", b_r, "Fixed theta window r in years (implies --no-tune)");
  back->add_option("--lambda-under", b_lambda, "Underestimation weight, or 'inf' for lexicographic");
  back->add_flag("--no-tune", b_no_tune, "Skip the window search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (common.threads) set_max_threads(common.threads);
    json cfg = load_config(common.config_path);
    std::uint64_t seed = kDefaultSeed;
    if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
    if (common.seed) seed = *common.seed;
    cfg.erase("seed");

    std::vector<Artifact> artifacts;
    if (command == "theta-table") {
      if (!t_models.empty()) cfg["models"] = t_models;
      if (!t_levels.empty()) cfg["levels"] = parse_levels(t_levels);
      artifacts = run_theta_table(cfg);
    } else if (command == "curves") {
      if (!c_model.empty()) cfg.erase("sample"), cfg["model"] = c_model;
      if (!c_sample.empty()) cfg.erase("model"), cfg["sample"] = c_sample;
      if (c_pmin) cfg["p_min"] = *c_pmin;
      if (c_pmax) cfg["p_max"] = *c_pmax;
      if (c_step) cfg["step"] = *c_step;
      if (c_theta) cfg["theta_star"] = *c_theta;
      artifacts = run_curves(cfg);
    } else if (command == "allocate") {
      if (!a_scenario.empty()) cfg.erase("marginals"), cfg["scenario"] = a_scenario;
      if (a_r) cfg["copula"] = {{"type", "gaussian"}, {"r", *a_r}};
      if (a_n) cfg["n"] = *a_n;
      if (!a_levels.empty()) cfg["levels"] = parse_levels(a_levels);
      if (!a_scheme.empty()) cfg["var_scheme"] = a_scheme;
      artifacts = run_allocate(cfg, seed);
    } else if (command == "stress") {
      if (s_n) cfg["n"] = *s_n;
      if (s_b) cfg["B"] = *s_b;
      if (!s_levels.empty()) cfg["levels"] = parse_levels(s_levels);
      artifacts = run_stress_cmd(cfg, seed);
    } else {
      if (!b_claims.empty()) cfg["claims"] = b_claims;
      if (b_level) cfg["level"] = *b_level;
      if (b_s) cfg["window_var"] = *b_s;
      if (b_r) cfg["window_theta"] = *b_r;
      if (!b_lambda.empty()) {
        if (b_lambda == "inf") {
          cfg["lambda_under"] = "inf";
        } else {
          cfg["lambda_under"] = parse_levels(b_lambda).front();
        }
      }
      if (b_no_tune || b_s || b_r) cfg["tune"] = false;
      artifacts = run_backtest(cfg);
    }
    if (command == "allocate" || command == "stress") cfg["seed"] = seed;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(command, common, cfg, artifacts, wall, args);
    return 0;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: bad config value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}
