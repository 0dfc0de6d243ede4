#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pelvar/claims_backtest.hpp"
#include "pelvar/copula.hpp"
#include "pelvar/euler_allocation.hpp"

namespace pelvar {

/// Shortest decimal text that round-trips to the same double; "nan"/"inf" spelled out.
std::string format_number(double x);
/// Fixed four-decimal rendering used for console tables.
std::string format_fixed4(double x);

nlohmann::json allocation_to_json(const AllocationReport& r);
/// One row per (level, component) plus an "aggregate" row per level.
std::string allocation_csv(const std::vector<AllocationReport>& reports);

nlohmann::json stress_to_json(const StressReport& r);
std::string stress_csv(const std::vector<StressReport>& reports);

nlohmann::json predictions_to_json(const std::vector<PredictionRecord>& recs);
std::string predictions_csv(const std::vector<PredictionRecord>& recs);
nlohmann::json scores_to_json(const std::vector<ScoreRow>& rows);
std::string scores_csv(const std::vector<ScoreRow>& rows);
nlohmann::json stats_to_json(const ClaimsStats& s);

}  // namespace pelvar
