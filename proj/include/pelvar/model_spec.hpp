#pragma once

#include <string>

#include "json.hpp"
#include "pelvar/copula.hpp"
#include "pelvar/distributions.hpp"

namespace pelvar {

/// Parses "family:key=value,..." such as "normal:mu=100,sigma=10" or
/// "pareto2:alpha=2,kappa=100". Optional keys `scale_by` and `shift` apply an
/// affine map on top. Family aliases: exp, t, lomax (ParetoII), gp.
LossModel parse_model_spec(const std::string& spec);

/// {"family": "normal", "mu": 100, "sigma": 10} or a spec string.
LossModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LossModel& m);

/// {"type": "gaussian", "r": 0.5}, {"type": "t", "r": 0.5, "nu": 2}, {"type": "gumbel", "xi": 2}.
CopulaSpec copula_from_json(const nlohmann::json& j);
nlohmann::json copula_to_json(const CopulaSpec& c);

}  // namespace pelvar
