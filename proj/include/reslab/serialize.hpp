#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "reslab/diagnostics.hpp"
#include "reslab/error.hpp"
#include "reslab/evaluation.hpp"
#include "reslab/pipeline.hpp"

namespace reslab {

using Json = nlohmann::ordered_json;

Json to_json(const HazardFit& fit);
Json to_json(const AmountFit& fit);
Json to_json(const ReserveReport& report);
Json to_json(const EffectForecast& forecast);
Json to_json(const ResidualMatrix& res);
Json to_json(const RankingReport& report);
Json to_json(const BakeoffReport& report);
/// Fit, forecast and reserve of one pipeline run.
Json to_json(const ModelRun& run);
Json error_json(ErrorCode code, const std::string& message);

/// Completed cumulative square, `dev_0..dev_m` header, 6 decimals.
void write_completed_csv(std::ostream& out, const ReserveReport& report);

/// One effect on the log scale: fitted values, then extrapolated values with bands.
struct EffectPath {
    std::string name;  // age, period or cohort
    int first_index = 0;
    std::vector<double> fitted;
    std::vector<double> forecast;
    std::vector<double> half80;
    std::vector<double> half95;
};

std::vector<EffectPath> effect_paths(const ModelRun& run);

/// `index,value,lo80,hi80,lo95,hi95`; bands are empty on fitted points.
void write_effect_csv(std::ostream& out, const EffectPath& path);
void write_effect_svg(std::ostream& out, const EffectPath& path);

/// Flat `dataset,model,diagonal,ei,rank` rows; failed fits leave `ei` empty.
void write_ranking_csv(std::ostream& out, std::span<const RankingReport> reports);

}  // namespace reslab
