#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "reslab/amount_glm.hpp"
#include "reslab/effect_forecast.hpp"
#include "reslab/fitted_cells.hpp"
#include "reslab/hazard_glm.hpp"
#include "reslab/reserving.hpp"

namespace reslab {

/// Every reserving model the toolkit can run end to end.
enum class ModelKind { ChainLadder, A, AC, AP, APC, AmountAC, AmountAPC };

std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view name);

/// All model kinds, in the order used for ranking tie breaks.
const std::vector<ModelKind>& all_models();

bool is_hazard_model(ModelKind kind);
bool uses_cohort_forecast(ModelKind kind);
bool uses_period_forecast(ModelKind kind);

struct PipelineOptions {
    double eta = 0.5;
    Strictness strictness = Strictness::Strict;
    bool cap_hazard = false;
    ArimaEstimator cohort_estimator = ArimaEstimator::MaximumLikelihood;
    IrlsOptions irls;
};

struct ModelRun {
    ModelKind kind = ModelKind::ChainLadder;
    ReserveReport report;
    std::optional<HazardFit> hazard;
    std::optional<AmountFit> amount;
    EffectForecast forecast;
    /// Likelihood cells with their fitted values; empty for chain ladder.
    std::vector<FittedCell> fitted_cells;
    int n_params = 0;
};

/// Fit only: `hazard` or `amount`, `fitted_cells` and `n_params` are set; the
/// report and forecast stay empty. Chain ladder has nothing to fit.
ModelRun fit_model(const RunOffTriangle& tri, ModelKind kind, const PipelineOptions& options = {});

/// Fit, extrapolate and complete the triangle with one model.
ModelRun run_model(const RunOffTriangle& tri, ModelKind kind, const PipelineOptions& options = {});

}  // namespace reslab
