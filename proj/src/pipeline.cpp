#include "reslab/pipeline.hpp"

#include "reslab/error.hpp"

namespace reslab {

std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::ChainLadder: return "cl";
        case ModelKind::A: return "a";
        case ModelKind::AC: return "ac";
        case ModelKind::AP: return "ap";
        case ModelKind::APC: return "apc";
        case ModelKind::AmountAC: return "amount-ac";
        case ModelKind::AmountAPC: return "amount-apc";
    }
    return "?";
}

std::optional<ModelKind> parse_model(std::string_view name) {
    for (ModelKind k : all_models()) {
        if (model_name(k) == name) return k;
    }
    return std::nullopt;
}

const std::vector<ModelKind>& all_models() {
    static const std::vector<ModelKind> kinds{ModelKind::ChainLadder, ModelKind::A,        ModelKind::AC,
                                              ModelKind::AP,          ModelKind::APC,      ModelKind::AmountAC,
                                              ModelKind::AmountAPC};
    return kinds;
}

bool is_hazard_model(ModelKind kind) {
    return kind == ModelKind::A || kind == ModelKind::AC || kind == ModelKind::AP || kind == ModelKind::APC;
}

bool uses_cohort_forecast(ModelKind kind) { return kind == ModelKind::AC || kind == ModelKind::APC; }

bool uses_period_forecast(ModelKind kind) {
    return kind == ModelKind::AP || kind == ModelKind::APC || kind == ModelKind::AmountAPC;
}

namespace {

Structure structure_of(ModelKind kind) {
    switch (kind) {
        case ModelKind::AC: return Structure::AC;
        case ModelKind::AP: return Structure::AP;
        case ModelKind::APC: return Structure::APC;
        default: return Structure::A;
    }
}

}  // namespace

ModelRun fit_model(const RunOffTriangle& tri, ModelKind kind, const PipelineOptions& options) {
    ModelRun run;
    run.kind = kind;
    if (kind == ModelKind::ChainLadder) return run;
    if (is_hazard_model(kind)) {
        const ModelSpec spec{structure_of(kind), options.eta, options.strictness};
        HazardFit fit = fit_hazard(spec, tri, options.irls);
        run.fitted_cells = hazard_fitted_cells(fit, tri);
        run.n_params = fit.n_params;
        run.hazard = std::move(fit);
        return run;
    }
    const AmountStructure structure = kind == ModelKind::AmountAC ? AmountStructure::AC : AmountStructure::APC;
    AmountFit fit = fit_amount(structure, tri, options.strictness, options.irls);
    run.fitted_cells = amount_fitted_cells(fit, tri);
    run.n_params = fit.n_params;
    run.amount = std::move(fit);
    return run;
}

ModelRun run_model(const RunOffTriangle& tri, ModelKind kind, const PipelineOptions& options) {
    if (kind == ModelKind::ChainLadder) {
        ModelRun run;
        run.kind = kind;
        run.report = chain_ladder_reserve(tri);
        return run;
    }
    ModelRun run = fit_model(tri, kind, options);
    const std::string name(model_name(kind));
    if (run.hazard) {
        run.forecast = forecast_effects(*run.hazard, options.cohort_estimator);
        std::vector<std::string> warnings;
        const CellGrid factors =
            predicted_factors(*run.hazard, run.forecast, FactorOptions{options.cap_hazard}, &warnings);
        run.report = complete(tri, factors, name);
        if (run.forecast.cohort) {
            for (const auto& w : run.forecast.cohort->params.warnings) run.report.warnings.push_back(w);
        }
        for (auto& w : warnings) run.report.warnings.push_back(std::move(w));
        return run;
    }
    if (run.amount->period) run.forecast.period = amount_period_forecast(*run.amount);
    const CellGrid increments = predict_amount_lower(*run.amount, run.forecast.period);
    run.report = complete_with_increments(tri, increments, name);
    return run;
}

}  // namespace reslab
