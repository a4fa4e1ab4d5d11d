#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "reslab/effect_forecast.hpp"
#include "reslab/fitted_cells.hpp"
#include "reslab/poisson_glm.hpp"
#include "reslab/triangle.hpp"

namespace reslab {

enum class AmountStructure { AC, APC };

std::string_view to_string(AmountStructure s);

/// Log-link Poisson model of incremental amounts over the full triangle:
///   log E[X(k, j)] = cohort[k] + age[j] (+ period[k + j])
/// with age[0] = 0, and for APC also sum_p period[p] = 0 and sum_p p * period[p] = 0.
struct AmountFit {
    AmountStructure structure = AmountStructure::AC;
    Strictness strictness = Strictness::Strict;
    int m = 0;
    std::vector<double> cohort;                 // alpha_k, k = 0..m
    std::vector<double> age;                    // beta_j, j = 0..m
    std::optional<std::vector<double>> period;  // gamma_p, p = 0..m
    double deviance = 0.0;
    int n_obs = 0;
    int n_params = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> deviance_trace;

    double log_mean(int k, int j) const;
};

AmountFit fit_amount(AmountStructure structure, const RunOffTriangle& tri,
                     Strictness strictness = Strictness::Strict, const IrlsOptions& options = {});

double constraint_residual(const AmountFit& fit);

/// Random walk with drift on gamma_0..gamma_m, extended m steps.
PeriodExtension amount_period_forecast(const AmountFit& fit);

/// exp(alpha_k + beta_j [+ gamma_{k+j}]) for every k + j > m. APC needs a
/// period forecast covering periods m+1..2m (MissingForecast otherwise).
CellGrid predict_amount_lower(const AmountFit& fit, const std::optional<PeriodExtension>& period);

std::vector<FittedCell> amount_fitted_cells(const AmountFit& fit, const RunOffTriangle& tri);

}  // namespace reslab
