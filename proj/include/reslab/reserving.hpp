#pragma once

#include <string>
#include <vector>

#include "reslab/effect_forecast.hpp"
#include "reslab/hazard_glm.hpp"
#include "reslab/triangle.hpp"

namespace reslab {

/// f = (1 + (1 - eta) mu) / (1 - eta mu). Throws DegenerateHazard when eta * mu >= 1.
double hazard_to_factor(double mu, double eta);

/// Inverse of hazard_to_factor: mu = (f - 1) / (eta f + 1 - eta). Requires f > 0.
double factor_to_hazard(double factor, double eta);

/// Completed square for one model.
///
/// `completed` holds observed C(k, j) for k + j <= m and predictions below;
/// `increments` likewise for X. `factors` is only meaningful below the
/// latest diagonal (k + j > m, j >= 1).
struct ReserveReport {
    std::string model;
    int m = 0;
    std::vector<double> reserves;
    double total = 0.0;
    CellGrid completed;
    CellGrid increments;
    CellGrid factors;
    std::vector<std::string> warnings;

    bool predicted(int k, int j) const { return k + j > m; }
    double ultimate(int k) const { return completed.at(k, m); }
};

struct FactorOptions {
    /// Cap mu at (1 / eta)(1 - 1e-6) instead of raising DegenerateHazard.
    bool cap_hazard = false;
};

/// Predicted factors f(k, j) = hazard_to_factor(exp(a_j + c_{k+j} + g_k), eta)
/// for every k + j > m. Forecasts must supply g_m and periods m+1..2m as the
/// structure requires; capped cells are reported in `warnings`.
CellGrid predicted_factors(const HazardFit& fit, const EffectForecast& forecast,
                           const FactorOptions& options = {}, std::vector<std::string>* warnings = nullptr);

/// Chain principle from the latest observed cumulative value.
ReserveReport complete(const RunOffTriangle& tri, const CellGrid& factors, std::string model);

/// Completion from predicted incremental amounts below the diagonal.
ReserveReport complete_with_increments(const RunOffTriangle& tri, const CellGrid& increments,
                                       std::string model);

/// f_j = sum_{k <= m-j} C(k, j) / sum_{k <= m-j} C(k, j-1), j = 1..m.
std::vector<double> chain_ladder_factors(const RunOffTriangle& tri);

ReserveReport chain_ladder_reserve(const RunOffTriangle& tri);

}  // namespace reslab
