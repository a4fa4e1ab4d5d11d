#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reslab {

struct HazardFit;

enum class ArimaEstimator { ConditionalSumOfSquares, MaximumLikelihood };

std::string_view to_string(ArimaEstimator e);
std::optional<ArimaEstimator> parse_estimator(std::string_view text);

/// ARIMA(1,1,0) with drift written on first differences d:
///   d_k = nu0 + phi * d_{k-1} + xi_k
struct ArimaDriftParams {
    double phi = 0.0;
    double nu0 = 0.0;
    double sigma = 0.0;
    ArimaEstimator estimator = ArimaEstimator::ConditionalSumOfSquares;
    std::vector<std::string> warnings;
};

/// Random walk with drift: c_t = nu1 + c_{t-1} + xi_t.
struct RwDriftParams {
    double nu1 = 0.0;
    double sigma = 0.0;
};

/// Conditional least squares over the usable (d_{k-1}, d_k) pairs. A constant
/// lagged difference leaves phi unidentified; it is then set to 0.
/// sigma^2 = CSS / (pairs - 2), or 0 with two pairs or fewer. Needs >= 4 values.
ArimaDriftParams fit_arima_110_drift(std::span<const double> series);

/// Exact Gaussian maximum likelihood: the differences are a stationary AR(1)
/// around mean delta (nu0 = delta * (1 - phi)), phi restricted to (-1, 1),
/// sigma^2 = S / n. Needs >= 4 values.
ArimaDriftParams fit_arima_110_drift_ml(std::span<const double> series);

ArimaDriftParams fit_arima(std::span<const double> series, ArimaEstimator estimator);

/// Mean path g_t = nu0 + g_{t-1} + phi * (g_{t-1} - g_{t-2}), h >= 1 steps.
std::vector<double> forecast_arima(const ArimaDriftParams& params, double before_last, double last, int h);

/// z * forecast standard error for steps 1..h.
std::vector<double> arima_half_widths(const ArimaDriftParams& params, int h, double z);

/// nu1 = mean first difference, sigma = their sample standard deviation. Needs >= 2 values.
RwDriftParams fit_rw_drift(std::span<const double> series);

std::vector<double> forecast_rw(const RwDriftParams& params, double last, int h);

/// z * sigma * sqrt(s) for s = 1..h.
std::vector<double> rw_half_widths(const RwDriftParams& params, int h, double z);

inline constexpr double kZ80 = 1.2815515655446004;
inline constexpr double kZ95 = 1.959963984540054;

struct CohortExtension {
    double value = 0.0;  // g_m
    ArimaDriftParams params;
    double half80 = 0.0;
    double half95 = 0.0;
};

struct PeriodExtension {
    int first_period = 0;        // calendar index of values[0]
    std::vector<double> values;  // H steps past the last observed period
    RwDriftParams params;
    std::vector<double> half80;
    std::vector<double> half95;
};

PeriodExtension extend_period(std::span<const double> path, int first_period, int horizon);

struct EffectForecast {
    std::optional<CohortExtension> cohort;
    std::optional<PeriodExtension> period;
};

/// Cohort: one step past g_0..g_{m-1}. Period: m steps past c_1..c_m.
EffectForecast forecast_effects(const HazardFit& fit,
                                ArimaEstimator cohort_estimator = ArimaEstimator::MaximumLikelihood);

}  // namespace reslab
