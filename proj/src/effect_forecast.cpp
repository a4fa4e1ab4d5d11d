#include "reslab/effect_forecast.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "reslab/error.hpp"
#include "reslab/hazard_glm.hpp"

namespace reslab {

std::string_view to_string(ArimaEstimator e) {
    return e == ArimaEstimator::MaximumLikelihood ? "ml" : "css";
}

std::optional<ArimaEstimator> parse_estimator(std::string_view text) {
    if (text == "ml") return ArimaEstimator::MaximumLikelihood;
    if (text == "css") return ArimaEstimator::ConditionalSumOfSquares;
    return std::nullopt;
}

namespace {

std::vector<double> differences(std::span<const double> series) {
    std::vector<double> d;
    d.reserve(series.size());
    for (std::size_t i = 1; i < series.size(); ++i) d.push_back(series[i] - series[i - 1]);
    return d;
}

void require_length(std::span<const double> series, std::size_t n, const char* model) {
    if (series.size() < n) {
        throw ReserveError(ErrorCode::SeriesTooShort,
                           std::string(model) + " needs at least " + std::to_string(n) +
                               " values, got " + std::to_string(series.size()));
    }
}

void flag_nonstationary(ArimaDriftParams& p) {
    if (std::abs(p.phi) >= 1.0) {
        p.warnings.push_back("|phi| = " + std::to_string(std::abs(p.phi)) +
                             " >= 1: differenced series is not stationary");
    }
}

bool nearly_constant(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max({std::abs(*lo), std::abs(*hi), 1.0});
    return (*hi - *lo) <= 1e-12 * scale;
}

// Prais-Winsten transform of an AR(1) around an unknown mean: returns the
// residual sum of squares S(phi) and the GLS mean.
std::pair<double, double> ar1_profile(const std::vector<double>& w, double phi) {
    const double r0 = std::sqrt(1.0 - phi * phi);
    double zz = r0 * r0;
    double zy = r0 * r0 * w[0];
    for (std::size_t t = 1; t < w.size(); ++t) {
        zz += (1.0 - phi) * (1.0 - phi);
        zy += (1.0 - phi) * (w[t] - phi * w[t - 1]);
    }
    const double mean = zy / zz;
    double s = std::pow(r0 * (w[0] - mean), 2);
    for (std::size_t t = 1; t < w.size(); ++t) {
        s += std::pow((w[t] - mean) - phi * (w[t - 1] - mean), 2);
    }
    return {s, mean};
}

}  // namespace

ArimaDriftParams fit_arima_110_drift(std::span<const double> series) {
    require_length(series, 4, "ARIMA(1,1,0)");
    const std::vector<double> d = differences(series);
    const std::size_t pairs = d.size() - 1;

    ArimaDriftParams p;
    p.estimator = ArimaEstimator::ConditionalSumOfSquares;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        mx += d[i];
        my += d[i + 1];
    }
    mx /= static_cast<double>(pairs);
    my /= static_cast<double>(pairs);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        sxx += (d[i] - mx) * (d[i] - mx);
        sxy += (d[i] - mx) * (d[i + 1] - my);
    }
    const std::vector<double> lagged(d.begin(), d.end() - 1);
    if (nearly_constant(lagged)) {
        p.phi = 0.0;
        p.nu0 = my;
    } else {
        p.phi = sxy / sxx;
        p.nu0 = my - p.phi * mx;
    }
    double css = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double e = d[i + 1] - p.nu0 - p.phi * d[i];
        css += e * e;
    }
    p.sigma = pairs > 2 ? std::sqrt(css / static_cast<double>(pairs - 2)) : 0.0;
    flag_nonstationary(p);
    return p;
}

ArimaDriftParams fit_arima_110_drift_ml(std::span<const double> series) {
    require_length(series, 4, "ARIMA(1,1,0)");
    const std::vector<double> w = differences(series);
    const double n = static_cast<double>(w.size());

    ArimaDriftParams p;
    p.estimator = ArimaEstimator::MaximumLikelihood;
    if (nearly_constant(w)) {
        p.phi = 0.0;
        p.nu0 = w[0];
        p.sigma = 0.0;
        return p;
    }

    // Negative concentrated log-likelihood (constants dropped).
    const auto objective = [&](double phi) {
        const double s = std::max(ar1_profile(w, phi).first, std::numeric_limits<double>::min());
        return 0.5 * n * std::log(s / n) - 0.5 * std::log(1.0 - phi * phi);
    };

    constexpr double bound = 1.0 - 1e-9;
    constexpr int grid = 2000;
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double phi = -bound + 2.0 * bound * i / grid;
        const double v = objective(phi);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double lo = -bound + 2.0 * bound * std::max(best - 1, 0) / grid;
    const double hi = -bound + 2.0 * bound * std::min(best + 1, grid) / grid;
    const auto [phi, value] = boost::math::tools::brent_find_minima(objective, lo, hi, 52);
    (void)value;

    const auto [s, mean] = ar1_profile(w, phi);
    p.phi = phi;
    p.nu0 = mean * (1.0 - phi);
    p.sigma = std::sqrt(s / n);
    return p;
}

ArimaDriftParams fit_arima(std::span<const double> series, ArimaEstimator estimator) {
    return estimator == ArimaEstimator::MaximumLikelihood ? fit_arima_110_drift_ml(series)
                                                          : fit_arima_110_drift(series);
}

std::vector<double> forecast_arima(const ArimaDriftParams& params, double before_last, double last, int h) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(h, 0)));
    double prev2 = before_last;
    double prev = last;
    for (int s = 0; s < h; ++s) {
        const double next = params.nu0 + prev + params.phi * (prev - prev2);
        out.push_back(next);
        prev2 = prev;
        prev = next;
    }
    return out;
}

std::vector<double> arima_half_widths(const ArimaDriftParams& params, int h, double z) {
    // Level psi-weights of the integrated AR(1): psi_i = sum_{l<=i} phi^l.
    std::vector<double> out;
    double psi = 0.0;
    double power = 1.0;
    double var = 0.0;
    for (int s = 0; s < h; ++s) {
        psi += power;
        power *= params.phi;
        var += psi * psi;
        out.push_back(z * params.sigma * std::sqrt(var));
    }
    return out;
}

RwDriftParams fit_rw_drift(std::span<const double> series) {
    require_length(series, 2, "random walk with drift");
    const std::vector<double> d = differences(series);
    RwDriftParams p;
    p.nu1 = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    if (d.size() > 1) {
        double ss = 0.0;
        for (double v : d) ss += (v - p.nu1) * (v - p.nu1);
        p.sigma = std::sqrt(ss / static_cast<double>(d.size() - 1));
    }
    return p;
}

std::vector<double> forecast_rw(const RwDriftParams& params, double last, int h) {
    std::vector<double> out;
    for (int s = 1; s <= h; ++s) out.push_back(last + s * params.nu1);
    return out;
}

std::vector<double> rw_half_widths(const RwDriftParams& params, int h, double z) {
    std::vector<double> out;
    for (int s = 1; s <= h; ++s) out.push_back(z * params.sigma * std::sqrt(static_cast<double>(s)));
    return out;
}

PeriodExtension extend_period(std::span<const double> path, int first_period, int horizon) {
    PeriodExtension ext;
    ext.params = fit_rw_drift(path);
    ext.first_period = first_period;
    ext.values = forecast_rw(ext.params, path.back(), horizon);
    ext.half80 = rw_half_widths(ext.params, horizon, kZ80);
    ext.half95 = rw_half_widths(ext.params, horizon, kZ95);
    return ext;
}

EffectForecast forecast_effects(const HazardFit& fit, ArimaEstimator cohort_estimator) {
    EffectForecast out;
    if (fit.cohort) {
        const auto& g = *fit.cohort;
        CohortExtension ext;
        ext.params = fit_arima(g, cohort_estimator);
        ext.value = forecast_arima(ext.params, g[g.size() - 2], g.back(), 1).front();
        ext.half80 = arima_half_widths(ext.params, 1, kZ80).front();
        ext.half95 = arima_half_widths(ext.params, 1, kZ95).front();
        out.cohort = std::move(ext);
    }
    if (fit.period) {
        out.period = extend_period(*fit.period, fit.m + 1, fit.m);
    }
    return out;
}

}  // namespace reslab
