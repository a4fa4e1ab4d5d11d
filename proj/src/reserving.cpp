#include "reslab/reserving.hpp"

#include <cmath>

#include "reslab/error.hpp"

namespace reslab {

double hazard_to_factor(double mu, double eta) {
    if (!(eta * mu < 1.0)) {
        throw ReserveError(ErrorCode::DegenerateHazard,
                           "hazard " + std::to_string(mu) + " reaches the pole 1/eta");
    }
    return (1.0 + (1.0 - eta) * mu) / (1.0 - eta * mu);
}

double factor_to_hazard(double factor, double eta) {
    if (!(factor > 0.0)) {
        throw ReserveError(ErrorCode::InvalidArgument, "development factor must be positive");
    }
    return (factor - 1.0) / (eta * factor + 1.0 - eta);
}

CellGrid predicted_factors(const HazardFit& fit, const EffectForecast& forecast,
                           const FactorOptions& options, std::vector<std::string>* warnings) {
    const int m = fit.m;
    const double eta = fit.spec.eta;
    if (fit.cohort && !forecast.cohort) {
        throw ReserveError(ErrorCode::MissingForecast, "cohort effect for the last cohort is missing");
    }
    if (fit.period && (!forecast.period || static_cast<int>(forecast.period->values.size()) < m)) {
        throw ReserveError(ErrorCode::MissingForecast,
                           "period effects must be extrapolated " + std::to_string(m) + " steps");
    }
    const double cap = eta > 0.0 ? (1.0 / eta) * (1.0 - 1e-6) : 0.0;

    CellGrid f(m);
    for (int k = 1; k <= m; ++k) {
        for (int j = m - k + 1; j <= m; ++j) {
            double lin = fit.age[static_cast<std::size_t>(j - 1)];
            if (fit.period) {
                lin += forecast.period->values[static_cast<std::size_t>(k + j - m - 1)];
            }
            if (fit.cohort) {
                lin += k < m ? (*fit.cohort)[static_cast<std::size_t>(k)] : forecast.cohort->value;
            }
            double mu = std::exp(lin);
            if (eta > 0.0 && eta * mu >= 1.0) {
                if (!options.cap_hazard) {
                    throw ReserveError(ErrorCode::DegenerateHazard,
                                       "predicted hazard " + std::to_string(mu) + " at cell (" +
                                           std::to_string(k) + ", " + std::to_string(j) +
                                           ") reaches the pole 1/eta");
                }
                if (warnings) {
                    warnings->push_back("capped hazard at cell (" + std::to_string(k) + ", " +
                                        std::to_string(j) + ")");
                }
                mu = cap;
            }
            f.at(k, j) = hazard_to_factor(mu, eta);
        }
    }
    return f;
}

namespace {

ReserveReport observed_part(const RunOffTriangle& tri, std::string model) {
    ReserveReport r;
    r.model = std::move(model);
    r.m = tri.m();
    r.completed = CellGrid(tri.m());
    r.increments = CellGrid(tri.m());
    r.factors = CellGrid(tri.m());
    for (int k = 0; k <= tri.m(); ++k) {
        double c = 0.0;
        for (int j = 0; j <= tri.m() - k; ++j) {
            c += tri.incremental(k, j);
            r.completed.at(k, j) = c;
            r.increments.at(k, j) = tri.incremental(k, j);
        }
    }
    return r;
}

void finish(ReserveReport& r, const RunOffTriangle& tri) {
    r.reserves.assign(static_cast<std::size_t>(tri.n_cohorts()), 0.0);
    r.total = 0.0;
    for (int k = 0; k <= tri.m(); ++k) {
        const double reserve = r.completed.at(k, tri.m()) - r.completed.at(k, tri.m() - k);
        r.reserves[static_cast<std::size_t>(k)] = reserve;
        r.total += reserve;
    }
}

}  // namespace

ReserveReport complete(const RunOffTriangle& tri, const CellGrid& factors, std::string model) {
    ReserveReport r = observed_part(tri, std::move(model));
    const int m = tri.m();
    for (int k = 1; k <= m; ++k) {
        for (int j = m - k + 1; j <= m; ++j) {
            r.factors.at(k, j) = factors.at(k, j);
            r.completed.at(k, j) = r.completed.at(k, j - 1) * factors.at(k, j);
            r.increments.at(k, j) = r.completed.at(k, j) - r.completed.at(k, j - 1);
        }
    }
    finish(r, tri);
    return r;
}

ReserveReport complete_with_increments(const RunOffTriangle& tri, const CellGrid& increments,
                                       std::string model) {
    ReserveReport r = observed_part(tri, std::move(model));
    const int m = tri.m();
    for (int k = 1; k <= m; ++k) {
        for (int j = m - k + 1; j <= m; ++j) {
            const double prev = r.completed.at(k, j - 1);
            r.increments.at(k, j) = increments.at(k, j);
            r.completed.at(k, j) = prev + increments.at(k, j);
            r.factors.at(k, j) = prev != 0.0 ? r.completed.at(k, j) / prev : 0.0;
        }
    }
    finish(r, tri);
    return r;
}

std::vector<double> chain_ladder_factors(const RunOffTriangle& tri) {
    const int m = tri.m();
    std::vector<double> f;
    for (int j = 1; j <= m; ++j) {
        double num = 0.0;
        double den = 0.0;
        for (int k = 0; k <= m - j; ++k) {
            num += tri.cumulative(k, j);
            den += tri.cumulative(k, j - 1);
        }
        if (den == 0.0) {
            throw ReserveError(ErrorCode::ZeroDenominator,
                               "chain-ladder denominator is zero at development " + std::to_string(j));
        }
        f.push_back(num / den);
    }
    return f;
}

ReserveReport chain_ladder_reserve(const RunOffTriangle& tri) {
    const auto f = chain_ladder_factors(tri);
    CellGrid grid(tri.m());
    for (int k = 1; k <= tri.m(); ++k) {
        for (int j = tri.m() - k + 1; j <= tri.m(); ++j) grid.at(k, j) = f[static_cast<std::size_t>(j - 1)];
    }
    return complete(tri, grid, "cl");
}

}  // namespace reslab
