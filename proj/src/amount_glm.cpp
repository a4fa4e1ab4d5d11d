#include "reslab/amount_glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reslab/error.hpp"

namespace reslab {

std::string_view to_string(AmountStructure s) {
    return s == AmountStructure::AC ? "amount-ac" : "amount-apc";
}

double AmountFit::log_mean(int k, int j) const {
    double v = cohort[static_cast<std::size_t>(k)] + age[static_cast<std::size_t>(j)];
    if (period) v += (*period)[static_cast<std::size_t>(k + j)];
    return v;
}

namespace {

bool usable(double x, Strictness strictness) {
    return strictness == Strictness::Strict || x >= 0.0;
}

}  // namespace

AmountFit fit_amount(AmountStructure structure, const RunOffTriangle& tri, Strictness strictness,
                     const IrlsOptions& options) {
    const int m = tri.m();
    const bool apc = structure == AmountStructure::APC;
    if (m < (apc ? 2 : 0)) {
        throw ReserveError(ErrorCode::InsufficientData,
                           std::string(to_string(structure)) + " needs m >= " + (apc ? "2" : "0") +
                               ", got m = " + std::to_string(m));
    }
    const int n = m + 1;
    const int age_base = n;
    const int period_base = 2 * n;
    const int p = apc ? 3 * n : 2 * n;

    struct Cell {
        int k, j;
    };
    std::vector<Cell> cells;
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j <= m - k; ++j) {
            const double x = tri.incremental(k, j);
            if (x < 0.0 && strictness == Strictness::Strict) {
                throw ReserveError(ErrorCode::NonMonotone, "negative increment at cell (" +
                                                               std::to_string(k) + ", " +
                                                               std::to_string(j) + ")");
            }
            if (usable(x, strictness)) cells.push_back({k, j});
        }
    }

    PoissonProblem problem;
    const auto rows = static_cast<Eigen::Index>(cells.size());
    problem.design = Eigen::MatrixXd::Zero(rows, p);
    problem.response.resize(rows);
    problem.offset = Eigen::VectorXd::Zero(rows);
    problem.weights = Eigen::VectorXd::Ones(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto [k, j] = cells[static_cast<std::size_t>(i)];
        problem.design(i, k) = 1.0;
        problem.design(i, age_base + j) = 1.0;
        if (apc) problem.design(i, period_base + k + j) = 1.0;
        problem.response(i) = tri.incremental(k, j);
    }
    problem.constraints = Eigen::MatrixXd::Zero(apc ? 3 : 1, p);
    problem.constraints(0, age_base) = 1.0;
    if (apc) {
        for (int q = 0; q <= m; ++q) {
            problem.constraints(1, period_base + q) = 1.0;
            problem.constraints(2, period_base + q) = static_cast<double>(q);
        }
    }

    const IrlsResult r = fit_poisson_irls(problem, Eigen::VectorXd(), options);

    AmountFit fit;
    fit.structure = structure;
    fit.strictness = strictness;
    fit.m = m;
    fit.cohort.assign(r.coef.data(), r.coef.data() + n);
    fit.age.assign(r.coef.data() + age_base, r.coef.data() + age_base + n);
    if (apc) fit.period = std::vector<double>(r.coef.data() + period_base, r.coef.data() + period_base + n);
    fit.deviance = r.deviance;
    fit.n_obs = r.n_obs;
    fit.n_params = r.n_free;
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.deviance_trace = r.deviance_trace;
    return fit;
}

double constraint_residual(const AmountFit& fit) {
    double worst = std::abs(fit.age.front());
    if (fit.period) {
        double sum = 0.0;
        double moment = 0.0;
        for (std::size_t q = 0; q < fit.period->size(); ++q) {
            sum += (*fit.period)[q];
            moment += static_cast<double>(q) * (*fit.period)[q];
        }
        worst = std::max({worst, std::abs(sum), std::abs(moment)});
    }
    return worst;
}

PeriodExtension amount_period_forecast(const AmountFit& fit) {
    if (!fit.period) {
        throw ReserveError(ErrorCode::InvalidArgument, "amount model has no period effect");
    }
    return extend_period(*fit.period, fit.m + 1, fit.m);
}

CellGrid predict_amount_lower(const AmountFit& fit, const std::optional<PeriodExtension>& period) {
    const int m = fit.m;
    if (fit.period && (!period || static_cast<int>(period->values.size()) < m)) {
        throw ReserveError(ErrorCode::MissingForecast,
                           "period effects must be extrapolated " + std::to_string(m) + " steps");
    }
    CellGrid out(m);
    for (int k = 1; k <= m; ++k) {
        for (int j = m - k + 1; j <= m; ++j) {
            double lin = fit.cohort[static_cast<std::size_t>(k)] + fit.age[static_cast<std::size_t>(j)];
            if (fit.period) lin += period->values[static_cast<std::size_t>(k + j - m - 1)];
            out.at(k, j) = std::exp(lin);
        }
    }
    return out;
}

std::vector<FittedCell> amount_fitted_cells(const AmountFit& fit, const RunOffTriangle& tri) {
    std::vector<FittedCell> cells;
    for (int k = 0; k <= tri.m(); ++k) {
        for (int j = 0; j <= tri.m() - k; ++j) {
            const double x = tri.incremental(k, j);
            if (!usable(x, fit.strictness)) continue;
            cells.push_back({k, j, x, std::exp(fit.log_mean(k, j))});
        }
    }
    return cells;
}

}  // namespace reslab
