#include "reslab/hazard_glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reslab/error.hpp"

namespace reslab {

std::string_view to_string(Structure s) {
    switch (s) {
        case Structure::A: return "a";
        case Structure::AC: return "ac";
        case Structure::AP: return "ap";
        case Structure::APC: return "apc";
    }
    return "?";
}

std::optional<Structure> parse_structure(std::string_view text) {
    if (text == "a") return Structure::A;
    if (text == "ac") return Structure::AC;
    if (text == "ap") return Structure::AP;
    if (text == "apc") return Structure::APC;
    return std::nullopt;
}

double HazardFit::log_hazard(int k, int j) const {
    double v = age[static_cast<std::size_t>(j - 1)];
    if (period) v += (*period)[static_cast<std::size_t>(k + j - 1)];
    if (cohort) v += (*cohort)[static_cast<std::size_t>(k)];
    return v;
}

std::vector<double> fit_age_closed_form(const HazardTriangle& hazard, const ExposureTriangle& exp) {
    const int m = hazard.m();
    std::vector<double> out(static_cast<std::size_t>(std::max(m, 0)));
    for (int j = 1; j <= m; ++j) {
        double x_sum = 0.0;
        double e_sum = 0.0;
        bool any = false;
        for (int k = 0; k + j <= m; ++k) {
            if (!hazard.usable(k, j)) continue;
            any = true;
            x_sum += hazard.at(k, j) * exp.at(k, j);
            e_sum += exp.at(k, j);
        }
        if (!any || !(e_sum > 0.0)) {
            throw ReserveError(ErrorCode::EmptyColumn,
                               "development column " + std::to_string(j) + " has no usable cell");
        }
        out[static_cast<std::size_t>(j - 1)] = x_sum / e_sum;
    }
    return out;
}

namespace {

int minimum_size(Structure s) {
    switch (s) {
        case Structure::A: return 1;
        case Structure::AC:
        case Structure::AP: return 2;
        case Structure::APC: return 3;
    }
    return 1;
}

struct Layout {
    int m = 0;
    int period_base = -1;
    int cohort_base = -1;
    int n_params = 0;
};

Layout layout_for(Structure s, int m) {
    Layout l;
    l.m = m;
    l.n_params = m;
    if (has_period(s)) {
        l.period_base = l.n_params;
        l.n_params += m;
    }
    if (has_cohort(s)) {
        l.cohort_base = l.n_params;
        l.n_params += m;
    }
    return l;
}

Eigen::MatrixXd constraint_matrix(Structure s, const Layout& l) {
    Eigen::MatrixXd a;
    switch (s) {
        case Structure::A:
            a.resize(0, l.n_params);
            break;
        case Structure::AC:
            a = Eigen::MatrixXd::Zero(1, l.n_params);
            a(0, l.cohort_base) = 1.0;
            break;
        case Structure::AP:
            a = Eigen::MatrixXd::Zero(1, l.n_params);
            a(0, l.period_base) = 1.0;
            break;
        case Structure::APC:
            a = Eigen::MatrixXd::Zero(3, l.n_params);
            for (int k = 0; k < l.m; ++k) {
                a(0, l.cohort_base + k) = 1.0;
                a(1, l.cohort_base + k) = static_cast<double>(k);
            }
            a(2, l.period_base) = 1.0;
            break;
    }
    return a;
}

}  // namespace

HazardFit fit_hazard(const ModelSpec& spec, const RunOffTriangle& tri, const IrlsOptions& options) {
    const int m = tri.m();
    if (m < minimum_size(spec.structure)) {
        throw ReserveError(ErrorCode::InsufficientData,
                           "structure " + std::string(to_string(spec.structure)) + " needs m >= " +
                               std::to_string(minimum_size(spec.structure)) + ", got m = " +
                               std::to_string(m));
    }
    const ExposureTriangle exp = exposure(tri, spec.eta);
    const HazardTriangle haz = empirical_hazard(tri, spec.eta, spec.strictness);
    const std::vector<double> closed = fit_age_closed_form(haz, exp);

    const Layout l = layout_for(spec.structure, m);
    struct Row {
        int k, j;
    };
    std::vector<Row> rows;
    for (int k = 0; k < m; ++k) {
        for (int j = 1; j <= m - k; ++j) {
            if (haz.usable(k, j)) rows.push_back({k, j});
        }
    }

    PoissonProblem problem;
    const auto n = static_cast<Eigen::Index>(rows.size());
    problem.design = Eigen::MatrixXd::Zero(n, l.n_params);
    problem.response.resize(n);
    problem.offset.resize(n);
    problem.weights = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [k, j] = rows[static_cast<std::size_t>(i)];
        problem.design(i, j - 1) = 1.0;
        if (l.period_base >= 0) problem.design(i, l.period_base + k + j - 1) = 1.0;
        if (l.cohort_base >= 0) problem.design(i, l.cohort_base + k) = 1.0;
        problem.response(i) = tri.incremental(k, j);
        problem.offset(i) = std::log(exp.at(k, j));
    }
    problem.constraints = constraint_matrix(spec.structure, l);

    // Age-only closed form with zero period and cohort effects.
    Eigen::VectorXd start = Eigen::VectorXd::Zero(l.n_params);
    const double tiny = 1e-300;
    for (int j = 1; j <= m; ++j) {
        start(j - 1) = std::log(std::max(closed[static_cast<std::size_t>(j - 1)], tiny));
    }

    const IrlsResult r = fit_poisson_irls(problem, start, options);

    HazardFit fit;
    fit.spec = spec;
    fit.m = m;
    fit.age.assign(r.coef.data(), r.coef.data() + m);
    if (l.period_base >= 0) {
        fit.period = std::vector<double>(r.coef.data() + l.period_base, r.coef.data() + l.period_base + m);
    }
    if (l.cohort_base >= 0) {
        fit.cohort = std::vector<double>(r.coef.data() + l.cohort_base, r.coef.data() + l.cohort_base + m);
    }
    fit.deviance = r.deviance;
    fit.n_obs = r.n_obs;
    fit.n_params = r.n_free;
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.deviance_trace = r.deviance_trace;
    return fit;
}

double constraint_residual(const HazardFit& fit) {
    double worst = 0.0;
    if (fit.cohort && !fit.period) worst = std::abs(fit.cohort->front());
    if (fit.period) worst = std::max(worst, std::abs(fit.period->front()));
    if (fit.cohort && fit.period) {
        double sum = 0.0;
        double moment = 0.0;
        for (std::size_t k = 0; k < fit.cohort->size(); ++k) {
            sum += (*fit.cohort)[k];
            moment += static_cast<double>(k) * (*fit.cohort)[k];
        }
        worst = std::max({worst, std::abs(sum), std::abs(moment)});
    }
    return worst;
}

HazardTriangle fitted_hazard(const HazardFit& fit) {
    HazardTriangle out{fit.spec.eta, CellGrid(fit.m), CellGrid(fit.m)};
    for (int k = 0; k < fit.m; ++k) {
        for (int j = 1; j <= fit.m - k; ++j) {
            out.values.at(k, j) = std::exp(fit.log_hazard(k, j));
            out.weights.at(k, j) = 1.0;
        }
    }
    return out;
}

std::vector<FittedCell> hazard_fitted_cells(const HazardFit& fit, const RunOffTriangle& tri) {
    const ExposureTriangle exp = exposure(tri, fit.spec.eta);
    const HazardTriangle haz = empirical_hazard(tri, fit.spec.eta, fit.spec.strictness);
    std::vector<FittedCell> cells;
    for (int k = 0; k < tri.m(); ++k) {
        for (int j = 1; j <= tri.m() - k; ++j) {
            if (!haz.usable(k, j)) continue;
            cells.push_back({k, j, tri.incremental(k, j), exp.at(k, j) * std::exp(fit.log_hazard(k, j))});
        }
    }
    return cells;
}

}  // namespace reslab
