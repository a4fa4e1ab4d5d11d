#include "reslab/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "reslab/io_util.hpp"

namespace reslab {

namespace {

Json grid_json(const CellGrid& grid, const ReserveReport& report, bool lower_only) {
    Json rows = Json::array();
    for (int k = 0; k <= report.m; ++k) {
        Json row = Json::array();
        for (int j = 0; j <= report.m; ++j) {
            if (lower_only && !report.predicted(k, j)) {
                row.push_back(nullptr);
            } else {
                row.push_back(grid.at(k, j));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json arima_json(const ArimaDriftParams& p) {
    return Json{{"estimator", std::string(to_string(p.estimator))},
                {"phi", p.phi},
                {"nu0", p.nu0},
                {"sigma", p.sigma},
                {"warnings", p.warnings}};
}

Json period_json(const PeriodExtension& p) {
    return Json{{"first_period", p.first_period},
                {"nu1", p.params.nu1},
                {"sigma", p.params.sigma},
                {"values", p.values},
                {"half80", p.half80},
                {"half95", p.half95}};
}

Json fit_stats(double deviance, int n_obs, int n_params, bool converged, int iterations) {
    return Json{{"deviance", deviance},
                {"n_obs", n_obs},
                {"n_params", n_params},
                {"converged", converged},
                {"iterations", iterations}};
}

Json score_json(const ModelScore& s) {
    Json j{{"model", std::string(model_name(s.model))}, {"diagonal", s.diagonal}};
    j["ei"] = s.ei ? Json(*s.ei) : Json(nullptr);
    j["rank"] = s.rank;
    if (!s.failure.empty()) j["failure"] = s.failure;
    return j;
}

}  // namespace

Json to_json(const HazardFit& fit) {
    Json j{{"structure", std::string(to_string(fit.spec.structure))},
           {"eta", fit.spec.eta},
           {"strict", fit.spec.strictness == Strictness::Strict},
           {"m", fit.m},
           {"age", fit.age}};
    if (fit.period) j["period"] = *fit.period;
    if (fit.cohort) j["cohort"] = *fit.cohort;
    j["fit"] = fit_stats(fit.deviance, fit.n_obs, fit.n_params, fit.converged, fit.iterations);
    return j;
}

Json to_json(const AmountFit& fit) {
    Json j{{"structure", std::string(to_string(fit.structure))},
           {"strict", fit.strictness == Strictness::Strict},
           {"m", fit.m},
           {"cohort", fit.cohort},
           {"age", fit.age}};
    if (fit.period) j["period"] = *fit.period;
    j["fit"] = fit_stats(fit.deviance, fit.n_obs, fit.n_params, fit.converged, fit.iterations);
    return j;
}

Json to_json(const ReserveReport& report) {
    Json j{{"model", report.model}, {"m", report.m}, {"reserves", report.reserves}, {"total", report.total}};
    Json ultimates = Json::array();
    for (int k = 0; k <= report.m; ++k) ultimates.push_back(report.ultimate(k));
    j["ultimates"] = std::move(ultimates);
    j["completed"] = grid_json(report.completed, report, false);
    j["increments"] = grid_json(report.increments, report, false);
    j["warnings"] = report.warnings;
    return j;
}

Json to_json(const EffectForecast& forecast) {
    Json j = Json::object();
    if (forecast.cohort) {
        const auto& c = *forecast.cohort;
        j["cohort"] = Json{{"value", c.value}, {"half80", c.half80}, {"half95", c.half95},
                           {"params", arima_json(c.params)}};
    }
    if (forecast.period) j["period"] = period_json(*forecast.period);
    return j;
}

Json to_json(const ResidualMatrix& res) {
    Json cells = Json::array();
    for (const auto& c : res.cells) {
        cells.push_back(Json{{"cohort", c.k},
                             {"dev", c.j},
                             {"observed", c.observed},
                             {"fitted", c.fitted},
                             {"deviance", c.deviance},
                             {"residual", c.residual}});
    }
    return Json{{"deviance", res.deviance},
                {"dispersion", res.dispersion},
                {"n_obs", res.n_obs},
                {"n_params", res.n_params},
                {"cells", std::move(cells)}};
}

Json to_json(const RankingReport& report) {
    Json scores = Json::array();
    for (const auto& s : report.scores) scores.push_back(score_json(s));
    return Json{{"dataset", report.dataset}, {"scores", std::move(scores)}};
}

Json to_json(const BakeoffReport& report) {
    Json families = Json::array();
    for (const auto& f : report.families) {
        Json validation = Json::array();
        for (const auto& s : f.validation) validation.push_back(score_json(s));
        Json j{{"family", f.family}, {"validation", std::move(validation)}};
        j["selected"] = f.selected ? Json(std::string(model_name(*f.selected))) : Json(nullptr);
        j["validation_ei"] = f.validation_ei ? Json(*f.validation_ei) : Json(nullptr);
        j["test_ei"] = f.test_ei ? Json(*f.test_ei) : Json(nullptr);
        if (!f.failure.empty()) j["failure"] = f.failure;
        families.push_back(std::move(j));
    }
    return Json{{"dataset", report.dataset}, {"families", std::move(families)}};
}

Json to_json(const ModelRun& run) {
    Json j{{"model", std::string(model_name(run.kind))}};
    if (run.hazard) j["hazard"] = to_json(*run.hazard);
    if (run.amount) j["amount"] = to_json(*run.amount);
    j["forecast"] = to_json(run.forecast);
    j["reserve"] = to_json(run.report);
    return j;
}

Json error_json(ErrorCode code, const std::string& message) {
    return Json{{"error", std::string(to_string(code))}, {"message", message}};
}

void write_completed_csv(std::ostream& out, const ReserveReport& report) {
    for (int j = 0; j <= report.m; ++j) out << (j ? "," : "") << "dev_" << j;
    out << '\n';
    for (int k = 0; k <= report.m; ++k) {
        for (int j = 0; j <= report.m; ++j) out << (j ? "," : "") << format_fixed(report.completed.at(k, j), 6);
        out << '\n';
    }
}

std::vector<EffectPath> effect_paths(const ModelRun& run) {
    std::vector<EffectPath> paths;
    const auto& fc = run.forecast;
    if (run.hazard) {
        const HazardFit& fit = *run.hazard;
        paths.push_back({"age", 1, fit.age, {}, {}, {}});
        if (fit.period) {
            EffectPath p{"period", 1, *fit.period, {}, {}, {}};
            if (fc.period) {
                p.forecast = fc.period->values;
                p.half80 = fc.period->half80;
                p.half95 = fc.period->half95;
            }
            paths.push_back(std::move(p));
        }
        if (fit.cohort) {
            EffectPath c{"cohort", 0, *fit.cohort, {}, {}, {}};
            if (fc.cohort) {
                c.forecast = {fc.cohort->value};
                c.half80 = {fc.cohort->half80};
                c.half95 = {fc.cohort->half95};
            }
            paths.push_back(std::move(c));
        }
    } else if (run.amount) {
        const AmountFit& fit = *run.amount;
        paths.push_back({"age", 0, fit.age, {}, {}, {}});
        if (fit.period) {
            EffectPath p{"period", 0, *fit.period, {}, {}, {}};
            if (fc.period) {
                p.forecast = fc.period->values;
                p.half80 = fc.period->half80;
                p.half95 = fc.period->half95;
            }
            paths.push_back(std::move(p));
        }
        paths.push_back({"cohort", 0, fit.cohort, {}, {}, {}});
    }
    return paths;
}

void write_effect_csv(std::ostream& out, const EffectPath& path) {
    out << "index,value,lo80,hi80,lo95,hi95\n";
    int idx = path.first_index;
    for (double v : path.fitted) out << idx++ << ',' << format_fixed(v, 6) << ",,,,\n";
    for (std::size_t s = 0; s < path.forecast.size(); ++s) {
        const double v = path.forecast[s];
        out << idx++ << ',' << format_fixed(v, 6) << ',' << format_fixed(v - path.half80[s], 6) << ','
            << format_fixed(v + path.half80[s], 6) << ',' << format_fixed(v - path.half95[s], 6) << ','
            << format_fixed(v + path.half95[s], 6) << '\n';
    }
}

void write_effect_svg(std::ostream& out, const EffectPath& path) {
    const int width = 480;
    const int height = 300;
    const int pad = 50;
    const std::size_t n = path.fitted.size() + path.forecast.size();
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    auto widen = [&](double v) {
        if (first) {
            lo = hi = v;
            first = false;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };
    for (double v : path.fitted) widen(v);
    for (std::size_t s = 0; s < path.forecast.size(); ++s) {
        widen(path.forecast[s] - path.half95[s]);
        widen(path.forecast[s] + path.half95[s]);
    }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double span = n > 1 ? static_cast<double>(n - 1) : 1.0;
    auto x = [&](std::size_t i) { return format_fixed(pad + (width - 2 * pad) * static_cast<double>(i) / span, 2); };
    auto y = [&](double v) { return format_fixed(height - pad - (height - 2 * pad) * (v - lo) / (hi - lo), 2); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<text x=\"" << pad << "\" y=\"20\">" << path.name << " effect</text>\n";
    out << "<text x=\"4\" y=\"" << pad << "\">" << format_fixed(hi, 2) << "</text>\n";
    out << "<text x=\"4\" y=\"" << height - pad << "\">" << format_fixed(lo, 2) << "</text>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad << "\" y2=\""
        << height - pad << "\" stroke=\"#000\"/>\n";

    const std::size_t nf = path.fitted.size();
    if (!path.forecast.empty()) {
        for (const auto* half : {&path.half95, &path.half80}) {
            out << "<polygon class=\"band\" fill=\"" << (half == &path.half95 ? "#dde6f5" : "#b7c9ea") << "\" points=\"";
            for (std::size_t s = 0; s < path.forecast.size(); ++s) {
                out << x(nf + s) << ',' << y(path.forecast[s] + (*half)[s]) << ' ';
            }
            for (std::size_t s = path.forecast.size(); s-- > 0;) {
                out << x(nf + s) << ',' << y(path.forecast[s] - (*half)[s]) << ' ';
            }
            out << "\"/>\n";
        }
    }
    out << "<polyline class=\"fitted\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < nf; ++i) out << x(i) << ',' << y(path.fitted[i]) << ' ';
    out << "\"/>\n";
    if (!path.forecast.empty()) {
        out << "<polyline class=\"forecast\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" "
               "stroke-dasharray=\"5,3\" points=\"";
        if (nf > 0) out << x(nf - 1) << ',' << y(path.fitted.back()) << ' ';
        for (std::size_t s = 0; s < path.forecast.size(); ++s) out << x(nf + s) << ',' << y(path.forecast[s]) << ' ';
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

void write_ranking_csv(std::ostream& out, std::span<const RankingReport> reports) {
    out << "dataset,model,diagonal,ei,rank\n";
    for (const auto& r : reports) {
        for (const auto& s : r.scores) {
            out << r.dataset << ',' << model_name(s.model) << ',' << s.diagonal << ','
                << (s.ei ? format_fixed(*s.ei, 10) : std::string()) << ',' << s.rank << '\n';
        }
    }
}

}  // namespace reslab
