// reslab: reserving models from the command line.
//
// Exit status: 0 success, 1 computation error (error JSON on stderr), 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "reslab/diagnostics.hpp"
#include "reslab/error.hpp"
#include "reslab/evaluation.hpp"
#include "reslab/io_util.hpp"
#include "reslab/pipeline.hpp"
#include "reslab/serialize.hpp"

namespace fs = std::filesystem;
using namespace reslab;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input;
    std::string kind = "cumulative";
    std::string model = "a";
    double eta = 0.5;
    bool cap_hazard = false;
    bool cap_given = false;
    bool lenient = false;
    std::string out_dir = ".";
    std::string format;
    std::string cohort_estimator;
    std::string ei_basis = "cumulative";
    bool no_refit = false;
};

void add_shared(CLI::App* cmd, RunConfig& cfg, bool with_model) {
    cmd->add_option("--input", cfg.input, "Triangle CSV (a directory of them for rank)")->required();
    cmd->add_option("--kind", cfg.kind, "Values in the CSV")->check(CLI::IsMember({"cumulative", "incremental"}));
    if (with_model) {
        cmd->add_option("--model", cfg.model, "Model")
            ->check(CLI::IsMember({"a", "ac", "ap", "apc", "amount-ac", "amount-apc", "cl"}));
    }
    cmd->add_option("--eta", cfg.eta, "Share of the current increment in the exposure")->check(CLI::Range(0.0, 1.0));
    auto* cap = cmd->add_flag("--cap-hazard,!--no-cap", cfg.cap_hazard, "Cap hazards below 1/eta");
    cmd->add_flag("--lenient,!--strict", cfg.lenient, "Warn about data problems instead of failing");
    cmd->add_option("--out-dir", cfg.out_dir, "Output directory");
    cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
    cmd->add_option("--cohort-estimator", cfg.cohort_estimator, "Cohort time-series estimator")
        ->check(CLI::IsMember({"ml", "css"}));
    cmd->callback([cap, &cfg] { cfg.cap_given = cap->count() > 0; });
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
    PipelineOptions o;
    o.eta = cfg.eta;
    o.strictness = cfg.lenient ? Strictness::Lenient : Strictness::Strict;
    o.cap_hazard = cfg.cap_hazard;
    if (!cfg.cohort_estimator.empty()) o.cohort_estimator = *parse_estimator(cfg.cohort_estimator);
    return o;
}

TriangleKind triangle_kind(const RunConfig& cfg) {
    return cfg.kind == "incremental" ? TriangleKind::Incremental : TriangleKind::Cumulative;
}

std::string format_or(const RunConfig& cfg, const std::string& fallback, std::initializer_list<const char*> allowed,
                      const char* command) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    for (const char* a : allowed) {
        if (f == a) return f;
    }
    throw UsageError(std::string("--format ") + f + " is not available for " + command);
}

// Flag combinations that only make sense for some models.
void validate_model_flags(const RunConfig& cfg, ModelKind kind) {
    if (!cfg.cohort_estimator.empty() && !uses_cohort_forecast(kind)) {
        throw UsageError("--cohort-estimator applies only to models with a cohort effect (ac, apc)");
    }
    if (cfg.cap_given && cfg.cap_hazard && !is_hazard_model(kind)) {
        throw UsageError("--cap-hazard applies only to hazard models (a, ac, ap, apc)");
    }
}

RunOffTriangle load(const RunConfig& cfg) {
    const auto loaded = read_triangle_csv(cfg.input, triangle_kind(cfg),
                                          cfg.lenient ? Strictness::Lenient : Strictness::Strict);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    return loaded.triangle;
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

template <class F>
std::string render(F&& write) {
    std::ostringstream s;
    write(s);
    return s.str();
}

int cmd_reserve(const RunConfig& cfg) {
    const ModelKind kind = *parse_model(cfg.model);
    validate_model_flags(cfg, kind);
    const std::string format = format_or(cfg, "json", {"json", "csv"}, "reserve");
    const auto tri = load(cfg);
    const auto run = run_model(tri, kind, pipeline_options(cfg));
    const std::string stem = std::string(model_name(kind));
    if (format == "json") write_file_atomic(out_path(cfg, "reserve_" + stem + ".json"), to_json(run).dump(2) + "\n");
    write_file_atomic(out_path(cfg, "completed_" + stem + ".csv"),
                      render([&](std::ostream& o) { write_completed_csv(o, run.report); }));
    for (const auto& w : run.report.warnings) std::cerr << "warning: " << w << '\n';
    std::printf("model %s\n", stem.c_str());
    std::printf("%-8s %14s %14s\n", "cohort", "ultimate", "reserve");
    for (int k = 0; k <= run.report.m; ++k) {
        std::printf("%-8d %14s %14s\n", k, format_fixed(run.report.ultimate(k), 2).c_str(),
                    format_fixed(run.report.reserves[k], 2).c_str());
    }
    std::printf("total %s\n", format_fixed(run.report.total, 2).c_str());
    return 0;
}

int cmd_residuals(const RunConfig& cfg) {
    const ModelKind kind = *parse_model(cfg.model);
    if (kind == ModelKind::ChainLadder) throw UsageError("residuals need a fitted model, not cl");
    validate_model_flags(cfg, kind);
    const std::string format = format_or(cfg, "csv", {"csv", "svg"}, "residuals");
    const auto tri = load(cfg);
    const auto run = fit_model(tri, kind, pipeline_options(cfg));
    const auto res = scaled_deviance_residuals(run.fitted_cells, run.n_params);
    const std::string stem = "residuals_" + std::string(model_name(kind));
    residual_export(res, out_path(cfg, stem + ".csv"), ExportFormat::Csv);
    if (format == "svg") residual_export(res, out_path(cfg, stem + ".svg"), ExportFormat::Svg);
    std::printf("cells %d, parameters %d, deviance %s, dispersion %s\n", res.n_obs, res.n_params,
                format_fixed(res.deviance, 6).c_str(), format_fixed(res.dispersion, 6).c_str());
    return 0;
}

int cmd_effects(const RunConfig& cfg) {
    const ModelKind kind = *parse_model(cfg.model);
    if (kind == ModelKind::ChainLadder) throw UsageError("effects need a fitted model, not cl");
    validate_model_flags(cfg, kind);
    const std::string format = format_or(cfg, "csv", {"csv", "svg"}, "effects");
    const auto tri = load(cfg);
    const auto run = run_model(tri, kind, pipeline_options(cfg));
    for (const auto& path : effect_paths(run)) {
        const std::string stem = "effects_" + std::string(model_name(kind)) + "_" + path.name;
        write_file_atomic(out_path(cfg, stem + ".csv"), render([&](std::ostream& o) { write_effect_csv(o, path); }));
        if (format == "svg") {
            write_file_atomic(out_path(cfg, stem + ".svg"), render([&](std::ostream& o) { write_effect_svg(o, path); }));
        }
        std::printf("%s: %zu fitted, %zu extrapolated\n", path.name.c_str(), path.fitted.size(), path.forecast.size());
    }
    return 0;
}

EvalOptions eval_options(const RunConfig& cfg) {
    EvalOptions o;
    o.pipeline = pipeline_options(cfg);
    o.basis = cfg.ei_basis == "incremental" ? EiBasis::Incremental : EiBasis::Cumulative;
    o.refit = !cfg.no_refit;
    return o;
}

int cmd_rank(const RunConfig& cfg) {
    const std::string format = format_or(cfg, "json", {"json", "csv"}, "rank");
    if (!fs::is_directory(cfg.input)) throw UsageError("--input must be a directory of triangle CSV files");
    CorpusReport corpus;
    try {
        corpus = rank_corpus(cfg.input, all_models(), triangle_kind(cfg), eval_options(cfg));
    } catch (const ReserveError& e) {
        if (e.code() == ErrorCode::InvalidArgument) throw UsageError(e.what());
        throw;
    }
    write_file_atomic(out_path(cfg, "ranking.csv"),
                      render([&](std::ostream& o) { write_ranking_csv(o, corpus.datasets); }));
    if (format == "json") {
        Json j{{"datasets", Json::array()}, {"failures", Json::array()}, {"mean_ranks", Json::object()}};
        for (const auto& r : corpus.datasets) j["datasets"].push_back(to_json(r));
        for (const auto& [name, why] : corpus.failures) j["failures"].push_back(Json{{"dataset", name}, {"error", why}});
        for (const auto& [m, r] : corpus.mean_ranks) j["mean_ranks"][std::string(model_name(m))] = r;
        write_file_atomic(out_path(cfg, "ranking.json"), j.dump(2) + "\n");
    }
    for (const auto& r : corpus.datasets) {
        std::printf("%s\n", r.dataset.c_str());
        for (const auto& s : r.scores) {
            std::printf("  %-11s %s %d%s%s\n", std::string(model_name(s.model)).c_str(),
                        s.ei ? format_fixed(*s.ei, 6).c_str() : "failed", s.rank, s.failure.empty() ? "" : "  ",
                        s.failure.c_str());
        }
    }
    for (const auto& [name, why] : corpus.failures) std::printf("%s failed: %s\n", name.c_str(), why.c_str());
    std::printf("mean rank over %zu datasets\n", corpus.datasets.size());
    for (const auto& [m, r] : corpus.mean_ranks) {
        std::printf("  %-11s %s\n", std::string(model_name(m)).c_str(), format_fixed(r, 2).c_str());
    }
    return 0;
}

int cmd_bakeoff(const RunConfig& cfg) {
    format_or(cfg, "json", {"json"}, "bakeoff");
    const auto tri = load(cfg);
    const auto families = default_families();
    const auto report = family_bakeoff(tri, families, eval_options(cfg), fs::path(cfg.input).stem().string());
    write_file_atomic(out_path(cfg, "bakeoff.json"), to_json(report).dump(2) + "\n");
    for (const auto& f : report.families) {
        std::printf("%-8s selected %-11s validation %s test %s%s%s\n", f.family.c_str(),
                    f.selected ? std::string(model_name(*f.selected)).c_str() : "none",
                    f.validation_ei ? format_fixed(*f.validation_ei, 6).c_str() : "-",
                    f.test_ei ? format_fixed(*f.test_ei, 6).c_str() : "-", f.failure.empty() ? "" : "  ",
                    f.failure.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Claims reserving with age-period-cohort development models"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<std::string, int (*)(const RunConfig&)> handlers{
        {"reserve", cmd_reserve}, {"residuals", cmd_residuals}, {"effects", cmd_effects},
        {"rank", cmd_rank},       {"bakeoff", cmd_bakeoff},
    };
    auto* reserve = app.add_subcommand("reserve", "Complete the triangle and report reserves");
    auto* residuals = app.add_subcommand("residuals", "Scaled deviance residuals");
    auto* effects = app.add_subcommand("effects", "Fitted and extrapolated effect paths");
    auto* rank = app.add_subcommand("rank", "Rank every model on a corpus by last-diagonal error incidence");
    auto* bakeoff = app.add_subcommand("bakeoff", "Train/validation/test comparison of model families");
    add_shared(reserve, cfg, true);
    add_shared(residuals, cfg, true);
    add_shared(effects, cfg, true);
    add_shared(rank, cfg, false);
    add_shared(bakeoff, cfg, false);
    for (auto* cmd : {rank, bakeoff}) {
        cmd->add_option("--ei-basis", cfg.ei_basis, "Amounts compared on the held diagonal")
            ->check(CLI::IsMember({"cumulative", "incremental"}));
    }
    bakeoff->add_flag("--no-refit", cfg.no_refit, "Score the test diagonal without refitting on validation data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(command)(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ReserveError& e) {
        std::cerr << error_json(e.code(), e.what()).dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_json(ErrorCode::Io, e.what()).dump() << '\n';
        return 1;
    }
}
