#include "reslab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

#include "reslab/error.hpp"

namespace reslab {

std::vector<HeldCell> HoldoutSplit::diagonal(int calendar) const {
    std::vector<HeldCell> out;
    for (const auto& c : held) {
        if (c.diagonal() == calendar) out.push_back(c);
    }
    return out;
}

std::vector<HeldCell> HoldoutSplit::scored(int calendar) const {
    std::vector<HeldCell> out;
    for (const auto& c : held) {
        if (c.diagonal() == calendar && c.k <= train.m() && c.j >= 1 && c.j <= train.m()) out.push_back(c);
    }
    return out;
}

HoldoutSplit split(const RunOffTriangle& tri, int n_diagonals) {
    if (n_diagonals < 1 || n_diagonals > tri.m() - 2) {
        throw ReserveError(ErrorCode::TooFewDiagonals,
                           "cannot hold out " + std::to_string(n_diagonals) +
                               " diagonals from a triangle with m = " + std::to_string(tri.m()));
    }
    HoldoutSplit s;
    s.n_diagonals = n_diagonals;
    const int train_m = tri.m() - n_diagonals;
    s.train = tri.truncated(train_m);
    for (int d = train_m + 1; d <= tri.m(); ++d) {
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            s.held.push_back({k, j, tri.incremental(k, j), tri.cumulative(k, j)});
        }
    }
    return s;
}

RunOffTriangle reassemble(const HoldoutSplit& s) {
    auto rows = s.train.incremental_rows();
    for (const auto& c : s.held) {
        if (static_cast<std::size_t>(c.k) >= rows.size()) rows.resize(static_cast<std::size_t>(c.k) + 1);
        auto& row = rows[static_cast<std::size_t>(c.k)];
        if (row.size() <= static_cast<std::size_t>(c.j)) row.resize(static_cast<std::size_t>(c.j) + 1);
        row[static_cast<std::size_t>(c.j)] = c.incremental;
    }
    return RunOffTriangle(std::move(rows), s.train.origin_label());
}

double error_incidence(std::span<const double> predicted, std::span<const double> actual,
                       const RunOffTriangle& train) {
    if (predicted.size() != actual.size()) {
        throw ReserveError(ErrorCode::InvalidArgument, "predicted and actual diagonals differ in length");
    }
    const double denominator = train.total();
    if (denominator == 0.0) {
        throw ReserveError(ErrorCode::ZeroDenominator, "training triangle has zero total payments");
    }
    double error = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) error += predicted[i] - actual[i];
    return std::abs(error) / std::abs(denominator);
}

double diagonal_error_incidence(const ReserveReport& report, std::span<const HeldCell> cells,
                                const RunOffTriangle& train, EiBasis basis) {
    std::vector<double> predicted;
    std::vector<double> actual;
    for (const auto& c : cells) {
        if (!report.predicted(c.k, c.j)) {
            throw ReserveError(ErrorCode::InvalidArgument, "held cell lies inside the training triangle");
        }
        if (basis == EiBasis::Cumulative) {
            predicted.push_back(report.completed.at(c.k, c.j));
            actual.push_back(c.cumulative);
        } else {
            predicted.push_back(report.increments.at(c.k, c.j));
            actual.push_back(c.incremental);
        }
    }
    return error_incidence(predicted, actual, train);
}

namespace {

// EIs this close are the same number reached through different fits.
constexpr double kTieRel = 1e-8;
constexpr double kTieAbs = 1e-12;

bool tied(double a, double b) { return std::abs(a - b) <= kTieRel * std::max(std::abs(a), std::abs(b)) + kTieAbs; }

ModelScore score_model(const RunOffTriangle& train, ModelKind model, std::span<const HeldCell> cells,
                       int calendar, const EvalOptions& options) {
    ModelScore s;
    s.model = model;
    s.diagonal = calendar;
    try {
        const ModelRun run = run_model(train, model, options.pipeline);
        s.ei = diagonal_error_incidence(run.report, cells, train, options.basis);
    } catch (const ReserveError& e) {
        s.failure = std::string(to_string(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
        s.failure = e.what();
    }
    return s;
}

std::vector<ModelScore> score_all(const RunOffTriangle& train, std::span<const ModelKind> models,
                                  std::span<const HeldCell> cells, int calendar, const EvalOptions& options) {
    std::vector<ModelScore> scores;
    if (options.parallel && models.size() > 1) {
        std::vector<std::future<ModelScore>> jobs;
        for (ModelKind m : models) {
            jobs.push_back(std::async(std::launch::async, [&, m] {
                return score_model(train, m, cells, calendar, options);
            }));
        }
        for (auto& j : jobs) scores.push_back(j.get());
    } else {
        for (ModelKind m : models) scores.push_back(score_model(train, m, cells, calendar, options));
    }
    return scores;
}

}  // namespace

void assign_ranks(std::vector<ModelScore>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& sa = scores[a];
        const auto& sb = scores[b];
        if (sa.ei.has_value() != sb.ei.has_value()) return sa.ei.has_value();
        if (!sa.ei) return false;
        return *sa.ei < *sb.ei;
    });
    // Runs of tied EIs, anchored at their smallest member, go back to the given order.
    for (std::size_t begin = 0; begin < order.size();) {
        std::size_t end = begin + 1;
        const auto& anchor = scores[order[begin]].ei;
        while (end < order.size() && anchor && scores[order[end]].ei && tied(*anchor, *scores[order[end]].ei)) ++end;
        if (!anchor) end = order.size();
        std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end));
        begin = end;
    }
    for (std::size_t r = 0; r < order.size(); ++r) scores[order[r]].rank = static_cast<int>(r) + 1;
}

const ModelScore& RankingReport::score(ModelKind model) const {
    for (const auto& s : scores) {
        if (s.model == model) return s;
    }
    throw ReserveError(ErrorCode::InvalidArgument, "model not part of the ranking");
}

RankingReport rank_models(const RunOffTriangle& tri, std::span<const ModelKind> models,
                          const EvalOptions& options, std::string dataset) {
    const HoldoutSplit s = split(tri, 1);
    const std::vector<HeldCell> cells = s.scored(tri.m());
    RankingReport report;
    report.dataset = std::move(dataset);
    report.scores = score_all(s.train, models, cells, tri.m(), options);
    assign_ranks(report.scores);
    return report;
}

const FamilyResult& BakeoffReport::family(const std::string& name) const {
    for (const auto& f : families) {
        if (f.family == name) return f;
    }
    throw ReserveError(ErrorCode::InvalidArgument, "unknown family " + name);
}

BakeoffReport family_bakeoff(const RunOffTriangle& tri, std::span<const Family> families,
                             const EvalOptions& options, std::string dataset) {
    const HoldoutSplit s = split(tri, 2);
    const int validation_diag = tri.m() - 1;
    const int test_diag = tri.m();
    const std::vector<HeldCell> validation_cells = s.scored(validation_diag);
    const std::vector<HeldCell> test_cells = s.scored(test_diag);

    std::vector<ModelKind> unique;
    for (const auto& f : families) {
        for (ModelKind m : f.models) {
            if (std::find(unique.begin(), unique.end(), m) == unique.end()) unique.push_back(m);
        }
    }
    const std::vector<ModelScore> scored = score_all(s.train, unique, validation_cells, validation_diag, options);
    std::map<ModelKind, ModelScore> by_model;
    for (const auto& sc : scored) by_model.emplace(sc.model, sc);

    const RunOffTriangle refit_train = tri.truncated(tri.m() - 1);
    BakeoffReport report;
    report.dataset = std::move(dataset);
    for (const auto& f : families) {
        FamilyResult fr;
        fr.family = f.name;
        for (ModelKind m : f.models) fr.validation.push_back(by_model.at(m));
        assign_ranks(fr.validation);
        for (const auto& v : fr.validation) {
            if (v.rank == 1 && v.ei) {
                fr.selected = v.model;
                fr.validation_ei = v.ei;
            }
        }
        if (!fr.selected) {
            fr.failure = "no model in the family could be fitted";
            report.families.push_back(std::move(fr));
            continue;
        }
        try {
            if (options.refit) {
                const ModelRun run = run_model(refit_train, *fr.selected, options.pipeline);
                fr.test_ei = diagonal_error_incidence(run.report, test_cells, refit_train, options.basis);
            } else {
                const ModelRun run = run_model(s.train, *fr.selected, options.pipeline);
                fr.test_ei = diagonal_error_incidence(run.report, test_cells, s.train, options.basis);
            }
        } catch (const ReserveError& e) {
            fr.failure = std::string(to_string(e.code())) + ": " + e.what();
        }
        report.families.push_back(std::move(fr));
    }
    return report;
}

std::vector<Family> default_families() {
    return {
        {"hazard", {ModelKind::A, ModelKind::AC, ModelKind::AP, ModelKind::APC}},
        {"amount", {ModelKind::AmountAC, ModelKind::AmountAPC}},
        {"union",
         {ModelKind::A, ModelKind::AC, ModelKind::AP, ModelKind::APC, ModelKind::AmountAC, ModelKind::AmountAPC}},
    };
}

std::vector<std::pair<ModelKind, double>> mean_ranks(std::span<const RankingReport> reports) {
    std::vector<std::pair<ModelKind, double>> sums;
    std::vector<int> counts;
    for (const auto& r : reports) {
        for (const auto& s : r.scores) {
            auto it = std::find_if(sums.begin(), sums.end(), [&](const auto& p) { return p.first == s.model; });
            if (it == sums.end()) {
                sums.emplace_back(s.model, 0.0);
                counts.push_back(0);
                it = sums.end() - 1;
            }
            it->second += s.rank;
            ++counts[static_cast<std::size_t>(it - sums.begin())];
        }
    }
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i].second /= counts[i];
    return sums;
}

CorpusReport rank_corpus(const std::filesystem::path& dir, std::span<const ModelKind> models,
                         TriangleKind kind, const EvalOptions& options) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    if (ec) throw ReserveError(ErrorCode::Io, "cannot list " + dir.string());
    if (files.empty()) throw ReserveError(ErrorCode::InvalidArgument, "no triangle CSV files in " + dir.string());
    std::sort(files.begin(), files.end());

    CorpusReport report;
    for (const auto& f : files) {
        const std::string name = f.stem().string();
        try {
            const LoadResult loaded = read_triangle_csv(f.string(), kind, options.pipeline.strictness);
            report.datasets.push_back(rank_models(loaded.triangle, models, options, name));
        } catch (const ReserveError& e) {
            report.failures.emplace_back(name, std::string(to_string(e.code())) + ": " + e.what());
        }
    }
    report.mean_ranks = mean_ranks(report.datasets);
    return report;
}

}  // namespace reslab
