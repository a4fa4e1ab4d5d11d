#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reslab/pipeline.hpp"

namespace reslab {

/// Which amounts enter the error-incidence numerator on a held diagonal.
enum class EiBasis { Cumulative, Incremental };

struct HeldCell {
    int k = 0;
    int j = 0;
    double incremental = 0.0;
    double cumulative = 0.0;
    int diagonal() const { return k + j; }
};

/// Training triangle plus the cells of the last `n_diagonals` calendar diagonals.
struct HoldoutSplit {
    RunOffTriangle train;
    std::vector<HeldCell> held;  // ordered by diagonal, then cohort
    int n_diagonals = 0;

    std::vector<HeldCell> diagonal(int calendar) const;
    /// Held cells of one diagonal that a model fitted on `train` can predict:
    /// cohorts present in train, development ages 1..train.m().
    std::vector<HeldCell> scored(int calendar) const;
};

/// Requires 1 <= n_diagonals <= m - 2 (TooFewDiagonals otherwise).
HoldoutSplit split(const RunOffTriangle& tri, int n_diagonals);

RunOffTriangle reassemble(const HoldoutSplit& s);

/// |sum(predicted - actual)| / (total incremental amount of `train`).
double error_incidence(std::span<const double> predicted, std::span<const double> actual,
                       const RunOffTriangle& train);

/// Error incidence of a completed training triangle on held cells.
double diagonal_error_incidence(const ReserveReport& report, std::span<const HeldCell> cells,
                                const RunOffTriangle& train, EiBasis basis);

struct EvalOptions {
    PipelineOptions pipeline;
    EiBasis basis = EiBasis::Cumulative;
    /// Refit the family winner on train + validation before scoring the test diagonal.
    bool refit = true;
    bool parallel = true;
};

struct ModelScore {
    ModelKind model = ModelKind::A;
    std::optional<double> ei;
    int diagonal = 0;
    int rank = 0;
    std::string failure;
};

struct RankingReport {
    std::string dataset;
    std::vector<ModelScore> scores;  // in the order the models were given

    const ModelScore& score(ModelKind model) const;
};

/// Fit each model without the last diagonal and rank by error incidence on
/// it. Models that fail rank last; ties keep the given order.
RankingReport rank_models(const RunOffTriangle& tri, std::span<const ModelKind> models,
                          const EvalOptions& options = {}, std::string dataset = {});

/// Ranks 1..n: ascending EI, failures last. EIs within a relative 1e-8 of
/// each other tie and keep their given order.
void assign_ranks(std::vector<ModelScore>& scores);

struct Family {
    std::string name;
    std::vector<ModelKind> models;
};

struct FamilyResult {
    std::string family;
    std::vector<ModelScore> validation;
    std::optional<ModelKind> selected;
    std::optional<double> validation_ei;
    std::optional<double> test_ei;
    std::string failure;
};

struct BakeoffReport {
    std::string dataset;
    std::vector<FamilyResult> families;

    const FamilyResult& family(const std::string& name) const;
};

/// Train / validation / test on the last two diagonals: select each family's
/// model on the validation diagonal, then score it on the test diagonal.
BakeoffReport family_bakeoff(const RunOffTriangle& tri, std::span<const Family> families,
                             const EvalOptions& options = {}, std::string dataset = {});

/// Hazard models, amount models, and their union.
std::vector<Family> default_families();

/// Mean rank per model over several ranking reports (models in first-seen order).
std::vector<std::pair<ModelKind, double>> mean_ranks(std::span<const RankingReport> reports);

struct CorpusReport {
    std::vector<RankingReport> datasets;
    /// Datasets that could not be loaded or split, with the reason.
    std::vector<std::pair<std::string, std::string>> failures;
    std::vector<std::pair<ModelKind, double>> mean_ranks;
};

/// Ranks `models` on every `*.csv` triangle in `dir`, in file-name order.
/// Throws InvalidArgument when the directory holds no CSV file.
CorpusReport rank_corpus(const std::filesystem::path& dir, std::span<const ModelKind> models,
                         TriangleKind kind, const EvalOptions& options = {});

}  // namespace reslab
