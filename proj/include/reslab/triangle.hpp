#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace reslab {

/// Row-major cell grid with explicit absence; rows may be shorter than the widest row.
using CellMatrix = std::vector<std::vector<std::optional<double>>>;

enum class Strictness { Strict, Lenient };

enum class TriangleKind { Cumulative, Incremental };

/// Upper-left run-off triangle of incremental amounts X(k, j), k + j <= m.
///
/// Cohort (accident period) k indexes rows, development age j indexes
/// columns and k + j is the calendar period. Values are stored once, packed
/// row by row; cells outside the triangle do not exist.
class RunOffTriangle {
public:
    RunOffTriangle() = default;

    /// Builds directly from incremental rows; row k must hold m - k + 1 values.
    explicit RunOffTriangle(std::vector<std::vector<double>> incremental_rows,
                            std::optional<std::string> origin_label = std::nullopt);

    int m() const noexcept { return m_; }
    int n_cohorts() const noexcept { return m_ + 1; }
    std::size_t n_cells() const noexcept { return values_.size(); }

    bool contains(int k, int j) const noexcept {
        return k >= 0 && j >= 0 && k + j <= m_;
    }

    double incremental(int k, int j) const;
    double cumulative(int k, int j) const;

    /// Latest observed cumulative amount of cohort k, i.e. C(k, m - k).
    double latest(int k) const { return cumulative(k, m_ - k); }

    const std::optional<std::string>& origin_label() const noexcept { return origin_label_; }

    /// Sum of every observed incremental amount.
    double total() const;

    /// Triangle restricted to cells with k + j <= new_m.
    RunOffTriangle truncated(int new_m) const;

    RunOffTriangle scaled(double factor) const;

    std::vector<std::vector<double>> incremental_rows() const;
    std::vector<std::vector<double>> cumulative_rows() const;

    friend bool operator==(const RunOffTriangle&, const RunOffTriangle&) = default;

private:
    std::size_t offset(int k) const noexcept;

    int m_ = -1;
    std::vector<double> values_;
    std::optional<std::string> origin_label_;
};

struct LoadResult {
    RunOffTriangle triangle;
    std::vector<std::string> warnings;
};

/// Cumulative grid to triangle. Ragged masks raise RaggedInput; decreasing
/// cumulative values are warnings, or NonMonotone errors in strict mode.
LoadResult from_cumulative(const CellMatrix& cells, Strictness strictness = Strictness::Strict);
LoadResult from_incremental(const CellMatrix& cells, Strictness strictness = Strictness::Strict);

/// Dense (m+1) x (m+1) square of per-cell values, indexed (cohort, age).
/// Which cells carry meaning depends on the owner.
class CellGrid {
public:
    CellGrid() = default;
    explicit CellGrid(int m) : m_(m), v_(static_cast<std::size_t>((m + 1) * (m + 1)), 0.0) {}

    int m() const noexcept { return m_; }
    double& at(int k, int j) { return v_[index(k, j)]; }
    double at(int k, int j) const { return v_[index(k, j)]; }

private:
    std::size_t index(int k, int j) const noexcept {
        return static_cast<std::size_t>(k * (m_ + 1) + j);
    }
    int m_ = -1;
    std::vector<double> v_;
};

/// E(k, j) = sum_{l<j} X(k, l) + eta * X(k, j) for j >= 1.
struct ExposureTriangle {
    double eta = 0.5;
    CellGrid values;

    int m() const noexcept { return values.m(); }
    double at(int k, int j) const { return values.at(k, j); }
    bool degenerate(int k, int j) const { return !(values.at(k, j) > 0.0); }
};

struct HazardTriangle {
    double eta = 0.5;
    CellGrid values;
    /// 1 where the cell enters the likelihood, 0 for excluded (lenient) cells.
    CellGrid weights;

    int m() const noexcept { return values.m(); }
    double at(int k, int j) const { return values.at(k, j); }
    bool usable(int k, int j) const { return weights.at(k, j) > 0.0; }
};

ExposureTriangle exposure(const RunOffTriangle& tri, double eta);

/// Strict mode raises ZeroExposure on the first non-positive exposure; lenient
/// mode zero-weights those cells and any cell with a negative increment.
HazardTriangle empirical_hazard(const RunOffTriangle& tri, double eta,
                                Strictness strictness = Strictness::Strict);

/// Age-by-period re-indexing: entry (j, k + j) holds X(k, j); absent entries are nullopt.
CellMatrix occurrence_view(const RunOffTriangle& tri);
RunOffTriangle from_occurrence_view(const CellMatrix& view);

std::vector<double> latest_diagonal(const RunOffTriangle& tri);

/// CSV: optional `dev_0,...,dev_m` header, one row per cohort, empty fields for absent cells.
CellMatrix read_cell_csv(std::istream& in);
LoadResult read_triangle_csv(const std::string& path, TriangleKind kind,
                             Strictness strictness = Strictness::Strict);
void write_triangle_csv(std::ostream& out, const RunOffTriangle& tri, TriangleKind kind);

}  // namespace reslab
