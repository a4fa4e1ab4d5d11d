#include "reslab/triangle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <locale>
#include <sstream>

#include "reslab/error.hpp"

namespace reslab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::RaggedInput: return "RaggedInput";
        case ErrorCode::NonMonotone: return "NonMonotone";
        case ErrorCode::ZeroExposure: return "ZeroExposure";
        case ErrorCode::EmptyColumn: return "EmptyColumn";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::NotIdentifiable: return "NotIdentifiable";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::DegenerateHazard: return "DegenerateHazard";
        case ErrorCode::MissingForecast: return "MissingForecast";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::SaturatedModel: return "SaturatedModel";
        case ErrorCode::NonPositiveFitted: return "NonPositiveFitted";
        case ErrorCode::TooFewDiagonals: return "TooFewDiagonals";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string cell_name(int k, int j) {
    return "(" + std::to_string(k) + ", " + std::to_string(j) + ")";
}

// Checks the present-cell mask is exactly the upper-left triangle and returns
// the dense rows.
std::vector<std::vector<double>> triangular_rows(const CellMatrix& cells) {
    if (cells.empty()) {
        throw ReserveError(ErrorCode::RaggedInput, "triangle has no rows");
    }
    const int m = static_cast<int>(cells.size()) - 1;
    std::vector<std::vector<double>> rows(cells.size());
    for (int k = 0; k <= m; ++k) {
        const auto& row = cells[static_cast<std::size_t>(k)];
        const int width = static_cast<int>(row.size());
        for (int j = 0; j < width; ++j) {
            const bool expected = j <= m - k;
            const bool present = row[static_cast<std::size_t>(j)].has_value();
            if (expected != present) {
                throw ReserveError(ErrorCode::RaggedInput,
                                   "cell " + cell_name(k, j) +
                                       (present ? " lies below the latest diagonal"
                                                : " is missing inside the triangle"));
            }
            if (present) {
                const double v = *row[static_cast<std::size_t>(j)];
                if (!std::isfinite(v)) {
                    throw ReserveError(ErrorCode::InvalidArgument,
                                       "cell " + cell_name(k, j) + " is not finite");
                }
                rows[static_cast<std::size_t>(k)].push_back(v);
            }
        }
        if (width < m - k + 1) {
            throw ReserveError(ErrorCode::RaggedInput,
                               "row " + std::to_string(k) + " has " + std::to_string(width) +
                                   " cells, expected " + std::to_string(m - k + 1));
        }
    }
    return rows;
}

void check_increments(const std::vector<std::vector<double>>& incr, Strictness strictness,
                      std::vector<std::string>& warnings) {
    for (std::size_t k = 0; k < incr.size(); ++k) {
        for (std::size_t j = 0; j < incr[k].size(); ++j) {
            if (incr[k][j] < 0.0) {
                std::string msg = "negative increment " + std::to_string(incr[k][j]) +
                                  " at cell " +
                                  cell_name(static_cast<int>(k), static_cast<int>(j));
                if (strictness == Strictness::Strict) {
                    throw ReserveError(ErrorCode::NonMonotone, msg);
                }
                warnings.push_back(std::move(msg));
            }
        }
    }
}

}  // namespace

RunOffTriangle::RunOffTriangle(std::vector<std::vector<double>> incremental_rows,
                               std::optional<std::string> origin_label)
    : m_(static_cast<int>(incremental_rows.size()) - 1), origin_label_(std::move(origin_label)) {
    if (incremental_rows.empty()) {
        throw ReserveError(ErrorCode::RaggedInput, "triangle has no rows");
    }
    for (int k = 0; k <= m_; ++k) {
        const auto& row = incremental_rows[static_cast<std::size_t>(k)];
        if (static_cast<int>(row.size()) != m_ - k + 1) {
            throw ReserveError(ErrorCode::RaggedInput,
                               "row " + std::to_string(k) + " has " + std::to_string(row.size()) +
                                   " cells, expected " + std::to_string(m_ - k + 1));
        }
        values_.insert(values_.end(), row.begin(), row.end());
    }
}

std::size_t RunOffTriangle::offset(int k) const noexcept {
    // Rows 0..k-1 hold (m+1) + m + ... + (m-k+2) cells.
    return static_cast<std::size_t>(k * (m_ + 1) - k * (k - 1) / 2);
}

double RunOffTriangle::incremental(int k, int j) const {
    if (!contains(k, j)) {
        throw ReserveError(ErrorCode::InvalidArgument, "cell " + cell_name(k, j) + " is not observed");
    }
    return values_[offset(k) + static_cast<std::size_t>(j)];
}

double RunOffTriangle::cumulative(int k, int j) const {
    if (!contains(k, j)) {
        throw ReserveError(ErrorCode::InvalidArgument, "cell " + cell_name(k, j) + " is not observed");
    }
    const std::size_t base = offset(k);
    double sum = 0.0;
    for (int l = 0; l <= j; ++l) sum += values_[base + static_cast<std::size_t>(l)];
    return sum;
}

double RunOffTriangle::total() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

RunOffTriangle RunOffTriangle::truncated(int new_m) const {
    if (new_m < 0 || new_m > m_) {
        throw ReserveError(ErrorCode::InvalidArgument,
                           "cannot truncate a triangle of size " + std::to_string(m_) + " to " +
                               std::to_string(new_m));
    }
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= new_m; ++k) {
        std::vector<double> row;
        for (int j = 0; j <= new_m - k; ++j) row.push_back(incremental(k, j));
        rows.push_back(std::move(row));
    }
    return RunOffTriangle(std::move(rows), origin_label_);
}

RunOffTriangle RunOffTriangle::scaled(double factor) const {
    RunOffTriangle out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

std::vector<std::vector<double>> RunOffTriangle::incremental_rows() const {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= m_; ++k) {
        const auto first = values_.begin() + static_cast<std::ptrdiff_t>(offset(k));
        rows.emplace_back(first, first + (m_ - k + 1));
    }
    return rows;
}

std::vector<std::vector<double>> RunOffTriangle::cumulative_rows() const {
    auto rows = incremental_rows();
    for (auto& row : rows) {
        for (std::size_t j = 1; j < row.size(); ++j) row[j] += row[j - 1];
    }
    return rows;
}

LoadResult from_cumulative(const CellMatrix& cells, Strictness strictness) {
    auto rows = triangular_rows(cells);
    for (auto& row : rows) {
        for (std::size_t j = row.size(); j-- > 1;) row[j] -= row[j - 1];
    }
    LoadResult result;
    check_increments(rows, strictness, result.warnings);
    result.triangle = RunOffTriangle(std::move(rows));
    return result;
}

LoadResult from_incremental(const CellMatrix& cells, Strictness strictness) {
    auto rows = triangular_rows(cells);
    LoadResult result;
    check_increments(rows, strictness, result.warnings);
    result.triangle = RunOffTriangle(std::move(rows));
    return result;
}

ExposureTriangle exposure(const RunOffTriangle& tri, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ReserveError(ErrorCode::InvalidArgument, "eta must lie in [0, 1]");
    }
    ExposureTriangle out{eta, CellGrid(tri.m())};
    for (int k = 0; k <= tri.m(); ++k) {
        double prior = tri.incremental(k, 0);
        for (int j = 1; j <= tri.m() - k; ++j) {
            const double x = tri.incremental(k, j);
            out.values.at(k, j) = prior + eta * x;
            prior += x;
        }
    }
    return out;
}

HazardTriangle empirical_hazard(const RunOffTriangle& tri, double eta, Strictness strictness) {
    const ExposureTriangle exp = exposure(tri, eta);
    HazardTriangle out{eta, CellGrid(tri.m()), CellGrid(tri.m())};
    for (int k = 0; k <= tri.m(); ++k) {
        for (int j = 1; j <= tri.m() - k; ++j) {
            const double x = tri.incremental(k, j);
            if (exp.degenerate(k, j)) {
                if (strictness == Strictness::Strict) {
                    throw ReserveError(ErrorCode::ZeroExposure,
                                       "non-positive exposure at cell " + cell_name(k, j));
                }
                continue;
            }
            out.values.at(k, j) = x / exp.at(k, j);
            out.weights.at(k, j) = x < 0.0 ? 0.0 : 1.0;
        }
    }
    return out;
}

CellMatrix occurrence_view(const RunOffTriangle& tri) {
    const int n = tri.n_cohorts();
    CellMatrix view(static_cast<std::size_t>(n),
                    std::vector<std::optional<double>>(static_cast<std::size_t>(n)));
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j <= tri.m() - k; ++j) {
            view[static_cast<std::size_t>(j)][static_cast<std::size_t>(k + j)] = tri.incremental(k, j);
        }
    }
    return view;
}

RunOffTriangle from_occurrence_view(const CellMatrix& view) {
    const int n = static_cast<int>(view.size());
    CellMatrix cells(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto& row = view[static_cast<std::size_t>(j)];
        for (int p = 0; p < static_cast<int>(row.size()); ++p) {
            if (!row[static_cast<std::size_t>(p)]) continue;
            const int k = p - j;
            if (k < 0 || k >= n) {
                throw ReserveError(ErrorCode::RaggedInput, "occurrence entry outside the triangle");
            }
            auto& target = cells[static_cast<std::size_t>(k)];
            if (target.size() <= static_cast<std::size_t>(j)) target.resize(static_cast<std::size_t>(j) + 1);
            target[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(p)];
        }
    }
    return from_incremental(cells, Strictness::Lenient).triangle;
}

std::vector<double> latest_diagonal(const RunOffTriangle& tri) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(tri.n_cohorts()));
    for (int k = 0; k <= tri.m(); ++k) out.push_back(tri.latest(k));
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_number(const std::string& text, double& value) {
    std::istringstream ss(text);
    ss.imbue(std::locale::classic());
    ss >> value;
    return !ss.fail() && ss.eof();
}

}  // namespace

CellMatrix read_cell_csv(std::istream& in) {
    CellMatrix cells;
    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (first) {
            first = false;
            double probe = 0.0;
            if (!fields.empty() && !fields[0].empty() && !parse_number(fields[0], probe)) {
                continue;  // header
            }
        }
        std::vector<std::optional<double>> row;
        for (const auto& f : fields) {
            if (f.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            if (!parse_number(f, v)) {
                throw ReserveError(ErrorCode::InvalidArgument,
                                   "line " + std::to_string(line_no) + ": cannot parse '" + f + "'");
            }
            row.emplace_back(v);
        }
        cells.push_back(std::move(row));
    }
    return cells;
}

LoadResult read_triangle_csv(const std::string& path, TriangleKind kind, Strictness strictness) {
    std::ifstream in(path);
    if (!in) throw ReserveError(ErrorCode::Io, "cannot open " + path);
    const CellMatrix cells = read_cell_csv(in);
    return kind == TriangleKind::Cumulative ? from_cumulative(cells, strictness)
                                            : from_incremental(cells, strictness);
}

void write_triangle_csv(std::ostream& out, const RunOffTriangle& tri, TriangleKind kind) {
    const auto rows = kind == TriangleKind::Cumulative ? tri.cumulative_rows() : tri.incremental_rows();
    for (int j = 0; j <= tri.m(); ++j) out << (j ? "," : "") << "dev_" << j;
    out << '\n';
    char buf[64];
    for (int k = 0; k <= tri.m(); ++k) {
        for (int j = 0; j <= tri.m(); ++j) {
            if (j) out << ',';
            if (j <= tri.m() - k) {
                std::snprintf(buf, sizeof buf, "%.6f", rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace reslab
