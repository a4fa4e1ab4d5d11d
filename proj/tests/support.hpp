#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "reslab/triangle.hpp"

namespace reslab::testing {

inline std::string data_path(const std::string& name) { return std::string(RESLAB_DATA_DIR) + "/" + name; }

// Cumulative paid claims, AutoBI.
inline const std::vector<std::vector<double>>& autobi_cumulative() {
    static const std::vector<std::vector<double>> rows{
        {1904, 5398, 7496, 8882, 9712, 10071, 10199, 10256},
        {2235, 6261, 8691, 10443, 11346, 11754, 12031},
        {2441, 7348, 10662, 12655, 13748, 14235},
        {2503, 8173, 11810, 14176, 15383},
        {2838, 8712, 12728, 15278},
        {2405, 7858, 11771},
        {2759, 9182},
        {2801},
    };
    return rows;
}

inline RunOffTriangle from_cumulative_rows(const std::vector<std::vector<double>>& rows) {
    CellMatrix cells;
    for (const auto& r : rows) cells.emplace_back(r.begin(), r.end());
    return from_cumulative(cells).triangle;
}

inline RunOffTriangle autobi() { return from_cumulative_rows(autobi_cumulative()); }

inline const std::vector<double>& autobi_reserves() {
    static const std::vector<double> r{0, 67.24, 345.19, 940.69, 2350.86, 4466.77, 9103.24, 14480.44};
    return r;
}

/// Positive increments with a decaying development pattern and cohort noise.
inline RunOffTriangle random_triangle(unsigned seed, int m) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(500.0, 5000.0);
    std::uniform_real_distribution<double> decay(0.3, 0.8);
    std::lognormal_distribution<double> noise(0.0, 0.25);
    const double d = decay(rng);
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= m; ++k) {
        const double base = level(rng);
        std::vector<double> row;
        for (int j = 0; j <= m - k; ++j) row.push_back(base * std::pow(d, j) * noise(rng) + 1.0);
        rows.push_back(std::move(row));
    }
    return RunOffTriangle(std::move(rows));
}

inline int random_m(unsigned seed, int lo, int hi) {
    std::mt19937 rng(seed * 7919u + 17u);
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Chain ladder reserves computed with nothing but loops over the cumulative rows.
inline std::vector<double> oracle_chain_ladder(const std::vector<std::vector<double>>& cum) {
    const int m = static_cast<int>(cum.size()) - 1;
    std::vector<double> f(static_cast<std::size_t>(m + 1), 1.0);
    for (int j = 1; j <= m; ++j) {
        double num = 0.0;
        double den = 0.0;
        for (int k = 0; k <= m - j; ++k) {
            num += cum[k][j];
            den += cum[k][j - 1];
        }
        f[j] = num / den;
    }
    std::vector<double> reserves;
    for (int k = 0; k <= m; ++k) {
        double c = cum[k].back();
        for (int j = m - k + 1; j <= m; ++j) c *= f[j];
        reserves.push_back(c - cum[k].back());
    }
    return reserves;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace reslab::testing
