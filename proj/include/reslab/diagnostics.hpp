#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "reslab/fitted_cells.hpp"

namespace reslab {

struct ResidualCell {
    int k = 0;
    int j = 0;
    double observed = 0.0;
    double fitted = 0.0;
    double deviance = 0.0;
    double residual = 0.0;
};

struct ResidualMatrix {
    std::vector<ResidualCell> cells;
    double deviance = 0.0;    // D, accumulated cell by cell
    double dispersion = 0.0;  // D / (K - nu)
    int n_obs = 0;            // K
    int n_params = 0;         // nu
};

/// r = sign(X - Xhat) sqrt(dev (K - nu) / D) with
/// dev = 2 [X log(X / Xhat) - (X - Xhat)], and dev = 2 Xhat when X = 0.
/// A perfect fit (D = 0) yields zero residuals. Throws SaturatedModel when
/// K <= nu and NonPositiveFitted when some Xhat <= 0.
ResidualMatrix scaled_deviance_residuals(std::span<const FittedCell> cells, int n_params);

enum class ExportFormat { Csv, Svg };

/// `cohort,dev,residual` rows in (cohort, dev) order.
void write_residuals_csv(std::ostream& out, const ResidualMatrix& res);

/// Diverging-colour heatmap: cohorts down, development ages across, scale
/// symmetric about 0 with bound max |r|.
void write_residuals_svg(std::ostream& out, const ResidualMatrix& res);

void residual_export(const ResidualMatrix& res, const std::filesystem::path& path, ExportFormat format);

}  // namespace reslab
