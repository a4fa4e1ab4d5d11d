#include "reslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "reslab/error.hpp"
#include "reslab/io_util.hpp"
#include "reslab/poisson_glm.hpp"

namespace reslab {

ResidualMatrix scaled_deviance_residuals(std::span<const FittedCell> cells, int n_params) {
    ResidualMatrix res;
    res.n_obs = static_cast<int>(cells.size());
    res.n_params = n_params;
    if (res.n_obs <= n_params) {
        throw ReserveError(ErrorCode::SaturatedModel,
                           "no residual degrees of freedom (K = " + std::to_string(res.n_obs) +
                               ", nu = " + std::to_string(n_params) + ")");
    }
    res.cells.reserve(cells.size());
    for (const auto& c : cells) {
        if (!(c.fitted > 0.0)) {
            throw ReserveError(ErrorCode::NonPositiveFitted,
                               "fitted value at cell (" + std::to_string(c.k) + ", " +
                                   std::to_string(c.j) + ") is not positive");
        }
        ResidualCell r{c.k, c.j, c.observed, c.fitted, poisson_unit_deviance(c.observed, c.fitted), 0.0};
        // Rounding can leave tiny negative values near X = Xhat.
        r.deviance = std::max(r.deviance, 0.0);
        res.deviance += r.deviance;
        res.cells.push_back(r);
    }
    const double dof = static_cast<double>(res.n_obs - n_params);
    res.dispersion = res.deviance / dof;
    if (res.deviance > 0.0) {
        for (auto& r : res.cells) {
            const double diff = r.observed - r.fitted;
            const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            r.residual = sign * std::sqrt(r.deviance * dof / res.deviance);
        }
    }
    return res;
}

void write_residuals_csv(std::ostream& out, const ResidualMatrix& res) {
    out << "cohort,dev,residual\n";
    for (const auto& r : res.cells) {
        out << r.k << ',' << r.j << ',' << format_fixed(r.residual, 6) << '\n';
    }
}

namespace {

// Blue (negative) through white to red (positive).
std::string diverging_colour(double t) {
    t = std::clamp(t, -1.0, 1.0);
    int r = 255;
    int g = 255;
    int b = 255;
    if (t > 0.0) {
        g = b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    } else if (t < 0.0) {
        r = g = static_cast<int>(std::lround(255.0 * (1.0 + t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void write_residuals_svg(std::ostream& out, const ResidualMatrix& res) {
    int max_k = 0;
    int max_j = 0;
    double bound = 0.0;
    for (const auto& r : res.cells) {
        max_k = std::max(max_k, r.k);
        max_j = std::max(max_j, r.j);
        bound = std::max(bound, std::abs(r.residual));
    }
    const int cell = 40;
    const int left = 60;
    const int top = 40;
    const int legend = 90;
    const int width = left + (max_j + 1) * cell + legend;
    const int height = top + (max_k + 1) * cell + 40;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<text x=\"" << left << "\" y=\"20\">development</text>\n";
    out << "<text x=\"8\" y=\"" << top - 8 << "\">cohort</text>\n";
    for (int j = 0; j <= max_j; ++j) {
        out << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top - 8
            << "\" text-anchor=\"middle\">" << j << "</text>\n";
    }
    for (int k = 0; k <= max_k; ++k) {
        out << "<text x=\"" << left - 8 << "\" y=\"" << top + k * cell + cell / 2 + 4
            << "\" text-anchor=\"end\">" << k << "</text>\n";
    }
    for (const auto& r : res.cells) {
        const double t = bound > 0.0 ? r.residual / bound : 0.0;
        out << "<rect class=\"cell\" x=\"" << left + r.j * cell << "\" y=\"" << top + r.k * cell
            << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << diverging_colour(t)
            << "\" stroke=\"#808080\"><title>(" << r.k << ", " << r.j << ") "
            << format_fixed(r.residual, 2) << "</title></rect>\n";
    }
    const int lx = left + (max_j + 1) * cell + 20;
    const int steps = 5;
    for (int s = 0; s < steps; ++s) {
        const double t = 1.0 - 2.0 * s / (steps - 1);
        out << "<rect x=\"" << lx << "\" y=\"" << top + s * 20 << "\" width=\"16\" height=\"20\" fill=\""
            << diverging_colour(t) << "\"/>\n";
        out << "<text x=\"" << lx + 20 << "\" y=\"" << top + s * 20 + 14 << "\">"
            << format_fixed(t * bound, 2) << "</text>\n";
    }
    out << "</svg>\n";
}

void residual_export(const ResidualMatrix& res, const std::filesystem::path& path, ExportFormat format) {
    std::ostringstream buf;
    if (format == ExportFormat::Csv) {
        write_residuals_csv(buf, res);
    } else {
        write_residuals_svg(buf, res);
    }
    write_file_atomic(path, buf.str());
}

}  // namespace reslab
