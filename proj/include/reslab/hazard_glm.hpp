#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "reslab/fitted_cells.hpp"
#include "reslab/poisson_glm.hpp"
#include "reslab/triangle.hpp"

namespace reslab {

/// Additive age-period-cohort structures for the claim development.
enum class Structure { A, AC, AP, APC };

std::string_view to_string(Structure s);
std::optional<Structure> parse_structure(std::string_view text);

constexpr bool has_period(Structure s) { return s == Structure::AP || s == Structure::APC; }
constexpr bool has_cohort(Structure s) { return s == Structure::AC || s == Structure::APC; }

struct ModelSpec {
    Structure structure = Structure::A;
    double eta = 0.5;
    Strictness strictness = Strictness::Strict;
};

/// Log-scale effects of a fitted hazard model.
///
/// log mu(k, j) = age[j-1] + period[k+j-1] + cohort[k], components present
/// per structure. Identification:
///   AC   cohort[0] = 0
///   AP   period[0] = 0
///   APC  sum_k cohort[k] = 0, sum_k k * cohort[k] = 0, period[0] = 0
/// Cohort m has no development cell with j >= 1, so cohorts run 0..m-1.
struct HazardFit {
    ModelSpec spec;
    int m = 0;
    std::vector<double> age;                    // a_j, j = 1..m
    std::optional<std::vector<double>> period;  // c_p, p = 1..m
    std::optional<std::vector<double>> cohort;  // g_k, k = 0..m-1
    double deviance = 0.0;
    int n_obs = 0;
    int n_params = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> deviance_trace;

    /// Linear predictor for an in-sample cell (k + j <= m, j >= 1).
    double log_hazard(int k, int j) const;
};

/// a_j = sum_k X(k, j) / sum_k E(k, j) on the linear scale, over usable cells.
/// Throws EmptyColumn when a development column has no usable cell.
std::vector<double> fit_age_closed_form(const HazardTriangle& hazard, const ExposureTriangle& exp);

/// Poisson maximum likelihood with offset log E over development cells j >= 1.
HazardFit fit_hazard(const ModelSpec& spec, const RunOffTriangle& tri, const IrlsOptions& options = {});

/// Largest absolute violation of the identification constraints.
double constraint_residual(const HazardFit& fit);

/// exp(linear predictor) on every upper-triangle development cell.
HazardTriangle fitted_hazard(const HazardFit& fit);

/// Observed X against E * fitted hazard on the cells that entered the likelihood.
std::vector<FittedCell> hazard_fitted_cells(const HazardFit& fit, const RunOffTriangle& tri);

}  // namespace reslab
