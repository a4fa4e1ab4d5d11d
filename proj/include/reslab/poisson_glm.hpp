#pragma once

#include <Eigen/Dense>
#include <vector>

namespace reslab {

/// Log-link Poisson regression problem with an offset, prior weights and
/// homogeneous linear constraints `constraints * coef = 0`.
struct PoissonProblem {
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
    Eigen::VectorXd offset;
    Eigen::VectorXd weights;
    Eigen::MatrixXd constraints;  // r x p, may have zero rows
};

struct IrlsOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-14;
    int max_step_halvings = 40;
};

struct IrlsResult {
    Eigen::VectorXd coef;          // full parameter vector, constraints satisfied
    Eigen::VectorXd fitted;        // fitted means per row
    double deviance = 0.0;
    int n_free = 0;                // columns of the constrained design
    int n_obs = 0;                 // rows with positive weight
    int iterations = 0;
    bool converged = false;
    std::vector<double> deviance_trace;  // deviance after each accepted iterate, start included
};

/// Orthonormal basis of {x : constraints * x = 0}; identity when there are no constraints.
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& constraints, int n_params);

/// Poisson quasi-deviance of real-valued responses; zero responses use the 2*mu limit.
double poisson_unit_deviance(double y, double mu);

/// Fisher scoring with step halving. `start` must satisfy the constraints;
/// it is projected onto them otherwise. An empty `start` begins from a
/// least-squares fit of log(max(y, 1e-3 * mean y)) - offset. Throws NotIdentifiable when the
/// constrained design is rank deficient on the weighted rows and
/// NoConvergence at the iteration cap.
IrlsResult fit_poisson_irls(const PoissonProblem& problem, const Eigen::VectorXd& start,
                            const IrlsOptions& options = {});

}  // namespace reslab
