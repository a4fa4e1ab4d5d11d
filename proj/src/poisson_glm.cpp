#include "reslab/poisson_glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reslab/error.hpp"

namespace reslab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd null_space_basis(const MatrixXd& constraints, int n_params) {
    if (constraints.rows() == 0) return MatrixXd::Identity(n_params, n_params);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(constraints.transpose());
    const int rank = static_cast<int>(qr.rank());
    const MatrixXd q = qr.householderQ() * MatrixXd::Identity(n_params, n_params);
    return q.rightCols(n_params - rank);
}

double poisson_unit_deviance(double y, double mu) {
    if (y == 0.0) return 2.0 * mu;
    const double t = (y - mu) / mu;
    if (std::abs(t) < 1e-2) {
        // (1 + t) log(1 + t) - t = sum_{n >= 2} (-t)^n / (n (n - 1)), free of cancellation near y = mu
        double term = t * t;
        double sum = 0.0;
        for (int n = 2; n <= 14; ++n) {
            sum += term / (n * (n - 1.0));
            term *= -t;
        }
        return 2.0 * mu * sum;
    }
    return 2.0 * (y * std::log(y / mu) - (y - mu));
}

namespace {

double total_deviance(const VectorXd& y, const VectorXd& mu, const VectorXd& w) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (w(i) > 0.0) d += w(i) * poisson_unit_deviance(y(i), mu(i));
    }
    return d;
}

}  // namespace

IrlsResult fit_poisson_irls(const PoissonProblem& problem, const VectorXd& start,
                            const IrlsOptions& options) {
    const auto& y = problem.response;
    const auto& w = problem.weights;
    const int p = static_cast<int>(problem.design.cols());

    const MatrixXd basis = null_space_basis(problem.constraints, p);
    const MatrixXd x = problem.design * basis;
    const int q = static_cast<int>(x.cols());

    IrlsResult out;
    out.n_free = q;
    out.n_obs = static_cast<int>((w.array() > 0.0).count());

    {
        const MatrixXd xw = w.array().sqrt().matrix().asDiagonal() * x;
        Eigen::ColPivHouseholderQR<MatrixXd> qr(xw);
        qr.setThreshold(1e-10);
        if (qr.rank() < q) {
            throw ReserveError(ErrorCode::NotIdentifiable,
                               "design has rank " + std::to_string(qr.rank()) + " but " +
                                   std::to_string(q) + " free parameters");
        }
    }

    VectorXd beta;
    if (start.size() == 0) {
        const double floor = 1e-3 * std::max(y.mean(), 1e-12);
        VectorXd t(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            t(i) = std::log(std::max(y(i), floor)) - problem.offset(i);
        }
        const VectorXd sw = w.array().sqrt().matrix();
        const MatrixXd xs = sw.asDiagonal() * x;
        const VectorXd ts = sw.asDiagonal() * t;
        beta = xs.colPivHouseholderQr().solve(ts);
    } else {
        beta = basis.transpose() * start;
    }
    VectorXd lin = x * beta + problem.offset;
    VectorXd mu = lin.array().exp().matrix();
    double dev = total_deviance(y, mu, w);
    if (!std::isfinite(dev)) {
        throw ReserveError(ErrorCode::InvalidArgument, "starting values give a non-finite deviance");
    }
    out.deviance_trace.push_back(dev);

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const VectorXd working_w = (w.array() * mu.array()).matrix();
        const VectorXd z = (lin - problem.offset).array() + (y - mu).array() / mu.array();
        const VectorXd sw = working_w.array().sqrt().matrix();
        const MatrixXd xs = sw.asDiagonal() * x;
        const VectorXd zs = sw.asDiagonal() * z;
        const VectorXd target = xs.colPivHouseholderQr().solve(zs);
        const VectorXd step = target - beta;

        double scale = 1.0;
        VectorXd next_beta = beta + step;
        VectorXd next_lin = x * next_beta + problem.offset;
        VectorXd next_mu = next_lin.array().exp().matrix();
        double next_dev = total_deviance(y, next_mu, w);
        int halvings = 0;
        while (!(next_dev <= dev) && halvings < options.max_step_halvings) {
            scale *= 0.5;
            ++halvings;
            next_beta = beta + scale * step;
            next_lin = x * next_beta + problem.offset;
            next_mu = next_lin.array().exp().matrix();
            next_dev = total_deviance(y, next_mu, w);
        }
        out.iterations = iter;
        if (!(next_dev <= dev)) {
            // No descent direction left at working precision.
            out.converged = true;
            break;
        }
        const double change = dev - next_dev;
        beta = next_beta;
        lin = next_lin;
        mu = next_mu;
        dev = next_dev;
        out.deviance_trace.push_back(dev);
        if (change < options.relative_tolerance * (dev + 1.0)) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        throw ReserveError(ErrorCode::NoConvergence,
                           "IRLS did not converge in " + std::to_string(options.max_iterations) +
                               " iterations");
    }
    out.coef = basis * beta;
    out.fitted = mu;
    out.deviance = dev;
    return out;
}

}  // namespace reslab
