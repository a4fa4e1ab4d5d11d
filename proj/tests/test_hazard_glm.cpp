#include <doctest.h>

#include <cmath>

#include "reslab/error.hpp"
#include "reslab/hazard_glm.hpp"
#include "support.hpp"

using namespace reslab;
using namespace reslab::testing;

namespace {

// X(k, j) = mu * (C(k, j-1) + eta X(k, j)) solved for X, so the empirical hazard is mu exactly.
RunOffTriangle generate(int m, double eta, const std::vector<double>& x0, auto&& mu) {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= m; ++k) {
        std::vector<double> row{x0[k]};
        double c = x0[k];
        for (int j = 1; j <= m - k; ++j) {
            const double h = mu(k, j);
            const double x = h * c / (1.0 - eta * h);
            row.push_back(x);
            c += x;
        }
        rows.push_back(std::move(row));
    }
    return RunOffTriangle(std::move(rows));
}

std::vector<double> levels(int m) {
    std::vector<double> x;
    for (int k = 0; k <= m; ++k) x.push_back(1000.0 + 137.0 * k);
    return x;
}

}  // namespace

TEST_CASE("closed-form age effect on AutoBI") {
    const auto tri = autobi();
    const auto a = fit_age_closed_form(empirical_hazard(tri, 0.5), exposure(tri, 0.5));
    REQUIRE(a.size() == 7);
    CHECK(a[0] == doctest::Approx(1.0239).epsilon(1e-4));
    CHECK((1.0 + 0.5 * a[0]) / (1.0 - 0.5 * a[0]) == doctest::Approx(52932.0 / 17085.0).epsilon(1e-12));
}

TEST_CASE("closed form degenerate cases") {
    // constant hazard c in every cell
    const auto tri = generate(4, 0.5, levels(4), [](int, int) { return 0.4; });
    for (double a : fit_age_closed_form(empirical_hazard(tri, 0.5), exposure(tri, 0.5))) {
        CHECK(a == doctest::Approx(0.4).epsilon(1e-12));
    }
    const RunOffTriangle single({{10.0, 4.0, 1.0}, {3.0, 2.0}, {5.0}});
    // only one cohort reaches age 2
    const auto h = empirical_hazard(single, 0.5);
    const auto a = fit_age_closed_form(h, exposure(single, 0.5));
    CHECK(a[1] == doctest::Approx(h.at(0, 2)).epsilon(1e-14));
}

TEST_CASE("IRLS age effects equal the closed form") {
    auto check = [](const RunOffTriangle& tri) {
        const auto fit = fit_hazard({Structure::A, 0.5, Strictness::Strict}, tri);
        const auto closed = fit_age_closed_form(empirical_hazard(tri, 0.5), exposure(tri, 0.5));
        CHECK(fit.converged);
        for (std::size_t j = 0; j < closed.size(); ++j) CHECK(rel_diff(std::exp(fit.age[j]), closed[j]) < 1e-8);
    };
    check(autobi());
    for (unsigned seed = 100; seed < 120; ++seed) check(random_triangle(seed, random_m(seed, 2, 12)));
}

TEST_CASE("structure A is age only") {
    const auto fit = fit_hazard({Structure::A, 0.5, Strictness::Strict}, autobi());
    CHECK_FALSE(fit.period.has_value());
    CHECK_FALSE(fit.cohort.has_value());
    CHECK(fit.n_params == 7);
    const auto fh = fitted_hazard(fit);
    for (int j = 1; j <= 7; ++j) {
        for (int k = 1; k <= 7 - j; ++k) CHECK(fh.at(k, j) == fh.at(0, j));
    }
}

TEST_CASE("noiseless age hazard is reproduced") {
    const std::vector<double> a{0.9, 0.5, 0.3, 0.2, 0.1};
    const auto tri = generate(5, 0.5, levels(5), [&](int, int j) { return a[j - 1]; });
    const auto fit = fit_hazard({Structure::A, 0.5, Strictness::Strict}, tri);
    const auto emp = empirical_hazard(tri, 0.5);
    const auto fh = fitted_hazard(fit);
    for (int k = 0; k < 5; ++k) {
        for (int j = 1; j <= 5 - k; ++j) CHECK(fh.at(k, j) == doctest::Approx(emp.at(k, j)).epsilon(1e-9));
    }
    CHECK(fit.deviance < 1e-8);
}

TEST_CASE("noiseless AC recovers its effects") {
    const int m = 6;
    const std::vector<double> a{-0.2, -0.8, -1.3, -1.9, -2.4, -3.0};
    const std::vector<double> g{0.0, 0.1, -0.05, 0.2, 0.15, 0.3};
    const auto tri = generate(m, 0.5, levels(m), [&](int k, int j) { return std::exp(a[j - 1] + g[k]); });
    const auto fit = fit_hazard({Structure::AC, 0.5, Strictness::Strict}, tri);
    CHECK(fit.deviance < 1e-8);
    for (int j = 0; j < m; ++j) CHECK(fit.age[j] == doctest::Approx(a[j]).epsilon(1e-6));
    for (int k = 0; k < m; ++k) CHECK((*fit.cohort)[k] == doctest::Approx(g[k]).scale(1.0).epsilon(1e-6));
    CHECK(constraint_residual(fit) < 1e-10);
}

TEST_CASE("noiseless APC is reproduced up to identification") {
    const int m = 7;
    const std::vector<double> a{-0.2, -0.9, -1.4, -1.8, -2.3, -2.9, -3.2};
    const std::vector<double> c{0.0, 0.05, 0.12, 0.1, 0.2, 0.22, 0.3};
    const std::vector<double> g{0.1, -0.1, 0.2, 0.0, 0.15, -0.05, 0.05};
    auto mu = [&](int k, int j) { return std::exp(a[j - 1] + c[k + j - 1] + g[k]); };
    const auto tri = generate(m, 0.5, levels(m), mu);
    const auto fit = fit_hazard({Structure::APC, 0.5, Strictness::Strict}, tri);
    CHECK(fit.deviance < 1e-8);
    CHECK(constraint_residual(fit) < 1e-10);
    const auto fh = fitted_hazard(fit);
    for (int k = 0; k < m; ++k) {
        for (int j = 1; j <= m - k; ++j) CHECK(fh.at(k, j) == doctest::Approx(mu(k, j)).epsilon(1e-7));
    }
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 0; k < m; ++k) {
        s0 += (*fit.cohort)[k];
        s1 += k * (*fit.cohort)[k];
    }
    CHECK(std::abs(s0) < 1e-10);
    CHECK(std::abs(s1) < 1e-10);
    CHECK((*fit.period)[0] == 0.0);
}

TEST_CASE("minimum triangle size per structure") {
    auto code = [](Structure s, int m) {
        try {
            fit_hazard({s, 0.5, Strictness::Strict}, random_triangle(7, m));
        } catch (const ReserveError& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code(Structure::A, 0) == ErrorCode::InsufficientData);
    CHECK(code(Structure::AC, 1) == ErrorCode::InsufficientData);
    CHECK(code(Structure::AP, 1) == ErrorCode::InsufficientData);
    CHECK(code(Structure::APC, 2) == ErrorCode::InsufficientData);
    CHECK(code(Structure::A, 1) == ErrorCode::Io);
    CHECK(code(Structure::APC, 3) == ErrorCode::Io);
}

TEST_CASE("deviance decreases with richer structures") {
    auto check = [](const RunOffTriangle& tri) {
        const double a = fit_hazard({Structure::A}, tri).deviance;
        const double ac = fit_hazard({Structure::AC}, tri).deviance;
        const double ap = fit_hazard({Structure::AP}, tri).deviance;
        const double apc = fit_hazard({Structure::APC}, tri).deviance;
        const double slack = 1e-9 * a;
        CHECK(ac <= a + slack);
        CHECK(ap <= a + slack);
        CHECK(apc <= ac + slack);
        CHECK(apc <= ap + slack);
    };
    check(autobi());
    for (unsigned seed = 200; seed < 210; ++seed) check(random_triangle(seed, random_m(seed, 3, 10)));
}

TEST_CASE("deviance trace is monotone") {
    const auto fit = fit_hazard({Structure::APC}, autobi());
    for (std::size_t i = 1; i < fit.deviance_trace.size(); ++i) {
        CHECK(fit.deviance_trace[i] <= fit.deviance_trace[i - 1] * (1.0 + 1e-12));
    }
}

TEST_CASE("structure names") {
    for (Structure s : {Structure::A, Structure::AC, Structure::AP, Structure::APC}) {
        CHECK(parse_structure(to_string(s)) == s);
    }
    CHECK_FALSE(parse_structure("xyz").has_value());
}
