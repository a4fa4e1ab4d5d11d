#include <doctest.h>

#include <cmath>
#include <random>

#include "reslab/error.hpp"
#include "reslab/pipeline.hpp"
#include "reslab/reserving.hpp"
#include "support.hpp"

using namespace reslab;
using namespace reslab::testing;

TEST_CASE("hazard to factor") {
    CHECK(hazard_to_factor(3494.0 / 3651.0, 0.5) == doctest::Approx(5398.0 / 1904.0).epsilon(1e-12));
    CHECK(hazard_to_factor(3494.0 / 3651.0, 0.5) == doctest::Approx(2.83508).epsilon(1e-5));
    CHECK(hazard_to_factor(0.0, 0.5) == 1.0);
    CHECK(hazard_to_factor(2.0 / 3.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(hazard_to_factor(2.0, 0.5), ReserveError);
    CHECK(hazard_to_factor(5.0, 0.0) == doctest::Approx(6.0));
}

TEST_CASE("factor to hazard") {
    CHECK(factor_to_hazard(1.0, 0.5) == 0.0);
    CHECK(factor_to_hazard(2.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(factor_to_hazard(0.0, 0.5), ReserveError);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double eta = u(rng);
        const double mu = u(rng) * (1.0 - 1e-6) / std::max(eta, 1e-3);
        CHECK(std::abs(factor_to_hazard(hazard_to_factor(mu, eta), eta) - mu) <= 1e-12 * std::max(1.0, mu));
    }
}

TEST_CASE("chain ladder factors") {
    const auto tri = autobi();
    const auto f = chain_ladder_factors(tri);
    REQUIRE(f.size() == 7);
    CHECK(f[0] == doctest::Approx(52932.0 / 17085.0).epsilon(1e-14));
    CHECK(f[0] == doctest::Approx(3.0982).epsilon(1e-4));
    CHECK(f[6] == doctest::Approx(10256.0 / 10199.0).epsilon(1e-14));

    // proportional rows share one pattern
    const std::vector<double> pattern{100.0, 180.0, 216.0, 226.8};
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < 4; ++k) {
        std::vector<double> r;
        for (int j = 0; j < 4 - k; ++j) r.push_back(pattern[j] * (1.0 + 0.5 * k));
        rows.push_back(r);
    }
    const auto g = chain_ladder_factors(from_cumulative_rows(rows));
    CHECK(g[0] == doctest::Approx(1.8));
    CHECK(g[1] == doctest::Approx(1.2));
    CHECK(g[2] == doctest::Approx(1.05));
}

TEST_CASE("chain ladder reserves on AutoBI") {
    const auto r = chain_ladder_reserve(autobi());
    for (int k = 0; k <= 7; ++k) CHECK(std::abs(r.reserves[k] - autobi_reserves()[k]) <= 0.005);
    CHECK(std::abs(r.total - 31754.43) <= 0.005);
    CHECK(r.model == "cl");
}

TEST_CASE("unit factors leave nothing to reserve") {
    const auto tri = autobi();
    CellGrid ones(tri.m());
    for (int k = 0; k <= tri.m(); ++k) {
        for (int j = 0; j <= tri.m(); ++j) ones.at(k, j) = 1.0;
    }
    const auto r = complete(tri, ones, "unit");
    for (double v : r.reserves) CHECK(v == 0.0);
    CHECK(r.total == 0.0);
    for (int k = 0; k <= tri.m(); ++k) CHECK(r.ultimate(k) == tri.latest(k));
}

TEST_CASE("structure A reproduces chain ladder factors") {
    const auto tri = autobi();
    const auto fit = fit_hazard({Structure::A}, tri);
    const auto factors = predicted_factors(fit, forecast_effects(fit));
    const auto cl = chain_ladder_factors(tri);
    for (int k = 1; k <= 7; ++k) {
        for (int j = 8 - k; j <= 7; ++j) CHECK(rel_diff(factors.at(k, j), cl[j - 1]) < 1e-9);
    }
}

TEST_CASE("factors from hand-composed effects") {
    HazardFit fit;
    fit.spec = {Structure::AC, 0.5, Strictness::Strict};
    fit.m = 3;
    fit.age = {-0.1, -0.9, -2.0};
    fit.cohort = std::vector<double>{0.0, 0.2, -0.1};
    EffectForecast fc;
    fc.cohort = CohortExtension{0.35, {}, 0.0, 0.0};
    const auto f = predicted_factors(fit, fc);
    const std::vector<double> g{0.0, 0.2, -0.1, 0.35};
    for (int k = 1; k <= 3; ++k) {
        for (int j = 4 - k; j <= 3; ++j) {
            const double mu = std::exp(fit.age[j - 1] + g[k]);
            CHECK(f.at(k, j) == doctest::Approx((1.0 + 0.5 * mu) / (1.0 - 0.5 * mu)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(predicted_factors(fit, EffectForecast{}), ReserveError);
}

TEST_CASE("hazard cap") {
    HazardFit fit;
    fit.spec = {Structure::A, 0.5, Strictness::Strict};
    fit.m = 2;
    fit.age = {std::log(3.0), std::log(0.1)};
    try {
        predicted_factors(fit, {});
        FAIL("expected DegenerateHazard");
    } catch (const ReserveError& e) {
        CHECK(e.code() == ErrorCode::DegenerateHazard);
    }
    std::vector<std::string> warnings;
    const auto f = predicted_factors(fit, {}, {true}, &warnings);
    CHECK(warnings.size() == 1);
    CHECK(std::isfinite(f.at(2, 1)));
    CHECK(f.at(2, 1) > 1e5);
}

TEST_CASE("three-way equivalence on random triangles") {
    for (unsigned seed = 300; seed < 325; ++seed) {
        const auto tri = random_triangle(seed, random_m(seed, 3, 12));
        const auto oracle = oracle_chain_ladder(tri.cumulative_rows());
        const auto cl = run_model(tri, ModelKind::ChainLadder).report;
        const auto a = run_model(tri, ModelKind::A).report;
        const auto amount = run_model(tri, ModelKind::AmountAC).report;
        for (int k = 0; k <= tri.m(); ++k) {
            CHECK(std::abs(cl.reserves[k] - oracle[k]) <= 1e-8 * (1.0 + oracle[k]));
            CHECK(std::abs(a.reserves[k] - oracle[k]) <= 1e-6 * (1.0 + oracle[k]));
            CHECK(std::abs(amount.reserves[k] - oracle[k]) <= 1e-6 * (1.0 + oracle[k]));
        }
    }
}

TEST_CASE("structure A is the same for every eta") {
    const auto tri = autobi();
    PipelineOptions base;
    const double ref = run_model(tri, ModelKind::A, base).report.total;
    for (double eta : {0.0, 0.25, 0.75, 1.0}) {
        PipelineOptions o;
        o.eta = eta;
        CHECK(rel_diff(run_model(tri, ModelKind::A, o).report.total, ref) < 1e-8);
    }
}

TEST_CASE("extended structures on AutoBI") {
    // per-cohort reserves with exact-likelihood cohort extrapolation, frozen from an independent fit
    const std::vector<double> ap{0, 68.72, 358.22, 992.50, 2503.56, 4845.14, 10229.09, 18377.78};
    const auto r = run_model(autobi(), ModelKind::AP).report;
    for (int k = 0; k <= 7; ++k) CHECK(std::abs(r.reserves[k] - ap[k]) <= 0.005);
    CHECK(std::abs(r.total - 37375.01) <= 0.005);

    const std::vector<double> ac{0, 68.20, 361.77, 1009.65, 2476.54, 4968.70, 10052.81};
    const auto c = run_model(autobi(), ModelKind::AC).report;
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(c.reserves[k] - ac[k]) <= 0.005);
    CHECK(std::abs(c.total - 38125.27) <= 0.02);

    const std::vector<double> apc{0, 68.54, 359.35, 996.34, 2505.20, 5006.93, 10029.15};
    const auto p = run_model(autobi(), ModelKind::APC).report;
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(p.reserves[k] - apc[k]) <= 0.005);
    CHECK(std::abs(p.total - 38498.46) <= 0.02);
}

TEST_CASE("conditional least squares cohort extrapolation") {
    PipelineOptions o;
    o.cohort_estimator = ArimaEstimator::ConditionalSumOfSquares;
    const auto run = run_model(autobi(), ModelKind::APC, o);
    CHECK(run.forecast.cohort->params.estimator == ArimaEstimator::ConditionalSumOfSquares);
    CHECK(std::abs(run.report.total - 40506.78) <= 0.02);
}
