#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "blockbeta/asymptotics.hpp"

using namespace blockbeta;

TEST_CASE("config validation and ordering") {
    const AwConfig cfg({1.0, 3.0, 2.0});
    CHECK(cfg.a() == std::vector<double>{3.0, 2.0, 1.0});
    CHECK(cfg.tie_index() == 3);
    CHECK(AwConfig({3.0, 2.0, 2.0}).tie_index() == 2);
    CHECK(AwConfig({1.0, 1.0}).tie_index() == 1);
    CHECK_THROWS_AS(AwConfig({0.0}), DomainError);
    CHECK_THROWS_AS(AwConfig({1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(AwConfig({1.0}, 0.0, 1.5), DomainError);
    CHECK_THROWS_AS(aw_integral_numeric(AwConfig({1, 1, 1, 1}), 100.0), Unsupported);
}

TEST_CASE("closed form for m=1") {
    for (double a : {0.5, 1.0, 2.0, 3.5})
        for (double n : {10.0, 1e3, 1e6}) {
            const double exact = std::exp(std::lgamma(a + 1) + std::lgamma(n + 1) - std::lgamma(a + n + 2));
            CHECK(aw_integral_numeric(AwConfig({a}), n) == doctest::Approx(exact).epsilon(1e-10));
        }
}

TEST_CASE("two-dimensional value against independent quadrature") {
    CHECK(aw_integral_numeric(AwConfig({2.0, 1.0}), 1000.0) == doctest::Approx(9.9501893521e-07).epsilon(1e-9));
}

TEST_CASE("asymptotic formula") {
    CHECK(aw_asymptotic(AwConfig({2.0}), 10.0) == doctest::Approx(2.0 / 1000.0));
    CHECK(aw_asymptotic(AwConfig({5.0, 1.0}), 10.0) == doctest::Approx(1.0 / 100.0 / 4.0));
    CHECK(aw_asymptotic(AwConfig({3.0, 2.0, 2.0}), 100.0) == doctest::Approx(2.0 * std::pow(100.0, -3) * std::log(100.0)));
    CHECK(aw_asymptotic(AwConfig({1.0, 1.0}, 0.0, 0.5), 100.0) == doctest::Approx(std::pow(50.0, -2) * std::log(100.0)));
}

TEST_CASE("integral decreases in n and c") {
    for (const auto& a : std::vector<std::vector<double>>{{2.0}, {2.0, 1.0}, {1.0, 1.0}, {3.0, 2.0, 1.0}}) {
        double prev = INFINITY;
        for (double n : {10.0, 100.0, 1e3, 1e4}) {
            const double v = aw_integral_numeric(AwConfig(a), n);
            CHECK(v < prev);
            prev = v;
        }
        CHECK(aw_integral_numeric(AwConfig(a, 0.0, 0.5), 100.0) > aw_integral_numeric(AwConfig(a, 0.0, 0.9), 100.0));
    }
}

TEST_CASE("ratios approach one for distinct exponents") {
    for (const auto& cfg : {AwConfig({2.0}), AwConfig({2.0, 1.0}, 0.0, 0.5), AwConfig({3.0, 2.0, 1.0})}) {
        double prev_gap = INFINITY;
        for (double n : {1e3, 1e4, 1e5, 1e6}) {
            const double gap = std::abs(aw_integral_numeric(cfg, n) / aw_asymptotic(cfg, n) - 1.0);
            CHECK(gap <= prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap <= 0.05);
    }
}

TEST_CASE("alpha shifts the exponent") {
    CHECK(aw_integral_numeric(AwConfig({1.0}, 2.0), 50.0) == doctest::Approx(aw_integral_numeric(AwConfig({1.0}), 48.0)));
}

namespace {

std::vector<RatePoint> synthetic(double scale, double e, int p, double se_rel) {
    std::vector<RatePoint> out;
    for (double n = 100; n <= 1e5 * 1.0001; n *= std::pow(10.0, 0.25)) {
        const double mean = scale * std::pow(n, e) * std::pow(std::log(n), p);
        out.push_back({n, mean, se_rel * mean});
    }
    return out;
}

}  // namespace

TEST_CASE("rate fit recovers noiseless power laws") {
    const auto fit = fit_rate(synthetic(7.0, 0.5, 0, 0.01), 0.5, 0);
    CHECK(fit.fixed.exponent_hat == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.fixed.r_squared == doctest::Approx(1.0));
    CHECK(std::exp(fit.fixed.log_coeff) == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(fit.fixed.scale_coeff == doctest::Approx(7.0).epsilon(1e-10));
    const auto logfit = fit_rate(synthetic(3.0, 1.0 / 3.0, 1, 0.0), 1.0 / 3.0, 1);
    CHECK(std::abs(logfit.fixed.exponent_hat - 1.0 / 3.0) <= 1e-10);
    CHECK_FALSE(logfit.fixed.weighted);
    CHECK(std::abs(logfit.free.log_power - 1.0) <= 1e-8);
    CHECK(std::abs(logfit.free.exponent_hat - 1.0 / 3.0) <= 1e-8);
}

TEST_CASE("rate fit recovers random exact models") {
    RngStream rng(61, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double e = rng.uniform();
        const int p = static_cast<int>(rng() % 4);
        const double scale = 0.1 + 10 * rng.uniform();
        const auto fit = fit_rate(synthetic(scale, e, p, 0.02), e, p);
        CHECK(std::abs(fit.fixed.exponent_hat - e) <= 1e-10);
        CHECK(fit.fixed.r_squared >= 0.0);
        CHECK(fit.fixed.r_squared <= 1.0);
    }
}

TEST_CASE("rate fit input guards") {
    std::vector<RatePoint> few = {{100, 1, 0.1}, {200, 2, 0.1}, {400, 3, 0.1}, {800, 4, 0.1}};
    CHECK_THROWS_AS(fit_rate(few, 0.5, 0), InsufficientData);
    std::vector<RatePoint> narrow;
    for (int i = 0; i < 6; ++i) narrow.push_back({100.0 + 100 * i, 1.0 + i, 0.1});
    CHECK_THROWS_AS(fit_rate(narrow, 0.5, 0), InsufficientData);
    CHECK_THROWS(fit_rate({{1, -1, 0}, {2, 1, 0}, {3, 1, 0}, {4, 1, 0}, {5, 1, 0}}, 0.5, 0));
}

TEST_CASE("efron identity for the square") {
    RngStream rng(62, 0);
    EfronOptions opt;
    opt.reps = 100;
    opt.queries_per_hull = 500;
    const Report r = efron_check(BlockStructure({1, 1}), 20, opt, rng);
    CHECK(r.passed());
    CHECK_THROWS(efron_check(BlockStructure({1, 1}), 3, opt, rng));
}
