#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "blockbeta/metacube.hpp"

using namespace blockbeta;

namespace {

const double kRoot2 = std::sqrt(2.0);

double cap(std::vector<double> v, double s, std::vector<double> betas) {
    return cap_content_meta(MetaCap(std::move(v), s), betas);
}
double section(std::vector<double> v, double s, std::vector<double> betas) {
    return section_content_meta(MetaCap(std::move(v), s), betas);
}

std::vector<double> unit(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    for (double& x : v) x /= std::sqrt(n);
    return v;
}

}  // namespace

TEST_CASE("incomplete beta") {
    CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(incomplete_beta(0.5, 0.5, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(incomplete_beta(2, 3, 0.5) == doctest::Approx(0.057291666666666664).epsilon(1e-12));
    CHECK_THROWS(incomplete_beta(0, 1, 0.5));
    CHECK_THROWS(incomplete_beta(1, 1, 1.5));
}

TEST_CASE("meta caps") {
    const MetaCap c({0.6, 0.8}, 1.2);
    CHECK(c.one_norm() == doctest::Approx(1.4));
    CHECK(c.s1() == doctest::Approx(0.2));
    CHECK(MetaCap({1.0}, 0.0).s1() == -1.0);
    CHECK_THROWS(MetaCap({0.6, 0.6}, 0.0));
    CHECK_THROWS(MetaCap({-0.6, 0.8}, 0.0));
}

TEST_CASE("cap content examples") {
    CHECK(cap({1.0}, 0.0, {0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cap({0.6, 0.8}, 1.2, {0.0, 0.0}) == doctest::Approx(0.2 * 0.2 / (4 * 2 * 0.48)).epsilon(1e-10));
    CHECK(cap({1 / kRoot2, 1 / kRoot2}, 0.0, {0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(cap({1.0}, 1.0 + 1e-3, {0.0}) == 0.0);
    CHECK(cap({0.6, 0.8}, -1.5, {0.5, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(cap(unit({1, 1, 1, 1, 1}), 0.0, {0, 0, 0, 0, 0}), Unsupported);
}

TEST_CASE("cap and section against independent quadrature") {
    CHECK(cap({0.6, 0.8}, 0.3, {0.5, 1.0}) == doctest::Approx(0.27137351456433284).epsilon(1e-9));
    CHECK(section({0.6, 0.8}, 0.3, {0.5, 1.0}) == doctest::Approx(0.6777224364173738).epsilon(1e-9));
    CHECK(cap(unit({1, 2, 2}), 0.2, {0.0, 0.5, 1.0}) == doctest::Approx(0.34770612904186127).epsilon(1e-9));
}

TEST_CASE("one-dimensional caps are incomplete beta functions") {
    for (double beta : {-0.5, 0.0, 0.5, 2.0})
        for (double s : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
            // z = (1 - y) / 2 maps the cap to [0, (1 - s) / 2]
            const double c = std::tgamma(beta + 1.5) / (std::sqrt(std::numbers::pi) * std::tgamma(beta + 1));
            const double reference = c * std::pow(2.0, 2 * beta + 1) * incomplete_beta(beta + 1, beta + 1, (1 - s) / 2);
            CHECK(cap({1.0}, s, {beta}) == doctest::Approx(reference).epsilon(1e-9));
        }
}

TEST_CASE("m=1 section is the density") {
    CHECK(section({1.0}, 0.5, {0.0}) == doctest::Approx(0.5));
    CHECK(section({1.0}, 0.5, {1.0}) == doctest::Approx(0.75 * 0.75));
    CHECK(section({1.0}, 1.5, {0.0}) == 0.0);
    CHECK(section({0.6, 0.8}, 1.5, {0.0, 0.0}) == 0.0);
}

TEST_CASE("complement and monotonicity") {
    RngStream rng(51, 0);
    const std::vector<std::vector<double>> beta_sets = {{0.0, 0.0}, {0.5, 2.0}, {-0.5, 0.0}, {0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}};
    for (int trial = 0; trial < 40; ++trial) {
        const auto& betas = beta_sets[trial % beta_sets.size()];
        const int m = static_cast<int>(betas.size());
        std::vector<double> v(m);
        for (double& x : v) x = 0.05 + rng.uniform();
        v = unit(v);
        const double norm1 = MetaCap(v, 0.0).one_norm();
        const double s = norm1 * (2 * rng.uniform() - 1);
        // y.v <= s is the cap of the reflected body: P(y.v >= -s) by symmetry of the law
        const double upper = cap(v, s, betas), lower = cap(v, -s, betas);
        CHECK(upper + lower == doctest::Approx(1.0).epsilon(1e-8));
        const double shifted = cap(v, s + 0.01 * norm1, betas);
        CHECK(shifted <= upper + 1e-12);
    }
}

TEST_CASE("section is minus the derivative of the cap") {
    RngStream rng(52, 0);
    for (const auto& betas : std::vector<std::vector<double>>{{0.0, 0.0}, {0.5, 1.0}, {0.0, 0.5, 1.0}, {2.0, 0.0, 0.5}}) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<double> v(betas.size());
            for (double& x : v) x = 0.1 + rng.uniform();
            v = unit(v);
            const double norm1 = MetaCap(v, 0.0).one_norm();
            const double s = norm1 * (1.8 * rng.uniform() - 0.9);
            const double h = 1e-4;
            const double fd = (cap(v, s - h, betas) - cap(v, s + h, betas)) / (2 * h);
            CHECK(section(v, s, betas) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
    // diagonal chord near the corner
    const double eps = 0.1, s = kRoot2 - eps, h = 1e-5;
    const std::vector<double> diag{1 / kRoot2, 1 / kRoot2};
    const double fd = (cap(diag, s - h, {0, 0}) - cap(diag, s + h, {0, 0})) / (2 * h);
    CHECK(section(diag, s, {0, 0}) == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("corner and interior evaluations join continuously") {
    // the corner change of variables takes over below gap min v_i
    const std::vector<double> v = unit({1, 2, 3});
    const double norm1 = MetaCap(v, 0.0).one_norm();
    for (const auto& betas : std::vector<std::vector<double>>{{0, 0, 0}, {0.5, 1, 2}}) {
        const double g = v[0];
        const double below = cap(v, norm1 - g * (1 - 1e-9), betas), above = cap(v, norm1 - g * (1 + 1e-9), betas);
        CHECK(below == doctest::Approx(above).epsilon(1e-6));
    }
}

TEST_CASE("reduction constant and betas") {
    const BlockStructure bs({2, 1, 3});
    const BetaParams bp(std::vector<double>{0.0, 0.5, 1.0});
    const auto rb = reduced_betas(bs, bp);
    CHECK(rb == std::vector<double>{0.5, 0.5, 2.0});
    CHECK(reduction_constant(bs, bp) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full-body monte carlo") {
    RngStream rng(53, 0);
    const BlockStructure bs({2, 1});
    const BetaParams bp = BetaParams::uniform(2);
    const std::vector<double> w = unit({1, 1, 1});
    const auto whole = cap_content_full_mc(bs, bp, w, -support_function(bs, w) - 0.1, 1000, rng);
    CHECK(whole.estimate == 1.0);
    const auto half = cap_content_full_mc(bs, bp, w, 0.0, 100000, rng);
    CHECK(std::abs(half.estimate - 0.5) <= 3 * half.std_error);
}

TEST_CASE("verifiers at reduced size") {
    RngStream rng(54, 0);
    CHECK(verify_reduction(BlockStructure({2, 1}), BetaParams::uniform(2), 10, 50000, rng).passed());
    CHECK(verify_reduction(BlockStructure({3}), BetaParams::uniform(1), 10, 50000, rng).passed());
    BoundsGrid grid;
    grid.directions = 3;
    CHECK(verify_bounds(2, {0.0, 0.0}, grid, rng).passed());
    CHECK(verify_bounds(1, {-0.5}, grid, rng).passed());
    const Report neg = verify_bounds(2, {-0.5, 0.0}, grid, rng);
    CHECK(neg.checks.front().name == "sections skipped");
    CHECK(verify_polyspherical(BlockStructure({1, 1}), SphereTestFunction::first_block_sq_norm, 200000, rng).passed());
    CHECK(verify_blaschke_petkantschin_2d(PairTestFunction::both_in_disk, 200000, rng).passed());
    CHECK(parse_sphere_test_function("exp_w1") == SphereTestFunction::exp_first_coord);
    CHECK_THROWS(parse_pair_test_function("nope"));
}

TEST_CASE("quadrature options validation") {
    QuadratureOptions q;
    q.abs_tol = 0;
    CHECK_THROWS(q.validate());
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
}
