#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "blockbeta/predicates.hpp"
#include "blockbeta/rng.hpp"

using namespace blockbeta;

namespace {

int orient(const std::vector<std::vector<double>>& pts, int d, bool exact = false) {
    std::vector<const double*> ptr;
    for (const auto& p : pts) ptr.push_back(p.data());
    return exact ? orientation_exact(ptr, d) : orientation(ptr, d);
}

}  // namespace

TEST_CASE("planar orientation signs") {
    CHECK(orient({{0, 0}, {1, 0}, {0, 1}}, 2) != 0);
    CHECK(orient({{0, 0}, {1, 0}, {0, 1}}, 2) == -orient({{1, 0}, {0, 0}, {0, 1}}, 2));
    CHECK(orient({{0, 0}, {1, 1}, {2, 2}}, 2) == 0);
}

TEST_CASE("exactly collinear points with awkward coordinates") {
    // x, x + e, x + 2e are collinear in exact arithmetic when every coordinate is representable
    RngStream rng(31, 0);
    for (int t = 0; t < 500; ++t) {
        const double x = rng.uniform(), y = rng.uniform();
        const double ex = std::ldexp(1.0, -30 - int(rng() % 20)), ey = std::ldexp(3.0, -30 - int(rng() % 20));
        CHECK(orient({{x, y}, {x + ex, y + ey}, {x + 2 * ex, y + 2 * ey}}, 2) == 0);
    }
}

TEST_CASE("filter agrees with the exact predicate") {
    RngStream rng(32, 0);
    for (int t = 0; t < 2000; ++t) {
        const int d = 2 + static_cast<int>(rng() % 4);
        std::vector<std::vector<double>> pts(d + 1, std::vector<double>(d));
        for (auto& p : pts)
            for (double& c : p) c = rng.uniform();
        if (t % 2) {
            // last point nearly on the hyperplane through an affine combination of the others
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int i = 0; i < d; ++i) s += pts[i][j] / d;
                pts[d][j] = s + (rng.uniform() - 0.5) * 1e-15;
            }
        }
        CHECK(orient(pts, d) == orient(pts, d, true));
    }
}

TEST_CASE("orientation flips with a transposition in every dimension") {
    RngStream rng(33, 0);
    for (int d = 1; d <= 8; ++d) {
        std::vector<std::vector<double>> pts(d + 1, std::vector<double>(d));
        for (auto& p : pts)
            for (double& c : p) c = rng.uniform() * 2 - 1;
        auto swapped = pts;
        std::swap(swapped[0], swapped[1]);
        CHECK(orient(pts, d) == -orient(swapped, d));
    }
}
