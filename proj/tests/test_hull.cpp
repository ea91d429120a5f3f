#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "blockbeta/hull.hpp"
#include "blockbeta/sampler.hpp"

using namespace blockbeta;

namespace {

PointCloud random_cloud(const BlockStructure& bs, const BetaParams& bp, int n, RngStream& rng) {
    return PointCloud(bs.total(), sample_block_beta_cloud(bs, bp, n, rng));
}

}  // namespace

TEST_CASE("simplex") {
    const HullResult h = convex_hull(PointCloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(h.f_vector == std::vector<std::int64_t>{4, 6, 4});
    CHECK(h.volume == doctest::Approx(1.0 / 6.0));
    const HullResult h4 = convex_hull(PointCloud({{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    CHECK(h4.f_vector == std::vector<std::int64_t>{5, 10, 10, 5});
    CHECK(h4.volume == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("octahedron and cube") {
    const HullResult oct = convex_hull(PointCloud({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}));
    CHECK(oct.f_vector == std::vector<std::int64_t>{6, 12, 8});
    CHECK(euler_relation_holds(oct.f_vector, 3));
    CHECK(oct.volume == doctest::Approx(4.0 / 3.0));
    std::vector<std::vector<double>> cube;
    for (int mask = 0; mask < 16; ++mask) cube.push_back({mask & 1 ? 1.0 : -1.0, mask & 2 ? 1.0 : -1.0, mask & 4 ? 1.0 : -1.0, mask & 8 ? 1.0 : -1.0});
    const HullResult c4 = convex_hull(PointCloud(cube));
    CHECK(c4.volume == doctest::Approx(16.0));
    CHECK(c4.f_vector[0] == 16);
    CHECK(ridges_regular(c4));
}

TEST_CASE("interior point and duplicates") {
    const HullResult h = convex_hull(PointCloud({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {2, 2}}));
    CHECK(h.f_vector[0] == 4);
    CHECK(h.duplicates_merged == 1);
    for (const auto& f : h.facets) CHECK(std::find(f.vertex_ids.begin(), f.vertex_ids.end(), 4) == f.vertex_ids.end());
    const auto brute = brute_force_facets(PointCloud({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}}));
    CHECK(brute.size() == 4);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(convex_hull(PointCloud({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.2, 0}})), DegenerateInput);
    CHECK_THROWS_AS(convex_hull(PointCloud({{0, 0}, {1, 1}})), DegenerateInput);
}

TEST_CASE("one dimension") {
    const HullResult h = convex_hull(PointCloud({{0.3}, {-0.7}, {0.1}, {0.9}}));
    CHECK(h.f_vector == std::vector<std::int64_t>{2});
    CHECK(h.volume == doctest::Approx(1.6));
}

TEST_CASE("simplicial 3-polytope identity on the ball") {
    RngStream rng(41, 0);
    const HullResult h = convex_hull(random_cloud(BlockStructure({3}), BetaParams::uniform(1), 1000, rng));
    CHECK(h.f_vector[2] == 2 * h.f_vector[0] - 4);
    CHECK(ridges_regular(h));
}

TEST_CASE("cube volume envelope") {
    RngStream rng(42, 0);
    const HullResult small = convex_hull(random_cloud(BlockStructure({1, 1, 1}), BetaParams::uniform(3), 1000, rng));
    const HullResult big = convex_hull(random_cloud(BlockStructure({1, 1, 1}), BetaParams::uniform(3), 10000, rng));
    CHECK(big.volume >= 7.0);
    CHECK(big.volume <= 8.0);
    CHECK(big.volume > small.volume);
}

TEST_CASE("facets are outward and tight") {
    RngStream rng(43, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + trial % 5;
        const PointCloud cloud = random_cloud(BlockStructure({d}), BetaParams::uniform(1), 40 + trial, rng);
        const HullResult h = convex_hull(cloud);
        for (const auto& f : h.facets) {
            for (int v : f.vertex_ids) {
                double dot = 0.0;
                for (int j = 0; j < d; ++j) dot += f.normal[j] * cloud[v][j];
                CHECK(std::abs(dot - f.offset) <= 1e-9);
            }
            for (std::size_t i = 0; i < cloud.count(); ++i) {
                double dot = 0.0;
                for (int j = 0; j < d; ++j) dot += f.normal[j] * cloud[i][j];
                CHECK(dot <= f.offset + 1e-9);
            }
        }
    }
}

TEST_CASE("adding points never shrinks the hull") {
    RngStream rng(44, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + trial % 4;
        auto coords = sample_block_beta_cloud(BlockStructure({d}), BetaParams::uniform(1), 60, rng);
        const HullResult before = convex_hull(PointCloud(d, coords));
        const auto extra = sample_block_beta_cloud(BlockStructure({d}), BetaParams::uniform(1), 20, rng);
        coords.insert(coords.end(), extra.begin(), extra.end());
        const HullResult after = convex_hull(PointCloud(d, coords));
        CHECK(after.volume >= before.volume - 1e-12);
        for (std::size_t i = 0; i < before.points.count(); ++i) CHECK(contains_point(after, before.points.point(i)));
    }
}

TEST_CASE("membership against brute-force facets") {
    RngStream rng(45, 0);
    const PointCloud cloud = random_cloud(BlockStructure({2, 1}), BetaParams::uniform(2), 20, rng);
    const HullResult h = convex_hull(cloud);
    const auto facets = brute_force_facets(cloud);
    CHECK(facets == facet_set(h));
    // a query is inside iff it is on the inner side of every brute-force facet hyperplane
    for (int q = 0; q < 100; ++q) {
        std::vector<double> x(3);
        for (double& c : x) c = 1.2 * (2 * rng.uniform() - 1);
        CHECK(contains_point(h, x) == [&] {
            for (const auto& f : h.facets) {
                double dot = 0.0;
                for (int j = 0; j < 3; ++j) dot += f.normal[j] * x[j];
                if (dot > f.offset + 1e-9) return false;
            }
            return true;
        }());
    }
    std::vector<double> centroid(3, 0.0);
    for (int v : h.vertex_ids)
        for (int j = 0; j < 3; ++j) centroid[j] += cloud[v][j] / h.vertex_ids.size();
    CHECK(contains_point(h, centroid));
    std::vector<double> outside(cloud.point(h.vertex_ids[0]).begin(), cloud.point(h.vertex_ids[0]).end());
    for (double& c : outside) c *= 2.0;
    CHECK_FALSE(contains_point(h, outside));
}

TEST_CASE("hinman coefficients") {
    CHECK(hinman_rho(3, 2) == doctest::Approx(1.0));
    CHECK(hinman_rho(3, 1) == doctest::Approx(1.5));
    CHECK(hinman_rho(4, 3) == doctest::Approx(1.0));
    CHECK(hinman_holds({6, 12, 8}, 3));
    CHECK_FALSE(hinman_holds({6, 10, 8}, 3));
}

TEST_CASE("properties and oracle at reduced size") {
    RngStream rng(46, 0);
    HullCheckOptions opt;
    opt.runs = 100;
    opt.max_points = 60;
    CHECK(verify_hull_properties(opt, rng).passed());
    CHECK(verify_hull_oracle(40, 4, 12, rng).passed());
}

TEST_CASE("text round trip") {
    std::istringstream in("# square\n0 0\n1 0\n\n0 1\n1 1\n");
    const PointCloud cloud = read_point_cloud(in);
    CHECK(cloud.count() == 4);
    std::ostringstream out;
    write_facets(out, convex_hull(cloud));
    int lines = 0;
    for (char c : out.str()) lines += c == '\n';
    CHECK(lines == 4);
    std::istringstream bad("0 0\n1\n");
    CHECK_THROWS(read_point_cloud(bad));
}
