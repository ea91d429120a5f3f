#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockbeta/report.hpp"
#include "blockbeta/rng.hpp"

namespace blockbeta {

class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major cloud of `count()` points in R^dim.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(int dim, std::vector<double> coords);
    PointCloud(const std::vector<std::vector<double>>& rows);

    int dim() const { return dim_; }
    std::size_t count() const { return dim_ ? coords_.size() / dim_ : 0; }
    const double* operator[](std::size_t i) const { return coords_.data() + i * dim_; }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, std::size_t(dim_)}; }
    const std::vector<double>& coords() const { return coords_; }

private:
    int dim_ = 0;
    std::vector<double> coords_;
};

struct Facet {
    std::vector<int> vertex_ids;  // exactly d indices into the input cloud, sorted
    std::vector<double> normal;   // unit, outward
    double offset = 0.0;          // normal . (any vertex)
};

struct HullResult {
    PointCloud points;
    std::vector<int> vertex_ids;  // sorted
    std::vector<Facet> facets;
    std::vector<std::int64_t> f_vector;
    double volume = 0.0;
    int duplicates_merged = 0;

    int dim() const { return points.dim(); }
};

/// Incremental convex hull in random insertion order with Quickhull-style
/// outside sets. Output is simplicial: a facet with coplanar neighbours is
/// reported as separate simplices. 1 <= d <= 8.
HullResult convex_hull(const PointCloud& points);

/// All d-subsets whose hyperplane has every other point strictly on one side.
/// Sorted vertex sets. n <= 25.
std::set<std::vector<int>> brute_force_facets(const PointCloud& points);

/// Distinct (j+1)-subsets of facet vertex sets, j = 0..d-1.
std::vector<std::int64_t> f_vector(const HullResult& hull);

/// Sum of cone volumes from the vertex centroid.
double volume(const HullResult& hull);

/// x . normal <= offset + 1e-9 for every facet.
bool contains_point(const HullResult& hull, std::span<const double> x);

/// Sum_j (-1)^j f_j == 1 - (-1)^d.
bool euler_relation_holds(const std::vector<std::int64_t>& f, int d);

/// Every (d-1)-subset of a facet lies in exactly two facets.
bool ridges_regular(const HullResult& hull);

/// rho(d, j) = (C(ceil(d/2), d-j-1) + C(floor(d/2), d-j-1)) / 2.
double hinman_rho(int d, int j);

/// f_j >= rho(d, j) f_{d-1} for every j >= floor(d/2) - 1.
bool hinman_holds(const std::vector<std::int64_t>& f, int d);

std::set<std::vector<int>> facet_set(const HullResult& hull);

/// Whitespace-separated text, one point per line; blank lines and '#' comments skipped.
PointCloud read_point_cloud(std::istream& in);
/// One facet per line as space-separated point indices.
void write_facets(std::ostream& out, const HullResult& hull);

struct HullCheckOptions {
    int runs = 1000;
    int min_dim = 2;
    int max_dim = 6;
    int max_points = 200;
};

/// Random block-beta clouds (random block split of d, betas drawn from
/// {-0.5, 0, 0.5, 2}); every hull must satisfy Euler, ridge regularity,
/// Hinman, f_0 = |vertex_ids| and contain all input points.
Report verify_hull_properties(const HullCheckOptions& opt, RngStream& rng);

/// convex_hull facet sets against brute_force_facets, d in 2..max_dim, n in d+1..max_points.
Report verify_hull_oracle(int instances, int max_dim, int max_points, RngStream& rng);

}  // namespace blockbeta
