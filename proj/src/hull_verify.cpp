#include <algorithm>
#include <cstdio>
#include <sstream>

#include "blockbeta/hull.hpp"
#include "blockbeta/sampler.hpp"

namespace blockbeta {

namespace {

int uniform_int(RngStream& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

// random composition of d into blocks, with a beta per block
std::pair<BlockStructure, BetaParams> random_container(int d, RngStream& rng) {
    static constexpr double kBetas[] = {-0.5, 0.0, 0.5, 2.0};
    std::vector<int> dims;
    int left = d;
    while (left > 0) {
        const int k = uniform_int(rng, 1, left);
        dims.push_back(k);
        left -= k;
    }
    std::vector<double> betas;
    for (std::size_t i = 0; i < dims.size(); ++i) betas.push_back(kBetas[uniform_int(rng, 0, 3)]);
    return {BlockStructure(dims), BetaParams(betas)};
}

std::string f_str(const std::vector<std::int64_t>& f) {
    std::ostringstream os;
    os << '(';
    for (std::size_t j = 0; j < f.size(); ++j) os << (j ? "," : "") << f[j];
    os << ')';
    return os.str();
}

}  // namespace

Report verify_hull_properties(const HullCheckOptions& opt, RngStream& rng) {
    if (opt.min_dim < 2 || opt.max_dim > 8 || opt.min_dim > opt.max_dim || opt.runs < 1)
        throw std::invalid_argument("verify_hull_properties: bad options");
    Report rep;
    rep.title = "hull properties runs=" + std::to_string(opt.runs);
    int euler = 0, ridges = 0, hinman = 0, counts = 0, membership = 0, done = 0;
    for (int run = 0; run < opt.runs; ++run) {
        const int d = uniform_int(rng, opt.min_dim, opt.max_dim);
        const int n = uniform_int(rng, d + 2, std::max(d + 2, opt.max_points));
        const auto [bs, bp] = random_container(d, rng);
        HullResult hull;
        try {
            hull = convex_hull(PointCloud(d, sample_block_beta_cloud(bs, bp, n, rng)));
        } catch (const DegenerateInput&) {
            --run;
            continue;
        }
        ++done;
        const bool e = euler_relation_holds(hull.f_vector, d);
        const bool r = ridges_regular(hull);
        const bool h = hinman_holds(hull.f_vector, d);
        const bool c = hull.f_vector[0] == static_cast<std::int64_t>(hull.vertex_ids.size()) &&
                       hull.f_vector[d - 1] == static_cast<std::int64_t>(hull.facets.size());
        bool m = true;
        for (std::size_t i = 0; i < hull.points.count() && m; ++i) m = contains_point(hull, hull.points.point(i));
        euler += e;
        ridges += r;
        hinman += h;
        counts += c;
        membership += m;
        if (!(e && r && h && c && m)) {
            char name[64];
            std::snprintf(name, sizeof name, "run %d", run);
            rep.info(name, 0, 0, 0, false,
                     bs.str() + " beta=" + bp.str() + " n=" + std::to_string(n) + " f=" + f_str(hull.f_vector));
        }
    }
    auto frac = [&](const char* name, int good) {
        rep.add(name, static_cast<double>(good) / done, 1.0, done - good, good == done);
    };
    frac("Euler relation", euler);
    frac("ridge regularity", ridges);
    frac("Hinman inequality", hinman);
    frac("f_0 and f_{d-1} match vertex and facet lists", counts);
    frac("input points inside hull", membership);
    return rep;
}

Report verify_hull_oracle(int instances, int max_dim, int max_points, RngStream& rng) {
    if (instances < 1 || max_dim < 2 || max_dim > 8 || max_points > 25 || max_points < max_dim + 1)
        throw std::invalid_argument("verify_hull_oracle: bad options");
    Report rep;
    rep.title = "hull oracle instances=" + std::to_string(instances);
    int agree = 0;
    for (int t = 0; t < instances; ++t) {
        const int d = uniform_int(rng, 2, max_dim);
        const int n = uniform_int(rng, d + 1, max_points);
        const auto [bs, bp] = random_container(d, rng);
        const PointCloud cloud(d, sample_block_beta_cloud(bs, bp, n, rng));
        std::set<std::vector<int>> fast;
        try {
            fast = facet_set(convex_hull(cloud));
        } catch (const DegenerateInput&) {
            --t;
            continue;
        }
        const bool same = fast == brute_force_facets(cloud);
        agree += same;
        if (!same) {
            char name[64];
            std::snprintf(name, sizeof name, "instance %d", t);
            rep.info(name, 0, 0, 0, false, "d=" + std::to_string(d) + " n=" + std::to_string(n));
        }
    }
    rep.add("facet sets equal brute force", static_cast<double>(agree) / instances, 1.0, instances - agree,
            agree == instances);
    return rep;
}

}  // namespace blockbeta
