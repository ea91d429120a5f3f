#include <algorithm>
#include <cmath>

#include "blockbeta/asymptotics.hpp"
#include "blockbeta/hull.hpp"
#include "blockbeta/sampler.hpp"

namespace blockbeta {

namespace {

struct Stat {
    double sum = 0.0, sq = 0.0;
    int n = 0;
    void add(double x) {
        sum += x;
        sq += x * x;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, (sq - n * m * m) / (n - 1)) / n);
    }
};

}  // namespace

Report efron_check(const BlockStructure& bs, int n, const EfronOptions& opt, RngStream& rng) {
    const int d = bs.total();
    if (n < d + 2) throw std::invalid_argument("efron_check: need n >= d + 2");
    if (opt.reps < 2 || opt.queries_per_hull < 1) throw std::invalid_argument("efron_check: need reps >= 2, queries >= 1");
    const BetaParams uniform = BetaParams::uniform(bs.blocks());
    const double body = body_volume(bs);

    auto hull_of = [&](int count) {
        for (;;) {
            try {
                return convex_hull(PointCloud(d, sample_block_beta_cloud(bs, uniform, count, rng)));
            } catch (const DegenerateInput&) {
                // probability-zero event; draw again
            }
        }
    };

    Stat vertices, missed_mc, missed_exact;
    std::vector<double> q(d);
    for (int r = 0; r < opt.reps; ++r) {
        vertices.add(static_cast<double>(hull_of(n).f_vector[0]));
        const HullResult smaller = hull_of(n - 1);
        int hits = 0;
        for (int k = 0; k < opt.queries_per_hull; ++k) {
            sample_block_beta(bs, uniform, rng, q);
            hits += contains_point(smaller, q);
        }
        missed_mc.add(n * (1.0 - static_cast<double>(hits) / opt.queries_per_hull));
        missed_exact.add(n * (1.0 - smaller.volume / body));
    }

    Report rep;
    rep.title = "efron " + bs.str() + " n=" + std::to_string(n) + " reps=" + std::to_string(opt.reps);
    auto overlap = [&](const char* name, const Stat& other, bool counted) {
        const double gap = std::abs(vertices.mean() - other.mean());
        const double width = 3.0 * (vertices.se() + other.se());
        const double z = gap / std::hypot(vertices.se(), other.se());
        if (counted)
            rep.add(name, vertices.mean(), other.mean(), z, gap <= width);
        else
            rep.info(name, vertices.mean(), other.mean(), z, gap <= width);
    };
    overlap("f0 vs hit-or-miss missed volume", missed_mc, true);
    overlap("f0 vs exact missed volume", missed_exact, false);
    return rep;
}

}  // namespace blockbeta
