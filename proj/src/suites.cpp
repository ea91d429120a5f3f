#include "blockbeta/suites.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blockbeta/asymptotics.hpp"
#include "blockbeta/hull.hpp"
#include "blockbeta/metacube.hpp"
#include "blockbeta/sampler.hpp"

namespace blockbeta {

namespace {

std::size_t scaled(double base, double scale, double floor_value) {
    return static_cast<std::size_t>(std::max(floor_value, std::round(base * scale)));
}

std::vector<Report> sampler_suite(const SuiteOptions& o, RngStream rng) {
    return {verify_sampler({scaled(1e5, o.scale, 1000), 0.01}, rng)};
}

std::vector<Report> hull_suite(const SuiteOptions& o, RngStream rng) {
    HullCheckOptions h;
    h.runs = static_cast<int>(scaled(1000, o.scale, 10));
    return {verify_hull_properties(h, rng), verify_hull_oracle(static_cast<int>(scaled(200, o.scale, 10)), 4, 15, rng)};
}

std::vector<Report> reduction_suite(const SuiteOptions& o, RngStream rng) {
    std::vector<Report> out;
    for (const std::vector<int>& dims : std::vector<std::vector<int>>{{2, 1}, {2, 2}, {3, 1}, {1, 1, 1}})
        for (double beta : {0.0, 0.5}) {
            const BlockStructure bs(dims);
            const BetaParams bp(std::vector<double>(dims.size(), beta));
            out.push_back(verify_reduction(bs, bp, 50, scaled(1e6, o.scale, 1e4), rng));
        }
    return out;
}

std::vector<Report> polyspherical_suite(const SuiteOptions& o, RngStream rng) {
    std::vector<Report> out;
    for (const std::vector<int>& dims : std::vector<std::vector<int>>{{2, 1}, {2, 3}, {1, 1, 2}})
        for (auto fn : {SphereTestFunction::constant, SphereTestFunction::first_block_sq_norm,
                        SphereTestFunction::exp_first_coord})
            out.push_back(verify_polyspherical(BlockStructure(dims), fn, scaled(1e6, o.scale, 1e4), rng));
    return out;
}

std::vector<Report> bp2d_suite(const SuiteOptions& o, RngStream rng) {
    std::vector<Report> out;
    for (auto fn : {PairTestFunction::one, PairTestFunction::both_in_disk, PairTestFunction::gaussian_distance})
        out.push_back(verify_blaschke_petkantschin_2d(fn, scaled(1e6, o.scale, 1e4), rng));
    return out;
}

std::vector<Report> bounds_suite(const SuiteOptions&, RngStream rng) {
    const std::vector<std::vector<double>> configs = {
        {-0.5}, {0.0}, {0.5}, {2.0}, {0.0, 0.0}, {0.5, 0.5}, {1.0, 2.0}, {0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {0.0, 1.0, 2.0},
    };
    std::vector<Report> out;
    for (const auto& betas : configs)
        out.push_back(verify_bounds(static_cast<int>(betas.size()), betas, BoundsGrid{}, rng));
    return out;
}

std::vector<Report> efron_suite(const SuiteOptions& o, RngStream rng) {
    EfronOptions e;
    e.reps = static_cast<int>(scaled(200, o.scale, 10));
    std::vector<Report> out;
    for (int n : {100, 1000}) out.push_back(efron_check(BlockStructure({2, 1}), n, e, rng));
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"sampler", "hull",   "reduction", "aw",
                                                   "polyspherical", "bp2d", "bounds",    "efron"};
    return names;
}

std::vector<Report> run_suite(const std::string& name, const SuiteOptions& opt) {
    if (!(opt.scale > 0.0)) throw std::invalid_argument("suite scale must be positive");
    if (name == "all") {
        std::vector<Report> out;
        for (const auto& n : suite_names()) {
            auto part = run_suite(n, opt);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    const auto& names = suite_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::invalid_argument("unknown suite '" + name + "'");
    // each suite owns its stream so that suites are reproducible on their own
    RngStream rng(opt.seed, static_cast<std::uint64_t>(it - names.begin()));
    if (name == "sampler") return sampler_suite(opt, rng);
    if (name == "hull") return hull_suite(opt, rng);
    if (name == "reduction") return reduction_suite(opt, rng);
    if (name == "aw") return {verify_aw()};
    if (name == "polyspherical") return polyspherical_suite(opt, rng);
    if (name == "bp2d") return bp2d_suite(opt, rng);
    if (name == "bounds") return bounds_suite(opt, rng);
    return efron_suite(opt, rng);
}

}  // namespace blockbeta
