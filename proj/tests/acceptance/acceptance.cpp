// Acceptance suite: one PASS/FAIL line per criterion. Every criterion uses
// root seed = its own number.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "blockbeta/asymptotics.hpp"
#include "blockbeta/experiment.hpp"
#include "blockbeta/hull.hpp"
#include "blockbeta/metacube.hpp"
#include "blockbeta/sampler.hpp"

using namespace blockbeta;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
};

// Runtime limits in seconds.
constexpr double kLimit1 = 120, kLimit2 = 60, kLimit3 = 60, kLimit4 = 600, kLimit5 = 120, kLimit6 = 3600,
                 kLimit7 = 900, kLimit8 = 600, kLimit9 = 300;

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

void show(const Report& r) { std::cout << r.str(); }

Outcome criterion1() {
    RngStream rng(1, 0);
    HullCheckOptions opt;
    opt.runs = 1000;
    opt.min_dim = 2;
    opt.max_dim = 6;
    opt.max_points = 200;
    const Report r = verify_hull_properties(opt, rng);
    show(r);
    return {r.passed(), std::to_string(r.failures()) + " failed property lines over 1000 hulls"};
}

Outcome criterion2() {
    RngStream rng(2, 0);
    const Report r = verify_hull_oracle(200, 4, 15, rng);
    show(r);
    return {r.passed(), "facet-set agreement " + fmt("%.3f", r.checks.back().value)};
}

Outcome criterion3() {
    RngStream rng(3, 0);
    SamplerCheckOptions opt;
    opt.draws = 100000;
    opt.level = 0.01;
    const Report r = verify_sampler(opt, rng);
    show(r);
    double min_p = 1.0;
    for (const auto& c : r.checks)
        if (c.counted) min_p = std::min(min_p, c.reference);
    return {r.passed(), std::to_string(r.failures()) + " of 13 tests below p=0.01, min p " + fmt("%.4g", min_p)};
}

Outcome criterion4() {
    RngStream rng(4, 0);
    constexpr int kTrials = 50;
    constexpr std::size_t kSamples = 1000000;
    constexpr double kMinFraction = 0.98;
    int good = 0, total = 0;
    for (const std::vector<int>& dims : std::vector<std::vector<int>>{{2, 1}, {2, 2}, {3, 1}, {1, 1, 1}})
        for (double beta : {0.0, 0.5}) {
            const Report r = verify_reduction(BlockStructure(dims), BetaParams(std::vector<double>(dims.size(), beta)),
                                              kTrials, kSamples, rng);
            for (const auto& c : r.checks)
                if (c.name.rfind("trial", 0) == 0) {
                    ++total;
                    good += std::abs(c.statistic) <= 3.0;
                }
            std::cout << r.title << ": " << r.checks.back().value << " within 3 se\n";
        }
    const double frac = static_cast<double>(good) / total;
    return {frac >= kMinFraction, std::to_string(good) + "/" + std::to_string(total) + " checks within 3 se (need >= 98%)"};
}

Outcome criterion5() {
    const Report r = verify_aw(1e6);
    show(r);
    std::string ratios;
    for (const auto& c : r.checks)
        if (c.name.rfind("ratio", 0) == 0) ratios += (ratios.empty() ? "" : ", ") + fmt("%.4f", c.value);
    return {r.passed(), "ratios " + ratios};
}

struct Container {
    std::vector<int> dims;
    double target;
    double tol;
};

RunRecord run_container(const std::vector<int>& dims, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.block_dims = dims;
    cfg.betas.assign(dims.size(), "0");
    cfg.n_grid = default_n_grid();
    cfg.reps_per_n = 10;
    cfg.root_seed = seed;
    cfg.workers = 4;
    return simulate(cfg);
}

std::string dims_str(const std::vector<int>& d) { return BlockStructure(d).str(); }

Outcome rate_table(const std::vector<Container>& containers, std::uint64_t seed, std::vector<double>* last_means) {
    Outcome out;
    for (const auto& c : containers) {
        const RunRecord rec = run_container(c.dims, seed);
        const FitSummary fit = fit_record(rec);
        const double e = fit.f0.fixed.exponent_hat;
        bool ok = std::abs(e - c.target) <= c.tol;
        std::string extra;
        if (fit.log_power == 3) {
            // cube: the (ln n)^3 model coefficient must also be positive
            ok = ok && fit.f0.fixed.scale_coeff > 0.0;
            extra = " A=" + fmt("%.4g", fit.f0.fixed.scale_coeff);
        }
        std::cout << "  " << dims_str(c.dims) << " log power " << fit.log_power << ": exponent " << fmt("%.4f", e)
                  << " +- " << fmt("%.4f", fit.f0.fixed.exponent_se) << " target " << fmt("%.4f", c.target) << " +- "
                  << c.tol << extra << (ok ? "  ok" : "  MISS") << "   [free: " << fit.f0.free.str() << "]\n";
        out.pass = out.pass && ok;
        out.summary += dims_str(c.dims) + "->" + fmt("%.3f", e) + (ok ? " " : "(miss) ");
        if (last_means) last_means->push_back(rec.aggregates.back().f_mean[0]);
    }
    return out;
}

Outcome criterion6() {
    const std::vector<Container> containers = {
        {{4}, 0.6, 0.06}, {{3, 1}, 0.5, 0.06}, {{2, 2}, 1.0 / 3.0, 0.08}, {{2, 1, 1}, 1.0 / 3.0, 0.06}, {{1, 1, 1, 1}, 0.0, 0.05},
    };
    std::vector<double> means;
    Outcome out = rate_table(containers, 6, &means);
    bool ordered = true;
    for (std::size_t i = 1; i < means.size(); ++i) ordered = ordered && means[i] < means[i - 1];
    std::cout << "  f_0 means at n=1e5:";
    for (double m : means) std::cout << ' ' << m;
    std::cout << (ordered ? "  strictly decreasing\n" : "  NOT ordered\n");
    out.pass = out.pass && ordered;
    out.summary += ordered ? "| ordering ok" : "| ordering broken";
    return out;
}

Outcome criterion7() {
    const std::vector<Container> containers = {
        {{2}, 1.0 / 3.0, 0.05}, {{3}, 0.5, 0.05}, {{2, 1}, 1.0 / 3.0, 0.05}, {{1, 1}, 0.0, 0.05}, {{1, 1, 1}, 0.0, 0.05},
    };
    return rate_table(containers, 7, nullptr);
}

Outcome criterion8() {
    RngStream rng(8, 0);
    EfronOptions opt;
    opt.reps = 200;
    opt.queries_per_hull = 1000;
    Outcome out;
    for (int n : {100, 1000}) {
        const Report r = efron_check(BlockStructure({2, 1}), n, opt, rng);
        show(r);
        out.pass = out.pass && r.passed();
        out.summary += "n=" + std::to_string(n) + (r.passed() ? " overlap " : " NO overlap ");
    }
    return out;
}

Outcome criterion9() {
    RngStream rng(9, 0);
    BoundsGrid grid;
    grid.slope_tol = 0.05;
    grid.spread_tol = 1e3;
    const std::vector<std::vector<double>> configs = {
        {-0.5}, {0.0}, {0.5}, {2.0}, {0.0, 0.0}, {0.5, 0.5}, {1.0, 2.0}, {0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {0.0, 1.0, 2.0},
    };
    Outcome out;
    double worst_slope = 0.0, worst_spread = 0.0;
    std::size_t failures = 0;
    for (const auto& b : configs) {
        const Report r = verify_bounds(static_cast<int>(b.size()), b, grid, rng);
        failures += r.failures();
        for (const auto& c : r.checks) {
            if (c.name.find("slope") != std::string::npos) worst_slope = std::max(worst_slope, std::abs(c.statistic));
            if (c.name.find("spread") != std::string::npos) worst_spread = std::max(worst_spread, c.statistic);
        }
        std::cout << r.title << ": " << r.failures() << " failed of " << r.checks.size() << "\n";
        if (!r.passed()) show(r);
    }
    out.pass = failures == 0;
    out.summary = std::to_string(failures) + " failed lines, worst |slope| " + fmt("%.4f", worst_slope) +
                  ", worst spread " + fmt("%.3g", worst_spread);
    return out;
}

Outcome criterion10() {
    ExperimentConfig cfg;
    cfg.block_dims = {2, 1, 1};
    cfg.betas = {"0", "1/2", "2"};
    cfg.n_grid = {20, 50, 120, 300};
    cfg.reps_per_n = 3;
    cfg.root_seed = 10;
    cfg.record_volume_deficit = true;
    std::string csv[3];
    const int workers[3] = {1, 1, 4};
    for (int k = 0; k < 3; ++k) {
        cfg.workers = workers[k];
        std::ostringstream os;
        write_csv(os, cfg, simulate(cfg).samples);
        csv[k] = os.str();
    }
    const bool same = csv[0] == csv[1] && csv[0] == csv[2];
    return {same, std::to_string(csv[0].size()) + " CSV bytes, runs with workers 1,1,4 " +
                      (same ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<std::function<Outcome()>, double>> criteria = {
        {1, {criterion1, kLimit1}}, {2, {criterion2, kLimit2}}, {3, {criterion3, kLimit3}},
        {4, {criterion4, kLimit4}}, {5, {criterion5, kLimit5}}, {6, {criterion6, kLimit6}},
        {7, {criterion7, kLimit7}}, {8, {criterion8, kLimit8}}, {9, {criterion9, kLimit9}},
        {10, {criterion10, 0}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    if (selected.empty())
        for (const auto& [k, _] : criteria) selected.push_back(k);

    bool all = true;
    std::vector<std::string> lines;
    for (int k : selected) {
        const auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << k << "\n";
            return 2;
        }
        std::cout << "== criterion " << k << "\n";
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->second.first();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double limit = it->second.second;
        const bool in_time = limit <= 0 || secs <= limit;
        const bool pass = o.pass && in_time;
        std::string line = "criterion " + std::to_string(k) + ": " + (pass ? "PASS" : "FAIL") + "  " + o.summary +
                           " [" + fmt("%.1f", secs) + " s" + (limit > 0 ? " / limit " + fmt("%.0f", limit) + " s" : "") +
                           (in_time ? "" : ", TOO SLOW") + "]";
        std::cout << line << "\n";
        lines.push_back(line);
        all = all && pass;
    }
    std::cout << "== summary\n";
    for (const auto& l : lines) std::cout << l << "\n";
    return all ? 0 : 1;
}
