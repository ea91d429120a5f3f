#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdio>

#include "blockbeta/sampler.hpp"

namespace blockbeta {

double ks_pvalue(double d, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("ks_pvalue: n must be positive");
    const double rn = std::sqrt(n);
    const double lambda = (rn + 0.12 + 0.11 / rn) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

Report verify_sampler(const SamplerCheckOptions& opt, RngStream& rng) {
    if (opt.draws < 100) throw std::invalid_argument("verify_sampler: need at least 100 draws");
    Report rep;
    rep.title = "sampler draws=" + std::to_string(opt.draws) + " level=" + std::to_string(opt.level);
    const double n = static_cast<double>(opt.draws);
    char name[96];

    for (int k = 1; k <= 4; ++k)
        for (double beta : {0.0, 0.5, 2.0}) {
            const BetaBallLaw law(k, beta);
            std::vector<double> r2(opt.draws), y(k);
            for (auto& t : r2) {
                sample_beta_ball(law, rng, y);
                t = 0.0;
                for (double c : y) t += c * c;
            }
            std::sort(r2.begin(), r2.end());
            const double d = ks_statistic(r2, [&](double t) { return boost::math::ibeta(0.5 * k, beta + 1.0, t); });
            const double p = ks_pvalue(d, n);
            std::snprintf(name, sizeof name, "radial KS k=%d beta=%g", k, beta);
            rep.add(name, d, p, p, p >= opt.level, "value=D reference=p");
        }

    {
        // uniform B^4 projected to the first two coordinates has the k=2, beta=1 law
        const BetaBallLaw target(2, 1.0), uniform4(4, 0.0);
        std::vector<double> a(opt.draws), b(opt.draws), y2(2), y4(4);
        for (std::size_t i = 0; i < opt.draws; ++i) {
            sample_beta_ball(target, rng, y2);
            a[i] = y2[0] * y2[0] + y2[1] * y2[1];
            sample_beta_ball(uniform4, rng, y4);
            b[i] = y4[0] * y4[0] + y4[1] * y4[1];
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        const double d = ks_statistic_two_sample(a, b);
        const double p = ks_pvalue(d, n / 2.0);
        rep.add("projection B^4 -> R^2 two-sample KS", d, p, p, p >= opt.level, "value=D reference=p");
    }

    {
        const BlockStructure cyl({2, 1});
        const BetaParams uniform = BetaParams::uniform(2);
        std::vector<double> x(3);
        std::size_t inner = 0;
        std::vector<double> mean(3, 0.0);
        for (std::size_t i = 0; i < opt.draws; ++i) {
            sample_block_beta(cyl, uniform, rng, x);
            inner += x[0] * x[0] + x[1] * x[1] <= 0.25;
            for (int c = 0; c < 3; ++c) mean[c] += x[c] / n;
        }
        const double frac = inner / n;
        const double z = (frac - 0.25) / std::sqrt(0.25 * 0.75 / n);
        rep.info("cylinder inner fraction", frac, 0.25, z, std::abs(z) <= 3.0);
        double norm = 0.0;
        for (double m : mean) norm += m * m;
        norm = std::sqrt(norm);
        rep.info("cylinder mean norm", norm, 4.0 / std::sqrt(n), norm, norm <= 4.0 / std::sqrt(n));
    }
    return rep;
}

}  // namespace blockbeta
