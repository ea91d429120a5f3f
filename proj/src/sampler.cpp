#include "blockbeta/sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace blockbeta {

double beta_norm_const(double beta, int k) {
    if (k == 0) return 1.0;
    return std::exp(std::lgamma(0.5 * k + beta + 1.0) - 0.5 * k * std::log(std::numbers::pi) -
                    std::lgamma(beta + 1.0));
}

BetaBallLaw::BetaBallLaw(int dim, double beta) : dim_(dim), beta_(beta) {
    if (dim < 1) throw std::invalid_argument("beta ball dimension must be >= 1");
    if (!(beta > -1.0) || !std::isfinite(beta)) throw DomainError("beta ball exponent must be > -1");
    norm_const_ = beta_norm_const(beta, dim);
}

double BetaBallLaw::density_at_sq_radius(double r2) const {
    if (r2 > 1.0) return 0.0;
    if (beta_ == 0.0) return norm_const_;
    return norm_const_ * std::pow(1.0 - r2, beta_);
}

double BetaBallLaw::density(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != dim_) throw DimensionMismatch("beta ball density: wrong dimension");
    double r2 = 0.0;
    for (double c : y) r2 += c * c;
    return density_at_sq_radius(r2);
}

double sample_beta_variate(double a, double b, RngStream& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    for (;;) {
        const double x = ga(rng);
        const double y = gb(rng);
        const double s = x + y;
        // Both gammas can underflow to 0 for tiny shapes; redraw.
        if (s > 0.0) return x / s;
    }
}

void sample_direction(std::span<double> out, RngStream& rng) {
    std::normal_distribution<double> normal;
    for (;;) {
        double sq = 0.0;
        for (double& c : out) {
            c = normal(rng);
            sq += c * c;
        }
        if (sq > 0.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (double& c : out) c *= inv;
            return;
        }
    }
}

namespace {

// r * direction, pulled back by an ulp or two when rounding lands it outside the ball
void scale_into_ball(std::span<double> y, double r) {
    for (double& c : y) c *= r;
    for (;;) {
        double sq = 0.0;
        for (double c : y) sq += c * c;
        if (std::sqrt(sq) <= 1.0) return;
        for (double& c : y) c = std::nextafter(c, 0.0);
    }
}

}  // namespace

void sample_beta_ball(const BetaBallLaw& law, RngStream& rng, std::span<double> out) {
    if (static_cast<int>(out.size()) != law.dim()) throw DimensionMismatch("beta ball sample: wrong dimension");
    const double t = sample_beta_variate(0.5 * law.dim(), law.beta() + 1.0, rng);
    sample_direction(out, rng);
    scale_into_ball(out, std::sqrt(t));
}

std::vector<double> sample_beta_ball(const BetaBallLaw& law, RngStream& rng) {
    std::vector<double> y(law.dim());
    sample_beta_ball(law, rng, y);
    return y;
}

void sample_block_beta(const BlockStructure& bs, const BetaParams& bp, RngStream& rng, std::span<double> out) {
    bp.check_paired(bs);
    if (static_cast<int>(out.size()) != bs.total()) throw DimensionMismatch("block sample: wrong dimension");
    for (int i = 0; i < bs.blocks(); ++i) {
        const double t = sample_beta_variate(0.5 * bs.dim(i), bp[i] + 1.0, rng);
        auto blk = bs.block(out, i);
        sample_direction(blk, rng);
        scale_into_ball(blk, std::sqrt(t));
    }
}

BlockPoint sample_block_beta(const BlockStructure& bs, const BetaParams& bp, RngStream& rng) {
    BlockPoint p{std::vector<double>(bs.total())};
    sample_block_beta(bs, bp, rng, p.coords);
    return p;
}

std::vector<double> sample_block_beta_cloud(const BlockStructure& bs, const BetaParams& bp, std::size_t count,
                                            RngStream& rng) {
    const auto d = static_cast<std::size_t>(bs.total());
    std::vector<double> pts(count * d);
    for (std::size_t i = 0; i < count; ++i)
        sample_block_beta(bs, bp, rng, std::span<double>(pts).subspan(i * d, d));
    return pts;
}

double density(const BlockStructure& bs, const BetaParams& bp, std::span<const double> x) {
    bp.check_paired(bs);
    const auto norms = bs.block_norms(x);
    double f = 1.0;
    for (int i = 0; i < bs.blocks(); ++i) {
        const double r2 = norms[i] * norms[i];
        if (norms[i] > 1.0) return 0.0;
        f *= beta_norm_const(bp[i], bs.dim(i)) * (bp[i] == 0.0 ? 1.0 : std::pow(1.0 - r2, bp[i]));
    }
    return f;
}

}  // namespace blockbeta
