#include "blockbeta/metacube.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "blockbeta/sampler.hpp"

namespace blockbeta {

namespace {

constexpr int kMaxMeta = 4;
constexpr int kMaxNesting = 8;

// Nested integrals re-enter the integrator; each nesting level gets its own
// instance so that lazily extended abscissa tables are never shared mid-sum.
thread_local int t_depth = 0;

struct DepthGuard {
    DepthGuard() {
        if (++t_depth > kMaxNesting) {
            --t_depth;
            throw std::logic_error("quadrature nesting too deep");
        }
    }
    ~DepthGuard() { --t_depth; }
};

boost::math::quadrature::tanh_sinh<double>& finite_rule(int depth, int max_depth) {
    thread_local std::array<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>, kMaxNesting + 1> rules;
    thread_local std::array<int, kMaxNesting + 1> levels{};
    auto& r = rules[depth];
    if (!r || levels[depth] != max_depth) {
        r = std::make_unique<boost::math::quadrature::tanh_sinh<double>>(max_depth);
        levels[depth] = max_depth;
    }
    return *r;
}

boost::math::quadrature::exp_sinh<double>& half_line_rule(int depth, int max_depth) {
    thread_local std::array<std::unique_ptr<boost::math::quadrature::exp_sinh<double>>, kMaxNesting + 1> rules;
    thread_local std::array<int, kMaxNesting + 1> levels{};
    auto& r = rules[depth];
    if (!r || levels[depth] != max_depth) {
        r = std::make_unique<boost::math::quadrature::exp_sinh<double>>(max_depth);
        levels[depth] = max_depth;
    }
    return *r;
}

void accept_or_throw(double value, double err, double l1, const QuadratureOptions& q, const char* where) {
    if (!std::isfinite(value)) throw QuadratureError(std::string(where) + ": non-finite result", value, err);
    // Nested inner results carry their own rounding noise, hence the slack factor.
    const double tol = std::max(q.abs_tol, 100.0 * q.rel_tol * l1);
    if (err > tol) throw QuadratureError(std::string(where) + ": no convergence", value, err);
}

}  // namespace

void QuadratureOptions::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be > 0");
    if (max_depth < 1 || max_depth > 30) throw std::invalid_argument("quadrature max_depth must be in [1, 30]");
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& q) {
    if (!(b > a)) return 0.0;
    q.validate();
    // Slivers far from the origin leave the double-exponential abscissas too few
    // representable points; a fixed Gauss rule is adequate on them.
    if (b - a <= 1e-7 * std::max(std::abs(a), std::abs(b)))
        return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
    DepthGuard guard;
    double err = 0.0, l1 = 0.0;
    double value;
    try {
        value = finite_rule(t_depth, q.max_depth).integrate(f, a, b, q.rel_tol, &err, &l1);
    } catch (const QuadratureError&) {
        throw;
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("integrate: ") + e.what(), std::nan(""), std::nan(""));
    }
    accept_or_throw(value, err, l1, q, "integrate");
    return value;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, const QuadratureOptions& q) {
    q.validate();
    DepthGuard guard;
    double err = 0.0, l1 = 0.0;
    double value;
    try {
        value = half_line_rule(t_depth, q.max_depth)
                    .integrate([&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity(), q.rel_tol,
                               &err, &l1);
    } catch (const QuadratureError&) {
        throw;
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("integrate_to_infinity: ") + e.what(), std::nan(""), std::nan(""));
    }
    accept_or_throw(value, err, l1, q, "integrate_to_infinity");
    return value;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
    return boost::math::beta(a, b, x);
}

MetaCap::MetaCap(std::vector<double> v, double s) : v_(std::move(v)), s_(s) {
    if (v_.empty()) throw std::invalid_argument("meta-cap: empty normal");
    double sq = 0.0;
    for (double x : v_) {
        if (!(x >= 0.0)) throw std::invalid_argument("meta-cap: normal must have nonnegative entries");
        sq += x * x;
    }
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-12) throw std::invalid_argument("meta-cap: normal must be a unit vector");
    if (!std::isfinite(s)) throw std::invalid_argument("meta-cap: offset must be finite");
    one_norm_ = std::accumulate(v_.begin(), v_.end(), 0.0);
    s1_ = v_.size() == 1 ? -1.0 : one_norm_ - 2.0 * *std::min_element(v_.begin(), v_.end());
}

double meta_norm_const(double beta) { return beta_norm_const(beta, 1); }

namespace {

// Sum_i v_i U_i with U_i = 1 - Y_i in [0, 2], density c_i (u (2 - u))^{beta_i}.
// Coordinates with v_i = 0 are dropped by the caller.
struct GapSum {
    std::vector<double> v, beta, c;
    QuadratureOptions q;

    int size() const { return static_cast<int>(v.size()); }

    double pdf1(int i, double u) const {
        if (u < 0.0 || u > 2.0) return 0.0;
        if (beta[i] == 0.0) return c[i];
        return c[i] * std::pow(u * (2.0 - u), beta[i]);
    }

    double cdf1(int i, double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 2.0) return 1.0;
        const double x = 0.5 * u;
        return x <= 0.5 ? boost::math::ibeta(beta[i] + 1.0, beta[i] + 1.0, x)
                        : boost::math::ibetac(beta[i] + 1.0, beta[i] + 1.0, 1.0 - x);
    }

    double range_from(int level) const {
        double r = 0.0;
        for (int i = level; i < size(); ++i) r += 2.0 * v[i];
        return r;
    }

    // Split points in (lo, hi) where the inner function has kinks: g - v_level u equals
    // a subset sum of 2 v_j over the inner coordinates.
    std::vector<double> pieces(int level, double g, double lo, double hi) const {
        std::vector<double> cuts{lo, hi};
        const int inner = size() - level - 1;
        for (int mask = 0; mask < (1 << inner); ++mask) {
            double sum = 0.0;
            for (int j = 0; j < inner; ++j)
                if (mask & (1 << j)) sum += 2.0 * v[level + 1 + j];
            const double u = (g - sum) / v[level];
            if (u > lo && u < hi) cuts.push_back(u);
        }
        std::sort(cuts.begin(), cuts.end());
        // slivers only spoil the error estimate
        const double min_width = 1e-9 * (hi - lo);
        std::vector<double> kept{cuts.front()};
        for (std::size_t k = 1; k + 1 < cuts.size(); ++k)
            if (cuts[k] - kept.back() > min_width && hi - cuts[k] > min_width) kept.push_back(cuts[k]);
        kept.push_back(hi);
        return kept;
    }

    // P(sum_{i >= level} v_i U_i <= g)
    double cdf(int level, double g) const {
        if (g <= 0.0) return 0.0;
        const double total = range_from(level);
        if (g >= total) return 1.0;
        if (level == size() - 1) return cdf1(level, g / v[level]);
        const double rest = total - 2.0 * v[level];
        const double lo = std::max(0.0, (g - rest) / v[level]);
        const double hi = std::min(2.0, g / v[level]);
        double sum = lo > 0.0 ? cdf1(level, lo) : 0.0;  // inner mass is 1 below lo
        const auto cuts = pieces(level, g, lo, hi);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            sum += integrate([&](double u) { return pdf1(level, u) * cdf(level + 1, g - v[level] * u); }, cuts[k],
                             cuts[k + 1], q);
        return sum;
    }

    // Density of sum_{i >= level} v_i U_i at g; the last coordinate is point-evaluated.
    double pdf(int level, double g) const {
        if (g <= 0.0 || g >= range_from(level)) return 0.0;
        if (level == size() - 1) return pdf1(level, g / v[level]) / v[level];
        const double rest = range_from(level + 1);
        const double lo = std::max(0.0, (g - rest) / v[level]);
        const double hi = std::min(2.0, g / v[level]);
        double sum = 0.0;
        const auto cuts = pieces(level, g, lo, hi);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            sum += integrate([&](double u) { return pdf1(level, u) * pdf(level + 1, g - v[level] * u); }, cuts[k],
                             cuts[k + 1], q);
        return sum;
    }

    // P(sum v_i U_i <= g) for 0 < g < min v_i, where the region is the simplex
    // {u >= 0, sum u_i / t_i <= 1}, t_i = g / v_i. Cube coordinates z map onto it by
    // w_i = (1 - z_i) prod_{l<i} z_l, u_i = t_i w_i, Jacobian prod_i z_i^{m-i}; the
    // last coordinate is integrated in closed form.
    double corner_cdf(double g) const {
        const int m = size();
        std::vector<double> t(m);
        double prefactor = 1.0;
        for (int i = 0; i < m; ++i) {
            t[i] = g / v[i];
            prefactor *= t[i];
        }
        std::function<double(int, double)> level_fn = [&](int i, double prod) -> double {
            if (i == m - 1) {
                const double x = t[i] * prod;
                if (!(x > 0.0)) return 0.0;
                return cdf1(i, x) / x;
            }
            return integrate(
                [&](double z) {
                    const double w = (1.0 - z) * prod;
                    return pdf1(i, t[i] * w) * std::pow(z, m - 1 - i) * level_fn(i + 1, prod * z);
                },
                0.0, 1.0, q);
        };
        return prefactor * level_fn(0, 1.0);
    }
};

GapSum make_gap_sum(const MetaCap& cap, const std::vector<double>& betas, const QuadratureOptions& q,
                    bool largest_last) {
    if (cap.m() > kMaxMeta) throw Unsupported("meta-cube quadrature supports m <= 4");
    if (static_cast<int>(betas.size()) != cap.m()) throw DimensionMismatch("meta-cap: betas do not match m");
    for (double b : betas)
        if (!(b > -1.0) || !std::isfinite(b)) throw DomainError("meta-cap: betas must be finite and > -1");
    q.validate();
    std::vector<int> idx;
    for (int i = 0; i < cap.m(); ++i)
        if (cap.v()[i] > 0.0) idx.push_back(i);
    if (largest_last)
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return cap.v()[a] < cap.v()[b]; });
    GapSum gs;
    gs.q = q;
    for (int i : idx) {
        gs.v.push_back(cap.v()[i]);
        gs.beta.push_back(betas[i]);
        gs.c.push_back(meta_norm_const(betas[i]));
    }
    return gs;
}

}  // namespace

double cap_content_meta(const MetaCap& cap, const std::vector<double>& betas, const QuadratureOptions& q) {
    const GapSum gs = make_gap_sum(cap, betas, q, false);
    const double norm1 = cap.one_norm();
    const double g = norm1 - cap.s();
    if (g <= 0.0) return 0.0;
    if (g >= 2.0 * norm1) return 1.0;
    if (gs.size() == 1) return gs.cdf1(0, g / gs.v[0]);
    if (g > norm1) {
        const double gc = 2.0 * norm1 - g;  // U -> 2 - U symmetry
        const double vmin = *std::min_element(gs.v.begin(), gs.v.end());
        return 1.0 - (gc < vmin ? gs.corner_cdf(gc) : gs.cdf(0, gc));
    }
    const double vmin = *std::min_element(gs.v.begin(), gs.v.end());
    if (g < vmin) return gs.corner_cdf(g);
    return gs.cdf(0, g);
}

double section_content_meta(const MetaCap& cap, const std::vector<double>& betas, const QuadratureOptions& q) {
    const GapSum gs = make_gap_sum(cap, betas, q, true);
    const double norm1 = cap.one_norm();
    double g = norm1 - cap.s();
    if (cap.m() == 1) {
        const double s = cap.s();
        if (std::abs(s) > 1.0) return 0.0;
        return gs.c[0] * (betas[0] == 0.0 ? 1.0 : std::pow(1.0 - s * s, betas[0]));
    }
    if (g <= 0.0 || g >= 2.0 * norm1) return 0.0;
    if (g > norm1) g = 2.0 * norm1 - g;
    return gs.pdf(0, g);
}

std::vector<double> reduced_betas(const BlockStructure& bs, const BetaParams& bp) {
    bp.check_paired(bs);
    std::vector<double> out(bs.blocks());
    for (int i = 0; i < bs.blocks(); ++i) out[i] = 0.5 * (bs.dim(i) - 1) + bp[i];
    return out;
}

double reduction_constant(const BlockStructure& bs, const BetaParams& bp) {
    const auto reduced = reduced_betas(bs, bp);
    double k = 1.0;
    for (int i = 0; i < bs.blocks(); ++i)
        k *= beta_norm_const(bp[i], bs.dim(i)) / (beta_norm_const(bp[i], bs.dim(i) - 1) * meta_norm_const(reduced[i]));
    return k;
}

McEstimate cap_content_full_mc(const BlockStructure& bs, const BetaParams& bp, const std::vector<double>& w, double s,
                               std::size_t n_samples, RngStream& rng) {
    bp.check_paired(bs);
    if (static_cast<int>(w.size()) != bs.total()) throw DimensionMismatch("cap_content_full_mc: direction dimension");
    double sq = 0.0;
    for (double x : w) sq += x * x;
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) throw std::invalid_argument("cap_content_full_mc: w must be a unit vector");
    if (n_samples == 0) throw std::invalid_argument("cap_content_full_mc: need at least one sample");
    std::vector<double> x(bs.total());
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        sample_block_beta(bs, bp, rng, x);
        double dot = 0.0;
        for (int c = 0; c < bs.total(); ++c) dot += x[c] * w[c];
        if (dot >= s) ++hits;
    }
    const double n = static_cast<double>(n_samples);
    const double p = hits / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace blockbeta
