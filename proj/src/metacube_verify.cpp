#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "blockbeta/metacube.hpp"
#include "blockbeta/sampler.hpp"

namespace blockbeta {

namespace {

std::string fmt_vec(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(4);
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

// |Gaussian| normalized: uniform on the positive orthant of the sphere.
std::vector<double> random_meta_normal(int m, RngStream& rng, double min_entry = 0.0) {
    std::vector<double> v(m);
    for (;;) {
        sample_direction(v, rng);
        for (double& x : v) x = std::abs(x);
        if (*std::min_element(v.begin(), v.end()) >= min_entry) return v;
    }
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int k = 0; k < count; ++k)
        g[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / std::max(1, count - 1));
    return g;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct MeanAcc {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    void add(double x) {
        sum += x;
        sq += x * x;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, sq / n - m * m) / (n > 1 ? n - 1 : 1));
    }
};

}  // namespace

Report verify_reduction(const BlockStructure& bs, const BetaParams& bp, int trials, std::size_t n_samples,
                        RngStream& rng) {
    bp.check_paired(bs);
    const int m = bs.blocks();
    if (m > 4) throw Unsupported("verify_reduction: m <= 4");
    if (trials < 1) throw std::invalid_argument("verify_reduction: trials must be >= 1");
    Report rep;
    rep.title = "reduction " + bs.str() + " beta=" + bp.str();
    const auto reduced = reduced_betas(bs, bp);
    const double constant = reduction_constant(bs, bp);
    rep.info("constant", constant, 1.0, constant - 1.0, true);

    int good = 0;
    for (int t = 0; t < trials; ++t) {
        const std::vector<double> v = m == 1 ? std::vector<double>{1.0} : random_meta_normal(m, rng);
        MetaCap probe(v, 0.0);
        const double s = probe.s1() + (probe.one_norm() - probe.s1()) * (0.02 + 0.96 * rng.uniform());
        std::vector<double> w(bs.total());
        for (int i = 0; i < m; ++i) {
            auto blk = bs.block(std::span<double>(w), i);
            sample_direction(blk, rng);
            for (double& c : blk) c *= v[i];
        }
        const double reference = constant * cap_content_meta(MetaCap(v, s), reduced);
        const McEstimate mc = cap_content_full_mc(bs, bp, w, s, n_samples, rng);
        const double se = std::sqrt(reference * (1.0 - reference) / static_cast<double>(n_samples));
        const double z = se > 0.0 ? (mc.estimate - reference) / se : (mc.estimate == reference ? 0.0 : INFINITY);
        const bool ok = std::abs(z) <= 3.0;
        good += ok;
        char name[64];
        std::snprintf(name, sizeof name, "trial %d", t);
        rep.info(name, mc.estimate, reference, z, ok, "v=" + fmt_vec(v) + " s=" + std::to_string(s));
    }
    const double frac = static_cast<double>(good) / trials;
    rep.add("fraction |z|<=3", frac, 0.98, rep.worst_statistic("trial"), frac >= 0.98);
    return rep;
}

Report verify_bounds(int m, const std::vector<double>& betas, const BoundsGrid& grid, RngStream& rng,
                     const QuadratureOptions& q) {
    if (m < 1 || m > 4) throw Unsupported("verify_bounds: m must be in [1, 4]");
    if (static_cast<int>(betas.size()) != m) throw DimensionMismatch("verify_bounds: betas do not match m");
    for (double b : betas)
        if (!(b > -1.0)) throw DomainError("verify_bounds: betas must be > -1");
    const bool sections = m == 1 || std::all_of(betas.begin(), betas.end(), [](double b) { return b >= 0.0; });
    double beta_sum = 0.0;
    for (double b : betas) beta_sum += b;

    Report rep;
    rep.title = "bounds m=" + std::to_string(m) + " beta=" + fmt_vec(betas);
    if (!sections) rep.info("sections skipped", 0, 0, 0, true, "negative beta with m >= 2 is outside the proven regime");

    const int directions = m == 1 ? 1 : grid.directions;
    for (int dir = 0; dir < directions; ++dir) {
        std::vector<double> v =
            dir == 0 ? std::vector<double>(m, 1.0 / std::sqrt(static_cast<double>(m))) : random_meta_normal(m, rng, 0.05);
        const MetaCap probe(v, 0.0);
        const double norm1 = probe.one_norm();
        const double s1 = probe.s1();
        double vpow = 1.0;
        for (int i = 0; i < m; ++i) vpow *= std::pow(v[i], -betas[i] - 1.0);
        const std::string tag = " v=" + fmt_vec(v);
        // a quadrature that does not converge shows up as a non-finite point
        auto cap_at = [&](double gap) -> double {
            try {
                return cap_content_meta(MetaCap(v, norm1 - gap), betas, q);
            } catch (const QuadratureError&) {
                return NAN;
            }
        };
        auto section_at = [&](double gap) -> double {
            try {
                return section_content_meta(MetaCap(v, norm1 - gap), betas, q);
            } catch (const QuadratureError&) {
                return NAN;
            }
        };

        // power-law shape on (s1, ||v||_1): slope over the small-gap end, spread over all
        auto power_check = [&](const std::string& what, double range, double exponent, bool section) {
            const auto gaps = log_grid(grid.gap_lo * range, grid.spread_hi * range, grid.gaps);
            std::vector<double> lx, ly;
            double rmin = INFINITY, rmax = 0.0;
            bool finite = true;
            for (double gap : gaps) {
                const double measured = section ? section_at(gap) : cap_at(gap);
                const double r = measured / (std::pow(gap, exponent) * vpow);
                if (!std::isfinite(r) || !(r > 0.0)) {
                    finite = false;
                    continue;
                }
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
                if (gap <= grid.slope_hi * range * (1 + 1e-12)) {
                    lx.push_back(std::log(gap));
                    ly.push_back(std::log(r));
                }
            }
            const double slope = lx.size() >= 2 ? ls_slope(lx, ly) : NAN;
            rep.add(what + " finite" + tag, finite ? 1.0 : 0.0, 1.0, 0.0, finite);
            rep.add(what + " slope" + tag, slope, 0.0, slope, std::abs(slope) <= grid.slope_tol);
            rep.add(what + " spread" + tag, rmax / rmin, grid.spread_tol, rmax / rmin, rmax / rmin <= grid.spread_tol);
        };
        power_check("cap-power", norm1 - s1, beta_sum + m, false);
        if (sections) power_check("section-power", norm1 - std::max(s1, 0.0), beta_sum + m - 1, true);

        // min-form shape over the whole range (-||v||_1, ||v||_1)
        auto min_form = [&](double gap) {
            double b = 1.0;
            for (int i = 0; i < m; ++i) b *= std::pow(std::min(gap / (2.0 * v[i]), 1.0), betas[i] + 1.0);
            return b;
        };
        {
            const auto gaps = log_grid(grid.gap_lo * 2.0 * norm1, grid.spread_hi * 2.0 * norm1, grid.gaps);
            double rmin = INFINITY, rmax = 0.0;
            bool finite = true;
            for (double gap : gaps) {
                const double r = cap_at(gap) / min_form(gap);
                if (!std::isfinite(r) || !(r > 0.0)) {
                    finite = false;
                    continue;
                }
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            rep.add("cap-min finite" + tag, finite ? 1.0 : 0.0, 1.0, 0.0, finite);
            rep.add("cap-min spread" + tag, rmax / rmin, grid.spread_tol, rmax / rmin, rmax / rmin <= grid.spread_tol);
        }
        if (sections) {
            // upper bound only: the ratio may vanish, it must stay bounded
            const double range = m == 1 ? 1.0 : 2.0 * norm1;
            const auto gaps = log_grid(grid.gap_lo * range, grid.spread_hi * range, grid.gaps);
            double rmax = 0.0;
            bool finite = true;
            for (double gap : gaps) {
                const double r = section_at(gap) * gap / min_form(gap);
                if (!(std::isfinite(r) && r >= 0.0)) {
                    finite = false;
                    continue;
                }
                rmax = std::max(rmax, r);
            }
            rep.add("section-min finite" + tag, finite ? 1.0 : 0.0, 1.0, 0.0, finite);
            rep.add("section-min bounded" + tag, rmax, grid.spread_tol, rmax, rmax <= grid.spread_tol);
        }
    }
    return rep;
}

SphereTestFunction parse_sphere_test_function(const std::string& name) {
    if (name == "constant") return SphereTestFunction::constant;
    if (name == "block1_sq_norm") return SphereTestFunction::first_block_sq_norm;
    if (name == "exp_w1") return SphereTestFunction::exp_first_coord;
    throw std::invalid_argument("unknown sphere test function '" + name + "'");
}

std::string to_string(SphereTestFunction f) {
    switch (f) {
        case SphereTestFunction::constant: return "constant";
        case SphereTestFunction::first_block_sq_norm: return "block1_sq_norm";
        case SphereTestFunction::exp_first_coord: return "exp_w1";
    }
    return "?";
}

Report verify_polyspherical(const BlockStructure& bs, SphereTestFunction fn, std::size_t n_samples, RngStream& rng) {
    const int d = bs.total();
    const int m = bs.blocks();
    if (d > 6 || m > 3) throw Unsupported("verify_polyspherical: d <= 6 and m <= 3");
    if (d < 2) throw std::invalid_argument("verify_polyspherical: d >= 2");
    if (n_samples < 2) throw std::invalid_argument("verify_polyspherical: need at least 2 samples");
    auto f = [&](std::span<const double> w) {
        switch (fn) {
            case SphereTestFunction::constant: return 1.0;
            case SphereTestFunction::first_block_sq_norm: {
                double s = 0.0;
                for (double c : bs.block(w, 0)) s += c * c;
                return s;
            }
            case SphereTestFunction::exp_first_coord: return std::exp(w[0]);
        }
        return 0.0;
    };

    Report rep;
    rep.title = "polyspherical " + bs.str() + " f=" + to_string(fn);
    const double omega_d = sphere_area(d);
    MeanAcc lhs, rhs;
    std::vector<double> w(d);
    for (std::size_t k = 0; k < n_samples; ++k) {
        sample_direction(w, rng);
        lhs.add(f(w));
    }
    // positive orthant of S^{m-1} has measure omega_m / 2^m; S^0 is two points
    double outer = sphere_area(m) / std::pow(2.0, m);
    for (int i = 0; i < m; ++i) outer *= sphere_area(bs.dim(i));
    std::vector<double> v(m);
    for (std::size_t k = 0; k < n_samples; ++k) {
        sample_direction(v, rng);
        double weight = 1.0;
        for (int i = 0; i < m; ++i) {
            v[i] = std::abs(v[i]);
            weight *= std::pow(v[i], bs.dim(i) - 1);
            auto blk = bs.block(std::span<double>(w), i);
            sample_direction(blk, rng);
            for (double& c : blk) c *= v[i];
        }
        rhs.add(f(w) * weight);
    }
    const double left = omega_d * lhs.mean(), left_se = omega_d * lhs.se();
    const double right = outer * rhs.mean(), right_se = outer * rhs.se();
    const double se = std::hypot(left_se, right_se);
    const double z = se > 0 ? (left - right) / se : (left == right ? 0.0 : INFINITY);
    rep.add("sides agree", left, right, z, std::abs(z) <= 3.0);

    double exact = NAN;
    if (fn == SphereTestFunction::constant) exact = omega_d;
    if (fn == SphereTestFunction::first_block_sq_norm) exact = omega_d * bs.dim(0) / d;
    if (!std::isnan(exact)) {
        const double zl = left_se > 0 ? (left - exact) / left_se : (std::abs(left - exact) <= 1e-12 * exact ? 0 : INFINITY);
        const double zr = right_se > 0 ? (right - exact) / right_se : (std::abs(right - exact) <= 1e-12 * exact ? 0 : INFINITY);
        rep.add("direct vs exact", left, exact, zl, std::abs(zl) <= 3.0);
        rep.add("blockwise vs exact", right, exact, zr, std::abs(zr) <= 3.0);
    }
    return rep;
}

PairTestFunction parse_pair_test_function(const std::string& name) {
    if (name == "one") return PairTestFunction::one;
    if (name == "both_in_disk") return PairTestFunction::both_in_disk;
    if (name == "gaussian_distance") return PairTestFunction::gaussian_distance;
    throw std::invalid_argument("unknown pair test function '" + name + "'");
}

std::string to_string(PairTestFunction f) {
    switch (f) {
        case PairTestFunction::one: return "one";
        case PairTestFunction::both_in_disk: return "both_in_disk";
        case PairTestFunction::gaussian_distance: return "gaussian_distance";
    }
    return "?";
}

Report verify_blaschke_petkantschin_2d(PairTestFunction fn, std::size_t n_samples, RngStream& rng) {
    if (n_samples < 2) throw std::invalid_argument("verify_blaschke_petkantschin_2d: need at least 2 samples");
    // f is restricted to pairs in the square [-1,1]^2
    auto f = [&](const double* a, const double* b) {
        switch (fn) {
            case PairTestFunction::one: return 1.0;
            case PairTestFunction::both_in_disk:
                return (a[0] * a[0] + a[1] * a[1] <= 1.0 && b[0] * b[0] + b[1] * b[1] <= 1.0) ? 1.0 : 0.0;
            case PairTestFunction::gaussian_distance: {
                const double dx = a[0] - b[0], dy = a[1] - b[1];
                return std::exp(-(dx * dx + dy * dy));
            }
        }
        return 0.0;
    };
    Report rep;
    rep.title = "blaschke-petkantschin d=2 f=" + to_string(fn);

    MeanAcc lhs, rhs;
    double a[2], b[2];
    for (std::size_t k = 0; k < n_samples; ++k) {
        for (double& c : a) c = 2.0 * rng.uniform() - 1.0;
        for (double& c : b) c = 2.0 * rng.uniform() - 1.0;
        lhs.add(16.0 * f(a, b));
    }
    double w[2];
    for (std::size_t k = 0; k < n_samples; ++k) {
        sample_direction(w, rng);
        const double h = std::abs(w[0]) + std::abs(w[1]);
        const double s = (2.0 * rng.uniform() - 1.0) * h;
        // line {x.w = s}: x = s w + t (-w1, w0); clip t to the square
        double tlo = -INFINITY, thi = INFINITY;
        const double base[2] = {s * w[0], s * w[1]};
        const double dir[2] = {-w[1], w[0]};
        for (int c = 0; c < 2; ++c) {
            if (dir[c] == 0.0) {
                if (std::abs(base[c]) > 1.0) tlo = INFINITY;
                continue;
            }
            double t1 = (-1.0 - base[c]) / dir[c], t2 = (1.0 - base[c]) / dir[c];
            if (t1 > t2) std::swap(t1, t2);
            tlo = std::max(tlo, t1);
            thi = std::min(thi, t2);
        }
        const double len = thi - tlo;
        if (!(len > 0.0)) {
            rhs.add(0.0);
            continue;
        }
        const double t1 = tlo + len * rng.uniform(), t2 = tlo + len * rng.uniform();
        for (int c = 0; c < 2; ++c) {
            a[c] = base[c] + t1 * dir[c];
            b[c] = base[c] + t2 * dir[c];
        }
        // (d-1)!/2 * |S^1| * (2h) * len^2 * f * |y1 - y2|
        rhs.add(0.5 * 2.0 * std::numbers::pi * 2.0 * h * len * len * f(a, b) * std::abs(t1 - t2));
    }
    const double se = std::hypot(lhs.se(), rhs.se());
    const double z = se > 0 ? (lhs.mean() - rhs.mean()) / se : 0.0;
    rep.add("sides agree", lhs.mean(), rhs.mean(), z, std::abs(z) <= 3.0);
    double exact = NAN;
    if (fn == PairTestFunction::one) exact = 16.0;
    if (fn == PairTestFunction::both_in_disk) exact = std::numbers::pi * std::numbers::pi;
    if (!std::isnan(exact)) {
        const double zr = rhs.se() > 0 ? (rhs.mean() - exact) / rhs.se() : 0.0;
        rep.add("line side vs exact", rhs.mean(), exact, zr, std::abs(zr) <= 3.0);
        const double zl = lhs.se() > 0 ? (lhs.mean() - exact) / lhs.se() : (lhs.mean() == exact ? 0.0 : INFINITY);
        rep.add("point side vs exact", lhs.mean(), exact, zl, std::abs(zl) <= 3.0);
    }
    return rep;
}

}  // namespace blockbeta
