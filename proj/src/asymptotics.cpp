#include "blockbeta/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace blockbeta {

namespace {

constexpr double kTieTolerance = 1e-12;

// int_0^1 (1 - P x)^N x^a dx = P^{-(a+1)} B(a+1, N+1; P)
double innermost(double a, double N, double P) {
    if (P * (N + 1.0) < 1e-12) return 1.0 / (a + 1.0);
    return boost::math::beta(a + 1.0, N + 1.0, P) * std::pow(P, -(a + 1.0));
}

}  // namespace

AwConfig::AwConfig(std::vector<double> a, double alpha, double c) : a_(std::move(a)), alpha_(alpha), c_(c) {
    if (a_.empty()) throw std::invalid_argument("AwConfig: need at least one exponent");
    for (double x : a_)
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("AwConfig: exponents must be > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("AwConfig: alpha must be >= 0");
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("AwConfig: c must lie in (0, 1]");
    std::sort(a_.begin(), a_.end(), std::greater<>());
}

int AwConfig::tie_index() const {
    const double last = a_.back();
    for (int i = 0; i < m(); ++i)
        if (std::abs(a_[i] - last) <= kTieTolerance) return i + 1;
    return m();
}

std::string AwConfig::str() const {
    std::ostringstream os;
    os << "a=(";
    for (int i = 0; i < m(); ++i) os << (i ? "," : "") << a_[i];
    os << ") alpha=" << alpha_ << " c=" << c_;
    return os.str();
}

double aw_integral_numeric(const AwConfig& cfg, double n, double rel_tol) {
    const int m = cfg.m();
    if (m > 3) throw Unsupported("aw_integral_numeric: m <= 3");
    const double N = n - cfg.alpha();
    if (!(N > 0.0)) throw DomainError("aw_integral_numeric: need n > alpha");
    const auto& a = cfg.a();
    if (m == 1) return innermost(a[0], N, cfg.c());

    QuadratureOptions q;
    q.rel_tol = rel_tol;
    q.abs_tol = 1e-300;
    const double knee = std::log(cfg.c() * N);
    // level i integrates tau_i = -log x_i given the running sum of earlier tau
    std::function<double(int, double)> level = [&](int i, double tau_sum) -> double {
        if (i == m - 1) return innermost(a[i], N, cfg.c() * std::exp(-tau_sum));
        auto body = [&](double tau) { return std::exp(-(a[i] + 1.0) * tau) * level(i + 1, tau_sum + tau); };
        const double centre = knee - tau_sum;
        std::vector<double> cuts{0.0};
        for (double off : {-20.0, -5.0, 0.0, 5.0, 20.0})
            if (centre + off > cuts.back() + 1e-3) cuts.push_back(centre + off);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += integrate(body, cuts[k], cuts[k + 1], q);
        sum += integrate_to_infinity(body, cuts.back(), q);
        return sum;
    };
    return level(0, 0.0);
}

double aw_asymptotic(const AwConfig& cfg, double n) {
    const int l = cfg.tie_index();
    const double al = cfg.a()[l - 1];
    double value = std::exp(std::lgamma(al + 1.0) - (al + 1.0) * std::log(cfg.c() * n));
    value *= std::pow(std::log(n), cfg.m() - l);
    for (int i = 0; i < l - 1; ++i) value /= cfg.a()[i] - al;
    return value;
}

Report verify_aw(double n) {
    struct Case {
        AwConfig cfg;
        double tol;
    };
    const std::vector<Case> cases = {
        {AwConfig({2.0}), 0.05},         {AwConfig({2.0, 1.0}, 0.0, 0.5), 0.05}, {AwConfig({3.0, 2.0, 1.0}), 0.05},
        {AwConfig({1.0, 1.0}), 0.10},    {AwConfig({3.0, 2.0, 2.0}), 0.10},
    };
    Report rep;
    rep.title = "aw integral asymptotics n=" + std::to_string(n);
    {
        const double a = 2.0;
        const double exact = std::exp(std::lgamma(a + 1.0) + std::lgamma(n + 1.0) - std::lgamma(a + n + 2.0));
        const double numeric = aw_integral_numeric(AwConfig({a}), n);
        const double rel = numeric / exact - 1.0;
        rep.add("m=1 a=2 closed form B(3, n+1)", numeric, exact, rel, std::abs(rel) <= 1e-8);
    }
    for (const auto& c : cases) {
        std::string approach;
        for (double nn : {1e3, 1e4, 1e5}) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%s%.4f", approach.empty() ? "" : " ",
                          aw_integral_numeric(c.cfg, nn) / aw_asymptotic(c.cfg, nn));
            approach += buf;
        }
        const double ratio = aw_integral_numeric(c.cfg, n) / aw_asymptotic(c.cfg, n);
        rep.add("ratio " + c.cfg.str(), ratio, 1.0, ratio - 1.0, std::abs(ratio - 1.0) <= c.tol,
                "tol " + std::to_string(c.tol).substr(0, 4) + "; n=1e3,1e4,1e5: " + approach);
    }
    return rep;
}

std::string RateFit::str() const {
    std::ostringstream os;
    os.precision(6);
    if (model == RateModel::fixed_log_power)
        os << "fixed log power " << log_power << ": exponent " << exponent_hat << " +- " << exponent_se
           << ", r^2 " << r_squared << ", scale " << scale_coeff << " +- " << scale_coeff_se;
    else
        os << "free: exponent " << exponent_hat << " +- " << exponent_se << ", log power " << log_power << ", r^2 "
           << r_squared;
    os << " (" << points << " points" << (weighted ? ", weighted" : "") << ")";
    return os.str();
}

namespace {

struct Wls {
    Eigen::VectorXd beta;
    Eigen::MatrixXd cov;
    double r_squared;
};

// Weighted least squares with residual-variance scaled covariance.
Wls weighted_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd Xw = sw.asDiagonal() * X;
    const Eigen::VectorXd yw = sw.asDiagonal() * y;
    Wls out;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
    out.beta = qr.solve(yw);
    const Eigen::VectorXd resid = yw - Xw * out.beta;
    const double rss = resid.squaredNorm();
    const double dof = std::max<double>(1.0, static_cast<double>(X.rows() - X.cols()));
    const Eigen::MatrixXd xtx = Xw.transpose() * Xw;
    out.cov = xtx.inverse() * (rss / dof);
    const double ybar = (w.array() * y.array()).sum() / w.sum();
    const double tss = (w.array() * (y.array() - ybar).square()).sum();
    out.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : (rss <= 1e-24 ? 1.0 : 0.0);
    return out;
}

}  // namespace

RateFitPair fit_rate(const std::vector<RatePoint>& data, const RatePrediction& predicted) {
    return fit_rate(data, predicted.exponent, predicted.log_power);
}

RateFitPair fit_rate(const std::vector<RatePoint>& data, double predicted_exponent, int log_power) {
    std::vector<double> ns;
    for (const auto& p : data) {
        if (!(p.n > 1.0) || !(p.mean > 0.0) || !(p.se >= 0.0))
            throw std::invalid_argument("fit_rate: need n > 1, mean > 0, se >= 0");
        ns.push_back(p.n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 5) throw InsufficientData("fit_rate: need at least 5 distinct n");
    if (std::log10(ns.back() / ns.front()) < 1.5 - 1e-12) throw InsufficientData("fit_rate: n must span 1.5 decades");

    const int k = static_cast<int>(data.size());
    const bool weighted = std::all_of(data.begin(), data.end(), [](const RatePoint& p) { return p.se > 0.0; });
    Eigen::VectorXd w(k), y(k), yfixed(k), lin_w(k), mean(k);
    Eigen::MatrixXd Xfixed(k, 2), Xfree(k, 3), Xscale(k, 2);
    for (int i = 0; i < k; ++i) {
        const auto& p = data[i];
        const double ln = std::log(p.n), lln = std::log(ln);
        const double rel = p.se / p.mean;
        w(i) = weighted ? 1.0 / (rel * rel) : 1.0;
        lin_w(i) = weighted ? 1.0 / (p.se * p.se) : 1.0;
        y(i) = std::log(p.mean);
        yfixed(i) = y(i) - log_power * lln;
        mean(i) = p.mean;
        Xfixed(i, 0) = 1.0;
        Xfixed(i, 1) = ln;
        Xfree(i, 0) = 1.0;
        Xfree(i, 1) = ln;
        Xfree(i, 2) = lln;
        Xscale(i, 0) = std::pow(p.n, predicted_exponent) * std::pow(ln, log_power);
        Xscale(i, 1) = 1.0;
    }
    RateFitPair out;
    const Wls fixed = weighted_ls(Xfixed, yfixed, w);
    out.fixed.model = RateModel::fixed_log_power;
    out.fixed.log_coeff = fixed.beta(0);
    out.fixed.exponent_hat = fixed.beta(1);
    out.fixed.exponent_se = std::sqrt(std::max(0.0, fixed.cov(1, 1)));
    out.fixed.log_power = log_power;
    out.fixed.r_squared = fixed.r_squared;
    out.fixed.points = k;
    out.fixed.weighted = weighted;
    const Wls scale = weighted_ls(Xscale, mean, lin_w);
    out.fixed.scale_coeff = scale.beta(0);
    out.fixed.scale_coeff_se = std::sqrt(std::max(0.0, scale.cov(0, 0)));

    const Wls free = weighted_ls(Xfree, y, w);
    out.free.model = RateModel::free;
    out.free.log_coeff = free.beta(0);
    out.free.exponent_hat = free.beta(1);
    out.free.exponent_se = std::sqrt(std::max(0.0, free.cov(1, 1)));
    out.free.log_power = free.beta(2);
    out.free.r_squared = free.r_squared;
    out.free.points = k;
    out.free.weighted = weighted;
    return out;
}

}  // namespace blockbeta
