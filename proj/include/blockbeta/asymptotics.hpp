#pragma once

#include <string>
#include <vector>

#include "blockbeta/core.hpp"
#include "blockbeta/metacube.hpp"
#include "blockbeta/report.hpp"
#include "blockbeta/rng.hpp"

namespace blockbeta {

/// Parameters of I(n) = int_{[0,1]^m} (1 - c x_1...x_m)^{n - alpha} prod x_i^{a_i} dx.
/// The exponents are stored in nonincreasing order (the integral is symmetric
/// under permuting them).
class AwConfig {
public:
    AwConfig(std::vector<double> a, double alpha = 0.0, double c = 1.0);

    int m() const { return static_cast<int>(a_.size()); }
    const std::vector<double>& a() const { return a_; }
    double alpha() const { return alpha_; }
    double c() const { return c_; }
    /// 1-based index of the first exponent tied with the smallest (tolerance 1e-12).
    int tie_index() const;
    std::string str() const;

private:
    std::vector<double> a_;
    double alpha_;
    double c_;
};

/// Deterministic evaluation for m <= 3, relative tolerance 1e-8 by default. The
/// innermost coordinate is integrated in closed form through the incomplete beta
/// function; outer coordinates run over -log x_i with splits near the knee.
double aw_integral_numeric(const AwConfig& cfg, double n, double rel_tol = 1e-8);

/// Leading-order value Gamma(a_l + 1) (c n)^{-(a_l+1)} (log n)^{m-l} / prod_{i<l} (a_i - a_l).
double aw_asymptotic(const AwConfig& cfg, double n);

/// Ratio numeric / asymptotic at n for a=(2); (2,1) c=0.5; (3,2,1) within
/// 1 +- 0.05 and (1,1); (3,2,2) within 1 +- 0.10, the m=1 closed form, and the
/// approach along n = 1e3..1e6 (informational).
Report verify_aw(double n = 1e6);

struct RatePoint {
    double n = 0.0;
    double mean = 0.0;
    double se = 0.0;
};

enum class RateModel { fixed_log_power, free };

struct RateFit {
    RateModel model = RateModel::fixed_log_power;
    double exponent_hat = 0.0;
    double exponent_se = 0.0;
    double log_coeff = 0.0;     // intercept of log(mean)
    double log_power = 0.0;     // fixed value, or fitted coefficient of log log n
    double r_squared = 0.0;
    /// A in mean ~ A n^e (ln n)^p + B with e, p the predicted rate (fixed model only).
    double scale_coeff = 0.0;
    double scale_coeff_se = 0.0;
    int points = 0;
    bool weighted = false;
    std::string str() const;
};

struct RateFitPair {
    RateFit fixed;
    RateFit free;
};

class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Weighted least squares of log(mean) - p log log n on log n (p fixed), plus the
/// free fit on (log n, log log n). Weights (mean/se)^2, unweighted when any se is 0.
/// Needs >= 5 distinct n spanning >= 1.5 decades.
RateFitPair fit_rate(const std::vector<RatePoint>& data, const RatePrediction& predicted);
RateFitPair fit_rate(const std::vector<RatePoint>& data, double predicted_exponent, int log_power);

struct EfronOptions {
    int reps = 200;
    int queries_per_hull = 1000;
};

/// E f_0(P_n) against n (1 - E Vol(P_{n-1}) / Vol(Z_d)) for uniform points, both by
/// independent MC; the volume side by hit-or-miss membership queries. Passes when
/// the 3-sigma intervals overlap. The exact-volume variant is reported alongside.
Report efron_check(const BlockStructure& bs, int n, const EfronOptions& opt, RngStream& rng);

}  // namespace blockbeta
