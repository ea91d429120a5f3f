#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "blockbeta/core.hpp"
#include "blockbeta/report.hpp"
#include "blockbeta/rng.hpp"

namespace blockbeta {

/// Beta distribution on B_2^k: density c_{beta,k} (1 - |y|^2)^beta.
class BetaBallLaw {
public:
    BetaBallLaw(int dim, double beta);

    int dim() const { return dim_; }
    double beta() const { return beta_; }
    /// c_{beta,k} = Gamma(k/2 + beta + 1) / (pi^{k/2} Gamma(beta + 1)).
    double norm_const() const { return norm_const_; }

    /// Density at a point of R^k (0 outside the closed ball).
    double density(std::span<const double> y) const;
    /// Density as a function of the squared radius.
    double density_at_sq_radius(double r2) const;

private:
    int dim_;
    double beta_;
    double norm_const_;
};

/// c_{beta,k}; c_{beta,0} = 1 by convention.
double beta_norm_const(double beta, int k);

/// Beta(a, b) variate as G_a / (G_a + G_b).
double sample_beta_variate(double a, double b, RngStream& rng);

/// Uniform direction on S^{k-1} (normalized standard Gaussian vector).
void sample_direction(std::span<double> out, RngStream& rng);

/// One draw from the beta law on B_2^k: radius sqrt(T) with T ~ Beta(k/2, beta+1),
/// times a uniform direction.
void sample_beta_ball(const BetaBallLaw& law, RngStream& rng, std::span<double> out);
std::vector<double> sample_beta_ball(const BetaBallLaw& law, RngStream& rng);

/// Independent beta-ball draws per block, concatenated.
void sample_block_beta(const BlockStructure& bs, const BetaParams& bp, RngStream& rng, std::span<double> out);
BlockPoint sample_block_beta(const BlockStructure& bs, const BetaParams& bp, RngStream& rng);

/// count points, row-major count x d.
std::vector<double> sample_block_beta_cloud(const BlockStructure& bs, const BetaParams& bp, std::size_t count,
                                            RngStream& rng);

/// Product density prod_i c_{beta_i,d_i} (1 - |x^(i)|^2)^{beta_i}; 0 outside Z_d.
double density(const BlockStructure& bs, const BetaParams& bp, std::span<const double> x);

/// Asymptotic Kolmogorov tail P(D_n > d) with the Stephens small-sample correction.
/// For two samples pass n = n1 n2 / (n1 + n2).
double ks_pvalue(double d, double n);

/// sup |F_emp - F| for a sorted sample against a continuous CDF.
template <class Cdf>
double ks_statistic(const std::vector<double>& sorted, Cdf&& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// Two-sample statistic; both inputs sorted.
double ks_statistic_two_sample(const std::vector<double>& a, const std::vector<double>& b);

struct SamplerCheckOptions {
    std::size_t draws = 100000;
    double level = 0.01;
};

/// Squared-radius KS tests against Beta(k/2, beta+1) for k in 1..4, beta in
/// {0, 0.5, 2}; two-sample test of the k=2, beta=1 law against projected uniform
/// B^4 points; informational moment and sub-cylinder checks.
Report verify_sampler(const SamplerCheckOptions& opt, RngStream& rng);

}  // namespace blockbeta
