#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blockbeta/core.hpp"
#include "blockbeta/report.hpp"
#include "blockbeta/rng.hpp"

namespace blockbeta {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
    double best_estimate() const { return best_estimate_; }
    double error_estimate() const { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

class Unsupported : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 15;

    void validate() const;
};

/// Adaptive 1-D quadrature (double-exponential; tolerant of integrable endpoint
/// singularities). A result is accepted when its error estimate is within
/// max(abs_tol, rel_tol * L1); otherwise QuadratureError.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& q = {});

/// Same, over [a, inf).
double integrate_to_infinity(const std::function<double(double)>& f, double a, const QuadratureOptions& q = {});

/// Unnormalized incomplete beta B(a, b; x) = int_0^x z^{a-1} (1-z)^{b-1} dz.
double incomplete_beta(double a, double b, double x);

/// Meta-normal v in S_+^{m-1} and offset s.
class MetaCap {
public:
    MetaCap(std::vector<double> v, double s);

    int m() const { return static_cast<int>(v_.size()); }
    const std::vector<double>& v() const { return v_; }
    double s() const { return s_; }
    double one_norm() const { return one_norm_; }
    /// ||v||_1 - 2 min v_i; -1 when m = 1.
    double s1() const { return s1_; }
    bool nonempty() const { return s_ <= one_norm_; }

private:
    std::vector<double> v_;
    double s_;
    double one_norm_;
    double s1_;
};

/// c_beta = c_{beta,1}, the meta-cube marginal constant.
double meta_norm_const(double beta);

/// P_m({y in [-1,1]^m : y.v >= s}; betas) under prod_i c_{beta_i} (1 - y_i^2)^{beta_i}.
/// m <= 4.
double cap_content_meta(const MetaCap& cap, const std::vector<double>& betas, const QuadratureOptions& q = {});

/// Weighted (m-1)-volume of the section {y.v = s}; for m = 1, c_beta (1 - s^2)^beta.
double section_content_meta(const MetaCap& cap, const std::vector<double>& betas, const QuadratureOptions& q = {});

/// Exponents of the reduced meta-cube law, (d_i - 1)/2 + beta_i.
std::vector<double> reduced_betas(const BlockStructure& bs, const BetaParams& bp);

/// prod_i c_{beta_i,d_i} / (c_{beta_i,d_i-1} c_{reduced_i}), evaluated numerically.
double reduction_constant(const BlockStructure& bs, const BetaParams& bp);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Fraction of block-beta samples with x.w >= s.
McEstimate cap_content_full_mc(const BlockStructure& bs, const BetaParams& bp, const std::vector<double>& w, double s,
                               std::size_t n_samples, RngStream& rng);

/// Random (v, s) with s in (s1(v), ||v||_1) and random block directions; MC of the
/// full cap against constant * meta quadrature. z uses the binomial standard error
/// of the quadrature probability. Passes when >= 98% of trials have |z| <= 3.
Report verify_reduction(const BlockStructure& bs, const BetaParams& bp, int trials, std::size_t n_samples,
                        RngStream& rng);

struct BoundsGrid {
    int gaps = 25;             // log-spaced gap values per v
    double gap_lo = 1e-6;      // as fractions of the admissible gap range
    double slope_hi = 0.5;     // upper end of the slope fit
    double spread_hi = 0.99;   // upper end of the spread check
    int directions = 8;        // v per configuration (the first is the diagonal)
    double slope_tol = 0.05;
    double spread_tol = 1e3;
};

/// Ratio checks of meta-cap / meta-section contents against their power-law shapes.
Report verify_bounds(int m, const std::vector<double>& betas, const BoundsGrid& grid, RngStream& rng,
                     const QuadratureOptions& q = {});

enum class SphereTestFunction { constant, first_block_sq_norm, exp_first_coord };
SphereTestFunction parse_sphere_test_function(const std::string& name);
std::string to_string(SphereTestFunction f);

/// Two MC estimators of int_{S^{d-1}} f: direct uniform sampling, and the block
/// decomposition with weights prod v_i^{d_i - 1}. d <= 6, m <= 3.
Report verify_polyspherical(const BlockStructure& bs, SphereTestFunction fn, std::size_t n_samples, RngStream& rng);

enum class PairTestFunction { one, both_in_disk, gaussian_distance };
PairTestFunction parse_pair_test_function(const std::string& name);
std::string to_string(PairTestFunction f);

/// Planar affine Blaschke-Petkantschin: pairs of uniform points in [-1,1]^2 against
/// lines (w, s) with point pairs on the chord, weighted by |y1 - y2| / 2.
Report verify_blaschke_petkantschin_2d(PairTestFunction fn, std::size_t n_samples, RngStream& rng);

}  // namespace blockbeta
