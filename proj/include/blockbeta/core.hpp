#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockbeta {

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exact rational p/q with q > 0. Used for beta exponents given as fractions so
/// that ties between beta-adjusted dimensions are decided without rounding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational parse(const std::string& text);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

/// Block dimensions (d_1, ..., d_m) of the product body Z_d = B^{d_1} x ... x B^{d_m}.
class BlockStructure {
public:
    explicit BlockStructure(std::vector<int> dims);

    int blocks() const { return static_cast<int>(dims_.size()); }
    int total() const { return total_; }
    int dim(int i) const { return dims_[i]; }
    int offset(int i) const { return offsets_[i]; }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<int>& offsets() const { return offsets_; }

    /// View of block i inside a full coordinate vector.
    std::span<const double> block(std::span<const double> x, int i) const {
        return x.subspan(offsets_[i], dims_[i]);
    }
    std::span<double> block(std::span<double> x, int i) const {
        return x.subspan(offsets_[i], dims_[i]);
    }

    /// Euclidean norm of every block of x.
    std::vector<double> block_norms(std::span<const double> x) const;

    std::string str() const;

private:
    std::vector<int> dims_;
    std::vector<int> offsets_;
    int total_ = 0;
};

/// Block-beta exponents (beta_1, ..., beta_m), each > -1.
class BetaParams {
public:
    explicit BetaParams(std::vector<double> betas);
    explicit BetaParams(std::vector<Rational> betas);

    static BetaParams uniform(int blocks) { return BetaParams(std::vector<double>(blocks, 0.0)); }

    int blocks() const { return static_cast<int>(betas_.size()); }
    double operator[](int i) const { return betas_[i]; }
    const std::vector<double>& values() const { return betas_; }
    double total() const { return total_; }
    /// Present iff every exponent was supplied as an exact rational.
    const std::optional<std::vector<Rational>>& exact() const { return exact_; }

    void check_paired(const BlockStructure& bs) const;
    std::string str() const;

private:
    std::vector<double> betas_;
    std::optional<std::vector<Rational>> exact_;
    double total_ = 0.0;
};

/// A point of R^d together with the block structure used to slice it.
struct BlockPoint {
    std::vector<double> coords;

    std::span<const double> block(const BlockStructure& bs, int i) const {
        return bs.block(std::span<const double>(coords), i);
    }
};

struct RatePrediction {
    std::vector<double> k;  // beta-adjusted dimensions (d_i + beta_i) / (1 + beta_i)
    double k_max = 1.0;
    int count_k_max = 1;
    double exponent = 0.0;  // (k_max - 1) / (k_max + 1)
    int log_power = 0;      // count_k_max - 1

    std::string str() const;
};

/// h(Z_d, w) = sum_i ||w^(i)||_2.
double support_function(const BlockStructure& bs, std::span<const double> w);

/// max_i ||x^(i)||_2 <= 1 + tolerance. A negative tolerance gives open-ball semantics.
bool contains(const BlockStructure& bs, std::span<const double> x, double tolerance = 0.0);

/// Growth-rate prediction n^{(k_max-1)/(k_max+1)} (ln n)^{#k_max - 1}.
/// Throws DomainError if any beta is negative.
RatePrediction predict_rate(const BlockStructure& bs, const BetaParams& bp);

/// Vol_k(B_2^k) = pi^{k/2} / Gamma(k/2 + 1).
double unit_ball_volume(int k);

/// sigma_{k-1}(S^{k-1}) = 2 pi^{k/2} / Gamma(k/2).
double sphere_area(int k);

/// Vol_d(Z_d) = prod_i Vol(B_2^{d_i}).
double body_volume(const BlockStructure& bs);

}  // namespace blockbeta
