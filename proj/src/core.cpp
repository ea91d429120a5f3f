#include "blockbeta/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace blockbeta {

namespace {

std::int64_t checked_pow10(int digits) {
    if (digits > 17) throw std::invalid_argument("rational: too many decimal digits");
    std::int64_t p = 1;
    for (int i = 0; i < digits; ++i) p *= 10;
    return p;
}

Rational normalized(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

std::int64_t parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty integer");
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("rational: bad integer '" + s + "'");
    return v;
}

}  // namespace

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return normalized(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return normalized(parse_int(text), 1);
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("rational: bad decimal '" + text + "'");
    const std::int64_t scale = checked_pow10(static_cast<int>(frac.size()));
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    const std::int64_t f = parse_int(frac);
    const std::int64_t mag = (w < 0 ? -w : w) * scale + f;
    return normalized(negative ? -mag : mag, scale);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

BlockStructure::BlockStructure(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("block structure needs at least one block");
    offsets_.reserve(dims_.size());
    for (int d : dims_) {
        if (d < 1) throw std::invalid_argument("block dimensions must be positive");
        offsets_.push_back(total_);
        total_ += d;
    }
}

std::vector<double> BlockStructure::block_norms(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != total_)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(total_));
    std::vector<double> norms(dims_.size());
    for (int i = 0; i < blocks(); ++i) {
        double sq = 0.0;
        for (double c : block(x, i)) sq += c * c;
        norms[i] = std::sqrt(sq);
    }
    return norms;
}

std::string BlockStructure::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
    os << ')';
    return os.str();
}

BetaParams::BetaParams(std::vector<double> betas) : betas_(std::move(betas)) {
    if (betas_.empty()) throw std::invalid_argument("beta parameters need at least one block");
    for (double b : betas_) {
        if (!(b > -1.0) || !std::isfinite(b)) throw DomainError("beta exponents must be finite and > -1");
        total_ += b;
    }
}

BetaParams::BetaParams(std::vector<Rational> betas) : BetaParams([&] {
    std::vector<double> v;
    v.reserve(betas.size());
    for (const auto& r : betas) v.push_back(r.value());
    return v;
}()) {
    exact_ = std::move(betas);
}

void BetaParams::check_paired(const BlockStructure& bs) const {
    if (blocks() != bs.blocks())
        throw DimensionMismatch("beta parameters have " + std::to_string(blocks()) + " blocks, structure has " +
                                std::to_string(bs.blocks()));
}

std::string BetaParams::str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < blocks(); ++i) {
        if (i) os << ',';
        if (exact_) os << (*exact_)[i].str();
        else os << betas_[i];
    }
    os << ')';
    return os.str();
}

std::string RatePrediction::str() const {
    std::ostringstream os;
    os.precision(12);
    os << "k = (";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ", " : "") << k[i];
    os << "), k_max = " << k_max << " (x" << count_k_max << "), rate n^" << exponent;
    if (log_power > 0) os << " (ln n)^" << log_power;
    return os.str();
}

double support_function(const BlockStructure& bs, std::span<const double> w) {
    const auto norms = bs.block_norms(w);
    return std::accumulate(norms.begin(), norms.end(), 0.0);
}

bool contains(const BlockStructure& bs, std::span<const double> x, double tolerance) {
    const auto norms = bs.block_norms(x);
    return *std::max_element(norms.begin(), norms.end()) <= 1.0 + tolerance;
}

RatePrediction predict_rate(const BlockStructure& bs, const BetaParams& bp) {
    bp.check_paired(bs);
    const int m = bs.blocks();
    for (int i = 0; i < m; ++i)
        if (bp[i] < 0.0) throw DomainError("rate prediction requires beta_i >= 0 (got " + bp.str() + ")");

    RatePrediction out;
    out.k.resize(m);
    for (int i = 0; i < m; ++i) out.k[i] = (bs.dim(i) + bp[i]) / (1.0 + bp[i]);

    // compare(i, j) > 0 iff k_i > k_j; exact when the betas are rationals.
    auto compare = [&](int i, int j) -> int {
        if (const auto& ex = bp.exact()) {
            const Rational& bi = (*ex)[i];
            const Rational& bj = (*ex)[j];
            // k_i = (d_i q_i + p_i) / (q_i + p_i); denominators are positive since beta > -1.
            const __int128 lhs = static_cast<__int128>(bs.dim(i) * static_cast<__int128>(bi.den) + bi.num) *
                                 (bj.den + bj.num);
            const __int128 rhs = static_cast<__int128>(bs.dim(j) * static_cast<__int128>(bj.den) + bj.num) *
                                 (bi.den + bi.num);
            return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
        }
        const double diff = out.k[i] - out.k[j];
        if (std::abs(diff) <= 1e-12) return 0;
        return diff > 0 ? 1 : -1;
    };

    int best = 0;
    for (int i = 1; i < m; ++i)
        if (compare(i, best) > 0) best = i;
    out.k_max = out.k[best];
    out.count_k_max = 0;
    for (int i = 0; i < m; ++i)
        if (compare(i, best) == 0) ++out.count_k_max;
    out.exponent = (out.k_max - 1.0) / (out.k_max + 1.0);
    out.log_power = out.count_k_max - 1;
    return out;
}

double unit_ball_volume(int k) {
    return std::exp(0.5 * k * std::log(std::numbers::pi) - std::lgamma(0.5 * k + 1.0));
}

double sphere_area(int k) {
    return 2.0 * std::exp(0.5 * k * std::log(std::numbers::pi) - std::lgamma(0.5 * k));
}

double body_volume(const BlockStructure& bs) {
    double v = 1.0;
    for (int d : bs.dims()) v *= unit_ball_volume(d);
    return v;
}

}  // namespace blockbeta
