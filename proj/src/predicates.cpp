#include "blockbeta/predicates.hpp"

#include <gmpxx.h>

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace blockbeta {

namespace {

std::atomic<unsigned long long> g_filtered{0};
std::atomic<unsigned long long> g_exact{0};

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// Relative bound well above the worst-case LU backward error for d <= 8.
constexpr double kFilterTolerance = 1e-10;

}  // namespace

int orientation_exact(std::span<const double* const> pts, int d) {
    if (static_cast<int>(pts.size()) != d + 1) throw std::invalid_argument("orientation: need d+1 points");
    g_exact.fetch_add(1, std::memory_order_relaxed);
    std::vector<mpq_class> a(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a[r * d + c] = mpq_class(pts[r + 1][c]) - mpq_class(pts[0][c]);

    int sign = 1;
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int r = col; r < d; ++r)
            if (sgn(a[r * d + col]) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != col) {
            for (int c = 0; c < d; ++c) std::swap(a[pivot * d + c], a[col * d + c]);
            sign = -sign;
        }
        const mpq_class& p = a[col * d + col];
        if (sgn(p) < 0) sign = -sign;
        for (int r = col + 1; r < d; ++r) {
            if (sgn(a[r * d + col]) == 0) continue;
            const mpq_class f = a[r * d + col] / p;
            for (int c = col; c < d; ++c) a[r * d + c] -= f * a[col * d + c];
        }
    }
    return sign;
}

int orientation(std::span<const double* const> pts, int d) {
    if (static_cast<int>(pts.size()) != d + 1) throw std::invalid_argument("orientation: need d+1 points");
    SmallMatrix m(d, d);
    double hadamard = 1.0;
    for (int r = 0; r < d; ++r) {
        double sq = 0.0;
        for (int c = 0; c < d; ++c) {
            m(r, c) = pts[r + 1][c] - pts[0][c];
            sq += m(r, c) * m(r, c);
        }
        hadamard *= std::sqrt(sq);
    }
    if (hadamard == 0.0) return 0;
    const double det = m.partialPivLu().determinant();
    g_filtered.fetch_add(1, std::memory_order_relaxed);
    if (std::abs(det) > kFilterTolerance * hadamard) return det > 0 ? 1 : -1;
    return orientation_exact(pts, d);
}

PredicateStats predicate_stats() {
    return {g_filtered.load(std::memory_order_relaxed), g_exact.load(std::memory_order_relaxed)};
}

}  // namespace blockbeta
