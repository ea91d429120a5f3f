#pragma once

#include <span>

namespace blockbeta {

/// Sign of det[p_1 - p_0, ..., p_d - p_0] for d+1 points in R^d.
///
/// A double-precision LU evaluation is trusted when its magnitude clears a
/// Hadamard-scaled error bound; otherwise the determinant is recomputed in
/// exact rational arithmetic. Returns -1, 0 or +1.
int orientation(std::span<const double* const> pts, int d);

/// Exact-only variant, for tests and for callers that already know the
/// configuration is nearly degenerate.
int orientation_exact(std::span<const double* const> pts, int d);

/// Counters for how often the float filter was inconclusive (process-wide,
/// relaxed atomics; diagnostics only).
struct PredicateStats {
    unsigned long long filtered = 0;
    unsigned long long exact = 0;
};
PredicateStats predicate_stats();

}  // namespace blockbeta
