#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rankone/errors.hpp"

namespace rankone::detail {

struct ValueAndSlope {
    double value;
    double slope;
};

inline constexpr double kBisectionRelWidth = 1e-13;
inline constexpr int kMaxNewtonSteps = 5;

// Root of a function increasing on the open interval (lo, hi) with a single
// sign change from negative to positive. The endpoints are never evaluated,
// so they may be poles. Bisection shrinks the bracket to 1e-13 * scale, then
// Newton polishes; a Newton step that leaves the bracket is discarded.
// Bisection then closes the bracket down to adjacent doubles, since Newton
// can stall a few ulps short. The returned point is the probe with the
// smallest |f|.
template <class Fn>
double increasing_root(Fn&& eval, double lo, double hi, double scale) {
    if (!(lo < hi)) throw Error(ErrorCode::BracketFailure, "empty bracket");
    const double width = kBisectionRelWidth * scale;
    double best_x = 0.5 * (lo + hi);
    double best_abs = std::numeric_limits<double>::infinity();

    auto probe = [&](double x) {
        const ValueAndSlope v = eval(x);
        if (std::isnan(v.value)) {
            throw Error(ErrorCode::BracketFailure, "secular function is NaN at " + std::to_string(x));
        }
        if (std::abs(v.value) < best_abs) {
            best_abs = std::abs(v.value);
            best_x = x;
        }
        return v;
    };

    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const ValueAndSlope v = probe(mid);
        if (v.value == 0.0) return mid;
        (v.value < 0.0 ? lo : hi) = mid;
    }

    double x = best_x;
    for (int step = 0; step < kMaxNewtonSteps; ++step) {
        const ValueAndSlope v = probe(x);
        if (v.value == 0.0) return x;
        (v.value < 0.0 ? lo : hi) = x;
        if (!(v.slope > 0.0)) break;
        const double next = x - v.value / v.slope;
        if (!(next > lo && next < hi)) break;
        if (next == x) break;
        x = next;
    }
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const ValueAndSlope v = probe(mid);
        if (v.value == 0.0) return mid;
        (v.value < 0.0 ? lo : hi) = mid;
    }
    return best_x;
}

}  // namespace rankone::detail
