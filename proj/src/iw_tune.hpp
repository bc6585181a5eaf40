#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "selectica/interval.hpp"

namespace selectica::detail {

// Maximizes a strictly quasiconcave log-level objective over nu in the open
// interval (lo, hi): 512-point grid, then golden-section refinement around
// the best grid point to 1e-10 in nu.
inline IwTuning tune_nu(double lo, double hi,
                        const std::function<double(double)>& log_level,
                        const std::function<double(double)>& eta_of_nu) {
    constexpr int kGrid = 512;
    const double eps = 1e-12 * (hi - lo);
    double best_nu = 0.0;
    double best_val = -std::numeric_limits<double>::infinity();
    int best_k = 1;
    for (int k = 1; k <= kGrid; ++k) {
        const double nu = lo + (hi - lo) * k / (kGrid + 1.0);
        const double v = log_level(nu);
        if (v > best_val) {
            best_val = v;
            best_nu = nu;
            best_k = k;
        }
    }
    double a = (best_k == 1) ? lo + eps : lo + (hi - lo) * (best_k - 1) / (kGrid + 1.0);
    double b = (best_k == kGrid) ? hi - eps : lo + (hi - lo) * (best_k + 1) / (kGrid + 1.0);
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = log_level(x1);
    double f2 = log_level(x2);
    while (b - a > 1e-10) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = log_level(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = log_level(x2);
        }
    }
    const double nu = 0.5 * (a + b);
    const double refined = log_level(nu);
    if (best_val > refined) return {eta_of_nu(best_nu), best_nu, std::exp(best_val)};
    return {eta_of_nu(nu), nu, std::exp(refined)};
}

// The widened interval is infinitely wide exactly when the upper-tail
// quantile argument 1 - level/2 rounds to 1 in double precision.
inline bool level_unrepresentable(double level) { return 1.0 - 0.5 * level == 1.0; }

}  // namespace selectica::detail
