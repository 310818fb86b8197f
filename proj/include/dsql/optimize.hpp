#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace dsql::optimize {

/// Result of a 1-D scalar minimization.
struct MinResult {
    double x;     ///< Argmin
    double value; ///< Minimum value
};

/// Deterministic 1-D minimizer: coarse grid over (lo, hi] followed by
/// golden-section refinement around the best grid cell. Grid endpoints are
/// open at lo (the grid starts one step in), matching estimators with a
/// singularity at the lower edge.
///
/// Deliberately derivative-free and deterministic so that scan outputs are
/// reproducible bit-for-bit across platforms and thread counts.
template <typename F>
MinResult minimize_grid_golden(F&& f, double lo, double hi,
                               std::size_t grid_points = 1024,
                               double tol = 1e-12) {
    const double step = (hi - lo) / static_cast<double>(grid_points);
    double best_x = lo + step;
    double best_v = f(best_x);
    for (std::size_t i = 2; i <= grid_points; ++i) {
        const double x = lo + step * static_cast<double>(i);
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }

    // Bracket one grid cell on each side of the best sample.
    double a = best_x - step;
    double b = best_x + step;
    if (a <= lo) a = lo + 0.5 * step * 1e-6;
    if (b > hi) b = hi;

    constexpr double invphi = 0.6180339887498949;  // 1/phi
    constexpr double invphi2 = 0.3819660112501051; // 1/phi^2
    double h = b - a;
    double x1 = a + invphi2 * h;
    double x2 = a + invphi * h;
    double f1 = f(x1);
    double f2 = f(x2);
    // ~100 iterations shrink the bracket by phi^-100; tol guards short spans.
    for (int it = 0; it < 200 && h > tol * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            h = b - a;
            x1 = a + invphi2 * h;
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            h = b - a;
            x2 = a + invphi * h;
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    MinResult r{xm, fm};
    if (f1 < r.value) r = {x1, f1};
    if (f2 < r.value) r = {x2, f2};
    if (best_v < r.value) r = {best_x, best_v};
    return r;
}

} // namespace dsql::optimize
