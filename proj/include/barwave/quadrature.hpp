#pragma once

/// @file quadrature.hpp
/// Adaptive Gauss-Kronrod with user breakpoints and fixed Gauss-Legendre panels.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace barwave::quad {

struct Options {
    double rel_tol = 1e-12;
    unsigned max_depth = 20;
};

/// Sorted interior breakpoints restricted to (lo, hi), with lo and hi appended.
inline std::vector<double> partition(double lo, double hi, const std::vector<double>& breaks) {
    std::vector<double> pts{lo};
    for (double b : breaks)
        if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

namespace detail {

/// Bisection on GK31 until the error estimate is below the tolerance for
/// the sub-interval's share of the length. A segment that is already
/// resolved to 1e-9 of its own int |f| and whose halves do not improve on it
/// has hit the rounding floor of f and is accepted.
template <class F>
auto refine(F& f, double a, double b, decltype(f(a)) est, double err, double l1, double tol_per_length,
            unsigned depth) -> decltype(f(a)) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (depth == 0 || err <= tol_per_length * (b - a)) return est;
    const double mid = 0.5 * (a + b);
    double e1 = 0.0, e2 = 0.0, l1a = 0.0, l1b = 0.0;
    const auto left = Rule::integrate(f, a, mid, 0, 0.0, &e1, &l1a);
    const auto right = Rule::integrate(f, mid, b, 0, 0.0, &e2, &l1b);
    if (err <= 1e-9 * l1 && e1 + e2 >= err) return left + right;
    return refine(f, a, mid, left, e1, l1a, tol_per_length, depth - 1) +
           refine(f, mid, b, right, e2, l1b, tol_per_length, depth - 1);
}

template <class F>
auto adaptive(F& f, double a, double b, double tol_per_length, unsigned depth) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0, l1 = 0.0;
    const auto est = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    return refine(f, a, b, est, err, l1, tol_per_length, depth);
}

}  // namespace detail

/// Integral over [lo, hi] of f, split at every breakpoint inside the range.
/// The tolerance is relative to int |f|, so oscillatory integrands with
/// near-total cancellation do not force refinement to the depth limit.
/// Returns 0 for empty or reversed ranges. Works for real and complex f.
template <class F>
auto integrate(F&& f, double lo, double hi, const std::vector<double>& breaks = {}, const Options& opt = {}) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    using R = decltype(f(lo));
    R total = R(0);
    if (!(hi > lo)) return total;
    const auto pts = partition(lo, hi, breaks);
    // int |f| from a first pass on a few panels per piece.
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double w = (pts[i + 1] - pts[i]) / 8.0;
        for (int k = 0; k < 8; ++k) {
            double err = 0.0, piece = 0.0;
            Rule::integrate(f, pts[i] + k * w, pts[i] + (k + 1) * w, 0, 0.0, &err, &piece);
            l1 += piece;
        }
    }
    if (l1 == 0.0) return total;
    const double per_length = opt.rel_tol * l1 / (hi - lo);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += detail::adaptive(f, pts[i], pts[i + 1], per_length, opt.max_depth);
    return total;
}

/// Composite 20-point Gauss-Legendre on `panels` equal panels per sub-interval.
/// Used where the integrand is smooth but adaptive refinement would be wasteful
/// (nested integrals, truncated series).
template <class F>
auto integrate_panels(F&& f, double lo, double hi, int panels, const std::vector<double>& breaks = {}) {
    using R = decltype(f(lo));
    R total = R(0);
    if (!(hi > lo)) return total;
    panels = std::max(panels, 1);
    const auto pts = partition(lo, hi, breaks);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double w = (pts[i + 1] - pts[i]) / panels;
        for (int k = 0; k < panels; ++k) {
            const double a = pts[i] + k * w;
            total += boost::math::quadrature::gauss<double, 20>::integrate(f, a, a + w);
        }
    }
    return total;
}

}  // namespace barwave::quad
