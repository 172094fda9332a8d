#pragma once

/// @file critical.hpp
/// Closed-form kernels for transparent ends, where no eigenvalues exist and
/// the modal series does not apply:
///
///   h2 = 1, h3 = 0:  Gamma = (c/2) [H(ct - |x-xi|) + r1 H(ct - (x+xi))],        r1 = (1-h1)/(1+h1)
///   h1 = 1, h3 = 0:  Gamma = (c/2) [H(ct - |x-xi|) + r2 H(ct - (2L-x-xi))],     r2 = (1-h2)/(1+h2)
///   h1 = h2 = 1:     Gamma = c/(2(1+h3)) [H(ct - |x-xi|)
///                                  + h3 Ha(x,xi) (H(ct - |x-xi|) - H(ct - |x+xi-2a|))]
///
/// Ha(x, xi) = 1 when x and xi lie on the same side of a. H(0) = 1 throughout.

#include <barwave/errors.hpp>
#include <barwave/green.hpp>
#include <barwave/params.hpp>
#include <barwave/profile.hpp>
#include <barwave/quadrature.hpp>
#include <barwave/response.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace barwave {

namespace detail {

inline bool near(double v, double target) { return std::abs(v - target) < kFlagTolerance; }

inline void require_right_transparent(const Params& p) {
    if (!near(p.h2, 1.0) || !near(p.h3, 0.0)) throw DomainError("right-transparent kernel requires h2 = 1, h3 = 0");
    if (near(p.h1, -1.0)) throw SuperInstability("h1 = -1: solution breaks down when a wave reaches x = 0");
}

inline void require_left_transparent(const Params& p) {
    if (!near(p.h1, 1.0) || !near(p.h3, 0.0)) throw DomainError("left-transparent kernel requires h1 = 1, h3 = 0");
    if (near(p.h2, -1.0)) throw SuperInstability("h2 = -1: solution breaks down when a wave reaches x = L");
}

inline void require_both_transparent(const Params& p) {
    if (!near(p.h1, 1.0) || !near(p.h2, 1.0)) throw DomainError("both-transparent kernel requires h1 = h2 = 1");
    if (near(p.h3, -1.0)) throw SuperInstability("h3 = -1: solution breaks down when a wave reaches the damper");
}

}  // namespace detail

inline double gamma_right_transparent(double x, double xi, double t, const Params& p) {
    detail::require_right_transparent(p);
    const double ct = p.c * t;
    const double r = (1 - p.h1) / (1 + p.h1);
    return 0.5 * p.c * (detail::heaviside(ct - std::abs(x - xi)) + r * detail::heaviside(ct - (x + xi)));
}

inline double gamma_left_transparent(double x, double xi, double t, const Params& p) {
    detail::require_left_transparent(p);
    const double ct = p.c * t;
    const double r = (1 - p.h2) / (1 + p.h2);
    return 0.5 * p.c * (detail::heaviside(ct - std::abs(x - xi)) + r * detail::heaviside(ct - (2 * p.L - x - xi)));
}

inline double gamma_both_transparent(double x, double xi, double t, const Params& p) {
    detail::require_both_transparent(p);
    const double ct = p.c * t;
    const double direct = detail::heaviside(ct - std::abs(x - xi));
    const double mirror = detail::heaviside(ct - std::abs(x + xi - 2 * p.a));
    const double Ha = same_side_indicator(x, xi, p.a);
    return p.c / (2 * (1 + p.h3)) * (direct + p.h3 * Ha * (direct - mirror));
}

class RightTransparentKernel {
public:
    explicit RightTransparentKernel(const Params& p) : p_(p) { detail::require_right_transparent(p); }
    [[nodiscard]] const Params& params() const { return p_; }
    [[nodiscard]] double value(double x, double xi, double t) const { return gamma_right_transparent(x, xi, t, p_); }
    [[nodiscard]] std::vector<Front> fronts(double x) const {
        const double r = (1 - p_.h1) / (1 + p_.h1);
        return {{0.5 * p_.c, 0.0, p_.L, x}, {0.5 * p_.c * r, 0.0, p_.L, -x}};
    }

private:
    Params p_;
};

class LeftTransparentKernel {
public:
    explicit LeftTransparentKernel(const Params& p) : p_(p) { detail::require_left_transparent(p); }
    [[nodiscard]] const Params& params() const { return p_; }
    [[nodiscard]] double value(double x, double xi, double t) const { return gamma_left_transparent(x, xi, t, p_); }
    [[nodiscard]] std::vector<Front> fronts(double x) const {
        const double r = (1 - p_.h2) / (1 + p_.h2);
        return {{0.5 * p_.c, 0.0, p_.L, x}, {0.5 * p_.c * r, 0.0, p_.L, 2 * p_.L - x}};
    }

private:
    Params p_;
};

class BothTransparentKernel {
public:
    explicit BothTransparentKernel(const Params& p) : p_(p) { detail::require_both_transparent(p); }
    [[nodiscard]] const Params& params() const { return p_; }
    [[nodiscard]] double value(double x, double xi, double t) const { return gamma_both_transparent(x, xi, t, p_); }
    [[nodiscard]] std::vector<Front> fronts(double x) const {
        const double c = p_.c, h3 = p_.h3, a = p_.a, L = p_.L;
        const double through = c / (2 * (1 + h3));
        const double reflected = -c * h3 / (2 * (1 + h3));
        if (x < a) return {{0.5 * c, 0.0, a, x}, {reflected, 0.0, a, 2 * a - x}, {through, a, L, x}};
        return {{through, 0.0, a, x}, {0.5 * c, a, L, x}, {reflected, a, L, 2 * a - x}};
    }

private:
    Params p_;
};

inline ResponseField respond_right_transparent(const Params& p, const InitialData& data, const Forcing& force,
                                               const ResponseGrid& grid) {
    return respond_kernel(RightTransparentKernel(p), data, force, grid, "right_transparent");
}

inline ResponseField respond_left_transparent(const Params& p, const InitialData& data, const Forcing& force,
                                              const ResponseGrid& grid) {
    return respond_kernel(LeftTransparentKernel(p), data, force, grid, "left_transparent");
}

/// h1 = h2 = 1 response from pre-evaluated integrals: point values of u0,
/// integrals of v0 along characteristics, and force integrals over the
/// domains of dependence. Independent of respond_kernel; the two must agree.
inline ResponseField respond_both_transparent(const Params& p, const InitialData& data, const Forcing& force,
                                              const ResponseGrid& grid) {
    detail::require_both_transparent(p);
    const double c = p.c, L = p.L, a = p.a, h3 = p.h3;
    const double refl = -h3 / (2 * (1 + h3)), thru = 1.0 / (2 * (1 + h3));
    const auto breaks = data_breakpoints(p, data, force);
    const quad::Options qopt{1e-13, 20};
    auto H = [](double v) { return detail::heaviside(v); };
    // Data vanish outside the bar.
    auto f = [&](double xi) { return (xi < 0.0 || xi > L) ? 0.0 : data.u0(xi); };
    // int over tau in [t0, t1] of v0(alpha + beta tau), beta = +-c
    auto gint = [&](double alpha, double beta, double t0, double t1) {
        if (!(t1 > t0)) return 0.0;
        const double e0 = alpha + beta * t0, e1 = alpha + beta * t1;
        const double lo = std::max(0.0, std::min(e0, e1)), hi = std::min(L, std::max(e0, e1));
        return quad::integrate(data.v0, lo, hi, breaks, qopt) / c;
    };
    // int_0^T p(xi, tau) d tau for T possibly negative
    auto pcum = [&](double xi, double T) {
        if (T <= 0.0) return 0.0;
        double v = 0.0;
        for (const auto& ft : force.terms) v += ft.space(xi) * ft.time.moment(0, T);
        return v;
    };

    auto field = make_field(grid, "both_transparent");
    const std::size_t nx = grid.x.size(), nt = grid.t.size();
    const double u00 = data.u0(0.0), u0L = data.u0(L), u0a = data.u0(a);
    parallel_for(nx * nt, [&](std::size_t idx) {
        const std::size_t ix = idx % nx, it = idx / nx;
        const double x = grid.x[ix], t = grid.t[it], ct = c * t;
        double u = (u00 * gamma_both_transparent(x, 0.0, t, p) + u0L * gamma_both_transparent(x, L, t, p) +
                    2 * h3 * u0a * gamma_both_transparent(x, a, t, p)) /
                   c;
        const bool left = x < a;
        const double d = std::abs(a - x) / c;

        if (!data.u0.is_zero()) {
            if (left) {
                u += refl * f(2 * a - x - ct) * H(t - d) + 0.5 * f(x - ct) + 0.5 * f(x + ct) * H(d - t) +
                     thru * f(x + ct) * H(t - d);
            } else {
                u += refl * f(2 * a - x + ct) * H(t - d) + 0.5 * f(x + ct) + 0.5 * f(x - ct) * H(d - t) +
                     thru * f(x - ct) * H(t - d);
            }
        }
        if (!data.v0.is_zero()) {
            const double tm = std::min(t, d);
            if (left) {
                u += refl * gint(2 * a - x, -c, d, t) + 0.5 * gint(x, -c, 0.0, t) + 0.5 * gint(x, c, 0.0, tm) +
                     thru * gint(x, c, d, t);
            } else {
                u += refl * gint(2 * a - x, c, d, t) + 0.5 * gint(x, c, 0.0, t) + 0.5 * gint(x, -c, 0.0, tm) +
                     thru * gint(x, -c, d, t);
            }
        }
        if (!force.is_zero()) {
            std::vector<double> kb = breaks;
            for (double e : {x - ct, x + ct, 2 * a - x - ct, 2 * a - x + ct, x}) kb.push_back(e);
            auto I = [&](double lo, double hi, auto T) {
                return quad::integrate([&](double xi) { return pcum(xi, T(xi)); }, lo, hi, kb, qopt);
            };
            auto behind = [&](double xi) { return t - (x - xi) / c; };  // xi < x
            auto ahead = [&](double xi) { return t - (xi - x) / c; };   // xi > x
            auto mirror = [&](double xi) { return t - std::abs(x + xi - 2 * a) / c; };
            double s;
            if (left) {
                s = -h3 * I(0.0, a, mirror) + (1 + h3) * I(0.0, x, behind) + (1 + h3) * I(x, a, ahead) +
                    I(a, L, ahead);
            } else {
                s = I(0.0, a, behind) + (1 + h3) * I(a, x, behind) + (1 + h3) * I(x, L, ahead) - h3 * I(a, L, mirror);
            }
            u += s / (2 * c * (1 + h3));
        }
        field.at(it, ix) = u;
    });
    return field;
}

}  // namespace barwave
