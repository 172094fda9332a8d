#pragma once

/// @file response.hpp
/// Vibratory response u(x, t) to initial displacement, initial velocity and
/// distributed forcing, either from the modal series or by convolving the data
/// with a time-domain kernel Gamma:
///
///   u = (1/c) [h1 u0(0) Gamma(x,0,t) + h2 u0(L) Gamma(x,L,t) + 2 h3 u0(a) Gamma(x,a,t)]
///     + (1/c^2) int [Gamma_t u0 + Gamma v0] dxi + (1/c^2) int int Gamma(x,xi,t-tau) p dxi dtau
///
/// The delta at t = 0 in L^{-1}[s G] is dropped, so u(x, 0) is reached as a limit.

#include <barwave/errors.hpp>
#include <barwave/green.hpp>
#include <barwave/modes.hpp>
#include <barwave/parallel.hpp>
#include <barwave/params.hpp>
#include <barwave/profile.hpp>
#include <barwave/quadrature.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace barwave {

struct ResponseGrid {
    std::vector<double> x;
    std::vector<double> t;

    /// nx points on [0, L] and nt points on [0, T], both endpoints included.
    static ResponseGrid uniform(double L, std::size_t nx, double T, std::size_t nt) {
        if (nx < 2 || nt < 1) throw DomainError("grid: need nx >= 2 and nt >= 1");
        ResponseGrid g;
        for (std::size_t i = 0; i < nx; ++i) g.x.push_back(L * double(i) / double(nx - 1));
        for (std::size_t k = 0; k < nt; ++k) g.t.push_back(nt == 1 ? 0.0 : T * double(k) / double(nt - 1));
        return g;
    }
};

inline constexpr std::size_t kDefaultNx = 201;
inline constexpr std::size_t kDefaultNt = 401;

struct ResponseField {
    ResponseGrid grid;
    std::vector<double> values;  ///< row-major, values[it * nx + ix]
    std::string method;
    int truncation = 0;               ///< ladder half-width; 0 for closed forms
    double max_imag_residual = 0.0;   ///< max |Im u| before taking the real part
    double rigid_term = std::numeric_limits<double>::quiet_NaN();  ///< principal-part contribution at (x0, T)

    [[nodiscard]] std::size_t nx() const { return grid.x.size(); }
    [[nodiscard]] std::size_t nt() const { return grid.t.size(); }
    [[nodiscard]] double at(std::size_t it, std::size_t ix) const { return values[it * nx() + ix]; }
    double& at(std::size_t it, std::size_t ix) { return values[it * nx() + ix]; }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline ResponseField make_field(const ResponseGrid& grid, std::string method) {
    ResponseField f;
    f.grid = grid;
    f.values.assign(grid.x.size() * grid.t.size(), 0.0);
    f.method = std::move(method);
    return f;
}

/// Sorted union of the damper position and every data breakpoint.
inline std::vector<double> data_breakpoints(const Params& p, const InitialData& d, const Forcing& f) {
    std::vector<double> b{p.a};
    b.insert(b.end(), d.u0.breakpoints.begin(), d.u0.breakpoints.end());
    b.insert(b.end(), d.v0.breakpoints.begin(), d.v0.breakpoints.end());
    for (const auto& t : f.terms) b.insert(b.end(), t.space.breakpoints.begin(), t.space.breakpoints.end());
    std::sort(b.begin(), b.end());
    return b;
}

// ---------------------------------------------------------------------------
// Modal series

/// Response from the truncated eigenmode series plus the principal part at s = 0.
inline ResponseField respond_modal(const GreenExpansion& ge, const InitialData& data, const Forcing& force,
                                   const ResponseGrid& grid) {
    const Params& p = ge.params;
    const ModeBasis basis(p);
    const double c = p.c, L = p.L, a = p.a;
    const auto breaks = data_breakpoints(p, data, force);
    const quad::Options qopt{1e-11, 18};

    // Terms ordered by |Im s| so conjugate partners are accumulated together.
    std::vector<std::size_t> order(ge.terms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(ge.terms[i].s.imag()) < std::abs(ge.terms[j].s.imag());
    });

    const std::size_t nm = order.size(), nx = grid.x.size(), nt = grid.t.size();
    const double u00 = data.u0(0.0), u0L = data.u0(L), u0a = data.u0(a);

    // Spatial projections onto each mode.
    std::vector<cplx> b0(nm);
    std::vector<std::vector<cplx>> proj(nm, std::vector<cplx>(force.terms.size()));
    parallel_for(nm, [&](std::size_t m) {
        const auto& tm = ge.terms[order[m]];
        const cplx s = tm.s;
        auto mode = [&](double xi) { return basis.phi_a(xi, s); };
        cplx iu = 0.0, iv = 0.0;
        if (!data.u0.is_zero()) iu = quad::integrate([&](double xi) -> cplx { return data.u0(xi) * mode(xi); }, 0.0, L, breaks, qopt);
        if (!data.v0.is_zero()) iv = quad::integrate([&](double xi) -> cplx { return data.v0(xi) * mode(xi); }, 0.0, L, breaks, qopt);
        b0[m] = c * p.h1 * u00 + c * p.h2 * u0L * mode(L) + 2.0 * c * p.h3 * u0a * mode(a) + s * iu + iv;
        for (std::size_t j = 0; j < force.terms.size(); ++j) {
            const auto& sp = force.terms[j].space;
            proj[m][j] = quad::integrate([&](double xi) -> cplx { return sp(xi) * mode(xi); }, 0.0, L, breaks, qopt);
        }
    });

    // U = Phi^T E with Phi(m, ix) = phi_a(x, s_m), E(m, it) = time factor.
    Eigen::MatrixXcd Phi(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(nx));
    Eigen::MatrixXcd E(static_cast<Eigen::Index>(nm), static_cast<Eigen::Index>(nt));
    parallel_for(nm, [&](std::size_t m) {
        const auto& tm = ge.terms[order[m]];
        const auto row = static_cast<Eigen::Index>(m);
        for (std::size_t ix = 0; ix < nx; ++ix) Phi(row, static_cast<Eigen::Index>(ix)) = basis.phi_a(grid.x[ix], tm.s);
        for (std::size_t it = 0; it < nt; ++it) {
            const double t = grid.t[it];
            cplx br = b0[m];
            for (std::size_t j = 0; j < force.terms.size(); ++j)
                br += proj[m][j] * force.terms[j].time.exp_moment(0, tm.s, t);
            E(row, static_cast<Eigen::Index>(it)) = std::exp(tm.s * t) * br / (c * c * tm.A);
        }
    });
    const Eigen::MatrixXcd U = Phi.transpose() * E;

    // Principal part: P(x, xi, t) = c1(x, xi) + c2 t through the kernel formula.
    const PrincipalPart& pp = ge.principal;
    const double c2 = pp.c2();
    const double int_u = data.u0.is_zero() ? 0.0 : quad::integrate(data.u0, 0.0, L, breaks, qopt);
    const double int_v = data.v0.is_zero() ? 0.0 : quad::integrate(data.v0, 0.0, L, breaks, qopt);
    std::vector<double> int_f;
    for (const auto& ft : force.terms) int_f.push_back(quad::integrate(ft.space, 0.0, L, breaks, qopt));

    auto field = make_field(grid, "modal");
    field.truncation = ge.half_width;
    std::vector<double> imag_max(nx, 0.0);
    parallel_for(nx, [&](std::size_t ix) {
        const double x = grid.x[ix];
        // x-dependent integrals of c1 against the data (constant c1 in the simple case).
        std::vector<double> kinks = breaks;
        kinks.push_back(x);
        kinks.push_back(2 * a - x);
        auto c1x = [&](double xi) { return pp.c1(x, xi); };
        const double c1v = pp.is_simple() ? pp.c1(x, 0.0) * int_v
                                          : (data.v0.is_zero() ? 0.0
                                                               : quad::integrate([&](double xi) { return c1x(xi) * data.v0(xi); },
                                                                                 0.0, L, kinks, qopt));
        std::vector<double> c1f;
        for (std::size_t j = 0; j < force.terms.size(); ++j) {
            const auto& sp = force.terms[j].space;
            c1f.push_back(pp.is_simple() ? pp.c1(x, 0.0) * int_f[j]
                                         : quad::integrate([&](double xi) { return c1x(xi) * sp(xi); }, 0.0, L, kinks, qopt));
        }
        for (std::size_t it = 0; it < nt; ++it) {
            const double t = grid.t[it];
            double r = (p.h1 * u00 * (pp.c1(x, 0.0) + c2 * t) + p.h2 * u0L * (pp.c1(x, L) + c2 * t) +
                        2 * p.h3 * u0a * (pp.c1(x, a) + c2 * t)) /
                       c;
            r += (c2 * int_u + c1v + c2 * t * int_v) / (c * c);
            for (std::size_t j = 0; j < force.terms.size(); ++j) {
                const auto& g = force.terms[j].time;
                const double g0 = g.moment(0, t);
                r += (c1f[j] * g0 + c2 * int_f[j] * (t * g0 - g.moment(1, t))) / (c * c);
            }
            const cplx u = U(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(it));
            field.at(it, ix) = r + u.real();
            imag_max[ix] = std::max(imag_max[ix], std::abs(u.imag()));
            if (ix == 0 && it + 1 == nt) field.rigid_term = r;
        }
    });
    for (double v : imag_max) field.max_imag_residual = std::max(field.max_imag_residual, v);
    return field;
}

// ---------------------------------------------------------------------------
// Kernel convolution

/// One Heaviside piece of a closed-form kernel: for xi in [lo, hi],
/// weight * H(c t - |xi - center|).
struct Front {
    double weight = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
};

/// Kernel given by Heaviside pieces; Gamma_t integrates to point evaluations.
template <class K>
concept WavefrontKernel = requires(const K& k, double x, double xi, double t) {
    { k.params() } -> std::convertible_to<Params>;
    { k.fronts(x) } -> std::convertible_to<std::vector<Front>>;
    { k.value(x, xi, t) } -> std::convertible_to<double>;
};

/// Smooth kernel sampled pointwise; integrals use fixed Gauss-Legendre panels.
template <class K>
concept PointKernel = requires(const K& k, double x, double xi, double t) {
    { k.params() } -> std::convertible_to<Params>;
    { k.value(x, xi, t) } -> std::convertible_to<double>;
    { k.time_derivative(x, xi, t) } -> std::convertible_to<double>;
    { k.panels(t) } -> std::convertible_to<int>;
};

/// Truncated modal series as a point kernel.
class ModalKernel {
public:
    explicit ModalKernel(const GreenExpansion& ge) : ge_(&ge) {
        for (const auto& t : ge.terms) max_freq_ = std::max(max_freq_, std::abs(t.s.imag()));
    }

    [[nodiscard]] const Params& params() const { return ge_->params; }
    [[nodiscard]] double value(double x, double xi, double t) const { return gamma_time(x, xi, t, *ge_); }
    [[nodiscard]] double time_derivative(double x, double xi, double t) const {
        return gamma_time_derivative(x, xi, t, *ge_);
    }
    /// Panels per sub-interval of [0, L]: about one per spatial wavelength of the top mode.
    [[nodiscard]] int panels(double) const {
        const Params& p = ge_->params;
        return 2 + static_cast<int>(max_freq_ * p.L / (2.0 * std::numbers::pi * p.c));
    }
    [[nodiscard]] const GreenExpansion& expansion() const { return *ge_; }

private:
    const GreenExpansion* ge_;
    double max_freq_ = 0.0;
};

namespace detail {

/// Point terms of (1/c^2) int Gamma_t u0 for a wavefront kernel. Each front
/// contributes where xi = center +- c t lies in its interval; one-sided
/// membership tests give the t -> 0+ limit at t = 0.
inline double front_point_terms(const std::vector<Front>& fr, const Profile& u0, double ct, double c) {
    double out = 0.0;
    for (const auto& f : fr) {
        const double xp = f.center + ct, xm = f.center - ct;
        if (xp >= f.lo && xp < f.hi) out += f.weight * u0(xp);
        if (xm > f.lo && xm <= f.hi) out += f.weight * u0(xm);
    }
    return out / c;
}

}  // namespace detail

/// u(x, t) by convolution with a closed-form wavefront kernel.
template <WavefrontKernel K>
ResponseField respond_kernel(const K& kernel, const InitialData& data, const Forcing& force, const ResponseGrid& grid,
                             std::string method = "kernel") {
    const Params p = kernel.params();
    const double c = p.c, L = p.L, a = p.a;
    const double u00 = data.u0(0.0), u0L = data.u0(L), u0a = data.u0(a);
    const auto breaks = data_breakpoints(p, data, force);
    const quad::Options qopt{1e-13, 20};
    auto field = make_field(grid, std::move(method));
    const std::size_t nx = grid.x.size(), nt = grid.t.size();

    parallel_for(nx * nt, [&](std::size_t idx) {
        const std::size_t ix = idx % nx, it = idx / nx;
        const double x = grid.x[ix], t = grid.t[it], ct = c * t;
        const auto fr = kernel.fronts(x);
        double u = (p.h1 * u00 * kernel.value(x, 0.0, t) + p.h2 * u0L * kernel.value(x, L, t) +
                    2 * p.h3 * u0a * kernel.value(x, a, t)) /
                   c;
        if (!data.u0.is_zero()) u += detail::front_point_terms(fr, data.u0, ct, c);
        if (!data.v0.is_zero()) {
            for (const auto& f : fr) {
                const double lo = std::max(f.lo, f.center - ct), hi = std::min(f.hi, f.center + ct);
                u += f.weight * quad::integrate(data.v0, lo, hi, breaks, qopt) / (c * c);
            }
        }
        for (const auto& ft : force.terms) {
            for (const auto& f : fr) {
                // Kinks in tau where a front edge crosses an interval end or a data breakpoint.
                std::vector<double> tb = ft.time.breakpoints;
                std::vector<double> edges = ft.space.breakpoints;
                edges.push_back(f.lo);
                edges.push_back(f.hi);
                for (double e : edges) tb.push_back(t - std::abs(e - f.center) / c);
                auto inner = [&](double tau) {
                    const double r = c * (t - tau);
                    const double lo = std::max(f.lo, f.center - r), hi = std::min(f.hi, f.center + r);
                    if (!(hi > lo)) return 0.0;
                    return ft.time(tau) * quad::integrate(ft.space, lo, hi, breaks, qopt);
                };
                u += f.weight * quad::integrate(inner, 0.0, t, tb, qopt) / (c * c);
            }
        }
        field.at(it, ix) = u;
    });
    return field;
}

/// u(x, t) by convolution with a smooth kernel (e.g. the truncated modal series).
template <PointKernel K>
ResponseField respond_kernel(const K& kernel, const InitialData& data, const Forcing& force, const ResponseGrid& grid,
                             std::string method = "kernel") {
    const Params p = kernel.params();
    const double c = p.c, L = p.L, a = p.a;
    const double u00 = data.u0(0.0), u0L = data.u0(L), u0a = data.u0(a);
    const auto breaks = data_breakpoints(p, data, force);
    auto field = make_field(grid, std::move(method));
    const std::size_t nx = grid.x.size(), nt = grid.t.size();

    parallel_for(nx * nt, [&](std::size_t idx) {
        const std::size_t ix = idx % nx, it = idx / nx;
        const double x = grid.x[ix], t = grid.t[it];
        std::vector<double> kinks = breaks;
        kinks.push_back(x);
        const int np = kernel.panels(t);
        double u = (p.h1 * u00 * kernel.value(x, 0.0, t) + p.h2 * u0L * kernel.value(x, L, t) +
                    2 * p.h3 * u0a * kernel.value(x, a, t)) /
                   c;
        u += quad::integrate_panels(
                 [&](double xi) {
                     double v = 0.0;
                     if (!data.u0.is_zero()) v += kernel.time_derivative(x, xi, t) * data.u0(xi);
                     if (!data.v0.is_zero()) v += kernel.value(x, xi, t) * data.v0(xi);
                     return v;
                 },
                 0.0, L, np, kinks) /
             (c * c);
        for (const auto& ft : force.terms) {
            const int tp = 2 + static_cast<int>(t * np * c / L);
            auto inner = [&](double tau) {
                return ft.time(tau) * quad::integrate_panels(
                                          [&](double xi) { return kernel.value(x, xi, t - tau) * ft.space(xi); }, 0.0,
                                          L, np, kinks);
            };
            u += quad::integrate_panels(inner, 0.0, t, tp, ft.time.breakpoints) / (c * c);
        }
        field.at(it, ix) = u;
    });
    return field;
}

// ---------------------------------------------------------------------------
// Diagnostics and output

/// E(t) = 1/2 int (u_t^2 + c^2 u_x^2) dx from grid differences (trapezoidal in x).
inline std::vector<double> energy_trace(const ResponseField& f, double c) {
    const std::size_t nx = f.nx(), nt = f.nt();
    std::vector<double> out(nt, 0.0);
    if (nx < 2 || nt < 2) return out;
    const auto& xs = f.grid.x;
    const auto& ts = f.grid.t;
    for (std::size_t it = 0; it < nt; ++it) {
        const std::size_t i0 = it == 0 ? 0 : it - 1, i1 = it + 1 == nt ? it : it + 1;
        const double dt = ts[i1] - ts[i0];
        double e = 0.0;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t j0 = ix == 0 ? 0 : ix - 1, j1 = ix + 1 == nx ? ix : ix + 1;
            const double ut = (f.at(i1, ix) - f.at(i0, ix)) / dt;
            const double ux = (f.at(it, j1) - f.at(it, j0)) / (xs[j1] - xs[j0]);
            const double w = 0.5 * ((ix > 0 ? xs[ix] - xs[ix - 1] : 0.0) + (ix + 1 < nx ? xs[ix + 1] - xs[ix] : 0.0));
            e += w * 0.5 * (ut * ut + c * c * ux * ux);
        }
        out[it] = e;
    }
    return out;
}

/// Header row: "t" followed by the x samples; one row per time.
inline void write_field_csv(std::ostream& os, const ResponseField& f) {
    os.precision(12);
    os << 't';
    for (double x : f.grid.x) os << ',' << x;
    os << '\n';
    for (std::size_t it = 0; it < f.nt(); ++it) {
        os << f.grid.t[it];
        for (std::size_t ix = 0; ix < f.nx(); ++ix) os << ',' << f.at(it, ix);
        os << '\n';
    }
}

inline nlohmann::json field_json(const ResponseField& f) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t it = 0; it < f.nt(); ++it) {
        std::vector<double> row(f.values.begin() + static_cast<std::ptrdiff_t>(it * f.nx()),
                                f.values.begin() + static_cast<std::ptrdiff_t>((it + 1) * f.nx()));
        rows.push_back(row);
    }
    nlohmann::json meta{{"method", f.method},
                        {"truncation", f.truncation},
                        {"max_imag_residual", f.max_imag_residual},
                        {"max_abs", f.max_abs()}};
    meta["rigid_term"] = std::isnan(f.rigid_term) ? nlohmann::json(nullptr) : nlohmann::json(f.rigid_term);
    return {{"x", f.grid.x}, {"t", f.grid.t}, {"u", rows}, {"meta", meta}};
}

}  // namespace barwave
