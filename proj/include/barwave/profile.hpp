#pragma once

/// @file profile.hpp
/// Initial data and forcing descriptions.
///
/// Spatial data are callables with a list of breakpoints where they may lose
/// smoothness; quadrature splits there. Forcing is a sum of separable terms
/// f(x) g(t); g is either a real sum of c t^m e^{lambda t} terms (integrated
/// in closed form against e^{-s t}) or an arbitrary callable.

#include <barwave/errors.hpp>
#include <barwave/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace barwave {

struct Profile {
    std::function<double(double)> f;
    std::vector<double> breakpoints;

    [[nodiscard]] bool is_zero() const { return !f; }
    double operator()(double x) const { return f ? f(x) : 0.0; }

    static Profile zero() { return {}; }

    static Profile constant(double v) {
        return {[v](double) { return v; }, {}};
    }

    /// amplitude * exp(-(x-mu)^2 / (2 sigma^2)) / (sigma sqrt(2 pi))
    static Profile gaussian(double amplitude, double mu, double sigma) {
        if (!(sigma > 0.0)) throw DomainError("gaussian: sigma must be positive");
        const double norm = amplitude / (sigma * std::sqrt(2.0 * std::numbers::pi));
        // Breakpoints at mu +- 4 sigma keep the adaptive rule from missing a narrow pulse.
        return {[=](double x) {
                    const double d = (x - mu) / sigma;
                    return norm * std::exp(-0.5 * d * d);
                },
                {mu - 4 * sigma, mu, mu + 4 * sigma}};
    }

    /// Piecewise-linear interpolation through (xs, ys); constant extension outside.
    static Profile tabulated(std::vector<double> xs, std::vector<double> ys) {
        if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("tabulated: need >= 2 matching samples");
        if (!std::is_sorted(xs.begin(), xs.end())) throw DomainError("tabulated: abscissae must be sorted");
        auto brk = xs;
        return {[xs = std::move(xs), ys = std::move(ys)](double x) {
                    if (x <= xs.front()) return ys.front();
                    if (x >= xs.back()) return ys.back();
                    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
                    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
                    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
                    return (1 - w) * ys[i] + w * ys[i + 1];
                },
                std::move(brk)};
    }

    static Profile sum(const Profile& a, const Profile& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        auto brk = a.breakpoints;
        brk.insert(brk.end(), b.breakpoints.begin(), b.breakpoints.end());
        return {[fa = a.f, fb = b.f](double x) { return fa(x) + fb(x); }, std::move(brk)};
    }
};

struct InitialData {
    Profile u0;  ///< displacement u(x, 0)
    Profile v0;  ///< velocity u_t(x, 0)
};

/// coef * t^power * e^{rate t}; a time profile takes the real part of the sum.
struct ExpPolyTerm {
    std::complex<double> coef{1.0, 0.0};
    int power = 0;
    std::complex<double> rate{0.0, 0.0};
};

namespace detail {

/// int_0^t tau^m e^{mu tau} d tau
inline std::complex<double> exp_power_integral(int m, std::complex<double> mu, double t) {
    using C = std::complex<double>;
    if (t <= 0.0) return 0.0;
    const C z = mu * t;
    if (std::abs(z) < 1.0 + 0.5 * m) {
        // sum_k z^k / (k! (m + k + 1)) times t^{m+1}
        C term = 1.0, sum = 0.0;
        for (int k = 0; k < 200; ++k) {
            const C add = term / double(m + k + 1);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
            term *= z / double(k + 1);
        }
        return sum * std::pow(t, m + 1);
    }
    // Upward recursion I_j = (t^j e^{mu t} - j I_{j-1}) / mu, stable once |mu t| > j.
    const C e = std::exp(z);
    C I = (e - 1.0) / mu;
    double tj = 1.0;
    for (int j = 1; j <= m; ++j) {
        tj *= t;
        I = (tj * e - double(j) * I) / mu;
    }
    return I;
}

}  // namespace detail

struct TimeProfile {
    std::vector<ExpPolyTerm> terms;         ///< used when `generic` is empty
    std::function<double(double)> generic;  ///< arbitrary g(t); integrated numerically
    std::vector<double> breakpoints;        ///< kinks of `generic`

    double operator()(double t) const {
        if (generic) return generic(t);
        std::complex<double> v = 0.0;
        for (const auto& tm : terms) v += tm.coef * std::pow(t, tm.power) * std::exp(tm.rate * t);
        return v.real();
    }

    static TimeProfile constant(double v) { return {{{v, 0, 0.0}}, {}, {}}; }
    static TimeProfile exponential(double amplitude, double rate) { return {{{amplitude, 0, rate}}, {}, {}}; }
    /// amplitude * sin(omega t + phase)
    static TimeProfile sinusoid(double amplitude, double omega, double phase = 0.0) {
        const std::complex<double> c = amplitude * std::exp(std::complex<double>(0.0, phase)) / std::complex<double>(0, 1);
        return {{{c, 0, std::complex<double>(0.0, omega)}}, {}, {}};
    }
    static TimeProfile poly_exp(double amplitude, int power, double rate) {
        if (power < 0) throw DomainError("poly_exp: power must be non-negative");
        return {{{amplitude, power, rate}}, {}, {}};
    }
    static TimeProfile from_function(std::function<double(double)> g, std::vector<double> breaks = {}) {
        return {{}, std::move(g), std::move(breaks)};
    }

    /// int_0^t tau^k g(tau) e^{-s tau} d tau
    [[nodiscard]] std::complex<double> exp_moment(int k, std::complex<double> s, double t) const {
        using C = std::complex<double>;
        if (t <= 0.0) return 0.0;
        if (generic) {
            const int panels = 4 + static_cast<int>(std::abs(s.imag()) * t / 4.0);
            return quad::integrate_panels(
                [&](double tau) -> C { return std::pow(tau, k) * generic(tau) * std::exp(-s * tau); }, 0.0, t,
                panels, breakpoints);
        }
        C out = 0.0;
        for (const auto& tm : terms) {
            out += 0.5 * (tm.coef * detail::exp_power_integral(tm.power + k, tm.rate - s, t) +
                          std::conj(tm.coef) * detail::exp_power_integral(tm.power + k, std::conj(tm.rate) - s, t));
        }
        return out;
    }

    /// int_0^t tau^k g(tau) d tau
    [[nodiscard]] double moment(int k, double t) const { return exp_moment(k, 0.0, t).real(); }
};

struct ForceTerm {
    Profile space;
    TimeProfile time;
};

/// p(x, t) = sum_j f_j(x) g_j(t)
struct Forcing {
    std::vector<ForceTerm> terms;

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    double operator()(double x, double t) const {
        double v = 0.0;
        for (const auto& tm : terms) v += tm.space(x) * tm.time(t);
        return v;
    }
};

}  // namespace barwave
