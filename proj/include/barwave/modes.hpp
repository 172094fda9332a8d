#pragma once

/// @file modes.hpp
/// Fundamental solutions, eigenmodes and characteristic functions at a
/// complex spectral argument s.
///
///   phi   : left boundary condition,  phi(0, s) = 1
///   psi   : right boundary condition, psi(L, s) = 1
///   phi_a : phi continued across the damper with the derivative jump 2 h3 (s/c) phi(a)
///   psi_a : mirror image of phi_a
///
/// All are evaluated through their exponential forms. The characteristic
/// function Delta_a additionally has its largest exponent factored out so that
/// residual checks stay finite far off the imaginary axis.

#include <barwave/params.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace barwave {

using cplx = std::complex<double>;

/// Delta_a(s) = value * exp(log_scale). `magnitude` is the sum of the moduli of
/// the four exponential terms in the same scaling, so |value| / magnitude is
/// a dimensionless relative residual.
struct CharFunction {
    cplx value;
    double log_scale = 0.0;
    double magnitude = 0.0;

    [[nodiscard]] cplx unscaled() const { return value * std::exp(log_scale); }
    [[nodiscard]] double relative() const { return magnitude > 0.0 ? std::abs(value) / magnitude : 0.0; }
};

class ModeBasis {
public:
    explicit ModeBasis(const Params& p) : p_(p) {}

    [[nodiscard]] const Params& params() const { return p_; }

    [[nodiscard]] cplx phi(double x, cplx s) const {
        const cplx e = std::exp(s * x / p_.c);
        return 0.5 * ((1.0 + p_.h1) * e + (1.0 - p_.h1) / e);
    }

    [[nodiscard]] cplx psi(double x, cplx s) const {
        const cplx e = std::exp(s * (p_.L - x) / p_.c);
        return 0.5 * ((1.0 + p_.h2) * e + (1.0 - p_.h2) / e);
    }

    /// Eigenmode candidate; H(0) = 1, so x = a takes the right-hand branch
    /// (the correction vanishes there anyway).
    [[nodiscard]] cplx phi_a(double x, cplx s) const {
        cplx v = phi(x, s);
        if (x >= p_.a && p_.h3 != 0.0) v += 2.0 * p_.h3 * phi(p_.a, s) * std::sinh(s * (x - p_.a) / p_.c);
        return v;
    }

    [[nodiscard]] cplx psi_a(double x, cplx s) const {
        cplx v = psi(x, s);
        if (x <= p_.a && p_.h3 != 0.0) v += 2.0 * p_.h3 * psi(p_.a, s) * std::sinh(s * (p_.a - x) / p_.c);
        return v;
    }

    /// Delta(s) = -(c/s) W[phi, psi], the characteristic function without the damper.
    [[nodiscard]] cplx delta(cplx s) const {
        const cplx e = std::exp(s * p_.L / p_.c);
        return 0.5 * ((1.0 + p_.h1) * (1.0 + p_.h2) * e - (1.0 - p_.h1) * (1.0 - p_.h2) / e);
    }

    [[nodiscard]] cplx delta_a(cplx s) const { return delta_a_scaled(s).unscaled(); }

    /// Four-exponential form of Delta_a with exp(|Re s| L / c) factored out.
    [[nodiscard]] CharFunction delta_a_scaled(cplx s) const {
        const auto [coef, expo] = delta_a_terms();
        CharFunction out;
        out.log_scale = std::abs(s.real()) * p_.L / p_.c;
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx t = coef[j] * std::exp(s * expo[j] / p_.c - out.log_scale);
            out.value += t;
            out.magnitude += std::abs(t);
        }
        return out;
    }

    /// Coefficients and spatial exponents of Delta_a(s) = sum_j coef_j exp(expo_j s / c).
    [[nodiscard]] std::pair<std::array<double, 4>, std::array<double, 4>> delta_a_terms() const {
        const double h1 = p_.h1, h2 = p_.h2, h3 = p_.h3;
        const double d = p_.L - 2.0 * p_.a;
        return {{0.5 * (1 + h1) * (1 + h2) * (1 + h3), -0.5 * (1 - h1) * (1 - h2) * (1 - h3),
                 0.5 * (1 - h1) * (1 + h2) * h3, 0.5 * (1 + h1) * (1 - h2) * h3},
                {p_.L, -p_.L, d, -d}};
    }

private:
    Params p_;
};

}  // namespace barwave
