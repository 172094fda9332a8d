#pragma once

/// @file spectrum.hpp
/// Characteristic polynomial, its roots, and the eigenvalue ladders.
///
/// With a/L = q/p and z = exp(2 s L / (p c)), the zeros of Delta_a(s) are the
/// solutions of  A1 z^p + A2 z^(p-q) + A3 z^q + A4 = 0. Each root z_k spawns
/// an infinite ladder  s_n = (p c / 2L) [ln|z_k| + i (Arg z_k + 2 pi n)].

#include <barwave/errors.hpp>
#include <barwave/modes.hpp>
#include <barwave/params.hpp>
#include <barwave/polynomial.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace barwave {

/// Ladder half-width used when the caller does not choose one.
inline constexpr int kDefaultLadderHalfWidth = 40;

struct CharPolynomial {
    std::int64_t p = 2;  ///< degree
    std::int64_t q = 1;  ///< inner exponent
    double A1 = 0.0;     ///< coefficient of z^p
    double A2 = 0.0;     ///< coefficient of z^(p-q)
    double A3 = 0.0;     ///< coefficient of z^q
    double A4 = 0.0;     ///< constant term

    /// Dense coefficients, index j multiplies z^j. A2 and A3 share a slot when p = 2q.
    [[nodiscard]] std::vector<double> coeffs() const {
        std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
        c[static_cast<std::size_t>(p)] += A1;
        c[static_cast<std::size_t>(p - q)] += A2;
        c[static_cast<std::size_t>(q)] += A3;
        c[0] += A4;
        return c;
    }

    [[nodiscard]] cplx operator()(cplx z) const {
        const auto c = coeffs();
        return poly::horner<cplx>(c, z).value;
    }
};

inline CharPolynomial char_poly_coefficients(const Params& prm, const RationalPosition& pos) {
    const double h1 = prm.h1, h2 = prm.h2, h3 = prm.h3;
    return CharPolynomial{pos.p,
                          pos.q,
                          (1 + h1) * (1 + h2) * (1 + h3),
                          h3 * (1 - h1) * (1 + h2),
                          h3 * (1 + h1) * (1 - h2),
                          -(1 - h1) * (1 - h2) * (1 - h3)};
}

/// Throws CriticalCoefficient when A1 or A4 vanishes (some h_i = +-1); those
/// regimes have no eigenvalue ladders and belong to the closed-form solvers.
inline CharPolynomial build_char_poly(const Params& prm, const RationalPosition& pos) {
    const auto cl = classify(prm, pos);
    const CharPolynomial cp = char_poly_coefficients(prm, pos);
    if (cl.critical_flags.any() || cp.A1 == 0.0 || cp.A4 == 0.0) {
        std::string msg = "characteristic polynomial is critical (";
        for (auto f : cl.critical_flags.list()) msg += std::string(to_string(f)) + " ";
        msg += "): leading or constant coefficient vanishes";
        throw CriticalCoefficient(msg);
    }
    return cp;
}

struct RootSet {
    std::vector<cplx> roots;
    std::vector<int> multiplicities;
    int zero_multiplicity = 0;
    double residual = 0.0;

    [[nodiscard]] int total_multiplicity() const {
        int m = zero_multiplicity;
        for (int v : multiplicities) m += v;
        return m;
    }
    [[nodiscard]] bool all_simple() const {
        for (int v : multiplicities)
            if (v != 1) return false;
        return true;
    }
};

inline RootSet find_roots(const CharPolynomial& cp, const poly::RootOptions& opt = {}) {
    if (cp.A1 == 0.0) throw CriticalCoefficient("find_roots: leading coefficient A1 is zero");
    const auto c = cp.coeffs();
    auto r = poly::find_polynomial_roots(c, opt);
    return RootSet{std::move(r.values), std::move(r.multiplicities), r.zero_multiplicity, r.residual};
}

struct EigenvalueLadder {
    int k = 0;
    cplx z;
    int multiplicity = 1;
    double re_line = 0.0;   ///< common real part of every s_n
    double spacing = 0.0;   ///< Im(s_{n+1} - s_n) = p pi c / L
    std::int64_t n_min = 0;
    std::int64_t n_max = -1;
    std::vector<cplx> s;    ///< s[n - n_min]

    [[nodiscard]] cplx at(std::int64_t n) const {
        const double factor = spacing / (2.0 * std::numbers::pi);
        return {re_line, factor * (std::arg(z) + 2.0 * std::numbers::pi * static_cast<double>(n))};
    }
    [[nodiscard]] std::size_t size() const { return s.size(); }
};

namespace detail {

/// n runs over [-N, N]; for a root on the negative real axis (Arg = pi) the
/// range is [-N, N-1] so that conj(s_n) = s_{-n-1} stays inside the set.
inline EigenvalueLadder make_ladder(int k, cplx z, int mult, double factor, int half_width) {
    if (z == cplx(0.0)) throw DomainError("ladder: root z = 0 has no eigenvalues");
    EigenvalueLadder lad;
    lad.k = k;
    lad.z = z;
    lad.multiplicity = mult;
    lad.re_line = factor * std::log(std::abs(z));
    lad.spacing = factor * 2.0 * std::numbers::pi;
    const bool negative_real = z.imag() == 0.0 && z.real() < 0.0;
    lad.n_min = -half_width;
    lad.n_max = negative_real ? half_width - 1 : half_width;
    const double arg = std::arg(z);
    for (std::int64_t n = lad.n_min; n <= lad.n_max; ++n) {
        lad.s.emplace_back(lad.re_line, factor * (arg + 2.0 * std::numbers::pi * static_cast<double>(n)));
    }
    return lad;
}

}  // namespace detail

inline std::vector<EigenvalueLadder> ladder(const RootSet& roots, int half_width, const Params& prm,
                                            const RationalPosition& pos) {
    if (half_width < 0) throw DomainError("ladder: half width must be non-negative");
    const double factor = static_cast<double>(pos.p) * prm.c / (2.0 * prm.L);
    std::vector<EigenvalueLadder> out;
    for (std::size_t k = 0; k < roots.roots.size(); ++k) {
        out.push_back(detail::make_ladder(static_cast<int>(k), roots.roots[k], roots.multiplicities[k], factor,
                                          half_width));
    }
    return out;
}

/// Closed-form ladder for h3 = 0: exp(2 s L / c) = (1-h1)(1-h2) / ((1+h1)(1+h2)).
inline EigenvalueLadder eigenvalues_no_internal(const Params& prm, int half_width = kDefaultLadderHalfWidth) {
    if (std::abs(prm.h3) >= kFlagTolerance) throw DomainError("eigenvalues_no_internal requires h3 = 0");
    for (double h : {prm.h1, prm.h2}) {
        if (std::abs(h - 1.0) < kFlagTolerance || std::abs(h + 1.0) < kFlagTolerance) {
            throw CriticalCoefficient("eigenvalues_no_internal: h1 or h2 equals +-1");
        }
    }
    const double ratio = (1 - prm.h1) * (1 - prm.h2) / ((1 + prm.h1) * (1 + prm.h2));
    return detail::make_ladder(0, cplx(ratio, 0.0), 1, prm.c / (2.0 * prm.L), half_width);
}

struct MidpointQuadratic {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;  ///< (B^2 - 4AC) / 4

    /// Number of distinct vertical lines carrying the eigenvalues.
    [[nodiscard]] int line_count() const { return D > 0.0 ? 2 : 1; }
};

struct MidpointResult {
    MidpointQuadratic quadratic;
    RootSet roots;
};

/// Explicit roots z_{1,2} = (-h3 (1 - h1 h2) +- sqrt(D)) / A for a = L/2.
inline MidpointResult midpoint_roots(const Params& prm) {
    if (std::abs(prm.ratio() - 0.5) > kFlagTolerance) throw DomainError("midpoint_roots requires a = L/2");
    const double h1 = prm.h1, h2 = prm.h2, h3 = prm.h3;
    MidpointQuadratic qd;
    qd.A = (1 + h1) * (1 + h2) * (1 + h3);
    qd.B = 2 * h3 * (1 - h1 * h2);
    qd.C = -(1 - h1) * (1 - h2) * (1 - h3);
    qd.D = (1 - h1 * h1) * (1 - h2 * h2) + h3 * h3 * (h1 - h2) * (h1 - h2);
    if (std::abs(qd.A) < kFlagTolerance || std::abs(qd.C) < kFlagTolerance) {
        throw CriticalCoefficient("midpoint_roots: A or C vanishes");
    }

    MidpointResult out;
    out.quadratic = qd;
    const double half_b = 0.5 * qd.B;
    const double disc_scale = std::max({half_b * half_b, std::abs(qd.A * qd.C), 1e-300});
    if (std::abs(qd.D) <= 1e-14 * disc_scale) {
        out.roots.roots = {cplx(-half_b / qd.A, 0.0)};
        out.roots.multiplicities = {2};
    } else if (qd.D > 0.0) {
        // Cancellation-free pair: one root from the formula, the other from z1 z2 = C/A.
        const double sq = std::sqrt(qd.D);
        const double qv = -(half_b + std::copysign(sq, half_b));
        out.roots.roots = {cplx(qv / qd.A, 0.0), cplx(qd.C / qv, 0.0)};
        out.roots.multiplicities = {1, 1};
    } else {
        const double sq = std::sqrt(-qd.D);
        const cplx z1(-half_b / qd.A, sq / std::abs(qd.A));
        out.roots.roots = {z1, std::conj(z1)};
        out.roots.multiplicities = {1, 1};
    }
    const CharPolynomial cp = char_poly_coefficients(prm, RationalPosition{1, 2, 0.0});
    const auto coeffs = cp.coeffs();
    for (std::size_t i = 0; i < out.roots.roots.size(); ++i) {
        if (out.roots.multiplicities[i] == 1)
            out.roots.residual = std::max(out.roots.residual, poly::scaled_residual(coeffs, out.roots.roots[i]));
    }
    return out;
}

/// Polynomial, roots and ladders for one parameter set.
struct Spectrum {
    RationalPosition position;
    CharPolynomial poly;
    RootSet roots;
    std::vector<EigenvalueLadder> ladders;

    [[nodiscard]] std::vector<cplx> eigenvalues() const {
        std::vector<cplx> out;
        for (const auto& l : ladders) out.insert(out.end(), l.s.begin(), l.s.end());
        return out;
    }
};

inline Spectrum compute_spectrum(const Params& prm, const RationalPosition& pos,
                                 int half_width = kDefaultLadderHalfWidth) {
    Spectrum sp;
    sp.position = pos;
    sp.poly = build_char_poly(prm, pos);
    sp.roots = find_roots(sp.poly);
    sp.ladders = ladder(sp.roots, half_width, prm, pos);
    return sp;
}

/// CSV: k,n,re_s,im_s,abs_z,arg_z
inline void write_spectrum_csv(std::ostream& os, const Spectrum& sp) {
    os << "k,n,re_s,im_s,abs_z,arg_z\n";
    os.precision(17);
    for (const auto& l : sp.ladders) {
        for (std::size_t i = 0; i < l.s.size(); ++i) {
            os << l.k << ',' << (l.n_min + static_cast<std::int64_t>(i)) << ',' << l.s[i].real() << ','
               << l.s[i].imag() << ',' << std::abs(l.z) << ',' << std::arg(l.z) << '\n';
        }
    }
}

inline nlohmann::json spectrum_json(const Spectrum& sp) {
    auto arr = nlohmann::json::array();
    for (const auto& l : sp.ladders) {
        for (std::size_t i = 0; i < l.s.size(); ++i) {
            arr.push_back({{"k", l.k},
                           {"n", l.n_min + static_cast<std::int64_t>(i)},
                           {"re_s", l.s[i].real()},
                           {"im_s", l.s[i].imag()},
                           {"abs_z", std::abs(l.z)},
                           {"arg_z", std::arg(l.z)}});
        }
    }
    return arr;
}

}  // namespace barwave
