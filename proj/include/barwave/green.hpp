#pragma once

/// @file green.hpp
/// Laplace-domain Green's function, residue coefficients of its partial
/// fraction expansion, and the time-domain kernel
///
///   Gamma(x, xi, t) = principal part + sum_n phi_a(x, s_n) phi_a(xi, s_n) e^{s_n t} / A_n.

#include <barwave/errors.hpp>
#include <barwave/modes.hpp>
#include <barwave/params.hpp>
#include <barwave/spectrum.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace barwave {

namespace detail {

/// (e^z - 1) / z without cancellation near z = 0.
inline cplx expm1_over(cplx z) {
    if (std::abs(z) < 1e-3) {
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0;
    }
    return (std::exp(z) - 1.0) / z;
}

/// Integral over [0, len] of (P e^{k y} + Q e^{-k y})^2 dy.
inline cplx exp_pair_square_integral(cplx P, cplx Q, cplx k, double len) {
    return len * (P * P * expm1_over(2.0 * k * len) + 2.0 * P * Q + Q * Q * expm1_over(-2.0 * k * len));
}

inline double heaviside(double v) { return v >= 0.0 ? 1.0 : 0.0; }

}  // namespace detail

/// 1 when x and xi lie on the same side of a (either side counts at x = a).
inline double same_side_indicator(double x, double xi, double a) {
    return detail::heaviside(x - a) * detail::heaviside(xi - a) + detail::heaviside(a - x) * detail::heaviside(a - xi) >
                   0.0
               ? 1.0
               : 0.0;
}

/// The bracket F of G = c F / (s Delta_a), built from the exponential forms of
/// g_phipsi, g_spsi and g_sphi. The damper terms only contribute when x and xi
/// are on the same side of a.
inline cplx green_numerator(double x, double xi, cplx s, const ModeBasis& basis) {
    const Params& p = basis.params();
    const cplx k = s / p.c;
    const double h1 = p.h1, h2 = p.h2, h3 = p.h3, L = p.L, a = p.a;
    const double dif = std::abs(x - xi), sum = x + xi;

    cplx F = 0.25 * ((1 + h1) * (1 + h2) * std::exp(k * (L - dif)) + (1 - h1) * (1 + h2) * std::exp(k * (L - sum)) +
                     (1 + h1) * (1 - h2) * std::exp(-k * (L - sum)) + (1 - h1) * (1 - h2) * std::exp(-k * (L - dif)));
    if (h3 != 0.0) {
        if (x >= a && xi >= a) {
            const cplx g_spsi = 0.25 * ((1 + h2) * std::exp(k * (L - a - dif)) - (1 + h2) * std::exp(k * (L + a - sum)) +
                                        (1 - h2) * std::exp(-k * (L + a - sum)) - (1 - h2) * std::exp(-k * (L - a - dif)));
            F += 2.0 * h3 * basis.phi(a, s) * g_spsi;
        }
        if (x <= a && xi <= a) {
            const cplx g_sphi = 0.25 * ((1 + h1) * std::exp(k * (a - dif)) - (1 + h1) * std::exp(k * (sum - a)) +
                                        (1 - h1) * std::exp(-k * (sum - a)) - (1 - h1) * std::exp(-k * (a - dif)));
            F += 2.0 * h3 * basis.psi(a, s) * g_sphi;
        }
    }
    return F;
}

/// Relative threshold on |Delta_a(s)| below which s is treated as a pole.
inline constexpr double kPoleThreshold = 1e-12;

inline cplx green_laplace(double x, double xi, cplx s, const ModeBasis& basis) {
    const Params& p = basis.params();
    if (x < 0.0 || x > p.L || xi < 0.0 || xi > p.L) throw DomainError("green_laplace: x and xi must lie in [0, L]");
    if (s == cplx(0.0)) throw PoleProximity("green_laplace: s = 0 is a pole");
    const CharFunction d = basis.delta_a_scaled(s);
    if (d.relative() < kPoleThreshold) throw PoleProximity("green_laplace: s is numerically an eigenvalue");
    // Fold the factored scale of Delta_a into the numerator before dividing.
    return p.c * green_numerator(x, xi, s, basis) * std::exp(-d.log_scale) / (s * d.value);
}

struct ResidueCoefficient {
    cplx s;
    cplx A;
};

/// Integral of phi_a(xi, s)^2 over [0, L], evaluated in closed form on [0, a] and [a, L].
inline cplx modal_square_integral(cplx s, const ModeBasis& basis) {
    const Params& p = basis.params();
    const cplx k = s / p.c;
    const cplx left = detail::exp_pair_square_integral(0.5 * (1 + p.h1), 0.5 * (1 - p.h1), k, p.a);
    // phi_a(a + y) = phi(a + y) + 2 h3 phi(a) sinh(k y)
    const cplx phi_at_a = basis.phi(p.a, s);
    const cplx eka = std::exp(k * p.a);
    const cplx P = 0.5 * (1 + p.h1) * eka + p.h3 * phi_at_a;
    const cplx Q = 0.5 * (1 - p.h1) / eka - p.h3 * phi_at_a;
    const cplx right = detail::exp_pair_square_integral(P, Q, k, p.L - p.a);
    return left + right;
}

/// A_n = (2 s_n / c^2) int phi_a^2 + (h1/c) phi_a(0)^2 + (h2/c) phi_a(L)^2 + (2 h3 / c) phi_a(a)^2.
///
/// Throws MultiplicityError when A_n vanishes relative to its terms, which
/// happens exactly at non-simple eigenvalues.
inline ResidueCoefficient residue_coefficient(cplx s_n, const ModeBasis& basis, double tol = 1e-8) {
    const Params& p = basis.params();
    if (s_n == cplx(0.0)) throw DomainError("residue_coefficient: s = 0 belongs to the principal part");
    const CharFunction d = basis.delta_a_scaled(s_n);
    if (d.relative() > 1e-6) throw DomainError("residue_coefficient: s is not an eigenvalue");
    const cplx t_int = 2.0 * s_n / (p.c * p.c) * modal_square_integral(s_n, basis);
    const cplx f0 = basis.phi_a(0.0, s_n), fL = basis.phi_a(p.L, s_n), fa = basis.phi_a(p.a, s_n);
    const cplx t0 = p.h1 / p.c * f0 * f0;
    const cplx tL = p.h2 / p.c * fL * fL;
    const cplx ta = 2.0 * p.h3 / p.c * fa * fa;
    const cplx A = t_int + t0 + tL + ta;
    const double scale = std::abs(t_int) + std::abs(t0) + std::abs(tL) + std::abs(ta);
    if (std::abs(A) <= tol * scale) throw MultiplicityError("residue_coefficient: eigenvalue is not simple");
    return {s_n, A};
}

/// Closed "simplified" expression for A_n involving only h1, h3 and phi(a).
/// It agrees with residue_coefficient when h3 = 0 and differs otherwise; kept
/// as a cross-check only.
inline cplx residue_coefficient_simplified(cplx s_n, const ModeBasis& basis) {
    const Params& p = basis.params();
    const double h1 = p.h1, h3 = p.h3, L = p.L, a = p.a, c = p.c;
    const cplx fa = basis.phi(a, s_n);
    const cplx em = std::exp(-s_n * a / c), ep = std::exp(s_n * a / c);
    const cplx bracket = (2.0 * (L - 0.5 * a) * (h1 - 1) * em + 2.0 * (h1 + 1) * (L - 0.5 * a) * ep) * fa +
                         0.5 * a * (h1 - 1) * (h1 - 1) * em * em - 0.5 * a * (h1 + 1) * (h1 + 1) * ep * ep;
    return -s_n / (c * c) * (4.0 * (L - a) * fa * fa * h3 + bracket * h3 + L * (h1 * h1 - 1));
}

/// Principal part of G at s = 0.
///
/// simple:      c / ((h1 + h2 + 2 h3) s)           -> Gamma term c / (h1 + h2 + 2 h3)
/// double_pole: c1(x, xi) / s + c2 / s^2            -> Gamma term c1 + c2 t
/// The double pole is available for the family h2 = 1/h1, h3 = -(h1 + h2)/2.
class PrincipalPart {
public:
    enum class Kind { simple, double_pole };

    static PrincipalPart simple(const Params& p) {
        PrincipalPart pp(p, Kind::simple);
        pp.constant_ = p.c / p.rigid_sum();
        return pp;
    }

    static PrincipalPart double_pole(const Params& p) {
        PrincipalPart pp(p, Kind::double_pole);
        const double h1 = p.h1;
        pp.denominator_ = p.L * (h1 * h1 - 1) - p.a * (h1 * h1 * h1 * h1 - 1);
        if (std::abs(pp.denominator_) < kFlagTolerance * p.L) {
            throw UnsupportedDoublePole("principal_part: zero has multiplicity above two");
        }
        pp.c2_ = h1 * h1 * p.c * p.c / pp.denominator_;
        return pp;
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_simple() const { return kind_ == Kind::simple; }

    /// c / (h1 + h2 + 2 h3) for the simple pole.
    [[nodiscard]] double rigid_constant() const { return constant_; }
    [[nodiscard]] double c2() const { return c2_; }

    /// c1(x, xi). The damper term uses |x + xi - 2a|, which is what the residue
    /// computation gives on both sides of the damper.
    [[nodiscard]] double c1(double x, double xi) const {
        if (kind_ == Kind::simple) return constant_;
        const double h1 = p_.h1, h1sq = h1 * h1;
        const double dif = std::abs(x - xi), sum = x + xi;
        const double Ha = same_side_indicator(x, xi, p_.a);
        return h1 * p_.c / (2.0 * denominator_) *
               ((h1sq + 1) * (dif - std::abs(sum - 2.0 * p_.a)) * Ha - (h1sq + 1) * dif + (h1sq - 1) * sum + 2.0 * p_.L);
    }

    /// Contribution to Gamma(x, xi, t).
    [[nodiscard]] double gamma(double x, double xi, double t) const {
        return kind_ == Kind::simple ? constant_ : c1(x, xi) + c2_ * t;
    }
    /// Contribution to d/dt Gamma (the delta at t = 0 is dropped).
    [[nodiscard]] double gamma_t() const { return kind_ == Kind::simple ? 0.0 : c2_; }

    [[nodiscard]] cplx laplace(double x, double xi, cplx s) const {
        if (kind_ == Kind::simple) return constant_ / s;
        return c1(x, xi) / s + c2_ / (s * s);
    }

private:
    PrincipalPart(const Params& p, Kind k) : p_(p), kind_(k) {}

    Params p_;
    Kind kind_;
    double constant_ = 0.0;
    double c2_ = 0.0;
    double denominator_ = 1.0;
};

/// True for h2 = 1/h1 and h3 = -(h1 + h2)/2 (zero-damping family with rigid drift).
inline bool in_double_pole_family(const Params& p, double tol = kFlagTolerance) {
    return std::abs(p.h1 * p.h2 - 1.0) < tol && std::abs(p.h3 + 0.5 * (p.h1 + p.h2)) < tol;
}

inline PrincipalPart principal_part(const Params& p, double tol = kFlagTolerance) {
    if (std::abs(p.rigid_sum()) >= tol) return PrincipalPart::simple(p);
    if (in_double_pole_family(p, tol)) return PrincipalPart::double_pole(p);
    throw UnsupportedDoublePole(
        "principal_part: h1 + h2 + 2 h3 = 0 outside the family h2 = 1/h1, h3 = -(h1 + h2)/2");
}

/// Truncated partial-fraction expansion of G.
struct GreenExpansion {
    struct Term {
        int k = 0;
        std::int64_t n = 0;
        cplx s;
        cplx A;
    };

    Params params;
    RationalPosition position;
    PrincipalPart principal = PrincipalPart::simple(Params{0.5, 0.5, 0.0, 0.5, 1.0, 1.0});
    std::vector<Term> terms;
    int half_width = kDefaultLadderHalfWidth;

    [[nodiscard]] ModeBasis basis() const { return ModeBasis(params); }

    /// phi_a(x, s_n) for every term, in term order.
    [[nodiscard]] std::vector<cplx> mode_values(double x) const {
        const ModeBasis b(params);
        std::vector<cplx> out;
        out.reserve(terms.size());
        for (const auto& t : terms) out.push_back(b.phi_a(x, t.s));
        return out;
    }
};

/// Builds the expansion; refuses critical regimes, multiple roots and
/// unsupported double poles. Eigenvalues at s = 0 are carried by the principal part.
inline GreenExpansion build_green_expansion(const Params& prm, const RationalPosition& pos,
                                            int half_width = kDefaultLadderHalfWidth) {
    const Classification cl = classify(prm, pos);
    if (cl.critical_flags.any()) {
        std::string msg = "modal expansion is invalid in a critical regime (";
        for (auto f : cl.critical_flags.list()) msg += std::string(to_string(f)) + " ";
        msg += ")";
        throw ExpansionInvalid(msg);
    }
    GreenExpansion ge;
    ge.params = prm;
    ge.position = pos;
    ge.half_width = half_width;
    ge.principal = principal_part(prm);

    const Spectrum sp = compute_spectrum(prm, pos, half_width);
    if (!sp.roots.all_simple()) {
        throw MultiplicityError("characteristic polynomial has a multiple root; eigenvalues are not simple");
    }
    const ModeBasis basis(prm);
    const double zero_tol = 1e-9 * prm.c / prm.L;
    for (const auto& lad : sp.ladders) {
        for (std::size_t i = 0; i < lad.s.size(); ++i) {
            const cplx s = lad.s[i];
            if (std::abs(s) < zero_tol) continue;
            const auto rc = residue_coefficient(s, basis);
            ge.terms.push_back({lad.k, lad.n_min + static_cast<std::int64_t>(i), s, rc.A});
        }
    }
    return ge;
}

/// Complex value of the truncated kernel; the imaginary part is the pairing residual.
inline cplx gamma_time_complex(double x, double xi, double t, const GreenExpansion& ge) {
    const ModeBasis b(ge.params);
    cplx sum = 0.0;
    for (const auto& term : ge.terms) sum += b.phi_a(x, term.s) * b.phi_a(xi, term.s) * std::exp(term.s * t) / term.A;
    return ge.principal.gamma(x, xi, t) + sum;
}

inline double gamma_time(double x, double xi, double t, const GreenExpansion& ge) {
    return gamma_time_complex(x, xi, t, ge).real();
}

/// d/dt Gamma for t > 0.
inline double gamma_time_derivative(double x, double xi, double t, const GreenExpansion& ge) {
    const ModeBasis b(ge.params);
    cplx sum = 0.0;
    for (const auto& term : ge.terms)
        sum += term.s * b.phi_a(x, term.s) * b.phi_a(xi, term.s) * std::exp(term.s * t) / term.A;
    return ge.principal.gamma_t() + sum.real();
}

/// Truncated expansion evaluated back in the Laplace domain.
inline cplx green_expansion_laplace(double x, double xi, cplx s, const GreenExpansion& ge) {
    const ModeBasis b(ge.params);
    cplx sum = ge.principal.laplace(x, xi, s);
    for (const auto& term : ge.terms) sum += b.phi_a(x, term.s) * b.phi_a(xi, term.s) / (term.A * (s - term.s));
    return sum;
}

inline nlohmann::json expansion_json(const GreenExpansion& ge) {
    auto arr = nlohmann::json::array();
    for (const auto& t : ge.terms) {
        arr.push_back({{"k", t.k},
                       {"n", t.n},
                       {"s_re", t.s.real()},
                       {"s_im", t.s.imag()},
                       {"A_re", t.A.real()},
                       {"A_im", t.A.imag()}});
    }
    return arr;
}

}  // namespace barwave
