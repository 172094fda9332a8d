#include <barwave/green.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

using namespace barwave;

namespace {

// Reference solution built directly from cosh/sinh, independent of ModeBasis.
struct Oracle {
    double h1, h2, h3, a, L, c;

    cplx phi(double x, cplx s) const {
        const cplx k = s / c;
        return std::cosh(k * x) + h1 * std::sinh(k * x);
    }
    cplx psi(double x, cplx s) const {
        const cplx k = s / c;
        return std::cosh(k * (L - x)) + h2 * std::sinh(k * (L - x));
    }
    cplx phi_a(double x, cplx s) const {
        return x > a ? phi(x, s) + 2 * h3 * phi(a, s) * std::sinh(s / c * (x - a)) : phi(x, s);
    }
    cplx psi_a(double x, cplx s) const {
        return x < a ? psi(x, s) + 2 * h3 * psi(a, s) * std::sinh(s / c * (a - x)) : psi(x, s);
    }
    // psi_a'(0) in closed form (x = 0 lies left of the damper).
    cplx dpsi_a0(cplx s) const {
        const cplx k = s / c;
        const cplx dpsi = -k * (std::sinh(k * L) + h2 * std::cosh(k * L));
        return dpsi - 2 * h3 * psi(a, s) * k * std::cosh(k * a);
    }
    // -(c/s) W[phi_a, psi_a] at x = 0, with phi_a(0) = 1, phi_a'(0) = h1 s / c.
    cplx delta_a(cplx s) const { return h1 * psi_a(0.0, s) - dpsi_a0(s) * c / s; }
    cplx green(double x, double xi, cplx s) const {
        const double lo = std::min(x, xi), hi = std::max(x, xi);
        return c * phi_a(lo, s) * psi_a(hi, s) / (s * delta_a(s));
    }
    cplx delta_a_prime(cplx s) const {
        const double h = 1e-3 * c / L;
        return (-delta_a(s + 2 * h) + 8.0 * delta_a(s + h) - 8.0 * delta_a(s - h) + delta_a(s - 2 * h)) / (12 * h);
    }
};

const Params kP = make_params(0.3, 0.9, 0.7, 0.72, 1.8, 1.5);
const Oracle kO{0.3, 0.9, 0.7, 0.72, 1.8, 1.5};

std::vector<cplx> nonzero_eigenvalues(const Params& p, int half) {
    const auto sp = compute_spectrum(p, rationalize_position(p.a, p.L), half);
    std::vector<cplx> out;
    for (cplx s : sp.eigenvalues())
        if (std::abs(s) > 1e-9) out.push_back(s);
    return out;
}

const std::vector<std::pair<double, double>> kPairs{{0.1, 0.5}, {0.3, 1.2}, {0.9, 1.6}, {1.7, 0.05}, {0.72, 1.0}};

}  // namespace

TEST(Green, MatchesPiecewiseOracle) {
    const ModeBasis mb(kP);
    for (cplx s : {cplx(0.5, 1.0), cplx(-0.3, 4.0), cplx(2.0, -0.7)}) {
        for (auto [x, xi] : kPairs) {
            const cplx g = green_laplace(x, xi, s, mb), ref = kO.green(x, xi, s);
            EXPECT_LT(std::abs(g - ref), 1e-12 * std::abs(ref)) << x << ' ' << xi << ' ' << s;
        }
    }
}

TEST(Green, Symmetric) {
    const ModeBasis mb(kP);
    const cplx s(0.4, 2.5);
    for (auto [x, xi] : kPairs) {
        const cplx g1 = green_laplace(x, xi, s, mb), g2 = green_laplace(xi, x, s, mb);
        EXPECT_LT(std::abs(g1 - g2), 1e-12 * std::abs(g1));
    }
}

TEST(Green, DerivativeJumps) {
    const ModeBasis mb(kP);
    const cplx s(0.4, 2.5);
    const double h = 1e-6;
    auto G = [&](double x, double xi) { return green_laplace(x, xi, s, mb); };
    auto jump = [&](double x, double xi) {
        const cplx right = (-3.0 * G(x, xi) + 4.0 * G(x + h, xi) - G(x + 2 * h, xi)) / (2 * h);
        const cplx left = (3.0 * G(x, xi) - 4.0 * G(x - h, xi) + G(x - 2 * h, xi)) / (2 * h);
        return right - left;
    };
    // Source point.
    const double xi = 1.2;
    EXPECT_LT(std::abs(jump(xi, xi) + 1.0), 1e-6);
    // Damper.
    const cplx expected = 2 * kP.h3 * s / kP.c * G(kP.a, 0.3);
    EXPECT_LT(std::abs(jump(kP.a, 0.3) - expected), 1e-6);
}

TEST(Green, ThrowsAtPoles) {
    const ModeBasis mb(kP);
    EXPECT_THROW(green_laplace(0.3, 0.4, 0.0, mb), PoleProximity);
    const auto eig = nonzero_eigenvalues(kP, 2);
    EXPECT_THROW(green_laplace(0.3, 0.4, eig.front(), mb), PoleProximity);
    EXPECT_THROW(green_laplace(-0.1, 0.4, cplx(1, 1), mb), DomainError);
}

TEST(Residue, MatchesContourLimit) {
    const ModeBasis mb(kP);
    const auto eig = nonzero_eigenvalues(kP, 3);
    for (cplx sn : eig) {
        const auto rc = residue_coefficient(sn, mb);
        for (auto [x, xi] : kPairs) {
            // Mean of (s - s_n) G on a small circle cancels the regular part.
            const double eps = 1e-5 * std::max(1.0, std::abs(sn));
            cplx mean = 0.0;
            const int m = 16;
            for (int j = 0; j < m; ++j) {
                const cplx d = eps * std::polar(1.0, 2 * std::numbers::pi * (j + 0.5) / m);
                mean += d * kO.green(x, xi, sn + d);
            }
            mean /= double(m);
            const cplx expected = mb.phi_a(x, sn) * mb.phi_a(xi, sn) / rc.A;
            EXPECT_LT(std::abs(mean - expected), 1e-6 * std::abs(expected)) << sn;
        }
    }
}

TEST(Residue, MatchesCharacteristicDerivative) {
    const ModeBasis mb(kP);
    for (cplx sn : nonzero_eigenvalues(kP, 4)) {
        const cplx kappa = kO.psi_a(0.0, sn);  // psi_a = kappa phi_a at an eigenvalue
        const cplx ref = sn * kO.delta_a_prime(sn) / (kP.c * kappa);
        const cplx A = residue_coefficient(sn, mb).A;
        EXPECT_LT(std::abs(A - ref), 1e-8 * std::abs(ref)) << sn;
    }
}

TEST(Residue, NumeratorRatioIsConstant) {
    const ModeBasis mb(kP);
    for (cplx sn : nonzero_eigenvalues(kP, 2)) {
        std::vector<cplx> r;
        for (auto [x, xi] : kPairs) r.push_back(green_numerator(x, xi, sn, mb) / (mb.phi_a(x, sn) * mb.phi_a(xi, sn)));
        for (cplx v : r) EXPECT_LT(std::abs(v - r.front()), 1e-8 * std::abs(r.front()));
    }
}

TEST(Residue, FreeFreeFirstMode) {
    const Params p = make_params(0, 0, 0, 0.9, 1.8, 1.5);
    const cplx s1(0.0, std::numbers::pi * 1.5 / 1.8);
    const auto rc = residue_coefficient(s1, ModeBasis(p));
    EXPECT_LT(std::abs(rc.A - s1 * 1.8 / (1.5 * 1.5)), 1e-13);
}

TEST(Residue, SimplifiedFormAgreesWithoutDamper) {
    const Params p = make_params(0.3, 0.9, 0.0, 0.72, 1.8, 1.5);
    const ModeBasis mb(p);
    for (cplx sn : nonzero_eigenvalues(p, 2)) {
        const cplx A = residue_coefficient(sn, mb).A;
        EXPECT_LT(std::abs(residue_coefficient_simplified(sn, mb) - A), 1e-10 * std::abs(A));
    }
}

TEST(Residue, RejectsNonEigenvalue) {
    EXPECT_THROW(residue_coefficient(cplx(0.3, 0.3), ModeBasis(kP)), DomainError);
    EXPECT_THROW(residue_coefficient(0.0, ModeBasis(kP)), DomainError);
}

TEST(Principal, SimplePoleLimit) {
    const ModeBasis mb(kP);
    const auto pp = principal_part(kP);
    EXPECT_TRUE(pp.is_simple());
    EXPECT_NEAR(pp.rigid_constant(), 1.5 / 2.6, 1e-15);
    for (auto [x, xi] : kPairs) {
        const double s = 1e-6;
        const cplx lim = 0.5 * (s * kO.green(x, xi, s) + (-s) * kO.green(x, xi, -s));
        EXPECT_NEAR(lim.real(), 1.5 / 2.6, 1e-9);
    }
}

TEST(Principal, DoublePoleConstants) {
    const double h1 = 2.0, h2 = 0.5, h3 = -1.25, a = 0.72, L = 1.8, c = 1.5;
    const Params p = make_params(h1, h2, h3, a, L, c);
    const Oracle o{h1, h2, h3, a, L, c};
    const auto pp = principal_part(p);
    ASSERT_FALSE(pp.is_simple());
    const double c2 = h1 * h1 * c * c / (L * (h1 * h1 - 1) - a * (std::pow(h1, 4) - 1));
    EXPECT_NEAR(pp.c2(), c2, 1e-12 * std::abs(c2));
    const double s = 1e-3;
    for (auto [x, xi] : kPairs) {
        const cplx gp = s * s * o.green(x, xi, s), gm = s * s * o.green(x, xi, -s);
        const double c2_num = 0.5 * (gp + gm).real();  // c2 + O(s^2)
        const double c1_num = ((gp - gm) / (2 * s)).real();  // c1 + O(s^2)
        EXPECT_NEAR(c2_num, c2, 1e-5 * std::abs(c2));
        EXPECT_NEAR(pp.c1(x, xi), c1_num, 1e-5 * std::max(1.0, std::abs(c1_num))) << x << ' ' << xi;
    }
}

TEST(Principal, RejectsOtherDoubleZeros) {
    EXPECT_THROW(principal_part(make_params(0.5, 0.5, -0.5, 0.72, 1.8, 1.5)), UnsupportedDoublePole);
}

TEST(Expansion, RealKernelAndValidity) {
    const auto ge = build_green_expansion(kP, rationalize_position(kP.a, kP.L), 30);
    for (auto [x, xi] : kPairs)
        for (double t : {0.1, 0.7, 2.3}) EXPECT_LT(std::abs(gamma_time_complex(x, xi, t, ge).imag()), 1e-10);
    const Params crit = make_params(0.5, 1.0, 0.0, 0.72, 1.8, 1.5);
    EXPECT_THROW(build_green_expansion(crit, rationalize_position(crit.a, crit.L)), ExpansionInvalid);
}

TEST(Expansion, TermsPairUnderConjugation) {
    const auto ge = build_green_expansion(kP, rationalize_position(kP.a, kP.L), 10);
    for (const auto& t : ge.terms) {
        bool found = false;
        for (const auto& u : ge.terms)
            if (std::abs(u.s - std::conj(t.s)) < 1e-10 && std::abs(u.A - std::conj(t.A)) < 1e-9 * std::abs(t.A))
                found = true;
        EXPECT_TRUE(found) << t.s;
    }
}

TEST(Expansion, LaplaceSumApproachesGreen) {
    const ModeBasis mb(kP);
    const cplx s(1.0, 0.5);
    const double x = 0.3, xi = 1.2;
    const cplx g = green_laplace(x, xi, s, mb);
    double prev = 1e300;
    for (int N : {10, 40, 160}) {
        const auto ge = build_green_expansion(kP, rationalize_position(kP.a, kP.L), N);
        const double err = std::abs(green_expansion_laplace(x, xi, s, ge) - g);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-2 * std::abs(g));
}
