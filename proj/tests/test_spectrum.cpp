#include <barwave/modes.hpp>
#include <barwave/polynomial.hpp>
#include <barwave/spectrum.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace barwave;
using std::numbers::pi;

namespace {

Params P(double h1, double h2, double h3, double ratio, double L = 1.8, double c = 1.5) {
    return make_params(h1, h2, h3, ratio * L, L, c);
}

double min_distance(cplx s, const std::vector<cplx>& set) {
    double d = 1e300;
    for (cplx z : set) d = std::min(d, std::abs(s - z));
    return d;
}

}  // namespace

TEST(Polynomial, HornerValueAndDerivative) {
    const std::vector<double> c{-6, 11, -6, 1};  // (z-1)(z-2)(z-3)
    const auto h = poly::horner<double>(c, 4.0);
    EXPECT_DOUBLE_EQ(h.value, 6.0);
    EXPECT_DOUBLE_EQ(h.derivative, 3 * 16 - 12 * 4 + 11);
}

TEST(Polynomial, ZeroRootsFactoredOut) {
    const std::vector<double> c{0, 0, -2, 1};  // z^2 (z - 2)
    const auto r = poly::find_polynomial_roots(c);
    EXPECT_EQ(r.zero_multiplicity, 2);
    ASSERT_EQ(r.values.size(), 1u);
    EXPECT_DOUBLE_EQ(r.values[0].real(), 2.0);
}

TEST(Polynomial, RandomPolynomialsConjugatePaired) {
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(13);
        for (auto& v : c) v = g(rng);
        const auto r = poly::find_polynomial_roots(c);
        EXPECT_LT(r.residual, 1e-10);
        int total = r.zero_multiplicity;
        for (int m : r.multiplicities) total += m;
        EXPECT_EQ(total, 12);
        for (cplx z : r.values) EXPECT_LT(min_distance(std::conj(z), r.values), 1e-14 * (1 + std::abs(z)));
    }
}

TEST(CharPoly, Coefficients) {
    const Params p = P(0.3, 0.9, 0.7, 0.4);
    const auto pos = rationalize_position(p.a, p.L);
    const auto cp = build_char_poly(p, pos);
    EXPECT_EQ(cp.p, 5);
    EXPECT_EQ(cp.q, 2);
    EXPECT_NEAR(cp.A1, 1.3 * 1.9 * 1.7, 1e-15);
    EXPECT_NEAR(cp.A4, -0.7 * 0.1 * 0.3, 1e-15);
    EXPECT_NEAR(cp.A1, 4.199, 1e-12);
    EXPECT_NEAR(cp.A4, -0.021, 1e-12);

    const auto cm = build_char_poly(P(0, 0, 0.5, 0.5), RationalPosition{1, 2, 0});
    EXPECT_DOUBLE_EQ(cm.A1, 1.5);
    EXPECT_DOUBLE_EQ(cm.A2, 0.5);
    EXPECT_DOUBLE_EQ(cm.A3, 0.5);
    EXPECT_DOUBLE_EQ(cm.A4, -0.5);
}

TEST(CharPoly, CriticalRejected) {
    const Params p = P(0.5, 1, 0, 0.5);
    EXPECT_THROW(build_char_poly(p, rationalize_position(p.a, p.L)), CriticalCoefficient);
}

TEST(CharPoly, ExponentialSumEquivalence) {
    // z^{-p/2} P(z) = 2 Delta_a(s) e^{...}: zeros of P map onto zeros of Delta_a.
    const Params p = P(0.3, 0.9, 0.7, 0.4);
    const auto sp = compute_spectrum(p, rationalize_position(p.a, p.L), 3);
    const ModeBasis mb(p);
    for (cplx s : sp.eigenvalues()) EXPECT_LT(mb.delta_a_scaled(s).relative(), 1e-12);
}

TEST(FindRoots, MidpointQuadratic) {
    const auto cp = build_char_poly(P(0, 0, 0.5, 0.5), RationalPosition{1, 2, 0});
    const auto r = find_roots(cp);
    ASSERT_EQ(r.roots.size(), 2u);
    EXPECT_LT(min_distance(1.0 / 3.0, r.roots), 1e-15);
    EXPECT_LT(min_distance(-1.0, r.roots), 1e-15);
    for (cplx z : r.roots) EXPECT_LT(std::abs(cp(z)), 1e-15);
}

TEST(FindRoots, DoubleRootWhenDiscriminantVanishes) {
    // D = (1 - h1^2)(1 - h2^2) + h3^2 (h1 - h2)^2 = 0 at h = (0, 5/3, 0.8).
    const Params p = P(0, 5.0 / 3, 0.8, 0.5);
    const auto mq = midpoint_roots(p);
    EXPECT_NEAR(mq.quadratic.D, 0.0, 1e-14);
    ASSERT_EQ(mq.roots.roots.size(), 1u);
    EXPECT_EQ(mq.roots.multiplicities[0], 2);

    const auto r = find_roots(build_char_poly(p, RationalPosition{1, 2, 0}));
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_EQ(r.multiplicities[0], 2);
    EXPECT_FALSE(r.all_simple());
    EXPECT_NEAR(r.roots[0].real(), mq.roots.roots[0].real(), 1e-7);
}

TEST(FindRoots, DegreeFiveResidual) {
    const Params p = P(0.3, 0.9, 0.7, 0.4);
    const auto r = find_roots(build_char_poly(p, rationalize_position(p.a, p.L)));
    EXPECT_EQ(r.roots.size(), 5u);
    EXPECT_LT(r.residual, 1e-10);
    // Independent Horner evaluation of the residual.
    const auto c = build_char_poly(p, rationalize_position(p.a, p.L)).coeffs();
    for (cplx z : r.roots) EXPECT_LT(poly::scaled_residual(c, z), 1e-10);
}

TEST(Ladder, FreeFree) {
    const auto lad = eigenvalues_no_internal(P(0, 0, 0, 0.5), 5);
    for (std::size_t i = 0; i < lad.size(); ++i) {
        const double n = double(lad.n_min + std::int64_t(i));
        EXPECT_NEAR(lad.s[i].real(), 0.0, 1e-15);
        EXPECT_NEAR(lad.s[i].imag(), pi * n * 1.5 / 1.8, 1e-12);
    }
}

TEST(Ladder, MinusOneAtMidpoint) {
    const Params p = P(0, 0, 0.5, 0.5);
    const auto sp = compute_spectrum(p, RationalPosition{1, 2, 0}, 6);
    const ModeBasis mb(p);
    bool found = false;
    for (const auto& l : sp.ladders) {
        if (std::abs(l.z + 1.0) > 1e-12) continue;
        found = true;
        EXPECT_NEAR(l.re_line, 0.0, 1e-14);
        for (std::size_t i = 0; i < l.size(); ++i) {
            const double n = double(l.n_min + std::int64_t(i));
            EXPECT_NEAR(l.s[i].imag(), (2 * n + 1) * pi * p.c / (2 * p.L) * 2, 1e-11);
            EXPECT_LT(mb.delta_a_scaled(l.s[i]).relative(), 1e-12);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Ladder, NegativeRatioLine) {
    const Params p = P(0.7, -1.5, 0, 0.5);
    const auto lad = eigenvalues_no_internal(p, 10);
    const double expect = p.c / (2 * p.L) * std::log(0.75 / 0.85);
    EXPECT_NEAR(lad.re_line, expect, 1e-14);
    EXPECT_NEAR(lad.re_line, -0.0522, 5e-5);
    // Negative real z: n runs over [-N, N-1] and the set is closed under conjugation.
    EXPECT_EQ(lad.n_min, -10);
    EXPECT_EQ(lad.n_max, 9);
    for (cplx s : lad.s) EXPECT_LT(min_distance(std::conj(s), lad.s), 1e-12);
}

TEST(Ladder, LogModulusNoInternal) {
    const auto lad = eigenvalues_no_internal(P(0.5, 0, 0, 0.5), 2);
    EXPECT_NEAR(lad.re_line, 1.5 / 3.6 * std::log(1.0 / 3.0), 1e-14);
}

TEST(Ladder, Case1IsUndamped) {
    const auto lad = eigenvalues_no_internal(P(2.0, -0.5, 0, 0.5), 4);
    EXPECT_NEAR(lad.re_line, 0.0, 1e-15);
    EXPECT_THROW(eigenvalues_no_internal(P(1.0, 0.2, 0, 0.5)), CriticalCoefficient);
    EXPECT_THROW(eigenvalues_no_internal(P(0.3, 0.2, 0.1, 0.5)), DomainError);
}

TEST(Ladder, SpacingAndConjugation) {
    const Params p = P(0.3, 0.9, 0.7, 0.4);
    const auto sp = compute_spectrum(p, rationalize_position(p.a, p.L), 8);
    const auto all = sp.eigenvalues();
    for (const auto& l : sp.ladders) {
        for (std::size_t i = 1; i < l.size(); ++i) {
            EXPECT_NEAR(l.s[i].imag() - l.s[i - 1].imag(), 5 * pi * p.c / p.L, 1e-12);
            EXPECT_EQ(l.s[i].real(), l.s[0].real());
        }
    }
    for (cplx s : all) EXPECT_LT(min_distance(std::conj(s), all), 1e-10);
}

TEST(Ladder, NoInternalAgreesWithGeneralPipeline) {
    const Params p = P(0.4, -0.3, 0, 0.4);
    const auto closed = eigenvalues_no_internal(p, 10);
    const auto sp = compute_spectrum(p, rationalize_position(p.a, p.L), 10);
    const auto all = sp.eigenvalues();
    for (cplx s : closed.s) EXPECT_LT(min_distance(s, all), 1e-12 * std::abs(s) + 1e-15);
}

TEST(Midpoint, ExplicitRootsMatchRootFinder) {
    for (auto h : {std::array<double, 3>{0.3, 0.9, 0.7}, std::array<double, 3>{-0.4, 2.0, 0.3},
                   std::array<double, 3>{0.3, 10.0 / 3, -109.0 / 60}}) {
        const Params p = P(h[0], h[1], h[2], 0.5);
        const auto mq = midpoint_roots(p);
        const auto r = find_roots(build_char_poly(p, RationalPosition{1, 2, 0}));
        ASSERT_EQ(r.roots.size(), mq.roots.roots.size());
        for (cplx z : mq.roots.roots) EXPECT_LT(min_distance(z, r.roots), 1e-12 * std::abs(z));
    }
}

TEST(Midpoint, NegativeDiscriminantSingleLine) {
    // h1 = h2 = 3 keeps (1 - h1^2)(1 - h2^2) > 0; pick signs giving D < 0.
    const Params p = P(2.0, 0.5, 0.3, 0.5);
    const auto mq = midpoint_roots(p);
    ASSERT_LT(mq.quadratic.D, 0.0);
    EXPECT_EQ(mq.quadratic.line_count(), 1);
    EXPECT_NEAR(std::abs(mq.roots.roots[0]), std::abs(mq.roots.roots[1]), 1e-14);
    const auto sp = compute_spectrum(p, RationalPosition{1, 2, 0}, 2);
    const double ratio = std::abs((1 - p.h1) * (1 - p.h2) * (1 - p.h3) / ((1 + p.h1) * (1 + p.h2) * (1 + p.h3)));
    // |z|^2 = |C/A|, so Re s = (2c/2L) * 0.5 ln|C/A|.
    for (const auto& l : sp.ladders) EXPECT_NEAR(l.re_line, p.c / (2 * p.L) * std::log(ratio), 1e-12);
}

TEST(Midpoint, Case3OnUnitCircle) {
    const auto mq = midpoint_roots(P(0.3, 10.0 / 3, -109.0 / 60, 0.5));
    for (cplx z : mq.roots.roots) EXPECT_NEAR(std::abs(z), 1.0, 1e-14);
}

TEST(Midpoint, RejectsOtherPositions) {
    EXPECT_THROW(midpoint_roots(P(0.3, 0.9, 0.7, 0.4)), DomainError);
    EXPECT_THROW(midpoint_roots(P(0.3, 0.9, -1.0, 0.5)), CriticalCoefficient);
}

TEST(SpectrumExport, CsvHeaderAndRows) {
    const Params p = P(0.3, 0.9, 0.7, 0.5);
    const auto sp = compute_spectrum(p, RationalPosition{1, 2, 0}, 1);
    std::ostringstream os;
    write_spectrum_csv(os, sp);
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "k,n,re_s,im_s,abs_z,arg_z");
    // Half width 1: three rows per root, two for a root on the negative real axis.
    long rows = 0;
    for (cplx z : sp.roots.roots) rows += (z.imag() == 0.0 && z.real() < 0.0) ? 2 : 3;
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + rows);
    EXPECT_EQ(static_cast<long>(spectrum_json(sp).size()), rows);
}
