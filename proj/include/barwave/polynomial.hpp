#pragma once

/// @file polynomial.hpp
/// Roots of real polynomials: balanced companion matrix, dense Hessenberg QR
/// (Eigen), Newton polishing, and clustering of near-multiple roots.

#include <barwave/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace barwave::poly {

using cplx = std::complex<double>;

/// Horner evaluation of sum_j coeffs[j] z^j together with the derivative.
template <class T>
struct HornerResult {
    T value;
    T derivative;
};

template <class T>
HornerResult<T> horner(std::span<const double> coeffs, T z) {
    T v = T(0), d = T(0);
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        d = d * z + v;
        v = v * z + coeffs[j];
    }
    return {v, d};
}

/// sum_j |coeffs[j]| |z|^j, the natural scale for a backward-error residual.
inline double horner_scale(std::span<const double> coeffs, double abs_z) {
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * abs_z + std::abs(coeffs[j]);
    return v;
}

inline double scaled_residual(std::span<const double> coeffs, cplx z) {
    const double scale = horner_scale(coeffs, std::abs(z));
    return scale > 0.0 ? std::abs(horner(coeffs, z).value) / scale : 0.0;
}

/// Parlett-Reinsch balancing by powers of two; eigenvalues are unchanged.
inline void balance(Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    constexpr double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double col = 0.0, row = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                col += std::abs(A(j, i));
                row += std::abs(A(i, j));
            }
            if (col == 0.0 || row == 0.0) continue;
            double g = row / radix;
            double f = 1.0;
            const double s = col + row;
            while (col < g) {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while (col > g) {
                f /= radix;
                col /= radix * radix;
            }
            if ((col + row) / f < 0.95 * s) {
                converged = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

struct Roots {
    std::vector<cplx> values;
    std::vector<int> multiplicities;
    int zero_multiplicity = 0;  ///< roots at z = 0 removed analytically
    double residual = 0.0;      ///< max scaled residual over reported roots
};

struct RootOptions {
    double cluster_tolerance = 1e-7;   ///< relative distance for merging into one multiple root
    double residual_target = 1e-10;    ///< scaled residual required after polishing
    int max_newton_iterations = 30;
};

namespace detail {

inline double polish_real(std::span<const double> coeffs, double x, int max_iter) {
    double best = x;
    double best_res = std::abs(horner(coeffs, x).value);
    for (int it = 0; it < max_iter; ++it) {
        const auto h = horner(coeffs, x);
        if (h.derivative == 0.0) break;
        const double nx = x - h.value / h.derivative;
        const double res = std::abs(horner(coeffs, nx).value);
        if (!(res < best_res)) break;
        best = x = nx;
        best_res = res;
        if (res == 0.0) break;
    }
    return best;
}

inline cplx polish_complex(std::span<const double> coeffs, cplx z, int max_iter) {
    cplx best = z;
    double best_res = std::abs(horner(coeffs, z).value);
    for (int it = 0; it < max_iter; ++it) {
        const auto h = horner(coeffs, z);
        if (h.derivative == cplx(0.0)) break;
        const cplx nz = z - h.value / h.derivative;
        const double res = std::abs(horner(coeffs, nz).value);
        if (!(res < best_res)) break;
        best = z = nz;
        best_res = res;
        if (res == 0.0) break;
    }
    return best;
}

}  // namespace detail

/// All roots of sum_j coeffs[j] z^j (coeffs[0] is the constant term).
///
/// Real coefficients give exactly conjugate-paired output: the real Schur form
/// yields paired eigenvalues, only the member with Im > 0 is polished, and its
/// partner is set to the exact conjugate. Roots closer than
/// `cluster_tolerance` (relative) are merged and reported with multiplicity.
inline Roots find_polynomial_roots(std::span<const double> coeffs_in, const RootOptions& opt = {}) {
    std::vector<double> coeffs(coeffs_in.begin(), coeffs_in.end());
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) throw DomainError("find_polynomial_roots: polynomial has no roots");

    Roots out;
    // z = 0 roots factor out exactly.
    std::size_t lead_zero = 0;
    while (lead_zero < coeffs.size() && coeffs[lead_zero] == 0.0) ++lead_zero;
    out.zero_multiplicity = static_cast<int>(lead_zero);
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead_zero));
    const auto degree = static_cast<Eigen::Index>(coeffs.size()) - 1;
    if (degree == 0) return out;

    std::vector<cplx> raw;
    if (degree == 1) {
        raw.emplace_back(-coeffs[0] / coeffs[1], 0.0);
    } else {
        // Companion matrix of the monic polynomial: ones on the subdiagonal,
        // last column -c_j / c_n.
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(degree, degree);
        for (Eigen::Index i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
        for (Eigen::Index i = 0; i < degree; ++i) comp(i, degree - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
        balance(comp);
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw ConvergenceFailure("companion eigenvalue iteration did not converge");
        const auto& ev = es.eigenvalues();
        for (Eigen::Index i = 0; i < ev.size(); ++i) raw.push_back(ev(i));
    }

    // Cluster before polishing: Newton is slow and erratic on multiple roots.
    std::vector<bool> used(raw.size(), false);
    std::vector<cplx> reps;
    std::vector<int> mult;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        cplx sum = raw[i];
        int m = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (used[j]) continue;
            const double scale = std::max({std::abs(raw[i]), std::abs(raw[j]), 1e-300});
            if (std::abs(raw[i] - raw[j]) <= opt.cluster_tolerance * scale) {
                used[j] = true;
                sum += raw[j];
                ++m;
            }
        }
        reps.push_back(sum / static_cast<double>(m));
        mult.push_back(m);
    }

    // Snap cluster means whose partner pairing was lost back onto the real axis.
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (mult[i] > 1 && std::abs(reps[i].imag()) <= opt.cluster_tolerance * std::abs(reps[i])) {
            reps[i] = cplx(reps[i].real(), 0.0);
        }
    }

    std::vector<bool> done(reps.size(), false);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (done[i]) continue;
        done[i] = true;
        if (reps[i].imag() == 0.0) {
            double r = reps[i].real();
            if (mult[i] == 1) r = detail::polish_real(coeffs, r, opt.max_newton_iterations);
            out.values.emplace_back(r, 0.0);
            out.multiplicities.push_back(mult[i]);
            continue;
        }
        // Locate the conjugate partner among the remaining representatives.
        std::size_t partner = reps.size();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            if (done[j] || mult[j] != mult[i]) continue;
            const double d = std::abs(reps[j] - std::conj(reps[i]));
            if (d < best) {
                best = d;
                partner = j;
            }
        }
        cplx upper = reps[i].imag() > 0.0 ? reps[i] : std::conj(reps[i]);
        if (partner != reps.size()) {
            const cplx other = reps[partner].imag() > 0.0 ? reps[partner] : std::conj(reps[partner]);
            upper = 0.5 * (upper + other);
            done[partner] = true;
        }
        if (mult[i] == 1) upper = detail::polish_complex(coeffs, upper, opt.max_newton_iterations);
        out.values.push_back(upper);
        out.multiplicities.push_back(mult[i]);
        out.values.push_back(std::conj(upper));
        out.multiplicities.push_back(mult[i]);
    }

    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (out.multiplicities[i] > 1) continue;  // backward error of a merged root is not meaningful
        out.residual = std::max(out.residual, scaled_residual(coeffs, out.values[i]));
    }
    if (!(out.residual <= opt.residual_target)) {
        throw ConvergenceFailure("root polishing could not reach the residual target");
    }
    return out;
}

}  // namespace barwave::poly
