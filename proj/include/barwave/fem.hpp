#pragma once

/// @file fem.hpp
/// Linear finite elements for  u_tt + 2 h3 c delta(x-a) u_t - c^2 u_xx = p
/// with the dashpot ends. Unit density, so M u'' + C u' + K u = M p with
///   K = c^2 / h [1 -1; -1 1] per element,
///   C = diag entries c h1 (node 0), c h2 (last node), 2 h3 c (damper node).

#include <barwave/errors.hpp>
#include <barwave/params.hpp>
#include <barwave/profile.hpp>
#include <barwave/response.hpp>
#include <barwave/spectrum.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace barwave {

enum class MassType { consistent, lumped };

struct FemModel {
    Params params;
    int n_elements = 0;
    int damper_node = 0;
    MassType mass_type = MassType::consistent;
    Eigen::VectorXd nodes;
    Eigen::MatrixXd M, C, K;

    [[nodiscard]] int n_nodes() const { return n_elements + 1; }
    [[nodiscard]] double element_length() const { return params.L / n_elements; }
};

/// The element count is raised to the next multiple of p (a/L = q/p) so the
/// damper sits on a node.
inline FemModel assemble(const Params& prm, int n_elements, MassType mass = MassType::consistent) {
    if (n_elements < 4) throw MeshError("assemble: need at least 4 elements");
    const RationalPosition pos = rationalize_position(prm.a, prm.L, 10000, 1e-12);
    if (pos.residual > 1e-10) throw MeshError("assemble: damper position is not a rational fraction of L");
    const auto p = static_cast<int>(pos.p);
    const int n = ((n_elements + p - 1) / p) * p;
    if (n > 10 * n_elements) {
        std::ostringstream os;
        os << "assemble: placing the damper on a node needs " << n << " elements (requested " << n_elements << ")";
        throw MeshError(os.str());
    }

    FemModel m;
    m.params = prm;
    m.n_elements = n;
    m.mass_type = mass;
    m.damper_node = static_cast<int>(pos.q) * (n / p);
    const int nn = n + 1;
    const double h = prm.L / n;
    m.nodes = Eigen::VectorXd::LinSpaced(nn, 0.0, prm.L);
    m.M = Eigen::MatrixXd::Zero(nn, nn);
    m.K = Eigen::MatrixXd::Zero(nn, nn);
    m.C = Eigen::MatrixXd::Zero(nn, nn);
    const double k = prm.c * prm.c / h;
    for (int e = 0; e < n; ++e) {
        const int i = e, j = e + 1;
        if (mass == MassType::consistent) {
            m.M(i, i) += h / 3.0;
            m.M(j, j) += h / 3.0;
            m.M(i, j) += h / 6.0;
            m.M(j, i) += h / 6.0;
        } else {
            m.M(i, i) += h / 2.0;
            m.M(j, j) += h / 2.0;
        }
        m.K(i, i) += k;
        m.K(j, j) += k;
        m.K(i, j) -= k;
        m.K(j, i) -= k;
    }
    m.C(0, 0) += prm.c * prm.h1;
    m.C(n, n) += prm.c * prm.h2;
    m.C(m.damper_node, m.damper_node) += 2.0 * prm.h3 * prm.c;
    return m;
}

struct FemSpectrum {
    std::vector<cplx> eigenvalues;  ///< 2 n_nodes values of the first-order form
};

/// Eigenvalues of [[0, I], [-M^{-1} K, -M^{-1} C]].
inline FemSpectrum fem_eigenvalues(const FemModel& m) {
    const Eigen::Index n = m.M.rows();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.M);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    A.topRightCorner(n, n).setIdentity();
    A.bottomLeftCorner(n, n) = -lu.solve(m.K);
    A.bottomRightCorner(n, n) = -lu.solve(m.C);
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "fem_eigenvalues: QR iteration failed (rcond(M) ~ " << lu.rcond() << ")";
        throw ConvergenceFailure(os.str());
    }
    FemSpectrum out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cplx x, cplx y) {
        return x.imag() != y.imag() ? x.imag() < y.imag() : x.real() < y.real();
    });
    return out;
}

/// h / (c sqrt 2): the leading phase errors of consistent mass (+k^2 h^2 / 24)
/// and the trapezoidal rule (-w^2 dt^2 / 12) cancel at this step.
inline double default_time_step(const FemModel& m) {
    return m.element_length() / (m.params.c * std::numbers::sqrt2);
}

struct FemTrajectory {
    ResponseField field;          ///< nodal displacements at every step
    std::vector<double> energy;   ///< 1/2 (v^T M v + u^T K u) per step
};

/// Trapezoidal rule (average acceleration) on the first-order system. dt is
/// shrunk so that T is an integer number of steps.
inline FemTrajectory fem_time_response(const FemModel& m, const InitialData& data, const Forcing& force, double dt,
                                       double T) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("fem_time_response: need dt > 0 and T >= 0");
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = steps == 0 ? dt : T / double(steps);
    const Eigen::Index n = m.M.rows();

    Eigen::VectorXd u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i) = data.u0(m.nodes(i));
        v(i) = data.v0(m.nodes(i));
    }
    auto load = [&](double t) {
        Eigen::VectorXd pn(n);
        for (Eigen::Index i = 0; i < n; ++i) pn(i) = force(m.nodes(i), t);
        return Eigen::VectorXd(m.M * pn);
    };

    const Eigen::MatrixXd lhs = m.M + 0.5 * h * m.C + 0.25 * h * h * m.K;
    const Eigen::MatrixXd rhs_v = m.M - 0.5 * h * m.C - 0.25 * h * h * m.K;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

    FemTrajectory out;
    ResponseGrid grid;
    grid.x.assign(m.nodes.data(), m.nodes.data() + n);
    for (std::size_t k = 0; k <= steps; ++k) grid.t.push_back(h * double(k));
    out.field = make_field(grid, "fem");
    auto record = [&](std::size_t k) {
        for (Eigen::Index i = 0; i < n; ++i) out.field.at(k, static_cast<std::size_t>(i)) = u(i);
        out.energy.push_back(0.5 * (v.dot(m.M * v) + u.dot(m.K * u)));
    };
    record(0);
    const bool forced = !force.is_zero();
    Eigen::VectorXd f_prev = forced ? load(0.0) : Eigen::VectorXd::Zero(n);
    for (std::size_t k = 1; k <= steps; ++k) {
        Eigen::VectorXd rhs = rhs_v * v - h * (m.K * u);
        Eigen::VectorXd f_next = Eigen::VectorXd::Zero(n);
        if (forced) {
            f_next = load(h * double(k));
            rhs += 0.5 * h * (f_prev + f_next);
        }
        const Eigen::VectorXd v_next = lu.solve(rhs);
        u += 0.5 * h * (v + v_next);
        v = v_next;
        f_prev = f_next;
        if (!u.allFinite()) throw ConvergenceFailure("fem_time_response: trajectory became non-finite");
        record(k);
    }
    return out;
}

struct FemMatch {
    cplx s;
    bool matched = false;
    cplx nearest;
    double distance = std::numeric_limits<double>::infinity();
};

struct SpuriousReport {
    double radius = 0.0;
    std::vector<FemMatch> entries;
    std::vector<cplx> spurious;  ///< unmatched with positive real part
};

/// Half the ladder spacing, p pi c / (2L).
inline double default_matching_radius(const Params& prm, const RationalPosition& pos) {
    return static_cast<double>(pos.p) * std::numbers::pi * prm.c / (2.0 * prm.L);
}

/// Pairs each FEM eigenvalue with the nearest analytic one. `analytic` should
/// include s = 0 (the rigid mode) and cover the FEM imaginary range.
/// Real parts at or below `re_threshold` never count as spurious.
inline SpuriousReport spurious_report(const FemSpectrum& fem, const std::vector<cplx>& analytic, double radius,
                                      double re_threshold) {
    SpuriousReport rep;
    rep.radius = radius;
    for (cplx s : fem.eigenvalues) {
        FemMatch fm;
        fm.s = s;
        for (cplx z : analytic) {
            const double d = std::abs(s - z);
            if (d < fm.distance) {
                fm.distance = d;
                fm.nearest = z;
            }
        }
        fm.matched = fm.distance <= radius;
        if (!fm.matched && s.real() > re_threshold) rep.spurious.push_back(s);
        rep.entries.push_back(fm);
    }
    return rep;
}

/// Analytic eigenvalues (with s = 0) spanning the FEM spectrum of `m`.
inline std::vector<cplx> analytic_reference(const FemModel& m, const FemSpectrum& fem, const RationalPosition& pos) {
    const Params& prm = m.params;
    double top = 0.0;
    for (cplx s : fem.eigenvalues) top = std::max(top, std::abs(s.imag()));
    const double spacing = static_cast<double>(pos.p) * std::numbers::pi * prm.c / prm.L;
    const int half = 2 + static_cast<int>(top / spacing);
    std::vector<cplx> out{0.0};
    const Spectrum sp = compute_spectrum(prm, pos, half);
    for (cplx s : sp.eigenvalues()) out.push_back(s);
    return out;
}

inline SpuriousReport spurious_report(const FemModel& m, const FemSpectrum& fem) {
    const RationalPosition pos = rationalize_position(m.params.a, m.params.L);
    const auto ref = analytic_reference(m, fem, pos);
    return spurious_report(fem, ref, default_matching_radius(m.params, pos), 1e-6 * m.params.c / m.params.L);
}

/// CSV: re,im,matched
inline void write_fem_spectrum_csv(std::ostream& os, const SpuriousReport& rep) {
    os.precision(17);
    os << "re,im,matched\n";
    for (const auto& e : rep.entries) os << e.s.real() << ',' << e.s.imag() << ',' << (e.matched ? 1 : 0) << '\n';
}

}  // namespace barwave
