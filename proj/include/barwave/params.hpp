#pragma once

/// @file params.hpp
/// Bar parameters, rational damper position and regime classification.
///
/// The bar obeys  u_tt + 2 h3 c delta(x-a) u_t - c^2 u_xx = p  on [0, L] with
/// viscous ends  u_x(0) - (h1/c) u_t(0) = 0,  u_x(L) + (h2/c) u_t(L) = 0.
/// Qualitative behaviour depends only on (h1, h2, h3, a/L).

#include <barwave/errors.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace barwave {

/// Absolute tolerance used for every "is h exactly +-1 / exactly zero" test.
inline constexpr double kFlagTolerance = 1e-12;

struct Params {
    double h1 = 0.0;  ///< left end damping (dimensionless)
    double h2 = 0.0;  ///< right end damping (dimensionless)
    double h3 = 0.0;  ///< internal damping (dimensionless, halved convention)
    double a = 0.5;   ///< damper position
    double L = 1.0;   ///< bar length
    double c = 1.0;   ///< wave speed

    [[nodiscard]] double ratio() const { return a / L; }
    /// h1 + h2 + 2 h3, the value of the characteristic function at s = 0.
    [[nodiscard]] double rigid_sum() const { return h1 + h2 + 2.0 * h3; }
};

inline Params make_params(double h1, double h2, double h3, double a, double L, double c) {
    for (double v : {h1, h2, h3, a, L, c}) {
        if (!std::isfinite(v)) throw DomainError("parameters must be finite");
    }
    if (!(L > 0.0)) throw DomainError("bar length L must be positive");
    if (!(c > 0.0)) throw DomainError("wave speed c must be positive");
    if (!(a > 0.0 && a < L)) {
        std::ostringstream os;
        os << "damper position a=" << a << " must satisfy 0 < a < L=" << L;
        throw DomainError(os.str());
    }
    return Params{h1, h2, h3, a, L, c};
}

inline void to_json(nlohmann::json& j, const Params& p) {
    j = nlohmann::json{{"h1", p.h1}, {"h2", p.h2}, {"h3", p.h3},
                       {"a", p.a},   {"L", p.L},   {"c", p.c}};
}

inline void from_json(const nlohmann::json& j, Params& p) {
    auto get = [&](const char* key) -> double {
        if (!j.contains(key)) throw ConfigError(std::string("params: missing key '") + key + "'");
        if (!j.at(key).is_number()) throw ConfigError(std::string("params: '") + key + "' must be a number");
        return j.at(key).get<double>();
    };
    p = make_params(get("h1"), get("h2"), get("h3"), get("a"), get("L"), get("c"));
}

/// a/L = q/p in lowest terms.
struct RationalPosition {
    std::int64_t q = 1;
    std::int64_t p = 2;
    double residual = 0.0;  ///< |a/L - q/p|

    [[nodiscard]] double value() const { return static_cast<double>(q) / static_cast<double>(p); }
    [[nodiscard]] bool is_midpoint() const { return q == 1 && p == 2; }
};

/// Best rational approximation of a/L with denominator <= max_denominator,
/// built from continued-fraction convergents and the final semiconvergent.
/// Expansion stops as soon as a convergent is within `tolerance`, so values
/// that are exactly representable come back exact. The result always
/// satisfies 0 < q < p; requires max_denominator >= 2.
inline RationalPosition rationalize_position(double a, double L, std::int64_t max_denominator = 200,
                                             double tolerance = 1e-12) {
    if (!(L > 0.0) || !(a > 0.0 && a < L)) throw DomainError("rationalize_position: need 0 < a < L");
    if (max_denominator < 2) throw DomainError("rationalize_position: max_denominator must be >= 2");
    const double x = a / L;

    // h_{k} = a_k h_{k-1} + h_{k-2}
    std::int64_t num_prev2 = 0, num_prev1 = 1;
    std::int64_t den_prev2 = 1, den_prev1 = 0;
    double rem = x;
    std::int64_t best_num = 0, best_den = 1;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(rem);
        const auto term = static_cast<std::int64_t>(fl);
        const std::int64_t num = term * num_prev1 + num_prev2;
        const std::int64_t den = term * den_prev1 + den_prev2;
        if (den > max_denominator) {
            // Largest admissible semiconvergent; keep it if it beats the last convergent.
            const std::int64_t k = (max_denominator - den_prev2) / den_prev1;
            const std::int64_t semi_num = num_prev2 + k * num_prev1;
            const std::int64_t semi_den = den_prev2 + k * den_prev1;
            if (k > 0 && std::abs(x - static_cast<double>(semi_num) / semi_den) <
                             std::abs(x - static_cast<double>(best_num) / best_den)) {
                best_num = semi_num;
                best_den = semi_den;
            }
            break;
        }
        best_num = num;
        best_den = den;
        num_prev2 = num_prev1;
        num_prev1 = num;
        den_prev2 = den_prev1;
        den_prev1 = den;
        if (std::abs(x - static_cast<double>(num) / den) <= tolerance) break;
        const double frac = rem - fl;
        if (frac <= 0.0) break;
        rem = 1.0 / frac;
    }

    // Clamp onto the open interval (0, 1).
    if (best_num <= 0) {
        best_num = 1;
        best_den = max_denominator;
    } else if (best_num >= best_den) {
        best_num = max_denominator - 1;
        best_den = max_denominator;
    }
    const std::int64_t g = std::gcd(best_num, best_den);
    RationalPosition r{best_num / g, best_den / g, 0.0};
    r.residual = std::abs(x - r.value());
    return r;
}

enum class CriticalFlag : unsigned { h1_plus, h1_minus, h2_plus, h2_minus, h3_plus, h3_minus };

inline const char* to_string(CriticalFlag f) {
    switch (f) {
        case CriticalFlag::h1_plus: return "h1=+1";
        case CriticalFlag::h1_minus: return "h1=-1";
        case CriticalFlag::h2_plus: return "h2=+1";
        case CriticalFlag::h2_minus: return "h2=-1";
        case CriticalFlag::h3_plus: return "h3=+1";
        case CriticalFlag::h3_minus: return "h3=-1";
    }
    return "?";
}

class CriticalFlags {
public:
    void set(CriticalFlag f) { bits_ |= mask(f); }
    [[nodiscard]] bool has(CriticalFlag f) const { return (bits_ & mask(f)) != 0; }
    [[nodiscard]] bool any() const { return bits_ != 0; }
    [[nodiscard]] bool any_minus() const {
        return has(CriticalFlag::h1_minus) || has(CriticalFlag::h2_minus) || has(CriticalFlag::h3_minus);
    }
    [[nodiscard]] std::vector<CriticalFlag> list() const {
        std::vector<CriticalFlag> out;
        for (unsigned i = 0; i < 6; ++i) {
            auto f = static_cast<CriticalFlag>(i);
            if (has(f)) out.push_back(f);
        }
        return out;
    }
    bool operator==(const CriticalFlags&) const = default;

private:
    static unsigned mask(CriticalFlag f) { return 1u << static_cast<unsigned>(f); }
    unsigned bits_ = 0;
};

/// Zero-damping families for which every eigenvalue is purely imaginary.
/// `unknown` is reported when the position is neither h3 = 0 nor a = L/2,
/// since no closed-form test exists there.
enum class ZeroDampingCase { unknown, none, case1, case2, case3, case4 };

inline const char* to_string(ZeroDampingCase z) {
    switch (z) {
        case ZeroDampingCase::unknown: return "unknown";
        case ZeroDampingCase::none: return "none";
        case ZeroDampingCase::case1: return "case1";
        case ZeroDampingCase::case2: return "case2";
        case ZeroDampingCase::case3: return "case3";
        case ZeroDampingCase::case4: return "case4";
    }
    return "?";
}

struct Classification {
    CriticalFlags critical_flags;
    bool rigid_double_zero = false;  ///< h1 + h2 + 2 h3 = 0
    bool no_internal = false;        ///< h3 = 0
    bool midpoint = false;           ///< a/L = 1/2
    ZeroDampingCase zero_damping_case = ZeroDampingCase::unknown;
};

inline Classification classify(const Params& prm, const RationalPosition& pos, double tol = kFlagTolerance) {
    Classification cl;
    const double h[3] = {prm.h1, prm.h2, prm.h3};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(h[i] - 1.0) < tol) cl.critical_flags.set(static_cast<CriticalFlag>(2 * i));
        if (std::abs(h[i] + 1.0) < tol) cl.critical_flags.set(static_cast<CriticalFlag>(2 * i + 1));
    }
    cl.rigid_double_zero = std::abs(prm.rigid_sum()) < tol;
    cl.no_internal = std::abs(prm.h3) < tol;
    cl.midpoint = pos.is_midpoint();

    const double h1 = prm.h1, h2 = prm.h2, h3 = prm.h3;
    if (cl.no_internal) {
        if (std::abs(h1 * h2 + 1.0) < tol) {
            cl.zero_damping_case = ZeroDampingCase::case1;
        } else if (std::abs(h1 + h2) < tol) {
            cl.zero_damping_case = ZeroDampingCase::case2;
        } else {
            cl.zero_damping_case = ZeroDampingCase::none;
        }
    } else if (cl.midpoint) {
        const double A = (1 + h1) * (1 + h2) * (1 + h3);
        const double B = 2 * h3 * (1 - h1 * h2);
        if (std::abs(h1 * h2 - 1.0) < tol && std::abs(h3 + 0.5 * (h1 + h2)) < tol) {
            cl.zero_damping_case = ZeroDampingCase::case3;
        } else if (std::abs(h1 * h2 + h1 * h3 + h2 * h3 + 1.0) < tol &&
                   std::abs(B) <= 2.0 * std::abs(A) * (1.0 + tol)) {
            cl.zero_damping_case = ZeroDampingCase::case4;
        } else {
            cl.zero_damping_case = ZeroDampingCase::none;
        }
    }
    return cl;
}

inline void to_json(nlohmann::json& j, const Classification& cl) {
    nlohmann::json flags = nlohmann::json::array();
    for (auto f : cl.critical_flags.list()) flags.push_back(to_string(f));
    j = nlohmann::json{{"critical", flags},
                       {"rigid", cl.rigid_double_zero},
                       {"no_internal", cl.no_internal},
                       {"midpoint", cl.midpoint},
                       {"zero_damping", to_string(cl.zero_damping_case)}};
}

}  // namespace barwave
