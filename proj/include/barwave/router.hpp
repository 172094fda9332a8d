#pragma once

/// @file router.hpp
/// Chooses the solver for a parameter set: modal series when no h_i = +-1,
/// a closed-form kernel for the transparent-end regimes, and a specific
/// error otherwise.

#include <barwave/critical.hpp>
#include <barwave/errors.hpp>
#include <barwave/green.hpp>
#include <barwave/params.hpp>
#include <barwave/response.hpp>

#include <string>

namespace barwave {

enum class Regime { modal, right_transparent, left_transparent, both_transparent };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::modal: return "modal";
        case Regime::right_transparent: return "right_transparent";
        case Regime::left_transparent: return "left_transparent";
        case Regime::both_transparent: return "both_transparent";
    }
    return "?";
}

struct Route {
    Regime regime = Regime::modal;
    Classification classification;
    RationalPosition position;
};

/// Throws SuperInstability for any h_i = -1, UnsupportedRegime for partial
/// transparency with an internal damper or h3 = +1, and UnsupportedDoublePole
/// for h1 + h2 + 2 h3 = 0 outside the supported family.
inline Route route(const Params& prm, const RationalPosition& pos) {
    Route r;
    r.position = pos;
    r.classification = classify(prm, pos);
    const CriticalFlags& fl = r.classification.critical_flags;
    if (fl.any_minus()) {
        std::string which;
        for (auto f : fl.list())
            if (f == CriticalFlag::h1_minus || f == CriticalFlag::h2_minus || f == CriticalFlag::h3_minus)
                which += std::string(to_string(f)) + " ";
        throw SuperInstability("super-unstable damper (" + which +
                               "): the reflection coefficient is infinite and the solution ceases to exist "
                               "in finite time");
    }
    const bool t1 = fl.has(CriticalFlag::h1_plus), t2 = fl.has(CriticalFlag::h2_plus);
    const bool t3 = fl.has(CriticalFlag::h3_plus);
    if (t1 && t2) {
        r.regime = Regime::both_transparent;
        return r;
    }
    if (t1 || t2) {
        if (!r.classification.no_internal) {
            throw UnsupportedRegime(std::string("one transparent end with an internal damper (") +
                                    (t1 ? "h1=+1" : "h2=+1") +
                                    ", h3 != 0): mixed standing/travelling waves are not supported");
        }
        r.regime = t2 ? Regime::right_transparent : Regime::left_transparent;
        return r;
    }
    if (t3) throw UnsupportedRegime("transparent internal damper (h3=+1) without transparent ends is not supported");
    if (r.classification.rigid_double_zero && !in_double_pole_family(prm)) {
        throw UnsupportedDoublePole("h1 + h2 + 2 h3 = 0 outside the family h2 = 1/h1, h3 = -(h1 + h2)/2");
    }
    r.regime = Regime::modal;
    return r;
}

/// Response along the routed path. The modal expansion is only built for
/// Regime::modal.
inline ResponseField solve_response(const Params& prm, const RationalPosition& pos, const InitialData& data,
                                    const Forcing& force, const ResponseGrid& grid,
                                    int half_width = kDefaultLadderHalfWidth) {
    const Route r = route(prm, pos);
    switch (r.regime) {
        case Regime::modal: {
            const GreenExpansion ge = build_green_expansion(prm, pos, half_width);
            return respond_modal(ge, data, force, grid);
        }
        case Regime::right_transparent: return respond_right_transparent(prm, data, force, grid);
        case Regime::left_transparent: return respond_left_transparent(prm, data, force, grid);
        case Regime::both_transparent: return respond_both_transparent(prm, data, force, grid);
    }
    throw UnsupportedRegime("unreachable regime");
}

}  // namespace barwave
