#pragma once

/// @file scenario.hpp
/// JSON scenario files.
///
/// {
///   "name": "...",
///   "params":  {"h1": .., "h2": .., "h3": .., "a": .., "L": .., "c": ..},
///   "initial": {"u0": <profile>, "v0": <profile>},
///   "forcing": {"type": "none"} | {"type": "separable", "terms": [{"space": <profile>, "time": <time>}]},
///   "grid":    {"nx": 201, "nt": 401, "T": 2.4},
///   "solver":  {"mode": "auto|modal|kernel|critical|fem", "N": 40, "n_elements": 160,
///               "dt": .., "mass": "consistent|lumped", "max_denominator": 200}
/// }
///
/// <profile>: {"type": "zero"} | {"type": "constant", "value"} |
///            {"type": "gaussian", "amplitude", "mu", "sigma"} |
///            {"type": "sum", "parts": [<profile>, ...]} | {"type": "table", "x": [..], "y": [..]}
/// <time>:    {"type": "constant", "value"} | {"type": "exponential", "amplitude", "rate"} |
///            {"type": "sinusoid", "amplitude", "omega", "phase"} |
///            {"type": "poly_exp", "amplitude", "power", "rate"}
///
/// Only "params" is required; everything else has defaults.

#include <barwave/errors.hpp>
#include <barwave/fem.hpp>
#include <barwave/params.hpp>
#include <barwave/profile.hpp>
#include <barwave/response.hpp>
#include <barwave/spectrum.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace barwave {

enum class SolverMode { automatic, modal, kernel, critical, fem };

inline const char* to_string(SolverMode m) {
    switch (m) {
        case SolverMode::automatic: return "auto";
        case SolverMode::modal: return "modal";
        case SolverMode::kernel: return "kernel";
        case SolverMode::critical: return "critical";
        case SolverMode::fem: return "fem";
    }
    return "?";
}

struct SolverBlock {
    SolverMode mode = SolverMode::automatic;
    int N = kDefaultLadderHalfWidth;
    std::optional<int> n_elements;
    std::optional<double> dt;
    MassType mass = MassType::consistent;
    std::int64_t max_denominator = 200;
};

struct Scenario {
    std::string name;
    Params params;
    InitialData initial;
    Forcing forcing;
    std::size_t nx = kDefaultNx;
    std::size_t nt = kDefaultNt;
    double T = 0.0;  ///< 0 means 2L/c
    SolverBlock solver;

    [[nodiscard]] double horizon() const { return T > 0.0 ? T : 2.0 * params.L / params.c; }
    [[nodiscard]] ResponseGrid grid() const { return ResponseGrid::uniform(params.L, nx, horizon(), nt); }
    [[nodiscard]] RationalPosition position() const {
        return rationalize_position(params.a, params.L, solver.max_denominator);
    }
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return j.at(key);
}

inline double number(const nlohmann::json& j, const std::string& key, const std::string& where) {
    const auto& v = field(j, key, where);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

inline double number_or(const nlohmann::json& j, const std::string& key, double dflt, const std::string& where) {
    return j.is_object() && j.contains(key) ? number(j, key, where) : dflt;
}

inline std::string type_of(const nlohmann::json& j, const std::string& where) {
    const auto& v = field(j, "type", where);
    if (!v.is_string()) throw ConfigError(where + ".type: expected a string");
    return v.get<std::string>();
}

inline Profile parse_profile(const nlohmann::json& j, const std::string& where) {
    const std::string t = type_of(j, where);
    if (t == "zero") return Profile::zero();
    if (t == "constant") return Profile::constant(number(j, "value", where));
    if (t == "gaussian")
        return Profile::gaussian(number(j, "amplitude", where), number(j, "mu", where), number(j, "sigma", where));
    if (t == "sum") {
        const auto& parts = field(j, "parts", where);
        if (!parts.is_array()) throw ConfigError(where + ".parts: expected an array");
        Profile out = Profile::zero();
        for (std::size_t i = 0; i < parts.size(); ++i)
            out = Profile::sum(out, parse_profile(parts[i], where + ".parts[" + std::to_string(i) + "]"));
        return out;
    }
    if (t == "table") {
        const auto& xs = field(j, "x", where);
        const auto& ys = field(j, "y", where);
        try {
            return Profile::tabulated(xs.get<std::vector<double>>(), ys.get<std::vector<double>>());
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(where + ": x and y must be arrays of numbers");
        }
    }
    throw ConfigError(where + ".type: unknown profile type '" + t + "'");
}

inline TimeProfile parse_time(const nlohmann::json& j, const std::string& where) {
    const std::string t = type_of(j, where);
    if (t == "constant") return TimeProfile::constant(number(j, "value", where));
    if (t == "exponential") return TimeProfile::exponential(number(j, "amplitude", where), number(j, "rate", where));
    if (t == "sinusoid")
        return TimeProfile::sinusoid(number(j, "amplitude", where), number(j, "omega", where),
                                     number_or(j, "phase", 0.0, where));
    if (t == "poly_exp")
        return TimeProfile::poly_exp(number(j, "amplitude", where), static_cast<int>(number(j, "power", where)),
                                     number_or(j, "rate", 0.0, where));
    throw ConfigError(where + ".type: unknown time profile '" + t + "'");
}

inline SolverMode parse_mode(const std::string& s) {
    if (s == "auto") return SolverMode::automatic;
    if (s == "modal") return SolverMode::modal;
    if (s == "kernel") return SolverMode::kernel;
    if (s == "critical") return SolverMode::critical;
    if (s == "fem") return SolverMode::fem;
    throw ConfigError("solver.mode: unknown mode '" + s + "'");
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("scenario: top level must be an object");
    Scenario sc;
    if (j.contains("name")) sc.name = j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    try {
        sc.params = detail::field(j, "params", "scenario").get<Params>();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }

    if (j.contains("initial")) {
        const auto& in = j.at("initial");
        if (in.contains("u0")) sc.initial.u0 = detail::parse_profile(in.at("u0"), "initial.u0");
        if (in.contains("v0")) sc.initial.v0 = detail::parse_profile(in.at("v0"), "initial.v0");
    }
    if (j.contains("forcing")) {
        const auto& fj = j.at("forcing");
        const std::string t = detail::type_of(fj, "forcing");
        if (t == "separable") {
            const auto& terms = detail::field(fj, "terms", "forcing");
            if (!terms.is_array()) throw ConfigError("forcing.terms: expected an array");
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string w = "forcing.terms[" + std::to_string(i) + "]";
                sc.forcing.terms.push_back({detail::parse_profile(detail::field(terms[i], "space", w), w + ".space"),
                                            detail::parse_time(detail::field(terms[i], "time", w), w + ".time")});
            }
        } else if (t != "none") {
            throw ConfigError("forcing.type: unknown forcing type '" + t + "'");
        }
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        const double nx = detail::number_or(g, "nx", double(sc.nx), "grid");
        const double nt = detail::number_or(g, "nt", double(sc.nt), "grid");
        if (nx < 2 || nt < 1) throw ConfigError("grid: need nx >= 2 and nt >= 1");
        sc.nx = static_cast<std::size_t>(nx);
        sc.nt = static_cast<std::size_t>(nt);
        sc.T = detail::number_or(g, "T", 0.0, "grid");
        if (sc.T < 0.0) throw ConfigError("grid.T: must be non-negative");
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        if (s.contains("mode")) {
            if (!s.at("mode").is_string()) throw ConfigError("solver.mode: expected a string");
            sc.solver.mode = detail::parse_mode(s.at("mode").get<std::string>());
        }
        sc.solver.N = static_cast<int>(detail::number_or(s, "N", sc.solver.N, "solver"));
        if (sc.solver.N < 1) throw ConfigError("solver.N: must be positive");
        if (s.contains("n_elements")) sc.solver.n_elements = static_cast<int>(detail::number(s, "n_elements", "solver"));
        if (s.contains("dt")) sc.solver.dt = detail::number(s, "dt", "solver");
        if (s.contains("mass")) {
            const auto m = s.at("mass").get<std::string>();
            if (m == "consistent") sc.solver.mass = MassType::consistent;
            else if (m == "lumped") sc.solver.mass = MassType::lumped;
            else throw ConfigError("solver.mass: expected 'consistent' or 'lumped'");
        }
        sc.solver.max_denominator =
            static_cast<std::int64_t>(detail::number_or(s, "max_denominator", 200.0, "solver"));
        if (sc.solver.max_denominator < 2) throw ConfigError("solver.max_denominator: must be >= 2");
    }
    return sc;
}

/// Reads and parses a scenario; JSON syntax errors report the byte offset.
inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        std::ostringstream os;
        os << path << ": JSON syntax error at byte " << e.byte << ": " << e.what();
        throw ConfigError(os.str());
    }
    try {
        return parse_scenario(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace barwave
