#include <barwave/router.hpp>
#include <barwave/scenario.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace barwave;
using nlohmann::json;

namespace {

Route route_of(double h1, double h2, double h3, double a = 0.72) {
    const Params p = make_params(h1, h2, h3, a, 1.8, 1.5);
    return route(p, rationalize_position(p.a, p.L));
}

json base_scenario() {
    return json::parse(R"({
        "name": "t",
        "params": {"h1": 0.3, "h2": 0.9, "h3": 0.7, "a": 0.72, "L": 1.8, "c": 1.5},
        "initial": {"u0": {"type": "gaussian", "amplitude": 0.1, "mu": 0.6, "sigma": 0.12}},
        "grid": {"nx": 11, "nt": 5, "T": 1.0},
        "solver": {"mode": "auto", "N": 12}
    })");
}

}  // namespace

TEST(Route, Regimes) {
    EXPECT_EQ(route_of(0.3, 0.9, 0.7).regime, Regime::modal);
    EXPECT_EQ(route_of(0.5, 1.0, 0.0).regime, Regime::right_transparent);
    EXPECT_EQ(route_of(1.0, 0.5, 0.0).regime, Regime::left_transparent);
    EXPECT_EQ(route_of(1.0, 1.0, 0.4).regime, Regime::both_transparent);
    EXPECT_EQ(route_of(1.0, 1.0, 1.0).regime, Regime::both_transparent);
    EXPECT_EQ(route_of(2.0, 0.5, -1.25).regime, Regime::modal);  // double-pole family
    EXPECT_STREQ(to_string(Regime::both_transparent), "both_transparent");
}

TEST(Route, Refusals) {
    EXPECT_THROW(route_of(-1.0, 0.5, 0.0), SuperInstability);
    EXPECT_THROW(route_of(1.0, 1.0, -1.0), SuperInstability);
    EXPECT_THROW(route_of(0.5, 1.0, 0.4), UnsupportedRegime);
    EXPECT_THROW(route_of(1.0, 0.5, 0.4), UnsupportedRegime);
    EXPECT_THROW(route_of(0.3, 0.9, 1.0), UnsupportedRegime);
    EXPECT_THROW(route_of(0.5, 0.5, -0.5), UnsupportedDoublePole);
    // SuperInstability is an UnsupportedRegime.
    EXPECT_THROW(route_of(0.3, -1.0, 0.0), UnsupportedRegime);
}

TEST(Route, CriticalPathsSkipModalExpansion) {
    // build_green_expansion throws in a critical regime, so success means it was not called.
    const Params p = make_params(0.5, 1.0, 0.0, 0.72, 1.8, 1.5);
    const auto pos = rationalize_position(p.a, p.L);
    EXPECT_THROW(build_green_expansion(p, pos), ExpansionInvalid);
    InitialData d{Profile::gaussian(0.1, 0.6, 0.12), {}};
    const auto f = solve_response(p, pos, d, {}, ResponseGrid::uniform(p.L, 5, 1.0, 3));
    EXPECT_EQ(f.method, "right_transparent");
    const Params both = make_params(1.0, 1.0, 0.3, 0.72, 1.8, 1.5);
    EXPECT_EQ(solve_response(both, pos, d, {}, ResponseGrid::uniform(p.L, 5, 1.0, 3)).method, "both_transparent");
    const Params left = make_params(1.0, 0.2, 0.0, 0.72, 1.8, 1.5);
    EXPECT_EQ(solve_response(left, pos, d, {}, ResponseGrid::uniform(p.L, 5, 1.0, 3)).method, "left_transparent");
}

TEST(Route, ModalPathCarriesTruncation) {
    const Params p = make_params(0.3, 0.9, 0.7, 0.72, 1.8, 1.5);
    const auto f = solve_response(p, rationalize_position(p.a, p.L), {Profile::gaussian(0.1, 0.6, 0.12), {}}, {},
                                  ResponseGrid::uniform(p.L, 5, 1.0, 3), 12);
    EXPECT_EQ(f.method, "modal");
    EXPECT_EQ(f.truncation, 12);
}

TEST(Scenario, ParsesFullDocument) {
    json j = base_scenario();
    j["initial"]["v0"] = {{"type", "sum"},
                          {"parts", json::array({{{"type", "constant"}, {"value", 0.1}},
                                                 {{"type", "table"}, {"x", {0.0, 1.8}}, {"y", {0.0, 1.0}}}})}};
    j["forcing"] = {{"type", "separable"},
                    {"terms", json::array({{{"space", {{"type", "constant"}, {"value", 2.0}}},
                                            {"time", {{"type", "sinusoid"}, {"amplitude", 1.0}, {"omega", 3.0}}}}})}};
    j["solver"]["mass"] = "lumped";
    j["solver"]["n_elements"] = 60;
    const Scenario sc = parse_scenario(j);
    EXPECT_EQ(sc.name, "t");
    EXPECT_EQ(sc.nx, 11u);
    EXPECT_EQ(sc.nt, 5u);
    EXPECT_DOUBLE_EQ(sc.horizon(), 1.0);
    EXPECT_EQ(sc.solver.N, 12);
    EXPECT_EQ(sc.solver.mass, MassType::lumped);
    EXPECT_EQ(*sc.solver.n_elements, 60);
    EXPECT_NEAR(sc.initial.v0(0.9), 0.1 + 0.5, 1e-15);
    EXPECT_NEAR(sc.forcing(0.3, 0.5), 2.0 * std::sin(1.5), 1e-15);
    EXPECT_EQ(sc.position().p, 5);
}

TEST(Scenario, DefaultHorizonIsTwoTransits) {
    json j = base_scenario();
    j.erase("grid");
    const Scenario sc = parse_scenario(j);
    EXPECT_DOUBLE_EQ(sc.horizon(), 2 * 1.8 / 1.5);
    EXPECT_EQ(sc.nx, kDefaultNx);
    EXPECT_EQ(sc.nt, kDefaultNt);
}

TEST(Scenario, ErrorsNameTheField) {
    auto expect_msg = [](json j, const std::string& needle) {
        try {
            parse_scenario(j);
            ADD_FAILURE() << "no error for " << needle;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    json j = base_scenario();
    j["params"].erase("c");
    expect_msg(j, "c");
    j = base_scenario();
    j["params"]["a"] = 2.5;
    expect_msg(j, "params");
    j = base_scenario();
    j["initial"]["u0"]["type"] = "wavelet";
    expect_msg(j, "initial.u0.type");
    j = base_scenario();
    j["initial"]["u0"].erase("sigma");
    expect_msg(j, "sigma");
    j = base_scenario();
    j["solver"]["mode"] = "magic";
    expect_msg(j, "solver.mode");
    j = base_scenario();
    j["solver"]["max_denominator"] = 1;
    expect_msg(j, "max_denominator");
    j = base_scenario();
    j["grid"]["nx"] = 1;
    expect_msg(j, "grid");
    j = base_scenario();
    j["forcing"] = {{"type", "separable"}, {"terms", json::array({{{"space", {{"type", "zero"}}}}})}};
    expect_msg(j, "forcing.terms[0]");
    expect_msg(json::array(), "top level");
}

TEST(Scenario, LoadReportsSyntaxOffset) {
    const auto path = std::filesystem::temp_directory_path() / "barwave_bad_scenario.json";
    {
        std::ofstream f(path);
        f << "{\"params\": {\"h1\": 0.3,, }}";
    }
    try {
        load_scenario(path.string());
        ADD_FAILURE() << "no error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    std::filesystem::remove(path);
    EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}
