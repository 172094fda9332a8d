// barwave: spectrum | respond | compare | classify
//
// Exit codes: 0 ok, 2 configuration error, 3 unsupported regime, 4 numerical failure.

#include <barwave/barwave.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace barwave;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kUnsupported = 3, kNumerical = 4 };

struct Common {
    std::string config;
    std::string out = ".";
    std::string format = "csv";
};

std::ofstream open_out(const Common& o, const std::string& name) {
    fs::create_directories(o.out);
    const fs::path path = fs::path(o.out) / name;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    return f;
}

void write_json(const Common& o, const std::string& name, const json& j) {
    auto f = open_out(o, name);
    f << j.dump(2) << '\n';
}

ResponseField run_fem(const Scenario& sc) {
    const FemModel m = assemble(sc.params, sc.solver.n_elements.value_or(160), sc.solver.mass);
    const double dt = sc.solver.dt.value_or(default_time_step(m));
    return fem_time_response(m, sc.initial, sc.forcing, dt, sc.horizon()).field;
}

/// Response along the path requested by solver.mode.
ResponseField run_response(const Scenario& sc, Route& r) {
    const auto pos = sc.position();
    const auto grid = sc.grid();
    switch (sc.solver.mode) {
        case SolverMode::automatic:
            r = route(sc.params, pos);
            return solve_response(sc.params, pos, sc.initial, sc.forcing, grid, sc.solver.N);
        case SolverMode::modal: {
            r.classification = classify(sc.params, pos);
            const auto ge = build_green_expansion(sc.params, pos, sc.solver.N);
            return respond_modal(ge, sc.initial, sc.forcing, grid);
        }
        case SolverMode::kernel:
            r = route(sc.params, pos);
            switch (r.regime) {
                case Regime::modal: {
                    const auto ge = build_green_expansion(sc.params, pos, sc.solver.N);
                    return respond_kernel(ModalKernel(ge), sc.initial, sc.forcing, grid, "modal_kernel");
                }
                case Regime::right_transparent:
                    return respond_kernel(RightTransparentKernel(sc.params), sc.initial, sc.forcing, grid);
                case Regime::left_transparent:
                    return respond_kernel(LeftTransparentKernel(sc.params), sc.initial, sc.forcing, grid);
                case Regime::both_transparent:
                    return respond_kernel(BothTransparentKernel(sc.params), sc.initial, sc.forcing, grid);
            }
            break;
        case SolverMode::critical:
            r = route(sc.params, pos);
            if (r.regime == Regime::modal) throw ConfigError("solver.mode=critical but no h_i equals +1");
            return solve_response(sc.params, pos, sc.initial, sc.forcing, grid, sc.solver.N);
        case SolverMode::fem:
            r.classification = classify(sc.params, pos);
            return run_fem(sc);
    }
    throw ConfigError("unknown solver mode");
}

int cmd_classify(const Common& o) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot open '" + o.config + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(o.config + ": JSON syntax error at byte " + std::to_string(e.byte));
    }
    const json& pj = j.contains("params") ? j.at("params") : j;
    Params p;
    try {
        p = pj.get<Params>();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    const auto pos = rationalize_position(p.a, p.L);
    json out = classify(p, pos);
    out["q"] = pos.q;
    out["p"] = pos.p;
    std::cout << out.dump(2) << '\n';
    return kOk;
}

int cmd_spectrum(const Common& o) {
    const Scenario sc = load_scenario(o.config);
    const auto pos = sc.position();
    const Spectrum sp = compute_spectrum(sc.params, pos, sc.solver.N);
    if (o.format == "json") {
        write_json(o, "spectrum.json", spectrum_json(sp));
    } else {
        auto f = open_out(o, "spectrum.csv");
        write_spectrum_csv(f, sp);
    }
    json summary{{"scenario", sc.name},
                 {"q", pos.q},
                 {"p", pos.p},
                 {"ladders", sp.ladders.size()},
                 {"root_residual", sp.roots.residual},
                 {"all_simple", sp.roots.all_simple()}};
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

int cmd_respond(const Common& o) {
    const Scenario sc = load_scenario(o.config);
    Route r;
    const ResponseField field = run_response(sc, r);
    if (o.format == "json") {
        write_json(o, "response.json", field_json(field));
    } else {
        auto f = open_out(o, "response.csv");
        write_field_csv(f, field);
    }
    json summary{{"scenario", sc.name},
                 {"method", field.method},
                 {"classification", r.classification},
                 {"truncation", field.truncation},
                 {"max_imag_residual", field.max_imag_residual},
                 {"max_abs", field.max_abs()},
                 {"energy", energy_trace(field, sc.params.c)}};
    summary["rigid_term"] = std::isnan(field.rigid_term) ? json(nullptr) : json(field.rigid_term);
    write_json(o, "summary.json", summary);
    summary.erase("energy");
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

int cmd_compare(const Common& o) {
    const Scenario sc = load_scenario(o.config);
    if (!sc.solver.n_elements) throw ConfigError("compare: scenario needs solver.n_elements");
    const FemModel m = assemble(sc.params, *sc.solver.n_elements, sc.solver.mass);
    const double dt = sc.solver.dt.value_or(default_time_step(m));
    const auto fem = fem_time_response(m, sc.initial, sc.forcing, dt, sc.horizon());
    const auto pos = sc.position();

    const double used_dt = fem.field.grid.t.size() > 1 ? fem.field.grid.t[1] : dt;
    json report{{"scenario", sc.name}, {"n_elements", m.n_elements}, {"dt", used_dt}};
    try {
        const ResponseField an = solve_response(sc.params, pos, sc.initial, sc.forcing, fem.field.grid, sc.solver.N);
        double max_abs = 0.0, num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < an.values.size(); ++i) {
            const double d = an.values[i] - fem.field.values[i];
            max_abs = std::max(max_abs, std::abs(d));
            num += d * d;
            den += an.values[i] * an.values[i];
        }
        report["method"] = an.method;
        report["max_abs_error"] = max_abs;
        report["rel_l2_error"] = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    } catch (const UnsupportedRegime& e) {
        report["analytic"] = std::string("unavailable: ") + e.what();
    }

    const FemSpectrum fs_ = fem_eigenvalues(m);
    const auto cl = classify(sc.params, pos);
    if (!cl.critical_flags.any()) {
        const SpuriousReport rep = spurious_report(m, fs_);
        json sp = json::array();
        for (cplx s : rep.spurious) sp.push_back({{"re", s.real()}, {"im", s.imag()}});
        report["matching_radius"] = rep.radius;
        report["spurious"] = sp;
        auto f = open_out(o, "fem_spectrum.csv");
        write_fem_spectrum_csv(f, rep);
    } else {
        report["spurious"] = "no analytic spectrum in a critical regime";
    }
    write_json(o, "compare.json", report);
    std::cout << report.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectrum and response of a bar with viscous end and internal dampers"};
    app.require_subcommand(1);
    Common opt;
    auto add = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "scenario JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        return sub;
    };
    auto* spectrum = add("spectrum", "eigenvalue ladders");
    auto* respond = add("respond", "response u(x, t)");
    auto* compare = add("compare", "analytic vs finite elements");
    auto* classify_cmd = add("classify", "regime flags for a parameter set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(opt);
        if (*respond) return cmd_respond(opt);
        if (*compare) return cmd_compare(opt);
        if (*classify_cmd) return cmd_classify(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const MeshError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const UnsupportedRegime& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return kUnsupported;
    } catch (const UnsupportedDoublePole& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return kUnsupported;
    } catch (const CriticalCoefficient& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return kUnsupported;
    } catch (const ExpansionInvalid& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return kUnsupported;
    } catch (const MultiplicityError& e) {
        std::cerr << "unsupported regime: " << e.what() << '\n';
        return kUnsupported;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kConfig;
}
