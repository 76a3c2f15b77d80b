#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftf/bitangent.hpp"
#include "ftf/curve_spec.hpp"
#include "ftf/errors.hpp"
#include "ftf/lifting.hpp"
#include "ftf/topology.hpp"
#include "ftf/torus.hpp"
#include "ftf/verify.hpp"

using namespace ftf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
    std::string input;
    int samples = 2048;
    int lift_steps = 4096;
    int grid_n = 48;
    int refine_iters = 40;
    double tol = 1e-2;
    std::uint64_t seed = 1;
    std::string out;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError(path + ": " + e.what());
    }
}

// A path to a JSON file, or a built-in name.
CurveSpec load_curve(const std::string& arg) {
    if (fs::is_regular_file(arg)) return curve_spec_from(read_json_file(arg));
    return named_curve_spec(arg);
}

PairSpec load_pair(const std::string& arg) {
    if (fs::is_regular_file(arg)) return parse_pair_spec(read_json_file(arg));
    return named_pair_spec(arg);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void emit(const RunConfig& cfg, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        write_text(cfg.out, text);
    }
}

json vec(const Vec3& v) { return {v.x, v.y, v.z}; }

void validate(const RunConfig& c) {
    if (c.samples < 64) throw SpecError("--samples must be at least 64");
    if (c.lift_steps < 256) throw SpecError("--lift-steps must be at least 256");
    if (c.grid_n < 2) throw SpecError("--grid must be at least 2");
    if (c.refine_iters < 0) throw SpecError("--refine must be non-negative");
    if (!(c.tol > 0.0 && c.tol < 1.0)) throw SpecError("--tol must lie in (0, 1)");
}

int cmd_analyze_curve(const RunConfig& cfg) {
    const CurveSpec spec = load_curve(cfg.input);
    const AdmissibleCurve a = reparametrize_admissible(build_curve(spec));
    const auto crossings = find_crossings(a.curve(), cfg.samples);
    const auto shells = extract_shells(a.curve(), crossings);
    const LiftedCurve lift = lift_curve(a, cfg.lift_steps);
    const int I = invariant_I(lift);
    json cs = json::array(), ss = json::array();
    for (const auto& c : crossings) {
        cs.push_back({{"t", c.t}, {"u", c.u}, {"point", vec(c.point)}, {"transversality", c.transversality}});
    }
    int pos = 0, neg = 0;
    for (const auto& s : shells) {
        const bool p = s.sign == ShellSign::Positive;
        (p ? pos : neg)++;
        ss.push_back({{"a", s.a}, {"b", s.b}, {"sign", p ? "positive" : "negative"}, {"interior_angle", s.interior_angle}});
    }
    const int n = static_cast<int>(crossings.size());
    emit(cfg, {
                  {"name", spec.name},
                  {"period_l", a.period_l()},
                  {"kappa_min", a.kappa_min()},
                  {"kappa_max", a.kappa_max()},
                  {"crossings", n},
                  {"crossing_list", cs},
                  {"shells", ss},
                  {"positive_shells", pos},
                  {"negative_shells", neg},
                  {"I", I},
                  {"parity_consistent", I == (n % 2 == 1 ? 0 : 1)},
                  {"max_fiber_defect", lift.max_fiber_defect()},
              });
    return 0;
}

int cmd_build_torus(const RunConfig& cfg) {
    const PairSpec spec = load_pair(cfg.input);
    const AdmissiblePair pair = build_pair(spec);
    const MuWindow w = check_mu_admissible(pair.gamma1, pair.gamma2);
    const FlatTorusImmersion T = build_torus(pair, cfg.lift_steps);
    const int n = std::min(cfg.grid_n, 32);
    double K = 0, E = 0, G = 0, F = 0, H = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s1 = T.period1() * i / n, s2 = T.period2() * j / n;
            const NumericForms f = numeric_forms(T, s1, s2);
            const AnalyticForms an = analytic_forms(pair, s1, s2);
            K = std::max(K, std::abs(f.K));
            E = std::max(E, std::abs(f.E - 1.0));
            G = std::max(G, std::abs(f.G - 1.0));
            F = std::max(F, std::abs(f.F - an.F));
            H = std::max(H, std::abs(f.H - an.H));
        }
    }
    emit(cfg, {
                  {"mu", pair.mu},
                  {"window", {w.low, w.high}},
                  {"l1", pair.gamma1.period_l()},
                  {"l2", pair.gamma2.period_l()},
                  {"period1", T.period1()},
                  {"period2", T.period2()},
                  {"I1", invariant_I(T.lift1())},
                  {"I2", invariant_I(T.lift2())},
                  {"max_fiber_defect", std::max(T.lift1().max_fiber_defect(), T.lift2().max_fiber_defect())},
                  {"forms_check",
                   {{"grid", n},
                    {"max_abs_K", K},
                    {"max_E_error", E},
                    {"max_G_error", G},
                    {"max_F_error", F},
                    {"max_H_error", H}}},
              });
    return 0;
}

int cmd_diameter(const RunConfig& cfg) {
    const AdmissiblePair pair = build_pair(load_pair(cfg.input));
    const auto t0 = std::chrono::steady_clock::now();
    const FlatTorusImmersion T = build_torus(pair, cfg.lift_steps);
    const DiameterResult d = extrinsic_diameter(T, cfg.grid_n, cfg.refine_iters);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "diameter: %.3f s on %d threads\n", secs, d.threads);
    emit(cfg, {
                  {"diameter", d.diameter},
                  {"pi_minus_diameter", kPi - d.diameter},
                  {"reaches_pi_within_tol", d.diameter >= kPi - cfg.tol},
                  {"tol", cfg.tol},
                  {"witness", {{"p", {d.p.s1, d.p.s2}}, {"q", {d.q.s1, d.q.s2}}}},
                  {"coarse_diameter", d.coarse_diameter},
                  {"grid_n", d.coarse_n},
                  {"refine_iters", d.refine_iters},
              });
    return 0;
}

int cmd_bitangent(const RunConfig& cfg) {
    const AdmissiblePair pair = build_pair(load_pair(cfg.input));
    const BitangentCertificate c = rolling_search(pair.gamma1, pair.gamma2, pair.mu);
    json j = to_json(c);
    j["mu"] = pair.mu;
    emit(cfg, j);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    SuiteConfig sc;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples;
    sc.lift_steps = cfg.lift_steps;
    sc.grid_n = cfg.grid_n;
    sc.refine_iters = cfg.refine_iters;
    sc.tol = cfg.tol;
    auto progress = [](const CheckResult& r) {
        std::fprintf(stderr, "[%s] %2d %s (%.2f s)\n", r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL"), r.id,
                     r.name.c_str(), r.seconds);
    };
    const std::vector<CheckResult> results =
        cfg.input.empty() ? run_acceptance_suite(sc, progress) : verify_pair(load_pair(cfg.input), sc, progress);
    json arr = json::array();
    bool ok = true;
    for (const auto& r : results) {
        arr.push_back(to_json(r));
        ok = ok && r.pass;
    }
    emit(cfg, {{"seed", cfg.seed}, {"all_pass", ok}, {"checks", arr}});
    return ok ? 0 : 2;
}

int cmd_catalog(const RunConfig& cfg) {
    json arr = json::array();
    for (const auto& e : builtin_catalog()) arr.push_back({{"name", e.name}, {"spec", to_json(e.spec)}});
    emit(cfg, arr);
    return 0;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_export(const RunConfig& cfg) {
    if (cfg.out.empty()) throw SpecError("export needs --out DIR");
    const AdmissiblePair pair = build_pair(load_pair(cfg.input));
    const FlatTorusImmersion T = build_torus(pair, cfg.lift_steps);
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec || !fs::is_directory(cfg.out)) throw IoError("cannot create directory " + cfg.out);
    const fs::path dir(cfg.out);
    json files = json::array();

    std::ostringstream mesh;
    write_mesh_csv(T, cfg.grid_n, mesh);
    write_text((dir / "mesh.csv").string(), mesh.str());
    files.push_back("mesh.csv");

    const LiftedCurve* lifts[] = {&T.lift1(), &T.lift2()};
    for (int k = 0; k < 2; ++k) {
        const LiftedCurve& L = *lifts[k];
        const SphericalCurve& c = L.curve().curve();
        std::ostringstream plane, lift;
        plane << "s,X,Y\n";
        lift << "s,w,x,y,z\n";
        const int n = cfg.samples;
        for (int i = 0; i <= n; ++i) {
            const double s = L.period_l() * i / n;
            const Vec3 p = c.point(s);
            plane << fmt(s) << ',' << fmt(p.x / (1.0 - p.z)) << ',' << fmt(p.y / (1.0 - p.z)) << '\n';
            const UnitQuaternion q = L.at(s);
            lift << fmt(s) << ',' << fmt(q.w) << ',' << fmt(q.x) << ',' << fmt(q.y) << ',' << fmt(q.z) << '\n';
        }
        const std::string tag = "gamma" + std::to_string(k + 1);
        write_text((dir / (tag + "_plane.csv")).string(), plane.str());
        write_text((dir / (tag + "_lift.csv")).string(), lift.str());
        files.push_back(tag + "_plane.csv");
        files.push_back(tag + "_lift.csv");
    }

    json cert;
    try {
        cert = to_json(rolling_search(pair.gamma1, pair.gamma2, pair.mu));
    } catch (const AnalysisError& e) {
        cert = {{"error", e.what()}};
    }
    write_text((dir / "certificate.json").string(), cert.dump(2) + "\n");
    files.push_back("certificate.json");

    std::cout << json{{"directory", cfg.out}, {"files", files}}.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flat tori in S^3 from admissible pairs of spherical curves"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add = [&](const char* name, const char* help, const char* input_help, bool input_required) {
        CLI::App* sub = app.add_subcommand(name, help);
        if (input_help) {
            auto* opt = sub->add_option("input", cfg.input, input_help);
            if (input_required) opt->required();
        }
        sub->add_option("--samples", cfg.samples, "curve samples (crossing scan, exported polylines)")->capture_default_str();
        sub->add_option("--lift-steps", cfg.lift_steps, "lift integration steps per period")->capture_default_str();
        sub->add_option("--grid", cfg.grid_n, "grid size for diameter search and mesh export")->capture_default_str();
        sub->add_option("--refine", cfg.refine_iters, "pattern-search iterations")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "diameter tolerance: report reaching pi when >= pi - tol")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
        sub->add_option("--out", cfg.out, "output file (directory for export)");
        return sub;
    };
    const char* curve_help = "curve spec JSON file or built-in name";
    const char* pair_help = "pair spec JSON file or built-in pair (clifford, figure_eight, sigma)";
    auto* analyze = add("analyze-curve", "crossings, shells and monodromy of a curve", curve_help, true);
    auto* torus = add("build-torus", "build the flat torus of a pair and check its forms", pair_help, true);
    auto* diam = add("diameter", "lower bound for the extrinsic diameter", pair_help, true);
    auto* bit = add("bitangent", "rolling search for a second-kind bi-tangent", pair_help, true);
    auto* ver = add("verify", "run the property checks (on one pair if given)", pair_help, false);
    auto* cat = add("catalog", "print the built-in curve specs", nullptr, false);
    auto* exp = add("export", "write mesh, curve polylines and certificate", pair_help, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        validate(cfg);
        if (*analyze) return cmd_analyze_curve(cfg);
        if (*torus) return cmd_build_torus(cfg);
        if (*diam) return cmd_diameter(cfg);
        if (*bit) return cmd_bitangent(cfg);
        if (*ver) return cmd_verify(cfg);
        if (*cat) return cmd_catalog(cfg);
        if (*exp) return cmd_export(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        const std::string what = e.what();
        if (what.find("non-generic") != std::string::npos) {
            std::fprintf(stderr, "hint: jitter the spec's \"rotation\" slightly\n");
        }
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
