#include "ftf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ftf/bitangent.hpp"
#include "ftf/errors.hpp"
#include "ftf/lifting.hpp"
#include "ftf/topology.hpp"
#include "ftf/torus.hpp"

namespace ftf {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct FormErrors {
    double K = 0, E = 0, G = 0, F = 0, H = 0;
};

FormErrors form_errors(const FlatTorusImmersion& T, int n) {
    FormErrors e;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s1 = T.period1() * i / n, s2 = T.period2() * j / n;
            const NumericForms f = numeric_forms(T, s1, s2);
            const AnalyticForms a = analytic_forms(T.pair(), s1, s2);
            e.K = std::max(e.K, std::abs(f.K));
            e.E = std::max(e.E, std::abs(f.E - 1.0));
            e.G = std::max(e.G, std::abs(f.G - 1.0));
            e.F = std::max(e.F, std::abs(f.F - a.F));
            e.H = std::max(e.H, std::abs(f.H - a.H));
        }
    }
    return e;
}

std::vector<AdmissiblePair> random_pairs(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<AdmissiblePair> out;
    while (static_cast<int>(out.size()) < count) out.push_back(build_pair(random_pair_spec(rng)));
    return out;
}

AdmissibleCurve catalog_curve(const std::string& name) {
    return reparametrize_admissible(build_curve(named_curve_spec(name)));
}

std::vector<std::string> catalog_names(bool with_reversed) {
    std::vector<std::string> out;
    for (const auto& e : builtin_catalog()) {
        out.push_back(e.name);
        if (with_reversed) out.push_back("reverse:" + e.name);
    }
    return out;
}

double shell_kappa(const SphericalCurve& c, const Shell& sh, bool want_max) {
    double r = want_max ? -1e300 : 1e300;
    for (int i = 0; i <= 512; ++i) {
        const double k = geodesic_curvature(c, sh.a + (sh.b - sh.a) * i / 512);
        r = want_max ? std::max(r, k) : std::min(r, k);
    }
    return r;
}

double grid_conjugation_error(const FlatTorusImmersion& U, int n,
                              const std::function<UnitQuaternion(double, double)>& expected) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s1 = U.period1() * i / n, s2 = U.period2() * j / n;
            worst = std::max(worst, distance(U(s1, s2), expected(s1, s2)));
        }
    }
    return worst;
}

// Runs `body`, which fills in measured/pass/detail, and converts errors into failures.
CheckResult run_check(int id, const std::string& name, double threshold, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.id = id;
    r.name = name;
    r.threshold = threshold;
    const auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
}

CheckResult check_flatness(const SuiteConfig& cfg) {
    return run_check(1, "flatness and Chebyshev forms", 1e-3, [&](CheckResult& r) {
        const auto t0 = Clock::now();
        double worst = 0.0;
        for (const AdmissiblePair& p : random_pairs(cfg.seed, 10)) {
            const FormErrors e = form_errors(build_torus(p, cfg.lift_steps), 16);
            worst = std::max({worst, e.K, e.E, e.G, e.F});
        }
        const double t = seconds_since(t0);
        r.measured = worst;
        r.pass = worst <= 1e-3 && t < 30.0;
        std::ostringstream os;
        os << "10 random pairs, 16x16 grids, max |K|, |E-1|, |G-1|, |F-cos w|; " << (t < 30.0 ? "within" : "over")
           << " the 30 s budget";
        r.detail = os.str();
    });
}

CheckResult check_mean_curvature(const SuiteConfig& cfg) {
    return run_check(2, "mean curvature", 2e-3, [&](CheckResult& r) {
        double worst = 0.0;
        for (const AdmissiblePair& p : random_pairs(cfg.seed, 10)) {
            worst = std::max(worst, form_errors(build_torus(p, cfg.lift_steps), 16).H);
        }
        const FlatTorusImmersion T = build_torus(build_pair(named_pair_spec("clifford")), cfg.lift_steps);
        double clifford = 0.0;
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                clifford = std::max(clifford, std::abs(numeric_forms(T, T.period1() * i / 16, T.period2() * j / 16).H));
            }
        }
        r.measured = worst;
        r.pass = worst <= 2e-3 && clifford < 1e-3;
        std::ostringstream os;
        os << "max |H - H_formula| on random pairs; Clifford max |H| = " << clifford;
        r.detail = os.str();
    });
}

CheckResult check_parity(const SuiteConfig& cfg) {
    return run_check(3, "monodromy parity", 0.0, [&](CheckResult& r) {
        int mismatches = 0;
        std::ostringstream os;
        for (const std::string& name : catalog_names(true)) {
            const AdmissibleCurve a = catalog_curve(name);
            const int I = invariant_I(lift_curve(a, cfg.lift_steps));
            const int n = static_cast<int>(find_crossings(a.curve(), cfg.samples).size());
            const int expected = n % 2 == 1 ? 0 : 1;
            if (I != expected) ++mismatches;
            os << name << ": I=" << I << " #=" << n << "; ";
        }
        for (auto [name, want] : {std::pair{"circle(2)", 1}, std::pair{"figure_eight", 0}, std::pair{"sigma_a(1/7)", 0}}) {
            if (invariant_I(lift_curve(catalog_curve(name), cfg.lift_steps)) != want) ++mismatches;
        }
        r.measured = mismatches;
        r.pass = mismatches == 0;
        r.detail = os.str();
    });
}

CheckResult check_clifford_diameter(const SuiteConfig& cfg) {
    return run_check(4, "Clifford diameter", 1e-6, [&](CheckResult& r) {
        const auto t0 = Clock::now();
        const FlatTorusImmersion T = build_torus(build_pair(named_pair_spec("clifford")), cfg.lift_steps);
        const DiameterResult d = extrinsic_diameter(T, cfg.grid_n, cfg.refine_iters);
        const double t = seconds_since(t0);
        r.measured = std::abs(d.diameter - kPi);
        r.pass = r.measured <= 1e-6 && t < 60.0;
        std::ostringstream os;
        os.precision(17);
        os << "diameter " << d.diameter << " at grid " << cfg.grid_n;
        r.detail = os.str();
    });
}

CheckResult check_figure_eight(const SuiteConfig& cfg) {
    return run_check(5, "figure-eight certificate and diameter", 1e-6, [&](CheckResult& r) {
        const auto t0 = Clock::now();
        const AdmissiblePair P = build_pair(named_pair_spec("figure_eight"));
        const BitangentCertificate c = rolling_search(P.gamma1, P.gamma2, P.mu);
        const DiameterResult d = extrinsic_diameter(build_torus(P, cfg.lift_steps), cfg.grid_n, cfg.refine_iters);
        const double t = seconds_since(t0);
        r.measured = std::max(c.position_residual, c.normal_residual);
        const bool diameter_ok = d.diameter >= kPi - cfg.tol;
        r.pass = c.kind == BitangentKind::Second && r.measured < 1e-6 && diameter_ok && t < 120.0;
        std::ostringstream os;
        os.precision(10);
        os << "kind " << to_string(c.kind) << ", diameter " << d.diameter << (diameter_ok ? " >= " : " < ") << "pi - "
           << cfg.tol;
        r.detail = os.str();
    });
}

CheckResult check_angle(const SuiteConfig&) {
    return run_check(6, "inscribed bi-tangent angle", kPi - 1e-6, [&](CheckResult& r) {
        double worst = 1e300;
        int count = 0;
        for (const std::string& name : catalog_names(true)) {
            const SphericalCurve c = catalog_curve(name).curve();
            for (const Shell& sh : extract_shells(c, find_crossings(c))) {
                if (sh.sign != ShellSign::Positive) continue;
                const double m = std::max(0.0, shell_kappa(c, sh, true));
                for (double f : {0.02, 0.2, 1.0, 3.0, 10.0}) {
                    const double mu = m + f * (1.0 + m);
                    worst = std::min(worst, inscribed_bitangent_circle(c, sh, mu).angle_theta);
                    ++count;
                }
            }
        }
        r.measured = worst;
        r.pass = count > 0 && worst >= kPi - 1e-6;
        r.detail = "smallest angle over " + std::to_string(count) + " (shell, mu) cases";
    });
}

CheckResult check_contacts(const SuiteConfig&) {
    return run_check(7, "circumscribed contacts", 2.0, [&](CheckResult& r) {
        int count = 0, bad = 0, no_window = 0;
        for (const std::string& name : catalog_names(true)) {
            const SphericalCurve c = catalog_curve(name).curve();
            for (const Shell& sh : extract_shells(c, find_crossings(c))) {
                if (sh.sign != ShellSign::Negative) continue;
                const double kmin = shell_kappa(c, sh, false);
                if (!(kmin > 0.0)) {
                    ++no_window;
                    continue;
                }
                for (double f : {0.25, 0.5, 0.9}) {
                    try {
                        if (circumscribed_bitangent_circle(c, sh, f * kmin).contacts != 2) ++bad;
                    } catch (const AnalysisError&) {
                        ++bad;
                    }
                    ++count;
                }
            }
        }
        r.measured = bad;
        r.pass = count > 0 && bad == 0;
        r.detail = std::to_string(count) + " (shell, mu) cases, " + std::to_string(bad) + " without exactly 2 contacts; " +
                   std::to_string(no_window) + " negative shells have no mu > 0 below their curvature";
    });
}

CheckResult check_conjugations(const SuiteConfig& cfg) {
    return run_check(8, "parallel, swap and reverse conjugations", 1e-5, [&](CheckResult& r) {
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double pos = 0.0, hflip = 0.0;
        int draws = 0;
        while (draws < 3) {
            const AdmissiblePair P = build_pair(random_pair_spec(rng));
            const FlatTorusImmersion T = build_torus(P, cfg.lift_steps);

            const double th = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.02 + 0.08 * u(rng));
            AdmissiblePair Q;
            try {
                Q = parallel_deform_pair(P, th);
            } catch (const AdmissibilityError&) {
                continue;
            }
            const FlatTorusImmersion Up = build_torus(Q, cfg.lift_steps);
            const UnitQuaternion g = exp_su2({th / 2, 0, 0});
            pos = std::max(pos, grid_conjugation_error(Up, 12, [&](double a, double b) {
                               return qmul(qmul(g, T(a, b)), inverse(g));
                           }));

            const FlatTorusImmersion Us = build_torus(swap_negate_pair(P), cfg.lift_steps);
            const UnitQuaternion gi =
                solve_conjugator(inverse(T(0.9, 0.4)), Us(0.4, 0.9), inverse(T(2.3, 1.7)), Us(1.7, 2.3));
            pos = std::max(pos, grid_conjugation_error(Us, 12, [&](double a, double b) {
                               return qmul(qmul(gi, inverse(T(b, a))), inverse(gi));
                           }));

            const double lo = std::max(P.gamma2.kappa_max(), -1e3), hi = P.gamma1.kappa_min();
            const double cot = lo + (hi - lo) * (0.2 + 0.6 * u(rng));
            const double theta = std::atan2(1.0, cot);
            const AdmissiblePair R = reverse_deform_pair(P, theta);
            const FlatTorusImmersion Ur = build_torus(R, cfg.lift_steps);
            const UnitQuaternion a = solve_conjugator(T(0.9, -0.4), Ur(0.9, 0.4), T(2.3, -1.7), Ur(2.3, 1.7));
            pos = std::max(pos, grid_conjugation_error(Ur, 12, [&](double s1, double s2) {
                               return qmul(qmul(a, T(s1, -s2)), inverse(a));
                           }));
            for (int i = 0; i < 12; ++i) {
                for (int j = 0; j < 12; ++j) {
                    const double s1 = Ur.period1() * i / 12, s2 = Ur.period2() * j / 12;
                    const double h_new = numeric_forms(Ur, s1, s2).H;
                    const double h_old = numeric_forms(T, s1, -s2).H;
                    hflip = std::max(hflip, std::abs(h_new + h_old));
                }
            }
            ++draws;
        }
        r.measured = pos;
        r.pass = pos <= 1e-5 && hflip <= 2e-3;
        std::ostringstream os;
        os << "3 draws, 12x12 grids; max quaternion error " << pos << ", max |H' + H| " << hflip;
        r.detail = os.str();
    });
}

CheckResult check_sigma_shells(const SuiteConfig& cfg) {
    return run_check(9, "sigma shell structure", 0.0, [&](CheckResult& r) {
        auto count = [&](const std::string& name, int& pos, int& neg) {
            const SphericalCurve c = catalog_curve(name).curve();
            pos = neg = 0;
            for (const Shell& sh : extract_shells(c, find_crossings(c, cfg.samples))) {
                (sh.sign == ShellSign::Positive ? pos : neg)++;
            }
        };
        int p1, n1, p2, n2;
        count("sigma_a(1/7)", p1, n1);
        count("reverse:sigma_a(1/7)", p2, n2);
        r.pass = p1 == 3 && n1 == 0 && p2 == 0 && n2 == 3;
        r.measured = r.pass ? 0.0 : 1.0;
        std::ostringstream os;
        os << "sigma: " << p1 << "+ " << n1 << "-; reversed: " << p2 << "+ " << n2 << "-";
        r.detail = os.str();
    });
}

CheckResult check_lift(const SuiteConfig& cfg) {
    return run_check(10, "lift fidelity", 1e-6, [&](CheckResult& r) {
        double worst = 0.0;
        for (const std::string& name : catalog_names(false)) {
            const AdmissibleCurve a = catalog_curve(name);
            const LiftedCurve lift = lift_curve(a, cfg.lift_steps);
            const UnitQuaternion end = lift_arc_endpoint(a, 0.0, 4 * a.period_l(), lift.at(0.0), cfg.lift_steps);
            worst = std::max({worst, lift.max_fiber_defect(), fiber_defect(a.curve(), 0.0, end)});
        }
        double sign_dep = 0.0;
        for (const char* pair : {"sigma", "figure_eight"}) {
            const FlatTorusImmersion T = build_torus(build_pair(named_pair_spec(pair)), cfg.lift_steps);
            const FlatTorusImmersion U(T.pair(), T.lift1().negated(), T.lift2());
            const FlatTorusImmersion V(T.pair(), T.lift1(), T.lift2().negated());
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    const double s1 = T.period1() * i / 8, s2 = T.period2() * j / 8;
                    sign_dep = std::max({sign_dep, distance(U(s1, s2), T(s1, s2)), distance(V(s1, s2), T(s1, s2))});
                }
            }
        }
        r.measured = worst;
        r.pass = worst < 1e-6 && sign_dep < 1e-9;
        std::ostringstream os;
        os << "max fiber defect over 4 periods; lift-sign dependence " << sign_dep;
        r.detail = os.str();
    });
}

void emit(std::vector<CheckResult>& out, CheckResult r, const CheckCallback& cb) {
    if (cb) cb(r);
    out.push_back(std::move(r));
}

}  // namespace

std::vector<CheckResult> run_acceptance_suite(const SuiteConfig& cfg, const CheckCallback& on_result) {
    std::vector<CheckResult> out;
    emit(out, check_flatness(cfg), on_result);
    emit(out, check_mean_curvature(cfg), on_result);
    emit(out, check_parity(cfg), on_result);
    emit(out, check_clifford_diameter(cfg), on_result);
    emit(out, check_figure_eight(cfg), on_result);
    emit(out, check_angle(cfg), on_result);
    emit(out, check_contacts(cfg), on_result);
    emit(out, check_conjugations(cfg), on_result);
    emit(out, check_sigma_shells(cfg), on_result);
    emit(out, check_lift(cfg), on_result);
    return out;
}

std::vector<CheckResult> verify_pair(const PairSpec& spec, const SuiteConfig& cfg, const CheckCallback& on_result) {
    std::vector<CheckResult> out;
    AdmissiblePair pair;
    bool admissible = false;
    emit(out, run_check(1, "admissibility", 0.0, [&](CheckResult& r) {
             try {
                 pair = build_pair(spec);
                 admissible = true;
                 r.pass = true;
                 r.measured = pair.mu;
                 r.detail = "mu = " + std::to_string(pair.mu);
             } catch (const AdmissibilityError& e) {
                 r.pass = false;
                 r.detail = e.what();
             }
         }),
         on_result);
    const char* names[] = {"flatness and Chebyshev forms", "mean curvature", "diameter", "bi-tangent certificate"};
    if (!admissible) {
        for (int i = 0; i < 4; ++i) {
            CheckResult r;
            r.id = i + 2;
            r.name = names[i];
            r.skipped = true;
            r.pass = true;
            r.detail = "skipped: pair is not admissible";
            emit(out, r, on_result);
        }
        return out;
    }
    const FlatTorusImmersion T = build_torus(pair, cfg.lift_steps);
    const FormErrors fe = form_errors(T, 16);
    emit(out, run_check(2, names[0], 1e-3, [&](CheckResult& r) {
             r.measured = std::max({fe.K, fe.E, fe.G, fe.F});
             r.pass = r.measured <= 1e-3;
         }),
         on_result);
    emit(out, run_check(3, names[1], 2e-3, [&](CheckResult& r) {
             r.measured = fe.H;
             r.pass = fe.H <= 2e-3;
         }),
         on_result);
    emit(out, run_check(4, names[2], kPi - cfg.tol, [&](CheckResult& r) {
             const DiameterResult d = extrinsic_diameter(T, cfg.grid_n, cfg.refine_iters);
             r.measured = d.diameter;
             r.pass = d.diameter <= kPi + 1e-9;
             r.detail = d.diameter >= kPi - cfg.tol ? "diameter >= pi - tol" : "no pair of points found at distance pi - tol";
         }),
         on_result);
    emit(out, run_check(5, names[3], 1e-6, [&](CheckResult& r) {
             try {
                 const BitangentCertificate c = rolling_search(pair.gamma1, pair.gamma2, pair.mu);
                 r.measured = std::max(c.position_residual, c.normal_residual);
                 r.pass = r.measured < 1e-6;
                 r.detail = std::string("kind ") + to_string(c.kind);
             } catch (const AnalysisError& e) {
                 const std::string what = e.what();
                 if (what.rfind("hypothesis violated", 0) == 0) {
                     r.skipped = true;
                     r.pass = true;
                     r.detail = "skipped: " + what;
                 } else {
                     throw;
                 }
             }
         }),
         on_result);
    return out;
}

nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j = {{"id", r.id},         {"name", r.name},           {"pass", r.pass},
                        {"skipped", r.skipped}, {"measured", r.measured}, {"threshold", r.threshold}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

}  // namespace ftf
