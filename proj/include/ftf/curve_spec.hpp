#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftf/curve.hpp"

namespace ftf {

// Parsed curve spec file:
//   {"version": 1, "kind": "trig_poly_plane", "x_cos": [...], "x_sin": [...],
//    "y_cos": [...], "y_sin": [...], "scale": a, "rotation": r, "translation": [u, v]}
//   {"version": 1, "kind": "circle", "kappa": k}
// Both forms accept an optional "reverse": true (traverse backwards).
struct CurveSpec {
    enum class Kind { TrigPolyPlane, Circle };
    Kind kind = Kind::Circle;
    TrigPolyPlaneSpec poly;
    double kappa = 0.0;
    bool reverse = false;
    std::string name;  // catalog name, informational
};

CurveSpec parse_curve_spec(const nlohmann::json& j);
nlohmann::json to_json(const CurveSpec& spec);

// Built-in specs. `name` is one of
//   "circle" / "circle(k)", "figure_eight", "lens_shell", "sigma_a" / "sigma_a(a)",
// optionally prefixed with "reverse:" to flip the orientation. Fractions such
// as "sigma_a(1/7)" are accepted.
CurveSpec named_curve_spec(const std::string& name);

// A JSON value that is either a spec object or a name string.
CurveSpec curve_spec_from(const nlohmann::json& j);

SphericalCurve build_curve(const CurveSpec& spec);

struct CatalogEntry {
    std::string name;
    CurveSpec spec;
};

// circle(2), figure_eight, sigma_a(1/7), lens_shell.
std::vector<CatalogEntry> builtin_catalog();

// Pair spec file: {"gamma1": <curve spec or name>, "gamma2": ..., "mu": optional}.
struct PairSpec {
    CurveSpec gamma1, gamma2;
    bool has_mu = false;
    double mu = 0.0;
};

PairSpec parse_pair_spec(const nlohmann::json& j);
nlohmann::json to_json(const PairSpec& spec);

// Named pairs used throughout the tests and the CLI:
//   "clifford"      circle(1) / circle(-1)
//   "figure_eight"  figure_eight / reverse:figure_eight
//   "sigma"         sigma_a(1/7) / reverse:sigma_a(1/7)
PairSpec named_pair_spec(const std::string& name);

// Random pair with kappa1 > 0.05 and kappa2 < -0.05: each member is either a
// circle or a perturbed small clockwise plane circle (reversed for gamma2).
PairSpec random_pair_spec(std::mt19937_64& rng);

}  // namespace ftf
