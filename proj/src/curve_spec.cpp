#include "ftf/curve_spec.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "ftf/errors.hpp"

namespace ftf {

using nlohmann::json;

namespace {

std::vector<double> coeffs(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    const json& a = j.at(key);
    if (!a.is_array()) throw SpecError(std::string("curve spec: \"") + key + "\" must be an array");
    std::vector<double> out;
    for (const json& v : a) {
        if (!v.is_number()) throw SpecError(std::string("curve spec: \"") + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

double number(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw SpecError(std::string("curve spec: \"") + key + "\" must be a number");
    return v.get<double>();
}

// "1/7", "0.25", "-2"
double parse_real(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) return parse_real(s.substr(0, slash)) / parse_real(s.substr(slash + 1));
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw SpecError("cannot parse number \"" + s + "\"");
    return v;
}

CurveSpec circle_spec(double k) {
    CurveSpec s;
    s.kind = CurveSpec::Kind::Circle;
    s.kappa = k;
    s.name = "circle";
    return s;
}

// Limacon x = B cos t + A/2 (1 + cos 2t), y = -(B sin t + A/2 sin 2t), traversed
// clockwise in the plane so that its spherical image curves to the left.
CurveSpec limacon_spec(double a, double b, double scale, const char* name) {
    CurveSpec s;
    s.kind = CurveSpec::Kind::TrigPolyPlane;
    s.poly.x_cos = {a / 2, b, a / 2};
    s.poly.y_sin = {0.0, -b, -a / 2};
    s.poly.scale = scale;
    s.name = name;
    return s;
}

// sigma_a(-t) = a (4 cos t + 3 cos 2t, 4 sin t - 3 sin 2t).
CurveSpec sigma_spec(double a) {
    CurveSpec s;
    s.kind = CurveSpec::Kind::TrigPolyPlane;
    s.poly.x_cos = {0.0, 4.0, 3.0};
    s.poly.y_sin = {0.0, 4.0, -3.0};
    s.poly.scale = a;
    s.name = "sigma_a";
    return s;
}

}  // namespace

CurveSpec parse_curve_spec(const json& j) {
    if (!j.is_object()) throw SpecError("curve spec must be a JSON object");
    if (j.contains("version") && (!j.at("version").is_number_integer() || j.at("version").get<int>() != 1)) {
        throw SpecError("curve spec: unsupported version");
    }
    if (!j.contains("kind") || !j.at("kind").is_string()) throw SpecError("curve spec: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    CurveSpec s;
    if (kind == "circle") {
        if (!j.contains("kappa")) throw SpecError("curve spec: circle needs \"kappa\"");
        s = circle_spec(number(j, "kappa"));
    } else if (kind == "trig_poly_plane") {
        s.kind = CurveSpec::Kind::TrigPolyPlane;
        s.poly.x_cos = coeffs(j, "x_cos");
        s.poly.x_sin = coeffs(j, "x_sin");
        s.poly.y_cos = coeffs(j, "y_cos");
        s.poly.y_sin = coeffs(j, "y_sin");
        if (j.contains("scale")) s.poly.scale = number(j, "scale");
        if (j.contains("rotation")) s.poly.rotation = number(j, "rotation");
        if (j.contains("translation")) {
            const auto t = coeffs(j, "translation");
            if (t.size() != 2) throw SpecError("curve spec: \"translation\" must have two entries");
            s.poly.translation = {t[0], t[1]};
        }
        s.name = j.value("name", std::string());
    } else {
        throw SpecError("curve spec: unknown kind \"" + kind + "\"");
    }
    if (j.contains("reverse")) {
        if (!j.at("reverse").is_boolean()) throw SpecError("curve spec: \"reverse\" must be a boolean");
        s.reverse = j.at("reverse").get<bool>();
    }
    return s;
}

json to_json(const CurveSpec& s) {
    json j;
    j["version"] = 1;
    if (s.kind == CurveSpec::Kind::Circle) {
        j["kind"] = "circle";
        j["kappa"] = s.kappa;
    } else {
        j["kind"] = "trig_poly_plane";
        j["x_cos"] = s.poly.x_cos;
        j["x_sin"] = s.poly.x_sin;
        j["y_cos"] = s.poly.y_cos;
        j["y_sin"] = s.poly.y_sin;
        j["scale"] = s.poly.scale;
        j["rotation"] = s.poly.rotation;
        j["translation"] = {s.poly.translation.first, s.poly.translation.second};
    }
    if (s.reverse) j["reverse"] = true;
    if (!s.name.empty()) j["name"] = s.name;
    return j;
}

CurveSpec named_curve_spec(const std::string& name_in) {
    std::string name = name_in;
    bool reverse = false;
    const std::string prefix = "reverse:";
    if (name.rfind(prefix, 0) == 0) {
        reverse = true;
        name = name.substr(prefix.size());
    }
    std::string base = name, arg;
    const auto open = name.find('(');
    if (open != std::string::npos) {
        if (name.back() != ')') throw SpecError("malformed curve name \"" + name_in + "\"");
        base = name.substr(0, open);
        arg = name.substr(open + 1, name.size() - open - 2);
    }
    CurveSpec s;
    if (base == "circle") {
        s = circle_spec(arg.empty() ? 1.0 : parse_real(arg));
    } else if (base == "sigma_a") {
        const double a = arg.empty() ? 1.0 / 7.0 : parse_real(arg);
        if (!(a > 0.0)) throw SpecError("sigma_a needs a > 0");
        s = sigma_spec(a);
    } else if (base == "figure_eight" && arg.empty()) {
        s = limacon_spec(2.0, 1.0, 0.3, "figure_eight");
    } else if (base == "lens_shell" && arg.empty()) {
        s = limacon_spec(3.0, 1.0, 0.3, "lens_shell");
    } else {
        throw SpecError("unknown curve name \"" + name_in + "\"");
    }
    s.name = name_in;
    s.reverse = reverse;
    return s;
}

CurveSpec curve_spec_from(const json& j) {
    if (j.is_string()) return named_curve_spec(j.get<std::string>());
    return parse_curve_spec(j);
}

SphericalCurve build_curve(const CurveSpec& spec) {
    SphericalCurve c =
        spec.kind == CurveSpec::Kind::Circle ? circle_curve(spec.kappa) : build_spherical(spec.poly);
    return spec.reverse ? reversed(c) : c;
}

std::vector<CatalogEntry> builtin_catalog() {
    std::vector<CatalogEntry> out;
    for (const char* n : {"circle(2)", "figure_eight", "sigma_a(1/7)", "lens_shell"}) {
        out.push_back({n, named_curve_spec(n)});
    }
    return out;
}

PairSpec parse_pair_spec(const json& j) {
    if (!j.is_object() || !j.contains("gamma1") || !j.contains("gamma2")) {
        throw SpecError("pair spec needs \"gamma1\" and \"gamma2\"");
    }
    PairSpec p;
    p.gamma1 = curve_spec_from(j.at("gamma1"));
    p.gamma2 = curve_spec_from(j.at("gamma2"));
    if (j.contains("mu") && !j.at("mu").is_null()) {
        if (!j.at("mu").is_number()) throw SpecError("pair spec: \"mu\" must be a number");
        p.has_mu = true;
        p.mu = j.at("mu").get<double>();
    }
    return p;
}

json to_json(const PairSpec& p) {
    json j;
    j["gamma1"] = to_json(p.gamma1);
    j["gamma2"] = to_json(p.gamma2);
    if (p.has_mu) j["mu"] = p.mu;
    return j;
}

PairSpec named_pair_spec(const std::string& name) {
    PairSpec p;
    if (name == "clifford") {
        p.gamma1 = named_curve_spec("circle(1)");
        p.gamma2 = named_curve_spec("circle(-1)");
        p.has_mu = true;
        p.mu = 0.5;
    } else if (name == "figure_eight") {
        p.gamma1 = named_curve_spec("figure_eight");
        p.gamma2 = named_curve_spec("reverse:figure_eight");
    } else if (name == "sigma") {
        p.gamma1 = named_curve_spec("sigma_a(1/7)");
        p.gamma2 = named_curve_spec("reverse:sigma_a(1/7)");
    } else {
        throw SpecError("unknown pair name \"" + name + "\"");
    }
    return p;
}

namespace {

CurveSpec random_positive_curve(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        CurveSpec s;
        if (u(rng) < 0.4) {
            s = circle_spec(0.3 + 1.7 * u(rng));
        } else {
            s.kind = CurveSpec::Kind::TrigPolyPlane;
            auto h = [&] { return 0.06 * (u(rng) - 0.5); };
            s.poly.x_cos = {0.0, 1.0, h(), h()};
            s.poly.x_sin = {0.0, 0.0, h(), h()};
            s.poly.y_cos = {0.0, 0.0, h(), h()};
            s.poly.y_sin = {0.0, -1.0, h(), h()};
            s.poly.scale = 0.25 + 0.5 * u(rng);
            s.poly.rotation = 2.0 * std::numbers::pi * u(rng);
            s.poly.translation = {0.1 * (u(rng) - 0.5), 0.1 * (u(rng) - 0.5)};
            s.name = "random";
        }
        if (sample_stats(build_curve(s), 1024).kappa_min > 0.05) return s;
    }
}

}  // namespace

PairSpec random_pair_spec(std::mt19937_64& rng) {
    PairSpec p;
    p.gamma1 = random_positive_curve(rng);
    p.gamma2 = random_positive_curve(rng);
    if (p.gamma2.kind == CurveSpec::Kind::Circle) {
        p.gamma2.kappa = -p.gamma2.kappa;
    } else {
        p.gamma2.reverse = true;
    }
    return p;
}

}  // namespace ftf
