#include "ftf/bitangent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ftf/errors.hpp"
#include "ftf/lifting.hpp"

namespace ftf {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct Frame {
    Vec3 T, n, g;
};

Frame frame_at(const SphericalCurve& c, double s) {
    const auto d = c.derivs(s);
    const Vec3 T = normalized(d.g1);
    return {T, cross(d.g, T), d.g};
}

// Rotation x -> F2 F1^T x taking the frame F1 onto F2.
struct FrameMap {
    Frame from, to;
    Vec3 operator()(const Vec3& x) const {
        return dot(from.T, x) * to.T + dot(from.n, x) * to.n + dot(from.g, x) * to.g;
    }
    UnitQuaternion quaternion() const {
        return rotation_to_quaternion((*this)({1, 0, 0}), (*this)({0, 1, 0}), (*this)({0, 0, 1}));
    }
};

Vec3 rotate_about(const Vec3& axis, const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a >= kTwoPi ? 0.0 : a;
}

// Maximizes <gamma(s), q> on [lo, hi] starting at s.
double refine_max(const SphericalCurve& c, const Vec3& q, double lo, double hi, double s) {
    const double start = s;
    for (int it = 0; it < 30; ++it) {
        const auto d = c.derivs(s);
        const double g = dot(d.g1, q), gp = dot(d.g2, q);
        if (!(gp < 0.0)) break;
        const double next = std::clamp(s - g / gp, lo, hi);
        const bool done = std::abs(next - s) < 1e-15;
        s = next;
        if (done) break;
    }
    return dot(c.point(s), q) >= dot(c.point(start), q) ? s : start;
}

struct ArcSamples {
    std::vector<double> s;
    std::vector<Vec3> p;
};

ArcSamples sample_arc(const SphericalCurve& c, double a, double b, int n) {
    ArcSamples A;
    A.s.resize(n + 1);
    A.p.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        A.s[i] = a + (b - a) * i / n;
        A.p[i] = c.point(A.s[i]);
    }
    return A;
}

// Signed tangent circle: {<x, center> = cos_r}, k > 0 for a small circle on
// the normal side, k < 0 for a large one.
struct RawCircle {
    Vec3 center;
    double cos_r = 0.0;
};

RawCircle signed_tangent_circle(const Frame& f, double k) {
    const double w = std::sqrt(1.0 + k * k);
    return {(k * f.g + f.n) / w, k / w};
}

struct LocalMax {
    double s, value;
};

// Local maxima of <gamma, center> - cos_r on the sampled arc, endpoints
// included, except the tangency at t itself.
std::vector<LocalMax> excess_maxima(const SphericalCurve& c, const ArcSamples& A, double t, const RawCircle& C) {
    const int n = static_cast<int>(A.s.size()) - 1;
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = dot(A.p[i], C.center);
    std::vector<LocalMax> out;
    const double h = A.s[1] - A.s[0];
    for (int i = 0; i <= n; ++i) {
        const bool left = i == 0 || v[i] >= v[i - 1];
        const bool right = i == n || v[i] > v[i + 1];
        if (!left || !right) continue;
        double s = A.s[i];
        if (i > 0 && i < n) s = refine_max(c, C.center, A.s[i - 1], A.s[i + 1], s);
        if (std::abs(s - t) < std::max(1e-5, 2.0 * h) && i > 0 && i < n) continue;
        out.push_back({s, dot(c.point(s), C.center) - C.cos_r});
    }
    return out;
}

double max_excess(const std::vector<LocalMax>& m) {
    double r = -2.0;
    for (const auto& x : m) r = std::max(r, x.value);
    return r;
}

struct CoreResult {
    double t1 = 0.0, t2 = 0.0;
    RawCircle circle;
    int contacts = 0;
    std::vector<double> contact_params;
};

// Inscribed search on the positive shell gamma|[a, b] with signed curvature k.
CoreResult inscribed_core(const SphericalCurve& c, double a, double b, double k) {
    constexpr int kArcSamples = 2048, kGrid = 512;
    const ArcSamples A = sample_arc(c, a, b, kArcSamples);
    auto circle_at = [&](double t) { return signed_tangent_circle(frame_at(c, t), k); };
    auto inscribed = [&](double t) { return max_excess(excess_maxima(c, A, t, circle_at(t))) <= 0.0; };

    double lo = a, hi = 0.0;
    bool found = false;
    for (int i = 0; i < kGrid; ++i) {
        const double t = a + (b - a) * (i + 0.5) / kGrid;
        if (inscribed(t)) {
            hi = t;
            found = true;
            break;
        }
        lo = t;
    }
    if (!found) throw AnalysisError("no inscribed mu-circle");
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        (inscribed(mid) ? hi : lo) = mid;
    }

    CoreResult r;
    r.t1 = hi;
    r.circle = circle_at(hi);
    std::vector<double> cs;
    for (const auto& m : excess_maxima(c, A, hi, r.circle)) {
        if (m.value > -1e-7) cs.push_back(m.s);
    }
    std::sort(cs.begin(), cs.end());
    std::vector<double> comps;
    for (double s : cs) {
        if (comps.empty() || s - comps.back() > 1e-4) comps.push_back(s);
    }
    r.contacts = 1 + static_cast<int>(comps.size());
    r.contact_params = comps;
    r.contact_params.insert(r.contact_params.begin(), hi);
    std::sort(r.contact_params.begin(), r.contact_params.end());
    if (comps.empty() || comps.back() <= hi) {
        std::ostringstream os;
        os << "inscribed circle at t1 = " << hi << " has no later contact";
        throw AnalysisError(os.str());
    }
    r.t2 = comps.back();
    const Frame f2 = frame_at(c, r.t2);
    if (std::abs(dot(f2.g, r.circle.center) - r.circle.cos_r) > 1e-7 || std::abs(dot(f2.T, r.circle.center)) > 1e-6) {
        throw AnalysisError("second tangency not verified");
    }
    return r;
}

// Orientation relative to the curve the circle was built on.
MuCircle to_mu_circle(const RawCircle& rc, double mu) {
    MuCircle C;
    C.mu = mu;
    C.radius_r = std::atan2(1.0, mu);
    C.center = rc.cos_r >= 0.0 ? rc.center : -rc.center;
    C.orientation = rc.cos_r >= 0.0 ? 1 : -1;
    return C;
}

double shell_kappa_extreme(const SphericalCurve& c, const Shell& sh, bool want_max) {
    double r = want_max ? -1e300 : 1e300;
    for (int i = 0; i <= 512; ++i) {
        const double k = geodesic_curvature(c, sh.a + (sh.b - sh.a) * i / 512);
        r = want_max ? std::max(r, k) : std::min(r, k);
    }
    return r;
}

json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

Su2Vector MuCircle::point(double angle) const {
    Vec3 e = std::abs(center.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e = normalized(e - dot(e, center) * center);
    const Vec3 f = cross(center, e);
    const double a = orientation * angle;
    return std::cos(radius_r) * center + std::sin(radius_r) * (std::cos(a) * e + std::sin(a) * f);
}

double MuCircle::angle_between(const Su2Vector& p, const Su2Vector& q) const {
    const double cr = std::cos(radius_r);
    const Vec3 u = p - cr * center, v = q - cr * center;
    const double ccw = wrap_angle(std::atan2(dot(center, cross(u, v)), dot(u, v)));
    return orientation > 0 ? ccw : wrap_angle(kTwoPi - ccw);
}

MuCircle tangent_mu_circle(const SphericalCurve& c, double t, double mu, Side side) {
    if (!(mu > 0.0)) throw SpecError("tangent_mu_circle needs mu > 0");
    const Frame f = frame_at(c, t);
    const double sg = side == Side::Left ? 1.0 : -1.0;
    MuCircle C;
    C.mu = mu;
    C.radius_r = std::atan2(1.0, mu);
    C.center = (mu * f.g + sg * f.n) / std::sqrt(1.0 + mu * mu);
    C.orientation = side == Side::Left ? 1 : -1;
    return C;
}

BitangentCircleResult inscribed_bitangent_circle(const SphericalCurve& c, const Shell& sh, double mu) {
    if (sh.sign != ShellSign::Positive) throw AnalysisError("hypothesis violated: shell is not positive");
    if (!(mu > 0.0) || !(mu > shell_kappa_extreme(c, sh, true))) {
        throw AdmissibilityError("mu must exceed the geodesic curvature on the shell");
    }
    const CoreResult core = inscribed_core(c, sh.a, sh.b, mu);
    BitangentCircleResult r;
    r.circle = to_mu_circle(core.circle, mu);
    r.t1 = core.t1;
    r.t2 = core.t2;
    r.P = c.point(r.t1);
    r.Q = c.point(r.t2);
    r.angle_theta = r.circle.angle_between(r.P, r.Q);
    r.contacts = core.contacts;
    return r;
}

BitangentCircleResult circumscribed_bitangent_circle(const SphericalCurve& c, const Shell& sh, double mu) {
    if (sh.sign != ShellSign::Negative) throw AnalysisError("hypothesis violated: shell is not negative");
    if (!(mu > 0.0) || !(mu < shell_kappa_extreme(c, sh, false))) {
        throw AdmissibilityError("mu must be below the geodesic curvature on the shell");
    }
    // s -> shift - s turns the shell into a positive shell of the reversed curve.
    const double period = c.period();
    const double shift = period * std::ceil(sh.b / period);
    const SphericalCurve rc = reversed(c);
    const CoreResult core = inscribed_core(rc, shift - sh.b, shift - sh.a, -mu);
    if (core.contacts != 2) {
        std::ostringstream os;
        os << "contact multiplicity > 2:";
        for (double s : core.contact_params) os << ' ' << shift - s;
        throw AnalysisError(os.str());
    }
    BitangentCircleResult r;
    r.circle = to_mu_circle(core.circle, mu);
    r.circle.orientation = -r.circle.orientation;
    r.t1 = shift - core.t2;
    r.t2 = shift - core.t1;
    r.P = c.point(r.t2);
    r.Q = c.point(r.t1);
    r.angle_theta = r.circle.angle_between(r.P, r.Q);
    r.contacts = core.contacts;
    return r;
}

bool past_part_predicate(const MuCircle& C, const Su2Vector& entry, const Su2Vector& exit) {
    const double cr = std::cos(C.radius_r);
    if (std::abs(dot(entry, C.center) - cr) > 1e-7 || std::abs(dot(exit, C.center) - cr) > 1e-7) {
        throw SpecError("past_part_predicate: point not on the circle");
    }
    constexpr double eps = 1e-9;
    const double a = C.angle_between(entry, exit);
    return a >= kPi - eps || a <= eps || a >= kTwoPi - eps;
}

const char* to_string(BitangentKind k) { return k == BitangentKind::First ? "first" : "second"; }

namespace {

struct ArcEnds {
    Vec3 p0, n0, t0, p1, n1;
};

ArcEnds arc_ends(const ArcRef& a) {
    const Frame f0 = frame_at(a.curve->curve(), a.s_from), f1 = frame_at(a.curve->curve(), a.s_to);
    return {adjoint(a.rotation, f0.g), adjoint(a.rotation, f0.n), adjoint(a.rotation, f0.T),
            adjoint(a.rotation, f1.g), adjoint(a.rotation, f1.n)};
}

UnitQuaternion lifted_end(const ArcRef& a, const UnitQuaternion& start) {
    const UnitQuaternion local = fiber_point_near(a.curve->curve(), a.s_from, qmul(inverse(a.rotation), start));
    return qmul(a.rotation, lift_arc_endpoint(*a.curve, a.s_from, a.s_to, local));
}

BitangentKind classify_impl(const ArcRef& a, const ArcRef& b, double* gap) {
    if (!a.curve || !b.curve) throw SpecError("classify_kind: missing curve");
    const ArcEnds ea = arc_ends(a), eb = arc_ends(b);
    const double res = std::max({norm(ea.p0 - eb.p0), norm(ea.n0 - eb.n0), norm(ea.p1 - eb.p1), norm(ea.n1 - eb.n1)});
    if (res > 1e-6) throw AnalysisError("classify_kind: arcs do not share framed endpoints");
    const UnitQuaternion start = frame_to_quaternion(ea.p0, ea.t0).first;
    const UnitQuaternion qa = lifted_end(a, start), qb = lifted_end(b, start);
    const double same = distance(qa, qb), anti = distance(qa, -qb);
    if (gap) *gap = std::min(same, anti);
    if (same < 1.0) return BitangentKind::First;
    if (anti < 1.0) return BitangentKind::Second;
    throw AnalysisError("ambiguous lift");
}

}  // namespace

BitangentKind classify_kind(const ArcRef& a, const ArcRef& b) { return classify_impl(a, b, nullptr); }

BitangentCertificate rolling_search(const AdmissibleCurve& g1, const Shell& shell1, const AdmissibleCurve& g2,
                                    const Shell& shell2, double mu, const RollingOptions& opt) {
    if (shell1.sign != ShellSign::Negative || shell2.sign != ShellSign::Positive) {
        throw AnalysisError("hypothesis violated: need a negative shell on gamma1 and a positive shell on gamma2");
    }
    const SphericalCurve& cv1 = g1.curve();
    const SphericalCurve& cv2 = g2.curve();

    const BitangentCircleResult in2 = inscribed_bitangent_circle(cv2, shell2, mu);
    const BitangentCircleResult out1 = circumscribed_bitangent_circle(cv1, shell1, mu);
    const MuCircle& C = in2.circle;
    const double cos_r = std::cos(C.radius_r);
    const double c2p = in2.t1, d2 = in2.t2;
    const double c1 = out1.t1, d1 = out1.t2;
    const Vec3 P = in2.P, Qp = in2.Q;
    const Frame F2 = frame_at(cv2, c2p);

    // Omega: arc [Q'P] of C followed by gamma2 from c2 to d2.
    std::vector<Vec3> poly;
    const double arc = C.angle_between(Qp, P);
    const int m = std::max(16, opt.region_samples / 4);
    for (int i = 0; i < m; ++i) poly.push_back(rotate_about(C.center, Qp, arc * i / m));
    const ArcSamples G2 = sample_arc(cv2, c2p, d2, opt.region_samples);
    for (int i = 0; i < opt.region_samples; ++i) poly.push_back(G2.p[i]);
    const double umid = 0.5 * (c2p + d2);
    const Frame Fm = frame_at(cv2, umid);
    const SphericalRegion omega(poly, C.center, normalized(Fm.g - 1e-3 * Fm.n));

    // Nearest point of gamma2([c2, d2]) to x.
    auto nearest_u = [&](const Vec3& x) {
        int best = 0;
        double bd = -2.0;
        for (int i = 0; i <= opt.region_samples; ++i) {
            const double v = dot(G2.p[i], x);
            if (v > bd) {
                bd = v;
                best = i;
            }
        }
        const double h = G2.s[1] - G2.s[0];
        return refine_max(cv2, x, std::max(c2p, G2.s[best] - h), std::min(d2, G2.s[best] + h), G2.s[best]);
    };

    const ArcSamples S1 = sample_arc(cv1, shell1.a, shell1.b, opt.shell_samples);
    auto phi = [&](double t) { return FrameMap{frame_at(cv1, t), F2}; };
    auto contained = [&](double t) {
        const FrameMap R = phi(t);
        for (const Vec3& p : S1.p) {
            const Vec3 x = R(p);
            if (dot(x, C.center) >= cos_r - 1e-12) continue;
            if (omega.classify(x, 1e-9) != Membership::Outside) continue;
            const double u = nearest_u(x);
            const double du = std::min(u - c2p, d2 - u);
            if (du > 1e-9 && sphere_distance(x, cv2.point(u)) < 1e-3 && dot(x, unit_normal(cv2, u)) >= -1e-12) continue;
            return false;
        }
        return true;
    };

    const int G = opt.t_grid;
    int last = -1;
    for (int i = 0; i <= G; ++i) {
        if (contained(d1 + (shell1.b - d1) * i / G)) last = i;
    }
    if (last < 0) throw AnalysisError("containment fails at d1");
    if (last == G) throw AnalysisError("containment never fails");
    double lo = d1 + (shell1.b - d1) * last / G, hi = d1 + (shell1.b - d1) * (last + 1) / G;
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        (contained(mid) ? lo : hi) = mid;
    }
    double tau = lo;

    // Closest approach of phi_tau(gamma1([a1, tau))) to gamma2 away from P.
    const FrameMap R0 = phi(tau);
    const double guard = 0.02 * (shell1.b - shell1.a);
    double s = 0.0, best = 1e300;
    for (std::size_t j = 0; j < S1.s.size(); ++j) {
        if (S1.s[j] > tau - guard) break;
        const Vec3 x = R0(S1.p[j]);
        const double d = sphere_distance(x, cv2.point(nearest_u(x)));
        if (d < best) {
            best = d;
            s = S1.s[j];
        }
    }
    if (best > 1e-2) throw AnalysisError("contact refinement diverged: no close approach");
    double u = nearest_u(R0(cv1.point(s)));

    auto residual = [&](double t, double sv, double uv) {
        const FrameMap R = phi(t);
        const Frame a = frame_at(cv1, sv), b = frame_at(cv2, uv);
        const Vec3 d = R(a.g) - b.g;
        return std::array<double, 3>{dot(d, b.T), dot(d, b.n), dot(R(a.T), b.n)};
    };
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
        const auto r = residual(tau, s, u);
        if (std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]) < 1e-13) {
            converged = true;
            break;
        }
        constexpr double h = 1e-7;
        std::array<std::array<double, 3>, 3> J;
        const std::array<double, 3> x0 = {tau, s, u};
        for (int k = 0; k < 3; ++k) {
            auto xp = x0, xm = x0;
            xp[k] += h;
            xm[k] -= h;
            const auto rp = residual(xp[0], xp[1], xp[2]), rm = residual(xm[0], xm[1], xm[2]);
            for (int i = 0; i < 3; ++i) J[i][k] = (rp[i] - rm[i]) / (2 * h);
        }
        const Vec3 c0{J[0][0], J[1][0], J[2][0]}, cc1{J[0][1], J[1][1], J[2][1]}, cc2{J[0][2], J[1][2], J[2][2]};
        const Vec3 rv{r[0], r[1], r[2]};
        const double det = det3(c0, cc1, cc2);
        if (!(std::abs(det) > 1e-300)) break;
        tau -= det3(rv, cc1, cc2) / det;
        s -= det3(c0, rv, cc2) / det;
        u -= det3(c0, cc1, rv) / det;
    }
    if (!converged) {
        const auto r = residual(tau, s, u);
        converged = std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]) < 1e-10;
    }
    if (!converged || !(s < tau) || !(u > c2p) || !(u < d2)) throw AnalysisError("contact refinement diverged");

    const FrameMap R = phi(tau);
    BitangentCertificate cert;
    cert.P = P;
    cert.P_prime = cv2.point(u);
    cert.tau = tau;
    cert.c2 = c2p;
    cert.c1_prime = s;
    cert.c2_prime = u;
    cert.c1 = c1;
    cert.d1 = d1;
    cert.d2 = d2;
    cert.isometry_phi = R.quaternion();
    const Frame a0 = frame_at(cv1, tau), a1 = frame_at(cv1, s), b1 = frame_at(cv2, u);
    cert.position_residual = std::max(norm(R(a0.g) - F2.g), norm(R(a1.g) - b1.g));
    cert.normal_residual = std::max(norm(R(a0.n) - F2.n), norm(R(a1.n) - b1.n));
    if (cert.normal_residual > 1e-6) throw AnalysisError("contact is not an admissible bi-tangent");

    // (P, P'): gamma1 forward from tau around to c1', gamma2 from c2 to c2'.
    const ArcRef arc1{&g1, tau, s + g1.period_l(), cert.isometry_phi};
    const ArcRef arc2{&g2, c2p, u, UnitQuaternion::identity()};
    cert.kind = classify_impl(arc1, arc2, &cert.lift_gap);
    cert.diameter_is_pi = cert.kind == BitangentKind::Second;
    return cert;
}

BitangentCertificate rolling_search(const AdmissibleCurve& g1, const AdmissibleCurve& g2, double mu,
                                    const RollingOptions& opt) {
    if (!(mu < g1.kappa_min()) || !(mu > g2.kappa_max())) throw AdmissibilityError("mu outside the admissibility window");
    const auto sh1 = extract_shells(g1.curve(), find_crossings(g1.curve()));
    const auto sh2 = extract_shells(g2.curve(), find_crossings(g2.curve()));
    std::string last_error = "hypothesis violated: no negative shell on gamma1 or no positive shell on gamma2";
    for (const Shell& a : sh1) {
        if (a.sign != ShellSign::Negative) continue;
        for (const Shell& b : sh2) {
            if (b.sign != ShellSign::Positive) continue;
            try {
                return rolling_search(g1, a, g2, b, mu, opt);
            } catch (const AnalysisError& e) {
                last_error = e.what();
            }
        }
    }
    throw AnalysisError(last_error);
}

json to_json(const BitangentCertificate& c) {
    return {
        {"P", vec_json(c.P)},
        {"P_prime", vec_json(c.P_prime)},
        {"params", {{"c2", c.c2}, {"c1_prime", c.c1_prime}, {"c2_prime", c.c2_prime}, {"tau", c.tau}}},
        {"contacts", {{"c1", c.c1}, {"d1", c.d1}, {"d2", c.d2}}},
        {"isometry_phi", {c.isometry_phi.w, c.isometry_phi.x, c.isometry_phi.y, c.isometry_phi.z}},
        {"kind", to_string(c.kind)},
        {"diameter_is_pi", c.diameter_is_pi},
        {"residuals", {{"position", c.position_residual}, {"normal", c.normal_residual}, {"lift_gap", c.lift_gap}}},
    };
}

json to_json(const BitangentCircleResult& r) {
    return {
        {"circle",
         {{"center", vec_json(r.circle.center)},
          {"mu", r.circle.mu},
          {"radius_r", r.circle.radius_r},
          {"orientation", r.circle.orientation}}},
        {"t1", r.t1},
        {"t2", r.t2},
        {"P", vec_json(r.P)},
        {"Q", vec_json(r.Q)},
        {"angle_theta", r.angle_theta},
        {"contacts", r.contacts},
    };
}

}  // namespace ftf
