#include "ftf/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ftf/errors.hpp"

namespace ftf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x, double d) {
    double r = std::fmod(x, d);
    if (r < 0.0) r += d;
    if (r >= d) r -= d;
    return r;
}

// Gauss-Newton on gamma(t) = gamma(u). Returns false if it does not settle.
bool refine_crossing(const SphericalCurve& c, double& t, double& u) {
    for (int it = 0; it < 40; ++it) {
        const JetVec3 jt = c.jet(t, 1), ju = c.jet(u, 1);
        const Vec3 f = value(jt) - value(ju);
        const Vec3 a = derivative(jt, 1), b = -derivative(ju, 1);
        const double aa = dot(a, a), ab = dot(a, b), bb = dot(b, b);
        const double fa = dot(f, a), fb = dot(f, b);
        const double det = aa * bb - ab * ab;
        if (!(std::abs(det) > 1e-300)) return false;
        const double dt = -(bb * fa - ab * fb) / det;
        const double du = -(aa * fb - ab * fa) / det;
        t += dt;
        u += du;
        if (std::abs(dt) + std::abs(du) < 1e-14) break;
    }
    return norm(c.point(t) - c.point(u)) < 1e-11;
}

}  // namespace

std::vector<Crossing> find_crossings(const SphericalCurve& c, int samples) {
    if (samples < 16) throw AnalysisError("find_crossings: too few samples");
    const double d = c.period();
    const double h = d / samples;
    std::vector<Vec3> p(samples);
    for (int i = 0; i < samples; ++i) p[i] = c.point(i * h);
    std::vector<Vec3> mid(samples);
    std::vector<double> rad(samples);
    double max_len = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vec3& a = p[i];
        const Vec3& b = p[(i + 1) % samples];
        mid[i] = 0.5 * (a + b);
        rad[i] = 0.5 * norm(b - a);
        max_len = std::max(max_len, 2.0 * rad[i]);
    }
    // Chord-to-curve deviation margin.
    const double pad = 0.25 * max_len;

    std::vector<Crossing> found;
    for (int i = 0; i < samples; ++i) {
        const Vec3& a = p[i];
        const Vec3& b = p[(i + 1) % samples];
        const Vec3 nab = cross(a, b);
        for (int j = i + 2; j < samples; ++j) {
            if (i == 0 && j == samples - 1) continue;
            if (norm(mid[i] - mid[j]) > rad[i] + rad[j] + pad) continue;
            const Vec3& cc = p[j];
            const Vec3& dd = p[(j + 1) % samples];
            const double sc = dot(nab, cc), sd = dot(nab, dd);
            if (sc * sd > 0.0 || sc == sd) continue;
            const Vec3 ncd = cross(cc, dd);
            const double sa = dot(ncd, a), sb = dot(ncd, b);
            if (sa * sb > 0.0 || sa == sb) continue;
            if (dot(a + b, cc + dd) <= 0.0) continue;
            double t = (i + sa / (sa - sb)) * h;
            double u = (j + sc / (sc - sd)) * h;
            if (!refine_crossing(c, t, u)) continue;
            t = wrap(t, d);
            u = wrap(u, d);
            if (t > u) std::swap(t, u);
            const double sep = std::min(u - t, d - (u - t));
            if (sep < 1e-6) continue;
            Crossing x;
            x.t = t;
            x.u = u;
            x.point = c.point(t);
            x.transversality = std::abs(det3(x.point, c.unit_tangent(t), c.unit_tangent(u)));
            found.push_back(x);
        }
    }
    std::sort(found.begin(), found.end(), [](const Crossing& x, const Crossing& y) {
        return x.t != y.t ? x.t < y.t : x.u < y.u;
    });
    auto circ = [d](double x, double y) {
        const double r = std::abs(x - y);
        return std::min(r, d - r);
    };
    std::vector<Crossing> out;
    for (const Crossing& x : found) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Crossing& y) {
            return circ(x.t, y.t) < 1e-8 && circ(x.u, y.u) < 1e-8;
        });
        if (!dup) out.push_back(x);
    }
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].transversality < 1e-6) {
            std::ostringstream os;
            os << "non-generic curve: tangential self-contact at t = " << out[i].t << ", u = " << out[i].u
               << " (try jittering the spec's rotation)";
            throw AnalysisError(os.str());
        }
        for (size_t j = i + 1; j < out.size(); ++j) {
            if (norm(out[i].point - out[j].point) < 1e-8) {
                std::ostringstream os;
                os << "non-generic curve: point of multiplicity > 2 near t = " << out[i].t;
                throw AnalysisError(os.str());
            }
        }
    }
    return out;
}

bool arc_is_simple(const std::vector<Crossing>& crossings, double period, double a, double b) {
    const double len = b - a;
    constexpr double eps = 1e-8;
    auto inside = [&](double x) {
        const double r = wrap(x - a, period);
        return r > eps && r < len - eps;
    };
    for (const Crossing& x : crossings) {
        if (inside(x.t) && inside(x.u)) return false;
    }
    return true;
}

std::vector<Shell> extract_shells(const SphericalCurve& c, const std::vector<Crossing>& crossings) {
    const double d = c.period();
    std::vector<Shell> out;
    for (const Crossing& x : crossings) {
        for (const auto& [a, b] : {std::pair{x.t, x.u}, std::pair{x.u, x.t + d}}) {
            if (!arc_is_simple(crossings, d, a, b)) continue;
            Shell sh;
            sh.a = a;
            sh.b = b;
            sh.node = c.point(a);
            const Vec3 ta = c.unit_tangent(a), tb = c.unit_tangent(b);
            sh.sign = det3(sh.node, ta, tb) < 0.0 ? ShellSign::Positive : ShellSign::Negative;
            sh.interior_angle = std::acos(std::clamp(-dot(ta, tb), -1.0, 1.0));
            out.push_back(sh);
        }
    }
    return out;
}

double distance_to_arc(const SphericalCurve& c, double a, double b, const Vec3& q, double* at, int samples) {
    int best = 0;
    double best_dot = -2.0;
    const double h = (b - a) / samples;
    for (int i = 0; i <= samples; ++i) {
        const double v = dot(c.point(a + i * h), q);
        if (v > best_dot) {
            best_dot = v;
            best = i;
        }
    }
    // Newton on <gamma'(s), q> = 0, kept inside the bracketing cells.
    double s = a + best * h;
    const double lo = std::max(a, s - h), hi = std::min(b, s + h);
    for (int it = 0; it < 30; ++it) {
        const auto dv = c.derivs(s);
        const double g = dot(dv.g1, q), gp = dot(dv.g2, q);
        if (!(gp < 0.0)) break;
        const double next = std::clamp(s - g / gp, lo, hi);
        const bool done = std::abs(next - s) < 1e-15;
        s = next;
        if (done) break;
    }
    if (dot(c.point(s), q) < best_dot) s = a + best * h;
    if (at) *at = s;
    return sphere_distance(c.point(s), q);
}

SphericalRegion::SphericalRegion(std::vector<Vec3> polyline, const Vec3& inside_probe, const Vec3& outside_probe)
    : poly_(std::move(polyline)) {
    if (poly_.size() < 3) throw AnalysisError("region boundary needs at least 3 points");
    // Pole candidates: the antipode of the mean point, then coordinate axes.
    Vec3 mean{0, 0, 0};
    for (const Vec3& v : poly_) mean += v;
    std::vector<Vec3> cand;
    if (norm(mean) > 1e-6) cand.push_back(-normalized(mean));
    for (const Vec3& v : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1},
                          Vec3{0, 0, -1}, normalized(Vec3{1, 1, 1})}) {
        cand.push_back(v);
    }
    cand.resize(std::min<size_t>(cand.size(), 8));
    double best = -1.0;
    for (const Vec3& v : cand) {
        const double dist = std::min({boundary_distance(v), sphere_distance(v, inside_probe),
                                      sphere_distance(v, outside_probe)});
        if (dist > best) {
            best = dist;
            pole_ = v;
        }
        if (dist > 0.2) break;
    }
    if (best < 1e-3) throw AnalysisError("region: no projection pole far enough from the boundary");
    // a1 × a2 = -pole keeps the projection orientation-preserving.
    const Vec3 helper = std::abs(pole_.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    axis2_ = normalized(cross(pole_, helper));
    axis1_ = cross(pole_, axis2_);
    plane_.reserve(poly_.size());
    for (const Vec3& v : poly_) {
        const double den = 1.0 - dot(v, pole_);
        plane_.emplace_back(dot(v, axis1_) / den, dot(v, axis2_) / den);
    }
    const int w_in = winding(inside_probe), w_out = winding(outside_probe);
    side_ = w_in - w_out;
    if (side_ != 1 && side_ != -1) {
        throw AnalysisError("region: probes do not separate the boundary (winding " + std::to_string(w_in) + ", " +
                            std::to_string(w_out) + ")");
    }
    pole_inside_ = -side_ * w_out;
}

int SphericalRegion::winding(const Vec3& q) const {
    const double den = 1.0 - dot(q, pole_);
    const double qx = dot(q, axis1_) / den, qy = dot(q, axis2_) / den;
    double total = 0.0;
    const size_t n = plane_.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& [ax, ay] = plane_[i];
        const auto& [bx, by] = plane_[(i + 1) % n];
        const double ux = ax - qx, uy = ay - qy, vx = bx - qx, vy = by - qy;
        total += std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

double SphericalRegion::boundary_distance(const Vec3& q) const {
    double best = 1e300;
    const size_t n = poly_.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec3& a = poly_[i];
        const Vec3& b = poly_[(i + 1) % n];
        double dist = std::min(sphere_distance(q, a), sphere_distance(q, b));
        const Vec3 nab = cross(a, b);
        const double len = norm(nab);
        if (len > 1e-300) {
            const Vec3 nn = nab / len;
            const Vec3 proj = q - dot(q, nn) * nn;
            if (dot(cross(a, proj), nn) >= 0.0 && dot(cross(proj, b), nn) >= 0.0 && dot(proj, a + b) > 0.0) {
                dist = std::min(dist, std::asin(std::min(1.0, std::abs(dot(q, nn)))));
            }
        }
        best = std::min(best, dist);
    }
    return best;
}

Membership SphericalRegion::classify(const Vec3& q, double boundary_tol) const {
    if (boundary_tol > 0.0 && boundary_distance(q) < boundary_tol) return Membership::Boundary;
    const int in = side_ * winding(q) + pole_inside_;
    return in > 0 ? Membership::Inside : Membership::Outside;
}

namespace {

std::vector<Vec3> arc_polyline(const SphericalCurve& c, double a, double b, int samples) {
    std::vector<Vec3> out(samples);
    for (int i = 0; i < samples; ++i) out[i] = c.point(a + (b - a) * i / samples);
    return out;
}

Vec3 offset(const Vec3& x, const Vec3& dir, double eps) { return std::cos(eps) * x + std::sin(eps) * dir; }

}  // namespace

ShellRegion::ShellRegion(const SphericalCurve& c, const Shell& sh, int samples) : curve_(c), shell_(sh) {
    // The interior wedge at the node lies between T(a) and -T(b).
    const Vec3 ta = c.unit_tangent(sh.a), tb = c.unit_tangent(sh.b);
    Vec3 bis = ta - tb;
    bis = normalized(bis - dot(bis, sh.node) * sh.node);
    const double eps = 1e-4;
    region_ = SphericalRegion(arc_polyline(c, sh.a, sh.b, samples), offset(sh.node, bis, eps),
                              offset(sh.node, -bis, eps));
}

Membership ShellRegion::classify(const Vec3& q) const {
    double s = 0.0;
    const double dist = distance_to_arc(curve_, shell_.a, shell_.b, q, &s);
    if (dist < 1e-8) return Membership::Boundary;
    const double len = shell_.b - shell_.a;
    if (dist < 1e-3 && s - shell_.a > 1e-3 * len && shell_.b - s > 1e-3 * len) {
        // Close to the arc: decide by the side of the nearest point.
        const double side = dot(q, unit_normal(curve_, s));
        return side * region_.side() > 0.0 ? Membership::Inside : Membership::Outside;
    }
    return region_.classify(q, 0.0);
}

Membership interior_domain_test(const SphericalCurve& c, const Shell& sh, const Vec3& q) {
    return ShellRegion(c, sh).classify(q);
}

}  // namespace ftf
