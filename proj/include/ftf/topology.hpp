#pragma once

#include <vector>

#include "ftf/curve.hpp"

namespace ftf {

// Transversal double point gamma(t) = gamma(u), 0 <= t < u < period.
struct Crossing {
    double t = 0.0, u = 0.0;
    Vec3 point;
    double transversality = 0.0;  // |det(gamma, T(t), T(u))| with unit tangents
};

// All crossings, sorted by t. Throws AnalysisError "non-generic curve" on a
// tangential self-contact or a point of multiplicity > 2.
std::vector<Crossing> find_crossings(const SphericalCurve& c, int samples = 2048);

enum class ShellSign { Positive, Negative };

// Simple sub-arc gamma|[a, b] closing up at its node gamma(a) = gamma(b).
// b may exceed the period when the arc wraps around.
struct Shell {
    double a = 0.0, b = 0.0;
    Vec3 node;
    ShellSign sign = ShellSign::Positive;
    double interior_angle = 0.0;  // angle between gamma'(a) and -gamma'(b)
};

// For each crossing both arcs [t, u] and [u, t + period] are tested; the simple
// ones become shells, ordered by crossing then arc.
std::vector<Shell> extract_shells(const SphericalCurve& c, const std::vector<Crossing>& crossings);

// True if no crossing other than the node has both parameters inside (a, b).
bool arc_is_simple(const std::vector<Crossing>& crossings, double period, double a, double b);

enum class Membership { Inside, Outside, Boundary };

// Closed polyline on S^2 bounding a region R. Membership is computed by
// stereographic projection from a pole far from the polyline followed by a
// planar winding number w. Then 1_R(q) = side * w(q) + 1_R(pole), and both
// unknowns are fixed once from one probe point inside R and one outside.
class SphericalRegion {
public:
    SphericalRegion() = default;
    SphericalRegion(std::vector<Vec3> polyline, const Vec3& inside_probe, const Vec3& outside_probe);

    // Winding-based membership. Points closer than `boundary_tol` to the
    // polyline are reported as Boundary.
    Membership classify(const Vec3& q, double boundary_tol = 1e-8) const;

    // Distance from q to the polyline (great-circle chords).
    double boundary_distance(const Vec3& q) const;

    const std::vector<Vec3>& polyline() const { return poly_; }
    const Vec3& pole() const { return pole_; }
    // +1 if R lies to the left of the polyline, -1 if to the right.
    int side() const { return side_; }

private:
    int winding(const Vec3& q) const;

    std::vector<Vec3> poly_;
    std::vector<std::pair<double, double>> plane_;  // projected polyline
    Vec3 pole_, axis1_, axis2_;
    int side_ = 1;
    int pole_inside_ = 0;
};

// Interior domain of a shell: the side of the closed arc whose wedge angle at
// the node is below pi.
class ShellRegion {
public:
    ShellRegion(const SphericalCurve& c, const Shell& sh, int samples = 2048);

    Membership classify(const Vec3& q) const;

    // +1 if the interior lies to the left of the arc.
    int interior_side() const { return region_.side(); }

    const SphericalRegion& region() const { return region_; }

private:
    SphericalCurve curve_;
    Shell shell_;
    SphericalRegion region_;
};

Membership interior_domain_test(const SphericalCurve& c, const Shell& sh, const Vec3& q);

// Distance from q to the arc gamma|[a, b], refined by Newton from a dense sample.
// Returns the distance and writes the nearest parameter.
double distance_to_arc(const SphericalCurve& c, double a, double b, const Vec3& q, double* at = nullptr,
                       int samples = 1024);

}  // namespace ftf
