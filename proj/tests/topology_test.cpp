#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ftf/curve_spec.hpp"
#include "ftf/errors.hpp"
#include "ftf/lifting.hpp"
#include "ftf/topology.hpp"

using namespace ftf;

namespace {

constexpr double kPi = std::numbers::pi;

SphericalCurve named(const std::string& n) { return build_curve(named_curve_spec(n)); }

int count(const std::vector<Shell>& shells, ShellSign s) {
    return static_cast<int>(std::count_if(shells.begin(), shells.end(), [&](const Shell& x) { return x.sign == s; }));
}

Vec3 left_of(const SphericalCurve& c, double s, double eps) {
    return std::cos(eps) * c.point(s) + std::sin(eps) * unit_normal(c, s);
}

}  // namespace

TEST(Crossings, Counts) {
    EXPECT_TRUE(find_crossings(circle_curve(2.0)).empty());
    EXPECT_EQ(find_crossings(named("figure_eight")).size(), 1u);
    EXPECT_EQ(find_crossings(named("sigma_a(1/7)")).size(), 3u);
    EXPECT_EQ(find_crossings(named("lens_shell")).size(), 1u);
}

TEST(Crossings, RefinedAndTransversal) {
    const SphericalCurve c = named("sigma_a(1/7)");
    for (const Crossing& x : find_crossings(c)) {
        EXPECT_LT(x.t, x.u);
        EXPECT_LT(norm(c.point(x.t) - c.point(x.u)), 1e-10);
        EXPECT_GT(x.transversality, 1e-6);
    }
}

TEST(Crossings, FigureEightCrossingIsWhereExpected) {
    // The limacon doubles back through the origin of the plane at t = 2pi/3, 4pi/3,
    // which maps to the south pole.
    const auto xs = find_crossings(named("figure_eight"));
    ASSERT_EQ(xs.size(), 1u);
    EXPECT_NEAR(xs[0].t, 2 * kPi / 3, 1e-9);
    EXPECT_NEAR(xs[0].u, 4 * kPi / 3, 1e-9);
    EXPECT_NEAR(xs[0].point.z, -1.0, 1e-12);
}

TEST(Crossings, InvariantUnderRotation) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n;
    const SphericalCurve c = named("sigma_a(1/7)");
    const auto base = find_crossings(c);
    for (int trial = 0; trial < 3; ++trial) {
        const UnitQuaternion g = normalized(UnitQuaternion{n(rng), n(rng), n(rng), n(rng)});
        const auto rot = find_crossings(rotated(c, g));
        ASSERT_EQ(rot.size(), base.size());
        for (size_t i = 0; i < base.size(); ++i) {
            EXPECT_NEAR(rot[i].t, base[i].t, 1e-8);
            EXPECT_NEAR(rot[i].u, base[i].u, 1e-8);
        }
    }
    // Rotating the plane spec permutes nothing either.
    CurveSpec spec = named_curve_spec("figure_eight");
    spec.poly.rotation = 0.37;
    EXPECT_EQ(find_crossings(build_curve(spec)).size(), 1u);
}

TEST(Crossings, NonGenericRejected) {
    // A doubly traversed circle has tangential self-contact everywhere.
    TrigPolyPlaneSpec s;
    s.x_cos = {0.0, 1.0, 0.0};
    s.y_sin = {0.0, 1.0, 0.0};
    s.x_cos = {0.0, 0.0, 1.0};
    s.y_sin = {0.0, 0.0, 1.0};
    s.scale = 0.5;
    EXPECT_THROW(find_crossings(build_spherical(s)), AnalysisError);
}

TEST(Shells, FigureEight) {
    const SphericalCurve c = named("figure_eight");
    const auto shells = extract_shells(c, find_crossings(c));
    ASSERT_EQ(shells.size(), 2u);
    EXPECT_EQ(count(shells, ShellSign::Positive), 1);
    EXPECT_EQ(count(shells, ShellSign::Negative), 1);
    for (const Shell& sh : shells) {
        EXPECT_LT(norm(c.point(sh.a) - c.point(sh.b)), 1e-8);
        EXPECT_GT(sh.interior_angle, 0.0);
        EXPECT_LT(sh.interior_angle, kPi);
    }
}

TEST(Shells, SigmaHasThreePositive) {
    const SphericalCurve c = named("sigma_a(1/7)");
    const auto shells = extract_shells(c, find_crossings(c));
    EXPECT_EQ(count(shells, ShellSign::Positive), 3);
    EXPECT_EQ(count(shells, ShellSign::Negative), 0);
    const SphericalCurve r = reversed(c);
    const auto rs = extract_shells(r, find_crossings(r));
    EXPECT_EQ(count(rs, ShellSign::Positive), 0);
    EXPECT_EQ(count(rs, ShellSign::Negative), 3);
}

TEST(Shells, ReversalSwapsSigns) {
    const SphericalCurve c = named("lens_shell");
    const SphericalCurve r = reversed(c);
    const auto a = extract_shells(c, find_crossings(c));
    const auto b = extract_shells(r, find_crossings(r));
    EXPECT_EQ(count(a, ShellSign::Positive), count(b, ShellSign::Negative));
    EXPECT_EQ(count(a, ShellSign::Negative), count(b, ShellSign::Positive));
}

TEST(Shells, SimpleAtFourTimesDensity) {
    for (const char* name : {"figure_eight", "sigma_a(1/7)", "lens_shell"}) {
        const SphericalCurve c = named(name);
        const auto shells = extract_shells(c, find_crossings(c));
        const auto dense = find_crossings(c, 4 * 2048);
        for (const Shell& sh : shells) EXPECT_TRUE(arc_is_simple(dense, c.period(), sh.a, sh.b)) << name;
    }
}

TEST(Shells, ParityMatchesLift) {
    for (const char* name : {"circle(2)", "figure_eight", "sigma_a(1/7)", "lens_shell"}) {
        const SphericalCurve c = named(name);
        const int crossings = static_cast<int>(find_crossings(c).size());
        const int I = invariant_I(lift_curve(reparametrize_admissible(c)));
        EXPECT_EQ(I, crossings % 2 == 0 ? 1 : 0) << name;
    }
}

TEST(Region, EquatorSides) {
    std::vector<Vec3> poly;
    for (int i = 0; i < 256; ++i) poly.push_back({std::cos(2 * kPi * i / 256), std::sin(2 * kPi * i / 256), 0.0});
    const SphericalRegion north(poly, {0, 0, 1}, {0, 0, -1});
    EXPECT_EQ(north.side(), 1);
    EXPECT_EQ(north.classify(normalized(Vec3{0.3, 0.2, 0.5})), Membership::Inside);
    EXPECT_EQ(north.classify(normalized(Vec3{0.3, 0.2, -0.5})), Membership::Outside);
    EXPECT_EQ(north.classify({1, 0, 0}), Membership::Boundary);
    const SphericalRegion south(poly, {0, 0, -1}, {0, 0, 1});
    EXPECT_EQ(south.side(), -1);
    EXPECT_EQ(south.classify(normalized(Vec3{0.3, 0.2, -0.5})), Membership::Inside);
}

TEST(InteriorDomain, WedgeBoundaryAndSide) {
    for (const char* name : {"figure_eight", "sigma_a(1/7)", "lens_shell"}) {
        const SphericalCurve c = named(name);
        for (const Shell& sh : extract_shells(c, find_crossings(c))) {
            const ShellRegion region(c, sh);
            // Positive shells have their interior on the left.
            EXPECT_EQ(region.interior_side(), sh.sign == ShellSign::Positive ? 1 : -1) << name;
            const Vec3 ta = c.unit_tangent(sh.a), tb = c.unit_tangent(sh.b);
            const Vec3 bis = normalized(ta - tb);
            const Vec3 in = std::cos(1e-3) * sh.node + std::sin(1e-3) * bis;
            EXPECT_EQ(region.classify(in), Membership::Inside) << name;
            const double mid = 0.5 * (sh.a + sh.b);
            EXPECT_EQ(region.classify(c.point(mid)), Membership::Boundary);
            const double side = region.interior_side();
            EXPECT_EQ(region.classify(left_of(c, mid, side * 1e-2)), Membership::Inside);
            EXPECT_EQ(region.classify(left_of(c, mid, -side * 1e-2)), Membership::Outside);
        }
    }
}

TEST(InteriorDomain, SmallShellExcludesAntipode) {
    const SphericalCurve c = named("sigma_a(1/7)");
    for (const Shell& sh : extract_shells(c, find_crossings(c))) {
        const double mid = 0.5 * (sh.a + sh.b);
        const Vec3 convex = std::cos(1e-2) * c.point(mid) + std::sin(1e-2) * unit_normal(c, mid);
        EXPECT_EQ(interior_domain_test(c, sh, convex), Membership::Inside);
        EXPECT_EQ(interior_domain_test(c, sh, -convex), Membership::Outside);
    }
}
