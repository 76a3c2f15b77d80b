#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ftf/curve_spec.hpp"
#include "ftf/errors.hpp"
#include "ftf/torus.hpp"

using namespace ftf;

namespace {

constexpr double kPi = std::numbers::pi;

AdmissibleCurve adm(const std::string& name) { return reparametrize_admissible(build_curve(named_curve_spec(name))); }

const FlatTorusImmersion& clifford() {
    static const FlatTorusImmersion T = build_torus(build_pair(named_pair_spec("clifford")));
    return T;
}

const FlatTorusImmersion& sigma_torus() {
    static const FlatTorusImmersion T = build_torus(build_pair(named_pair_spec("sigma")));
    return T;
}

const AdmissiblePair& random_pair(int k) {
    static std::vector<AdmissiblePair> pairs = [] {
        std::mt19937_64 rng(31);
        std::vector<AdmissiblePair> v;
        for (int i = 0; i < 3; ++i) v.push_back(build_pair(random_pair_spec(rng)));
        return v;
    }();
    return pairs.at(k);
}

double qdist(const UnitQuaternion& a, const UnitQuaternion& b) { return distance(a, b); }

}  // namespace

TEST(Window, Circles) {
    const MuWindow w = check_mu_admissible(adm("circle(1)"), adm("circle(-1)"));
    EXPECT_NEAR(w.low, -1.0, 1e-12);
    EXPECT_NEAR(w.high, 1.0, 1e-12);
    EXPECT_THROW(check_mu_admissible(adm("circle(1)"), adm("circle(1)")), AdmissibilityError);
}

TEST(Window, SigmaPairAdmitsSmallMu) {
    const AdmissibleCurve s = adm("sigma_a(1/7)");
    const MuWindow w = check_mu_admissible(s, adm("reverse:sigma_a(1/7)"));
    EXPECT_LT(w.low, 0.0);
    EXPECT_GT(w.high, 0.0);
    EXPECT_GT(default_mu(w), 0.0);
    const double bad = w.high + 0.1;
    EXPECT_THROW(make_pair(s, adm("reverse:sigma_a(1/7)"), &bad), AdmissibilityError);
}

TEST(Immersion, BasePointAndPeriodicity) {
    const FlatTorusImmersion& T = clifford();
    EXPECT_LT(qdist(T(0, 0), UnitQuaternion::identity()), 1e-9);
    const double l1 = T.pair().gamma1.period_l(), l2 = T.pair().gamma2.period_l();
    for (auto [s1, s2] : {std::pair{0.3, 1.1}, std::pair{2.0, 0.4}}) {
        EXPECT_LT(qdist(T(s1 + 2 * l1, s2), T(s1, s2)), 1e-6);
        EXPECT_LT(qdist(T(s1, s2 + 2 * l2), T(s1, s2)), 1e-6);
        // I(gamma1) = 1 for a circle.
        EXPECT_LT(qdist(T(s1 + l1, s2), -T(s1, s2)), 1e-6);
    }
}

TEST(Immersion, IndependentOfLiftSigns) {
    const FlatTorusImmersion& T = sigma_torus();
    const FlatTorusImmersion U(T.pair(), T.lift1().negated(), T.lift2());
    const FlatTorusImmersion V(T.pair(), T.lift1(), T.lift2().negated());
    for (auto [s1, s2] : {std::pair{0.3, 1.1}, std::pair{2.0, 0.4}, std::pair{5.0, 3.3}}) {
        EXPECT_LT(qdist(U(s1, s2), T(s1, s2)), 1e-9);
        EXPECT_LT(qdist(V(s1, s2), T(s1, s2)), 1e-9);
    }
}

TEST(Forms, AnalyticValues) {
    const AnalyticForms a = analytic_forms(1.0, -1.0);
    EXPECT_NEAR(a.H, 0.0, 1e-15);
    EXPECT_NEAR(a.omega, kPi / 2, 1e-15);
    EXPECT_NEAR(a.F, 0.0, 1e-15);
    EXPECT_NEAR(analytic_forms(2.0, 0.0).H, 0.5, 1e-15);
    EXPECT_NEAR(analytic_forms(4.0, -0.25).H, 0.0, 1e-15);
}

TEST(Forms, CliffordIsFlatAndMinimal) {
    const FlatTorusImmersion& T = clifford();
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            const NumericForms n = numeric_forms(T, 0.37 * i, 0.53 * j);
            EXPECT_NEAR(n.K, 0.0, 1e-3);
            EXPECT_NEAR(n.H, 0.0, 1e-3);
            EXPECT_NEAR(n.E, 1.0, 1e-3);
            EXPECT_NEAR(n.G, 1.0, 1e-3);
            EXPECT_NEAR(n.F, 0.0, 1e-3);
            EXPECT_NEAR(n.h12, -1.0, 1e-3);
        }
    }
}

TEST(Forms, RandomPairsMatchAnalytic) {
    for (int k = 0; k < 3; ++k) {
        const AdmissiblePair& P = random_pair(k);
        const FlatTorusImmersion T = build_torus(P);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                const double s1 = T.period1() * i / 8, s2 = T.period2() * j / 8;
                const NumericForms n = numeric_forms(T, s1, s2);
                const AnalyticForms a = analytic_forms(P, s1, s2);
                EXPECT_NEAR(n.K, 0.0, 1e-3);
                EXPECT_NEAR(n.E, 1.0, 1e-3);
                EXPECT_NEAR(n.G, 1.0, 1e-3);
                EXPECT_NEAR(n.F, a.F, 1e-3);
                EXPECT_NEAR(n.h11, 0.0, 1e-3);
                EXPECT_NEAR(n.h22, 0.0, 1e-3);
                // normal chosen so that H agrees; h12 then carries the opposite sign
                EXPECT_NEAR(n.h12, -a.h12, 1e-3);
                EXPECT_NEAR(n.H, a.H, 2e-3);
            }
        }
    }
}

TEST(Forms, SigmaPairMeanCurvature) {
    const FlatTorusImmersion& T = sigma_torus();
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            const double s1 = T.period1() * i / 16, s2 = T.period2() * j / 16;
            const double diff = numeric_forms(T, s1, s2).H - analytic_forms(T.pair(), s1, s2).H;
            worst = std::max(worst, std::abs(diff));
        }
    }
    EXPECT_LT(worst, 2e-3);
}

TEST(Forms, StepRangeAndDegeneracy) {
    EXPECT_THROW(numeric_forms(clifford(), 0.0, 0.0, 1e-7), AnalysisError);
    EXPECT_THROW(numeric_forms(clifford(), 0.0, 0.0, 0.1), AnalysisError);
}

TEST(Diameter, CliffordIsPi) {
    const DiameterResult d = extrinsic_diameter(clifford(), 24, 10);
    EXPECT_NEAR(d.diameter, kPi, 1e-6);
    EXPECT_LE(d.diameter, kPi + 1e-12);
}

TEST(Diameter, ThreadCountDoesNotChangeResult) {
    const FlatTorusImmersion T = build_torus(random_pair(0));
    const DiameterResult a = extrinsic_diameter(T, 24, 10, 1);
    const DiameterResult b = extrinsic_diameter(T, 24, 10, 5);
    EXPECT_EQ(a.diameter, b.diameter);
    EXPECT_EQ(a.p.s1, b.p.s1);
    EXPECT_EQ(a.p.s2, b.p.s2);
    EXPECT_EQ(a.q.s1, b.q.s1);
    EXPECT_EQ(a.q.s2, b.q.s2);
}

TEST(Diameter, RefinementIsMonotone) {
    const FlatTorusImmersion T = build_torus(random_pair(1));
    const DiameterResult coarse = extrinsic_diameter(T, 24, 0);
    const DiameterResult fine = extrinsic_diameter(T, 48, 0);
    const DiameterResult refined = extrinsic_diameter(T, 48, 20);
    EXPECT_GE(fine.diameter, coarse.diameter);
    EXPECT_GE(refined.diameter, fine.diameter);
    EXPECT_LE(refined.diameter, kPi + 1e-12);
}

TEST(Conjugation, SwapNegateIsInvolution) {
    const AdmissiblePair& P = random_pair(0);
    const AdmissiblePair Q = swap_negate_pair(swap_negate_pair(P));
    for (double s : {0.0, 0.7, 2.1}) {
        EXPECT_LT(norm(Q.gamma1.curve().point(s) - P.gamma1.curve().point(s)), 1e-10);
        EXPECT_LT(norm(Q.gamma2.curve().point(s) - P.gamma2.curve().point(s)), 1e-10);
    }
    const AdmissiblePair S = swap_negate_pair(P);
    for (double s : {0.1, 1.3}) {
        EXPECT_NEAR(S.gamma1.kappa(s), -P.gamma2.kappa(s), 1e-9);
        EXPECT_NEAR(S.gamma2.kappa(s), -P.gamma1.kappa(s), 1e-9);
    }
}

TEST(Conjugation, SwapNegateCongruence) {
    const AdmissiblePair& P = random_pair(2);
    const FlatTorusImmersion T = build_torus(P);
    const FlatTorusImmersion U = build_torus(swap_negate_pair(P));
    // U(s1, s2) = g^{-1} T(s2, s1)^{-1} g
    const UnitQuaternion gi = solve_conjugator(inverse(T(0.9, 0.4)), U(0.4, 0.9), inverse(T(2.3, 1.7)), U(1.7, 2.3));
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
            const double s1 = U.period1() * i / 12, s2 = U.period2() * j / 12;
            const UnitQuaternion expect = qmul(qmul(gi, inverse(T(s2, s1))), inverse(gi));
            worst = std::max(worst, qdist(U(s1, s2), expect));
        }
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(Conjugation, ParallelDeformation) {
    const AdmissiblePair& P = random_pair(1);
    const AdmissiblePair same = parallel_deform_pair(P, 0.0);
    EXPECT_EQ(same.mu, P.mu);
    for (double th : {0.05, -0.08}) {
        const AdmissiblePair Q = parallel_deform_pair(P, th);
        EXPECT_GT(Q.gamma1.kappa_min() - Q.gamma2.kappa_max(), 0.0);
        const FlatTorusImmersion T = build_torus(P), U = build_torus(Q);
        const UnitQuaternion g = exp_su2({th / 2, 0, 0});
        double worst = 0.0;
        for (int i = 0; i < 12; ++i) {
            for (int j = 0; j < 12; ++j) {
                const double s1 = T.period1() * i / 12, s2 = T.period2() * j / 12;
                worst = std::max(worst, qdist(U(s1, s2), qmul(qmul(g, T(s1, s2)), inverse(g))));
            }
        }
        EXPECT_LT(worst, 1e-5) << th;
    }
    EXPECT_THROW(parallel_deform_pair(P, 1.5), AdmissibilityError);
}

TEST(Conjugation, ReverseDeformation) {
    const AdmissiblePair& P = random_pair(0);
    const double mid = 0.5 * (std::max(P.gamma2.kappa_max(), 0.0) + P.gamma1.kappa_min());
    const double th = std::atan2(1.0, mid);  // cot th = mid
    const AdmissiblePair Q = reverse_deform_pair(P, th);
    const double cot = 1.0 / std::tan(th);
    EXPECT_NEAR(Q.mu, cot, 1e-12);
    for (double s : {0.2, 1.4}) {
        const double expected = cot + 1.0 / ((P.gamma1.kappa(s) - cot) * std::sin(th) * std::sin(th));
        EXPECT_NEAR(Q.gamma1.kappa(s), expected, 1e-6 * std::max(1.0, std::abs(expected)));
    }
    const FlatTorusImmersion T = build_torus(P), U = build_torus(Q);
    const UnitQuaternion a = solve_conjugator(T(0.9, -0.4), U(0.9, 0.4), T(2.3, -1.7), U(2.3, 1.7));
    double worst = 0.0, worst_h = 0.0;
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
            const double s1 = U.period1() * i / 12, s2 = U.period2() * j / 12;
            worst = std::max(worst, qdist(U(s1, s2), qmul(qmul(a, T(s1, -s2)), inverse(a))));
            const double h_new = analytic_forms(Q, s1, s2).H;
            const double h_old = analytic_forms(P, s1, -s2).H;
            worst_h = std::max(worst_h, std::abs(h_new + h_old));
        }
    }
    EXPECT_LT(worst, 1e-5);
    EXPECT_LT(worst_h, 2e-3);
    EXPECT_THROW(reverse_deform_pair(P, 0.0), AdmissibilityError);
}

TEST(Mesh, RowCountAndUnitNorm) {
    std::ostringstream os;
    write_mesh_csv(clifford(), 10, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s1,s2,w,x,y,z");
    int rows = 0;
    while (std::getline(in, line)) {
        double v[6];
        char c;
        std::istringstream ls(line);
        ls >> v[0] >> c >> v[1] >> c >> v[2] >> c >> v[3] >> c >> v[4] >> c >> v[5];
        EXPECT_NEAR(v[2] * v[2] + v[3] * v[3] + v[4] * v[4] + v[5] * v[5], 1.0, 1e-9);
        ++rows;
    }
    EXPECT_EQ(rows, 100);
}
