#pragma once

#include <json.hpp>

#include "ftf/curve.hpp"
#include "ftf/su2.hpp"
#include "ftf/topology.hpp"

namespace ftf {

// Circle {x : <x, center> = cos radius_r} with cot radius_r = mu. Orientation +1
// means it is traversed counterclockwise about its center (center on the left),
// so its geodesic curvature is mu; -1 is the opposite direction.
struct MuCircle {
    Su2Vector center;
    double mu = 1.0;
    double radius_r = 0.0;
    int orientation = 1;

    Su2Vector point(double angle) const;                 // angle measured from an arbitrary fixed point
    double angle_between(const Su2Vector& p, const Su2Vector& q) const;  // from p to q along C, in [0, 2pi)
};

enum class Side { Left, Right };

// mu-circle tangent to gamma at gamma(t), on the normal side for Left. Its
// orientation matches gamma at the tangency.
MuCircle tangent_mu_circle(const SphericalCurve& c, double t, double mu, Side side);

struct BitangentCircleResult {
    MuCircle circle;
    double t1 = 0.0, t2 = 0.0;
    Su2Vector P, Q;
    double angle_theta = 0.0;
    int contacts = 0;  // number of contact components found on the shell
};

// Positive shell and mu > max kappa on it. C_t is the left tangent mu-circle at
// gamma(t); t1 = inf{t : C_t lies in the closed interior domain}, t2 the last
// contact of C_{t1}. P = gamma(t1), Q = gamma(t2); angle_theta runs from P to Q
// along C in the shell's orientation.
BitangentCircleResult inscribed_bitangent_circle(const SphericalCurve& c, const Shell& sh, double mu);

// Negative shell and mu < min kappa on it. The mu-circle containing the shell
// arc in its small disc and touching it twice. t1 = c1 < t2 = d1 are the two
// contacts with P = gamma(d1), Q = gamma(c1); the circle is oriented like gamma
// at the contacts and angle_theta runs from P to Q along it.
BitangentCircleResult circumscribed_bitangent_circle(const SphericalCurve& c, const Shell& sh, double mu);

// True iff `exit` lies in the closed past part of C with respect to `entry`.
bool past_part_predicate(const MuCircle& C, const Su2Vector& entry, const Su2Vector& exit);

enum class BitangentKind { First, Second };

const char* to_string(BitangentKind k);

// Sub-arc [s_from, s_to] of an admissible curve moved by Ad(rotation).
struct ArcRef {
    const AdmissibleCurve* curve = nullptr;
    double s_from = 0.0, s_to = 0.0;
    UnitQuaternion rotation;
};

// Both arcs must start at P and end at Q with matching unit normals (1e-6).
// Lifts them from the same fiber point over P and compares the endpoints.
BitangentKind classify_kind(const ArcRef& a, const ArcRef& b);

struct BitangentCertificate {
    Su2Vector P, P_prime;
    double c2 = 0.0, c1_prime = 0.0, c2_prime = 0.0, tau = 0.0;
    double c1 = 0.0, d1 = 0.0, d2 = 0.0;
    UnitQuaternion isometry_phi;  // acts on gamma1 by adjoint
    BitangentKind kind = BitangentKind::First;
    bool diameter_is_pi = false;
    double position_residual = 0.0;  // max over P, P'
    double normal_residual = 0.0;
    double lift_gap = 0.0;  // distance between the two lifted endpoints over P'
};

struct RollingOptions {
    int shell_samples = 512;
    int t_grid = 256;
    int region_samples = 1024;
};

// Rolls gamma1's negative shell inside the region cut off by the inscribed
// circle of gamma2's positive shell and returns the bi-tangent (P, P').
BitangentCertificate rolling_search(const AdmissibleCurve& g1, const Shell& shell1, const AdmissibleCurve& g2,
                                    const Shell& shell2, double mu, const RollingOptions& opt = {});

// First negative shell of gamma1 and first positive shell of gamma2.
// AnalysisError "hypothesis violated" if either is missing.
BitangentCertificate rolling_search(const AdmissibleCurve& g1, const AdmissibleCurve& g2, double mu,
                                    const RollingOptions& opt = {});

nlohmann::json to_json(const BitangentCertificate& c);
nlohmann::json to_json(const BitangentCircleResult& r);

}  // namespace ftf
