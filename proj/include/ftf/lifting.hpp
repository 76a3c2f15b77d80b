#pragma once

#include <vector>

#include "ftf/curve.hpp"
#include "ftf/su2.hpp"

namespace ftf {

struct LiftSample {
    double s;
    UnitQuaternion c;
};

// Lift c_gamma of an admissible curve to S^3, solving
//   c^{-1} c' = (|gamma'|/2) (e2 + kappa e3)
// so that project_p2(c(s)) = (gamma(s), gamma'(s)/|gamma'(s)|).
class LiftedCurve {
public:
    const AdmissibleCurve& curve() const { return curve_; }
    const std::vector<LiftSample>& samples() const { return samples_; }  // one period, both ends included
    double period_l() const { return curve_.period_l(); }
    int monodromy_sign() const { return monodromy_sign_; }
    double max_fiber_defect() const { return max_fiber_defect_; }
    int steps_per_period() const { return steps_; }

    // c(s) for any real s. The fiber point over gamma-hat(s) is computed exactly;
    // the integrated samples only select its sign, and c(s + l) = sign * c(s).
    UnitQuaternion at(double s) const;

    // The same lift with initial condition -c(0).
    LiftedCurve negated() const;

private:
    friend LiftedCurve lift_curve(const AdmissibleCurve&, int, const UnitQuaternion*);

    AdmissibleCurve curve_;
    std::vector<LiftSample> samples_;
    int monodromy_sign_ = 1;
    double max_fiber_defect_ = 0.0;
    int steps_ = 0;
};

// Integrates one period from s = 0. The initial value is the canonical fiber
// point frame_to_quaternion(gamma(0), T(0)).first unless `start` is given.
// steps_per_period >= 256; doubled once if the fiber defect exceeds 1e-6, then
// AnalysisError "lift diverged".
LiftedCurve lift_curve(const AdmissibleCurve& c, int steps_per_period = 4096, const UnitQuaternion* start = nullptr);

// 0 if the lift closes up, 1 if it returns to its antipode.
int invariant_I(const LiftedCurve& lift);

// Endpoint of the lift of gamma-hat on [s_from, s_to] starting at `start`.
// `start` must lie over gamma-hat(s_from) within 1e-6.
UnitQuaternion lift_arc_endpoint(const AdmissibleCurve& c, double s_from, double s_to, const UnitQuaternion& start,
                                 int steps_per_period = 4096);

// Framed point (gamma(s), unit tangent) of a curve.
FramedPoint framed_point(const SphericalCurve& c, double s);

// Fiber point over the framed curve at s nearest to `near`.
UnitQuaternion fiber_point_near(const SphericalCurve& c, double s, const UnitQuaternion& near);

// max(|Ad(q)e3 - gamma(s)|, |Ad(q)e1 - T(s)|).
double fiber_defect(const SphericalCurve& c, double s, const UnitQuaternion& q);

}  // namespace ftf
