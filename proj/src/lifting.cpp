#include "ftf/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ftf/errors.hpp"

namespace ftf {

namespace {

constexpr int kSnapEvery = 64;
constexpr double kDefectLimit = 1e-6;

// Generator (|gamma'|/2)(e2 + kappa e3) at s.
Su2Vector generator(const SphericalCurve& c, double s) {
    const auto d = c.derivs(s);
    const double sp = norm(d.g1);
    const double k = det3(d.g, d.g1, d.g2) / (sp * sp * sp);
    return {0.0, 0.5 * sp, 0.5 * sp * k};
}

// Fourth-order Magnus step for c' = c A(s) on [s, s + h].
UnitQuaternion magnus_step(const SphericalCurve& c, const UnitQuaternion& q, double s, double h) {
    static const double r = std::sqrt(3.0) / 6.0;
    const Su2Vector a1 = generator(c, s + (0.5 - r) * h);
    const Su2Vector a2 = generator(c, s + (0.5 + r) * h);
    // As pure quaternions [A1, A2] = 2 A1 × A2.
    const Su2Vector omega = (0.5 * h) * (a1 + a2) + (std::sqrt(3.0) / 12.0 * h * h * 2.0) * cross(a1, a2);
    return qmul(q, exp_su2(omega));
}

struct Integration {
    UnitQuaternion end;
    double max_defect = 0.0;
    std::vector<LiftSample> samples;
};

Integration integrate(const SphericalCurve& c, double s_from, double s_to, const UnitQuaternion& start, int steps,
                      bool keep_samples) {
    Integration out;
    const double h = (s_to - s_from) / steps;
    UnitQuaternion q = start;
    if (keep_samples) {
        out.samples.reserve(steps + 1);
        out.samples.push_back({s_from, q});
    }
    for (int k = 0; k < steps; ++k) {
        const double s = s_from + k * h;
        q = magnus_step(c, q, s, h);
        const double s1 = (k + 1 == steps) ? s_to : s + h;
        if ((k + 1) % kSnapEvery == 0 || k + 1 == steps) {
            out.max_defect = std::max(out.max_defect, fiber_defect(c, s1, q));
            q = fiber_point_near(c, s1, q);
        }
        if (keep_samples) out.samples.push_back({s1, q});
    }
    out.end = q;
    return out;
}

}  // namespace

FramedPoint framed_point(const SphericalCurve& c, double s) {
    const JetVec3 j = c.jet(s, 1);
    return {value(j), normalized(derivative(j, 1))};
}

UnitQuaternion fiber_point_near(const SphericalCurve& c, double s, const UnitQuaternion& near) {
    const FramedPoint f = framed_point(c, s);
    const UnitQuaternion q = frame_to_quaternion(f.x, f.y).first;
    return dot4(q, near) >= 0.0 ? q : -q;
}

double fiber_defect(const SphericalCurve& c, double s, const UnitQuaternion& q) {
    const FramedPoint f = framed_point(c, s);
    const FramedPoint p = project_p2(q);
    return std::max(norm(p.x - f.x), norm(p.y - f.y));
}

UnitQuaternion LiftedCurve::at(double s) const {
    const double l = period_l();
    const double m = std::floor(s / l);
    const double r = s - m * l;
    const int n = static_cast<int>(samples_.size()) - 1;
    const int k = std::clamp(static_cast<int>(std::lround(r / l * n)), 0, n);
    UnitQuaternion q = fiber_point_near(curve_.curve(), r, samples_[k].c);
    const long mm = static_cast<long>(m);
    if (monodromy_sign_ < 0 && (mm % 2 != 0)) q = -q;
    return q;
}

LiftedCurve LiftedCurve::negated() const {
    LiftedCurve out = *this;
    for (auto& smp : out.samples_) smp.c = -smp.c;
    return out;
}

LiftedCurve lift_curve(const AdmissibleCurve& c, int steps_per_period, const UnitQuaternion* start) {
    if (steps_per_period < 256) throw AnalysisError("lift_curve: steps_per_period must be >= 256");
    const double l = c.period_l();
    UnitQuaternion q0;
    if (start) {
        if (fiber_defect(c.curve(), 0.0, *start) > kDefectLimit) {
            throw AnalysisError("lift_curve: start point is not over the framed curve at s = 0");
        }
        q0 = fiber_point_near(c.curve(), 0.0, *start);
    } else {
        const FramedPoint f = framed_point(c.curve(), 0.0);
        q0 = frame_to_quaternion(f.x, f.y).first;
    }
    int steps = steps_per_period;
    Integration run = integrate(c.curve(), 0.0, l, q0, steps, true);
    if (run.max_defect > kDefectLimit) {
        steps *= 2;
        run = integrate(c.curve(), 0.0, l, q0, steps, true);
    }
    if (run.max_defect > kDefectLimit) {
        std::ostringstream os;
        os << "lift diverged: fiber defect " << run.max_defect << " at " << steps << " steps per period";
        throw AnalysisError(os.str());
    }
    LiftedCurve out;
    out.curve_ = c;
    out.steps_ = steps;
    out.max_fiber_defect_ = run.max_defect;
    out.monodromy_sign_ = dot4(run.end, q0) >= 0.0 ? 1 : -1;
    out.samples_ = std::move(run.samples);
    return out;
}

int invariant_I(const LiftedCurve& lift) { return lift.monodromy_sign() > 0 ? 0 : 1; }

UnitQuaternion lift_arc_endpoint(const AdmissibleCurve& c, double s_from, double s_to, const UnitQuaternion& start,
                                 int steps_per_period) {
    if (fiber_defect(c.curve(), s_from, start) > kDefectLimit) {
        throw AnalysisError("lift_arc_endpoint: start is not over the framed curve");
    }
    if (s_from == s_to) return start;
    const double span = std::abs(s_to - s_from) / c.period_l();
    int steps = std::max(kSnapEvery, static_cast<int>(std::ceil(span * steps_per_period)));
    const UnitQuaternion q0 = fiber_point_near(c.curve(), s_from, start);
    Integration run = integrate(c.curve(), s_from, s_to, q0, steps, false);
    if (run.max_defect > kDefectLimit) {
        steps *= 2;
        run = integrate(c.curve(), s_from, s_to, q0, steps, false);
    }
    if (run.max_defect > kDefectLimit) throw AnalysisError("lift diverged on arc");
    return run.end;
}

}  // namespace ftf
