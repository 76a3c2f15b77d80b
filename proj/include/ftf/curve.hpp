#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ftf/jet.hpp"
#include "ftf/su2.hpp"

namespace ftf {

// Trig-polynomial plane curve sigma(t), pulled back to S^2 by the inverse
// stereographic projection from the north pole.
struct TrigPolyPlaneSpec {
    std::vector<double> x_cos, x_sin, y_cos, y_sin;  // index = frequency
    double scale = 1.0;
    double rotation = 0.0;  // radians, applied in the plane after scaling
    std::pair<double, double> translation{0.0, 0.0};
};

namespace detail {
class CurveImpl {
public:
    virtual ~CurveImpl() = default;
    virtual JetVec3 jet(double t, int order) const = 0;
    virtual double period() const = 0;
};
}  // namespace detail

// Closed regular curve on S^2 with exact derivatives. Cheap to copy; immutable.
class SphericalCurve {
public:
    SphericalCurve() = default;
    explicit SphericalCurve(std::shared_ptr<const detail::CurveImpl> impl) : impl_(std::move(impl)) {}

    // Taylor expansion of gamma about t up to the given order (<= Jet::kMaxOrder).
    JetVec3 jet(double t, int order) const { return impl_->jet(t, order); }
    double period() const { return impl_->period(); }

    Vec3 point(double t) const { return value(jet(t, 0)); }
    Vec3 d1(double t) const { return derivative(jet(t, 1), 1); }

    struct Derivs {
        Vec3 g, g1, g2;
    };
    Derivs derivs(double t) const {
        const JetVec3 j = jet(t, 2);
        return {value(j), derivative(j, 1), derivative(j, 2)};
    }

    Vec3 unit_tangent(double t) const { return normalized(d1(t)); }

    explicit operator bool() const { return static_cast<bool>(impl_); }

private:
    std::shared_ptr<const detail::CurveImpl> impl_;
};

// kappa = det(gamma, gamma', gamma'') / |gamma'|^3.
double geodesic_curvature(const SphericalCurve& c, double t);

// n = gamma × gamma' / |gamma'|.
Su2Vector unit_normal(const SphericalCurve& c, double t);

// Jet-level versions used by curve compositions.
Jet geodesic_curvature_jet(const JetVec3& g);  // order drops by 2
JetVec3 unit_normal_jet(const JetVec3& g);     // order drops by 1

// gamma = p^{-1}(sigma(t)). Throws SpecError for specs without a frequency >= 1
// term or with an irregular plane curve.
SphericalCurve build_spherical(const TrigPolyPlaneSpec& spec);

// Circle of constant geodesic curvature kappa0 about e3, period 2pi.
SphericalCurve circle_curve(double kappa0);

// Parallel curve (cos th) gamma + (sin th) n. Throws AnalysisError
// "parallel curve singular" if cos th - kappa sin th vanishes on a dense sample.
SphericalCurve parallel_curve(const SphericalCurve& c, double theta);

// Elementary transforms.
SphericalCurve reversed(const SphericalCurve& c);                       // t -> gamma(-t)
SphericalCurve negated(const SphericalCurve& c);                        // -gamma
SphericalCurve rotated(const SphericalCurve& c, const UnitQuaternion& g);  // Ad(g) gamma
SphericalCurve shifted(const SphericalCurve& c, double t0);             // t -> gamma(t + t0)

// Dense-sample checks shared by the curve constructors.
struct CurveSampleStats {
    double max_norm_defect = 0.0;      // max | |gamma| - 1 |
    double max_orthogonality = 0.0;    // max |<gamma, gamma'>|
    double min_speed = 0.0;            // min |gamma'|
    double kappa_min = 0.0, kappa_max = 0.0;
};
CurveSampleStats sample_stats(const SphericalCurve& c, int samples = 4096);

class ArcLengthTable;

// Admissibly parametrized curve: |gamma'(s)|^2 (1 + kappa(s)^2) = 4.
class AdmissibleCurve {
public:
    AdmissibleCurve() = default;

    // Parameter s; period l.
    const SphericalCurve& curve() const { return curve_; }
    double period_l() const { return curve_.period(); }
    double kappa_min() const { return kappa_min_; }
    double kappa_max() const { return kappa_max_; }

    // Original-parameter maps; identity for curves built by `from_admissible`.
    double s_of_t(double t) const;
    double t_of_s(double s) const;
    const SphericalCurve& base() const { return base_; }

    double kappa(double s) const { return geodesic_curvature(curve_, s); }

    // Wraps a curve whose parameter is already admissible. Throws AnalysisError if
    // the normalization fails by more than 1e-6 on a dense sample.
    static AdmissibleCurve from_admissible(const SphericalCurve& c);

private:
    friend AdmissibleCurve reparametrize_admissible(const SphericalCurve& c);

    SphericalCurve curve_;
    SphericalCurve base_;
    std::shared_ptr<const ArcLengthTable> table_;
    double kappa_min_ = 0.0, kappa_max_ = 0.0;
};

AdmissibleCurve reparametrize_admissible(const SphericalCurve& c);

// Transforms of admissible curves that keep the parameter admissible.
AdmissibleCurve negated(const AdmissibleCurve& c);
AdmissibleCurve reversed(const AdmissibleCurve& c);
AdmissibleCurve rotated(const AdmissibleCurve& c, const UnitQuaternion& g);
AdmissibleCurve parallel_curve(const AdmissibleCurve& c, double theta);

// Residual max | |gamma'|^2 (1 + kappa^2) - 4 | over a dense sample.
double admissibility_residual(const SphericalCurve& c, int samples = 2048);

}  // namespace ftf
