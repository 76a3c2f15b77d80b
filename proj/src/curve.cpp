#include "ftf/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ftf/errors.hpp"

namespace ftf {

Jet geodesic_curvature_jet(const JetVec3& g) {
    const JetVec3 g1 = differentiated(g);
    const JetVec3 g2 = differentiated(g1);
    const Jet speed = norm(g1);
    return det3(g, g1, g2) / (speed * speed * speed);
}

JetVec3 unit_normal_jet(const JetVec3& g) {
    const JetVec3 g1 = differentiated(g);
    return cross(g, g1) / norm(g1);
}

double geodesic_curvature(const SphericalCurve& c, double t) {
    const auto d = c.derivs(t);
    const double sp = norm(d.g1);
    return det3(d.g, d.g1, d.g2) / (sp * sp * sp);
}

Su2Vector unit_normal(const SphericalCurve& c, double t) {
    const auto d = c.derivs(t);
    return cross(d.g, d.g1) / norm(d.g1);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class TrigPolyCurve final : public detail::CurveImpl {
public:
    explicit TrigPolyCurve(TrigPolyPlaneSpec spec) : spec_(std::move(spec)) {}

    // Plane curve sigma as jets (u, v).
    std::pair<Jet, Jet> plane_jet(double t, int order) const {
        const Jet tj = Jet::variable(t, order);
        Jet u(0.0, order), v(0.0, order);
        const size_t kmax = std::max({spec_.x_cos.size(), spec_.x_sin.size(), spec_.y_cos.size(), spec_.y_sin.size()});
        auto coef = [](const std::vector<double>& a, size_t k) { return k < a.size() ? a[k] : 0.0; };
        for (size_t k = 0; k < kmax; ++k) {
            Jet s, c;
            sincos(tj * static_cast<double>(k), s, c);
            u = u + coef(spec_.x_cos, k) * c + coef(spec_.x_sin, k) * s;
            v = v + coef(spec_.y_cos, k) * c + coef(spec_.y_sin, k) * s;
        }
        const double cr = std::cos(spec_.rotation), sr = std::sin(spec_.rotation);
        const Jet ur = spec_.scale * (cr * u - sr * v) + spec_.translation.first;
        const Jet vr = spec_.scale * (sr * u + cr * v) + spec_.translation.second;
        return {ur, vr};
    }

    JetVec3 jet(double t, int order) const override {
        const auto [u, v] = plane_jet(t, order);
        const Jet r2 = u * u + v * v;
        const Jet den = r2 + 1.0;
        return {2.0 * u / den, 2.0 * v / den, (r2 - 1.0) / den};
    }

    double period() const override { return kTwoPi; }

private:
    TrigPolyPlaneSpec spec_;
};

class CircleCurve final : public detail::CurveImpl {
public:
    explicit CircleCurve(double kappa0) {
        // cot r = kappa0, r in (0, pi)
        const double h = std::hypot(1.0, kappa0);
        sin_r_ = 1.0 / h;
        cos_r_ = kappa0 / h;
    }

    JetVec3 jet(double t, int order) const override {
        Jet s, c;
        sincos(Jet::variable(t, order), s, c);
        return {sin_r_ * c, sin_r_ * s, Jet(cos_r_, order)};
    }

    double period() const override { return kTwoPi; }

private:
    double sin_r_, cos_r_;
};

class ParallelCurve final : public detail::CurveImpl {
public:
    ParallelCurve(SphericalCurve base, double theta) : base_(std::move(base)), c_(std::cos(theta)), s_(std::sin(theta)) {}

    JetVec3 jet(double t, int order) const override {
        const JetVec3 g = base_.jet(t, order + 1);
        const JetVec3 n = unit_normal_jet(g);
        return c_ * g + s_ * n;
    }

    double period() const override { return base_.period(); }

private:
    SphericalCurve base_;
    double c_, s_;
};

class ReversedCurve final : public detail::CurveImpl {
public:
    explicit ReversedCurve(SphericalCurve base) : base_(std::move(base)) {}

    JetVec3 jet(double t, int order) const override {
        JetVec3 g = base_.jet(-t, order);
        for (Jet* j : {&g.x, &g.y, &g.z}) {
            for (int k = 1; k <= j->order(); k += 2) (*j)[k] = -(*j)[k];
        }
        return g;
    }

    double period() const override { return base_.period(); }

private:
    SphericalCurve base_;
};

class NegatedCurve final : public detail::CurveImpl {
public:
    explicit NegatedCurve(SphericalCurve base) : base_(std::move(base)) {}
    JetVec3 jet(double t, int order) const override { return -base_.jet(t, order); }
    double period() const override { return base_.period(); }

private:
    SphericalCurve base_;
};

class RotatedCurve final : public detail::CurveImpl {
public:
    RotatedCurve(SphericalCurve base, const UnitQuaternion& g)
        : base_(std::move(base)),
          c1_(adjoint(g, {1, 0, 0})),
          c2_(adjoint(g, {0, 1, 0})),
          c3_(adjoint(g, {0, 0, 1})) {}

    JetVec3 jet(double t, int order) const override {
        return apply(base_.jet(t, order));
    }

    double period() const override { return base_.period(); }

private:
    JetVec3 apply(const JetVec3& g) const {
        return {g.x * c1_.x + g.y * c2_.x + g.z * c3_.x,
                g.x * c1_.y + g.y * c2_.y + g.z * c3_.y,
                g.x * c1_.z + g.y * c2_.z + g.z * c3_.z};
    }

    SphericalCurve base_;
    Vec3 c1_, c2_, c3_;
};

class ShiftedCurve final : public detail::CurveImpl {
public:
    ShiftedCurve(SphericalCurve base, double t0) : base_(std::move(base)), t0_(t0) {}
    JetVec3 jet(double t, int order) const override { return base_.jet(t + t0_, order); }
    double period() const override { return base_.period(); }

private:
    SphericalCurve base_;
    double t0_;
};

// Scan for the extrema of kappa on a dense sample, then polish each with a
// golden-section search on the bracketing cells.
std::pair<double, double> kappa_range(const SphericalCurve& c, int samples) {
    const double d = c.period();
    const double h = d / samples;
    std::vector<double> k(samples);
    for (int i = 0; i < samples; ++i) k[i] = geodesic_curvature(c, i * h);
    const int imin = static_cast<int>(std::min_element(k.begin(), k.end()) - k.begin());
    const int imax = static_cast<int>(std::max_element(k.begin(), k.end()) - k.begin());
    auto polish = [&](int i, double sign) {
        double a = (i - 1) * h, b = (i + 1) * h;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        auto f = [&](double t) { return sign * geodesic_curvature(c, t); };
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1);
            } else {
                a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2);
            }
        }
        return sign * std::min({f1, f2, sign * k[i]});
    };
    return {polish(imin, 1.0), polish(imax, -1.0)};
}

}  // namespace

SphericalCurve build_spherical(const TrigPolyPlaneSpec& spec) {
    auto nonzero_at = [](const std::vector<double>& a) {
        for (size_t k = 1; k < a.size(); ++k)
            if (a[k] != 0.0) return true;
        return false;
    };
    if (!(nonzero_at(spec.x_cos) || nonzero_at(spec.x_sin) || nonzero_at(spec.y_cos) || nonzero_at(spec.y_sin))) {
        throw SpecError("trig_poly_plane spec has no coefficient of frequency >= 1");
    }
    if (!(spec.scale > 0.0)) throw SpecError("trig_poly_plane spec: scale must be positive");
    auto impl = std::make_shared<TrigPolyCurve>(spec);

    constexpr int kSamples = 4096;
    double vmin = 1e300, vmax = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const auto [u, v] = impl->plane_jet(kTwoPi * i / kSamples, 1);
        const double sp = std::hypot(u[1], v[1]);
        vmin = std::min(vmin, sp);
        vmax = std::max(vmax, sp);
    }
    if (vmin <= 1e-6 * vmax) throw SpecError("trig_poly_plane spec: plane curve is not regular");
    return SphericalCurve(impl);
}

SphericalCurve circle_curve(double kappa0) { return SphericalCurve(std::make_shared<CircleCurve>(kappa0)); }

SphericalCurve parallel_curve(const SphericalCurve& c, double theta) {
    constexpr int kSamples = 4096;
    const double d = c.period();
    const double ct = std::cos(theta), st = std::sin(theta);
    double bad_lo = 0.0, bad_hi = 0.0;
    bool bad = false;
    for (int i = 0; i < kSamples; ++i) {
        const double t = d * i / kSamples;
        if (std::abs(ct - geodesic_curvature(c, t) * st) <= 1e-8) {
            if (!bad) bad_lo = t;
            bad = true;
            bad_hi = t;
        }
    }
    if (bad) {
        std::ostringstream os;
        os << "parallel curve singular: cos(theta) - kappa sin(theta) vanishes for t in [" << bad_lo << ", " << bad_hi
           << "] (theta = " << theta << ")";
        throw AnalysisError(os.str());
    }
    return SphericalCurve(std::make_shared<ParallelCurve>(c, theta));
}

SphericalCurve reversed(const SphericalCurve& c) { return SphericalCurve(std::make_shared<ReversedCurve>(c)); }
SphericalCurve negated(const SphericalCurve& c) { return SphericalCurve(std::make_shared<NegatedCurve>(c)); }
SphericalCurve rotated(const SphericalCurve& c, const UnitQuaternion& g) {
    return SphericalCurve(std::make_shared<RotatedCurve>(c, g));
}
SphericalCurve shifted(const SphericalCurve& c, double t0) { return SphericalCurve(std::make_shared<ShiftedCurve>(c, t0)); }

CurveSampleStats sample_stats(const SphericalCurve& c, int samples) {
    CurveSampleStats st;
    st.min_speed = 1e300;
    const double d = c.period();
    for (int i = 0; i < samples; ++i) {
        const auto dv = c.derivs(d * i / samples);
        st.max_norm_defect = std::max(st.max_norm_defect, std::abs(norm(dv.g) - 1.0));
        st.max_orthogonality = std::max(st.max_orthogonality, std::abs(dot(dv.g, dv.g1)));
        st.min_speed = std::min(st.min_speed, norm(dv.g1));
    }
    std::tie(st.kappa_min, st.kappa_max) = kappa_range(c, samples);
    return st;
}

double admissibility_residual(const SphericalCurve& c, int samples) {
    double r = 0.0;
    const double d = c.period();
    for (int i = 0; i < samples; ++i) {
        const double t = d * (i + 0.5) / samples;
        const double sp = norm(c.d1(t));
        const double k = geodesic_curvature(c, t);
        r = std::max(r, std::abs(sp * sp * (1.0 + k * k) - 4.0));
    }
    return r;
}

}  // namespace ftf
