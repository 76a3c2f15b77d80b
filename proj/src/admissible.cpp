#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "ftf/curve.hpp"
#include "ftf/errors.hpp"

namespace ftf {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                            0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                              0.4786286704993665, 0.2369268850561891};

// Series of |gamma'|^2 (1 + kappa^2) = |gamma'|^2 + det^2 / |gamma'|^4; order drops by 2.
Jet admissible_speed_sq(const JetVec3& g) {
    const JetVec3 g1 = differentiated(g);
    const JetVec3 g2 = differentiated(g1);
    const Jet sp2 = dot(g1, g1);
    const Jet det = det3(g, g1, g2);
    return sp2 + det * det / (sp2 * sp2);
}

}  // namespace

// Cumulative table of s(t) = 1/2 int_0^t |gamma'| sqrt(1 + kappa^2) du on a
// uniform t-grid, with Newton inversion.
class ArcLengthTable {
public:
    static constexpr int kCells = 4096;

    explicit ArcLengthTable(SphericalCurve base) : base_(std::move(base)) {
        period_t_ = base_.period();
        h_ = period_t_ / kCells;
        cum_.resize(kCells + 1);
        rate_.resize(kCells + 1);
        cum_[0] = 0.0;
        for (int k = 0; k < kCells; ++k) {
            cum_[k + 1] = cum_[k] + integrate(k * h_, (k + 1) * h_);
            rate_[k] = rate(k * h_);
        }
        rate_[kCells] = rate_[0];
        total_ = cum_[kCells];
        for (double r : rate_) {
            if (!(r > 0.0)) throw AnalysisError("reparametrize_admissible: |gamma'| vanishes");
        }
    }

    double rate(double t) const {
        const double v = admissible_speed_sq(base_.jet(t, 2)).value();
        return 0.5 * std::sqrt(v);
    }

    double period_s() const { return total_; }
    double period_t() const { return period_t_; }
    const SphericalCurve& base() const { return base_; }

    double s_of_t(double t) const {
        const double m = std::floor(t / period_t_);
        const double r = t - m * period_t_;
        const int k = std::clamp(static_cast<int>(r / h_), 0, kCells - 1);
        return m * total_ + cum_[k] + integrate(k * h_, r);
    }

    double t_of_s(double s) const {
        const double m = std::floor(s / total_);
        const double r = s - m * total_;
        // Cubic Hermite guess with exact slopes dt/ds = 1/rate.
        int k = static_cast<int>(std::upper_bound(cum_.begin(), cum_.end(), r) - cum_.begin()) - 1;
        k = std::clamp(k, 0, kCells - 1);
        const double s0 = cum_[k], s1 = cum_[k + 1], ds = s1 - s0;
        const double u = ds > 0.0 ? (r - s0) / ds : 0.0;
        const double t0 = k * h_, t1 = (k + 1) * h_;
        const double m0 = ds / rate_[k], m1 = ds / rate_[k + 1];
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        double t = h00 * t0 + h10 * m0 + h01 * t1 + h11 * m1;
        t = std::clamp(t, t0, t1);
        for (int it = 0; it < 30; ++it) {
            const double f = cum_[k] + integrate(k * h_, t) - r;
            const double step = f / rate(t);
            t -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, period_t_)) break;
        }
        return m * period_t_ + t;
    }

private:
    double integrate(double a, double b) const {
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (size_t i = 0; i < kGlNodes.size(); ++i) s += kGlWeights[i] * rate(c + hw * kGlNodes[i]);
        return s * hw;
    }

    SphericalCurve base_;
    double period_t_ = 0.0, h_ = 0.0, total_ = 0.0;
    std::vector<double> cum_, rate_;
};

namespace {

class ReparametrizedCurve final : public detail::CurveImpl {
public:
    explicit ReparametrizedCurve(std::shared_ptr<const ArcLengthTable> table) : table_(std::move(table)) {}

    JetVec3 jet(double s, int order) const override {
        const double t0 = table_->t_of_s(s);
        const int n = std::min(order, Jet::kMaxOrder - 1);
        const JetVec3 g = table_->base().jet(t0, n + 1);
        if (n == 0) return {g.x.truncated(0), g.y.truncated(0), g.z.truncated(0)};
        // s(t0 + d) - s(t0) as a series in d, then invert to d(sigma).
        const Jet rate = 0.5 * sqrt(admissible_speed_sq(g));  // order n - 1
        const Jet ds = rate.integrated();                       // order n
        const Jet dt = ds.reverted();
        return compose(JetVec3{g.x.truncated(n), g.y.truncated(n), g.z.truncated(n)}, dt);
    }

    double period() const override { return table_->period_s(); }

private:
    std::shared_ptr<const ArcLengthTable> table_;
};

}  // namespace

double AdmissibleCurve::s_of_t(double t) const { return table_ ? table_->s_of_t(t) : t; }
double AdmissibleCurve::t_of_s(double s) const { return table_ ? table_->t_of_s(s) : s; }

AdmissibleCurve AdmissibleCurve::from_admissible(const SphericalCurve& c) {
    const double res = admissibility_residual(c);
    if (res > 1e-6) {
        throw AnalysisError("curve parameter is not admissible: residual " + std::to_string(res));
    }
    AdmissibleCurve a;
    a.curve_ = c;
    a.base_ = c;
    const auto st = sample_stats(c, 2048);
    a.kappa_min_ = st.kappa_min;
    a.kappa_max_ = st.kappa_max;
    return a;
}

AdmissibleCurve reparametrize_admissible(const SphericalCurve& c) {
    auto table = std::make_shared<const ArcLengthTable>(c);
    AdmissibleCurve a;
    a.table_ = table;
    a.base_ = c;
    a.curve_ = SphericalCurve(std::make_shared<ReparametrizedCurve>(table));
    // kappa is geometric, so its range is read off the original parameter.
    const auto st = sample_stats(c, 4096);
    a.kappa_min_ = st.kappa_min;
    a.kappa_max_ = st.kappa_max;
    return a;
}

AdmissibleCurve negated(const AdmissibleCurve& c) { return AdmissibleCurve::from_admissible(negated(c.curve())); }
AdmissibleCurve reversed(const AdmissibleCurve& c) { return AdmissibleCurve::from_admissible(reversed(c.curve())); }
AdmissibleCurve rotated(const AdmissibleCurve& c, const UnitQuaternion& g) {
    return AdmissibleCurve::from_admissible(rotated(c.curve(), g));
}
AdmissibleCurve parallel_curve(const AdmissibleCurve& c, double theta) {
    return AdmissibleCurve::from_admissible(parallel_curve(c.curve(), theta));
}

}  // namespace ftf
