#include "ftf/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>
#include <vector>

#include "ftf/errors.hpp"

namespace ftf {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec4 = std::array<double, 4>;

Vec4 as4(const UnitQuaternion& q) { return {q.w, q.x, q.y, q.z}; }

double dot4v(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

// |a + b|^2, accurate near antipodal points.
double sum_sq(const Vec4& a, const Vec4& b) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += (a[i] + b[i]) * (a[i] + b[i]);
    return s;
}

// Spherical distance from |a - b| and |a + b|.
double s3_distance(const Vec4& a, const Vec4& b) {
    double d2 = 0.0, s2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        d2 += (a[i] - b[i]) * (a[i] - b[i]);
        s2 += (a[i] + b[i]) * (a[i] + b[i]);
    }
    return 2.0 * std::atan2(std::sqrt(d2), std::sqrt(s2));
}

// N_i = (-1)^i det(minor_i) of the 3x4 matrix with rows a, b, c.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
    auto det3x3 = [&](int i, int j, int k) {
        return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
               a[k] * (b[i] * c[j] - b[j] * c[i]);
    };
    return {det3x3(1, 2, 3), -det3x3(0, 2, 3), det3x3(0, 1, 3), -det3x3(0, 1, 2)};
}

std::string window_text(const MuWindow& w) {
    std::ostringstream os;
    os << "(" << w.low << ", " << w.high << ")";
    return os.str();
}

double choose_mu(const MuWindow& w, double preferred) {
    if (preferred > 0.0 && preferred > w.low && preferred < w.high) return preferred;
    if (w.high > 0.0) return default_mu(w);
    return preferred;
}

void require_parallel_ok(const AdmissibleCurve& c, double theta, const char* which) {
    const double ct = std::cos(theta), st = std::sin(theta);
    // cos th - kappa sin th is linear in kappa, so the extremes decide.
    if (ct - c.kappa_min() * st > 0.0 && ct - c.kappa_max() * st > 0.0) return;
    const int n = 2048;
    double lo = -1.0, hi = -1.0;
    for (int i = 0; i < n; ++i) {
        const double s = c.period_l() * i / n;
        if (ct - c.kappa(s) * st <= 0.0) {
            if (lo < 0.0) lo = s;
            hi = s;
        }
    }
    std::ostringstream os;
    os << "parallel deformation by theta = " << theta << " violates cos th - kappa sin th > 0 on " << which;
    if (lo >= 0.0) os << " for s in [" << lo << ", " << hi << "]";
    throw AdmissibilityError(os.str());
}

}  // namespace

MuWindow check_mu_admissible(const AdmissibleCurve& g1, const AdmissibleCurve& g2) {
    MuWindow w{g2.kappa_max(), g1.kappa_min()};
    if (!(w.low < w.high)) {
        std::ostringstream os;
        os << "not admissible: min kappa1 = " << g1.kappa_min() << " <= max kappa2 = " << g2.kappa_max();
        throw AdmissibilityError(os.str());
    }
    return w;
}

double default_mu(const MuWindow& w) {
    if (!(w.high > 0.0)) {
        throw AdmissibilityError("not admissible: window " + window_text(w) + " has no positive mu");
    }
    return 0.5 * (std::max(w.low, 0.0) + w.high);
}

AdmissiblePair make_pair(const AdmissibleCurve& g1, const AdmissibleCurve& g2, const double* mu) {
    const MuWindow w = check_mu_admissible(g1, g2);
    AdmissiblePair p{g1, g2, 0.0};
    if (mu) {
        if (!(*mu > 0.0 && *mu > w.low && *mu < w.high)) {
            std::ostringstream os;
            os << "not admissible: mu = " << *mu << " outside the window " << window_text(w) << " or not positive";
            throw AdmissibilityError(os.str());
        }
        p.mu = *mu;
    } else {
        p.mu = default_mu(w);
    }
    return p;
}

AdmissiblePair build_pair(const PairSpec& spec) {
    const AdmissibleCurve g1 = reparametrize_admissible(build_curve(spec.gamma1));
    const AdmissibleCurve g2 = reparametrize_admissible(build_curve(spec.gamma2));
    return make_pair(g1, g2, spec.has_mu ? &spec.mu : nullptr);
}

FlatTorusImmersion::FlatTorusImmersion(AdmissiblePair pair, LiftedCurve lift1, LiftedCurve lift2)
    : pair_(std::move(pair)), lift1_(std::move(lift1)), lift2_(std::move(lift2)) {
    base1_ = lift1_.at(0.0);
    base2_ = lift2_.at(0.0);
    base1_inv_ = inverse(base1_);
}

UnitQuaternion FlatTorusImmersion::operator()(double s1, double s2) const {
    const UnitQuaternion a = qmul(base1_inv_, lift1_.at(s1));
    const UnitQuaternion b = qmul(inverse(lift2_.at(s2)), base2_);
    return qmul(a, b);
}

FlatTorusImmersion build_torus(const AdmissiblePair& pair, int lift_steps) {
    return FlatTorusImmersion(pair, lift_curve(pair.gamma1, lift_steps), lift_curve(pair.gamma2, lift_steps));
}

UnitQuaternion evaluate_f(const FlatTorusImmersion& T, double s1, double s2) { return T(s1, s2); }

AnalyticForms analytic_forms(double k1, double k2) {
    AnalyticForms a;
    a.omega = kPi - std::atan(k1) + std::atan(k2);
    a.E = a.G = 1.0;
    a.F = std::cos(a.omega);
    a.h12 = std::sin(a.omega);
    a.H = (1.0 + k1 * k2) / (k1 - k2);
    return a;
}

AnalyticForms analytic_forms(const AdmissiblePair& pair, double s1, double s2) {
    return analytic_forms(pair.gamma1.kappa(s1), pair.gamma2.kappa(s2));
}

NumericForms numeric_forms(const FlatTorusImmersion& T, double s1, double s2, double h) {
    if (!(h >= 1e-5 && h <= 1e-2)) throw AnalysisError("numeric_forms: step h must lie in [1e-5, 1e-2]");
    auto f = [&](double a, double b) { return as4(T(a, b)); };
    const Vec4 f0 = f(s1, s2);
    const Vec4 fp0 = f(s1 + h, s2), fm0 = f(s1 - h, s2), f0p = f(s1, s2 + h), f0m = f(s1, s2 - h);
    const Vec4 fpp = f(s1 + h, s2 + h), fpm = f(s1 + h, s2 - h), fmp = f(s1 - h, s2 + h), fmm = f(s1 - h, s2 - h);
    Vec4 f1, f2, f11, f22, f12;
    for (int i = 0; i < 4; ++i) {
        f1[i] = (fp0[i] - fm0[i]) / (2 * h);
        f2[i] = (f0p[i] - f0m[i]) / (2 * h);
        f11[i] = (fp0[i] - 2 * f0[i] + fm0[i]) / (h * h);
        f22[i] = (f0p[i] - 2 * f0[i] + f0m[i]) / (h * h);
        f12[i] = (fpp[i] - fpm[i] - fmp[i] + fmm[i]) / (4 * h * h);
    }
    NumericForms r;
    r.E = dot4v(f1, f1);
    r.F = dot4v(f1, f2);
    r.G = dot4v(f2, f2);
    const double detg = r.E * r.G - r.F * r.F;
    if (detg < 1e-8) throw AnalysisError("numeric_forms: degenerate metric");
    Vec4 n = cross4(f0, f1, f2);
    const double nn = std::sqrt(dot4v(n, n));
    for (double& v : n) v /= nn;
    r.h11 = dot4v(f11, n);
    r.h12 = dot4v(f12, n);
    r.h22 = dot4v(f22, n);
    r.K = 1.0 + (r.h11 * r.h22 - r.h12 * r.h12) / detg;
    r.H = (2.0 * r.F * r.h12 - r.E * r.h22 - r.G * r.h11) / (2.0 * detg);
    return r;
}

int default_thread_count() {
    if (const char* env = std::getenv("FTF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

namespace {

struct Candidate {
    double value;  // |f(p) + f(q)|^2, smaller is farther apart
    int a, b;
    bool operator<(const Candidate& o) const { return std::tie(value, a, b) < std::tie(o.value, o.a, o.b); }
};

constexpr size_t kKeep = 16;

void keep_best(std::vector<Candidate>& best, const Candidate& c) {
    if (best.size() == kKeep && !(c < best.back())) return;
    best.insert(std::upper_bound(best.begin(), best.end(), c), c);
    if (best.size() > kKeep) best.pop_back();
}

}  // namespace

DiameterResult extrinsic_diameter(const FlatTorusImmersion& T, int coarse_n, int refine_iters, int threads) {
    if (coarse_n < 2) throw AnalysisError("extrinsic_diameter: coarse_n too small");
    if (threads <= 0) threads = default_thread_count();
    const int n = coarse_n;
    const double L1 = T.period1(), L2 = T.period2();
    const double h1 = L1 / n, h2 = L2 / n;

    // f(s1, s2) = A(s1) B(s2) on the grid.
    std::vector<UnitQuaternion> A(n), B(n);
    for (int i = 0; i < n; ++i) {
        A[i] = qmul(inverse(T.base1()), T.lift1().at(i * h1));
        B[i] = qmul(inverse(T.lift2().at(i * h2)), T.base2());
    }
    const int m = n * n;
    std::vector<Vec4> pts(m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pts[i * n + j] = as4(qmul(A[i], B[j]));

    threads = std::max(1, std::min(threads, m));
    std::vector<std::vector<Candidate>> partial(threads);
    auto work = [&](int tid) {
        auto& best = partial[tid];
        for (int a = tid; a < m; a += threads) {
            for (int b = a + 1; b < m; ++b) keep_best(best, {sum_sq(pts[a], pts[b]), a, b});
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    std::vector<Candidate> best;
    for (const auto& part : partial)
        for (const Candidate& c : part) keep_best(best, c);

    DiameterResult res;
    res.coarse_n = n;
    res.refine_iters = refine_iters;
    res.threads = threads;
    auto point_of = [&](int k) { return TorusPoint{(k / n) * h1, (k % n) * h2}; };
    res.p = point_of(best.front().a);
    res.q = point_of(best.front().b);
    res.coarse_diameter = s3_distance(pts[best.front().a], pts[best.front().b]);

    // Pattern search on (s1, s2, s1', s2').
    double best_val = best.front().value;
    std::array<double, 4> best_x{res.p.s1, res.p.s2, res.q.s1, res.q.s2};
    auto objective = [&](const std::array<double, 4>& x) { return sum_sq(as4(T(x[0], x[1])), as4(T(x[2], x[3]))); };
    for (const Candidate& c : best) {
        const TorusPoint p = point_of(c.a), q = point_of(c.b);
        std::array<double, 4> x{p.s1, p.s2, q.s1, q.s2};
        std::array<double, 4> step{h1, h2, h1, h2};
        double val = c.value;
        for (int it = 0; it < refine_iters; ++it) {
            double move_val = val;
            std::array<double, 4> move_x = x;
            for (int k = 0; k < 4; ++k) {
                for (double sgn : {1.0, -1.0}) {
                    std::array<double, 4> y = x;
                    y[k] += sgn * step[k];
                    const double v = objective(y);
                    if (v < move_val) {
                        move_val = v;
                        move_x = y;
                    }
                }
            }
            if (move_val < val) {
                val = move_val;
                x = move_x;
            } else {
                for (double& s : step) s *= 0.5;
            }
        }
        if (val < best_val) {
            best_val = val;
            best_x = x;
        }
    }
    auto wrap = [](double x, double L) {
        double r = std::fmod(x, L);
        return r < 0.0 ? r + L : r;
    };
    res.p = {wrap(best_x[0], L1), wrap(best_x[1], L2)};
    res.q = {wrap(best_x[2], L1), wrap(best_x[3], L2)};
    res.diameter = std::max(res.coarse_diameter, s3_distance(as4(T(best_x[0], best_x[1])), as4(T(best_x[2], best_x[3]))));
    return res;
}

AdmissiblePair swap_negate_pair(const AdmissiblePair& pair) {
    AdmissiblePair out;
    out.gamma1 = negated(pair.gamma2);
    out.gamma2 = negated(pair.gamma1);
    const MuWindow w{out.gamma2.kappa_max(), out.gamma1.kappa_min()};
    out.mu = choose_mu(w, -pair.mu);
    return out;
}

AdmissiblePair parallel_deform_pair(const AdmissiblePair& pair, double theta) {
    require_parallel_ok(pair.gamma1, theta, "gamma1");
    require_parallel_ok(pair.gamma2, theta, "gamma2");
    if (theta == 0.0) return pair;
    AdmissiblePair out;
    out.gamma1 = parallel_curve(pair.gamma1, theta);
    out.gamma2 = parallel_curve(pair.gamma2, theta);
    const MuWindow w = check_mu_admissible(out.gamma1, out.gamma2);
    out.mu = choose_mu(w, std::tan(std::atan(pair.mu) + theta));
    return out;
}

AdmissiblePair reverse_deform_pair(const AdmissiblePair& pair, double theta) {
    if (!(theta > 0.0 && theta < kPi)) throw AdmissibilityError("reverse deformation needs 0 < theta < pi");
    const double cot = std::cos(theta) / std::sin(theta);
    if (!(pair.gamma1.kappa_min() > cot && cot > pair.gamma2.kappa_max())) {
        std::ostringstream os;
        os << "reverse deformation needs kappa1 > cot(theta) = " << cot << " > kappa2; window is ("
           << pair.gamma2.kappa_max() << ", " << pair.gamma1.kappa_min() << ")";
        throw AdmissibilityError(os.str());
    }
    AdmissiblePair out;
    out.gamma1 = parallel_curve(pair.gamma1, theta);
    out.gamma2 = reversed(parallel_curve(pair.gamma2, theta));
    out.mu = cot;
    const MuWindow w = check_mu_admissible(out.gamma1, out.gamma2);
    if (!(cot > w.low && cot < w.high)) {
        throw AnalysisError("reverse deformation: cot(theta) left the new admissibility window");
    }
    return out;
}

UnitQuaternion solve_conjugator(const UnitQuaternion& a1, const UnitQuaternion& b1, const UnitQuaternion& a2,
                                const UnitQuaternion& b2) {
    auto frame = [](const Vec3& u, const Vec3& v) {
        const Vec3 e1 = normalized(u);
        const Vec3 e3 = normalized(cross(u, v));
        return std::array<Vec3, 3>{e1, cross(e3, e1), e3};
    };
    const Vec3 u1 = a1.vec(), u2 = a2.vec(), v1 = b1.vec(), v2 = b2.vec();
    if (norm(cross(u1, u2)) < 1e-8 || norm(cross(v1, v2)) < 1e-8) {
        throw AnalysisError("solve_conjugator: probe points have parallel imaginary parts");
    }
    const auto U = frame(u1, u2), V = frame(v1, v2);
    // R = V U^T; column k is sum_j V_j U_j[k].
    auto col = [&](int k) {
        auto comp = [k](const Vec3& x) { return k == 0 ? x.x : (k == 1 ? x.y : x.z); };
        return comp(U[0]) * V[0] + comp(U[1]) * V[1] + comp(U[2]) * V[2];
    };
    return rotation_to_quaternion(col(0), col(1), col(2));
}

void write_mesh_csv(const FlatTorusImmersion& T, int grid_n, std::ostream& out) {
    out << "s1,s2,w,x,y,z\n";
    char buf[256];
    for (int i = 0; i < grid_n; ++i) {
        const double s1 = T.period1() * i / grid_n;
        for (int j = 0; j < grid_n; ++j) {
            const double s2 = T.period2() * j / grid_n;
            const UnitQuaternion q = T(s1, s2);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s1, s2, q.w, q.x, q.y, q.z);
            out << buf;
        }
    }
}

}  // namespace ftf
