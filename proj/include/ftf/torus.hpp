#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "ftf/curve.hpp"
#include "ftf/curve_spec.hpp"
#include "ftf/lifting.hpp"

namespace ftf {

// Pair of admissible curves with kappa_min(gamma1) > mu > kappa_max(gamma2).
struct AdmissiblePair {
    AdmissibleCurve gamma1, gamma2;
    double mu = 0.0;
};

struct MuWindow {
    double low = 0.0, high = 0.0;  // open interval (max kappa2, min kappa1)
    double midpoint() const { return 0.5 * (low + high); }
};

// Throws AdmissibilityError "not admissible" when max kappa2 >= min kappa1.
MuWindow check_mu_admissible(const AdmissibleCurve& g1, const AdmissibleCurve& g2);

// Midpoint of the window restricted to mu > 0; AdmissibilityError if the window
// has no positive part.
double default_mu(const MuWindow& w);

// Builds a pair. With `mu` given it must lie strictly inside the window and be
// positive; otherwise default_mu is used.
AdmissiblePair make_pair(const AdmissibleCurve& g1, const AdmissibleCurve& g2, const double* mu = nullptr);

// Reparametrizes both curves of a spec and validates the pair.
AdmissiblePair build_pair(const PairSpec& spec);

// f(s1, s2) = c1(0)^{-1} c1(s1) c2(s2)^{-1} c2(0).
class FlatTorusImmersion {
public:
    FlatTorusImmersion(AdmissiblePair pair, LiftedCurve lift1, LiftedCurve lift2);

    const AdmissiblePair& pair() const { return pair_; }
    const LiftedCurve& lift1() const { return lift1_; }
    const LiftedCurve& lift2() const { return lift2_; }
    const UnitQuaternion& base1() const { return base1_; }
    const UnitQuaternion& base2() const { return base2_; }

    // Fundamental domain [0, 2 l1) x [0, 2 l2).
    double period1() const { return 2.0 * pair_.gamma1.period_l(); }
    double period2() const { return 2.0 * pair_.gamma2.period_l(); }

    UnitQuaternion operator()(double s1, double s2) const;

private:
    AdmissiblePair pair_;
    LiftedCurve lift1_, lift2_;
    UnitQuaternion base1_, base2_, base1_inv_;
};

FlatTorusImmersion build_torus(const AdmissiblePair& pair, int lift_steps = 4096);

UnitQuaternion evaluate_f(const FlatTorusImmersion& T, double s1, double s2);

struct AnalyticForms {
    double E = 1.0, F = 0.0, G = 1.0, h12 = 0.0, H = 0.0, omega = 0.0;
};

// E = G = 1, F = cos omega, h12 = sin omega, omega = pi - atan k1 + atan k2,
// H = (1 + k1 k2) / (k1 - k2).
AnalyticForms analytic_forms(double kappa1, double kappa2);
AnalyticForms analytic_forms(const AdmissiblePair& pair, double s1, double s2);

struct NumericForms {
    double E = 0, F = 0, G = 0;
    double h11 = 0, h12 = 0, h22 = 0;
    double K = 0, H = 0;
};

// Central differences of f in R^4 with step h in [1e-5, 1e-2]. The unit normal
// is the 4D cross product of (f, f_s1, f_s2), normalized. K = 1 + det h / det g,
// H = (2 F h12 - E h22 - G h11) / (2 det g).
NumericForms numeric_forms(const FlatTorusImmersion& T, double s1, double s2, double h = 1e-3);

struct TorusPoint {
    double s1 = 0.0, s2 = 0.0;
};

struct DiameterResult {
    double diameter = 0.0;     // lower bound for the extrinsic diameter
    TorusPoint p, q;           // witnesses
    double coarse_diameter = 0.0;
    int coarse_n = 0, refine_iters = 0, threads = 1;
};

// Exhaustive search over all pairs of a coarse_n x coarse_n grid on the
// fundamental domain, then pattern search on the 16 best pairs. threads <= 0
// reads FTF_THREADS (default: hardware concurrency). The result does not
// depend on the thread count.
DiameterResult extrinsic_diameter(const FlatTorusImmersion& T, int coarse_n = 48, int refine_iters = 40,
                                  int threads = 0);

// (gamma1, gamma2) -> (-gamma2, -gamma1). mu is re-chosen in the new window
// (default_mu) when it has a positive part, otherwise set to -mu.
AdmissiblePair swap_negate_pair(const AdmissiblePair& pair);

// Parallel curves of both members by theta. Requires cos th - kappa_i sin th > 0.
AdmissiblePair parallel_deform_pair(const AdmissiblePair& pair, double theta);

// (gamma1^th(s), gamma2^th(-s)) for 0 < th < pi with kappa1 > cot th > kappa2;
// the new mu is cot th.
AdmissiblePair reverse_deform_pair(const AdmissiblePair& pair, double theta);

// g with b_i = g a_i g^{-1} for two pairs of quaternions whose imaginary parts
// are not parallel. Returns the closest fit when the data is not exact.
UnitQuaternion solve_conjugator(const UnitQuaternion& a1, const UnitQuaternion& b1, const UnitQuaternion& a2,
                                const UnitQuaternion& b2);

// CSV with header "s1,s2,w,x,y,z", grid_n x grid_n rows over the fundamental
// domain, s1 major.
void write_mesh_csv(const FlatTorusImmersion& T, int grid_n, std::ostream& out);

// Number of threads used by default for parallel searches.
int default_thread_count();

}  // namespace ftf
