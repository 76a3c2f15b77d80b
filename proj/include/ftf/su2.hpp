#pragma once

#include <array>
#include <utility>

#include "ftf/vec3.hpp"

// S^3 = SU(2) as unit quaternions.
//
// The basis of su(2) is identified with the imaginary quaternion units once and
// for all: e1 <-> i, e2 <-> j, e3 <-> k. Under this identification
//   <x, y> = -1/2 tr(xy)  is the Euclidean dot product,
//   x × y  = 1/2 [x, y]   is the Euclidean cross product,
//   Ad(a)x = a x a^{-1}   is the usual quaternion rotation.
namespace ftf {

using Su2Vector = Vec3;

struct UnitQuaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    static UnitQuaternion identity() { return {}; }
    static UnitQuaternion from_vector(const Su2Vector& v) { return {0.0, v.x, v.y, v.z}; }

    Su2Vector vec() const { return {x, y, z}; }
    std::array<double, 4> coeffs() const { return {w, x, y, z}; }
};

inline UnitQuaternion operator-(const UnitQuaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }

// R^4 inner product.
inline double dot4(const UnitQuaternion& a, const UnitQuaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

UnitQuaternion normalized(const UnitQuaternion& q);

// Raw Hamilton product, no renormalization. Used where intermediate values are
// not meant to be unit (finite differences, residuals).
UnitQuaternion hamilton(const UnitQuaternion& a, const UnitQuaternion& b);

// Group product, renormalized to unit length.
UnitQuaternion qmul(const UnitQuaternion& a, const UnitQuaternion& b);

inline UnitQuaternion inverse(const UnitQuaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }

Su2Vector adjoint(const UnitQuaternion& a, const Su2Vector& v);

// exp(u) = cos|u| + sin|u| u/|u|.
UnitQuaternion exp_su2(const Su2Vector& u);

// Geodesic distance on S^3.
double distance(const UnitQuaternion& a, const UnitQuaternion& b);

struct FramedPoint {
    Su2Vector x;  // point of S^2
    Su2Vector y;  // unit tangent at x
};

// p2(a) = (Ad(a)e3, Ad(a)e1).
FramedPoint project_p2(const UnitQuaternion& a);

// Hopf map p = p1 o p2.
inline Su2Vector hopf(const UnitQuaternion& a) { return project_p2(a).x; }

// The two quaternions over the framed point (x, t). The first element has w >= 0
// (ties broken by x >= 0). Throws AnalysisError if (x, t) is not orthonormal to 1e-8.
std::pair<UnitQuaternion, UnitQuaternion> frame_to_quaternion(const Su2Vector& x, const Su2Vector& t);

// Quaternion of the rotation whose columns are the images of e1, e2, e3.
// Columns must form a proper orthonormal frame.
UnitQuaternion rotation_to_quaternion(const Su2Vector& c1, const Su2Vector& c2, const Su2Vector& c3);

}  // namespace ftf
