#include "ftf/su2.hpp"

#include <algorithm>
#include <cmath>

#include "ftf/errors.hpp"

namespace ftf {

UnitQuaternion normalized(const UnitQuaternion& q) {
    const double n = std::sqrt(dot4(q, q));
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

UnitQuaternion hamilton(const UnitQuaternion& a, const UnitQuaternion& b) {
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}

UnitQuaternion qmul(const UnitQuaternion& a, const UnitQuaternion& b) { return normalized(hamilton(a, b)); }

Su2Vector adjoint(const UnitQuaternion& a, const Su2Vector& v) {
    // v + 2w (u × v) + 2 u × (u × v), u = Im(a)
    const Su2Vector u = a.vec();
    const Su2Vector t = 2.0 * cross(u, v);
    return v + a.w * t + cross(u, t);
}

UnitQuaternion exp_su2(const Su2Vector& u) {
    const double th = norm(u);
    if (th < 1e-300) return UnitQuaternion::identity();
    // sin(th)/th is evaluated directly; it is well-conditioned away from 0.
    const double s = th < 1e-8 ? 1.0 - th * th / 6.0 : std::sin(th) / th;
    return normalized(UnitQuaternion{std::cos(th), s * u.x, s * u.y, s * u.z});
}

double distance(const UnitQuaternion& a, const UnitQuaternion& b) {
    // atan2 form keeps full precision for nearby points, where acos does not.
    const double dw = a.w - b.w, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    const double sw = a.w + b.w, sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
    return 2.0 * std::atan2(std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz), std::sqrt(sw * sw + sx * sx + sy * sy + sz * sz));
}

FramedPoint project_p2(const UnitQuaternion& a) {
    return {adjoint(a, {0.0, 0.0, 1.0}), adjoint(a, {1.0, 0.0, 0.0})};
}

UnitQuaternion rotation_to_quaternion(const Su2Vector& c1, const Su2Vector& c2, const Su2Vector& c3) {
    // Shepperd's method on R = [c1 c2 c3].
    const double m00 = c1.x, m10 = c1.y, m20 = c1.z;
    const double m01 = c2.x, m11 = c2.y, m21 = c2.z;
    const double m02 = c3.x, m12 = c3.y, m22 = c3.z;
    const double tr = m00 + m11 + m22;
    UnitQuaternion q;
    if (tr >= m00 && tr >= m11 && tr >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + tr);
        q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
    } else if (m00 >= m11 && m00 >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + m00 - m11 - m22);
        q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
    } else if (m11 >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + m11 - m00 - m22);
        q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 + m22 - m00 - m11);
        q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
    }
    return normalized(q);
}

std::pair<UnitQuaternion, UnitQuaternion> frame_to_quaternion(const Su2Vector& x, const Su2Vector& t) {
    constexpr double tol = 1e-8;
    if (std::abs(dot(x, x) - 1.0) > tol || std::abs(dot(t, t) - 1.0) > tol || std::abs(dot(x, t)) > tol) {
        throw AnalysisError("frame_to_quaternion: input frame is not orthonormal");
    }
    // Ad(q) maps e1 -> t, e2 -> x × t, e3 -> x.
    UnitQuaternion q = rotation_to_quaternion(t, cross(x, t), x);
    if (q.w < 0.0 || (q.w == 0.0 && q.x < 0.0)) q = -q;
    return {q, -q};
}

}  // namespace ftf
