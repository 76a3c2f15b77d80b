#pragma once

#include <cmath>

namespace ftf {

// Three-vector over a scalar-like type. Instantiated with double for points of
// su(2) ~ R^3 and with Jet for truncated Taylor expansions of curves.
template <class T>
struct Vec3T {
    T x{}, y{}, z{};

    Vec3T() = default;
    Vec3T(T a, T b, T c) : x(std::move(a)), y(std::move(b)), z(std::move(c)) {}

    Vec3T& operator+=(const Vec3T& o) { x = x + o.x; y = y + o.y; z = z + o.z; return *this; }
    Vec3T& operator-=(const Vec3T& o) { x = x - o.x; y = y - o.y; z = z - o.z; return *this; }
};

template <class T> Vec3T<T> operator+(const Vec3T<T>& a, const Vec3T<T>& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
template <class T> Vec3T<T> operator-(const Vec3T<T>& a, const Vec3T<T>& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
template <class T> Vec3T<T> operator-(const Vec3T<T>& a) { return {-a.x, -a.y, -a.z}; }
template <class T, class S> Vec3T<T> operator*(const S& s, const Vec3T<T>& a) { return {s * a.x, s * a.y, s * a.z}; }
template <class T, class S> Vec3T<T> operator*(const Vec3T<T>& a, const S& s) { return {a.x * s, a.y * s, a.z * s}; }
template <class T, class S> Vec3T<T> operator/(const Vec3T<T>& a, const S& s) { return {a.x / s, a.y / s, a.z / s}; }

template <class T> T dot(const Vec3T<T>& a, const Vec3T<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <class T> Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T> T det3(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c) { return dot(a, cross(b, c)); }

using Vec3 = Vec3T<double>;

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// Great-circle distance between unit vectors, robust for small and near-pi angles.
inline double sphere_distance(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

}  // namespace ftf
