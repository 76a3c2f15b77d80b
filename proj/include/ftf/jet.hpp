#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "ftf/vec3.hpp"

namespace ftf {

// Truncated Taylor series f(t0 + d) = c[0] + c[1] d + ... + c[order] d^order.
//
// Curves are evaluated as jets so that derivatives of composed curves
// (stereographic pullback, parallel curve, admissible reparametrization, ...)
// are exact up to rounding. Binary operations truncate to the smaller order.
class Jet {
public:
    static constexpr int kMaxOrder = 9;

    Jet() = default;
    Jet(double value, int order) : order_(order) { c_[0] = value; }  // NOLINT

    // The identity series t0 + d.
    static Jet variable(double t0, int order) {
        Jet j(t0, order);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    double operator[](int k) const { return c_[k]; }
    double& operator[](int k) { return c_[k]; }
    double value() const { return c_[0]; }

    // k-th derivative at t0.
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[k] * f;
    }

    Jet truncated(int order) const {
        Jet r = *this;
        for (int k = order + 1; k <= order_; ++k) r.c_[k] = 0.0;
        r.order_ = std::min(order, order_);
        return r;
    }

    // d/dt; order drops by one.
    Jet differentiated() const {
        Jet r;
        r.order_ = std::max(order_ - 1, 0);
        for (int k = 0; k < order_; ++k) r.c_[k] = (k + 1) * c_[k + 1];
        if (order_ == 0) r.c_[0] = 0.0;
        return r;
    }

    // Antiderivative vanishing at t0; order rises by one (capped).
    Jet integrated() const {
        Jet r;
        r.order_ = std::min(order_ + 1, kMaxOrder);
        for (int k = r.order_; k >= 1; --k) r.c_[k] = c_[k - 1] / k;
        r.c_[0] = 0.0;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }
    friend Jet operator-(const Jet& a) {
        Jet r = a;
        for (int k = 0; k <= r.order_; ++k) r.c_[k] = -r.c_[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
            r.c_[k] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) {
            double s = a.c_[k];
            for (int i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }
    friend Jet operator+(const Jet& a, double s) { Jet r = a; r.c_[0] += s; return r; }
    friend Jet operator+(double s, const Jet& a) { return a + s; }
    friend Jet operator-(const Jet& a, double s) { Jet r = a; r.c_[0] -= s; return r; }
    friend Jet operator-(double s, const Jet& a) { return -a + s; }
    friend Jet operator*(const Jet& a, double s) {
        Jet r = a;
        for (int k = 0; k <= r.order_; ++k) r.c_[k] *= s;
        return r;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

    friend Jet sqrt(const Jet& a) {
        Jet r;
        r.order_ = a.order_;
        r.c_[0] = std::sqrt(a.c_[0]);
        for (int k = 1; k <= a.order_; ++k) {
            double s = a.c_[k];
            for (int i = 1; i < k; ++i) s -= r.c_[i] * r.c_[k - i];
            r.c_[k] = s / (2.0 * r.c_[0]);
        }
        return r;
    }

    // sin and cos together via s' = c a', c' = -s a'.
    friend void sincos(const Jet& a, Jet& s, Jet& c) {
        s = Jet(std::sin(a.c_[0]), a.order_);
        c = Jet(std::cos(a.c_[0]), a.order_);
        for (int k = 1; k <= a.order_; ++k) {
            double ss = 0.0, cc = 0.0;
            for (int i = 1; i <= k; ++i) {
                ss += i * a.c_[i] * c.c_[k - i];
                cc -= i * a.c_[i] * s.c_[k - i];
            }
            s.c_[k] = ss / k;
            c.c_[k] = cc / k;
        }
    }

    // f(g(d)) where *this is f as a series in d and g has zero constant term.
    Jet compose(const Jet& g) const {
        const int n = std::min(order_, g.order_);
        Jet r(c_[n], n);
        for (int k = n - 1; k >= 0; --k) r = r * g.truncated(n) + c_[k];
        return r;
    }

    // Series inverse of g(d) = a1 d + a2 d^2 + ... (zero constant, a1 != 0).
    Jet reverted() const {
        const int n = order_;
        Jet h = Jet::variable(0.0, n);  // d
        Jet tail = *this;
        tail.c_[0] = 0.0;
        tail.c_[1] = 0.0;
        Jet r = h / c_[1];
        for (int it = 1; it < n; ++it) r = (h - tail.compose(r)) / c_[1];
        return r;
    }

private:
    int order_ = 0;
    std::array<double, kMaxOrder + 1> c_{};
};

using JetVec3 = Vec3T<Jet>;

inline Jet norm(const JetVec3& v) { return sqrt(dot(v, v)); }

inline JetVec3 differentiated(const JetVec3& v) {
    return {v.x.differentiated(), v.y.differentiated(), v.z.differentiated()};
}

inline Vec3 value(const JetVec3& v) { return {v.x.value(), v.y.value(), v.z.value()}; }

inline Vec3 derivative(const JetVec3& v, int k) { return {v.x.derivative(k), v.y.derivative(k), v.z.derivative(k)}; }

inline int order(const JetVec3& v) { return std::min({v.x.order(), v.y.order(), v.z.order()}); }

inline JetVec3 compose(const JetVec3& f, const Jet& g) { return {f.x.compose(g), f.y.compose(g), f.z.compose(g)}; }

}  // namespace ftf
