#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace iga {

// Order-2 Taylor scalar in two variables: value, gradient, Hessian packed as
// (xx, xy, yy).  Used to derive stress and body-force bundles from a
// displacement closure without hand-expanding second partials.
struct D2 {
    double v = 0.0;
    std::array<double, 2> g{0.0, 0.0};
    std::array<double, 3> h{0.0, 0.0, 0.0};
};

inline D2 d2_const(double c) { return {c, {0, 0}, {0, 0, 0}}; }
inline D2 d2_var(double x, int k) {
    D2 r;
    r.v = x;
    r.g[k] = 1.0;
    return r;
}

inline D2 operator+(const D2& a, const D2& b) {
    return {a.v + b.v,
            {a.g[0] + b.g[0], a.g[1] + b.g[1]},
            {a.h[0] + b.h[0], a.h[1] + b.h[1], a.h[2] + b.h[2]}};
}
inline D2 operator-(const D2& a, const D2& b) {
    return {a.v - b.v,
            {a.g[0] - b.g[0], a.g[1] - b.g[1]},
            {a.h[0] - b.h[0], a.h[1] - b.h[1], a.h[2] - b.h[2]}};
}
inline D2 operator-(const D2& a) { return d2_const(0.0) - a; }
inline D2 operator*(const D2& a, const D2& b) {
    D2 r;
    r.v = a.v * b.v;
    r.g = {a.g[0] * b.v + a.v * b.g[0], a.g[1] * b.v + a.v * b.g[1]};
    r.h = {a.h[0] * b.v + 2 * a.g[0] * b.g[0] + a.v * b.h[0],
           a.h[1] * b.v + a.g[0] * b.g[1] + a.g[1] * b.g[0] + a.v * b.h[1],
           a.h[2] * b.v + 2 * a.g[1] * b.g[1] + a.v * b.h[2]};
    return r;
}
inline D2 operator*(double s, const D2& a) { return d2_const(s) * a; }
inline D2 operator*(const D2& a, double s) { return d2_const(s) * a; }
inline D2 operator+(const D2& a, double s) { return a + d2_const(s); }
inline D2 operator+(double s, const D2& a) { return a + d2_const(s); }
inline D2 operator-(const D2& a, double s) { return a - d2_const(s); }
inline D2 operator-(double s, const D2& a) { return d2_const(s) - a; }

// f together with first and second derivative values at a.v.
inline D2 d2_chain(const D2& a, double f, double fp, double fpp) {
    D2 r;
    r.v = f;
    r.g = {fp * a.g[0], fp * a.g[1]};
    r.h = {fpp * a.g[0] * a.g[0] + fp * a.h[0],
           fpp * a.g[0] * a.g[1] + fp * a.h[1],
           fpp * a.g[1] * a.g[1] + fp * a.h[2]};
    return r;
}
inline D2 sin(const D2& a) { return d2_chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline D2 cos(const D2& a) { return d2_chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline D2 exp(const D2& a) {
    double e = std::exp(a.v);
    return d2_chain(a, e, e, e);
}
inline D2 inv(const D2& a) {
    double i = 1.0 / a.v;
    return d2_chain(a, i, -i * i, 2 * i * i * i);
}
inline D2 operator/(const D2& a, const D2& b) { return a * inv(b); }
inline D2 operator/(const D2& a, double s) { return a * (1.0 / s); }

// Scalar function on [0,1] with derivatives of every requested order.
struct Smooth1D {
    std::function<double(int, double)> d;
    double operator()(double z) const { return d(0, z); }
};

// Scalar function on [0,1]^2 with mixed partials d(k1, k2, z1, z2).
struct Smooth2D {
    std::function<double(int, int, double, double)> d;
    double operator()(double z1, double z2) const { return d(0, 0, z1, z2); }
};

}  // namespace iga
