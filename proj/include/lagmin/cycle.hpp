#pragma once

#include <cmath>
#include <vector>

#include "lagmin/geom_core.hpp"

namespace lagmin {

// a(x^2+y^2) + bx + cy + d = 0; a = 0 is a line
struct Cycle {
    double a = 0, b = 0, c = 0, d = 0;

    static Cycle circle(double cx, double cy, double r) {
        return {1.0, -2 * cx, -2 * cy, cx * cx + cy * cy - r * r};
    }
    // line n.p = off
    static Cycle line(double nx, double ny, double off) { return {0.0, nx, ny, -off}; }

    Vec4 vec() const { return {a, b, c, d}; }
    static Cycle from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

    double Q() const { return b * b + c * c - 4 * a * d; }
    double eval(double x, double y) const { return a * (x * x + y * y) + b * x + c * y + d; }
    double scale() const { return std::sqrt(a * a + b * b + c * c + d * d); }

    bool is_line(double tol = 1e-12) const { return std::abs(a) <= tol * scale(); }
    bool is_genuine_circle(double tol = 1e-12) const { return !is_line(tol) && Q() > tol * scale() * scale(); }

    Vec2 center() const { return {-b / (2 * a), -c / (2 * a)}; }
    double radius() const { return std::sqrt(std::max(Q(), 0.0)) / (2 * std::abs(a)); }

    // first nonzero of (a,b,c) made +1
    Cycle canonical() const {
        const double tol = 1e-14 * scale();
        double s = 1.0;
        if (std::abs(a) > tol) s = a;
        else if (std::abs(b) > tol) s = b;
        else if (std::abs(c) > tol) s = c;
        else if (std::abs(d) > tol) s = d;
        return {a / s, b / s, c / s, d / s};
    }
};

// inversive bilinear form, Q(C) = B(C,C)
inline double inversive_product(const Cycle& p, const Cycle& q) {
    return p.b * q.b + p.c * q.c - 2 * (p.a * q.d + q.a * p.d);
}

// points of the cycle; circles sampled equiangularly, lines on a segment
// starting at the foot point of the origin
struct CycleSampling {
    int samples = 50;
    double phase = 0.0;
    double line_s0 = 0.25;
    double line_s1 = 4.0;
};

inline std::vector<Vec2> sample_cycle(const Cycle& S, const CycleSampling& opt = {}) {
    std::vector<Vec2> pts;
    if (S.is_line()) {
        const double nn = S.b * S.b + S.c * S.c;
        if (nn <= 0) return pts;
        const Vec2 foot(-S.d * S.b / nn, -S.d * S.c / nn);
        const Vec2 dir = Vec2(-S.c, S.b) / std::sqrt(nn);
        for (int k = 0; k < opt.samples; ++k) {
            const double s = opt.line_s0 + (opt.line_s1 - opt.line_s0) * k / (opt.samples - 1);
            pts.push_back(foot + s * dir);
        }
        return pts;
    }
    if (!(S.Q() > 0)) return pts;
    const Vec2 m = S.center();
    const double r = S.radius();
    for (int k = 0; k < opt.samples; ++k) {
        const double t = opt.phase + 2 * M_PI * k / opt.samples;
        pts.emplace_back(m.x() + r * std::cos(t), m.y() + r * std::sin(t));
    }
    return pts;
}

} // namespace lagmin
