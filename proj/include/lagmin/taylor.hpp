#pragma once

// Truncated bivariate Taylor polynomials in (dx, dy) around a base point.
// Coefficient (i,j) stores d^{i+j}F/dx^i dy^j / (i! j!), so every mixed
// partial has exactly one slot.

#include <array>
#include <cmath>

namespace lagmin {

template <int N>
class Taylor2 {
public:
    static constexpr int order = N;
    static constexpr int size = (N + 1) * (N + 2) / 2;
    static constexpr int idx(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }

    std::array<double, size> c{};

    Taylor2() = default;
    Taylor2(double v) { c[0] = v; }

    static Taylor2 var_x(double x0) {
        Taylor2 t(x0);
        if constexpr (N >= 1) t.c[idx(1, 0)] = 1.0;
        return t;
    }
    static Taylor2 var_y(double y0) {
        Taylor2 t(y0);
        if constexpr (N >= 1) t.c[idx(0, 1)] = 1.0;
        return t;
    }

    double value() const { return c[0]; }
    double coeff(int i, int j) const { return c[idx(i, j)]; }
    double partial(int i, int j) const {
        double f = 1.0;
        for (int k = 2; k <= i; ++k) f *= k;
        for (int k = 2; k <= j; ++k) f *= k;
        return c[idx(i, j)] * f;
    }

    Taylor2& operator+=(const Taylor2& o) {
        for (int k = 0; k < size; ++k) c[k] += o.c[k];
        return *this;
    }
    Taylor2& operator-=(const Taylor2& o) {
        for (int k = 0; k < size; ++k) c[k] -= o.c[k];
        return *this;
    }
    Taylor2& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    Taylor2& operator/=(double s) {
        for (auto& v : c) v /= s;
        return *this;
    }
    Taylor2& operator+=(double s) {
        c[0] += s;
        return *this;
    }
    Taylor2& operator-=(double s) {
        c[0] -= s;
        return *this;
    }
    Taylor2& operator*=(const Taylor2& o) { return *this = *this * o; }
    Taylor2& operator/=(const Taylor2& o) { return *this = *this / o; }

    Taylor2 operator-() const {
        Taylor2 r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }

    friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
    friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
    friend Taylor2 operator+(Taylor2 a, double b) { return a += b; }
    friend Taylor2 operator+(double b, Taylor2 a) { return a += b; }
    friend Taylor2 operator-(Taylor2 a, double b) { return a -= b; }
    friend Taylor2 operator-(double b, const Taylor2& a) { return (-a) += b; }
    friend Taylor2 operator*(Taylor2 a, double b) { return a *= b; }
    friend Taylor2 operator*(double b, Taylor2 a) { return a *= b; }
    friend Taylor2 operator/(Taylor2 a, double b) { return a /= b; }

    friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
        Taylor2 r;
        for (int d1 = 0; d1 <= N; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const double av = a.c[idx(d1 - j1, j1)];
                if (av == 0.0) continue;
                for (int d2 = 0; d1 + d2 <= N; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2)
                        r.c[idx(d1 - j1 + d2 - j2, j1 + j2)] += av * b.c[idx(d2 - j2, j2)];
            }
        return r;
    }

    friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * recip(b); }
    friend Taylor2 operator/(double a, const Taylor2& b) { return recip(b) * a; }

    // f(a) given g[k] = f^(k)(a0)/k!, k = 0..N
    static Taylor2 compose(const Taylor2& a, const std::array<double, N + 1>& g) {
        Taylor2 t = a;
        t.c[0] = 0.0;
        Taylor2 r(g[N]);
        for (int k = N - 1; k >= 0; --k) {
            r = r * t;
            r.c[0] += g[k];
        }
        return r;
    }

    static Taylor2 recip(const Taylor2& a) {
        std::array<double, N + 1> g{};
        const double inv = 1.0 / a.c[0];
        double p = inv;
        for (int k = 0; k <= N; ++k) {
            g[k] = p;
            p *= -inv;
        }
        return compose(a, g);
    }
};

template <int N>
Taylor2<N - 1> derivative_x(const Taylor2<N>& a) {
    Taylor2<N - 1> r;
    for (int d = 0; d < N; ++d)
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            r.c[Taylor2<N - 1>::idx(i, j)] = (i + 1) * a.c[Taylor2<N>::idx(i + 1, j)];
        }
    return r;
}

template <int N>
Taylor2<N - 1> derivative_y(const Taylor2<N>& a) {
    Taylor2<N - 1> r;
    for (int d = 0; d < N; ++d)
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            r.c[Taylor2<N - 1>::idx(i, j)] = (j + 1) * a.c[Taylor2<N>::idx(i, j + 1)];
        }
    return r;
}

template <int M, int N>
Taylor2<M> truncate(const Taylor2<N>& a) {
    static_assert(M <= N);
    Taylor2<M> r;
    for (int k = 0; k < Taylor2<M>::size; ++k) r.c[k] = a.c[k];
    return r;
}

template <int N>
Taylor2<N> pow(const Taylor2<N>& a, double p) {
    std::array<double, N + 1> g{};
    const double a0 = a.c[0];
    double coef = 1.0;
    for (int k = 0; k <= N; ++k) {
        g[k] = coef * std::pow(a0, p - k);
        coef *= (p - k) / (k + 1);
    }
    return Taylor2<N>::compose(a, g);
}

template <int N>
Taylor2<N> sqrt(const Taylor2<N>& a) { return pow(a, 0.5); }

template <int N>
Taylor2<N> log(const Taylor2<N>& a) {
    std::array<double, N + 1> g{};
    const double a0 = a.c[0];
    g[0] = std::log(a0);
    double p = 1.0 / a0;
    for (int k = 1; k <= N; ++k) {
        g[k] = ((k % 2) ? 1.0 : -1.0) * p / k;
        p /= a0;
    }
    return Taylor2<N>::compose(a, g);
}

template <int N>
Taylor2<N> exp(const Taylor2<N>& a) {
    std::array<double, N + 1> g{};
    double e = std::exp(a.c[0]), f = 1.0;
    for (int k = 0; k <= N; ++k) {
        g[k] = e / f;
        f *= (k + 1);
    }
    return Taylor2<N>::compose(a, g);
}

template <int N>
Taylor2<N> sin(const Taylor2<N>& a) {
    std::array<double, N + 1> g{};
    const double s = std::sin(a.c[0]), co = std::cos(a.c[0]);
    const double cyc[4] = {s, co, -s, -co};
    double f = 1.0;
    for (int k = 0; k <= N; ++k) {
        g[k] = cyc[k % 4] / f;
        f *= (k + 1);
    }
    return Taylor2<N>::compose(a, g);
}

template <int N>
Taylor2<N> cos(const Taylor2<N>& a) {
    std::array<double, N + 1> g{};
    const double s = std::sin(a.c[0]), co = std::cos(a.c[0]);
    const double cyc[4] = {co, -s, -co, s};
    double f = 1.0;
    for (int k = 0; k <= N; ++k) {
        g[k] = cyc[k % 4] / f;
        f *= (k + 1);
    }
    return Taylor2<N>::compose(a, g);
}

// polar angle of (x, y); value atan2(y0, x0), cut on the negative x-axis
inline double arg(double x, double y) { return std::atan2(y, x); }

template <int N>
Taylor2<N> arg(const Taylor2<N>& x, const Taylor2<N>& y) {
    const double x0 = x.c[0], y0 = y.c[0];
    // atan of w = (x0 y - y0 x)/(x0 x + y0 y), which vanishes at the base point
    const Taylor2<N> w = (x0 * y - y0 * x) / (x0 * x + y0 * y);
    std::array<double, N + 1> g{};
    for (int k = 1; k <= N; k += 2) g[k] = ((k / 2) % 2 ? -1.0 : 1.0) / k;
    Taylor2<N> r = Taylor2<N>::compose(w, g);
    r.c[0] = std::atan2(y0, x0);
    return r;
}

inline double value_of(double v) { return v; }
template <int N>
double value_of(const Taylor2<N>& t) { return t.c[0]; }

} // namespace lagmin
