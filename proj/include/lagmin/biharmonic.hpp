#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lagmin/cycle.hpp"
#include "lagmin/error.hpp"
#include "lagmin/isotropic.hpp"
#include "lagmin/taylor.hpp"

namespace lagmin {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultGuard = 1e-6;

// value and all partials up to total order 4, one slot per multi-index
struct Jet4 {
    Taylor2<4> t;
    double value() const { return t.c[0]; }
    double partial(int i, int j) const { return t.partial(i, j); }
    double fx() const { return partial(1, 0); }
    double fy() const { return partial(0, 1); }
};

class FieldNode {
public:
    virtual ~FieldNode() = default;
    virtual Taylor2<0> eval0(const Taylor2<0>& x, const Taylor2<0>& y, int k) const = 0;
    virtual Taylor2<1> eval1(const Taylor2<1>& x, const Taylor2<1>& y, int k) const = 0;
    virtual Taylor2<2> eval2(const Taylor2<2>& x, const Taylor2<2>& y, int k) const = 0;
    virtual Taylor2<3> eval3(const Taylor2<3>& x, const Taylor2<3>& y, int k) const = 0;
    virtual Taylor2<4> eval4(const Taylor2<4>& x, const Taylor2<4>& y, int k) const = 0;
    virtual double singular_distance(double, double) const { return kInf; }
    // polar angles of rays from the origin along which an Arctan term jumps
    virtual std::vector<double> cut_angles() const { return {}; }
    virtual std::string family() const = 0;
};

template <int N>
Taylor2<N> field_eval(const FieldNode& n, const Taylor2<N>& x, const Taylor2<N>& y, int k) {
    if constexpr (N == 0) return n.eval0(x, y, k);
    else if constexpr (N == 1) return n.eval1(x, y, k);
    else if constexpr (N == 2) return n.eval2(x, y, k);
    else if constexpr (N == 3) return n.eval3(x, y, k);
    else return n.eval4(x, y, k);
}

template <class D>
class FieldImpl : public FieldNode {
public:
    Taylor2<0> eval0(const Taylor2<0>& x, const Taylor2<0>& y, int k) const override { return self().template ev<0>(x, y, k); }
    Taylor2<1> eval1(const Taylor2<1>& x, const Taylor2<1>& y, int k) const override { return self().template ev<1>(x, y, k); }
    Taylor2<2> eval2(const Taylor2<2>& x, const Taylor2<2>& y, int k) const override { return self().template ev<2>(x, y, k); }
    Taylor2<3> eval3(const Taylor2<3>& x, const Taylor2<3>& y, int k) const override { return self().template ev<3>(x, y, k); }
    Taylor2<4> eval4(const Taylor2<4>& x, const Taylor2<4>& y, int k) const override { return self().template ev<4>(x, y, k); }

private:
    const D& self() const { return static_cast<const D&>(*this); }
};

// multi-valued Arctan(y/x): atan2 branch plus k*pi
template <int N>
Taylor2<N> arctan_yx(const Taylor2<N>& x, const Taylor2<N>& y, int k) {
    Taylor2<N> a = arg(x, y);
    a.c[0] += k * M_PI;
    return a;
}

class ScalarField {
public:
    ScalarField();
    explicit ScalarField(std::shared_ptr<const FieldNode> n) : node_(std::move(n)) {}

    const FieldNode& node() const { return *node_; }
    std::shared_ptr<const FieldNode> node_ptr() const { return node_; }
    std::string family() const { return node_->family(); }

    int branch() const { return branch_; }
    ScalarField with_branch(int k) const {
        ScalarField f = *this;
        f.branch_ = k;
        return f;
    }
    double guard() const { return guard_; }
    ScalarField with_guard(double eps) const {
        ScalarField f = *this;
        f.guard_ = eps;
        return f;
    }

    double singular_distance(double x, double y) const { return node_->singular_distance(x, y); }
    bool in_domain(double x, double y) const { return singular_distance(x, y) >= guard_; }
    std::vector<double> cut_angles() const { return node_->cut_angles(); }

    // does the segment p-q cross an Arctan cut ray
    bool crosses_cut(const Vec2& p, const Vec2& q) const {
        for (double a : cut_angles()) {
            const Vec2 P = rotate2(p, -a), Q = rotate2(q, -a);
            if ((P.y() > 0) == (Q.y() > 0)) continue;
            const double t = P.y() / (P.y() - Q.y());
            if (P.x() + t * (Q.x() - P.x()) >= 0) return true;
        }
        return false;
    }

    template <int N>
    Taylor2<N> taylor(double x, double y) const {
        check(x, y);
        return field_eval<N>(*node_, Taylor2<N>::var_x(x), Taylor2<N>::var_y(y), branch_);
    }

    Jet4 eval_jet(double x, double y) const { return {taylor<4>(x, y)}; }
    double value(double x, double y) const { return taylor<0>(x, y).c[0]; }
    double operator()(double x, double y) const { return value(x, y); }

private:
    void check(double x, double y) const {
        if (!(singular_distance(x, y) >= guard_))
            throw Error(ErrorKind::SingularPoint, "(" + std::to_string(x) + ", " + std::to_string(y) + ") inside guard of " + family() + " field");
    }

    std::shared_ptr<const FieldNode> node_;
    int branch_ = 0;
    double guard_ = kDefaultGuard;
};

// ---- families ----

struct EllipticCoeffs {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    double b1 = 0, b2 = 0, b3 = 0;
    double c1 = 0, c2 = 0, c3 = 0;
    double d1 = 0, d2 = 0;
};

class EllipticNode : public FieldImpl<EllipticNode> {
public:
    explicit EllipticNode(const EllipticCoeffs& c) : k_(c) {
        has_a_ = c.a1 != 0 || c.a2 != 0 || c.a3 != 0 || c.a4 != 0;
        has_b_ = c.b1 != 0 || c.b2 != 0 || c.b3 != 0;
    }
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int k) const {
        const Taylor2<N> xx = x * x, yy = y * y, xy = x * y, r2 = xx + yy;
        Taylor2<N> f = k_.c1 * yy + k_.c2 * xy + k_.c3 * xx + k_.d1 * x + k_.d2 * y;
        if (has_a_) f += (k_.a1 * r2 + k_.a2 * x + k_.a4 * y + k_.a3) * arctan_yx(x, y, k);
        if (has_b_) f += (k_.b1 * yy + k_.b2 * xy + k_.b3 * xx) / r2;
        return f;
    }
    double singular_distance(double x, double y) const override {
        return (has_a_ || has_b_) ? std::hypot(x, y) : kInf;
    }
    std::vector<double> cut_angles() const override {
        if (has_a_) return {M_PI};
        return {};
    }
    std::string family() const override { return "elliptic"; }
    const EllipticCoeffs& coeffs() const { return k_; }

private:
    EllipticCoeffs k_;
    bool has_a_, has_b_;
};

// a(r) cos(phi) + b(r) sin(phi) + c(r) with
// a = al1 r + al2 r ln r + al3 / r + al4 r^3, b likewise, c = g1 + g2 r^2 + g3 ln r + g4 r^2 ln r
struct HyperbolicCoeffs {
    std::array<double, 4> alpha{}, beta{}, gamma{};
};

class HyperbolicNode : public FieldImpl<HyperbolicNode> {
public:
    explicit HyperbolicNode(const HyperbolicCoeffs& c) : k_(c) {
        const auto& a = c.alpha;
        const auto& b = c.beta;
        const auto& g = c.gamma;
        singular_ = a[1] != 0 || a[2] != 0 || b[1] != 0 || b[2] != 0 || g[2] != 0 || g[3] != 0;
    }
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        const auto& a = k_.alpha;
        const auto& b = k_.beta;
        const auto& g = k_.gamma;
        const Taylor2<N> r2 = x * x + y * y;
        Taylor2<N> ax = a[0] + a[3] * r2, by = b[0] + b[3] * r2, c = g[0] + g[1] * r2;
        if (singular_) {
            const Taylor2<N> lr = 0.5 * log(r2);
            const Taylor2<N> inv = 1.0 / r2;
            ax += a[1] * lr + a[2] * inv;
            by += b[1] * lr + b[2] * inv;
            c += g[2] * lr + g[3] * r2 * lr;
        }
        return x * ax + y * by + c;
    }
    double singular_distance(double x, double y) const override { return singular_ ? std::hypot(x, y) : kInf; }
    std::string family() const override { return "hyperbolic"; }
    const HyperbolicCoeffs& coeffs() const { return k_; }

private:
    HyperbolicCoeffs k_;
    bool singular_;
};

// a(x) y^2 + b(x) y + c(x), a and b cubic, c cubic minus al2 x^4/3 + al3 x^5/5
struct ParabolicCoeffs {
    std::array<double, 4> alpha{}, beta{}, gamma{};
};

class ParabolicNode : public FieldImpl<ParabolicNode> {
public:
    explicit ParabolicNode(const ParabolicCoeffs& c) : k_(c) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        const auto& a = k_.alpha;
        const auto& b = k_.beta;
        const auto& g = k_.gamma;
        const Taylor2<N> A = ((a[3] * x + a[2]) * x + a[1]) * x + a[0];
        const Taylor2<N> B = ((b[3] * x + b[2]) * x + b[1]) * x + b[0];
        const Taylor2<N> C = (((((-a[3] / 5) * x - a[2] / 3) * x + g[3]) * x + g[2]) * x + g[1]) * x + g[0];
        return (A * y + B) * y + C;
    }
    std::string family() const override { return "parabolic"; }
    const ParabolicCoeffs& coeffs() const { return k_; }

private:
    ParabolicCoeffs k_;
};

struct ExceptionalCoeffs {
    double a = 0, b = 0, c = 0, d = 0;
    double A = 0, B = 0, C = 0, D = 0;
};

// A((x-a)^2+(y-b)^2) + (B X^2 + C XY + D Y^2)/(X^2+Y^2), X = x-c, Y = y-d
class ExceptionalNode : public FieldImpl<ExceptionalNode> {
public:
    explicit ExceptionalNode(const ExceptionalCoeffs& c) : k_(c) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        const Taylor2<N> u = x - k_.a, v = y - k_.b;
        Taylor2<N> f = k_.A * (u * u + v * v);
        if (rational()) {
            const Taylor2<N> X = x - k_.c, Y = y - k_.d;
            f += (k_.B * X * X + k_.C * X * Y + k_.D * Y * Y) / (X * X + Y * Y);
        }
        return f;
    }
    double singular_distance(double x, double y) const override {
        return rational() ? std::hypot(x - k_.c, y - k_.d) : kInf;
    }
    std::string family() const override { return "exceptional"; }
    const ExceptionalCoeffs& coeffs() const { return k_; }

private:
    bool rational() const { return k_.B != 0 || k_.C != 0 || k_.D != 0; }
    ExceptionalCoeffs k_;
};

// sqrt((x^2+y^2)^2 - x^2 + 1); linear on a one-parameter family of circles, not biharmonic
class RemarkNode : public FieldImpl<RemarkNode> {
public:
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        const Taylor2<N> xx = x * x, r2 = xx + y * y;
        return sqrt(r2 * r2 - xx + 1.0);
    }
    std::string family() const override { return "remark-counterexample"; }
};

struct Monomial {
    double coef = 1.0;
    int px = 0, py = 0;
};

class PolyNode : public FieldImpl<PolyNode> {
public:
    explicit PolyNode(std::vector<Monomial> m) : terms_(std::move(m)) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        Taylor2<N> f;
        for (const auto& t : terms_) {
            Taylor2<N> m(t.coef);
            for (int i = 0; i < t.px; ++i) m = m * x;
            for (int i = 0; i < t.py; ++i) m = m * y;
            f += m;
        }
        return f;
    }
    std::string family() const override { return "polynomial"; }
    const std::vector<Monomial>& terms() const { return terms_; }

private:
    std::vector<Monomial> terms_;
};

class SumNode : public FieldImpl<SumNode> {
public:
    explicit SumNode(std::vector<std::pair<double, ScalarField>> t) : terms_(std::move(t)) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int k) const {
        Taylor2<N> f;
        for (const auto& [a, F] : terms_) f += a * field_eval<N>(F.node(), x, y, k);
        return f;
    }
    double singular_distance(double x, double y) const override {
        double d = kInf;
        for (const auto& t : terms_) d = std::min(d, t.second.singular_distance(x, y));
        return d;
    }
    std::vector<double> cut_angles() const override {
        std::vector<double> out;
        for (const auto& t : terms_)
            for (double a : t.second.cut_angles()) out.push_back(a);
        return out;
    }
    std::string family() const override { return "custom-sum"; }
    const std::vector<std::pair<double, ScalarField>>& terms() const { return terms_; }

private:
    std::vector<std::pair<double, ScalarField>> terms_;
};

// G(x,y) = (x^2+y^2) F(x/(x^2+y^2), y/(x^2+y^2))
class KelvinNode : public FieldImpl<KelvinNode> {
public:
    explicit KelvinNode(ScalarField F) : F_(std::move(F)) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int k) const {
        const Taylor2<N> r2 = x * x + y * y;
        const Taylor2<N> inv = 1.0 / r2;
        return r2 * field_eval<N>(F_.node(), x * inv, y * inv, k);
    }
    double singular_distance(double x, double y) const override {
        const double r2 = x * x + y * y;
        if (r2 == 0) return 0;
        return std::min(std::sqrt(r2), r2 * F_.singular_distance(x / r2, y / r2));
    }
    std::vector<double> cut_angles() const override { return F_.cut_angles(); }
    std::string family() const override { return "kelvin(" + F_.family() + ")"; }

private:
    ScalarField F_;
};

// F(R^-theta (x,y))
class RotatedNode : public FieldImpl<RotatedNode> {
public:
    RotatedNode(ScalarField F, double theta) : F_(std::move(F)), th_(theta) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int k) const {
        const double c = std::cos(th_), s = std::sin(th_);
        return field_eval<N>(F_.node(), c * x + s * y, c * y - s * x, k);
    }
    double singular_distance(double x, double y) const override {
        const Vec2 p = rotate2(Vec2(x, y), -th_);
        return F_.singular_distance(p.x(), p.y());
    }
    std::vector<double> cut_angles() const override {
        auto a = F_.cut_angles();
        for (auto& v : a) v += th_;
        return a;
    }
    std::string family() const override { return F_.family(); }

private:
    ScalarField F_;
    double th_;
};

// amp (1 - s)^4 for s = |p - m|^2 / R^2 < 1, zero outside
class BumpNode : public FieldImpl<BumpNode> {
public:
    BumpNode(Vec2 m, double R, double amp) : m_(m), R_(R), amp_(amp) {}
    template <int N>
    Taylor2<N> ev(const Taylor2<N>& x, const Taylor2<N>& y, int) const {
        const Taylor2<N> u = x - m_.x(), v = y - m_.y();
        const Taylor2<N> w = 1.0 - (u * u + v * v) / (R_ * R_);
        if (!(w.c[0] > 0)) return Taylor2<N>();
        const Taylor2<N> w2 = w * w;
        return amp_ * (w2 * w2);
    }
    std::string family() const override { return "bump"; }

private:
    Vec2 m_;
    double R_, amp_;
};

class ZeroNode : public FieldImpl<ZeroNode> {
public:
    template <int N>
    Taylor2<N> ev(const Taylor2<N>&, const Taylor2<N>&, int) const { return Taylor2<N>(); }
    std::string family() const override { return "polynomial"; }
};

inline ScalarField::ScalarField() : node_(std::make_shared<ZeroNode>()) {}

inline ScalarField make_elliptic_field(const EllipticCoeffs& c) { return ScalarField(std::make_shared<EllipticNode>(c)); }

// (a1 r^2 + a2 x + a3) Arctan(y/x) + (b1 y^2 + b2 xy)/r^2 + c1 y^2 + c2 xy
inline ScalarField make_elliptic_reduced(double a1, double a2, double a3, double b1, double b2, double c1, double c2) {
    EllipticCoeffs k;
    k.a1 = a1, k.a2 = a2, k.a3 = a3, k.b1 = b1, k.b2 = b2, k.c1 = c1, k.c2 = c2;
    return make_elliptic_field(k);
}

inline ScalarField make_hyperbolic_field(const HyperbolicCoeffs& c) { return ScalarField(std::make_shared<HyperbolicNode>(c)); }

// (a1 r^2 + a2 x + a3) ln r^2 + (b1 y + b2 x)/r^2 + (c1 y + c2 x) r^2
inline ScalarField make_hyperbolic_reduced(double a1, double a2, double a3, double b1, double b2, double c1, double c2) {
    HyperbolicCoeffs k;
    k.gamma[3] = 2 * a1;
    k.alpha[1] = 2 * a2;
    k.gamma[2] = 2 * a3;
    k.beta[2] = b1;
    k.alpha[2] = b2;
    k.beta[3] = c1;
    k.alpha[3] = c2;
    return make_hyperbolic_field(k);
}

inline ScalarField make_parabolic_field(const ParabolicCoeffs& c) { return ScalarField(std::make_shared<ParabolicNode>(c)); }

// a1(5y^2-x^2)x^3 + a2(3y^2-x^2)x^2 + (b1 y^2 + b2 xy + b3 x^2)x + c1 y^2 + c2 xy
inline ScalarField make_parabolic_reduced(double a1, double a2, double b1, double b2, double b3, double c1, double c2) {
    ParabolicCoeffs k;
    k.alpha = {c1, b1, 3 * a2, 5 * a1};
    k.beta = {0, c2, b2, 0};
    k.gamma = {0, 0, 0, b3};
    return make_parabolic_field(k);
}

inline ScalarField make_exceptional_field(const ExceptionalCoeffs& c) { return ScalarField(std::make_shared<ExceptionalNode>(c)); }

inline ScalarField make_remark_counterexample() { return ScalarField(std::make_shared<RemarkNode>()); }

inline ScalarField make_poly_field(std::vector<Monomial> m) { return ScalarField(std::make_shared<PolyNode>(std::move(m))); }

inline ScalarField make_sphere_field(const IMSphere& s) {
    return make_poly_field({{0.5 * s.a, 2, 0}, {0.5 * s.a, 0, 2}, {s.b, 1, 0}, {s.c, 0, 1}, {s.d, 0, 0}});
}

inline ScalarField make_sum_field(std::vector<std::pair<double, ScalarField>> terms, int branch = 0) {
    return ScalarField(std::make_shared<SumNode>(std::move(terms))).with_branch(branch);
}

inline ScalarField operator+(const ScalarField& F, const ScalarField& G) {
    return make_sum_field({{1.0, F}, {1.0, G}}, F.branch()).with_guard(std::max(F.guard(), G.guard()));
}
inline ScalarField operator*(double a, const ScalarField& F) {
    return make_sum_field({{a, F}}, F.branch()).with_guard(F.guard());
}

inline ScalarField pushforward_inversion(const ScalarField& F) {
    return ScalarField(std::make_shared<KelvinNode>(F)).with_branch(F.branch()).with_guard(F.guard());
}

inline ScalarField rotate_field(const ScalarField& F, double theta) {
    return ScalarField(std::make_shared<RotatedNode>(F, theta)).with_branch(F.branch()).with_guard(F.guard());
}

inline ScalarField make_bump_field(const Vec2& center, double radius, double amplitude) {
    return ScalarField(std::make_shared<BumpNode>(center, radius, amplitude));
}

// ---- rotation of the full elliptic form to a4 = 0 ----

struct EllipticNormalization {
    EllipticCoeffs coeffs;
    double theta = 0.0;  // normalized field G satisfies G(x) = F(R^-theta x) up to Arctan branch
};

inline EllipticNormalization normalize_elliptic(const EllipticCoeffs& k) {
    const double th = (k.a2 == 0 && k.a4 == 0) ? 0.0 : -std::atan2(k.a4, k.a2);
    const Vec2 a = rotate2(Vec2(k.a2, k.a4), th);
    const Vec2 dd = rotate2(Vec2(k.d1, k.d2), th);
    Eigen::Matrix2d R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::Matrix2d Mb, Mc;
    Mb << k.b3, k.b2 / 2, k.b2 / 2, k.b1;
    Mc << k.c3, k.c2 / 2, k.c2 / 2, k.c1;
    const Eigen::Matrix2d Nb = R * Mb * R.transpose(), Nc = R * Mc * R.transpose();
    EllipticCoeffs o;
    o.a1 = k.a1, o.a2 = a.x(), o.a3 = k.a3, o.a4 = 0.0;
    o.b3 = Nb(0, 0) - th * k.a3, o.b2 = 2 * Nb(0, 1), o.b1 = Nb(1, 1) - th * k.a3;
    o.c3 = Nc(0, 0) - th * k.a1, o.c2 = 2 * Nc(0, 1), o.c1 = Nc(1, 1) - th * k.a1;
    o.d1 = dd.x() - th * a.x(), o.d2 = dd.y() - th * a.y();
    return {o, th};
}

// ---- table rows ----

// field whose reconstruction is the named building block
inline ScalarField table_field(const std::string& name, double theta = 0.0) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double r2 = std::sqrt(2.0);
    bool rotated = false;
    ScalarField F;
    if (name == "r1") {
        F = make_elliptic_field({.a1 = 1, .a3 = -1}), rotated = true;
    } else if (name == "r1~") {
        F = make_elliptic_field({.a1 = 1 / (2 * r2), .a3 = -1 / r2}), rotated = true;
    } else if (name == "r2") {
        // x Arctan(y/x) - y: the cycloid in Gauss coordinates
        F = make_elliptic_field({.a2 = 1, .d2 = -1}), rotated = true;
    } else if (name == "r3" || name == "r3~") {
        const double k = name == "r3" ? 0.5 : 1 / (4 * r2);
        const double m = name == "r3" ? 1.0 : 2.0;
        F = make_elliptic_field({.b1 = -m * k * s * s, .b2 = -2 * m * k * c * s, .b3 = -m * k * c * c,
                                 .c1 = k * s * s, .c2 = 2 * k * c * s, .c3 = k * c * c});
    } else if (name == "r4") {
        HyperbolicCoeffs h;
        h.gamma = {-1, -1, -1, 1};
        F = make_hyperbolic_field(h), rotated = true;
    } else if (name == "r4~") {
        HyperbolicCoeffs h;
        const double l2 = std::log(2.0);
        h.gamma = {(2 + l2) / (2 * r2) - r2, -(2 + l2) / (4 * r2), -1 / r2, 1 / (2 * r2)};
        F = make_hyperbolic_field(h), rotated = true;
    } else if (name == "r5") {
        HyperbolicCoeffs h;
        h.alpha = {-1, 2, 0, 1};
        F = make_hyperbolic_field(h), rotated = true;
    } else if (name == "r6" || name == "r6~") {
        HyperbolicCoeffs h;
        const std::array<double, 4> base = name == "r6" ? std::array<double, 4>{-2, 0, 1, 1}
                                                        : std::array<double, 4>{-1, 0, 1, 0.25};
        for (int i = 0; i < 4; ++i) h.alpha[i] = c * base[i], h.beta[i] = s * base[i];
        F = make_hyperbolic_field(h);
    } else if (name == "r7") {
        ParabolicCoeffs p;
        p.alpha[0] = s * s / 2, p.beta[1] = c * s, p.gamma[2] = c * c / 2;
        F = make_parabolic_field(p);
    } else if (name == "r8") {
        ParabolicCoeffs p;
        p.gamma[3] = 1;
        F = make_parabolic_field(p), rotated = true;
    } else if (name == "r9") {
        ParabolicCoeffs p;
        p.beta[2] = 1;
        F = make_parabolic_field(p), rotated = true;
    } else if (name == "r10") {
        ParabolicCoeffs p;
        p.alpha[2] = -1.5;
        F = make_parabolic_field(p), rotated = true;
    } else if (name == "r11") {
        ParabolicCoeffs p;
        p.alpha[3] = -5;
        F = make_parabolic_field(p), rotated = true;
    } else {
        throw Error(ErrorKind::UnknownName, "no table field for '" + name + "'");
    }
    if (rotated && theta != 0.0) F = rotate_field(F, theta);
    return F;
}

// ---- differential operators ----

inline double bilaplacian(const ScalarField& F, double x, double y) {
    const Taylor2<4> t = F.taylor<4>(x, y);
    return 24 * t.coeff(4, 0) + 8 * t.coeff(2, 2) + 24 * t.coeff(0, 4);
}

inline double laplacian(const ScalarField& F, double x, double y) {
    const Taylor2<2> t = F.taylor<2>(x, y);
    return 2 * (t.coeff(2, 0) + t.coeff(0, 2));
}

// 13-point stencil
inline double fd_bilaplacian(const ScalarField& F, double x, double y, double h) {
    if (!(F.singular_distance(x, y) > 2 * std::sqrt(2.0) * h + F.guard()))
        throw Error(ErrorKind::SingularPoint, "stencil box meets a singular locus");
    auto f = [&](double dx, double dy) { return F.value(x + dx * h, y + dy * h); };
    const double s = 20 * f(0, 0) - 8 * (f(1, 0) + f(-1, 0) + f(0, 1) + f(0, -1)) +
                     2 * (f(1, 1) + f(1, -1) + f(-1, 1) + f(-1, -1)) + f(2, 0) + f(-2, 0) + f(0, 2) + f(0, -2);
    return s / (h * h * h * h);
}

// ---- restriction fits ----

struct RestrictionFit {
    double rms = 0.0;
    double max_abs = 0.0;
    int samples = 0;
};

inline RestrictionFit restrict_fit(const ScalarField& F, const Cycle& S, int degree, const CycleSampling& opt = {}) {
    const bool line = S.is_line();
    std::vector<Vec2> pts;
    for (const Vec2& p : sample_cycle(S, opt))
        if (F.in_domain(p.x(), p.y())) pts.push_back(p);
    if (pts.size() < 20) throw Error(ErrorKind::EmptyIntersection, "fewer than 20 usable samples on cycle");
    const int ncol = line ? degree + 1 : (degree == 1 ? 3 : 5);
    Eigen::MatrixXd A(pts.size(), ncol);
    Eigen::VectorXd b(pts.size());
    Vec2 foot(0, 0), dir(0, 0), m(0, 0);
    if (line) {
        const double nn = S.b * S.b + S.c * S.c;
        foot = Vec2(-S.d * S.b / nn, -S.d * S.c / nn);
        dir = Vec2(-S.c, S.b) / std::sqrt(nn);
    } else {
        m = S.center();
    }
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec2& p = pts[i];
        b[i] = F.value(p.x(), p.y());
        if (line) {
            const double s = (p - foot).dot(dir);
            double q = 1.0;
            for (int j = 0; j < ncol; ++j, q *= s) A(i, j) = q;
        } else if (degree == 1) {
            A.row(i) << 1.0, p.x(), p.y();
        } else {
            const double t = std::atan2(p.y() - m.y(), p.x() - m.x());
            A.row(i) << 1.0, std::cos(t), std::sin(t), std::cos(2 * t), std::sin(2 * t);
        }
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd r = A * coef - b;
    RestrictionFit out;
    out.samples = static_cast<int>(pts.size());
    out.rms = std::sqrt(r.squaredNorm() / pts.size());
    out.max_abs = r.cwiseAbs().maxCoeff();
    return out;
}

inline double restrict_to_circle(const ScalarField& F, const Cycle& S, int degree, const CycleSampling& opt = {}) {
    return restrict_fit(F, S, degree, opt).rms;
}

} // namespace lagmin
