#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagmin/biharmonic.hpp"
#include "lagmin/isotropic.hpp"

namespace lagmin {

constexpr double kImmersionTol = 1e-10;

struct SurfacePoint {
    Vec3 r, ru, rv, ruu, ruv, rvv;
};

inline SurfacePoint to_surface_point(const std::array<Taylor2<2>, 3>& t) {
    SurfacePoint p;
    for (int i = 0; i < 3; ++i) {
        p.r[i] = t[i].c[0];
        p.ru[i] = t[i].partial(1, 0);
        p.rv[i] = t[i].partial(0, 1);
        p.ruu[i] = t[i].partial(2, 0);
        p.ruv[i] = t[i].partial(1, 1);
        p.rvv[i] = t[i].partial(0, 2);
    }
    return p;
}

class SurfaceNode {
public:
    virtual ~SurfaceNode() = default;
    virtual SurfacePoint eval(double u, double v) const = 0;
    virtual Vec3 point(double u, double v) const { return eval(u, v).r; }
    virtual double singular_distance(double, double) const { return kInf; }
    virtual std::vector<double> cut_angles() const { return {}; }
};

// R^alpha (a1 r1 + a2 r2 + a3 r3^theta) + shift
struct RuledConv {
    double a1 = 0, a2 = 0, a3 = 0, theta = 0;
    double alpha = 0;
    Vec3 shift = Vec3::Zero();
};

class ParamSurface {
public:
    ParamSurface(std::shared_ptr<const SurfaceNode> n, std::string provenance, bool gauss, bool immersed = true)
        : node_(std::move(n)), provenance_(std::move(provenance)), gauss_(gauss), immersed_(immersed) {}

    const std::string& provenance() const { return provenance_; }
    bool gauss() const { return gauss_; }
    bool immersed() const { return immersed_; }
    double guard() const { return guard_; }

    const std::optional<ScalarField>& field() const { return field_; }
    const std::optional<RuledConv>& ruled() const { return ruled_; }
    const std::vector<std::pair<double, std::string>>& terms() const { return terms_; }

    ParamSurface with_field(ScalarField F) const { auto s = *this; s.field_ = std::move(F); return s; }
    ParamSurface with_ruled(RuledConv r) const { auto s = *this; s.ruled_ = r; return s; }
    ParamSurface with_terms(std::vector<std::pair<double, std::string>> t) const { auto s = *this; s.terms_ = std::move(t); return s; }
    ParamSurface with_guard(double g) const { auto s = *this; s.guard_ = g; return s; }
    ParamSurface with_provenance(std::string p) const { auto s = *this; s.provenance_ = std::move(p); return s; }

    double singular_distance(double u, double v) const { return node_->singular_distance(u, v); }
    bool in_domain(double u, double v) const { return singular_distance(u, v) >= guard_; }
    std::vector<double> cut_angles() const { return node_->cut_angles(); }
    bool crosses_cut(const Vec2& p, const Vec2& q) const {
        for (double a : cut_angles()) {
            const Vec2 P = rotate2(p, -a), Q = rotate2(q, -a);
            if ((P.y() > 0) == (Q.y() > 0)) continue;
            const double t = P.y() / (P.y() - Q.y());
            if (P.x() + t * (Q.x() - P.x()) >= 0) return true;
        }
        return false;
    }

    SurfacePoint eval(double u, double v) const {
        check(u, v);
        return node_->eval(u, v);
    }
    Vec3 point(double u, double v) const {
        check(u, v);
        return node_->point(u, v);
    }

    // unit normal; Gauss-coordinate surfaces are oriented so that n points along inv_stereo(u,v)
    Vec3 normal(const SurfacePoint& p, double u, double v) const {
        Vec3 n = p.ru.cross(p.rv);
        const double len = n.norm();
        if (!(len > kImmersionTol)) throw Error(ErrorKind::NonImmersed, "|r_u x r_v| <= 1e-10");
        n /= len;
        if (gauss_ && n.dot(inv_stereo(u, v)) < 0) n = -n;
        return n;
    }
    Vec3 normal(double u, double v) const { return normal(eval(u, v), u, v); }

    const SurfaceNode& node() const { return *node_; }
    std::shared_ptr<const SurfaceNode> node_ptr() const { return node_; }

private:
    void check(double u, double v) const {
        if (!(singular_distance(u, v) >= guard_))
            throw Error(ErrorKind::SingularPoint, "(" + std::to_string(u) + ", " + std::to_string(v) + ") inside guard of " + provenance_);
    }

    std::shared_ptr<const SurfaceNode> node_;
    std::string provenance_;
    bool gauss_;
    bool immersed_;
    double guard_ = kDefaultGuard;
    std::optional<ScalarField> field_;
    std::optional<RuledConv> ruled_;
    std::vector<std::pair<double, std::string>> terms_;
};

// r(x,y) from F and its gradient
template <class T>
std::array<T, 3> reconstruct_formula(const T& x, const T& y, const T& F, const T& Fx, const T& Fy) {
    const T xx = x * x, yy = y * y, xy = x * y;
    const T q = xx + yy + 1.0;
    return {((xx - yy - 1.0) * Fx + 2.0 * xy * Fy - 2.0 * x * F) / q,
            ((yy - xx - 1.0) * Fy + 2.0 * xy * Fx - 2.0 * y * F) / q,
            (2.0 * x * Fx + 2.0 * y * Fy - 2.0 * F) / q};
}

class FieldSurfaceNode : public SurfaceNode {
public:
    explicit FieldSurfaceNode(ScalarField F) : F_(std::move(F)) {}
    SurfacePoint eval(double u, double v) const override {
        const Taylor2<3> f = F_.taylor<3>(u, v);
        const Taylor2<2> x = Taylor2<2>::var_x(u), y = Taylor2<2>::var_y(v);
        return to_surface_point(reconstruct_formula(x, y, truncate<2>(f), derivative_x(f), derivative_y(f)));
    }
    Vec3 point(double u, double v) const override {
        const Taylor2<1> f = F_.taylor<1>(u, v);
        const auto r = reconstruct_formula(u, v, f.c[0], f.partial(1, 0), f.partial(0, 1));
        return {r[0], r[1], r[2]};
    }
    double singular_distance(double u, double v) const override { return F_.singular_distance(u, v); }
    std::vector<double> cut_angles() const override { return F_.cut_angles(); }

private:
    ScalarField F_;
};

inline ParamSurface reconstruct_surface(const ScalarField& F, const std::string& provenance = "reconstructed") {
    return ParamSurface(std::make_shared<FieldSurfaceNode>(F), provenance, true).with_field(F).with_guard(F.guard());
}

inline IsoPoint isotropic_image(const ParamSurface& S, double u, double v) {
    const SurfacePoint p = S.eval(u, v);
    const Vec3 n = S.normal(p, u, v);
    if (n.z() + 1 <= kIdealTol) throw Error(ErrorKind::IdealImage, "tangent plane normal is (0,0,-1)");
    return plane_to_ipoint({n, -n.dot(p.r)});
}

// surface from a closed-form map over Taylor polynomials
class FunctionSurfaceNode : public SurfaceNode {
public:
    using Map = std::function<std::array<Taylor2<2>, 3>(const Taylor2<2>&, const Taylor2<2>&)>;
    explicit FunctionSurfaceNode(Map f) : f_(std::move(f)) {}
    SurfacePoint eval(double u, double v) const override {
        return to_surface_point(f_(Taylor2<2>::var_x(u), Taylor2<2>::var_y(v)));
    }

private:
    Map f_;
};

inline ParamSurface make_function_surface(FunctionSurfaceNode::Map f, const std::string& provenance, bool gauss = false) {
    return ParamSurface(std::make_shared<FunctionSurfaceNode>(std::move(f)), provenance, gauss);
}

} // namespace lagmin
