#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lagmin/reconstruct.hpp"

namespace lagmin {

template <class T>
T arctan_of(const T& x, const T& y, int k) {
    if constexpr (std::is_same_v<T, double>) return std::atan2(y, x) + k * M_PI;
    else return arctan_yx(x, y, k);
}

template <class T>
T log_of(const T& a) {
    using std::log;
    return log(a);
}

// building blocks in Gauss coordinates: stereo(normal(u,v)) = (u,v)
template <class T>
std::array<T, 3> block_eval(int id, const T& u, const T& v, int k) {
    const T uu = u * u, vv = v * v, uv = u * v;
    const T r2 = uu + vv;
    const T zero(0.0);
    switch (id) {
    case 1: {  // helicoid, eq1 with (u,v) swapped
        const T ir = 1.0 / r2;
        return {v - v * ir, u * ir - u, 2.0 * arctan_of(u, v, k)};
    }
    case 2: {  // cycloid
        const T ir = 1.0 / r2;
        return {uv * ir - arctan_of(u, v, k), vv * ir, zero};
    }
    case 3: {  // Pluecker conoid
        const T ir = 1.0 / r2;
        const T f = uv * ir;
        return {f * (v * ir - v), f * (u - u * ir), uu * ir};
    }
    case 4: {  // catenoid
        const T ir = 1.0 / r2;
        return {u + u * ir, v + v * ir, log_of(r2)};
    }
    case 5: {
        const T w = 1.0 - 1.0 / r2;
        return {(uu - vv) * w - log_of(r2), 2.0 * uv * w, 4.0 * u};
    }
    case 6: {
        const T w = 1.0 - 1.0 / r2;
        const T w2 = w * w;
        return {(uu - vv) * w2, 2.0 * uv * w2, 4.0 * u * w};
    }
    default: break;
    }
    const T ip = 1.0 / (1.0 + r2);
    switch (id) {
    case 7:  // parabolic horn cyclide
        return {(-1.0 * u - u * vv) * ip, uu * v * ip, uu * ip};
    case 8: {
        const T u3 = uu * u;
        return {(uu * uu - 3.0 * uu * vv - 3.0 * uu) * ip, 4.0 * u3 * v * ip, 4.0 * u3 * ip};
    }
    case 9:
        return {2.0 * uv * (uu - vv - 1.0) * ip, uu * (3.0 * vv - uu - 1.0) * ip, 4.0 * uu * v * ip};
    case 10: {
        const T u3 = uu * u;
        return {(u3 * uu - 2.0 * u3 * (1.0 + 4.0 * vv) + 3.0 * u * (vv + vv * vv)) * ip,
                3.0 * uu * v * (1.0 + 2.0 * uu - 2.0 * vv) * ip, 3.0 * uu * (uu - 3.0 * vv) * ip};
    }
    case 11: {
        const T u3 = uu * u, u4 = uu * uu;
        return {(3.0 * u4 * uu - 5.0 * u4 * (1.0 + 6.0 * vv) + 15.0 * uu * (vv + vv * vv)) * ip,
                2.0 * u3 * v * (5.0 + 9.0 * uu - 15.0 * vv) * ip, 8.0 * u3 * (uu - 5.0 * vv) * ip};
    }
    default: break;
    }
    throw Error(ErrorKind::UnknownName, "block id " + std::to_string(id));
}

// helicoid and cycloid in the (u,v) roles of the original formulas
inline Vec3 helicoid_eq(double u, double v) {
    const double r2 = u * u + v * v;
    return {u - u / r2, v / r2 - v, 2 * std::atan2(u, v)};
}
inline Vec3 cycloid_eq(double u, double v) {
    const double r2 = u * u + v * v;
    return {std::atan2(u, v) - u * v / r2, u * u / r2, 0.0};
}

// r^theta(u,v) = R^theta r(R^-theta (u,v))
class BlockNode : public SurfaceNode {
public:
    BlockNode(int id, double theta, int branch) : id_(id), th_(theta), k_(branch) {}

    SurfacePoint eval(double u, double v) const override {
        using T = Taylor2<2>;
        const double c = std::cos(th_), s = std::sin(th_);
        const T U = T::var_x(u), V = T::var_y(v);
        auto r = block_eval<T>(id_, c * U + s * V, c * V - s * U, k_);
        const T x = c * r[0] - s * r[1], y = s * r[0] + c * r[1];
        r[0] = x, r[1] = y;
        return to_surface_point(r);
    }
    Vec3 point(double u, double v) const override {
        const double c = std::cos(th_), s = std::sin(th_);
        const auto r = block_eval<double>(id_, c * u + s * v, c * v - s * u, k_);
        return rotate_z(Vec3(r[0], r[1], r[2]), th_);
    }
    double singular_distance(double u, double v) const override { return id_ <= 6 ? std::hypot(u, v) : kInf; }
    std::vector<double> cut_angles() const override {
        if (id_ <= 2) return {M_PI + th_};
        return {};
    }

private:
    int id_;
    double th_;
    int k_;
};

inline std::string block_label(const std::string& name, double theta) {
    if (theta == 0.0) return name;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s@theta=%.17g", name.c_str(), theta);
    return buf;
}

inline ParamSurface building_block(const std::string& name, double theta = 0.0, int branch = 0) {
    const ScalarField F = table_field(name, theta).with_branch(branch);
    ParamSurface S = [&] {
        if (!name.empty() && name.back() == '~') return reconstruct_surface(F, block_label(name, theta));
        int id = 0;
        if (name.size() >= 2 && name[0] == 'r') id = std::atoi(name.c_str() + 1);
        if (id < 1 || id > 11) throw Error(ErrorKind::UnknownName, "unknown building block '" + name + "'");
        return ParamSurface(std::make_shared<BlockNode>(id, theta, branch), block_label(name, theta), true, id != 2)
            .with_field(F);
    }();
    if (name == "r1" && theta == 0.0) S = S.with_ruled({1, 0, 0, 0});
    if (name == "r2" && theta == 0.0) S = S.with_ruled({0, 1, 0, 0});
    if (name == "r3") S = S.with_ruled({0, 0, 1, theta});
    return S.with_terms({{1.0, block_label(name, theta)}});
}

class ConvNode : public SurfaceNode {
public:
    explicit ConvNode(std::vector<std::pair<double, ParamSurface>> t) : terms_(std::move(t)) {}
    SurfacePoint eval(double u, double v) const override {
        SurfacePoint p{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
        for (const auto& [a, S] : terms_) {
            const SurfacePoint q = S.node().eval(u, v);
            p.r += a * q.r, p.ru += a * q.ru, p.rv += a * q.rv;
            p.ruu += a * q.ruu, p.ruv += a * q.ruv, p.rvv += a * q.rvv;
        }
        return p;
    }
    Vec3 point(double u, double v) const override {
        Vec3 r = Vec3::Zero();
        for (const auto& [a, S] : terms_) r += a * S.node().point(u, v);
        return r;
    }
    double singular_distance(double u, double v) const override {
        double d = kInf;
        for (const auto& t : terms_) d = std::min(d, t.second.singular_distance(u, v));
        return d;
    }
    std::vector<double> cut_angles() const override {
        std::vector<double> out;
        for (const auto& t : terms_)
            for (double a : t.second.cut_angles()) out.push_back(a);
        return out;
    }

private:
    std::vector<std::pair<double, ParamSurface>> terms_;
};

// pointwise sum in Gauss coordinates
inline ParamSurface convolve(const std::vector<std::pair<double, ParamSurface>>& terms) {
    if (terms.empty()) throw Error(ErrorKind::DomainMismatch, "empty convolution");
    std::string prov = "conv(";
    std::vector<std::pair<double, std::string>> labels;
    std::vector<std::pair<double, ScalarField>> fields;
    bool all_fields = true;
    std::optional<RuledConv> ruled = RuledConv{};
    bool have_r3 = false;
    double guard = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& [a, S] = terms[i];
        if (!S.gauss()) throw Error(ErrorKind::DomainMismatch, "term '" + S.provenance() + "' is not in Gauss coordinates");
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s%.17g*", i ? ", " : "", a);
        prov += buf + S.provenance();
        for (const auto& l : S.terms()) labels.emplace_back(a * l.first, l.second);
        if (S.field()) fields.emplace_back(a, *S.field());
        else all_fields = false;
        guard = std::max(guard, S.guard());
        if (ruled && S.ruled()) {
            const RuledConv& r = *S.ruled();
            if (r.a3 != 0) {
                if (have_r3 && r.theta != ruled->theta) ruled.reset();
                else have_r3 = true, ruled->theta = r.theta;
            }
            if (ruled) ruled->a1 += a * r.a1, ruled->a2 += a * r.a2, ruled->a3 += a * r.a3;
        } else {
            ruled.reset();
        }
    }
    prov += ")";
    bool immersed = false;
    for (const auto& t : terms) immersed = immersed || (t.second.immersed() && t.first != 0);
    ParamSurface out(std::make_shared<ConvNode>(terms), prov, true, immersed);
    out = out.with_terms(labels).with_guard(guard);
    if (all_fields) out = out.with_field(make_sum_field(fields, terms.front().second.field()->branch()).with_guard(guard));
    if (ruled) out = out.with_ruled(*ruled);
    return out;
}

// ---- rulings ----

// Lines a1 R1(phi) + a2 R2(phi) + a3 R^theta R3(phi + theta), moved by R^alpha and shift.
// Ruling phi meets the Gauss-plane ray t (cos phi, -sin phi), t > 0.
struct RulingFamily {
    double a1 = 0, a2 = 0, a3 = 0, theta = 0;
    double alpha = 0;
    Vec3 shift = Vec3::Zero();

    Vec3 base(double phi) const {
        const double p = phi + alpha;
        const Vec3 b(a2 * p, a2, -2 * a1 * p + a3 * 0.5 * (std::cos(2 * (p + theta)) + 1));
        return rotate_z(b, alpha) + shift;
    }
    Vec3 dir(double phi) const { return {std::sin(phi), std::cos(phi), 0.0}; }
    Vec3 point(double phi, double lambda) const { return base(phi) + lambda * dir(phi); }
    Line3 line(double phi) const { return {base(phi), dir(phi)}; }
};

inline RulingFamily rulings_of_convolution(double a1, double a2, double a3, double theta, bool allow_degenerate = false) {
    if (a1 == 0 && a3 == 0 && !allow_degenerate)
        throw Error(ErrorKind::DegenerateFamily, "a1 = a3 = 0: the convolution is not immersed");
    return {a1, a2, a3, theta};
}

inline RulingFamily rulings_of_convolution(const RuledConv& c, bool allow_degenerate = false) {
    RulingFamily f = rulings_of_convolution(c.a1, c.a2, c.a3, c.theta, allow_degenerate);
    f.alpha = c.alpha;
    f.shift = c.shift;
    return f;
}

// kinematic forms of the three elliptic blocks
inline Vec3 kinematic_R1(double phi, double lambda) { return Vec3(0, 0, -2 * phi) + lambda * Vec3(std::sin(phi), std::cos(phi), 0); }
inline Vec3 kinematic_R2(double phi, double lambda) { return Vec3(phi, 1, 0) + lambda * Vec3(std::sin(phi), std::cos(phi), 0); }
inline Vec3 kinematic_R3(double phi, double lambda) {
    return Vec3(0, 0, 0.5 * (std::cos(2 * phi) + 1)) + lambda * Vec3(std::sin(phi), std::cos(phi), 0);
}

// R(phi,lambda) = (A phi, B phi, C phi + D cos 2phi) + lambda (sin phi, cos phi, 0)
struct RuledPatch {
    double A = 0, B = 0, C = 0, D = 0;

    bool degenerate() const { return C * C + D * D == 0; }
    Vec3 point(double phi, double lambda) const {
        return Vec3(A * phi, B * phi, C * phi + D * std::cos(2 * phi)) + lambda * Vec3(std::sin(phi), std::cos(phi), 0);
    }
    Line3 ruling(double phi) const { return {Vec3(A * phi, B * phi, C * phi + D * std::cos(2 * phi)), Vec3(std::sin(phi), std::cos(phi), 0)}; }

    // parametrized by (phi, lambda), not Gauss coordinates
    ParamSurface surface() const {
        const double a = A, b = B, c = C, d = D;
        auto f = [a, b, c, d](const Taylor2<2>& phi, const Taylor2<2>& lam) {
            const Taylor2<2> s = sin(phi), co = cos(phi), c2 = cos(2.0 * phi);
            return std::array<Taylor2<2>, 3>{a * phi + lam * s, b * phi + lam * co, c * phi + d * c2};
        };
        char buf[160];
        std::snprintf(buf, sizeof buf, "ruled(%.17g,%.17g,%.17g,%.17g)", A, B, C, D);
        return make_function_surface(f, buf, false);
    }
};

inline RuledPatch ruled_surface(double A, double B, double C, double D) { return {A, B, C, D}; }

// ruled patch as a rigid motion of a1 r1 + a2 r2 + a3 r3^-alpha
inline RulingFamily ruled_as_convolution(double A, double B, double C, double D) {
    RulingFamily f;
    f.alpha = std::atan2(B, A);
    f.a2 = std::hypot(A, B);
    f.a1 = -C / 2;
    f.a3 = 2 * D;
    f.theta = -f.alpha;
    const double al = f.alpha;
    f.shift = -Vec3(f.a2 * (al * std::cos(al) - std::sin(al)), f.a2 * (al * std::sin(al) + std::cos(al)), -2 * f.a1 * al + f.a3 / 2);
    return f;
}

class MovedNode : public SurfaceNode {
public:
    MovedNode(ParamSurface S, double alpha, Vec3 shift) : S_(std::move(S)), al_(alpha), t_(shift) {}
    SurfacePoint eval(double u, double v) const override {
        const Vec2 q = rotate2(Vec2(u, v), -al_);
        const double c = std::cos(al_), s = std::sin(al_);
        const SurfacePoint p = S_.node().eval(q.x(), q.y());
        // chain rule for (u,v) -> R^-alpha (u,v)
        const Vec3 ru = c * p.ru - s * p.rv, rv = s * p.ru + c * p.rv;
        const Vec3 ruu = c * c * p.ruu - 2 * c * s * p.ruv + s * s * p.rvv;
        const Vec3 ruv = c * s * (p.ruu - p.rvv) + (c * c - s * s) * p.ruv;
        const Vec3 rvv = s * s * p.ruu + 2 * c * s * p.ruv + c * c * p.rvv;
        return {rotate_z(p.r, al_) + t_, rotate_z(ru, al_), rotate_z(rv, al_), rotate_z(ruu, al_), rotate_z(ruv, al_), rotate_z(rvv, al_)};
    }
    Vec3 point(double u, double v) const override {
        const Vec2 q = rotate2(Vec2(u, v), -al_);
        return rotate_z(S_.node().point(q.x(), q.y()), al_) + t_;
    }
    double singular_distance(double u, double v) const override {
        const Vec2 q = rotate2(Vec2(u, v), -al_);
        return S_.singular_distance(q.x(), q.y());
    }
    std::vector<double> cut_angles() const override {
        auto a = S_.cut_angles();
        for (auto& x : a) x += al_;
        return a;
    }

private:
    ParamSurface S_;
    double al_;
    Vec3 t_;
};

// The ruled patch in Gauss coordinates, with its isotropic field attached.
// A translation by t adds -t1 x - t2 y + t3 (x^2+y^2-1)/2 to the field.
inline ParamSurface ruled_gauss_surface(double A, double B, double C, double D) {
    const RulingFamily f = ruled_as_convolution(A, B, C, D);
    const ParamSurface conv = convolve({{f.a1, building_block("r1")}, {f.a2, building_block("r2")}, {f.a3, building_block("r3", f.theta)}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "ruled(%.17g,%.17g,%.17g,%.17g)", A, B, C, D);
    ParamSurface S(std::make_shared<MovedNode>(conv, f.alpha, f.shift), buf, true, f.a1 != 0 || f.a3 != 0);
    const ScalarField lin = make_poly_field({{-f.shift.x(), 1, 0}, {-f.shift.y(), 0, 1}, {0.5 * f.shift.z(), 2, 0},
                                             {0.5 * f.shift.z(), 0, 2}, {-0.5 * f.shift.z(), 0, 0}});
    const ScalarField F = make_sum_field({{1.0, rotate_field(*conv.field(), f.alpha)}, {1.0, lin}});
    RuledConv rc{f.a1, f.a2, f.a3, f.theta, f.alpha, f.shift};
    return S.with_field(F).with_ruled(rc).with_terms(conv.terms()).with_guard(conv.guard());
}

// ---- cyclographic model ----

// a line in R^4 of (m1, m2, m3, R)
struct CycloLine {
    Vec4 base = Vec4::Zero();
    Vec4 dir = Vec4(0, 0, 1, 0);
    OrientedSphere sphere(double lambda) const {
        const Vec4 p = base + lambda * dir;
        return {p.head<3>(), p[3]};
    }
};

struct CycloFamily {
    std::string name;
    std::function<CycloLine(double)> at;
};

inline std::vector<OrientedSphere> cone_spheres(const CycloLine& L, const std::vector<double>& lambdas) {
    std::vector<OrientedSphere> out;
    for (double l : lambdas) out.push_back(L.sphere(l));
    return out;
}

// lambda = 0, 1, ..., count-1
inline std::vector<OrientedSphere> cone_spheres(const CycloLine& L, int count) {
    std::vector<double> l;
    for (int k = 0; k < count; ++k) l.push_back(k);
    return cone_spheres(L, l);
}

inline CycloFamily elliptic_cones(double A, double B, double C, double D, double E, double F, double G) {
    return {"elliptic", [=](double p) {
                return CycloLine{Vec4(A * p, B * p, C * p + D * std::cos(2 * p), E * p + F * std::cos(2 * p) + G * std::sin(2 * p)),
                                 Vec4(std::sin(p), std::cos(p), 0, 0)};
            }};
}

inline CycloFamily hyperbolic_cones(double A, double B, double C, double D, double E, double F, double G) {
    return {"hyperbolic", [=](double p) {
                return CycloLine{Vec4(A * p + B * std::cosh(2 * p), C * p + D * std::cosh(2 * p) + E * std::sinh(2 * p), F * p, G * p),
                                 Vec4(0, 0, std::cosh(p), std::sinh(p))};
            }};
}

inline CycloFamily parabolic_cones(double A, double B, double C, double D, double E, double F, double G) {
    return {"parabolic", [=](double p) {
                const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p5 = p4 * p;
                return CycloLine{Vec4(0, A * p + B * p2,
                                      C * p + D * p2 + E * p3 + F * (3 * p2 + 4 * p4) + G * (5 * p3 + 6 * p5),
                                      C * p - D * p2 - E * p3 + F * (3 * p2 - 4 * p4) + G * (5 * p3 - 6 * p5)),
                                 Vec4(1, 0, -p, p)};
            }};
}

// named preimages; "R7e" is the elliptic family touching r7, "R9b" the second family of r9
inline CycloFamily cyclographic_preimage(const std::string& name) {
    using std::cos, std::sin, std::cosh, std::sinh;
    const double s2 = std::sqrt(2.0);
    auto S = [](double p) { return Vec4(std::sin(p), std::cos(p), 0, 0); };
    auto H = [](double p) { return Vec4(0, 0, std::cosh(p), std::sinh(p)); };
    auto P = [](double p) { return Vec4(1, 0, -p, p); };
    std::function<CycloLine(double)> f;
    if (name == "R1") f = [=](double p) { return CycloLine{Vec4(0, 0, -2 * p, 0), S(p)}; };
    else if (name == "R2") f = [=](double p) { return CycloLine{Vec4(p, 1, 0, 0), S(p)}; };
    else if (name == "R3") f = [=](double p) { return CycloLine{Vec4(0, 0, 0.5 * (cos(2 * p) + 1), 0), S(p)}; };
    else if (name == "R1~") f = [=](double p) { return CycloLine{Vec4(0, 0, -3 * p, p) / (2 * s2), S(p)}; };
    else if (name == "R3~") f = [=](double p) { const double c2 = cos(p) * cos(p); return CycloLine{Vec4(0, 0, 3 * c2, -c2) / (4 * s2), S(p)}; };
    else if (name == "R4") f = [=](double p) { return CycloLine{Vec4(0, 0, -2 * p, -2), H(p)}; };
    else if (name == "R5") f = [=](double p) { return CycloLine{Vec4(1 - std::exp(-2 * p) + 2 * p, 0, 0, 0), H(p)}; };
    else if (name == "R6") f = [=](double p) { return CycloLine{Vec4(2 - 2 * cosh(2 * p), 0, 0, 0), H(p)}; };
    else if (name == "R7") f = [=](double p) { return CycloLine{Vec4(0, 0, -p * p, p * p) / 2, P(p)}; };
    else if (name == "R7e") f = [=](double p) { const double c2 = cos(p) * cos(p); return CycloLine{Vec4(0, 0, c2, c2) / 2, S(p)}; };
    else if (name == "R8") f = [=](double p) { return CycloLine{Vec4(0, 0, -p * p * p, p * p * p), P(p)}; };
    else if (name == "R9") f = [=](double p) { return CycloLine{Vec4(0, -p * p, 0, 0), P(p)}; };
    else if (name == "R9b") f = [=](double p) { const double p3 = p * p * p; return CycloLine{Vec4(0, 0, p + p3, p - p3), Vec4(0, 1, -p, p)}; };
    else if (name == "R10") f = [=](double p) { const double p2 = p * p, p4 = p2 * p2; return CycloLine{Vec4(0, 0, -3 * p2 - 4 * p4, -3 * p2 + 4 * p4) / 2, P(p)}; };
    else if (name == "R11") f = [=](double p) { const double p3 = p * p * p, p5 = p3 * p * p; return CycloLine{Vec4(0, 0, -5 * p3 - 6 * p5, -5 * p3 + 6 * p5), P(p)}; };
    else throw Error(ErrorKind::UnknownName, "unknown cyclographic preimage '" + name + "'");
    return {name, f};
}

} // namespace lagmin
