#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagmin/biharmonic.hpp"
#include "lagmin/cycle.hpp"
#include "lagmin/surfaces.hpp"

namespace lagmin {

constexpr double kRankTol = 1e-9;
constexpr double kLinearTol = 1e-8;
constexpr double kRecoverTol = 1e-7;

struct BasePoint {
    bool ideal = false;
    Vec2 p = Vec2::Zero();
};

struct PencilClass {
    std::string tag;  // elliptic, hyperbolic, parabolic, not-a-pencil, degenerate
    std::vector<BasePoint> base_points;
    int rank = 0;
    std::vector<double> singular_values;
};

namespace detail {

inline BasePoint point_circle(const Vec4& v) {
    const double s = v.norm();
    if (std::abs(v[0]) <= 1e-12 * s) return {true, Vec2::Zero()};
    return {false, Vec2(-v[1] / (2 * v[0]), -v[2] / (2 * v[0]))};
}

inline double form(const Vec4& p, const Vec4& q) { return p[1] * q[1] + p[2] * q[2] - 2 * (p[0] * q[3] + q[0] * p[3]); }

// real intersections of two cycles (at most two)
inline std::vector<Vec2> intersect(const Vec4& P, const Vec4& C) {
    // reduce to a line L and a circle or line K
    Vec4 L = P, K = C;
    if (std::abs(L[0]) > std::abs(K[0])) std::swap(L, K);
    if (std::abs(K[0]) > 1e-14 * K.norm()) L = L - (L[0] / K[0]) * K;
    L[0] = 0;
    const double nn = L[1] * L[1] + L[2] * L[2];
    if (nn <= 0) return {};
    const Vec2 n(L[1], L[2]);
    const Vec2 foot = -L[3] * n / nn;
    const Vec2 dir = Vec2(-L[2], L[1]) / std::sqrt(nn);
    if (std::abs(K[0]) <= 1e-14 * K.norm()) {
        const double det = L[1] * K[2] - L[2] * K[1];
        if (std::abs(det) <= 1e-14 * nn) return {};
        return {Vec2((-L[3] * K[2] + K[3] * L[2]) / det, (-L[1] * K[3] + K[1] * L[3]) / det)};
    }
    // K(foot + s dir) = a s^2 + q s + r
    const double a = K[0];
    const double q = 2 * a * foot.dot(dir) + K[1] * dir.x() + K[2] * dir.y();
    const double r = K[0] * foot.squaredNorm() + K[1] * foot.x() + K[2] * foot.y() + K[3];
    const double disc = q * q - 4 * a * r;
    if (disc < 0) return {};
    const double sq = std::sqrt(disc);
    return {foot + (-q + sq) / (2 * a) * dir, foot + (-q - sq) / (2 * a) * dir};
}

} // namespace detail

inline PencilClass classify_family(const std::vector<Cycle>& cycles) {
    if (cycles.size() < 3) throw Error(ErrorKind::TooFew, "classify_family needs at least 3 cycles");
    Eigen::MatrixXd M(cycles.size(), 4);
    for (size_t i = 0; i < cycles.size(); ++i) {
        const Vec4 v = cycles[i].vec();
        const double n = v.norm();
        if (n == 0) throw Error(ErrorKind::DegenerateFit, "zero cycle");
        M.row(i) = (v / n).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    PencilClass out;
    for (int i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv[i]);
    while (out.singular_values.size() < 4) out.singular_values.push_back(0.0);
    const double s1 = sv[0];
    if (sv[1] < kRankTol * s1) {
        out.tag = "degenerate", out.rank = 1;
        return out;
    }
    if (sv.size() > 2 && sv[2] >= kRankTol * s1) {
        out.tag = "not-a-pencil", out.rank = sv.size() > 3 && sv[3] >= kRankTol * s1 ? 4 : 3;
        return out;
    }
    out.rank = 2;
    const Vec4 C1 = svd.matrixV().col(0), C2 = svd.matrixV().col(1);
    Eigen::Matrix2d G;
    G << detail::form(C1, C1), detail::form(C1, C2), detail::form(C1, C2), detail::form(C2, C2);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
    const double e0 = es.eigenvalues()[0], e1 = es.eigenvalues()[1];
    const double scale = std::max(std::abs(e0), std::abs(e1));
    if (std::abs(e0) <= kRankTol * scale || std::abs(e1) <= kRankTol * scale) {
        out.tag = "parabolic";
        const int k = std::abs(e0) <= std::abs(e1) ? 0 : 1;
        const Eigen::Vector2d w = es.eigenvectors().col(k);
        out.base_points.push_back(detail::point_circle(w[0] * C1 + w[1] * C2));
        return out;
    }
    if (e0 < 0) {
        out.tag = "hyperbolic";
        // null directions of diag(e0, e1) in the eigenbasis
        const double t = std::sqrt(-e0 / e1);
        for (double sgn : {1.0, -1.0}) {
            const Eigen::Vector2d w = es.eigenvectors().col(0) + sgn * t * es.eigenvectors().col(1);
            out.base_points.push_back(detail::point_circle(w[0] * C1 + w[1] * C2));
        }
        return out;
    }
    out.tag = "elliptic";
    const Vec4 K = std::abs(C1[0]) >= std::abs(C2[0]) ? C1 : C2;
    const Vec4 L = std::abs(C1[0]) >= std::abs(C2[0]) ? C2 : C1;
    const auto pts = detail::intersect(L, K);
    for (const Vec2& p : pts) out.base_points.push_back({false, p});
    if (pts.size() == 1) out.base_points.push_back({true, Vec2::Zero()});
    return out;
}

// ---- recovery ----

struct CircleSamples {
    Cycle circle;
    std::vector<Vec2> points;
    std::vector<double> values;
};

inline CircleSamples sample_on(const ScalarField& F, const Cycle& S, int n = 50, double phase = 0.0) {
    CircleSamples cs{S, {}, {}};
    CycleSampling opt;
    opt.samples = n;
    opt.phase = phase;
    for (const Vec2& p : sample_cycle(S, opt)) {
        if (!F.in_domain(p.x(), p.y())) continue;
        cs.points.push_back(p);
        cs.values.push_back(F.value(p.x(), p.y()));
    }
    return cs;
}

struct LinearFit {
    Vec3 coef = Vec3::Zero();  // c0 + c1 x + c2 y
    double residual = 0.0;
};

inline LinearFit fit_linear(const CircleSamples& s) {
    if (s.points.size() < 3) throw Error(ErrorKind::TooFew, "fewer than 3 samples on a circle");
    Eigen::MatrixXd A(s.points.size(), 3);
    Eigen::VectorXd b(s.points.size());
    for (size_t i = 0; i < s.points.size(); ++i) {
        A.row(i) << 1.0, s.points[i].x(), s.points[i].y();
        b[i] = s.values[i];
    }
    LinearFit f;
    f.coef = A.colPivHouseholderQr().solve(b);
    f.residual = (A * f.coef - b).cwiseAbs().maxCoeff();
    if (!(f.residual < kLinearTol))
        throw Error(ErrorKind::NotLinearOnCircle, "restriction is not linear (residual " + std::to_string(f.residual) + ")");
    return f;
}

// F = A((x-a)^2 + (y-b)^2) + B
struct CrossingFit {
    double A = 0, a = 0, b = 0, B = 0;
    bool center_defined = true;
    Vec4 general = Vec4::Zero();  // F = g0 (x^2+y^2) + g1 x + g2 y + g3
    double residual = 0.0;
};

inline CrossingFit recover_crossing(const std::vector<CircleSamples>& data) {
    if (data.size() < 3) throw Error(ErrorKind::TooFew, "recover_crossing needs at least 3 circles");
    Eigen::MatrixXd V(data.size(), 4);
    std::vector<Vec4> s(data.size());
    for (size_t i = 0; i < data.size(); ++i) {
        const Cycle& c = data[i].circle;
        if (c.is_line() || !(c.Q() > 0)) throw Error(ErrorKind::DependentCircles, "not a genuine circle");
        s[i] = c.vec() / c.a;
        V.row(i) = (s[i] / s[i].norm()).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    if (svd.singularValues()[2] < kRankTol * svd.singularValues()[0])
        throw Error(ErrorKind::DependentCircles, "circle vectors span fewer than 3 dimensions");
    std::vector<LinearFit> l;
    for (const auto& d : data) l.push_back(fit_linear(d));
    // l_i - l_1 = k (s_1 - s_i) as linear functions; one k for all pairs
    double num = 0, den = 0;
    for (size_t i = 1; i < data.size(); ++i) {
        const Vec3 dl = l[i].coef - l[0].coef;
        const Vec3 ds(s[0][3] - s[i][3], s[0][1] - s[i][1], s[0][2] - s[i][2]);
        num += dl.dot(ds), den += ds.dot(ds);
    }
    const double k = num / den;
    CrossingFit out;
    out.general = Vec4(k, k * s[0][1] + l[0].coef[1], k * s[0][2] + l[0].coef[2], k * s[0][3] + l[0].coef[0]);
    out.A = k;
    const double scale = out.general.cwiseAbs().maxCoeff();
    if (std::abs(k) <= 1e-12 * std::max(scale, 1.0)) {
        out.A = 0, out.center_defined = false;
        out.B = out.general[3];
    } else {
        out.a = -out.general[1] / (2 * k);
        out.b = -out.general[2] / (2 * k);
        out.B = out.general[3] - k * (out.a * out.a + out.b * out.b);
    }
    for (const auto& d : data)
        for (size_t j = 0; j < d.points.size(); ++j) {
            const Vec2& p = d.points[j];
            const double f = out.general[0] * p.squaredNorm() + out.general[1] * p.x() + out.general[2] * p.y() + out.general[3];
            out.residual = std::max(out.residual, std::abs(f - d.values[j]));
        }
    if (!(out.residual < kRecoverTol)) throw Error(ErrorKind::BadFit, "crossing model residual " + std::to_string(out.residual));
    return out;
}

// F = A((x-a)^2+(y-b)^2) + (B X^2 + C XY + D Y^2)/(X^2+Y^2), (X,Y) relative to the common point
struct CommonPointFit {
    double a = 0, b = 0, A = 0, B = 0, C = 0, D = 0;
    Vec2 common = Vec2::Zero();
    double residual = 0.0;
};

inline Vec2 common_point(const std::vector<Cycle>& circles, double tol = 1e-8) {
    std::vector<Vec2> cand;
    for (size_t i = 0; i < circles.size(); ++i)
        for (size_t j = i + 1; j < circles.size(); ++j)
            for (const Vec2& p : detail::intersect(circles[i].vec(), circles[j].vec())) cand.push_back(p);
    auto on_all = [&](const Vec2& p) {
        for (const Cycle& c : circles) {
            const double g = std::hypot(2 * c.a * p.x() + c.b, 2 * c.a * p.y() + c.c);
            if (!(std::abs(c.eval(p.x(), p.y())) <= tol * std::max(g, 1e-300))) return false;
        }
        return true;
    };
    for (const Vec2& p : cand)
        if (on_all(p)) return p;
    throw Error(ErrorKind::NoCommonPoint, "circles have no common point");
}

inline CommonPointFit recover_common_point(const std::vector<CircleSamples>& data) {
    if (data.size() < 3) throw Error(ErrorKind::TooFew, "recover_common_point needs at least 3 circles");
    std::vector<Cycle> cs;
    for (const auto& d : data) cs.push_back(d.circle);
    const Vec2 O = common_point(cs);
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j)
            for (size_t k = j + 1; k < cs.size(); ++k) {
                Eigen::Matrix<double, 3, 4> M;
                M << cs[i].vec().normalized().transpose(), cs[j].vec().normalized().transpose(), cs[k].vec().normalized().transpose();
                Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(M);
                if (svd.singularValues()[2] < kRankTol * svd.singularValues()[0])
                    throw Error(ErrorKind::PencilDegeneracy, "three circles lie in one pencil");
            }
    for (const auto& d : data) fit_linear(d);
    // invert at O: x' = X/|X|^2 turns the circles into lines; G(x') = |x'|^2 F is quadratic
    std::vector<std::array<double, 6>> rows;
    std::vector<double> rhs;
    for (const auto& d : data)
        for (size_t j = 0; j < d.points.size(); ++j) {
            const Vec2 X = d.points[j] - O;
            const double r2 = X.squaredNorm();
            if (r2 < 1e-12) continue;
            const Vec2 x = X / r2;
            rows.push_back({1.0, x.x(), x.y(), x.x() * x.x(), x.x() * x.y(), x.y() * x.y()});
            rhs.push_back(d.values[j] / r2);
        }
    Eigen::MatrixXd M(rows.size(), 6);
    Eigen::VectorXd b(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < 6; ++j) M(i, j) = rows[i][j];
        b[i] = rhs[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()[5] < 1e-10 * svd.singularValues()[0])
        throw Error(ErrorKind::PencilDegeneracy, "line constraints do not determine the quadratic");
    const Eigen::VectorXd g = svd.solve(b);
    CommonPointFit out;
    out.common = O;
    out.A = g[0];
    if (std::abs(g[0]) > 1e-12 * g.cwiseAbs().maxCoeff()) {
        out.a = -g[1] / (2 * g[0]);
        out.b = -g[2] / (2 * g[0]);
    } else {
        out.A = 0;
    }
    const double p2 = out.a * out.a + out.b * out.b;
    out.B = g[3] - out.A * p2;
    out.C = g[4];
    out.D = g[5] - out.A * p2;
    out.a += O.x(), out.b += O.y();
    const ScalarField F = make_exceptional_field({out.a, out.b, O.x(), O.y(), out.A, out.B, out.C, out.D});
    for (const auto& d : data)
        for (size_t j = 0; j < d.points.size(); ++j) {
            const Vec2& p = d.points[j];
            if ((p - O).squaredNorm() < 1e-12) continue;
            out.residual = std::max(out.residual, std::abs(F.value(p.x(), p.y()) - d.values[j]));
        }
    if (!(out.residual < kRecoverTol)) throw Error(ErrorKind::BadFit, "common-point model residual " + std::to_string(out.residual));
    return out;
}

// F = (x^2+y^2)(Ax+By+C) + ax + by + c
struct NestedFit {
    double A = 0, B = 0, C = 0, a = 0, b = 0, c = 0;
    double residual = 0.0;
};

inline NestedFit fit_nested(const ScalarField& F) {
    std::vector<Vec2> pts;
    for (double r2 : {1.0, 2.0}) {
        const CircleSamples s = sample_on(F, Cycle::circle(0, 0, std::sqrt(r2)), 50);
        if (s.points.size() < 20) throw Error(ErrorKind::EmptyIntersection, "field undefined on the circles");
        fit_linear(s);
        pts.insert(pts.end(), s.points.begin(), s.points.end());
    }
    for (int k = 0; k < 20; ++k) {
        const double t = 2 * M_PI * (k + 0.5) / 20, r = std::sqrt(1.5);
        pts.emplace_back(r * std::cos(t), r * std::sin(t) * (1.0 + 0.1 * (k % 3)));
    }
    Eigen::MatrixXd M(pts.size(), 6);
    Eigen::VectorXd v(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i].x(), y = pts[i].y(), r2 = x * x + y * y;
        M.row(i) << r2 * x, r2 * y, r2, x, y, 1.0;
        v[i] = F.value(x, y);
    }
    const Eigen::VectorXd g = M.colPivHouseholderQr().solve(v);
    NestedFit out{g[0], g[1], g[2], g[3], g[4], g[5], (M * g - v).cwiseAbs().maxCoeff()};
    if (!(out.residual < kRecoverTol)) throw Error(ErrorKind::BadFit, "nested model residual " + std::to_string(out.residual));
    return out;
}

inline bool center_constraint_check(double A, double B, double C, double a, double b, double c, const Cycle& S) {
    const ScalarField F = make_poly_field({{A, 3, 0}, {A, 1, 2}, {B, 2, 1}, {B, 0, 3}, {C, 2, 0}, {C, 0, 2}, {a, 1, 0}, {b, 0, 1}, {c, 0, 0}});
    return restrict_fit(F, S, 1).max_abs < 1e-9;
}

// ---- cone families ----

// circle of unit normals n with n.dm = dR, in stereographic coordinates
inline Cycle gauss_cycle(const CycloLine& L) {
    const Vec3 dm = L.dir.head<3>();
    const double dR = L.dir[3];
    if (!(dm.squaredNorm() - dR * dR > 1e-12 * L.dir.squaredNorm()))
        throw Error(ErrorKind::DegenerateCone, "cone direction is not spacelike");
    return {-(dm.z() + dR), 2 * dm.x(), 2 * dm.y(), dm.z() - dR};
}

inline PencilClass gauss_pencil_of_cones(const std::function<CycloLine(double)>& family, const std::vector<double>& phis) {
    if (phis.size() < 3) throw Error(ErrorKind::TooFew, "fewer than 3 cones");
    std::vector<Cycle> cs;
    for (double p : phis) cs.push_back(gauss_cycle(family(p)));
    return classify_family(cs);
}

inline PencilClass gauss_pencil_of_cones(const std::function<CycloLine(double)>& family, int count, double phi0 = -1.0, double phi1 = 1.0) {
    std::vector<double> phis;
    for (int k = 0; k < count; ++k) phis.push_back(count > 1 ? phi0 + (phi1 - phi0) * k / (count - 1) : phi0);
    return gauss_pencil_of_cones(family, phis);
}

} // namespace lagmin
