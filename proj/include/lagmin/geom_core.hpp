#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "lagmin/error.hpp"

namespace lagmin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

constexpr double kNormalTol = 1e-12;

// n.p + h = 0, |n| = 1; (n,h) and (-n,-h) are different planes
struct OrientedPlane {
    Vec3 n{0, 0, 1};
    double h = 0.0;
};

// signed radius R; R = 0 is a point
struct OrientedSphere {
    Vec3 m{0, 0, 0};
    double R = 0.0;
};

struct ContactElement {
    Vec3 r;
    OrientedPlane P;
};

struct Line3 {
    Vec3 p{0, 0, 0};
    Vec3 d{0, 0, 1};
};

inline OrientedPlane hesse_normalize(const Vec3& a, double h0) {
    const double len = a.norm();
    if (!(len > kNormalTol)) throw Error(ErrorKind::ZeroNormal, "plane normal has length <= 1e-12");
    return {a / len, h0 / len};
}

inline Line3 make_line(const Vec3& p, const Vec3& d) {
    const double len = d.norm();
    if (!(len > kNormalTol)) throw Error(ErrorKind::ZeroNormal, "line direction has length <= 1e-12");
    return {p, d / len};
}

inline ContactElement sphere_tangent_plane(const OrientedSphere& S, const Vec3& n) {
    const Vec3 u = n.normalized();
    return {S.m - S.R * u, {u, S.R - u.dot(S.m)}};
}

inline double plane_residual(const OrientedPlane& P, const Vec3& p) { return P.n.dot(p) + P.h; }

// Lambda: n3 -> (3 n3 + 1)/2, then renormalize keeping the sign of the tuple
inline OrientedPlane lambda_transform(const OrientedPlane& P) {
    return hesse_normalize(Vec3(P.n.x(), P.n.y(), 0.5 * (3.0 * P.n.z() + 1.0)), P.h);
}

inline Vec3 rotate_z(const Vec3& p, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z()};
}

inline Vec2 rotate2(const Vec2& p, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

// unit sphere <-> plane, (x,y) = (n1,n2)/(1+n3)
inline Vec3 inv_stereo(double x, double y) {
    const double q = 1.0 + x * x + y * y;
    return {2 * x / q, 2 * y / q, (1 - x * x - y * y) / q};
}

inline Vec2 stereo(const Vec3& n) { return {n.x() / (1 + n.z()), n.y() / (1 + n.z())}; }

} // namespace lagmin
