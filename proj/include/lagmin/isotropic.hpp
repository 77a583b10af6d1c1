#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lagmin/geom_core.hpp"

namespace lagmin {

struct IsoPoint {
    bool ideal = false;
    Vec3 p{0, 0, 0};  // finite point
    double h = 0.0;   // label on the ideal line

    static IsoPoint finite(double x, double y, double z) { return {false, Vec3(x, y, z), 0.0}; }
    static IsoPoint at_infinity(double h) { return {true, Vec3(0, 0, 0), h}; }
};

// z = (a/2)(x^2+y^2) + bx + cy + d
struct IMSphere {
    double a = 0, b = 0, c = 0, d = 0;
    double eval(double x, double y) const { return 0.5 * a * (x * x + y * y) + b * x + c * y + d; }
};

// z = m3(x^2+y^2-1) - m1 x - m2 y, the image of the point (m1, m2, 2 m3)
struct LineForm {
    Vec3 m{0, 0, 0};
    double eval(double x, double y) const { return m.z() * (x * x + y * y - 1) - m.x() * x - m.y() * y; }
    IMSphere sphere() const { return {2 * m.z(), -m.x(), -m.y(), -m.z()}; }
};

constexpr double kIdealTol = 1e-14;

inline IsoPoint plane_to_ipoint(const OrientedPlane& P) {
    const double den = P.n.z() + 1.0;
    if (std::abs(den) <= kIdealTol) return IsoPoint::at_infinity(P.h);
    return IsoPoint::finite(P.n.x() / den, P.n.y() / den, P.h / den);
}

inline OrientedPlane ipoint_to_plane(const IsoPoint& q) {
    if (q.ideal) return {Vec3(0, 0, -1), q.h};
    const double x = q.p.x(), y = q.p.y();
    const double w = 1 + x * x + y * y;
    return {inv_stereo(x, y), 2 * q.p.z() / w};
}

inline IMSphere sphere_to_imsphere(const OrientedSphere& S) {
    return {S.R + S.m.z(), -S.m.x(), -S.m.y(), 0.5 * (S.R - S.m.z())};
}

struct LineImage {
    LineForm first, second;
    double residual = 0.0;
};

inline LineImage line_to_imcircle(const Line3& L) {
    const Vec3 d = L.d.normalized();
    Vec3 e1 = d.cross(std::abs(d.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0)).normalized();
    const Vec3 e2 = d.cross(e1);
    std::vector<Vec3> img;
    for (int k = 0; k < 16; ++k) {
        const double al = 2 * M_PI * (k + 0.5) / 16;
        const Vec3 n = std::cos(al) * e1 + std::sin(al) * e2;
        if (n.z() + 1 < 1e-9) continue;
        const IsoPoint q = plane_to_ipoint({n, -n.dot(L.p)});
        img.push_back(q.p);
    }
    Eigen::MatrixXd A(img.size(), 3);
    Eigen::VectorXd rhs(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        const double x = img[i].x(), y = img[i].y();
        A.row(i) << -x, -y, x * x + y * y - 1;
        rhs[i] = img[i].z();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vec3 m0 = svd.solve(rhs);
    Vec3 nv = svd.matrixV().col(2);
    for (int i = 0; i < 3; ++i)
        if (std::abs(nv[i]) > 1e-12) {
            if (nv[i] < 0) nv = -nv;
            break;
        }
    LineImage out{{m0}, {m0 + nv}, 0.0};
    for (const auto& q : img)
        out.residual = std::max({out.residual, std::abs(out.first.eval(q.x(), q.y()) - q.z()),
                                 std::abs(out.second.eval(q.x(), q.y()) - q.z())});
    if (!(out.residual <= 1e-8))
        throw Error(ErrorKind::DegenerateFit, "line image fit residual " + std::to_string(out.residual));
    return out;
}

// generators of the isotropic Moebius group
struct IMGenerator {
    enum Kind { Rotation, Shear, AddParaboloid, AddConstant, ScaleZ, Inversion, Scaling, TranslateX };
    Kind kind;
    double p1 = 0.0, p2 = 0.0;
};

struct IMTransform {
    std::vector<IMGenerator> word;  // applied left to right; empty = identity

    static IMTransform rotation(double theta) { return {{{IMGenerator::Rotation, theta}}}; }
    static IMTransform shear(double a, double b) { return {{{IMGenerator::Shear, a, b}}}; }
    static IMTransform add_paraboloid() { return {{{IMGenerator::AddParaboloid}}}; }
    static IMTransform add_constant(double h) { return {{{IMGenerator::AddConstant, h}}}; }
    static IMTransform scale_z(double a) { return {{{IMGenerator::ScaleZ, a}}}; }
    static IMTransform inversion() { return {{{IMGenerator::Inversion}}}; }
    static IMTransform scaling(double s = M_SQRT1_2) { return {{{IMGenerator::Scaling, s}}}; }
    static IMTransform translate_x(double t = 1.0) { return {{{IMGenerator::TranslateX, t}}}; }

    IMTransform then(const IMTransform& o) const {
        IMTransform r = *this;
        r.word.insert(r.word.end(), o.word.begin(), o.word.end());
        return r;
    }
};

constexpr double kInversionTol = 1e-14;

inline IsoPoint apply_generator(const IMGenerator& g, const IsoPoint& q) {
    using K = IMGenerator;
    if (q.ideal) {
        switch (g.kind) {
        case K::AddParaboloid: return IsoPoint::at_infinity(q.h + 2);
        case K::ScaleZ: return IsoPoint::at_infinity(g.p1 * q.h);
        case K::Scaling: return IsoPoint::at_infinity(q.h / g.p1);
        case K::Inversion: return IsoPoint::finite(0, 0, q.h / 2);
        default: return q;
        }
    }
    const double x = q.p.x(), y = q.p.y(), z = q.p.z();
    switch (g.kind) {
    case K::Rotation: return {false, rotate_z(q.p, g.p1), 0};
    case K::Shear: return IsoPoint::finite(x, y, z + g.p1 * x + g.p2 * y);
    case K::AddParaboloid: return IsoPoint::finite(x, y, z + x * x + y * y - 1);
    case K::AddConstant: return IsoPoint::finite(x, y, z + g.p1);
    case K::ScaleZ: return IsoPoint::finite(x, y, g.p1 * z);
    case K::Inversion: {
        const double r2 = x * x + y * y;
        if (r2 <= kInversionTol) return IsoPoint::at_infinity(2 * z);
        return IsoPoint::finite(x / r2, y / r2, z / r2);
    }
    case K::Scaling: return {false, g.p1 * q.p, 0};
    case K::TranslateX: return IsoPoint::finite(x + g.p1, y, z);
    }
    return q;
}

inline IsoPoint imtransform_apply(const IMTransform& T, IsoPoint q) {
    for (const auto& g : T.word) q = apply_generator(g, q);
    return q;
}

inline IMSphere map_generator(const IMGenerator& g, const IMSphere& s) {
    using K = IMGenerator;
    switch (g.kind) {
    case K::Rotation: {
        const double c = std::cos(g.p1), sn = std::sin(g.p1);
        return {s.a, s.b * c - s.c * sn, s.b * sn + s.c * c, s.d};
    }
    case K::Shear: return {s.a, s.b + g.p1, s.c + g.p2, s.d};
    case K::AddParaboloid: return {s.a + 2, s.b, s.c, s.d - 1};
    case K::AddConstant: return {s.a, s.b, s.c, s.d + g.p1};
    case K::ScaleZ: return {g.p1 * s.a, g.p1 * s.b, g.p1 * s.c, g.p1 * s.d};
    case K::Inversion: return {2 * s.d, s.b, s.c, s.a / 2};
    case K::Scaling: return {s.a / g.p1, s.b, s.c, g.p1 * s.d};
    case K::TranslateX: {
        const double t = g.p1;
        return {s.a, s.b - s.a * t, s.c, s.d + 0.5 * s.a * t * t - s.b * t};
    }
    }
    return s;
}

// closed form per generator, checked by pushing six graph points through
inline IMSphere imsphere_map(const IMTransform& T, const IMSphere& s) {
    IMSphere out = s;
    for (const auto& g : T.word) out = map_generator(g, out);
    for (int k = 0; k < 6; ++k) {
        const double r = 0.7 + 0.3 * k, t = 1.1 * k + 0.3;
        const double x = r * std::cos(t), y = r * std::sin(t);
        const IsoPoint q = imtransform_apply(T, IsoPoint::finite(x, y, s.eval(x, y)));
        if (q.ideal) continue;
        const double res = std::abs(out.eval(q.p.x(), q.p.y()) - q.p.z());
        if (!(res <= 1e-9 * (1 + std::abs(q.p.z()))))
            throw Error(ErrorKind::DegenerateFit, "i-M-sphere image check failed");
    }
    return out;
}

// Map correspondences: the L-transformation is applied to oriented planes, pushed
// through Pi and compared with the listed i-M map and with our derived map
struct CorrespondenceRow {
    std::string imap;
    std::string ltransform;
    std::string derived;
    bool holds = false;           // listed map reproduced
    double max_deviation = 0.0;   // listed map vs pushed planes
    double derived_residual = 0;  // derived map vs pushed planes
};

inline std::vector<CorrespondenceRow> correspondence_report(int samples = 200) {
    struct Row {
        const char *imap, *lt, *derived;
        OrientedPlane (*ltrans)(const OrientedPlane&);
        Vec3 (*listed)(const Vec3&);
        Vec3 (*der)(const Vec3&);
    };
    static const double th = 0.7, ta = 0.3, tb = -0.5, dl = 0.4, hk = 1.7;
    const Row rows[] = {
        {"(x,y,z) -> R^theta (x,y,z), theta=0.7", "rotation R^theta", "R^theta (x,y,z)",
         [](const OrientedPlane& P) { return OrientedPlane{rotate_z(P.n, th), P.h}; },
         [](const Vec3& q) { return rotate_z(q, th); }, [](const Vec3& q) { return rotate_z(q, th); }},
        {"(x,y,z) -> (x,y,z+ax+by), (a,b)=(0.3,-0.5)", "translation by (a,b,0)", "z -> z - (ax+by)",
         [](const OrientedPlane& P) { return OrientedPlane{P.n, P.h - P.n.dot(Vec3(ta, tb, 0))}; },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() + ta * q.x() + tb * q.y()); },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() - ta * q.x() - tb * q.y()); }},
        {"(x,y,z) -> (x,y,z+x^2+y^2-1)", "translation by (0,0,1)", "z -> z + (x^2+y^2-1)/2",
         [](const OrientedPlane& P) { return OrientedPlane{P.n, P.h - P.n.z()}; },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() + q.x() * q.x() + q.y() * q.y() - 1); },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() + 0.5 * (q.x() * q.x() + q.y() * q.y() - 1)); }},
        {"(x,y,z) -> (x,y,z+h), h=0.4", "h-offset", "z -> z - h(1+x^2+y^2)/2",
         [](const OrientedPlane& P) { return OrientedPlane{P.n, P.h - dl}; },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() + dl); },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), q.z() - 0.5 * dl * (1 + q.x() * q.x() + q.y() * q.y())); }},
        {"(x,y,z) -> (x,y,az), a=1.7", "homothety with coefficient a", "z -> az",
         [](const OrientedPlane& P) { return OrientedPlane{P.n, hk * P.h}; },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), hk * q.z()); },
         [](const Vec3& q) { return Vec3(q.x(), q.y(), hk * q.z()); }},
        {"(x,y,z) -> (x,y,z)/(x^2+y^2)", "reflection in the plane z=0", "(x,y,z)/(x^2+y^2)",
         [](const OrientedPlane& P) { return OrientedPlane{Vec3(P.n.x(), P.n.y(), -P.n.z()), P.h}; },
         [](const Vec3& q) { return Vec3(q / (q.x() * q.x() + q.y() * q.y())); },
         [](const Vec3& q) { return Vec3(q / (q.x() * q.x() + q.y() * q.y())); }},
        {"(x,y,z) -> (x,y,z)/sqrt(2)", "transformation Lambda",
         "(x,y,z) * (n3+1)/((3n3+1)/2 + sqrt(5n3^2+6n3+5)/2), n3=(1-x^2-y^2)/(1+x^2+y^2)",
         [](const OrientedPlane& P) { return lambda_transform(P); },
         [](const Vec3& q) { return Vec3(q * M_SQRT1_2); },
         [](const Vec3& q) {
             const double r2 = q.x() * q.x() + q.y() * q.y();
             const double n3 = (1 - r2) / (1 + r2);
             const double L = 0.5 * std::sqrt(5 * n3 * n3 + 6 * n3 + 5);
             return Vec3(q * (n3 + 1) / (0.5 * (3 * n3 + 1) + L));
         }},
    };
    std::vector<CorrespondenceRow> out;
    for (const auto& row : rows) {
        CorrespondenceRow r{row.imap, row.lt, row.derived};
        for (int k = 0; k < samples; ++k) {
            // deterministic quasi-random planes away from n3 = -1 and from the z-axis
            const double u = std::fmod(0.5 + k * 0.6180339887498949, 1.0);
            const double v = std::fmod(0.5 + k * 0.7548776662466927, 1.0);
            const double ct = -0.8 + 1.75 * u, ph = 2 * M_PI * v;
            const double st = std::sqrt(1 - ct * ct);
            const OrientedPlane P{Vec3(st * std::cos(ph), st * std::sin(ph), ct), -2 + 4 * std::fmod(k * 0.4142135623730951, 1.0)};
            const IsoPoint q0 = plane_to_ipoint(P);
            const IsoPoint q1 = plane_to_ipoint(row.ltrans(P));
            if (q0.ideal || q1.ideal) continue;
            if (q0.p.head<2>().squaredNorm() < 1e-6) continue;
            r.max_deviation = std::max(r.max_deviation, (row.listed(q0.p) - q1.p).norm());
            r.derived_residual = std::max(r.derived_residual, (row.der(q0.p) - q1.p).norm());
        }
        r.holds = r.max_deviation <= 1e-9;
        out.push_back(r);
    }
    return out;
}

} // namespace lagmin
