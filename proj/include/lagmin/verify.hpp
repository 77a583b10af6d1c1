#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lagmin/json_io.hpp"
#include "lagmin/reconstruct.hpp"
#include "lagmin/surfaces.hpp"

namespace lagmin {

struct CheckReport {
    std::string check;
    int samples = 0;
    double max_residual = 0.0;
    double rms_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Json meta = Json::object();

    Json to_json() const {
        Json j;
        j["check"] = check;
        j["samples"] = samples;
        j["max_residual"] = max_residual;
        j["rms_residual"] = rms_residual;
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        j["meta"] = meta;
        return j;
    }
};

// running max / rms accumulator
struct ResidualStats {
    int n = 0;
    double max = 0.0, sumsq = 0.0;
    bool nan = false;
    void add(double r) {
        ++n;
        if (std::isnan(r)) nan = true;
        else if (r > max) max = r;
        sumsq += r * r;
    }
    CheckReport report(std::string name, double tol) const {
        CheckReport c;
        c.check = std::move(name);
        c.samples = n;
        c.max_residual = nan ? std::nan("") : max;
        c.rms_residual = n ? std::sqrt(sumsq / n) : 0.0;
        c.tolerance = tol;
        c.pass = !nan && max <= tol;
        return c;
    }
};

struct Curvatures {
    double H = 0, K = 0;
};

inline Curvatures curvatures_from(const SurfacePoint& p, const Vec3& n) {
    const double E = p.ru.dot(p.ru), F = p.ru.dot(p.rv), G = p.rv.dot(p.rv);
    const double L = p.ruu.dot(n), M = p.ruv.dot(n), N = p.rvv.dot(n);
    const double W = E * G - F * F;
    return {(E * N - 2 * F * M + G * L) / (2 * W), (L * N - M * M) / W};
}

inline Curvatures curvatures(const ParamSurface& S, double u, double v) {
    const SurfacePoint p = S.eval(u, v);
    return curvatures_from(p, S.normal(p, u, v));
}

// central differences of the point map, step h
inline Curvatures curvatures_fd(const ParamSurface& S, double u, double v, double h = 1e-4) {
    auto r = [&](double a, double b) { return S.point(a, b); };
    SurfacePoint p;
    p.r = r(u, v);
    p.ru = (r(u + h, v) - r(u - h, v)) / (2 * h);
    p.rv = (r(u, v + h) - r(u, v - h)) / (2 * h);
    p.ruu = (r(u + h, v) - 2 * p.r + r(u - h, v)) / (h * h);
    p.rvv = (r(u, v + h) - 2 * p.r + r(u, v - h)) / (h * h);
    p.ruv = (r(u + h, v + h) - r(u + h, v - h) - r(u - h, v + h) + r(u - h, v - h)) / (4 * h * h);
    return curvatures_from(p, S.normal(p, u, v));
}

constexpr double kZeroK = 1e-12;

inline double omega_integrand(const Curvatures& c) {
    if (!(std::abs(c.K) > kZeroK)) throw Error(ErrorKind::ZeroGaussCurvature, "K = 0");
    return (c.H * c.H - c.K) / c.K;
}

inline double omega_integrand(const ParamSurface& S, double u, double v) { return omega_integrand(curvatures(S, u, v)); }

struct Bump {
    Vec2 center = Vec2::Zero();
    double radius = 0.3;
    double amplitude = 1.0;
};

// integral of g(x,y) over the bump disk, 16 x 16 Gauss-Legendre in polar coordinates
template <class G>
double disk_integral(const Bump& b, G&& g) {
    using Q = boost::math::quadrature::gauss<double, 16>;
    return Q::integrate([&](double r) {
        return r * Q::integrate([&](double t) { return g(b.center.x() + r * std::cos(t), b.center.y() + r * std::sin(t)); }, 0.0, 2 * M_PI);
    }, 0.0, b.radius);
}

// local energy over the bump support
inline double local_omega(const ScalarField& F, const Bump& b) {
    const ParamSurface S = reconstruct_surface(F, "local");
    return disk_integral(b, [&](double x, double y) {
        const SurfacePoint p = S.eval(x, y);
        const Vec3 n = S.normal(p, x, y);
        return omega_integrand(curvatures_from(p, n)) * p.ru.cross(p.rv).norm();
    });
}

inline double bump_l2(const Bump& b) {
    const ScalarField B = make_bump_field(b.center, b.radius, b.amplitude);
    return std::sqrt(disk_integral(b, [&](double x, double y) { const double v = B.value(x, y); return v * v; }));
}

// dOmega/deps at 0 for F + eps * bump; central differences at eps and eps/2, Richardson-combined
inline double first_variation(const ScalarField& F, const Bump& b, double eps = 1e-4) {
    const ScalarField B = make_bump_field(b.center, b.radius, b.amplitude);
    auto D = [&](double e) { return (local_omega(F + e * B, b) - local_omega(F + (-e) * B, b)) / (2 * e); };
    return (4 * D(eps / 2) - D(eps)) / 3;
}

struct Grid {
    int nu = 100, nv = 100;
    double u0 = -2, u1 = 2, v0 = -2, v1 = 2;
    double u(int i) const { return nu > 1 ? u0 + (u1 - u0) * i / (nu - 1) : u0; }
    double v(int j) const { return nv > 1 ? v0 + (v1 - v0) * j / (nv - 1) : v0; }
    Json to_json() const { return Json{{"nu", nu}, {"nv", nv}, {"range", {u0, u1, v0, v1}}}; }
};

inline CheckReport gaussmap_identity_residual(const ParamSurface& S, const Grid& g = {}, double tol = 1e-8) {
    if (!S.immersed()) {
        CheckReport c = ResidualStats{}.report("gaussmap", tol);
        c.pass = true;
        c.meta = {{"skipped", "NonImmersed"}, {"surface", S.provenance()}};
        return c;
    }
    if (!S.gauss()) throw Error(ErrorKind::DomainMismatch, "surface is not in Gauss coordinates");
    ResidualStats st;
    int guarded = 0, non_immersed = 0;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            if (!S.in_domain(u, v)) { ++guarded; continue; }
            try {
                const Vec2 s = stereo(S.normal(u, v));
                st.add(std::hypot(s.x() - u, s.y() - v));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NonImmersed) throw;
                ++non_immersed;
            }
        }
    CheckReport c = st.report("gaussmap", tol);
    c.meta = {{"surface", S.provenance()}, {"grid", g.to_json()}, {"skipped_guard", guarded}, {"skipped_nonimmersed", non_immersed}};
    return c;
}

struct RulingOptions {
    std::vector<double> phis;      // default: 20 values over the branch
    std::vector<double> lambdas = {-1.0, -0.3, 0.4, 1.0};
    double s0 = -4.0, s1 = 4.0;    // log of the ray parameter
    int brackets = 160;
};

// For ruling phi the Gauss preimage lies on the ray t (cos phi, -sin phi); along it
// (S - base).d runs monotonically through all lambda. Locate lambda by bisection in ln t.
inline CheckReport ruling_residual(const ParamSurface& S, const RulingFamily& L, RulingOptions opt = {}, double tol = 1e-8) {
    const auto& rc = S.ruled();
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    if (!rc || !same(rc->a1, L.a1) || !same(rc->a2, L.a2) || !same(rc->a3, L.a3) || !same(rc->alpha, L.alpha) ||
        (L.a3 != 0 && !same(rc->theta, L.theta)) || (rc->shift - L.shift).norm() > 1e-12)
        throw Error(ErrorKind::ProvenanceMismatch, "ruling family does not belong to " + S.provenance());
    if (opt.phis.empty())
        for (int k = 0; k < 20; ++k) opt.phis.push_back(-2.8 + 5.6 * (k + 0.5) / 20 - L.alpha);
    ResidualStats st;
    int unbracketed = 0;
    for (double phi : opt.phis) {
        const Vec2 e(std::cos(phi), -std::sin(phi));
        const Vec3 B = L.base(phi), d = L.dir(phi);
        auto at = [&](double s) { return S.point(std::exp(s) * e.x(), std::exp(s) * e.y()); };
        std::vector<double> ss, gs;
        for (int k = 0; k <= opt.brackets; ++k) {
            const double s = opt.s0 + (opt.s1 - opt.s0) * k / opt.brackets;
            if (!S.in_domain(std::exp(s) * e.x(), std::exp(s) * e.y())) continue;
            ss.push_back(s);
            gs.push_back((at(s) - B).dot(d));
        }
        for (double lam : opt.lambdas) {
            bool found = false;
            for (size_t k = 0; k + 1 < ss.size() && !found; ++k) {
                double a = ss[k], b = ss[k + 1];
                double ga = gs[k] - lam, gb = gs[k + 1] - lam;
                if ((ga > 0) == (gb > 0)) continue;
                while (b - a > 1e-12) {
                    const double m = 0.5 * (a + b), gm = (at(m) - B).dot(d) - lam;
                    if ((gm > 0) == (ga > 0)) a = m, ga = gm;
                    else b = m;
                }
                const double s = 0.5 * (a + b);
                const Vec3 P = at(s);
                const double l = (P - B).dot(d);
                st.add((P - (B + l * d)).norm());
                found = true;
            }
            if (!found) ++unbracketed;
        }
    }
    CheckReport c = st.report("ruling", tol);
    c.meta = {{"surface", S.provenance()}, {"phis", static_cast<int>(opt.phis.size())}, {"lambdas", opt.lambdas}, {"unbracketed", unbracketed}};
    return c;
}

struct TangencyOptions {
    Grid mesh{400, 400, -2, 2, -2, 2};
    int candidates = 12;  // coarse local minima that get refined
    int levels = 10;     // nested 41 x 41 meshes, each 20x finer
    double separation = 0.05;
    std::vector<Vec2> hints;  // optional predicted contact per sphere, refined as an extra start
};

namespace detail {

inline double sphere_gap(const ParamSurface& S, const OrientedSphere& sp, double u, double v) {
    return std::abs((S.point(u, v) - sp.m).norm() - std::abs(sp.R));
}

} // namespace detail

// max over spheres of the min over mesh vertices of ||r - m| - |R||. The coarse mesh
// alone bounds the gap only by O(h) for point spheres (R = 0), so the best coarse local
// minima are refined by nested local meshes.
inline CheckReport tangency_residual(const ParamSurface& S, const std::vector<OrientedSphere>& spheres, const TangencyOptions& opt = {},
                                     double tol = 1e-5) {
    ResidualStats st;
    Json where = Json::array();
    const Grid& g = opt.mesh;
    double normal_defect = 0.0;
    for (size_t k = 0; k < spheres.size(); ++k) {
        const OrientedSphere& sp = spheres[k];
        std::vector<double> f(static_cast<size_t>(g.nu) * g.nv, kInf);
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j)
                if (S.in_domain(g.u(i), g.v(j))) f[i * g.nv + j] = detail::sphere_gap(S, sp, g.u(i), g.v(j));
        std::vector<std::pair<double, int>> minima;
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j) {
                const double c = f[i * g.nv + j];
                if (!std::isfinite(c)) continue;
                bool local = true;
                for (int di = -1; di <= 1 && local; ++di)
                    for (int dj = -1; dj <= 1 && local; ++dj) {
                        const int a = i + di, b = j + dj;
                        if ((di || dj) && a >= 0 && b >= 0 && a < g.nu && b < g.nv && f[a * g.nv + b] < c) local = false;
                    }
                if (local) minima.emplace_back(c, i * g.nv + j);
            }
        std::sort(minima.begin(), minima.end());
        // distinct basins only: a valley produces many adjacent grid minima
        std::vector<std::pair<double, int>> picked;
        for (const auto& m : minima) {
            if (picked.size() >= static_cast<size_t>(opt.candidates)) break;
            const Vec2 a(g.u(m.second / g.nv), g.v(m.second % g.nv));
            bool near = false;
            for (const auto& q : picked)
                near = near || (a - Vec2(g.u(q.second / g.nv), g.v(q.second % g.nv))).norm() < opt.separation;
            if (!near) picked.push_back(m);
        }
        minima.swap(picked);
        std::vector<std::pair<double, Vec2>> starts;
        for (const auto& [c0, idx] : minima) starts.emplace_back(c0, Vec2(g.u(idx / g.nv), g.v(idx % g.nv)));
        if (k < opt.hints.size() && S.in_domain(opt.hints[k].x(), opt.hints[k].y()))
            starts.emplace_back(detail::sphere_gap(S, sp, opt.hints[k].x(), opt.hints[k].y()), opt.hints[k]);
        double best = kInf;
        Vec2 arg(g.u0, g.v0);
        for (const auto& [c0, start] : starts) {
            double cb = c0;
            Vec2 ca = start;
            double hu = (g.u1 - g.u0) / (g.nu - 1), hv = (g.v1 - g.v0) / (g.nv - 1);
            for (int level = 0; level < opt.levels; ++level) {
                // re-center at this scale while the best vertex sits on the window border
                for (int walk = 0; walk < 50; ++walk) {
                    const Vec2 c = ca;
                    int bi = 20, bj = 20;
                    for (int i = 0; i <= 40; ++i)
                        for (int j = 0; j <= 40; ++j) {
                            const double u = c.x() + hu * (i - 20) / 10, v = c.y() + hv * (j - 20) / 10;
                            if (!S.in_domain(u, v)) continue;
                            const double d = detail::sphere_gap(S, sp, u, v);
                            if (d < cb) cb = d, ca = Vec2(u, v), bi = i, bj = j;
                        }
                    if (bi > 0 && bi < 40 && bj > 0 && bj < 40) break;
                }
                hu /= 20, hv /= 20;
            }
            if (cb < best) best = cb, arg = ca;
        }
        st.add(best);
        where.push_back({arg.x(), arg.y()});
        // at a touching point the surface normal is parallel to r - m
        // (a sphere may also cut the surface, so use the predicted contact when given)
        if (std::abs(sp.R) > 1e-9 && std::isfinite(best)) {
            const Vec2 at = k < opt.hints.size() ? opt.hints[k] : arg;
            try {
                const Vec3 d = (S.point(at.x(), at.y()) - sp.m).normalized();
                normal_defect = std::max(normal_defect, d.cross(S.normal(at.x(), at.y())).norm());
            } catch (const Error&) {
            }
        }
    }
    CheckReport c = st.report("tangency", tol);
    c.meta = {{"surface", S.provenance()}, {"mesh", g.to_json()}, {"refine_levels", opt.levels}, {"hints", static_cast<int>(opt.hints.size())},
              {"normal_defect", normal_defect}, {"contacts", where}};
    return c;
}

// Exact form of the tangency: the i-M-circle of the cone, sigma(lambda) = s0 + lambda s1,
// must agree with F on {s1 = 0} (where the graph touches the whole cone's image)
inline double cone_envelope_residual(const ScalarField& F, const CycloLine& L, int samples = 64) {
    auto ims = [](const Vec4& q) { return Vec4(q[3] + q[2], -q[0], -q[1], (q[3] - q[2]) / 2); };
    const Vec4 s0 = ims(L.base), s1 = ims(L.dir);
    const Cycle C{0.5 * s1[0], s1[1], s1[2], s1[3]};
    CycleSampling cs;
    cs.samples = samples;
    cs.line_s0 = -2, cs.line_s1 = 2;
    double worst = 0.0;
    int used = 0;
    for (const Vec2& p : sample_cycle(C, cs)) {
        if (!F.in_domain(p.x(), p.y())) continue;
        const double r2 = p.squaredNorm();
        const double sig = 0.5 * s0[0] * r2 + s0[1] * p.x() + s0[2] * p.y() + s0[3];
        double e = std::abs(F.value(p.x(), p.y()) - sig);
        // a multivalued field's graph is the union of its branches
        if (!F.cut_angles().empty())
            for (int k = -3; k <= 3; ++k) e = std::min(e, std::abs(F.with_branch(k).value(p.x(), p.y()) - sig));
        worst = std::max(worst, e);
        ++used;
    }
    if (used == 0) throw Error(ErrorKind::EmptyIntersection, "no usable samples on the cone's circle");
    return worst;
}

// Spheres of a cone that touch the surface: at a point p of the i-M-circle {s1 = 0}
// the sphere s0 + lambda s1 is tangent to the graph iff grad(F - s0) = lambda grad(s1).
// Returns (p, lambda) at up to `count` points spread over the usable part of the circle.
inline std::vector<std::pair<Vec2, double>> touching_spheres(const ScalarField& F, const CycloLine& L, int count = 3,
                                                             double box = 2.0) {
    auto ims = [](const Vec4& q) { return Vec4(q[3] + q[2], -q[0], -q[1], (q[3] - q[2]) / 2); };
    const Vec4 s0 = ims(L.base), s1 = ims(L.dir);
    const Cycle C{0.5 * s1[0], s1[1], s1[2], s1[3]};
    CycleSampling cs;
    cs.samples = 720;
    cs.line_s0 = -box, cs.line_s1 = box;
    std::vector<Vec2> usable;
    const double margin = std::max(0.3, 10 * F.guard());
    for (const Vec2& p : sample_cycle(C, cs)) {
        if (!(F.singular_distance(p.x(), p.y()) > margin && std::abs(p.x()) <= box && std::abs(p.y()) <= box)) continue;
        // on the field's current branch only
        const double sig = 0.5 * s0[0] * p.squaredNorm() + s0[1] * p.x() + s0[2] * p.y() + s0[3];
        if (std::abs(F.value(p.x(), p.y()) - sig) <= 1e-9 * (1 + std::abs(sig))) usable.push_back(p);
    }
    std::vector<std::pair<Vec2, double>> out;
    if (usable.empty()) return out;
    for (int k = 0; k < count; ++k) {
        const Vec2 p = usable[(usable.size() * (2 * k + 1)) / (2 * count)];
        const Taylor2<1> t = F.taylor<1>(p.x(), p.y());
        const Vec2 gF(t.coeff(1, 0) - (s0[0] * p.x() + s0[1]), t.coeff(0, 1) - (s0[0] * p.y() + s0[2]));
        const Vec2 g1(s1[0] * p.x() + s1[1], s1[0] * p.y() + s1[2]);
        out.emplace_back(p, gF.dot(g1) / g1.squaredNorm());
    }
    return out;
}

// exact bilaplacian at random points of [-box, box]^2 at least `margin` from singular loci;
// fourth derivatives of r^-2 terms grow like r^-6, so round-off alone passes 1e-9 closer in
inline CheckReport biharmonic_report(const ScalarField& F, unsigned seed, int n = 1000, double box = 5.0, double tol = 1e-9,
                                     double margin = 0.25) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-box, box);
    ResidualStats st;
    int rejected = 0;
    margin = std::max(F.guard(), margin);
    while (st.n < n) {
        const double x = U(rng), y = U(rng);
        if (!(F.singular_distance(x, y) > margin)) { ++rejected; continue; }
        st.add(std::abs(bilaplacian(F, x, y)));
    }
    CheckReport c = st.report("biharmonic", tol);
    c.meta = {{"seed", seed}, {"box", box}, {"margin", margin}, {"rejected", rejected}};
    return c;
}

// smaller singular value of [r_u r_v]
inline double immersion_margin(const SurfacePoint& p) {
    const double E = p.ru.dot(p.ru), F = p.ru.dot(p.rv), G = p.rv.dot(p.rv);
    const double tr = E + G, det = E * G - F * F;
    return std::sqrt(std::max(0.0, 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det)))));
}

// jet curvatures vs finite differences of the point map, relative error, at safe points:
// 0.5 <= |(u,v)| <= box, clear of singular loci, and immersion margin >= 0.1
inline CheckReport curvature_report(const ParamSurface& S, unsigned seed, int n = 20, double box = 2.0, double tol = 1e-5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-box, box);
    ResidualStats st;
    int attempts = 0, rejected = 0;
    while (st.n < n && attempts < 1000 * n) {
        ++attempts;
        const double u = U(rng), v = U(rng);
        if (std::hypot(u, v) < 0.5 || !(S.singular_distance(u, v) > std::max(0.2, 10 * S.guard()))) continue;
        if (immersion_margin(S.eval(u, v)) < 0.1) { ++rejected; continue; }
        const Curvatures a = curvatures(S, u, v), b = curvatures_fd(S, u, v);
        const double sc = std::max({1.0, std::abs(a.H), std::abs(a.K)});
        st.add(std::max(std::abs(a.H - b.H), std::abs(a.K - b.K)) / sc);
    }
    CheckReport c = st.report("curvature", tol);
    if (st.n < n) c.pass = false;
    c.meta = {{"seed", seed}, {"step", 1e-4}, {"rejected_margin", rejected}};
    return c;
}

// random bumps in the annulus 1.4 <= rho <= 2.2
inline Bump draw_bump(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> R(1.4, 2.2), T(0, 2 * M_PI), W(0.2, 0.35);
    const double r = R(rng), t = T(rng);
    const double w = W(rng);
    return {Vec2(r * std::cos(t), r * std::sin(t)), w, 1.0};
}

inline std::vector<Bump> random_bumps(unsigned seed, int n = 5) {
    std::mt19937_64 rng(seed);
    std::vector<Bump> out;
    for (int k = 0; k < n; ++k) out.push_back(draw_bump(rng));
    return out;
}

// smallest immersion margin of the reconstructed surface over a 21 x 21 sampling of the bump disk;
// 0 if the disk reaches the guard of a singular point
inline double bump_margin(const ScalarField& F, const Bump& b) {
    const ParamSurface S = reconstruct_surface(F, "local");
    double m = kInf;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const Vec2 d(b.radius * (i / 10.0 - 1), b.radius * (j / 10.0 - 1));
            if (d.norm() > b.radius) continue;
            const Vec2 p = b.center + d;
            if (!(F.singular_distance(p.x(), p.y()) > std::max(1e-2, F.guard()))) return 0.0;
            m = std::min(m, immersion_margin(S.eval(p.x(), p.y())));
        }
    return m;
}

// bumps supported where the surface of F is immersed (margin >= min_margin)
inline std::vector<Bump> admissible_bumps(const ScalarField& F, unsigned seed, int n, double min_margin, int* rejected = nullptr) {
    std::mt19937_64 rng(seed);
    std::vector<Bump> out;
    int rej = 0;
    while (static_cast<int>(out.size()) < n) {
        if (rej > 1000 * n) throw Error(ErrorKind::DomainMismatch, "no immersed bump support found");
        const Bump b = draw_bump(rng);
        if (bump_margin(F, b) >= min_margin) out.push_back(b);
        else ++rej;
    }
    if (rejected) *rejected = rej;
    return out;
}

// |dOmega(F)| / |dOmega(x^4)| on shared bumps; residual is the ratio
inline CheckReport stationarity_report(const ScalarField& F, unsigned seed, int n = 5, double tol = 0.1, double min_margin = 1e-2) {
    const ScalarField control = make_poly_field({{1.0, 4, 0}});
    ResidualStats st;
    Json rows = Json::array();
    int rejected = 0;
    for (const Bump& b : admissible_bumps(F, seed, n, min_margin, &rejected)) {
        const double dF = std::abs(first_variation(F, b)), dC = std::abs(first_variation(control, b));
        st.add(dF / dC);
        rows.push_back({{"center", {b.center.x(), b.center.y()}}, {"radius", b.radius}, {"dOmega", dF}, {"dOmega_control", dC}});
    }
    CheckReport c = st.report("stationarity", tol);
    c.meta = {{"seed", seed}, {"control", "x^4"}, {"min_margin", min_margin}, {"rejected_bumps", rejected}, {"bumps", rows}};
    return c;
}

} // namespace lagmin
