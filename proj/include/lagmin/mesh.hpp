#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "lagmin/reconstruct.hpp"

namespace lagmin {

// LAGMIN_THREADS caps parallelism; default hardware concurrency
inline unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* e = std::getenv("LAGMIN_THREADS")) {
        const long v = std::strtol(e, nullptr, 10);
        if (v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

// f(i) for i in [0, n), rows split into contiguous chunks
inline void parallel_for(int n, const std::function<void(int)>& f) {
    const unsigned T = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max(n, 1)));
    if (T <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            for (int i = static_cast<int>(t); i < n; i += static_cast<int>(T)) f(i);
        });
    for (auto& th : pool) th.join();
}

struct Mesh {
    int nu = 0, nv = 0;
    std::vector<Vec3> vertices;            // nu * nv, row-major in u
    std::vector<char> valid;
    std::vector<std::array<int, 4>> faces;  // grid indices
    std::vector<std::vector<Vec3>> polylines;

    int invalid_count() const { return static_cast<int>(std::count(valid.begin(), valid.end(), 0)); }
};

struct MeshRange {
    double u0 = -2, u1 = 2, v0 = -2, v1 = 2;
};

using PointMap = std::function<Vec3(double, double)>;

// cells with an invalid corner or an edge crossing a branch cut are dropped
inline Mesh mesh_grid(const PointMap& f, int nu, int nv, const MeshRange& r,
                      const std::function<bool(double, double)>& ok = nullptr,
                      const std::function<bool(const Vec2&, const Vec2&)>& cut = nullptr) {
    Mesh m;
    m.nu = nu, m.nv = nv;
    m.vertices.assign(static_cast<size_t>(nu) * nv, Vec3::Zero());
    m.valid.assign(static_cast<size_t>(nu) * nv, 0);
    auto U = [&](int i) { return nu > 1 ? r.u0 + (r.u1 - r.u0) * i / (nu - 1) : r.u0; };
    auto V = [&](int j) { return nv > 1 ? r.v0 + (r.v1 - r.v0) * j / (nv - 1) : r.v0; };
    parallel_for(nu, [&](int i) {
        for (int j = 0; j < nv; ++j) {
            const double u = U(i), v = V(j);
            if (ok && !ok(u, v)) continue;
            try {
                const Vec3 p = f(u, v);
                if (p.allFinite()) m.vertices[i * nv + j] = p, m.valid[i * nv + j] = 1;
            } catch (const Error&) {
            }
        }
    });
    for (int i = 0; i + 1 < nu; ++i)
        for (int j = 0; j + 1 < nv; ++j) {
            const std::array<int, 4> q{i * nv + j, (i + 1) * nv + j, (i + 1) * nv + j + 1, i * nv + j + 1};
            bool good = true;
            for (int k : q) good = good && m.valid[k];
            if (good && cut) {
                const Vec2 a(U(i), V(j)), b(U(i + 1), V(j)), c(U(i + 1), V(j + 1)), d(U(i), V(j + 1));
                good = !cut(a, b) && !cut(b, c) && !cut(c, d) && !cut(d, a);
            }
            if (good) m.faces.push_back(q);
        }
    return m;
}

inline Mesh mesh_surface(const ParamSurface& S, int nu, int nv, const MeshRange& r) {
    return mesh_grid([&](double u, double v) { return S.node().point(u, v); }, nu, nv, r,
                     [&](double u, double v) { return S.in_domain(u, v); },
                     [&](const Vec2& a, const Vec2& b) { return S.crosses_cut(a, b); });
}

// graph (x, y, F(x, y)) of the isotropic model
inline Mesh mesh_graph(const ScalarField& F, int nu, int nv, const MeshRange& r) {
    return mesh_grid([&](double x, double y) { return Vec3(x, y, F.value(x, y)); }, nu, nv, r,
                     [&](double x, double y) { return F.in_domain(x, y); },
                     [&](const Vec2& a, const Vec2& b) { return F.crosses_cut(a, b); });
}

inline std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// only valid vertices are written; faces and polylines use 1-based indices into them
inline std::string to_obj(const Mesh& m, const std::string& comment = "") {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    std::vector<int> index(m.vertices.size(), 0);
    int next = 1;
    for (size_t k = 0; k < m.vertices.size(); ++k) {
        if (!m.valid[k]) continue;
        index[k] = next++;
        const Vec3& p = m.vertices[k];
        out += "v " + fmt_g(p.x()) + " " + fmt_g(p.y()) + " " + fmt_g(p.z()) + "\n";
    }
    for (const auto& q : m.faces)
        out += "f " + std::to_string(index[q[0]]) + " " + std::to_string(index[q[1]]) + " " + std::to_string(index[q[2]]) + " " +
               std::to_string(index[q[3]]) + "\n";
    for (const auto& line : m.polylines) {
        std::string l = "l";
        int count = 0;
        for (const Vec3& p : line) {
            if (!p.allFinite()) continue;
            out += "v " + fmt_g(p.x()) + " " + fmt_g(p.y()) + " " + fmt_g(p.z()) + "\n";
            l += " " + std::to_string(next++);
            ++count;
        }
        if (count >= 2) out += l + "\n";
    }
    return out;
}

} // namespace lagmin
