#include "lagmin/reconstruct.hpp"
#include "test_util.hpp"

using namespace lagmin;

namespace {

std::vector<ScalarField> fields() {
    std::vector<ScalarField> out;
    for (const char* n : {"r1", "r2", "r3", "r4", "r4~", "r5", "r6", "r7", "r8", "r9", "r10", "r11"})
        out.push_back(table_field(n, 0.3));
    out.push_back(make_elliptic_field({0.7, -0.4, 1.1, 0.3, 0.5, -0.2, 0.9, 0.3, 0.6, -0.8, 0.25, -1.3}));
    out.push_back(make_exceptional_field({0.5, -0.3, -0.25, 0.2, 1.5, 0.6, -1.25, 0.5}));
    out.push_back(make_remark_counterexample());
    out.push_back(pushforward_inversion(table_field("r9")));
    return out;
}

} // namespace

TEST(Reconstruct, UnitSphere) {
    const ScalarField F = make_poly_field({{0.5, 2, 0}, {0.5, 0, 2}, {0.5, 0, 0}});
    const ParamSurface S = reconstruct_surface(F);
    EXPECT_LT((S.point(0, 0) - Vec3(0, 0, -1)).norm(), 1e-15);
    for (double x : {-2.0, 0.3, 1.7})
        for (double y : {-0.5, 0.0, 3.0}) EXPECT_NEAR(S.point(x, y).norm(), 1, 1e-14);
    const IsoPoint q = isotropic_image(S, 0, 0);
    ASSERT_FALSE(q.ideal);
    EXPECT_LT((q.p - Vec3(0, 0, 0.5)).norm(), 1e-15);
}

TEST(Reconstruct, PointAndZero) {
    const ParamSurface P = reconstruct_surface(make_poly_field({{1, 1, 0}}));
    const ParamSurface Z = reconstruct_surface(make_poly_field({}));
    for (double x : {-2.0, 0.3, 1.7})
        for (double y : {-0.5, 0.0, 3.0}) {
            EXPECT_LT((P.point(x, y) - Vec3(-1, 0, 0)).norm(), 1e-15);
            EXPECT_EQ(Z.point(x, y).norm(), 0.0);
        }
    // a point has no tangent planes of its own
    EXPECT_KIND(P.normal(0.4, 0.2), ErrorKind::NonImmersed);
}

TEST(Reconstruct, RoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-3, 3);
    for (const auto& F : fields()) {
        const ParamSurface S = reconstruct_surface(F);
        if (S.eval(1.0, 0.5).ru.cross(S.eval(1.0, 0.5).rv).norm() < 1e-12) continue;  // r2 is a curve
        double worst = 0;
        int used = 0;
        for (int k = 0; k < 1000; ++k) {
            const double x = U(rng), y = U(rng);
            if (F.singular_distance(x, y) < 0.1) continue;
            const SurfacePoint p = S.eval(x, y);
            if (p.ru.cross(p.rv).norm() < 1e-6) continue;
            const IsoPoint q = isotropic_image(S, x, y);
            ASSERT_FALSE(q.ideal);
            worst = std::max(worst, (q.p - Vec3(x, y, F.value(x, y))).norm() / (1 + std::abs(F.value(x, y))));
            ++used;
        }
        EXPECT_GT(used, 800) << F.family();
        EXPECT_LT(worst, 1e-8) << F.family();
    }
}

TEST(Reconstruct, JetsMatchDifferences) {
    const double h = 1e-5;
    for (const auto& F : fields()) {
        const ParamSurface S = reconstruct_surface(F);
        for (const Vec2 p : {Vec2(0.8, 0.6), Vec2(-1.2, 0.7)}) {
            const SurfacePoint s = S.eval(p.x(), p.y());
            const SurfacePoint su1 = S.eval(p.x() + h, p.y()), su0 = S.eval(p.x() - h, p.y());
            const SurfacePoint sv1 = S.eval(p.x(), p.y() + h), sv0 = S.eval(p.x(), p.y() - h);
            const double tol = 1e-6 * (1 + s.ruu.norm() + s.rvv.norm() + s.ruv.norm());
            EXPECT_LT((s.ru - (su1.r - su0.r) / (2 * h)).norm(), tol);
            EXPECT_LT((s.rv - (sv1.r - sv0.r) / (2 * h)).norm(), tol);
            EXPECT_LT((s.ruu - (su1.ru - su0.ru) / (2 * h)).norm(), tol);
            EXPECT_LT((s.ruv - (sv1.ru - sv0.ru) / (2 * h)).norm(), tol);
            EXPECT_LT((s.rvv - (sv1.rv - sv0.rv) / (2 * h)).norm(), tol);
            EXPECT_LT((s.r - S.point(p.x(), p.y())).norm(), 1e-13);
        }
    }
}

TEST(Reconstruct, CycloidIsACurve) {
    const ParamSurface S = reconstruct_surface(table_field("r2"));
    for (const Vec2 p : {Vec2(1.0, 0.5), Vec2(-2, 1.3)}) EXPECT_KIND(S.normal(p.x(), p.y()), ErrorKind::NonImmersed);
}

TEST(Reconstruct, Linearity) {
    const ScalarField F = table_field("r4"), G = table_field("r9");
    const double a = 0.7, b = -1.9;
    const ParamSurface SF = reconstruct_surface(F), SG = reconstruct_surface(G);
    const ParamSurface SS = reconstruct_surface(a * F + b * G);
    for (double x : {-2.0, 0.3, 1.7})
        for (double y : {-0.5, 0.4, 3.0}) {
            const Vec3 lhs = SS.point(x, y), rhs = a * SF.point(x, y) + b * SG.point(x, y);
            EXPECT_LT((lhs - rhs).norm(), 1e-12 * (1 + rhs.norm()));
        }
}

TEST(Reconstruct, SphereFidelity) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int k = 0; k < 50; ++k) {
        const OrientedSphere Sph{Vec3(U(rng), U(rng), U(rng)), U(rng)};
        const ParamSurface S = reconstruct_surface(make_sphere_field(sphere_to_imsphere(Sph)));
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const Vec3 r = S.point(0.5 * i, 0.5 * j);
                EXPECT_LT(std::abs((r - Sph.m).norm() - std::abs(Sph.R)), 1e-10);
            }
    }
}

TEST(Reconstruct, SingularPointPropagates) {
    const ParamSurface S = reconstruct_surface(table_field("r4"));
    EXPECT_KIND(S.point(0, 0), ErrorKind::SingularPoint);
    EXPECT_KIND(S.eval(1e-8, 0), ErrorKind::SingularPoint);
}

TEST(IsotropicImage, IdealAndNonImmersed) {
    // plane z = 0 parametrized with downward normal
    const ParamSurface down = make_function_surface(
        [](const Taylor2<2>& u, const Taylor2<2>& v) { return std::array<Taylor2<2>, 3>{v, u, Taylor2<2>(0.0)}; }, "plane");
    EXPECT_KIND(isotropic_image(down, 0.2, 0.1), ErrorKind::IdealImage);
    const ParamSurface curve = make_function_surface(
        [](const Taylor2<2>& u, const Taylor2<2>&) { return std::array<Taylor2<2>, 3>{u, u * u, Taylor2<2>(0.0)}; }, "curve");
    EXPECT_KIND(isotropic_image(curve, 0.2, 0.1), ErrorKind::NonImmersed);
}

TEST(IsotropicImage, FollowsGaussOrientation) {
    const ParamSurface S = reconstruct_surface(table_field("r7"));
    for (const Vec2 p : {Vec2(0.3, 0.2), Vec2(-1.5, 2.0)})
        EXPECT_LT((S.normal(p.x(), p.y()) - inv_stereo(p.x(), p.y())).norm(), 1e-10);
}
