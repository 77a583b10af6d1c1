#include "lagmin/biharmonic.hpp"
#include "test_util.hpp"

using namespace lagmin;

namespace {

struct OracleRow {
    const char* field;
    double x, y;
    double d[15];  // order 0..4, within an order from x^n down to y^n
};

const OracleRow kOracle[] = {
#include "biharmonic_oracle.inc"
};

EllipticCoeffs oracle_elliptic() {
    return {0.7, -0.4, 1.1, 0.3, 0.5, -0.2, 0.9, 0.3, 0.6, -0.8, 0.25, -1.3};
}

ScalarField oracle_field(const std::string& name) {
    if (name == "elliptic") return make_elliptic_field(oracle_elliptic());
    if (name == "hyperbolic") {
        HyperbolicCoeffs h;
        h.alpha = {0.5, -0.75, 0.4, 1.0 / 3};
        h.beta = {-0.2, 0.5, -0.7, 0.6};
        h.gamma = {1, -0.5, 0.75, 0.4};
        return make_hyperbolic_field(h);
    }
    if (name == "parabolic") {
        ParabolicCoeffs p;
        p.alpha = {1.0 / 3, -0.5, 0.75, 0.4};
        p.beta = {-0.2, 0.5, -0.7, 0.6};
        p.gamma = {1, -0.5, 0.75, 0.4};
        return make_parabolic_field(p);
    }
    if (name == "exceptional") return make_exceptional_field({0.5, -1.0 / 3, -0.25, 0.2, 1.5, 2.0 / 3, -1.25, 0.5});
    if (name == "remark") return make_remark_counterexample();
    return pushforward_inversion(make_elliptic_field(oracle_elliptic()));
}

std::vector<ScalarField> biharmonic_zoo() {
    std::vector<ScalarField> out;
    for (const char* n : {"elliptic", "hyperbolic", "parabolic", "exceptional", "kelvin"}) out.push_back(oracle_field(n));
    for (const char* n : {"r1", "r1~", "r2", "r3", "r3~", "r4", "r4~", "r5", "r6", "r6~", "r7", "r8", "r9", "r10", "r11"})
        out.push_back(table_field(n, 0.4));
    out.push_back(make_elliptic_reduced(0.3, -1.2, 0.8, 0.5, -0.6, 1.1, 0.2));
    out.push_back(make_hyperbolic_reduced(0.3, -1.2, 0.8, 0.5, -0.6, 1.1, 0.2));
    out.push_back(make_parabolic_reduced(0.3, -1.2, 0.8, 0.5, -0.6, 1.1, 0.2));
    return out;
}

} // namespace

TEST(Jet, MatchesSymbolicOracle) {
    for (const auto& row : kOracle) {
        const ScalarField F = oracle_field(row.field);
        const Jet4 J = F.eval_jet(row.x, row.y);
        int k = 0;
        for (int n = 0; n <= 4; ++n)
            for (int i = n; i >= 0; --i, ++k)
                EXPECT_NEAR(J.partial(i, n - i), row.d[k], 1e-10 * (1 + std::abs(row.d[k])))
                    << row.field << " at (" << row.x << "," << row.y << ") d" << i << "," << n - i;
    }
}

TEST(Jet, MatchesCentralDifferences) {
    const double h = 1e-4;
    for (const auto& F : biharmonic_zoo())
        for (const Vec2 p : {Vec2(1.3, 0.6), Vec2(-0.8, 1.7), Vec2(0.9, -1.4)}) {
            const Jet4 J = F.eval_jet(p.x(), p.y());
            // first derivatives against values, higher orders against the order below
            const Jet4 Jx1 = F.eval_jet(p.x() + h, p.y()), Jx0 = F.eval_jet(p.x() - h, p.y());
            const Jet4 Jy1 = F.eval_jet(p.x(), p.y() + h), Jy0 = F.eval_jet(p.x(), p.y() - h);
            for (int n = 1; n <= 4; ++n)
                for (int i = 0; i <= n; ++i) {
                    const int j = n - i;
                    const double fd = i > 0 ? (Jx1.partial(i - 1, j) - Jx0.partial(i - 1, j)) / (2 * h)
                                            : (Jy1.partial(i, j - 1) - Jy0.partial(i, j - 1)) / (2 * h);
                    EXPECT_NEAR(J.partial(i, j), fd, 1e-6 * (1 + std::abs(fd))) << F.family() << " d" << i << "," << j;
                }
        }
}

TEST(Jet, PolynomialExample) {
    const ScalarField F = make_poly_field({{1, 2, 1}});
    const Jet4 J = F.eval_jet(1, 2);
    EXPECT_DOUBLE_EQ(J.value(), 2);
    EXPECT_DOUBLE_EQ(J.fx(), 4);
    EXPECT_DOUBLE_EQ(J.fy(), 1);
    EXPECT_DOUBLE_EQ(J.partial(4, 0), 0);
    EXPECT_DOUBLE_EQ(J.partial(2, 1), 2);
}

TEST(Jet, ArctanRowValueAndBranch) {
    const ScalarField F = make_elliptic_field({.a1 = 1, .a3 = -1});
    EXPECT_NEAR(F.value(1, 1), M_PI / 4, 1e-15);
    EXPECT_NEAR(F.with_branch(2).value(1, 1), M_PI / 4 + 2 * M_PI, 1e-14);
    // branch k adds k*pi*(r^2-1), so F_x moves by 2*pi*x
    EXPECT_NEAR(F.with_branch(1).eval_jet(1.2, 0.3).fx() - F.eval_jet(1.2, 0.3).fx(), 2 * M_PI * 1.2, 1e-13);
    EXPECT_NEAR(F.with_branch(1).eval_jet(1.2, 0.3).partial(0, 4), F.eval_jet(1.2, 0.3).partial(0, 4), 1e-12);
}

TEST(Jet, Guard) {
    const ScalarField F = make_elliptic_field({.a1 = 1, .a3 = -1});
    EXPECT_KIND(F.value(0.5e-6, 0), ErrorKind::SingularPoint);
    EXPECT_KIND(bilaplacian(F, 0, 0), ErrorKind::SingularPoint);
    EXPECT_NO_THROW(F.with_guard(1e-9).value(0.5e-6, 0));
    EXPECT_KIND(F.with_guard(0.1).value(0.05, 0.05), ErrorKind::SingularPoint);
    EXPECT_NO_THROW(make_parabolic_field({}).value(0, 0));
}

TEST(Bilaplacian, Examples) {
    EXPECT_EQ(bilaplacian(make_poly_field({{1, 2, 1}}), 0.3, -2), 0);
    EXPECT_DOUBLE_EQ(bilaplacian(make_poly_field({{1, 4, 0}}), 0.3, -2), 24);
    EXPECT_DOUBLE_EQ(bilaplacian(make_poly_field({{1, 2, 2}}), 1.5, 0.7), 8);
    EXPECT_NEAR(laplacian(make_poly_field({{1, 2, 0}, {1, 0, 2}}), 3, 4), 4, 1e-14);
}

TEST(Bilaplacian, FamiliesVanish) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-5, 5);
    for (const auto& F : biharmonic_zoo()) {
        double worst = 0;
        for (int k = 0; k < 1000; ++k) {
            const double x = U(rng), y = U(rng);
            // r^-2 terms have fourth derivatives ~ r^-6; closer in, round-off alone exceeds 1e-9
            if (F.singular_distance(x, y) < 0.25) continue;
            worst = std::max(worst, std::abs(bilaplacian(F, x, y)));
        }
        EXPECT_LT(worst, 1e-9) << F.family();
    }
}

TEST(Bilaplacian, CounterexampleIsNotBiharmonic) {
    const ScalarField F = make_remark_counterexample();
    EXPECT_DOUBLE_EQ(F.value(0, 0), 1);
    EXPECT_GT(std::abs(bilaplacian(F, 1, 1)), 1e-3);
    const double t = 2;
    const Cycle S{1, -t, 0, -std::sqrt(t * t - 1)};
    EXPECT_LT(restrict_to_circle(F, S, 1), 1e-9);
}

TEST(FdBilaplacian, Examples) {
    EXPECT_NEAR(fd_bilaplacian(make_poly_field({{1, 4, 0}}), 0.3, 0.2, 1e-2), 24, 1e-6);
    EXPECT_NEAR(fd_bilaplacian(make_poly_field({{1, 2, 1}}), 0.3, 0.2, 1e-2), 0, 1e-8);
    const ScalarField E = make_elliptic_field(oracle_elliptic());
    // at h = 1e-3 the stencil is round-off bound (64 eps |F| / h^4 ~ 1e-2), so compare at 1e-2
    EXPECT_NEAR(fd_bilaplacian(E, 2, 1, 1e-2), bilaplacian(E, 2, 1), 1e-3);
    EXPECT_KIND(fd_bilaplacian(E, 0.01, 0, 1e-2), ErrorKind::SingularPoint);
}

// leading stencil error is h^2 (F_x6 + F_x4y2 + F_x2y4 + F_y6) / 6, which for a biharmonic F
// equals -(h^2/3) d_xx d_yy (Laplacian F); estimated here from the exact fourth-order jet
static double leading_coefficient(const ScalarField& F, const Vec2& p) {
    const double e = 1e-3;
    auto q = [&](double dy) {
        const Jet4 J = F.eval_jet(p.x(), p.y() + dy);
        return J.partial(4, 0) + J.partial(2, 2);
    };
    auto r = [&](double dx) {
        const Jet4 J = F.eval_jet(p.x() + dx, p.y());
        return J.partial(2, 2) + J.partial(0, 4);
    };
    const double fx4y2_plus = (q(e) - 2 * q(0) + q(-e)) / (e * e);
    const double fx2y4_plus = (r(e) - 2 * r(0) + r(-e)) / (e * e);
    return (fx4y2_plus + fx2y4_plus) / 6;
}

TEST(FdBilaplacian, SecondOrderConvergence) {
    int measured = 0;
    for (const auto& F : biharmonic_zoo())
        for (const Vec2 p : {Vec2(0.7, 0.5), Vec2(-0.6, 0.9), Vec2(1.1, -0.4)}) {
            const double c2 = leading_coefficient(F, p);
            const double exact = bilaplacian(F, p.x(), p.y());
            const double e1 = std::abs(fd_bilaplacian(F, p.x(), p.y(), 0.02) - exact);
            const double e2 = std::abs(fd_bilaplacian(F, p.x(), p.y(), 0.01) - exact);
            if (std::abs(c2) < 1e-2) {
                // no h^2 term: polynomial rows are exact, others converge at fourth order
                EXPECT_LT(e2, 1e-3) << F.family();
                continue;
            }
            ++measured;
            EXPECT_NEAR(std::log2(e1 / e2), 2, 0.2) << F.family() << " at " << p.transpose();
            EXPECT_NEAR(e2, std::abs(c2) * 1e-4, 0.1 * std::abs(c2) * 1e-4);
        }
    EXPECT_GE(measured, 30);
}

TEST(Elliptic, Examples) {
    const ScalarField F = make_elliptic_field({.c1 = 1});
    EXPECT_DOUBLE_EQ(F.value(3, 2), 4);
    EXPECT_EQ(bilaplacian(F, 3, 2), 0);
    const ScalarField G = make_elliptic_field(oracle_elliptic());
    for (double t : {2.0, -0.5, 0.0, 7.0}) EXPECT_LT(restrict_to_circle(G, Cycle::line(t, -1, 0), 2), 1e-9);
}

TEST(Hyperbolic, Examples) {
    // reduced form of (r^2-1)(ln r^2 - 2)/2 - 2
    const ScalarField F = make_hyperbolic_reduced(0.5, 0, -0.5, 0, 0, 0, 0) + make_poly_field({{-1, 2, 0}, {-1, 0, 2}, {-1, 0, 0}});
    for (const Vec2 p : {Vec2(0.4, 1.1), Vec2(-2, 0.3)}) {
        const double r2 = p.squaredNorm();
        EXPECT_NEAR(F.value(p.x(), p.y()), (r2 - 1) * (std::log(r2) - 2) / 2 - 2, 1e-13);
    }
    const ScalarField T = table_field("r4");
    EXPECT_NEAR(T.value(0.4, 1.1), F.value(0.4, 1.1), 1e-13);
    EXPECT_LT(restrict_to_circle(T, Cycle::circle(0, 0, 2), 1), 1e-9);
    EXPECT_EQ(make_hyperbolic_field({}).value(1.5, -0.2), 0);
    const ScalarField G = oracle_field("hyperbolic");
    for (double r : {0.3, 1.0, 2.5}) EXPECT_LT(restrict_to_circle(G, Cycle::circle(0, 0, r), 1), 1e-9);
}

TEST(Parabolic, Examples) {
    ParabolicCoeffs p;
    p.alpha[3] = 1;
    const ScalarField F = make_parabolic_field(p);
    EXPECT_NEAR(F.value(1.5, 2), std::pow(1.5, 3) * 4 - std::pow(1.5, 5) / 5, 1e-13);
    EXPECT_NEAR(bilaplacian(F, 1.5, 2), 0, 1e-12);
    const ScalarField G = oracle_field("parabolic");
    for (double t : {3.0, -1.0, 0.0}) {
        const auto fit = restrict_fit(G, Cycle::line(1, 0, t), 2);
        EXPECT_LT(fit.rms, 1e-9);
    }
    EXPECT_EQ(bilaplacian(make_poly_field({{1, 2, 1}}), 2, 3), 0);
}

TEST(Exceptional, Examples) {
    const ScalarField F = make_exceptional_field({.a = 1, .b = -2, .A = 1});
    EXPECT_DOUBLE_EQ(F.value(2, -1), 2);
    EXPECT_EQ(F.singular_distance(0, 0), kInf);
    const ScalarField G = make_exceptional_field({.A = 1, .B = 1});
    EXPECT_LT(restrict_to_circle(G, Cycle{1, -2, 0, 0}, 1), 1e-9);
    EXPECT_LT(restrict_to_circle(G, Cycle{1, 0.7, -1.3, 0}, 1), 1e-9);
    EXPECT_KIND(G.value(0, 0), ErrorKind::SingularPoint);
}

TEST(Restriction, Examples) {
    EXPECT_GT(restrict_to_circle(make_poly_field({{1, 4, 0}}), Cycle::circle(0, 0, 1), 1), 1e-2);
    EXPECT_LT(restrict_to_circle(make_poly_field({{5, 0, 0}}), Cycle::circle(3, 1, 0.5), 1), 1e-14);
    // a circle entirely inside the guard has no usable samples
    const ScalarField E = make_elliptic_field({.a1 = 1}).with_guard(1.0);
    EXPECT_KIND(restrict_to_circle(E, Cycle::circle(0, 0, 0.5), 1), ErrorKind::EmptyIntersection);
}

TEST(Kelvin, Examples) {
    const ScalarField one = pushforward_inversion(make_poly_field({{1, 0, 0}}));
    EXPECT_NEAR(one.value(0.3, 1.2), 0.09 + 1.44, 1e-15);
    const ScalarField X = pushforward_inversion(make_poly_field({{1, 1, 0}}));
    EXPECT_NEAR(X.value(0.3, 1.2), 0.3, 1e-15);
    EXPECT_KIND(one.value(0, 0), ErrorKind::SingularPoint);
}

TEST(Kelvin, PreservesBiharmonicity) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> U(-3, 3);
    for (const auto& F : biharmonic_zoo()) {
        const ScalarField G = pushforward_inversion(F);
        for (int k = 0; k < 100; ++k) {
            const double x = U(rng), y = U(rng);
            if (G.singular_distance(x, y) < 0.1) continue;
            const double scale = std::abs(G.eval_jet(x, y).partial(4, 0)) + 1;
            EXPECT_LT(std::abs(bilaplacian(G, x, y)), 1e-9 * scale) << F.family();
        }
    }
}

TEST(Kelvin, Involution) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-3, 3);
    for (const auto& F : biharmonic_zoo()) {
        const ScalarField G = pushforward_inversion(pushforward_inversion(F));
        for (int k = 0; k < 50; ++k) {
            const double x = U(rng), y = U(rng);
            if (G.singular_distance(x, y) < 0.1 || F.crosses_cut(Vec2(x, y), Vec2(x, y))) continue;
            EXPECT_NEAR(G.value(x, y), F.value(x, y), 1e-10 * (1 + std::abs(F.value(x, y))));
        }
    }
}

TEST(Rotate, MatchesRotatedArguments) {
    const ScalarField F = make_parabolic_reduced(0.3, -1.2, 0.8, 0.5, -0.6, 1.1, 0.2);
    const ScalarField G = rotate_field(F, 0.7);
    const Vec2 p(0.4, -1.3), q = rotate2(p, -0.7);
    EXPECT_NEAR(G.value(p.x(), p.y()), F.value(q.x(), q.y()), 1e-13);
    EXPECT_NEAR(bilaplacian(G, p.x(), p.y()), 0, 1e-10);
}

TEST(NamedField, UnknownName) { EXPECT_KIND(table_field("r12"), ErrorKind::UnknownName); }
