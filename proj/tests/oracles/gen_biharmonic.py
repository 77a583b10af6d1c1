# Reference jets for test_biharmonic.cpp, computed symbolically with sympy.
# Usage: python3 gen_biharmonic.py > ../biharmonic_oracle.inc
import sympy as sp

x, y = sp.symbols("x y", real=True)
r2 = x**2 + y**2
at = sp.atan2(y, x)
R = sp.Rational


def elliptic(a1, a2, a3, a4, b1, b2, b3, c1, c2, c3, d1, d2):
    return ((a1 * r2 + a2 * x + a3 + a4 * y) * at + (b1 * y**2 + b2 * x * y + b3 * x**2) / r2
            + c1 * y**2 + c2 * x * y + c3 * x**2 + d1 * x + d2 * y)


def hyperbolic(al, be, ga):
    lr = sp.log(r2) / 2
    ax = al[0] + al[1] * lr + al[2] / r2 + al[3] * r2
    by = be[0] + be[1] * lr + be[2] / r2 + be[3] * r2
    c = ga[0] + ga[1] * r2 + ga[2] * lr + ga[3] * r2 * lr
    return x * ax + y * by + c


def parabolic(al, be, ga):
    A = sum(al[i] * x**i for i in range(4))
    B = sum(be[i] * x**i for i in range(4))
    C = sum(ga[i] * x**i for i in range(4)) - al[2] * x**4 / 3 - al[3] * x**5 / 5
    return A * y**2 + B * y + C


def exceptional(a, b, c, d, A, B, C, D):
    X, Y = x - c, y - d
    return A * ((x - a)**2 + (y - b)**2) + (B * X**2 + C * X * Y + D * Y**2) / (X**2 + Y**2)


E = elliptic(R(7, 10), R(-2, 5), R(11, 10), R(3, 10), R(1, 2), R(-1, 5), R(9, 10), R(3, 10), R(3, 5), R(-4, 5), R(1, 4), R(-13, 10))
H = hyperbolic([R(1, 2), R(-3, 4), R(2, 5), R(1, 3)], [R(-1, 5), R(1, 2), R(-7, 10), R(3, 5)], [R(1, 1), R(-1, 2), R(3, 4), R(2, 5)])
P = parabolic([R(1, 3), R(-1, 2), R(3, 4), R(2, 5)], [R(-1, 5), R(1, 2), R(-7, 10), R(3, 5)], [R(1, 1), R(-1, 2), R(3, 4), R(2, 5)])
X = exceptional(R(1, 2), R(-1, 3), R(-1, 4), R(1, 5), R(3, 2), R(2, 3), R(-5, 4), R(1, 2))
M = sp.sqrt(r2**2 - x**2 + 1)
K = (r2 * E.subs({x: x / r2, y: y / r2}, simultaneous=True))

fields = [("elliptic", E, True), ("hyperbolic", H, True), ("parabolic", P, True),
          ("exceptional", X, True), ("remark", M, False), ("kelvin_elliptic", K, True)]
points = [(R(13, 10), R(-7, 10)), (R(-9, 10), R(8, 5)), (R(21, 10), R(3, 5))]

print("// generated by oracles/gen_biharmonic.py")
for name, F, bih in fields:
    if bih:
        b = sp.diff(F, x, 4) + 2 * sp.diff(F, x, 2, y, 2) + sp.diff(F, y, 4)
        for px, py in points:
            assert abs(sp.N(b.subs({x: px, y: py}), 40)) < 1e-30, name
    for px, py in points:
        vals = []
        for n in range(5):
            for i in range(n, -1, -1):
                j = n - i
                d = F
                if i: d = sp.diff(d, x, i)
                if j: d = sp.diff(d, y, j)
                vals.append(sp.N(d.subs({x: px, y: py}), 20))
        print('{"%s", %s, %s, {%s}},' % (name, float(px), float(py), ", ".join("%.17g" % float(v) for v in vals)))
