import random

import pytest

from pcfram.errors import InvalidInput, NonInvariantLine
from pcfram.exactmath import UniPoly
from pcfram.multivar import (
    EX10_DEN,
    EX10_NUM,
    MapPN,
    MultiPoly,
    compose_map,
    dupont_map,
    exact_divide,
    identity_map,
    iterate_pn,
    jacobian_det,
    jacobian_matrix,
    linear_factors,
    restrict_to_line,
    restricted_dupont_cube,
    tchebyshev_map,
    tchebyshev_pi_cleared,
    verify_dupont,
    verify_tchebyshev,
)

M = MultiPoly.parse
x, y, z = MultiPoly.gens(3)


def _random_poly(rng, nvars=3, terms=4, deg=3):
    out = MultiPoly.const(0, nvars)
    gens = MultiPoly.gens(nvars)
    for _ in range(terms):
        t = MultiPoly.const(rng.randint(-5, 5), nvars)
        for _ in range(rng.randint(0, deg)):
            t = t * rng.choice(gens)
        out = out + t
    return out


def test_parse_and_print():
    assert str(M("(x+y)^2 - 2*x*y")) == "x^2 + y^2"
    assert str(M("x^2*y - 2*z^3")) == "x^2*y - 2*z^3"
    assert str(M("0")) == "0"
    assert M("3*x - 3*x") == MultiPoly.const(0, 3)


def test_arithmetic_examples():
    assert (x + y) * (x - y) == M("x^2 - y^2")
    assert (x - y) ** 3 == M("x^3 - 3*x^2*y + 3*x*y^2 - y^3")
    assert M("x^2*y*z").diff(0) == M("2*x*y*z")
    assert M("x*y + z").substitute([y, x, z]) == M("x*y + z")
    assert M("x^2 + y*z").evaluate([2, 3, 4]) == 16


def test_ring_axioms_random():
    rng = random.Random(12)
    for _ in range(100):
        a, b, c = (_random_poly(rng) for _ in range(3))
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == MultiPoly.const(0, 3)


def test_exact_divide_random():
    rng = random.Random(13)
    for _ in range(100):
        a, b = _random_poly(rng), _random_poly(rng)
        if not b:
            continue
        assert exact_divide(a * b, b) == a
    assert exact_divide(x * y + 1, x) is None


def test_jacobian_chain_rule():
    # det J(f o g) = det J(f)(g) * det J(g)
    rng = random.Random(14)
    for _ in range(10):
        f = MapPN(tuple(sum((rng.randint(-2, 2) * u * v for u in (x, y, z) for v in (x, y, z)), MultiPoly.const(0, 3)) + x * x for _ in range(3)))
        g = MapPN(tuple(sum((rng.randint(-2, 2) * u for u in (x, y, z)), MultiPoly.const(0, 3)) + w for w in (x, y, z)))
        fg = MapPN(tuple(c.substitute(list(g.coords)) for c in f.coords))
        assert jacobian_det(fg) == jacobian_det(f).substitute(list(g.coords)) * jacobian_det(g)


def test_jacobian_examples():
    assert jacobian_det(tchebyshev_map()) == M("8*x*y*z - 8*z^3")
    assert jacobian_det(dupont_map()) == M("-32*(x-y-z)*(x-y+z)*(x+y-z)")
    assert jacobian_matrix([x * y])[0] == [y, x, MultiPoly.const(0, 3)]


def test_linear_factors():
    lines, rest = linear_factors(M("x*y*(x-y)^2*(x^2+y^2+z^2)"))
    assert sorted((str(L), e) for L, e in lines) == [("x", 1), ("x - y", 2), ("y", 1)]
    assert rest == M("x^2+y^2+z^2")


def test_compose_examples():
    sq = MapPN((x**2, y**2, z**2))
    assert compose_map(sq, sq) == MapPN((x**4, y**4, z**4))
    assert compose_map(identity_map(), dupont_map()) == dupont_map()
    assert iterate_pn(sq, 3) == MapPN((x**8, y**8, z**8))
    with pytest.raises(InvalidInput):
        compose_map(sq, MapPN((x, y)))
    with pytest.raises(InvalidInput):
        MapPN((x**2, y))


def test_restriction_formula():
    assert restricted_dupont_cube() == (EX10_NUM, EX10_DEN)
    assert EX10_NUM == UniPoly.parse("(4*x^2-4*x-1)^4")
    assert EX10_DEN == UniPoly.parse("(16*x^4-32*x^3+40*x^2-24*x+1)^2")


def test_restriction_errors():
    t = UniPoly((0, 1))
    one = UniPoly((1,))
    with pytest.raises(InvalidInput):
        restrict_to_line(dupont_map(), (t, t, one), x - 2 * y, (x, z))  # param is off the line
    f = MapPN((x**2, y**2 + x * y, z**2))
    with pytest.raises(NonInvariantLine):
        restrict_to_line(f, (t, t, one), x - y, (x, z))
    assert restrict_to_line(identity_map(), (t, t, one), x - y, (x, z)) == (t, one)


def test_verify_dupont_passes():
    rep = verify_dupont()
    assert rep.passed, rep.as_dict()
    ids = [c.check_id for c in rep.checks]
    assert ids == [
        "a-jacobian-linear-factors",
        "b-postcritical-closure",
        "c-three-cycle",
        "restriction-formula",
        "d-critical-multiplicity",
        "e-critical-values",
        "f-restricted-pcf",
    ]


def test_verify_dupont_negative_control():
    f = MapPN(((x - y + z) ** 2, (x + y - z) ** 2, (-x + y + 2 * z) ** 2))
    rep = verify_dupont(f)
    assert not rep.passed
    assert not rep.check("b-postcritical-closure").passed


def test_verify_tchebyshev_passes():
    rep = verify_tchebyshev()
    assert rep.passed, rep.as_dict()
    assert [c.check_id for c in rep.checks] == ["a-semiconjugacy", "b-ramification-locus", "c-critical-images"]


def test_verify_tchebyshev_negative_control():
    X, _ = MultiPoly.gens(2, ("x", "y"))
    U, V, W = tchebyshev_pi_cleared()
    rep = verify_tchebyshev(pi=(U, V + X, W))
    assert not rep.check("a-semiconjugacy").passed


def _from_sympy(expr):
    import sympy

    sx, sy, sz = sympy.symbols("x y z")
    poly = sympy.Poly(sympy.expand(expr), sx, sy, sz)
    return MultiPoly({tuple(m): int(c) for m, c in poly.terms()}, 3)


def test_dupont_square_and_jacobians_against_sympy():
    import sympy

    sx, sy, sz = sympy.symbols("x y z")
    f = [(sx - sy + sz) ** 2, (sx + sy - sz) ** 2, (-sx + sy + sz) ** 2]
    f2 = [c.subs({sx: f[0], sy: f[1], sz: f[2]}, simultaneous=True) for c in f]
    g = sympy.gcd(sympy.gcd(*[sympy.Poly(c, sx, sy, sz).content() for c in f2[:2]]), sympy.Poly(f2[2], sx, sy, sz).content())
    want = MapPN(tuple(_from_sympy(sympy.expand(c / g)) for c in f2))
    got = iterate_pn(dupont_map(), 2)
    assert got == want and got.degree == 4
    for m, coords in [(dupont_map(), f), (tchebyshev_map(), [sx**2 - 2 * sy * sz, sy**2 - 2 * sx * sz, sz**2])]:
        jac = sympy.Matrix([[sympy.diff(c, v) for v in (sx, sy, sz)] for c in coords]).det()
        assert jacobian_det(m) == _from_sympy(jac)
