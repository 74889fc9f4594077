import random
from fractions import Fraction

import pytest

from pcfram.dynamics import ProjPoint, parse_map
from pcfram.errors import InvalidInput, PreperiodicPoint
from pcfram.exactmath import UniPoly
from pcfram.padic import (
    INF,
    Segment,
    integrality_obstruction,
    lemma12_search,
    merge_polygons,
    newton_polygon,
    orbit_valuation_table,
    root_valuation_multiset,
    vp,
)

P = UniPoly.parse


def test_vp_examples():
    assert vp(5, 5) == 1
    assert vp(Fraction(-9, 2), 3) == 2
    assert vp(Fraction(-9, 2), 2) == -1
    assert vp(0, 7) is INF
    with pytest.raises(InvalidInput):
        vp(12, 4)


def test_infinity_sentinel_orders_above_everything():
    assert INF > 10**100 and INF > Fraction(7, 2) and not INF < 3
    assert INF == INF and INF != 10**100
    assert INF + 5 is INF


def test_polygon_examples():
    np = newton_polygon(P("x^2-2"), 2)
    assert np.segments == (Segment(Fraction(-1, 2), 2),)
    np = newton_polygon(P("x^2+2*x+4"), 2)
    assert np.segments == (Segment(Fraction(-1), 2),) and np.vertices == ((0, 2), (2, 0))
    np = newton_polygon(P("x^4+2*x^2+2"), 2)
    assert np.segments == (Segment(Fraction(-1, 4), 4),)


def test_root_valuation_examples():
    assert root_valuation_multiset(newton_polygon(P("x^2-2"), 2)) == [Fraction(1, 2)] * 2
    # the root 0 of x^2-3x is not listed; the root 3 has valuation 1
    assert root_valuation_multiset(newton_polygon(P("x^2-3*x"), 3)) == [1]
    assert root_valuation_multiset(newton_polygon(P("x^3+x+1"), 5)) == [0, 0, 0]


def test_integrality_obstruction_examples():
    assert integrality_obstruction(newton_polygon(P("x^2-2"), 2), 2)
    assert not integrality_obstruction(newton_polygon(P("x^2+2*x+4"), 2), 2)
    # psi(z) = 3 + z^2 + z^3 at p = 3: constant term of valuation 1, unit z^e coefficient
    assert integrality_obstruction(newton_polygon(P("z^3+z^2+3"), 3), 2)
    # a slope of -1/3 is not a class v/2
    assert not integrality_obstruction(newton_polygon(P("x^3-2"), 2), 2)


def _random_poly(rng, p):
    deg = rng.randint(1, 6)
    coeffs = [rng.choice([0, 1, -1, 2]) * p ** rng.randint(0, 4) * rng.choice([1, 3, 7]) for _ in range(deg)]
    coeffs.append(rng.choice([1, p, p * p, 5]))
    return UniPoly(coeffs)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_product_law(p):
    rng = random.Random(100 + p)
    for _ in range(100):
        f, g = _random_poly(rng, p), _random_poly(rng, p)
        prod = newton_polygon(f * g, p)
        assert prod.segments == merge_polygons(newton_polygon(f, p), newton_polygon(g, p))


def test_polygon_invariants():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        f = _random_poly(rng, p)
        np = newton_polygon(f, p)
        slopes = [s.slope for s in np.segments]
        assert all(a < b for a, b in zip(slopes, slopes[1:]))
        nz = [i for i, c in enumerate(f.coeffs) if c]
        assert np.span == nz[-1] - nz[0]
        assert len(root_valuation_multiset(np)) == f.degree - f.trailing_zeros()


def test_eisenstein_single_segment():
    rng = random.Random(3)
    for _ in range(100):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(1, 8)
        coeffs = [p * rng.choice([1, -1]) * rng.choice([1, 2, 4, 8, 16]) ** 0 * (1 + p * rng.randint(0, 3))]
        coeffs += [p * rng.randint(-5, 5) for _ in range(n - 1)]
        coeffs.append(rng.choice([1, -1]) * (1 + p * rng.randint(0, 3)))
        np = newton_polygon(UniPoly(coeffs), p)
        assert np.segments == (Segment(Fraction(-1, n), n),)


def test_orbit_table_examples():
    rows = orbit_valuation_table(parse_map("z^2+1"), ProjPoint(0, 1), 4)
    assert [str(r.point) for r in rows] == ["1", "2", "5", "26"]
    assert rows[3].numerator.factors == ((2, 1), (13, 1))
    rows = orbit_valuation_table(parse_map("z^2-2"), ProjPoint(0, 1), 4)
    assert [str(r.point) for r in rows] == ["-2", "2", "2", "2"]
    rows = orbit_valuation_table(parse_map("z^2"), ProjPoint(3, 1), 3)
    assert [r.numerator.factors for r in rows] == [((3, 2),), ((3, 4),), ((3, 8),)]


def test_lemma12_witnesses():
    phi = parse_map("z^2+1")
    ws = lemma12_search(phi, ProjPoint(0, 1), 2, {2}, 5)
    assert (5, 3, 1) in [(w.p, w.n, w.v) for w in ws]
    ws = lemma12_search(phi, ProjPoint(0, 1), 2, {2, 5}, 5)
    assert (13, 4, 1) in [(w.p, w.n, w.v) for w in ws]
    for w in ws:
        value = orbit_valuation_table(phi, ProjPoint(0, 1), w.n)[-1].point.value
        assert vp(value, w.p) == w.v and w.v % 2 and w.p not in {2, 5}


def test_lemma12_empty_and_preperiodic():
    assert lemma12_search(parse_map("z^2"), ProjPoint(2, 1), 2, {2}, 6) == []
    with pytest.raises(PreperiodicPoint):
        lemma12_search(parse_map("z^2-2"), ProjPoint(0, 1), 2, {2}, 6)


def test_polygon_ascii_and_json():
    np = newton_polygon(P("x^2-2"), 2)
    assert np.as_dict() == {"p": 2, "vertices": [[0, 1], [2, 0]], "segments": [{"slope": "-1/2", "length": 2}]}
    assert "slope -1/2" in np.to_ascii()
