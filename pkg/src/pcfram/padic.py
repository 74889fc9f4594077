"""p-adic valuations, Newton polygons and orbit-valuation searches."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .dynamics import ProjPoint, RationalMapP1, evaluate
from .errors import InvalidInput, PreperiodicPoint
from .exactmath import FactorBudget, IntFactorization, UniPoly, factor_integer, is_prime


class _Infinity:
    """Valuation of zero.  Compares above every integer and rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("pcfram-valuation-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()


def _check_prime(p: int):
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidInput(f"{p} is not a prime")


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: int | Fraction, p: int):
    """Exact p-adic valuation; INF for 0."""
    _check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    p: int
    vertices: tuple[tuple[int, int], ...]
    segments: tuple[Segment, ...]

    @property
    def span(self) -> int:
        return sum(s.length for s in self.segments)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "vertices": [list(v) for v in self.vertices],
            "segments": [{"slope": str(s.slope), "length": s.length} for s in self.segments],
        }

    def to_ascii(self) -> str:
        lines = [f"Newton polygon at p = {self.p}"]
        lines.append("vertices: " + " ".join(f"({i},{v})" for i, v in self.vertices))
        for s in self.segments:
            lines.append(f"  slope {s.slope}  length {s.length}  root valuation {s.root_valuation}")
        return "\n".join(lines)


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(P: UniPoly, p: int) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the nonzero coefficients."""
    if not P:
        raise InvalidInput("Newton polygon of the zero polynomial")
    _check_prime(p)
    pts = [(i, _vp_int(a, p)) for i, a in enumerate(P.coeffs) if a]
    hull: list[tuple[int, int]] = []
    for q in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], q) <= 0:
            hull.pop()
        hull.append(q)
    segs = tuple(
        Segment(Fraction(b[1] - a[1], b[0] - a[0]), b[0] - a[0]) for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(p, tuple(hull), segs)


def root_valuation_multiset(np: NewtonPolygon) -> list[Fraction]:
    """Valuations of the nonzero roots, ascending; zero roots are not listed."""
    out = []
    for s in np.segments:
        out += [s.root_valuation] * s.length
    return sorted(out)


def integrality_obstruction(np: NewtonPolygon, e: int) -> bool:
    """True iff some segment forces a root valuation v/e with e not dividing v."""
    if e < 2:
        raise InvalidInput("e must be at least 2")
    return any((s.slope * e).denominator == 1 and s.slope.denominator > 1 for s in np.segments)


def merge_polygons(a: NewtonPolygon, b: NewtonPolygon) -> tuple[Segment, ...]:
    """Segments of the polygon of a product: lengths added slope by slope."""
    lengths: dict[Fraction, int] = {}
    for s in a.segments + b.segments:
        lengths[s.slope] = lengths.get(s.slope, 0) + s.length
    return tuple(Segment(k, lengths[k]) for k in sorted(lengths))


# orbit valuations


@dataclass(frozen=True)
class OrbitRow:
    n: int
    point: ProjPoint
    numerator: IntFactorization | None  # None when the numerator is 0
    denominator: IntFactorization

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "value": str(self.point),
            "numerator": str(self.numerator) if self.numerator else "0",
            "denominator": str(self.denominator),
            "complete": (self.numerator is None or self.numerator.complete) and self.denominator.complete,
        }


def orbit_valuation_table(
    phi: RationalMapP1, a: ProjPoint, n_max: int, budget: FactorBudget | None = None
) -> list[OrbitRow]:
    """phi^n(a) = num/den in lowest terms, both factored, for n = 1..n_max."""
    rows = []
    P = a
    for n in range(1, n_max + 1):
        P = evaluate(phi, P)
        num = factor_integer(P.a, budget) if P.a else None
        rows.append(OrbitRow(n, P, num, factor_integer(P.b, budget) if P.b else factor_integer(1)))
    return rows


@dataclass(frozen=True)
class Lemma12Witness:
    p: int
    n: int
    v: int
    e: int

    @property
    def residue(self) -> int:
        return self.v % self.e

    def as_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "v": self.v, "residue": self.residue}


def _preperiod_check(phi: RationalMapP1, a: ProjPoint, n_max: int):
    seen = {a: 0}
    P = a
    for n in range(1, n_max + 1):
        P = evaluate(phi, P)
        if P in seen:
            raise PreperiodicPoint(
                f"point {a} is preperiodic: phi^{n}({a}) = phi^{seen[P]}({a}) = {P}",
                first=seen[P],
                second=n,
                point=str(P),
            )
        seen[P] = n


def lemma12_search(
    phi: RationalMapP1,
    a: ProjPoint,
    e: int,
    S: Iterable[int],
    n_max: int,
    budget: FactorBudget | None = None,
) -> list[Lemma12Witness]:
    """All (p, n, v) with p outside S, v = v_p(phi^n(a)) > 0 and e not dividing v.

    An empty result means none was found up to n_max, not that none exist.
    Primes hidden in an unsplit cofactor are not reported.
    """
    if e < 2:
        raise InvalidInput("e must be at least 2")
    excluded = set(S)
    _preperiod_check(phi, a, n_max)
    out = []
    for row in orbit_valuation_table(phi, a, n_max, budget):
        if row.numerator is None:
            continue
        for p, v in row.numerator.factors:
            if p not in excluded and v % e:
                out.append(Lemma12Witness(p, row.n, v, e))
    return out
