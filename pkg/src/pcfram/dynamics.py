"""Rational self-maps of P^1 over Q.

A map is stored as two binary forms F, G of common degree d, each kept as
its dehomogenization F(x, 1) (a UniPoly of degree <= d) plus the shared
formal degree.  Finite points of P^1 are handled through univariate
polynomials and the point at infinity through an explicit flag.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, log
from typing import Sequence

from .errors import BudgetExceeded, DegenerateMap, DegreeTooSmall, InseparableMap, InvalidInput
from .exactmath import (
    FactorBudget,
    UniPoly,
    factor_integer,
    factor_poly,
    form_resultant,
    parse_rational_function,
    poly_gcd,
    poly_lcm,
    resultant,
    squarefree_part,
)
from .parsing import ParseError

DEFAULT_DEGREE_BUDGET = 4096


def degree_budget_from_env(value: int | None = None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("PCFRAM_DEGREE_BUDGET", DEFAULT_DEGREE_BUDGET))


# points


@dataclass(frozen=True)
class ProjPoint:
    """[a : b] with gcd 1, b >= 0, and infinity stored as [1 : 0]."""

    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if a == 0 and b == 0:
            raise InvalidInput("[0 : 0] is not a point")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1, 0)

    @classmethod
    def from_value(cls, v: Fraction | int) -> "ProjPoint":
        v = Fraction(v)
        return cls(v.numerator, v.denominator)

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        s = text.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return cls.infinity()
        try:
            return cls.from_value(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot parse point {text!r}") from exc

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    @property
    def value(self) -> Fraction:
        if self.is_infinity:
            raise InvalidInput("the point at infinity has no affine value")
        return Fraction(self.a, self.b)

    def __str__(self):
        if self.is_infinity:
            return "inf"
        return str(self.a) if self.b == 1 else f"{self.a}/{self.b}"


# maps


def _form_str(f: UniPoly, d: int) -> str:
    from .multivar import MultiPoly

    terms = {(i, d - i): c for i, c in enumerate(f.coeffs) if c}
    return str(MultiPoly(terms, 2, ("x", "y")))


@dataclass(frozen=True)
class RationalMapP1:
    F: UniPoly
    G: UniPoly
    d: int

    @property
    def f_coeffs(self) -> tuple[int, ...]:
        """Coefficients of x^i y^(d-i), i = 0..d."""
        return tuple(self.F[i] for i in range(self.d + 1))

    @property
    def g_coeffs(self) -> tuple[int, ...]:
        return tuple(self.G[i] for i in range(self.d + 1))

    def resultant(self) -> int:
        return form_resultant(self.F, self.G, self.d)

    def is_polynomial(self) -> bool:
        """G = c*y^d, i.e. infinity is a totally invariant fixed point."""
        return self.G.degree == 0

    def __str__(self):
        return f"[{_form_str(self.F, self.d)} : {_form_str(self.G, self.d)}]"

    def univariate_str(self, var: str = "z") -> str:
        num = self.F.to_str(var)
        if self.G == UniPoly((1,)):
            return num
        return f"({num})/({self.G.to_str(var)})"


def normalize_map(rawF: Sequence[int], rawG: Sequence[int]) -> RationalMapP1:
    """Normalize a pair of binary forms given by coefficient lists (x^i y^(d-i) at index i)."""
    if len(rawF) != len(rawG) or len(rawF) < 3:
        raise InvalidInput("forms need coefficient lists of equal length >= 3")
    d = len(rawF) - 1
    F, G = UniPoly(rawF), UniPoly(rawG)
    if not F or not G:
        raise DegenerateMap("degenerate map: a coordinate form vanishes identically")
    # common power of y
    k = min(d - F.degree, d - G.degree)
    d -= k
    g = poly_gcd(F, G)
    if g.degree > 0:
        F, G = F // g, G // g
        d -= g.degree
    if d <= 0:
        raise DegenerateMap("degenerate map: the forms share all their roots (resultant 0)")
    if d == 1:
        raise DegreeTooSmall("degree too small: the reduced map has degree 1")
    c = gcd(F.content(), G.content())
    if F.lc < 0:
        c = -c
    F, G = F // c, G // c
    m = RationalMapP1(F, G, d)
    if m.resultant() == 0:
        raise DegenerateMap("degenerate map: resultant 0")
    return m


def map_from_fraction(num: UniPoly, den: UniPoly) -> RationalMapP1:
    d = max(num.degree, den.degree)
    if d < 0:
        raise DegenerateMap("degenerate map: zero numerator and denominator")
    f = [num[i] for i in range(d + 1)]
    g = [den[i] for i in range(d + 1)]
    if d < 2:
        raise DegreeTooSmall(f"degree too small: degree {d}")
    return normalize_map(f, g)


def parse_map(text: str) -> RationalMapP1:
    """Accept "z^2+1", "(z^2-1)/(z+3)" or an explicit form pair "[x^2+y^2 : y^2]"."""
    s = text.strip()
    try:
        if s.startswith("["):
            from .multivar import MultiPoly

            if not s.endswith("]") or s.count(":") != 1:
                raise InvalidInput(f"expected '[F : G]', got {text!r}")
            parts = [MultiPoly.parse(p, ("x", "y")) for p in s[1:-1].split(":")]
            degs = {p.total_degree for p in parts if p}
            if len(degs) != 1 or not all(p.is_homogeneous() for p in parts):
                raise InvalidInput("F and G must be homogeneous of the same degree")
            d = degs.pop()
            lists = []
            for p in parts:
                coeffs = [0] * (d + 1)
                for (i, _), c in p.terms.items():
                    coeffs[i] = c
                lists.append(coeffs)
            if d < 2:
                raise DegreeTooSmall(f"degree too small: degree {d}")
            return normalize_map(*lists)
        num, den = parse_rational_function(s)
    except ParseError as exc:
        raise InvalidInput(f"cannot parse map {text!r}: {exc}") from exc
    return map_from_fraction(num, den)


def _compose_forms(phi: RationalMapP1, Fn: UniPoly, Gn: UniPoly, m: int) -> tuple[UniPoly, UniPoly]:
    """(F(Fn, Gn), G(Fn, Gn)) dehomogenized, where Fn, Gn have formal degree m."""
    d = phi.d
    fp = [UniPoly((1,))]
    gp = [UniPoly((1,))]
    for _ in range(d):
        fp.append(fp[-1] * Fn)
        gp.append(gp[-1] * Gn)
    F = UniPoly()
    G = UniPoly()
    for i in range(d + 1):
        term = fp[i] * gp[d - i]
        if phi.F[i]:
            F = F + term * phi.F[i]
        if phi.G[i]:
            G = G + term * phi.G[i]
    return F, G


def iterate_forms(phi: RationalMapP1, n: int, degree_budget: int | None = None) -> tuple[UniPoly, UniPoly]:
    """(F_n(x,1), G_n(x,1)) with formal degree d^n; no content is removed."""
    if n < 1:
        raise InvalidInput("iterate index must be >= 1")
    budget = degree_budget_from_env(degree_budget)
    if phi.d**n > budget:
        raise BudgetExceeded(
            f"degree budget {budget} exceeded: d^n = {phi.d ** n} at n = {n}", limiting_n=n, budget=budget
        )
    Fn, Gn = phi.F, phi.G
    m = phi.d
    for _ in range(n - 1):
        Fn, Gn = _compose_forms(phi, Fn, Gn, m)
        m *= phi.d
    return Fn, Gn


def iterate_map(phi: RationalMapP1, k: int, degree_budget: int | None = None) -> RationalMapP1:
    Fk, Gk = iterate_forms(phi, k, degree_budget)
    D = phi.d**k
    return normalize_map([Fk[i] for i in range(D + 1)], [Gk[i] for i in range(D + 1)])


def evaluate(phi: RationalMapP1, P: ProjPoint) -> ProjPoint:
    return ProjPoint(phi.F.eval_homogeneous(P.a, P.b, phi.d), phi.G.eval_homogeneous(P.a, P.b, phi.d))


def orbit(phi: RationalMapP1, P: ProjPoint, n: int) -> list[ProjPoint]:
    """[phi(P), ..., phi^n(P)]."""
    out = []
    for _ in range(n):
        P = evaluate(phi, P)
        out.append(P)
    return out


# critical points and reduction


@dataclass(frozen=True)
class Wronskian:
    """W = F_x G_y - F_y G_x as a binary form of degree 2d-2."""

    form: UniPoly  # W(x, 1)
    degree: int  # formal degree 2d - 2

    @property
    def content(self) -> int:
        return self.form.content()

    @property
    def poly(self) -> UniPoly:
        return self.form.primitive()

    @property
    def infinity_multiplicity(self) -> int:
        return self.degree - self.form.degree

    @property
    def total_multiplicity(self) -> int:
        return self.form.degree + self.infinity_multiplicity

    def critical_divisor(self) -> "Divisor":
        return Divisor.of(self.form, self.infinity_multiplicity > 0)

    def __str__(self):
        return _form_str(self.form, self.degree)


def critical_wronskian(phi: RationalMapP1) -> Wronskian:
    d = phi.d
    Fx = UniPoly((i + 1) * phi.F[i + 1] for i in range(d))
    Gx = UniPoly((i + 1) * phi.G[i + 1] for i in range(d))
    Fy = UniPoly((d - i) * phi.F[i] for i in range(d))
    Gy = UniPoly((d - i) * phi.G[i] for i in range(d))
    W = Fx * Gy - Fy * Gx
    if not W:
        raise InseparableMap("inseparable map: the Wronskian vanishes identically")
    return Wronskian(W, 2 * d - 2)


@dataclass(frozen=True)
class BadPrimeClasses:
    bad_reduction: tuple[int, ...]
    inseparable_reduction: tuple[int, ...]
    resultant: int
    wronskian_content: int
    unknown_cofactor: int = 1
    notes: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.unknown_cofactor == 1

    def as_dict(self) -> dict:
        return {
            "bad_reduction": list(self.bad_reduction),
            "inseparable_reduction": list(self.inseparable_reduction),
            "resultant": self.resultant,
            "wronskian_content": self.wronskian_content,
            "unknown_cofactor": self.unknown_cofactor,
            "notes": {str(k): v for k, v in sorted(self.notes.items())},
        }


def reduction_bad_primes(phi: RationalMapP1, budget: FactorBudget | None = None) -> BadPrimeClasses:
    R = phi.resultant()
    c = critical_wronskian(phi).content
    fr = factor_integer(R, budget)
    fc = factor_integer(c, budget)
    notes = {}
    for p in fr.primes:
        notes[p] = "bad reduction"
    for p in fc.primes:
        notes[p] = (notes[p] + ", " if p in notes else "") + "inseparable reduction"
    return BadPrimeClasses(fr.primes, fc.primes, R, c, fr.cofactor * fc.cofactor, notes)


# divisors


@dataclass(frozen=True)
class Divisor:
    """Reduced effective divisor on P^1: roots of a squarefree primitive poly, plus maybe infinity."""

    poly: UniPoly
    infinity: bool = False

    @classmethod
    def of(cls, f: UniPoly, infinity: bool = False) -> "Divisor":
        if not f:
            raise InvalidInput("divisor polynomial must be nonzero")
        if f.degree <= 0:
            return cls(UniPoly((1,)), infinity)
        return cls(squarefree_part(f).primitive(), infinity)

    @classmethod
    def of_points(cls, pts: Sequence[ProjPoint]) -> "Divisor":
        f = UniPoly((1,))
        inf = False
        for P in pts:
            if P.is_infinity:
                inf = True
            else:
                f = f * UniPoly((-P.a, P.b))
        return cls.of(f, inf)

    @property
    def size(self) -> int:
        return max(self.poly.degree, 0) + int(self.infinity)

    def is_empty(self) -> bool:
        return self.size == 0

    def union(self, other: "Divisor") -> "Divisor":
        return Divisor.of(poly_lcm(self.poly, other.poly), self.infinity or other.infinity)

    def contains(self, other: "Divisor") -> bool:
        return (self.infinity or not other.infinity) and other.poly.divides(self.poly)

    def homogeneous_at(self, P: ProjPoint) -> int:
        """b^deg D * D(a/b), times b when infinity is in the divisor."""
        v = self.poly.eval_homogeneous(P.a, P.b, max(self.poly.degree, 0))
        return v * P.b if self.infinity else v

    def __str__(self):
        parts = []
        if self.poly.degree > 0:
            parts.append(self.poly.to_str())
        if self.infinity:
            parts.append("inf")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"poly": self.poly.to_str(), "infinity": self.infinity, "size": self.size}


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> UniPoly:
    """Lagrange interpolation through integer nodes; result over Q, scaled to Z."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += Fraction(ys[i], denom) * basis[k]
    return UniPoly.from_rationals(coeffs)


def forward_image(phi: RationalMapP1, D: Divisor) -> Divisor:
    """phi(D) as a reduced divisor, via w -> Res_z(D(z), F(z,1) - w G(z,1)) at formal degree d."""
    d = phi.d
    m = max(D.poly.degree, 0)
    image = UniPoly((1,))
    inf = False
    if m > 0:
        lc = D.poly.lc
        xs = list(range(m + 1))
        ys = []
        for w in xs:
            H = phi.F - phi.G * w
            if H:
                ys.append(lc ** (d - H.degree) * resultant(D.poly, H))
            else:
                ys.append(0)
        R = _interpolate(xs, ys)
        if R.degree < m:
            inf = True
        if R.degree > 0:
            image = R
    if D.infinity:
        a, b = phi.F[d], phi.G[d]
        if b == 0:
            inf = True
        else:
            image = image * UniPoly((-a, b))
    return Divisor.of(image, inf)


# heights and PCF certification


def _solve_fraction(M: list[list[int]], rhs: list[int]) -> list[Fraction]:
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col])
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def cofactor_height(phi: RationalMapP1) -> int:
    """Largest |coefficient| among forms A, B, A', B' of degree d-1 with
    A F + B G = Res x^(2d-1) and A' F + B' G = Res y^(2d-1)."""
    d = phi.d
    R = phi.resultant()
    n = 2 * d
    # column j < d: x^j y^(d-1-j) * F; column d + j: the same times G; rows index x^k y^(2d-1-k)
    M = [[0] * n for _ in range(n)]
    for j in range(d):
        for i in range(d + 1):
            M[i + j][j] = phi.F[i]
            M[i + j][d + j] = phi.G[i]
    best = 0
    for k in (n - 1, 0):
        rhs = [0] * n
        rhs[k] = R
        sol = _solve_fraction(M, rhs)
        if any(s.denominator != 1 for s in sol):
            raise ArithmeticError("cofactor identity produced non-integral coefficients")
        best = max(best, max(abs(int(s)) for s in sol))
    return best


@dataclass(frozen=True)
class HeightBound:
    """Preperiodic points satisfy h(P) <= C2/(d-1) + log 2 = bound, with C2 = log Q."""

    d: int
    cofactor_height: int
    resultant: int

    @property
    def Q(self) -> int:
        return 2 * (self.d + 1) * self.cofactor_height * abs(self.resultant)

    @property
    def bound(self) -> float:
        return log(self.Q) / (self.d - 1) + log(2)

    def root_height_exceeds(self, g: UniPoly) -> bool:
        """Exact test that every root of the irreducible primitive g has height above the bound."""
        m = g.degree
        X = max(Fraction(abs(a), comb(m, i)) for i, a in enumerate(g.coeffs))
        return X ** (self.d - 1) > Fraction(self.Q) ** m * 2 ** (m * (self.d - 1))


def height_bound(phi: RationalMapP1) -> HeightBound:
    return HeightBound(phi.d, cofactor_height(phi), phi.resultant())


def root_height_lower_bound(g: UniPoly) -> float:
    """(1/m) log max |a_i| / C(m, i), a lower bound for the height of any root of irreducible g."""
    m = g.degree
    X = max(Fraction(abs(a), comb(m, i)) for i, a in enumerate(g.coeffs))
    return (log(X.numerator) - log(X.denominator)) / m


@dataclass(frozen=True)
class PCFVerdict:
    status: str  # "PCF", "NonPCF", "Undetermined"
    level: int
    divisor: Divisor
    critical: Divisor
    bound: float
    witness: UniPoly | None = None
    witness_height: float | None = None
    reason: str = ""

    def as_dict(self) -> dict:
        out = {
            "status": self.status,
            "level": self.level,
            "critical_points": self.critical.as_dict(),
            "postcritical": self.divisor.as_dict(),
            "height_bound": round(self.bound, 12),
        }
        if self.witness is not None:
            out["witness_factor"] = self.witness.to_str()
            out["witness_height_lower_bound"] = round(self.witness_height, 12)
        if self.reason:
            out["reason"] = self.reason
        return out


def _certify_escape(new: UniPoly, hb: HeightBound):
    if new.degree <= 0:
        return None
    fac = factor_poly(new)
    for g, _ in fac.factors:
        if hb.root_height_exceeds(g):
            return g
    return None


def pcf_check(phi: RationalMapP1, level_budget: int = 10, height_budget: int | None = None) -> PCFVerdict:
    """Three-valued post-critical finiteness test.

    ``height_budget`` caps the coefficient bit size of the tracked divisor;
    exceeding it ends the search as Undetermined.
    """
    if level_budget < 1:
        raise InvalidInput("level budget must be positive")
    hb = height_bound(phi)
    crit = critical_wronskian(phi).critical_divisor()
    D = forward_image(phi, crit)
    level = 1
    new = D.poly
    while True:
        g = _certify_escape(new, hb)
        if g is not None:
            return PCFVerdict("NonPCF", level, D, crit, hb.bound, g, root_height_lower_bound(g))
        img = forward_image(phi, D)
        if D.contains(img):
            return PCFVerdict("PCF", level, D, crit, hb.bound)
        if level >= level_budget:
            return PCFVerdict("Undetermined", level, D, crit, hb.bound, reason=f"level budget {level_budget} exhausted")
        U = D.union(img)
        new = U.poly // D.poly if D.poly.degree > 0 else U.poly
        new = new.primitive()
        D = U
        level += 1
        if height_budget is not None and max(abs(c) for c in D.poly.coeffs).bit_length() > height_budget:
            return PCFVerdict("Undetermined", level, D, crit, hb.bound, reason=f"height budget {height_budget} bits exhausted")


# preimages and exceptional points


def preimage_forms(phi: RationalMapP1, alpha: ProjPoint, n: int, degree_budget: int | None = None) -> tuple[UniPoly, int]:
    """(primitive P with roots the finite n-th preimages of alpha, number of preimages at infinity)."""
    Fn, Gn = iterate_forms(phi, n, degree_budget)
    P = Fn * alpha.b - Gn * alpha.a
    if not P:
        raise DegenerateMap("preimage polynomial vanishes identically")
    return P.primitive(), phi.d**n - P.degree


@dataclass(frozen=True)
class ExceptionalCertificate:
    exceptional: bool
    points: Divisor  # alpha with its first and second preimages

    def as_dict(self) -> dict:
        return {"exceptional": self.exceptional, "backward_support": self.points.as_dict()}


def is_exceptional(phi: RationalMapP1, alpha: ProjPoint) -> ExceptionalCertificate:
    """alpha is exceptional iff {alpha} with its first two preimage sets has at most two points."""
    D = Divisor.of_points([alpha])
    for n in (1, 2):
        P, drop = preimage_forms(phi, alpha, n)
        D = D.union(Divisor.of(P, drop > 0))
    return ExceptionalCertificate(D.size <= 2, D)
