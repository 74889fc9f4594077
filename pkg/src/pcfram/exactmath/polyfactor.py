"""Factorization in Z[x] by the Zassenhaus scheme.

squarefree decomposition -> factorization modulo a good prime -> Hensel
lifting -> bounded subset recombination.  When recombination would exceed
the budget the squarefree factor is returned unsplit and the result is
flagged incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt

from . import modp
from .intfactor import primes_below
from .poly import UniPoly, squarefree_decomposition


@dataclass(frozen=True)
class PolyFactorBudget:
    max_subsets: int = 200_000
    primes_tried: int = 8


@dataclass(frozen=True)
class FactorRecord:
    """Irreducibility evidence for one squarefree piece."""

    poly: UniPoly
    prime: int | None
    modular_degrees: tuple[int, ...]
    patterns: tuple[tuple[int, tuple[int, ...]], ...]  # (p, degree pattern) for up to three primes
    pattern_certified: bool  # degree patterns rule out every proper split


@dataclass(frozen=True)
class PolyFactorization:
    content: int
    factors: tuple[tuple[UniPoly, int], ...]
    unsplit: tuple[tuple[UniPoly, int], ...] = ()
    records: tuple[FactorRecord, ...] = field(default=(), compare=False)

    @property
    def complete(self) -> bool:
        return not self.unsplit

    def expand(self) -> UniPoly:
        out = UniPoly((self.content,))
        for f, e in self.factors + self.unsplit:
            out = out * f**e
        return out

    def all_pieces(self) -> tuple[tuple[UniPoly, int, bool], ...]:
        """(poly, exponent, irreducible?) for every piece, sorted by degree then coefficients."""
        items = [(f, e, True) for f, e in self.factors] + [(f, e, False) for f, e in self.unsplit]
        return tuple(sorted(items, key=lambda t: (t[0].degree, t[0].coeffs, t[1])))


def _subset_sums(pattern: list[int]) -> set[int]:
    sums = {0}
    for d in pattern:
        sums |= {s + d for s in sums}
    return sums


def _good_primes(f: UniPoly, count: int):
    """Odd primes not dividing lc(f) modulo which f stays squarefree."""
    found = 0
    for p in primes_below(100_000)[1:]:
        if f.lc % p == 0:
            continue
        fp = f.mod_p(p)
        if len(modp.gcd(fp, modp.derivative(fp, p), p)) > 1:
            continue
        yield p
        found += 1
        if found >= count:
            return


def _mignotte_bound(f: UniPoly) -> int:
    n = f.degree
    norm2 = isqrt(sum(a * a for a in f.coeffs)) + 1
    # any factor g of f satisfies |g_j| <= C(deg g, j) * ||f||_2 <= 2^n ||f||_2
    return (1 << n) * norm2


def _symmetric(a: int, m: int) -> int:
    a %= m
    return a - m if a > m // 2 else a


def _hensel_step_pair(f: UniPoly, g: list[int], h: list[int], p: int, k: int):
    """Lift f = g*h mod p (g monic) to mod p^k by linear Hensel lifting."""
    _, s, t = modp.xgcd(g, h, p)  # s*g + t*h = 1 mod p
    G = list(g)
    H = list(h)
    pj = p
    for _ in range(1, k):
        # e = (f - G*H) / p^j  mod p
        GH = UniPoly(G) * UniPoly(H)
        diff = (f - GH).coeffs
        e = modp.trim([(c // pj) % p for c in diff])
        if e:
            te = modp.mul(t, e, p)
            q, dg = modp.divmod_(te, g, p)
            dh = modp.add(modp.mul(s, e, p), modp.mul(q, h, p), p)
            G = [(G[i] if i < len(G) else 0) + pj * (dg[i] if i < len(dg) else 0) for i in range(max(len(G), len(dg)))]
            H = [(H[i] if i < len(H) else 0) + pj * (dh[i] if i < len(dh) else 0) for i in range(max(len(H), len(dh)))]
        pj *= p
        G = [c % pj for c in G]
        H = [c % pj for c in H]
    return G, H


def hensel_lift(f: UniPoly, factors: list[list[int]], p: int, k: int) -> list[list[int]]:
    """Lift monic modular factors with f = lc * prod(factors) mod p to mod p^k."""
    out = []
    rest_f = f
    mod = p**k
    remaining = list(factors)
    while len(remaining) > 1:
        g = remaining.pop(0)
        h = [1]
        for q in remaining:
            h = modp.mul(h, q, p)
        h = modp.scale(h, rest_f.lc % p, p)
        G, H = _hensel_step_pair(rest_f, g, h, p, k)
        out.append(G)
        # the remaining factors must multiply to H (lc = lc(f)); continue with H as target
        rest_f = UniPoly(_symmetric(c, mod) for c in H)
    out.append(modp.monic(modp.reduce(rest_f.coeffs, mod), mod) if remaining else [])
    return out


def _trial_divide(f: UniPoly, g: UniPoly) -> UniPoly | None:
    if g.coeffs[0] and f.coeffs[0] % g.coeffs[0]:
        return None
    try:
        return f // g
    except ArithmeticError:
        return None


def _zassenhaus(f: UniPoly, budget: PolyFactorBudget) -> tuple[list[UniPoly], list[UniPoly], FactorRecord]:
    """Factor a primitive squarefree f (deg >= 2, f(0) != 0) into (irreducibles, unsplit, record)."""
    n = f.degree
    best = None
    patterns = []
    possible = None
    for p in _good_primes(f, budget.primes_tried):
        fp = f.mod_p(p)
        pat = modp.degree_pattern(fp, p)
        if len(patterns) < 3:
            patterns.append((p, tuple(pat)))
        sums = _subset_sums(pat)
        possible = sums if possible is None else possible & sums
        if best is None or len(pat) < len(best[1]):
            best = (p, pat)
        if len(pat) == 1:
            break
    certified = possible is not None and possible <= {0, n}
    if best is None:
        return [], [f], FactorRecord(f, None, (), tuple(patterns), False)
    p, pat = best
    if certified or len(pat) == 1:
        return [f], [], FactorRecord(f, p, tuple(pat), tuple(patterns), certified)

    fp = modp.monic(f.mod_p(p), p)
    mods = modp.factor_squarefree(fp, p, seed=p)
    bound = 2 * abs(f.lc) * _mignotte_bound(f)
    k = 1
    while p**k <= bound:
        k += 1
    M = p**k
    lifted = hensel_lift(f, mods, p, k)

    found: list[UniPoly] = []
    remaining = list(range(len(lifted)))
    target = f
    s = 1
    tested = 0
    while 2 * s <= len(remaining):
        hit = False
        for subset in combinations(remaining, s):
            tested += 1
            if tested > budget.max_subsets:
                found_record = FactorRecord(f, p, tuple(pat), tuple(patterns), False)
                return found, [target] if target.degree > 0 else [], found_record
            prod = [target.lc % M]
            for i in subset:
                prod = modp.mul(prod, lifted[i], M)
            g = UniPoly(_symmetric(c, M) for c in prod).primitive()
            q = _trial_divide(target, g)
            if q is not None:
                found.append(g)
                target = q
                remaining = [i for i in remaining if i not in subset]
                hit = True
                break
        if not hit:
            s += 1
    if target.degree > 0:
        found.append(target.primitive())
    return found, [], FactorRecord(f, p, tuple(pat), tuple(patterns), certified)


def factor_poly(f: UniPoly, budget: PolyFactorBudget | None = None) -> PolyFactorization:
    """Factor f in Z[x]; content carries the sign and integer content."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    budget = budget or PolyFactorBudget()
    content = f.content() * (1 if f.lc > 0 else -1)
    if f.degree == 0:
        return PolyFactorization(content, ())
    factors: list[tuple[UniPoly, int]] = []
    unsplit: list[tuple[UniPoly, int]] = []
    records = []
    for piece, e in squarefree_decomposition(f):
        # split off the power of x first; Zassenhaus below sees f(0) != 0
        tz = piece.trailing_zeros()
        if tz:
            factors.append((UniPoly((0, 1)), e))
            piece = UniPoly(piece.coeffs[tz:])
        if piece.degree <= 0:
            continue
        if piece.degree == 1:
            factors.append((piece.primitive(), e))
            continue
        irr, rest, rec = _zassenhaus(piece, budget)
        records.append(rec)
        factors += [(g, e) for g in irr]
        unsplit += [(g, e) for g in rest]
    key = lambda t: (t[0].degree, t[0].coeffs, t[1])
    return PolyFactorization(content, tuple(sorted(factors, key=key)), tuple(sorted(unsplit, key=key)), tuple(records))


def is_irreducible(f: UniPoly, budget: PolyFactorBudget | None = None) -> bool | None:
    """True/False when decided; None if the budget ran out."""
    fac = factor_poly(f, budget)
    if not fac.complete:
        return None
    return len(fac.factors) == 1 and fac.factors[0][1] == 1 and fac.factors[0][0].degree == f.degree
