"""Ramified primes of iterated preimage fields.

For a map phi and base point alpha the level-n preimage polynomial P_n has
the n-th preimages of alpha as roots.  A prime p can only ramify in the
field they generate if p divides disc(P_n); whether it actually ramifies is
decided locally, factor by factor, with Dedekind's criterion and a few
cheap certificates: odd discriminant valuation, fractional Newton slopes,
p-regular residual polynomials and index reduction by translation.  Anything not settled is reported Unknown.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .dynamics import (
    Divisor,
    ProjPoint,
    RationalMapP1,
    is_exceptional,
    pcf_check,
    preimage_forms,
    reduction_bad_primes,
)
from .errors import BudgetExceeded, ExceptionalPoint, PostcriticalAlpha
from .exactmath import (
    FactorBudget,
    PolyFactorBudget,
    UniPoly,
    discriminant,
    factor_integer,
    factor_poly,
    poly_gcd,
)
from .exactmath import modp
from .padic import newton_polygon, vp

RAMIFIED = "Ramified"
UNRAMIFIED = "Unramified"
UNKNOWN = "Unknown"

INDEX_REDUCTION_DEPTH = 8


@dataclass(frozen=True)
class PreimagePoly:
    n: int
    alpha: ProjPoint
    poly: UniPoly
    degree_drop: int

    @property
    def degree(self) -> int:
        return self.poly.degree


def preimage_poly(phi: RationalMapP1, alpha: ProjPoint, n: int, degree_budget: int | None = None) -> PreimagePoly:
    """P = b F_n(x,1) - a G_n(x,1), primitive, with the count of preimages at infinity."""
    P, drop = preimage_forms(phi, alpha, n, degree_budget)
    return PreimagePoly(n, alpha, P, drop)


@dataclass(frozen=True)
class RamVerdict:
    p: int
    status: str
    wild_candidate: bool
    evidence: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {"p": self.p, "status": self.status, "wild_candidate": self.wild_candidate, "evidence": self.evidence}


# local analysis at one prime


def _lift(f: list[int]) -> UniPoly:
    return UniPoly(f)


def _monic_at(g: UniPoly, p: int) -> tuple[UniPoly, str] | None:
    """A monic integral polynomial generating the same algebra as g, with the same p-local order type."""
    m = g.degree
    if g.lc % p == 0:
        k = next((k for k in range(min(p, m + 1)) if g(k) % p), None)
        if k is None:
            return None
        g = g.shift(k).reverse(m)  # root 1/(theta - k), leading coefficient g(k)
        note = f"x -> {k} + 1/x"
    else:
        note = ""
    c = g.lc
    # c^(m-1) g(x/c) is monic with root c*theta
    h = UniPoly(g[i] * c ** (m - 1 - i) if i < m else 1 for i in range(m + 1))
    return h, note


def _dedekind(h: UniPoly, p: int) -> tuple[bool, list[tuple[list[int], int]]]:
    """(is Z_p[theta] maximal, squarefree decomposition of h mod p) for monic h."""
    hb = h.mod_p(p)
    parts = modp.sqf_decomposition(hb, p)
    rad = [1]
    for a, _ in parts:
        rad = modp.mul(rad, a, p)
    rest = modp.divmod_(hb, rad, p)[0]
    F = _lift(rad) * _lift(rest) - h
    F = UniPoly(c // p for c in F.coeffs)
    g = modp.gcd(modp.gcd(F.mod_p(p), rad, p), rest, p) if len(rest) > 1 else [1]
    return len(g) <= 1, parts


def _phi_expansion(h: UniPoly, phi: UniPoly) -> list[UniPoly]:
    """Coefficients a_i with h = sum a_i phi^i, deg a_i < deg phi (phi monic)."""
    out = []
    while h:
        h, r = h.divmod_exact(phi)
        out.append(r)
    return out


def _reduce_in(a: UniPoly, v: int, p: int, phib: list[int]) -> list[int]:
    """Image of a / p^v in GF(p)[t]/(phib), as a reduced coefficient list."""
    return modp.rem(modp.reduce([c // p**v for c in a.coeffs], p), phib, p)


def _fq_squarefree(R: list[list[int]], p: int, phib: list[int]) -> bool:
    """True if R in GF(q)[y], q = p^deg(phib), has no repeated root."""

    def mul(a, b):
        return modp.rem(modp.mul(a, b, p), phib, p)

    def inv(a):
        return modp.xgcd(a, phib, p)[1]

    def trim(f):
        while f and not f[-1]:
            f.pop()
        return f

    def rem(f, g):
        f = list(f)
        lc_inv = inv(g[-1])
        while len(f) >= len(g):
            c = mul(f[-1], lc_inv)
            shift = len(f) - len(g)
            for i, gi in enumerate(g):
                f[shift + i] = modp.sub(f[shift + i], mul(c, gi), p)
            trim(f)
        return f

    f = trim([list(c) for c in R])
    df = trim([modp.scale(c, i, p) for i, c in enumerate(f)][1:])
    if not df:
        return len(f) <= 1
    while df:
        f, df = df, rem(f, df)
    return len(f) == 1


def _polygon_certificate(h: UniPoly, p: int, parts: list[tuple[list[int], int]]) -> dict | None:
    """First-order Newton polygons of h at every repeated irreducible factor phi mod p.

    A principal segment of slope -k/e forces e to divide the ramification
    index of its primes.  If every segment is p-regular (squarefree
    residual polynomial over GF(p)[t]/(phi)) the indices are exactly e.
    """
    segments = []
    regular = True
    for part, mult in parts:
        if mult == 1:
            continue
        for phib in modp.factor_squarefree(modp.monic(part, p), p):
            phi = UniPoly(phib)
            coeffs = _phi_expansion(h, phi)
            vals = [min(vp(c, p) for c in a.coeffs if c) if a else None for a in coeffs]
            np = newton_polygon(UniPoly(p**v if v is not None else 0 for v in vals), p)
            for (i0, v0), s in zip(np.vertices, np.segments):
                if s.slope >= 0:
                    continue
                e, k = s.slope.denominator, -s.slope.numerator
                seg = {"phi": phi.to_str(), "slope": str(s.slope), "length": s.length, "e": e}
                if e > 1:
                    return {"certificate": "fractional-slope", "segments": [seg]}
                R = []
                for j in range(s.length // e + 1):
                    i, v = i0 + j * e, v0 - j * k
                    R.append(_reduce_in(coeffs[i], v, p, phib) if vals[i] == v else [])
                if not _fq_squarefree(R, p, phib):
                    regular = False
                segments.append(seg)
    if regular and segments:
        return {"certificate": "regular-residual", "segments": segments}
    return None


def _translate_reduce(h: UniPoly, p: int, a: int) -> UniPoly | None:
    """p^-m h(p x + a) when every root of h(x + a) has valuation >= 1, else None."""
    ha = h.shift(a)
    np = newton_polygon(ha, p)
    if ha.coeffs[0] and np.segments and all(s.slope <= -1 for s in np.segments):
        m = ha.degree
        scaled = ha.scale_var(p)
        pm = p**m
        if all(c % pm == 0 for c in scaled.coeffs):
            return UniPoly(c // pm for c in scaled.coeffs)
    return None


def local_verdict(g: UniPoly, p: int, depth: int = 0) -> tuple[str, dict]:
    """Ramification of p in the algebra Q[x]/(g) for squarefree primitive g."""
    m = g.degree
    if m <= 1:
        return UNRAMIFIED, {"reason": "linear"}
    dg = discriminant(g)
    if dg % p:
        return UNRAMIFIED, {"reason": "p does not divide disc"}
    made = _monic_at(g, p)
    if made is None:
        return UNKNOWN, {"reason": "no unit value of g mod p for a Moebius change"}
    h, note = made
    ev: dict = {"transform": note} if note else {}
    maximal, parts = _dedekind(h, p)
    mults = sorted(e for _, e in parts)
    ev["multiplicities_mod_p"] = mults
    repeated = any(e > 1 for e in mults)
    if maximal:
        ev["dedekind"] = "maximal"
        return (RAMIFIED if repeated else UNRAMIFIED), ev
    ev["dedekind"] = "not maximal"
    dh = discriminant(h)
    v = 0
    while dh % p == 0:
        dh //= p
        v += 1
    if v % 2:
        ev["certificate"] = "odd-disc-valuation"
        ev["disc_valuation"] = v
        return RAMIFIED, ev
    cert = _polygon_certificate(h, p, parts)
    if cert:
        ev.update(cert)
        return (RAMIFIED if cert["certificate"] == "fractional-slope" else UNRAMIFIED), ev
    roots = []
    for a, e in parts:
        if e > 1:
            roots += modp.roots(a, p)
    if depth < INDEX_REDUCTION_DEPTH and len(roots) == 1 and len(parts) == 1 and len(parts[0][0]) == 2:
        # h = (x - a)^m mod p: move to (theta - a)/p when it is integral
        reduced = _translate_reduce(h, p, roots[0])
        if reduced is not None:
            status, sub = local_verdict(reduced, p, depth + 1)
            ev["index_reduction"] = {"center": roots[0], "result": sub}
            return status, ev
    ev["reason"] = "Dedekind criterion inconclusive"
    return UNKNOWN, ev


def _wild_candidate(P: UniPoly, p: int) -> bool:
    if P.lc % p == 0 and P.degree <= 0:
        return False
    return any(e % p == 0 for _, e in modp.sqf_decomposition(P.mod_p(p), p))


def prime_verdict(P: UniPoly, pieces: tuple[tuple[UniPoly, int, bool], ...], p: int, in_disc: bool) -> RamVerdict:
    if not in_disc:
        return RamVerdict(p, UNRAMIFIED, False, {"reason": "p does not divide disc"})
    statuses = []
    per_factor = []
    for g, _, irreducible in pieces:
        if g.degree <= 1:
            continue
        status, ev = local_verdict(g, p)
        statuses.append(status)
        if status != UNRAMIFIED or ev.get("reason") != "p does not divide disc":
            per_factor.append({"factor": g.to_str(), "irreducible": irreducible, "status": status, **ev})
    if RAMIFIED in statuses:
        status = RAMIFIED
    elif UNKNOWN in statuses:
        status = UNKNOWN
    else:
        status = UNRAMIFIED
    wild = status != UNRAMIFIED and _wild_candidate(P, p)
    return RamVerdict(p, status, wild, {"factors": per_factor})


def _prime_verdict_task(args):
    return prime_verdict(*args)


@dataclass(frozen=True)
class LevelReport:
    n: int
    poly: UniPoly
    degree_drop: int
    disc: int
    disc_support: tuple[int, ...]
    verdicts: tuple[RamVerdict, ...]
    unknown_cofactor: int = 1
    poly_factorization_complete: bool = True

    @property
    def complete(self) -> bool:
        return self.unknown_cofactor == 1

    @property
    def ramified(self) -> set[int]:
        return {v.p for v in self.verdicts if v.status == RAMIFIED}

    @property
    def unknown(self) -> set[int]:
        return {v.p for v in self.verdicts if v.status == UNKNOWN}

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "poly_degree": self.poly.degree,
            "degree_drop": self.degree_drop,
            "disc_bits": abs(self.disc).bit_length(),
            "disc_support": list(self.disc_support),
            "verdicts": [v.as_dict() for v in self.verdicts],
            "unknown_cofactor_bits": self.unknown_cofactor.bit_length() if self.unknown_cofactor != 1 else 0,
            "complete": self.complete and self.poly_factorization_complete,
        }


def ramified_primes_at_level(
    phi: RationalMapP1,
    alpha: ProjPoint,
    n: int,
    factor_budget: FactorBudget | None = None,
    poly_budget: PolyFactorBudget | None = None,
    degree_budget: int | None = None,
    workers: int = 1,
) -> LevelReport:
    pre = preimage_poly(phi, alpha, n, degree_budget)
    P = pre.poly
    if P.degree >= 1:
        g = poly_gcd(P, P.derivative())
        if g.degree > 0:
            raise PostcriticalAlpha(
                f"alpha is postcritical at level {n}: gcd(P, P') = {g.to_str()}; replace alpha by a preimage",
                level=n,
                gcd=g.to_str(),
            )
    if P.degree < 1:
        return LevelReport(n, P, pre.degree_drop, 1, (), ())
    disc = discriminant(P)
    fd = factor_integer(disc, factor_budget)
    candidates = set(fd.primes)
    if pre.degree_drop:
        fl = factor_integer(P.lc, factor_budget)
        candidates |= set(fl.primes)
        cof = fd.cofactor * fl.cofactor
    else:
        cof = fd.cofactor
    fac = factor_poly(P, poly_budget)
    pieces = fac.all_pieces()
    tasks = [(P, pieces, p, disc % p == 0) for p in sorted(candidates)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_prime_verdict_task, tasks))
    else:
        verdicts = [_prime_verdict_task(t) for t in tasks]
    verdicts.sort(key=lambda v: v.p)
    return LevelReport(n, P, pre.degree_drop, disc, fd.primes, tuple(verdicts), cof, fac.complete)


# predicted set


@dataclass(frozen=True)
class PredictedBadSet:
    primes: tuple[int, ...]
    provenance: dict
    pcf_status: str
    postcritical: Divisor
    unknown_cofactor: int = 1
    warning: str = ""

    def as_dict(self) -> dict:
        out = {
            "primes": list(self.primes),
            "provenance": {str(p): self.provenance[p] for p in self.primes},
            "pcf_status": self.pcf_status,
            "postcritical": self.postcritical.as_dict(),
            "unknown_cofactor_bits": self.unknown_cofactor.bit_length() if self.unknown_cofactor != 1 else 0,
        }
        if self.warning:
            out["warning"] = self.warning
        return out


def predicted_bad_set(
    phi: RationalMapP1,
    alpha: ProjPoint,
    factor_budget: FactorBudget | None = None,
    level_budget: int = 10,
) -> PredictedBadSet:
    """Bad-reduction, inseparable-reduction and collision primes for (phi, alpha)."""
    verdict = pcf_check(phi, level_budget)
    D = verdict.divisor
    warning = ""
    if verdict.status != "PCF":
        warning = f"map is {verdict.status}; collision primes use the postcritical divisor truncated at level {verdict.level}"
    bad = reduction_bad_primes(phi, factor_budget)
    value = D.homogeneous_at(alpha)
    if value == 0:
        raise PostcriticalAlpha(f"alpha = {alpha} lies on the postcritical set {D}", postcritical=str(D))
    fc = factor_integer(value, factor_budget)
    prov: dict[int, list[str]] = {}
    for cls, ps in (("bad-reduction", bad.bad_reduction), ("inseparable", bad.inseparable_reduction), ("collision", fc.primes)):
        for p in ps:
            prov.setdefault(p, []).append(cls)
    return PredictedBadSet(
        tuple(sorted(prov)), prov, verdict.status, D, bad.unknown_cofactor * fc.cofactor, warning
    )


# experiment


@dataclass
class RamificationReport:
    map: RationalMapP1
    alpha: ProjPoint
    predicted: PredictedBadSet
    levels: list[LevelReport]
    n_max: int
    stop_reason: str = ""

    def cumulative(self, n: int | None = None) -> set[int]:
        out: set[int] = set()
        for lv in self.levels:
            if n is None or lv.n <= n:
                out |= lv.ramified
        return out

    def cumulative_unknown(self, n: int | None = None) -> set[int]:
        out: set[int] = set()
        for lv in self.levels:
            if n is None or lv.n <= n:
                out |= lv.unknown
        return out

    def cumulative_disc_support(self, n: int | None = None) -> set[int]:
        out: set[int] = set()
        for lv in self.levels:
            if n is None or lv.n <= n:
                out |= set(lv.disc_support)
        return out

    @property
    def incomplete(self) -> bool:
        return bool(self.stop_reason) or not all(lv.complete and lv.poly_factorization_complete for lv in self.levels)

    @property
    def stabilized_at(self) -> int | None:
        """First level from which the cumulative Ramified set no longer changed, None if it grew at the last level."""
        if not self.levels:
            return None
        last = self.levels[-1].n
        final = self.cumulative()
        if len(self.levels) > 1 and self.cumulative(last - 1) != final:
            return None
        for lv in self.levels:
            if self.cumulative(lv.n) == final:
                return lv.n
        return None

    @property
    def growth(self) -> list[int]:
        return [len(self.cumulative(lv.n)) for lv in self.levels]

    def wildness(self) -> dict[int, bool]:
        return wildness_indicator(self)

    def as_dict(self) -> dict:
        stab = self.stabilized_at
        return {
            "schema": 1,
            "map": str(self.map),
            "alpha": str(self.alpha),
            "pcf_status": self.predicted.pcf_status,
            "levels": [lv.as_dict() for lv in self.levels],
            "predicted_bad_set": self.predicted.as_dict(),
            "cumulative": sorted(self.cumulative()),
            "cumulative_unknown": sorted(self.cumulative_unknown()),
            "cumulative_disc_support": sorted(self.cumulative_disc_support()),
            "stabilized_at": stab if stab is not None else "growing at budget",
            "growth": self.growth,
            "outside_predicted": sorted(self.cumulative() - set(self.predicted.primes)),
            "wild_candidates": sorted(p for p, w in self.wildness().items() if w),
            "incomplete": self.incomplete,
            "stop_reason": self.stop_reason,
        }


def stabilization_experiment(
    phi: RationalMapP1,
    alpha: ProjPoint,
    n_max: int,
    factor_budget: FactorBudget | None = None,
    poly_budget: PolyFactorBudget | None = None,
    degree_budget: int | None = None,
    workers: int = 1,
) -> RamificationReport:
    cert = is_exceptional(phi, alpha)
    if cert.exceptional:
        raise ExceptionalPoint(
            f"alpha = {alpha} is exceptional: backward orbit supported on {cert.points}",
            backward_support=str(cert.points),
        )
    predicted = predicted_bad_set(phi, alpha, factor_budget)
    report = RamificationReport(phi, alpha, predicted, [], n_max)
    for n in range(1, n_max + 1):
        try:
            report.levels.append(
                ramified_primes_at_level(phi, alpha, n, factor_budget, poly_budget, degree_budget, workers)
            )
        except BudgetExceeded as exc:
            report.stop_reason = str(exc)
            break
    return report


def wildness_indicator(report: RamificationReport) -> dict[int, bool]:
    """p -> True if some level saw a mod-p multiplicity divisible by p on a non-Unramified verdict.

    Necessary evidence for wild ramification, not a proof of it.
    """
    flags: dict[int, bool] = {}
    for lv in report.levels:
        for v in lv.verdicts:
            if v.status != UNRAMIFIED:
                flags[v.p] = flags.get(v.p, False) or v.wild_candidate
    return dict(sorted(flags.items()))
