"""Polynomials over GF(p) as coefficient lists, lowest degree first, no trailing zeros."""

from __future__ import annotations

import random

Poly = list


def trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def reduce(a, p: int) -> Poly:
    return trim([c % p for c in a])


def add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def sub(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return trim([c % p for c in out])


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([x * c % p for x in a])


def monic(a: Poly, p: int) -> Poly:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod p")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        t = r[k + db] * inv % p
        q[k] = t
        if t:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - t * b[j]) % p
    return trim(q), trim(r[:db])


def rem(a: Poly, b: Poly, p: int) -> Poly:
    return divmod_(a, b, p)[1]


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def xgcd(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def derivative(a: Poly, p: int) -> Poly:
    return trim([i * c % p for i, c in enumerate(a)][1:])


def powmod(base: Poly, e: int, mod: Poly, p: int) -> Poly:
    result = [1]
    base = rem(base, mod, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), mod, p)
    return result


def pth_root(a: Poly, p: int) -> Poly:
    """For a polynomial in x^p over GF(p), return its p-th root."""
    return trim([a[i] for i in range(0, len(a), p)])


def sqf_decomposition(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Squarefree decomposition of a nonzero polynomial over GF(p): f = lc * prod a_i^e_i."""
    f = monic(reduce(f, p), p)
    if len(f) <= 1:
        return []
    out: dict[int, Poly] = {}

    def rec(f: Poly, mult: int):
        if len(f) <= 1:
            return
        df = derivative(f, p)
        if not df:
            rec(pth_root(f, p), mult * p)
            return
        c = gcd(f, df, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = gcd(w, c, p)
            z = divmod_(w, y, p)[0]
            if len(z) > 1:
                prev = out.get(i * mult)
                out[i * mult] = mul(prev, z, p) if prev else monic(z, p)
            i += 1
            w = y
            c = divmod_(c, y, p)[0]
        if len(c) > 1:
            rec(pth_root(c, p), mult * p)

    rec(f, 1)
    return sorted(((a, e) for e, a in out.items()), key=lambda t: t[1])


def distinct_degree(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a monic squarefree f: [(product of degree-d irreducibles, d)]."""
    f = monic(f, p)
    out = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(f: Poly, d: int, p: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a monic product of degree-d irreducibles.

    Odd p uses a^((p^d-1)/2) - 1; p = 2 uses the trace a + a^2 + ... + a^(2^(d-1)).
    """
    n = len(f) - 1
    if n == d:
        return [f]
    e = (p**d - 1) // 2
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 1:
            continue
        g = gcd(a, f, p)
        if 1 < len(g) < len(f):
            break
        if p == 2:
            b, t = a, a
            for _ in range(d - 1):
                t = rem(mul(t, t, p), f, p)
                b = add(b, t, p)
        else:
            b = sub(powmod(a, e, f, p), [1], p)
        g = gcd(b, f, p)
        if 1 < len(g) < len(f):
            break
    h = divmod_(f, g, p)[0]
    return equal_degree(g, d, p, rng) + equal_degree(monic(h, p), d, p, rng)


def factor_squarefree(f: Poly, p: int, seed: int = 0) -> list[Poly]:
    """Monic irreducible factors of a squarefree polynomial over GF(p)."""
    rng = random.Random(seed)
    out = []
    for g, d in distinct_degree(f, p):
        out.extend(equal_degree(g, d, p, rng))
    return sorted(out, key=lambda q: (len(q), q))


def degree_pattern(f: Poly, p: int) -> list[int]:
    """Sorted degrees of the irreducible factors of a squarefree f over GF(p)."""
    degs = []
    for g, d in distinct_degree(f, p):
        degs += [d] * ((len(g) - 1) // d)
    return sorted(degs)


def roots(f: Poly, p: int) -> list[int]:
    """Distinct roots in GF(p) of a nonzero polynomial."""
    f = monic(reduce(f, p), p)
    if len(f) <= 1:
        return []
    if p < 64:
        return [r for r in range(p) if _eval(f, r, p) == 0]
    g = gcd(f, sub(powmod([0, 1], p, f, p), [0, 1], p), p)
    if len(g) <= 1:
        return []
    facs = equal_degree(g, 1, p, random.Random(p))
    return sorted((-q[0]) % p for q in facs)


def _eval(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


evaluate = _eval
