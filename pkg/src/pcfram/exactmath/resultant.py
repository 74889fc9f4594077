"""Resultants and discriminants over Z.

Sign convention: Res(p, q) = lc(p)^deg(q) * prod_{p(a)=0} q(a), which is the
determinant of the Sylvester matrix with the rows of p on top.
"""

from __future__ import annotations

from .poly import UniPoly, poly_gcd


def _check(p: UniPoly, q: UniPoly):
    if not p or not q:
        raise ValueError("resultant of a zero polynomial")


def resultant(p: UniPoly, q: UniPoly) -> int:
    """Resultant by the subresultant polynomial remainder sequence."""
    _check(p, q)
    A, B = p, q
    if A.degree == 0 and B.degree == 0:
        return 1
    ca, cb = A.content(), B.content()
    sa = -1 if A.lc < 0 else 1
    sb = -1 if B.lc < 0 else 1
    A, B = A.primitive(), B.primitive()
    # primitive() forces lc > 0; put the sign back into the content factor
    t = (sa * ca) ** q.degree * (sb * cb) ** p.degree
    s = 1
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 and B.degree % 2:
            s = -1
    g = 1
    h = 1
    while B.degree > 0:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            s = -s
        _, R = A.pseudo_divmod(B)
        A = B
        if not R:
            return 0
        div = g * h**delta
        B = R // div
        g = A.lc
        if delta == 0:
            h = h
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
    # B is a nonzero constant here
    dA = A.degree
    if dA == 0:
        # both constants can only happen on entry, handled above
        return s * t
    hh = B.lc**dA // h ** (dA - 1) if dA >= 1 else B.lc
    return s * t * hh


def sylvester_matrix(p: UniPoly, q: UniPoly, deg_p: int | None = None, deg_q: int | None = None) -> list[list[int]]:
    """Sylvester matrix with optional formal degrees (for binary forms with leading zeros)."""
    m = p.degree if deg_p is None else deg_p
    n = q.degree if deg_q is None else deg_q
    size = m + n
    rows = []
    pc = [p[m - i] for i in range(m + 1)]  # highest first
    qc = [q[n - i] for i in range(n + 1)]
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination (Bareiss) determinant."""
    n = len(matrix)
    if n == 0:
        return 1
    M = [list(r) for r in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            Mi = M[i]
            mik = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (pivot * Mi[j] - mik * M[k][j]) // prev
            Mi[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def resultant_sylvester(p: UniPoly, q: UniPoly) -> int:
    """Resultant as the Bareiss determinant of the Sylvester matrix (independent route)."""
    _check(p, q)
    if p.degree == 0:
        return p.lc ** q.degree
    if q.degree == 0:
        return q.lc ** p.degree
    return bareiss_det(sylvester_matrix(p, q))


def form_resultant(F: UniPoly, G: UniPoly, degree: int) -> int:
    """Resultant of two binary forms of the given degree, each passed dehomogenized.

    Equals the Sylvester determinant on the length-(degree+1) coefficient vectors.
    """
    if not F or not G:
        return 0
    if F.degree == degree:
        # Res_{n,m}(f, g) = lc(f)^m prod g(roots f) for any formal degree m of g
        return F.lc ** (degree - G.degree) * resultant(F, G)
    if G.degree == degree:
        sign = -1 if degree % 2 else 1  # (-1)^(degree*degree)
        return sign * G.lc ** (degree - F.degree) * resultant(G, F)
    return 0


def form_resultant_sylvester(F: UniPoly, G: UniPoly, degree: int) -> int:
    if not F or not G:
        return 0
    return bareiss_det(sylvester_matrix(F, G, degree, degree))


def discriminant(p: UniPoly) -> int:
    """disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p); an integer for integer p."""
    if not p or p.degree < 1:
        raise ValueError("discriminant needs degree >= 1")
    d = p.degree
    if d == 1:
        return 1
    r = resultant(p, p.derivative())
    q, rem = divmod(r, p.lc)
    assert rem == 0
    return -q if (d * (d - 1) // 2) % 2 else q


def has_repeated_root(p: UniPoly) -> bool:
    return poly_gcd(p, p.derivative()).degree > 0
