"""Dense univariate polynomials with integer coefficients.

Coefficients are stored lowest degree first in an immutable tuple.  The zero
polynomial has an empty coefficient tuple and degree -1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from ..parsing import ParseError, Ring, fold, parse_tree, variables


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _strip(coeffs)
        for a in c:
            if not isinstance(a, int):
                raise TypeError(f"integer coefficients required, got {type(a).__name__}")
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def __reduce__(self):
        return (UniPoly, (self.coeffs,))

    # construction helpers

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "UniPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "UniPoly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    @classmethod
    def from_rationals(cls, coeffs: Sequence[Fraction | int]) -> "UniPoly":
        """Clear denominators of a rational coefficient list (result is not made primitive)."""
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lcm, (f.denominator for f in fr), 1)
        return cls(int(f * den) for f in fr)

    @classmethod
    def parse(cls, text: str) -> "UniPoly":
        # rational coefficients are cleared; integer input is kept verbatim (no content removal)
        num, den = parse_rational_function(text)
        if den.degree > 0:
            raise ParseError(f"not a polynomial: {text!r}")
        return num

    # basic accessors

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += sign + body
        return s

    # arithmetic

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, int):
            return UniPoly((other,))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return UniPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPoly(a * other for a in self.coeffs) if other else UniPoly()
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = UniPoly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval_homogeneous(self, a: int, b: int, degree: int) -> int:
        """Evaluate the degree-`degree` binary form whose dehomogenization is self at (a, b)."""
        acc = 0
        bp = 1
        # sum c_i a^i b^(degree-i), computed by Horner in a with b-powers tracked
        for i in range(self.degree, -1, -1):
            acc = acc * a + self.coeffs[i] * bp
            bp *= b
        return acc * b ** (degree - self.degree) if self.coeffs else 0

    def derivative(self) -> "UniPoly":
        return UniPoly(i * a for i, a in enumerate(self.coeffs) if i)

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        return reduce(gcd, self.coeffs, 0)

    def primitive(self) -> "UniPoly":
        """Divide out the content and make the leading coefficient positive."""
        c = self.content()
        if c == 0:
            return self
        if self.lc < 0:
            c = -c
        return UniPoly(a // c for a in self.coeffs)

    @property
    def is_primitive(self) -> bool:
        return self.content() == 1

    def monic_q(self) -> list[Fraction]:
        lc = self.lc
        return [Fraction(a, lc) for a in self.coeffs]

    def scale_var(self, c: int) -> "UniPoly":
        """Return self(c*x)."""
        return UniPoly(a * c**i for i, a in enumerate(self.coeffs))

    def shift(self, a: int) -> "UniPoly":
        """Return self(x + a) (Taylor shift)."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return UniPoly(c)

    def reverse(self, degree: int | None = None) -> "UniPoly":
        """Return x^degree * self(1/x); degree defaults to self.degree."""
        if degree is None:
            degree = self.degree
        c = list(self.coeffs) + [0] * (degree + 1 - len(self.coeffs))
        return UniPoly(reversed(c))

    def trailing_zeros(self) -> int:
        """Multiplicity of x as a factor (0 for the zero polynomial)."""
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return 0

    def pseudo_divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """lc(other)^(deg self - deg other + 1) * self = q*other + r."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        r = list(self.coeffs)
        if len(r) - 1 < db:
            return UniPoly(), self
        b = other.coeffs
        lb = b[-1]
        delta = len(r) - 1 - db
        q = [0] * (delta + 1)
        for k in range(delta, -1, -1):
            top = r[k + db]
            q = [lb * qi for qi in q]
            q[k] += top
            r = [lb * ri for ri in r]
            for j in range(db + 1):
                r[k + j] -= top * b[j]
            r.pop()
        return UniPoly(q), UniPoly(r)

    def divmod_exact(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Division over Z; raises ArithmeticError if a quotient coefficient is not integral."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        lb = b[-1]
        if len(r) - 1 < db:
            return UniPoly(), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            top = r[k + db]
            if top % lb:
                raise ArithmeticError("inexact polynomial division over Z")
            t = top // lb
            q[k] = t
            if t:
                for j in range(db + 1):
                    r[k + j] -= t * b[j]
        return UniPoly(q), UniPoly(r[:db])

    def __floordiv__(self, other):
        """Exact division; raises ArithmeticError if other does not divide self over Z."""
        if isinstance(other, int):
            if any(a % other for a in self.coeffs):
                raise ArithmeticError("inexact division by integer")
            return UniPoly(a // other for a in self.coeffs)
        q, r = self.divmod_exact(other)
        if r:
            raise ArithmeticError("polynomial does not divide exactly")
        return q

    def divides(self, other: "UniPoly") -> bool:
        """True iff self divides other in Q[x]."""
        if not self:
            return not other
        _, r = other.pseudo_divmod(self)
        return not r

    def mod_p(self, p: int) -> list[int]:
        return list(_strip(a % p for a in self.coeffs))


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Primitive gcd over Z[x] (positive leading coefficient), via primitive PRS."""
    if not a:
        return b.primitive()
    if not b:
        return a.primitive()
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while b:
        _, r = a.pseudo_divmod(b)
        a, b = b, r.primitive() if r else r
    return a.primitive()


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    g = poly_gcd(a, b)
    return ((a * b).primitive() // g).primitive() if g.degree > 0 else (a * b).primitive()


def squarefree_part(p: UniPoly) -> UniPoly:
    """p / gcd(p, p'), primitive: same roots, each with multiplicity one."""
    if not p:
        raise ValueError("squarefree_part of the zero polynomial")
    if p.degree <= 0:
        return UniPoly((1,))
    g = poly_gcd(p, p.derivative())
    return (p.primitive() // g).primitive() if g.degree > 0 else p.primitive()


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Musser's algorithm: primitive p = prod a_i^i with a_i squarefree, pairwise coprime."""
    if not p:
        raise ValueError("zero polynomial")
    f = p.primitive()
    if f.degree <= 0:
        return []
    out = []
    g = poly_gcd(f, f.derivative())
    w = f // g
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, g)
        a = (w // y).primitive()
        if a.degree > 0:
            out.append((a, i))
        g = g // y
        w = y
        i += 1
    return out


def parse_rational_function(text: str, var: str | None = None) -> tuple[UniPoly, UniPoly]:
    """Parse a univariate rational expression into (num, den), coprime, den with positive lc.

    Rational constants are cleared so both parts have integer coefficients.
    """
    tree = parse_tree(text)
    names = variables(tree)
    if len(names) > 1:
        raise ParseError(f"expected one variable, found {sorted(names)}")
    name = var or (next(iter(names)) if names else "x")

    def const(c: Fraction):
        return (UniPoly((c.numerator,)), UniPoly((c.denominator,)))

    def v(n):
        if n != name:
            raise ParseError(f"unknown variable {n!r}")
        return (UniPoly((0, 1)), UniPoly((1,)))

    def add(a, b):
        return (a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    def sub(a, b):
        return (a[0] * b[1] - b[0] * a[1], a[1] * b[1])

    def mul(a, b):
        return (a[0] * b[0], a[1] * b[1])

    def div(a, b):
        if not b[0]:
            raise ParseError("division by zero")
        return (a[0] * b[1], a[1] * b[0])

    def pw(a, e):
        if e < 0:
            if not a[0]:
                raise ParseError("division by zero")
            return (a[1] ** (-e), a[0] ** (-e))
        return (a[0] ** e, a[1] ** e)

    num, den = fold(tree, Ring(const, v, add, sub, mul, div, pw, lambda a: (-a[0], a[1])))
    return reduce_fraction(num, den)


def reduce_fraction(num: UniPoly, den: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Lowest terms over Z: remove the polynomial gcd and joint content, den lc > 0."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return UniPoly(), UniPoly((1,))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, _ = num.pseudo_divmod(g)
        den, _ = den.pseudo_divmod(g)
    c = gcd(num.content(), den.content())
    if den.lc < 0:
        c = -c
    return num // c, den // c
