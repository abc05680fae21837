"""Univariate polynomials over Q with Sturm-sequence real-root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .linalg import format_rational

__all__ = [
    "Poly",
    "IsolatingInterval",
    "interpolate",
    "sturm_sequence",
    "sign_variations",
    "count_roots",
    "isolate_real_roots",
    "refine_root",
    "to_decimal",
    "to_significant",
]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Poly:
    """Immutable polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("c" if k == 1 else f"c^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = format_rational(abs(c)) + (f"*{mono}" if mono else "")
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else Poly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Poly"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(), self
        quo = [Fraction(0)] * dq
        lead = other.lead
        for k in range(dq - 1, -1, -1):
            q = rem[k + other.degree] / lead
            quo[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(quo), Poly(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "Poly":
        return self if self.is_zero() else Poly(c / self.lead for c in self.coeffs)

    def primitive(self) -> "Poly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Poly(v // g for v in ints)

    def integer_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def compose(self, inner: "Poly") -> "Poly":
        return self(inner)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree(self) -> "Poly":
        if self.degree <= 0:
            return self
        g = self.gcd(self.derivative())
        return (self // g).monic()


def interpolate(points: Sequence[tuple]) -> Poly:
    """Exact Lagrange interpolation through ``(x, y)`` pairs."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    xs = [p[0] for p in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa in interpolation data")
    result = Poly()
    for i, (xi, yi) in enumerate(pts):
        if yi == 0:
            continue
        basis = Poly([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Poly([-xj, 1])
                denom *= xi - xj
        result = result + basis * (yi / denom)
    return result


def sturm_sequence(p: Poly) -> list[Poly]:
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def sign_variations(values: Iterable) -> int:
    signs = [s for s in (_sign(v) for v in values) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_right(seq: Sequence[Poly], x) -> int:
    """Sign variations at x+ (just right of x)."""
    vals = [q(x) for q in seq]
    if vals[0] == 0 and len(vals) > 1:
        vals[0] = vals[1]
    return sign_variations(vals)


def _variations_left(seq: Sequence[Poly], x) -> int:
    vals = [q(x) for q in seq]
    if vals[0] == 0 and len(vals) > 1:
        vals[0] = -vals[1]
    return sign_variations(vals)


def count_roots(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    q = p.squarefree()
    if q.degree <= 0:
        return 0
    seq = sturm_sequence(q)
    return _variations_right(seq, Fraction(lo)) - _variations_left(seq, Fraction(hi))


@dataclass(frozen=True)
class IsolatingInterval:
    """A real root of ``poly`` isolated in ``[lo, hi]``.

    ``lo == hi`` marks an exact rational root. Otherwise the root lies
    strictly inside and ``poly`` changes sign between the endpoints.
    """

    lo: Fraction
    hi: Fraction
    poly: Poly

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _rational_root_in(q: Poly, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Return the rational root of squarefree ``q`` in (lo, hi), if there is one.

    A rational root p/s of a primitive integer polynomial has s | lead.
    Once the bracket is narrower than 1/L^2 at most one such fraction fits.
    """
    prim = q.primitive()
    big = abs(int(prim.lead))
    slo = _sign(prim(lo))
    while hi - lo >= Fraction(1, 2 * big * big):
        mid = (lo + hi) / 2
        sm = _sign(prim(mid))
        if sm == 0:
            return mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    cand = ((lo + hi) / 2).limit_denominator(big)
    if lo < cand < hi and prim(cand) == 0:
        return cand
    return None


def isolate_real_roots(p: Poly, lo, hi) -> list[IsolatingInterval]:
    """Isolate every distinct real root of ``p`` inside the open window (lo, hi).

    Works on the squarefree part. Rational roots come back as degenerate
    intervals; the others as open brackets with a strict sign change.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty window")
    q = p.squarefree()
    if q.degree <= 0:
        return []
    seq = sturm_sequence(q)
    out: list[IsolatingInterval] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _variations_right(seq, a) - _variations_left(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append(_tighten(q, a, b))
            continue
        mid = (a + b) / 2
        if q(mid) == 0:
            out.append(IsolatingInterval(mid, mid, q))
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda r: r.lo)
    final = []
    for r in out:
        if not r.is_exact:
            rat = _rational_root_in(q, r.lo, r.hi)
            if rat is not None:
                r = IsolatingInterval(rat, rat, q)
        final.append(r)
    return final


def _tighten(q: Poly, a: Fraction, b: Fraction) -> IsolatingInterval:
    """Shrink (a, b), holding exactly one root, until q is nonzero at both ends."""
    while q(a) == 0 or q(b) == 0:
        mid = (a + b) / 2
        if q(mid) == 0:
            return IsolatingInterval(mid, mid, q)
        if count_roots(q, a, mid) == 1:
            b = mid
        else:
            a = mid
    return IsolatingInterval(a, b, q)


def refine_root(r: IsolatingInterval, width) -> IsolatingInterval:
    """Bisect until ``hi - lo <= width``; exact roots are returned unchanged."""
    width = Fraction(width)
    if r.is_exact:
        return r
    q, a, b = r.poly, r.lo, r.hi
    sa = _sign(q(a))
    while b - a > width:
        mid = (a + b) / 2
        sm = _sign(q(mid))
        if sm == 0:
            return IsolatingInterval(mid, mid, q)
        if sm == sa:
            a = mid
        else:
            b = mid
    return IsolatingInterval(a, b, q)


def to_decimal(x, places: int = 6) -> str:
    """Exact rational rounded half-even to ``places`` decimals, as a string."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-places)))


def to_significant(x, digits: int) -> str:
    """Exact rational rounded half-even to ``digits`` significant figures."""
    x = Fraction(x)
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(x.numerator) / Decimal(x.denominator)
        r = d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1))
        if r.adjusted() > d.adjusted():  # rounding carried into a new digit
            r = d.quantize(Decimal(1).scaleb(r.adjusted() - digits + 1))
        return format(r, "f")
