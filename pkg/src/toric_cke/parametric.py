"""One-parameter polytope families with offsets affine in c.

Within a chamber (an interval of c on which the vertex/facet incidence does
not change) the volume is a polynomial of degree <= n in c and each first
moment one of degree <= n + 1. Both are recovered by exact interpolation at
rational samples and checked at held-out samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .fan import Fan
from .linalg import solve_linear
from .poly import Poly, interpolate
from .polytope import HPolytope, MomentData, VRep, enumerate_vertices, moments

__all__ = [
    "ChamberViolation",
    "DegreeBoundViolation",
    "ParametricFamily",
    "Chamber",
    "FamilyPolynomials",
    "family_from_fan",
    "signature",
    "chamber_breakpoints",
    "chamber_samples",
    "certify_chamber",
    "family_polynomials",
    "evaluate",
]


class ChamberViolation(ValueError):
    """The interval crosses a change in combinatorial type."""


class DegreeBoundViolation(ValueError):
    """An interpolated polynomial missed a held-out sample."""


@dataclass(frozen=True)
class ParametricFamily:
    normals: tuple[tuple[int, ...], ...]
    offset_affine: tuple[tuple[Fraction, Fraction], ...]
    parameter_name: str = "c"

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(tuple(int(x) for x in v) for v in self.normals))
        object.__setattr__(
            self, "offset_affine", tuple((Fraction(p), Fraction(q)) for p, q in self.offset_affine)
        )
        if len(self.normals) != len(self.offset_affine):
            raise ValueError("one affine offset per normal required")
        if all(q == 0 for _, q in self.offset_affine):
            raise ValueError("family does not depend on the parameter")

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    def offsets(self, c) -> tuple[Fraction, ...]:
        c = Fraction(c)
        return tuple(p + q * c for p, q in self.offset_affine)

    def at(self, c) -> HPolytope:
        return HPolytope(self.normals, self.offsets(c))

    @property
    def parametrized(self) -> tuple[int, ...]:
        return tuple(i for i, (_, q) in enumerate(self.offset_affine) if q)


@dataclass(frozen=True)
class Chamber:
    lo: Fraction
    hi: Fraction
    signature: tuple
    samples: tuple[Fraction, ...]

    @property
    def facet_active(self) -> tuple[bool, ...]:
        return self.signature[1]

    def contains(self, c) -> bool:
        return self.lo < c < self.hi


@dataclass(frozen=True)
class FamilyPolynomials:
    volume_poly: Poly
    moment_polys: tuple[Poly, ...]
    chamber: Chamber


def family_from_fan(fan: Fan, parametrized: Sequence[int], base_offset=Fraction(1, 2)) -> ParametricFamily:
    """Offsets c on the rays in ``parametrized`` (0-based) and ``base_offset`` elsewhere."""
    chosen = set(parametrized)
    if not chosen:
        raise ValueError("no parametrized rays")
    if any(i < 0 or i >= len(fan.rays) for i in chosen):
        raise IndexError("parametrized ray index out of range")
    base = Fraction(base_offset)
    if base <= 0:
        raise ValueError("base offset must be positive")
    affine = tuple((Fraction(0), Fraction(1)) if i in chosen else (base, Fraction(0)) for i in range(len(fan.rays)))
    return ParametricFamily(fan.rays, affine)


@lru_cache(maxsize=4096)
def _vrep(fam: ParametricFamily, c: Fraction) -> VRep:
    return enumerate_vertices(fam.at(c))


@lru_cache(maxsize=4096)
def evaluate(fam: ParametricFamily, c: Fraction) -> MomentData:
    """Exact moments of the member polytope at parameter ``c``."""
    return moments(_vrep(fam, Fraction(c)))


def signature(fam: ParametricFamily, c) -> tuple:
    """Combinatorial type: sorted vertex incidences plus the facet-active vector."""
    v = _vrep(fam, Fraction(c))
    return (tuple(sorted(tuple(sorted(inc)) for inc in v.incidence)), v.facet_active)


def chamber_breakpoints(fam: ParametricFamily, window: tuple, symmetric: bool = False) -> list[Fraction]:
    """Parameter values in the open window where the combinatorial type can change.

    For each nonsingular n-subset of inequalities the tight point x(c) is
    affine in c; any other inequality becomes tight along it at one value
    of c. A value is kept when x(c) is feasible there, i.e. a genuine vertex
    gains a tight inequality. With ``symmetric`` the reflections 1 - c are
    added, which is what the coupled c <-> 1 - c problem needs.
    """
    lo, hi = (Fraction(w) for w in window)
    n = fam.dim
    ps = [p for p, _ in fam.offset_affine]
    qs = [q for _, q in fam.offset_affine]
    found: set[Fraction] = set()
    for subset in combinations(range(len(fam.normals)), n):
        rows = [fam.normals[i] for i in subset]
        x0 = solve_linear(rows, [-ps[i] for i in subset])
        if x0 is None:
            continue
        x1 = solve_linear(rows, [-qs[i] for i in subset])
        for k in range(len(fam.normals)):
            if k in subset:
                continue
            v = fam.normals[k]
            alpha = sum(a * b for a, b in zip(v, x0)) + ps[k]
            beta = sum(a * b for a, b in zip(v, x1)) + qs[k]
            if beta == 0:
                continue
            c = -alpha / beta
            candidates = [c, 1 - c] if symmetric else [c]
            if not any(lo < t < hi for t in candidates):
                continue
            x = [a + c * b for a, b in zip(x0, x1)]
            if fam.at(c).contains(x):
                found.update(t for t in candidates if lo < t < hi)
    return sorted(found)


def chamber_samples(lo, hi, n: int) -> tuple[Fraction, ...]:
    """n + 3 rational points in (lo, hi): two hugging the ends, n + 1 spread inside."""
    lo, hi = Fraction(lo), Fraction(hi)
    span = hi - lo
    ts = [Fraction(1, 101)] + [Fraction(k, n + 2) for k in range(1, n + 2)] + [Fraction(100, 101)]
    return tuple(lo + t * span for t in ts)


def certify_chamber(fam: ParametricFamily, interval: tuple) -> Chamber:
    """Certify that (lo, hi) is free of breakpoints and of signature changes."""
    lo, hi = (Fraction(x) for x in interval)
    if lo >= hi:
        raise ValueError("empty interval")
    inside = chamber_breakpoints(fam, (lo, hi))
    if inside:
        raise ChamberViolation(f"breakpoints inside ({lo}, {hi}): {[str(b) for b in inside]}")
    samples = chamber_samples(lo, hi, fam.dim)
    sigs = [signature(fam, c) for c in samples]
    if any(s != sigs[0] for s in sigs[1:]):
        bad = next(c for c, s in zip(samples, sigs) if s != sigs[0])
        raise ChamberViolation(f"combinatorial type differs at c = {bad}")
    return Chamber(lo, hi, sigs[0], samples)


def family_polynomials(fam: ParametricFamily, chamber: Chamber) -> FamilyPolynomials:
    """Volume and first-moment polynomials on a certified chamber."""
    n = fam.dim
    samples = chamber.samples
    data = [evaluate(fam, c) for c in samples]
    vol_pts = [(c, d.volume) for c, d in zip(samples, data)]
    volume = interpolate(vol_pts[: n + 1])
    for c, y in vol_pts[n + 1 :]:
        if volume(c) != y:
            raise DegreeBoundViolation(f"volume polynomial misses held-out sample c = {c}")
    polys = []
    for j in range(n):
        pts = [(c, d.first_moments[j]) for c, d in zip(samples, data)]
        p = interpolate(pts[: n + 2])
        for c, y in pts[n + 2 :]:
            if p(c) != y:
                raise DegreeBoundViolation(f"moment polynomial x_{j + 1} misses held-out sample c = {c}")
        polys.append(p)
    return FamilyPolynomials(volume, tuple(polys), chamber)
