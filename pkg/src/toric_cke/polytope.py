"""Half-space polytopes with exact vertices, triangulation and linear moments.

A polytope is ``{x : <x, v_i> >= -b_i}``; for the anticanonical polytope of a
fan all offsets ``b_i`` are 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Sequence

from .linalg import det, nullspace, rank, solve_linear

__all__ = [
    "GeometryError",
    "UnboundedError",
    "DegenerateError",
    "HPolytope",
    "VRep",
    "MomentData",
    "KEVerdict",
    "enumerate_vertices",
    "is_reflexive",
    "is_delzant",
    "triangulate",
    "moments",
    "ke_verdict",
    "polytope_moments",
]


class GeometryError(ValueError):
    pass


class UnboundedError(GeometryError):
    pass


class DegenerateError(GeometryError):
    """The feasible set is empty or not full-dimensional."""


@dataclass(frozen=True)
class HPolytope:
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        normals = tuple(tuple(int(x) for x in v) for v in self.normals)
        offsets = tuple(Fraction(b) for b in self.offsets)
        if len(normals) != len(offsets):
            raise ValueError("one offset per normal required")
        if not normals:
            raise ValueError("no inequalities")
        n = len(normals[0])
        if any(len(v) != n for v in normals):
            raise ValueError("normals of mixed dimension")
        if any(not any(v) for v in normals):
            raise ValueError("zero normal")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    @classmethod
    def anticanonical(cls, rays: Sequence[Sequence[int]]) -> "HPolytope":
        return cls(tuple(map(tuple, rays)), (Fraction(1),) * len(rays))

    def slack(self, x: Sequence) -> list[Fraction]:
        return [sum(a * b for a, b in zip(v, x)) + off for v, off in zip(self.normals, self.offsets)]

    def contains(self, x: Sequence) -> bool:
        return all(s >= 0 for s in self.slack(x))


@dataclass(frozen=True)
class VRep:
    vertices: tuple[tuple[Fraction, ...], ...]
    incidence: tuple[frozenset[int], ...]
    facet_active: tuple[bool, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class MomentData:
    volume: Fraction
    first_moments: tuple[Fraction, ...]
    barycenter: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        if self.volume <= 0:
            raise DegenerateError("zero volume")
        object.__setattr__(self, "barycenter", tuple(m / self.volume for m in self.first_moments))


@dataclass(frozen=True)
class KEVerdict:
    is_ke: bool
    barycenter: tuple[Fraction, ...]


def _affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def _check_bounded(h: HPolytope) -> None:
    """Raise unless the recession cone {y : <y, v_i> >= 0} is trivial."""
    n = h.dim
    if rank(h.normals) < n:
        raise UnboundedError("normals do not span; the feasible set contains a line")
    if n == 1:
        signs = {v[0] > 0 for v in h.normals}
        if len(signs) < 2:
            raise UnboundedError("half-line recession direction")
        return
    # pointed cone: nonzero iff it has an extreme ray cut out by n-1 tight normals
    for subset in combinations(range(len(h.normals)), n - 1):
        rows = [h.normals[i] for i in subset]
        if rank(rows) < n - 1:
            continue
        (y,) = nullspace(rows)
        for direction in (y, [-t for t in y]):
            if all(sum(a * b for a, b in zip(v, direction)) >= 0 for v in h.normals):
                raise UnboundedError(f"recession direction {[str(t) for t in direction]}")


def enumerate_vertices(h: HPolytope) -> VRep:
    """All vertices by solving every n-subset of inequalities as equalities."""
    n = h.dim
    if len(h.normals) < n:
        raise UnboundedError("fewer inequalities than the dimension")
    _check_bounded(h)
    found: dict[tuple[Fraction, ...], None] = {}
    for subset in combinations(range(len(h.normals)), n):
        x = solve_linear([h.normals[i] for i in subset], [-h.offsets[i] for i in subset])
        if x is None:
            continue
        x = tuple(x)
        if x not in found and h.contains(x):
            found[x] = None
    if not found:
        raise DegenerateError("empty feasible set")
    vertices = tuple(sorted(found))
    if _affine_rank(vertices) < n:
        raise DegenerateError("feasible set is not full-dimensional")
    incidence = tuple(
        frozenset(i for i, s in enumerate(h.slack(x)) if s == 0) for x in vertices
    )
    facet_active = tuple(
        _affine_rank([x for x, inc in zip(vertices, incidence) if i in inc]) == n - 1
        for i in range(len(h.normals))
    )
    return VRep(vertices, incidence, facet_active)


def is_reflexive(h: HPolytope, v: VRep) -> bool:
    if any(b != 1 for b in h.offsets):
        raise ValueError("reflexivity test needs all offsets equal to 1")
    return all(x.denominator == 1 for vert in v.vertices for x in vert)


def is_delzant(v: VRep, normals: Sequence[Sequence[int]]) -> bool:
    """Simple polytope whose tight normals at every vertex form a Z-basis."""
    n = v.dim
    for inc in v.incidence:
        if len(inc) != n:
            return False
        if abs(det([normals[i] for i in sorted(inc)])) != 1:
            return False
    return True


def triangulate(v: VRep, anchor: str = "min") -> list[tuple[int, ...]]:
    """Pulling triangulation; each face is coned from its lex-min (or max) vertex.

    Returns simplices as tuples of vertex indices into ``v.vertices``.
    """
    if anchor not in ("min", "max"):
        raise ValueError("anchor must be 'min' or 'max'")
    verts = v.vertices
    n = v.dim
    # only facet-supporting inequalities generate faces
    facet_ids = [i for i, ok in enumerate(v.facet_active) if ok]
    tight = {i: frozenset(k for k, inc in enumerate(v.incidence) if i in inc) for i in facet_ids}
    # vertices are sorted lexicographically, so index order is lex order
    pick = min if anchor == "min" else max

    @lru_cache(maxsize=None)
    def face_dim(face: frozenset[int]) -> int:
        return _affine_rank([verts[k] for k in sorted(face)])

    @lru_cache(maxsize=None)
    def pull(face: frozenset[int], d: int) -> tuple[tuple[int, ...], ...]:
        if d == 0:
            return ((next(iter(face)),),)
        apex = pick(face)
        subfaces = set()
        for i in facet_ids:
            g = face & tight[i]
            if g != face and apex not in g and g and face_dim(g) == d - 1:
                subfaces.add(g)
        out = []
        for g in sorted(subfaces, key=sorted):
            for s in pull(g, d - 1):
                out.append((apex,) + s)
        return tuple(out)

    return list(pull(frozenset(range(len(verts))), n))


def _simplex_volume(pts: Sequence[Sequence[Fraction]]) -> Fraction:
    p0 = pts[0]
    edges = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    return abs(Fraction(det(edges))) / factorial(len(p0))


def moments(v: VRep, simplices: Sequence[Sequence[int]] | None = None) -> MomentData:
    """Exact volume and first moments from a triangulation.

    The integral of x_j over a simplex is its volume times the mean of the
    j-th vertex coordinates.
    """
    if simplices is None:
        simplices = triangulate(v)
    n = v.dim
    vol = Fraction(0)
    mom = [Fraction(0)] * n
    for s in simplices:
        pts = [v.vertices[k] for k in s]
        sv = _simplex_volume(pts)
        if not sv:
            continue
        vol += sv
        for j in range(n):
            mom[j] += sv * sum(p[j] for p in pts) / (n + 1)
    return MomentData(vol, tuple(mom))


def ke_verdict(m: MomentData) -> KEVerdict:
    return KEVerdict(all(b == 0 for b in m.barycenter), m.barycenter)


def polytope_moments(h: HPolytope) -> tuple[VRep, MomentData]:
    v = enumerate_vertices(h)
    return v, moments(v)
