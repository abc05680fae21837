"""Fans given by ray generators: validation, Demazure roots, divisor classes,
ray-set automorphisms and the projective-bundle generator.

Fans are described by rays only. Completeness is never checked from cone
data; boundedness of the anticanonical polytope (and of the root search
region, which is the same set) stands in for it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionError,
    det,
    identity,
    inverse,
    is_unimodular,
    matmul,
    matvec,
    nullspace,
    primitive_vector,
    rank,
    smith_normal_form,
    transpose,
)
from .polytope import HPolytope, UnboundedError, enumerate_vertices

__all__ = [
    "Fan",
    "RootSet",
    "ReductivityVerdict",
    "DivisorClassInfo",
    "validate",
    "bundle_fan",
    "demazure_roots",
    "reductivity_verdict",
    "divisor_classes",
    "apply_unimodular",
    "ray_automorphisms",
    "fixed_subspace",
    "set_stabilizer",
    "invariant_direction",
    "adapted_transform",
]


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))

    @property
    def ray_matrix(self) -> list[list[int]]:
        """n x k matrix whose columns are the rays."""
        return transpose(self.rays)

    def ray_sum(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.rays))


@dataclass(frozen=True)
class RootSet:
    all: tuple[tuple[int, ...], ...]
    semisimple: tuple[tuple[int, ...], ...]
    unipotent: tuple[tuple[int, ...], ...]
    witness: dict

    @property
    def counts(self) -> dict[str, int]:
        return {"roots": len(self.all), "semisimple": len(self.semisimple), "unipotent": len(self.unipotent)}


@dataclass(frozen=True)
class ReductivityVerdict:
    semisimple: bool
    nill_sufficient: bool
    root_counts: dict


@dataclass(frozen=True)
class DivisorClassInfo:
    """Linear equivalence among the torus-invariant divisors D_1..D_k.

    ``relation_basis`` spans the principal divisors div(chi^m) = sum_i <m, v_i> D_i.
    ``ray_relations`` spans the integer linear relations sum_i r_i v_i = 0
    (the orthogonal complement, whose rank is the Picard number).
    """

    free_rank: int
    relation_basis: tuple[tuple[int, ...], ...]
    ray_relations: tuple[tuple[int, ...], ...]
    torsion: tuple[int, ...]
    equivalence_classes: tuple[tuple[int, ...], ...]

    def is_principal(self, divisor: Sequence[int]) -> bool:
        """Is sum_i a_i D_i linearly equivalent to zero?"""
        return _in_lattice(self.relation_basis, divisor)


def validate(fan: Fan) -> list[str]:
    """All violations of the ray-data invariants; empty when the fan is fine."""
    problems = []
    if fan.dim < 1:
        problems.append(f"dimension must be positive, got {fan.dim}")
    for i, r in enumerate(fan.rays, 1):
        if len(r) != fan.dim:
            problems.append(f"ray {i} has length {len(r)}, expected {fan.dim}")
            continue
        if not any(r):
            problems.append(f"ray {i} is zero")
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            problems.append(f"ray {i} {list(r)} is not primitive")
    seen = {}
    for i, r in enumerate(fan.rays, 1):
        if r in seen:
            problems.append(f"ray {i} duplicates ray {seen[r]}")
        seen.setdefault(r, i)
    if len(fan.rays) < fan.dim + 1:
        problems.append(f"{len(fan.rays)} rays cannot form a complete fan in dimension {fan.dim}")
    return problems


def bundle_fan(m: int, r: int) -> Fan:
    """Rays of P(O + O(-1,1)) over CP^m x CP^r, dimension m + r + 1.

    Order: e_1..e_n, then -e_1-..-e_m+e_n, -e_{m+1}-..-e_{m+r}-e_n, -e_n.
    """
    if m < 1 or r < 1:
        raise ValueError("m and r must be positive")
    n = m + r + 1

    def vec(entries):
        v = [0] * n
        for k, x in entries:
            v[k] += x
        return tuple(v)

    rays = [vec([(i, 1)]) for i in range(n)]
    rays.append(vec([(i, -1) for i in range(m)] + [(n - 1, 1)]))
    rays.append(vec([(i, -1) for i in range(m, m + r)] + [(n - 1, -1)]))
    rays.append(vec([(n - 1, -1)]))
    return Fan(n, tuple(rays), f"P(O+O(-1,1)) over CP^{m} x CP^{r}")


# --- Demazure roots ----------------------------------------------------------


def _lattice_points(fan: Fan) -> np.ndarray:
    """Integer points m with <v, m> >= -1 for every ray (the root search region)."""
    try:
        vrep = enumerate_vertices(HPolytope.anticanonical(fan.rays))
    except UnboundedError as exc:
        raise UnboundedError(f"root search region is unbounded; fan is not complete ({exc})") from exc
    lo = [min(v[j] for v in vrep.vertices) for j in range(fan.dim)]
    hi = [max(v[j] for v in vrep.vertices) for j in range(fan.dim)]
    axes = [np.arange(math.ceil(a), math.floor(b) + 1) for a, b in zip(lo, hi)]
    rays = np.array(fan.rays, dtype=np.int64)
    kept = []
    # enumerate the box slab by slab over the first axis to bound memory
    rest = np.array(list(itertools.product(*axes[1:])), dtype=np.int64).reshape(-1, fan.dim - 1)
    for x0 in axes[0]:
        pts = np.hstack([np.full((len(rest), 1), x0, dtype=np.int64), rest])
        pair = pts @ rays.T
        kept.append(pts[(pair >= -1).all(axis=1)])
    return np.vstack(kept)


def demazure_roots(fan: Fan) -> RootSet:
    """Lattice functionals pairing to -1 with exactly one ray and >= 0 with the rest."""
    pts = _lattice_points(fan)
    rays = np.array(fan.rays, dtype=np.int64)
    pair = pts @ rays.T
    neg = (pair == -1).sum(axis=1)
    nonneg_rest = (pair >= -1).all(axis=1)
    mask = (neg == 1) & nonneg_rest
    roots = sorted(tuple(int(x) for x in p) for p in pts[mask])
    witness = {}
    for m in roots:
        pairings = [sum(a * b for a, b in zip(v, m)) for v in fan.rays]
        witness[m] = pairings.index(-1)
    root_set = set(roots)
    semi = tuple(m for m in roots if tuple(-x for x in m) in root_set)
    uni = tuple(m for m in roots if tuple(-x for x in m) not in root_set)
    return RootSet(tuple(roots), semi, uni, witness)


def reductivity_verdict(fan: Fan) -> ReductivityVerdict:
    roots = demazure_roots(fan)
    return ReductivityVerdict(
        semisimple=not roots.unipotent,
        nill_sufficient=not any(fan.ray_sum()),
        root_counts=roots.counts,
    )


# --- divisor classes ---------------------------------------------------------


def _in_lattice(basis: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """Is ``target`` an integer combination of ``basis`` vectors?"""
    cols = transpose(basis)  # k x n, columns are basis vectors
    u, d, _ = smith_normal_form(cols)
    ut = matvec(u, list(target))
    for i, x in enumerate(ut):
        di = d[i][i] if i < len(d[0]) else 0
        if di == 0:
            if x != 0:
                return False
        elif x % di:
            return False
    return True


def divisor_classes(fan: Fan) -> DivisorClassInfo:
    k, n = len(fan.rays), fan.dim
    if rank(fan.rays) < n:
        raise DimensionError("rays do not span the ambient space")
    # the map M -> Z^k, m -> (<v_i, m>)_i has matrix R = rays (k x n)
    r = [list(v) for v in fan.rays]
    u, d, v = smith_normal_form(r)
    diag = [d[i][i] for i in range(min(k, n))]
    torsion = tuple(x for x in diag if x > 1)
    relation_basis = tuple(tuple(col) for col in transpose(r))
    # kernel of the n x k ray matrix: trailing columns of V in its Smith form
    u2, d2, v2 = smith_normal_form(fan.ray_matrix)
    rk = sum(1 for i in range(min(n, k)) if d2[i][i])
    ray_relations = tuple(tuple(row[j] for row in v2) for j in range(rk, k))
    classes: list[list[int]] = []
    for i in range(k):
        for cls in classes:
            e = [0] * k
            e[i], e[cls[0]] = 1, -1
            if _in_lattice(relation_basis, e):
                cls.append(i)
                break
        else:
            classes.append([i])
    return DivisorClassInfo(
        free_rank=k - n,
        relation_basis=relation_basis,
        ray_relations=ray_relations,
        torsion=torsion,
        equivalence_classes=tuple(tuple(c) for c in classes),
    )


# --- linear transforms and symmetries ----------------------------------------


def apply_unimodular(fan: Fan, a: Sequence[Sequence[int]], *, require_unimodular: bool = True) -> Fan:
    """Replace each ray v by a.v (a acts on column vectors).

    With ``require_unimodular=False`` any integer matrix of nonzero
    determinant is accepted; the resulting rays need not be primitive.
    """
    if len(a) != fan.dim or any(len(row) != fan.dim for row in a):
        raise DimensionError("transform does not match the fan dimension")
    if require_unimodular:
        if not is_unimodular(a):
            raise ValueError("transform is not unimodular")
    elif det(a) == 0:
        raise ValueError("transform is singular")
    rays = tuple(tuple(int(x) for x in matvec(a, list(v))) for v in fan.rays)
    return Fan(fan.dim, rays, fan.label)


def ray_automorphisms(fan: Fan) -> list[list[list[int]]]:
    """Every g in GL(n, Z) that permutes the ray set.

    Fix a basis among the rays and search over images of the basis rays.
    A partial assignment is pruned as soon as some other ray, written in
    the basis, has all its coordinates assigned and maps outside the rays.
    """
    n = fan.dim
    rays = list(fan.rays)
    ray_set = set(rays)
    basis_idx = None
    for combo in itertools.combinations(range(len(rays)), n):
        if det([rays[i] for i in combo]) != 0:
            basis_idx = combo
            break
    if basis_idx is None:
        raise DimensionError("rays do not span")
    s_t_inv = inverse(transpose([rays[i] for i in basis_idx]))
    coords = [matvec(s_t_inv, list(v)) for v in rays]
    supports = [frozenset(j for j, c in enumerate(cs) if c) for cs in coords]

    # greedy order: assign first the basis slots that close the most supports
    order: list[int] = []
    left = set(range(n))
    while left:
        def score(b):
            chosen = set(order) | {b}
            closed = sum(1 for sp in supports if sp <= chosen)
            return (closed, sum(1.0 / len(sp) for sp in supports if b in sp))
        best = max(sorted(left), key=score)
        order.append(best)
        left.remove(best)
    checks: list[list[int]] = [[] for _ in range(n)]
    for k, sp in enumerate(supports):
        step = max(order.index(j) for j in sp)
        checks[step].append(k)

    found = []
    images: list[tuple[int, ...] | None] = [None] * n

    def image_of(k):
        return tuple(
            sum(c * images[j][i] for j, c in enumerate(coords[k]) if c) for i in range(n)
        )

    def extend(step: int, used: set[int]) -> None:
        if step == n:
            t_t = transpose([images[j] for j in range(n)])
            g = matmul(t_t, s_t_inv)
            if all(Fraction(x).denominator == 1 for row in g for x in row):
                g = [[int(x) for x in row] for row in g]
                if abs(det(g)) == 1:
                    found.append(g)
            return
        slot = order[step]
        for idx in range(len(rays)):
            if idx in used:
                continue
            images[slot] = rays[idx]
            if all(image_of(k) in ray_set for k in checks[step]):
                used.add(idx)
                extend(step + 1, used)
                used.discard(idx)
        images[slot] = None

    extend(0, set())
    found.sort()
    return found


def fixed_subspace(gens: Sequence[Sequence[Sequence]]) -> list[list[Fraction]]:
    """Basis of the common fixed space {x : g x = x for all g}."""
    if not gens:
        raise ValueError("need at least one matrix")
    n = len(gens[0])
    if any(len(g) != n or any(len(row) != n for row in g) for g in gens):
        raise DimensionError("matrices must be square of one size")
    stacked: list[list[Fraction]] = []
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for g in gens:
        if all(matvec(g, b) == b for b in basis):
            continue
        for i in range(n):
            stacked.append([Fraction(g[i][j]) - (1 if i == j else 0) for j in range(n)])
        basis = nullspace(stacked)
    return basis


def set_stabilizer(fan: Fan, group: Sequence, subset: Sequence[int]) -> list:
    """Elements of ``group`` mapping the rays indexed by ``subset`` onto themselves."""
    target = {fan.rays[i] for i in subset}
    return [g for g in group if {tuple(matvec(g, list(fan.rays[i]))) for i in subset} == target]


def invariant_direction(fan: Fan, subset: Sequence[int] | None = None) -> list[int] | None:
    """Primitive generator of the line in M fixed by the (stabilizer) symmetry group.

    The group acts on M by the inverse transpose, so the fixed points are
    those of the transposes. ``None`` unless that fixed space is a line.
    """
    group = ray_automorphisms(fan)
    if subset is not None:
        group = set_stabilizer(fan, group, subset)
    basis = fixed_subspace([transpose(g) for g in group])
    if len(basis) != 1:
        return None
    return primitive_vector(basis[0])


def adapted_transform(fan: Fan, subset: Sequence[int] | None = None) -> list[list[int]] | None:
    """Integer matrix A (acting on rays) that moves the invariant line to the last axis.

    With d the invariant direction, normalized so d_n > 0, A^T has columns
    e_1, ..., e_{n-1}, -d. Then v' = A v keeps the first n-1 coordinates and
    replaces the last by -<d, v>, and |det A| = d_n.
    """
    d = invariant_direction(fan, subset)
    if d is None or d[-1] == 0:
        return None
    if d[-1] < 0:
        d = [-x for x in d]
    n = fan.dim
    at = identity(n)
    for i in range(n):
        at[i][n - 1] = -d[i]
    return transpose(at)
