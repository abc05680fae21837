"""Two-coupled Kähler–Einstein decompositions on a symmetric parametric family.

The anticanonical offsets are split as b(c) + b(1 - c), with offset c on a
chosen set of rays (1 - c in the partner) and 1/2 on the rest. When every
barycenter coordinate but one vanishes identically, the coupled condition
is a single rational equation in c whose cleared numerator we solve exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fan import (
    Fan,
    ReductivityVerdict,
    adapted_transform,
    apply_unimodular,
    divisor_classes,
    invariant_direction,
    reductivity_verdict,
)
from .linalg import det, inverse, matvec, transpose
from .parametric import (
    Chamber,
    ChamberViolation,
    DegreeBoundViolation,
    FamilyPolynomials,
    ParametricFamily,
    certify_chamber,
    chamber_breakpoints,
    family_from_fan,
    family_polynomials,
)
from .poly import IsolatingInterval, Poly, count_roots, isolate_real_roots, refine_root, to_decimal
from .polytope import HPolytope, KEVerdict, MomentData, VRep, enumerate_vertices, ke_verdict, moments

log = logging.getLogger(__name__)

__all__ = [
    "SetupError",
    "InconsistencyError",
    "CoupledProblem",
    "CkeSolution",
    "ParametrizationResult",
    "CkeReport",
    "KAHLER_MIN_WIDTH",
    "build_problem",
    "verify_reduction",
    "coupled_equation",
    "kahler_check",
    "solve",
    "analyze_fan",
    "auto_orbits",
    "classify",
    "transform_volume_check",
]

KAHLER_MIN_WIDTH = Fraction(1, 10**12)
DECIMAL_WIDTH = Fraction(1, 10**12)
HALF = Fraction(1, 2)
REFLECT = Poly([1, -1])  # c -> 1 - c


class SetupError(ValueError):
    """The coupled problem cannot be posed (no transform, coordinate or chamber)."""


class InconsistencyError(RuntimeError):
    """Internal check failed, e.g. the volume polynomial vanishes inside a chamber."""


@dataclass(frozen=True)
class CoupledProblem:
    fan: Fan
    family: ParametricFamily
    chamber: Chamber
    polynomials: FamilyPolynomials
    coordinate: int
    transform: tuple[tuple[int, ...], ...] | None
    window: tuple[Fraction, Fraction]

    @property
    def fan_label(self) -> str:
        return self.fan.label


@dataclass(frozen=True)
class CkeSolution:
    root: IsolatingInterval
    numerator: Poly
    in_chamber: bool | None
    decimal: str

    @property
    def complement_root(self) -> tuple[Fraction, Fraction]:
        return (1 - self.root.hi, 1 - self.root.lo)

    @property
    def complement_decimal(self) -> str:
        return to_decimal(1 - self.root.midpoint)


@dataclass
class ParametrizationResult:
    parametrized: tuple[int, ...]
    status: str
    message: str = ""
    problem: CoupledProblem | None = None
    numerator: Poly | None = None
    solutions: list[CkeSolution] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)

    @property
    def decomposition(self) -> tuple[tuple[tuple[Fraction, Fraction], ...], ...] | None:
        """Affine offsets (p, q), meaning p + q c, of the two summands over the rays."""
        if self.problem is None:
            return None
        first = self.problem.family.offset_affine
        second = tuple((p + q, -q) for p, q in first)
        return first, second

    @property
    def valid_solutions(self) -> list[CkeSolution]:
        return [s for s in self.solutions if s.in_chamber]


@dataclass
class CkeReport:
    fan: Fan
    anticanonical: HPolytope
    vrep: VRep
    moments: MomentData
    ke: KEVerdict
    reductivity: ReductivityVerdict
    parametrizations: list[ParametrizationResult]
    classification: str
    details: list[str] = field(default_factory=list)


# --- problem construction ----------------------------------------------------


def _symmetric_chamber_interval(fam: ParametricFamily, window: tuple[Fraction, Fraction]):
    lo, hi = window
    lo, hi = max(lo, 1 - hi), min(hi, 1 - lo)
    if not lo < HALF < hi:
        raise SetupError(f"window ({lo}, {hi}) does not contain 1/2 symmetrically")
    cuts = chamber_breakpoints(fam, (lo, hi), symmetric=True)
    if HALF in cuts:
        raise SetupError("c = 1/2 is itself a breakpoint")
    left = max([lo] + [b for b in cuts if b < HALF])
    right = min([hi] + [b for b in cuts if b > HALF])
    return left, right


def build_problem(
    fan: Fan,
    parametrized: Sequence[int],
    transform="auto",
    base_offset=HALF,
    window=(Fraction(0), Fraction(1)),
    chamber=None,
    coordinate="auto",
) -> CoupledProblem:
    """Pose the coupled equation for one set of parametrized rays (0-based).

    ``transform`` is an integer matrix acting on the rays, ``"auto"`` for the
    symmetry-adapted one, or ``None`` for none. ``chamber`` is an explicit
    interval to certify; by default the chamber around 1/2 is located from
    the symmetric breakpoints inside ``window``.
    """
    if Fraction(base_offset) != HALF:
        raise SetupError("the two summands only add up to the anticanonical class for base offset 1/2")
    parametrized = tuple(sorted(parametrized))
    window = (Fraction(window[0]), Fraction(window[1]))
    if isinstance(transform, str):
        if transform != "auto":
            raise SetupError(f"unknown transform keyword {transform!r}")
        transform = adapted_transform(fan, parametrized)
        if transform is None:
            raise SetupError("symmetry group does not fix a line with nonzero last coordinate")
    if transform is not None:
        transform = tuple(tuple(int(x) for x in row) for row in transform)
        work = apply_unimodular(fan, transform, require_unimodular=False)
    else:
        work = fan
    fam = family_from_fan(work, parametrized, base_offset)

    if coordinate == "auto":
        d = invariant_direction(fan, parametrized)
        if d is None:
            raise SetupError("invariant subspace is not a line; give the coordinate explicitly")
        if transform is not None:
            d = matvec(transpose(inverse(transform)), d)
        nonzero = [j for j, x in enumerate(d) if x]
        if len(nonzero) != 1:
            raise SetupError("invariant line is not a coordinate axis; give the coordinate explicitly")
        coordinate = nonzero[0]
    coordinate = int(coordinate)
    if not 0 <= coordinate < fan.dim:
        raise SetupError("coordinate out of range")

    if chamber is None:
        interval = _symmetric_chamber_interval(fam, window)
    else:
        interval = (Fraction(chamber[0]), Fraction(chamber[1]))
    ch = certify_chamber(fam, interval)
    polys = family_polynomials(fam, ch)
    return CoupledProblem(fan, fam, ch, polys, coordinate, transform, window)


def verify_reduction(problem: CoupledProblem) -> list[int]:
    """Coordinates other than the distinguished one whose moment is not identically 0."""
    return [
        j
        for j, p in enumerate(problem.polynomials.moment_polys)
        if j != problem.coordinate and not p.is_zero()
    ]


def coupled_equation(problem: CoupledProblem) -> Poly:
    """Primitive numerator of m(c)/V(c) + m(1-c)/V(1-c)."""
    ch = problem.chamber
    vol = problem.polynomials.volume_poly
    mom = problem.polynomials.moment_polys[problem.coordinate]
    if count_roots(vol, ch.lo, ch.hi) or vol((ch.lo + ch.hi) / 2) == 0:
        raise InconsistencyError("volume polynomial vanishes inside the chamber")
    num = mom * vol(REFLECT) + mom(REFLECT) * vol
    return num.primitive()


def kahler_check(problem: CoupledProblem, root: IsolatingInterval, min_width=KAHLER_MIN_WIDTH) -> bool | None:
    """Whether both c and 1 - c sit strictly inside a chamber with every facet present.

    ``None`` when the root cannot be separated from a chamber end at ``min_width``.
    """
    ch = problem.chamber
    if not all(ch.facet_active):
        return False
    lo, hi = max(ch.lo, 1 - ch.hi), min(ch.hi, 1 - ch.lo)
    if lo >= hi:
        return False
    r = root
    while True:
        if r.is_exact:
            return lo < r.lo < hi
        if r.hi <= lo or r.lo >= hi:
            return False
        if lo < r.lo and r.hi < hi:
            return True
        if r.width <= min_width:
            return None
        r = refine_root(r, r.width / 2)


def _solutions(problem: CoupledProblem, numerator: Poly) -> list[CkeSolution]:
    if numerator.is_zero():
        # every c solves; report the symmetric split
        root = IsolatingInterval(HALF, HALF, Poly([-HALF, 1]).primitive())
        return [CkeSolution(root, numerator, kahler_check(problem, root), to_decimal(HALF))]
    out = []
    for r in isolate_real_roots(numerator, *problem.window):
        fine = refine_root(r, DECIMAL_WIDTH)
        out.append(CkeSolution(fine, numerator, kahler_check(problem, fine), to_decimal(fine.midpoint)))
    return out


def solve(problem: CoupledProblem) -> ParametrizationResult:
    """Numerator, isolated roots and Kähler verdicts for one posed problem."""
    result = ParametrizationResult(problem.family.parametrized, "ok", problem=problem)
    bad = verify_reduction(problem)
    if bad:
        result.status = "reduction-failed"
        result.violations = bad
        result.message = "moments do not vanish for coordinates " + ", ".join(f"x{j + 1}" for j in bad)
        return result
    try:
        num = coupled_equation(problem)
    except InconsistencyError as exc:
        result.status = "inconsistent"
        result.message = str(exc)
        return result
    result.numerator = num
    result.solutions = _solutions(problem, num)
    return result


def transform_volume_check(fan: Fan, transform) -> tuple[Fraction, Fraction]:
    """Anticanonical volume after ``v -> A v``, computed directly and as Vol(P) / |det A|.

    The polytope moves by the inverse transpose, so the two must agree; a
    claimed value that matches neither is inconsistent with the transform.
    """
    a = [[int(x) for x in row] for row in transform]
    moved = apply_unimodular(fan, a, require_unimodular=False)
    direct = moments(enumerate_vertices(HPolytope.anticanonical(moved.rays))).volume
    base = moments(enumerate_vertices(HPolytope.anticanonical(fan.rays))).volume
    return direct, base / abs(det(a))


# --- whole-fan analysis ------------------------------------------------------


def auto_orbits(fan: Fan) -> list[tuple[int, ...]]:
    """Classes of linearly equivalent torus-invariant divisors with two or more members."""
    return [c for c in divisor_classes(fan).equivalence_classes if len(c) >= 2]


def classify(ke: KEVerdict, red: ReductivityVerdict, results: Sequence[ParametrizationResult]) -> str:
    if ke.is_ke:
        return "KE"
    if not red.semisimple:
        return "non-reductive"
    sols = [s for r in results for s in r.solutions]
    if any(s.in_chamber for s in sols):
        return "cKE-not-KE"
    if any(s.in_chamber is None for s in sols) or any(r.status == "inconsistent" for r in results):
        return "inconclusive"
    if results and not any(r.status == "ok" for r in results):
        # nothing could be posed, so the search said nothing
        return "inconclusive"
    return "reductive-no-cKE-found"


def analyze_fan(
    fan: Fan,
    parametrizations="auto-orbits",
    transform="auto",
    base_offset=HALF,
    window=(Fraction(0), Fraction(1)),
    chamber=None,
    coordinate="auto",
    coupled: bool = True,
) -> CkeReport:
    """KE verdict, reductivity and (optionally) the coupled search for a fan."""
    h = HPolytope.anticanonical(fan.rays)
    vrep = enumerate_vertices(h)
    mom = moments(vrep)
    ke = ke_verdict(mom)
    red = reductivity_verdict(fan)
    results: list[ParametrizationResult] = []
    details: list[str] = []
    if coupled and not ke.is_ke and red.semisimple:
        sets = auto_orbits(fan) if parametrizations == "auto-orbits" else [tuple(parametrizations)]
        for subset in sets:
            try:
                problem = build_problem(fan, subset, transform, base_offset, window, chamber, coordinate)
            except (SetupError, ChamberViolation, DegreeBoundViolation) as exc:
                log.info("parametrization %s not posed: %s", subset, exc)
                results.append(ParametrizationResult(tuple(sorted(subset)), "setup-failed", str(exc)))
                continue
            results.append(solve(problem))
    elif coupled and ke.is_ke:
        details.append("barycenter vanishes; coupled search not needed")
    elif coupled:
        details.append("unipotent roots present; no coupled metric can exist")
    return CkeReport(fan, h, vrep, mom, ke, red, results, classify(ke, red, results), details)
