"""JSON job specs and report documents.

Every rational travels as a string ("p/q" or "p") so nothing is ever parsed
as a float. Ray, divisor and coordinate indices in documents are 1-based,
matching the D_i / x_j labels; the library API is 0-based.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cke import CkeReport, ParametrizationResult
from .fan import Fan, bundle_fan, divisor_classes, validate
from .linalg import format_rational, parse_rational
from .poly import Poly
from .polytope import is_delzant, is_reflexive

__all__ = [
    "JobError",
    "JobSpec",
    "parse_interval",
    "format_interval",
    "fan_from_dict",
    "fan_to_dict",
    "report_document",
    "dumps",
]


class JobError(ValueError):
    """Malformed job or fan document."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


def parse_interval(text) -> tuple[Fraction, Fraction]:
    """``"(a/b,c/d)"`` or a two-element list of rational strings."""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    elif isinstance(text, str):
        s = text.strip()
        if s[:1] in "([" and s[-1:] in ")]":
            s = s[1:-1]
        parts = s.split(",")
    else:
        raise JobError(f"cannot read interval from {text!r}")
    if len(parts) != 2:
        raise JobError(f"interval needs two endpoints: {text!r}")
    try:
        lo, hi = (parse_rational(p if not isinstance(p, str) else p.strip()) for p in parts)
    except (ValueError, TypeError) as exc:
        raise JobError(f"bad interval {text!r}: {exc}") from exc
    if lo >= hi:
        raise JobError(f"empty interval {text!r}")
    return lo, hi


def format_interval(iv) -> str:
    return f"({format_rational(iv[0])},{format_rational(iv[1])})"


def fan_from_dict(doc: dict) -> Fan:
    try:
        dim = doc["dim"]
        rays = doc["rays"]
    except (KeyError, TypeError) as exc:
        raise JobError("fan document needs 'dim' and 'rays'") from exc
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise JobError("'dim' must be an integer")
    if not isinstance(rays, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r) for r in rays
    ):
        raise JobError("'rays' must be a list of integer lists")
    fan = Fan(dim, tuple(tuple(r) for r in rays), str(doc.get("label", "")))
    problems = validate(fan)
    if problems:
        raise JobError("invalid fan", problems)
    return fan


def fan_to_dict(fan: Fan) -> dict:
    return {"dim": fan.dim, "rays": [list(r) for r in fan.rays], "label": fan.label}


@dataclass(frozen=True)
class JobSpec:
    fan: Fan | None = None
    bundle: tuple[int, int] | None = None
    transform: Any = "auto"  # "auto", None, or a tuple of integer rows
    parametrized: Any = "auto-orbits"  # or a tuple of 1-based ray indices
    base_offset: Fraction = Fraction(1, 2)
    window: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    chamber: tuple[Fraction, Fraction] | None = None
    coordinate: Any = "auto"  # or a 1-based index
    output: str | None = None
    label: str = field(default="", compare=True)

    def __post_init__(self):
        if (self.fan is None) == (self.bundle is None):
            raise JobError("exactly one of 'fan' and 'bundle' is required")
        n = self.resolve_fan()
        k = len(n.rays)
        if self.parametrized != "auto-orbits":
            idx = self.parametrized
            if not idx or any(not isinstance(i, int) or not 1 <= i <= k for i in idx):
                raise JobError(f"parametrized indices must lie in 1..{k}")
        if self.coordinate != "auto":
            if not isinstance(self.coordinate, int) or not 1 <= self.coordinate <= n.dim:
                raise JobError(f"coordinate must lie in 1..{n.dim}")
        if self.transform not in ("auto", None):
            t = self.transform
            if len(t) != n.dim or any(len(row) != n.dim for row in t):
                raise JobError("transform must be a square matrix of the fan dimension")

    def resolve_fan(self) -> Fan:
        if self.fan is not None:
            return self.fan
        m, r = self.bundle
        return bundle_fan(m, r)

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "JobSpec":
        if not isinstance(doc, dict):
            raise JobError("job document must be an object")
        if "rays" in doc and "fan" not in doc and "bundle" not in doc:
            doc = {"fan": {k: doc[k] for k in ("dim", "rays", "label") if k in doc}}
        fan = bundle = None
        if "fan" in doc:
            src = doc["fan"]
            if isinstance(src, str):
                path = Path(src)
                if base_dir is not None and not path.is_absolute():
                    path = base_dir / path
                try:
                    src = json.loads(path.read_text())
                except (OSError, json.JSONDecodeError) as exc:
                    raise JobError(f"cannot read fan file {path}: {exc}") from exc
            fan = fan_from_dict(src)
        if "bundle" in doc:
            b = doc["bundle"]
            try:
                bundle = (int(b["m"]), int(b["r"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise JobError("'bundle' needs integer 'm' and 'r'") from exc
            if min(bundle) < 1:
                raise JobError("bundle m and r must be positive")
        transform = doc.get("transform", "auto")
        if transform not in ("auto", None):
            if not isinstance(transform, list) or not all(
                isinstance(row, list) and all(isinstance(x, int) for x in row) for row in transform
            ):
                raise JobError("'transform' must be 'auto', null or an integer matrix")
            transform = tuple(tuple(row) for row in transform)
        par = doc.get("parametrized", "auto-orbits")
        if par != "auto-orbits":
            if not isinstance(par, list):
                raise JobError("'parametrized' must be a list of ray indices or 'auto-orbits'")
            par = tuple(par)
        coordinate = doc.get("coordinate", "auto")
        try:
            base = parse_rational(doc.get("base_offset", "1/2"))
        except (ValueError, TypeError) as exc:
            raise JobError(f"bad base_offset: {exc}") from exc
        chamber = doc.get("chamber")
        return cls(
            fan=fan,
            bundle=bundle,
            transform=transform,
            parametrized=par,
            base_offset=base,
            window=parse_interval(doc.get("window", "(0,1)")),
            chamber=parse_interval(chamber) if chamber is not None else None,
            coordinate=coordinate,
            output=doc.get("output"),
            label=str(doc.get("label", "")),
        )

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {}
        if self.label:
            doc["label"] = self.label
        if self.fan is not None:
            doc["fan"] = fan_to_dict(self.fan)
        else:
            doc["bundle"] = {"m": self.bundle[0], "r": self.bundle[1]}
        doc["transform"] = (
            self.transform if self.transform in ("auto", None) else [list(r) for r in self.transform]
        )
        doc["parametrized"] = self.parametrized if self.parametrized == "auto-orbits" else list(self.parametrized)
        doc["base_offset"] = format_rational(self.base_offset)
        doc["window"] = format_interval(self.window)
        doc["chamber"] = format_interval(self.chamber) if self.chamber is not None else None
        doc["coordinate"] = self.coordinate
        doc["output"] = self.output
        return doc

    def library_args(self) -> dict:
        """Keyword arguments for :func:`toric_cke.cke.analyze_fan` (0-based)."""
        return {
            "parametrizations": (
                "auto-orbits" if self.parametrized == "auto-orbits" else [i - 1 for i in self.parametrized]
            ),
            "transform": self.transform,
            "base_offset": self.base_offset,
            "window": self.window,
            "chamber": self.chamber,
            "coordinate": self.coordinate if self.coordinate == "auto" else self.coordinate - 1,
        }


# --- reports -----------------------------------------------------------------


def _q(x) -> str:
    return format_rational(x)


def _poly(p: Poly | None) -> list[str] | None:
    return None if p is None else [_q(c) for c in p.coeffs]


def _affine(p: Fraction, q: Fraction) -> str:
    if q == 0:
        return _q(p)
    lin = "c" if q == 1 else ("-c" if q == -1 else f"{_q(q)}*c")
    if p == 0:
        return lin
    if lin.startswith("-"):
        return f"{_q(p)} - {lin[1:]}"
    return f"{_q(p)} + {lin}"


def _parametrization(res: ParametrizationResult) -> dict:
    doc: dict[str, Any] = {
        "parametrized": [i + 1 for i in res.parametrized],
        "status": res.status,
        "message": res.message,
    }
    pb = res.problem
    if pb is None:
        return doc
    doc["transform"] = None if pb.transform is None else [list(r) for r in pb.transform]
    doc["coordinate"] = pb.coordinate + 1
    doc["chamber"] = {
        "interval": [_q(pb.chamber.lo), _q(pb.chamber.hi)],
        "all_facets_active": all(pb.chamber.facet_active),
        "vertex_count": len(pb.chamber.signature[0]),
        "samples": [_q(c) for c in pb.chamber.samples],
    }
    doc["volume_poly"] = _poly(pb.polynomials.volume_poly)
    doc["moment_polys"] = [_poly(p) for p in pb.polynomials.moment_polys]
    if res.violations:
        doc["violations"] = [j + 1 for j in res.violations]
    doc["numerator"] = _poly(res.numerator)
    first, second = res.decomposition
    doc["solutions"] = [
        {
            "interval": [_q(s.root.lo), _q(s.root.hi)],
            "decimal": s.decimal,
            "complement_decimal": s.complement_decimal,
            "kahler": s.in_chamber,
            "decomposition": {
                "alpha1": [_affine(p, q) for p, q in first],
                "alpha2": [_affine(p, q) for p, q in second],
            },
        }
        for s in res.solutions
    ]
    return doc


def report_document(job: JobSpec, report: CkeReport, coupled: bool = True) -> dict:
    fan = report.fan
    h = report.anticanonical
    dc = divisor_classes(fan)
    doc: dict[str, Any] = {
        "job": job.to_dict(),
        "fan": {
            "label": fan.label,
            "dim": fan.dim,
            "ray_count": len(fan.rays),
            "rays": [list(r) for r in fan.rays],
        },
        "polytope": {
            "vertex_count": len(report.vrep.vertices),
            "reflexive": is_reflexive(h, report.vrep),
            "delzant": is_delzant(report.vrep, h.normals),
            "volume": _q(report.moments.volume),
            "first_moments": [_q(x) for x in report.moments.first_moments],
            "barycenter": [_q(x) for x in report.moments.barycenter],
        },
        "ke": {"is_ke": report.ke.is_ke},
        "reductivity": {
            "semisimple": report.reductivity.semisimple,
            "nill_sufficient": report.reductivity.nill_sufficient,
            "roots": report.reductivity.root_counts["roots"],
            "semisimple_roots": report.reductivity.root_counts["semisimple"],
            "unipotent_roots": report.reductivity.root_counts["unipotent"],
        },
        "divisor_classes": {
            "picard_rank": dc.free_rank,
            "torsion": list(dc.torsion),
            "equivalence_classes": [[i + 1 for i in c] for c in dc.equivalence_classes],
        },
    }
    if coupled:
        doc["parametrizations"] = [_parametrization(r) for r in report.parametrizations]
        doc["classification"] = report.classification
        if report.details:
            doc["details"] = report.details
    return doc


_FLAT_LIST = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def _inline(match: re.Match) -> str:
    try:
        items = json.loads("[" + match.group(1) + "]")
    except json.JSONDecodeError:
        return match.group(0)
    return json.dumps(items, ensure_ascii=False)


def dumps(doc: dict) -> str:
    """Indented JSON with innermost lists of scalars kept on one line."""
    return _FLAT_LIST.sub(_inline, json.dumps(doc, indent=2, ensure_ascii=False)) + "\n"
