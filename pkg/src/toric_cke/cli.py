"""Command-line front end.

    toric-cke analyze --fixture d5b
    toric-cke cke --job job.json --out report.json
    toric-cke scan --max-dim 6 --out scan.csv
    toric-cke fixtures

Exit codes: 0 decisive result, 1 bad input, 2 geometric degeneracy or an
inconclusive classification.

Completeness of an input fan is not checked from cone data (only rays are
given); bounded root-search and anticanonical polytopes stand in for it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .cke import analyze_fan
from .documents import JobError, JobSpec, dumps, parse_interval, report_document
from .fan import bundle_fan
from .fixtures import DESCRIPTIONS, FIXTURES
from .polytope import GeometryError

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY = 0, 1, 2

SCAN_COLUMNS = [
    "m",
    "r",
    "dim",
    "rays",
    "volume",
    "ke",
    "semisimple",
    "nill_sufficient",
    "classification",
    "orbits",
    "valid_roots",
    "mirror",
]


def _load_job(args) -> JobSpec:
    given = [args.job is not None, args.fixture is not None, args.m is not None or args.r is not None]
    if sum(given) != 1:
        raise JobError("give exactly one of --job, --fixture or --m/--r")
    if args.fixture is not None:
        if args.fixture not in FIXTURES:
            raise JobError(f"unknown fixture {args.fixture!r}; see 'fixtures'")
        job = FIXTURES[args.fixture]
    elif args.job is not None:
        path = Path(args.job)
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise JobError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise JobError(f"{path} is not valid JSON: {exc}") from exc
        job = JobSpec.from_dict(doc, base_dir=path.parent)
    else:
        if args.m is None or args.r is None:
            raise JobError("--m and --r go together")
        try:
            m, r = int(args.m), int(args.r)
        except ValueError as exc:
            raise JobError("--m and --r must be integers here") from exc
        if min(m, r) < 1:
            raise JobError("bundle m and r must be positive")
        job = JobSpec(bundle=(m, r))
    if args.window is not None:
        job = replace(job, window=parse_interval(args.window))
    return job


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _run(args, coupled: bool) -> int:
    try:
        job = _load_job(args)
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_INPUT
    fan = job.resolve_fan()
    try:
        report = analyze_fan(fan, coupled=coupled, **job.library_args())
    except GeometryError as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    doc = report_document(job, report, coupled=coupled)
    _emit(dumps(doc), args.out or job.output)
    if coupled and report.classification == "inconclusive":
        return EXIT_GEOMETRY
    return EXIT_OK


def cmd_analyze(args) -> int:
    return _run(args, coupled=False)


def cmd_cke(args) -> int:
    return _run(args, coupled=True)


def _range(text: str | None, default: range) -> range:
    if text is None:
        return default
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise JobError(f"bad range {text!r}; use 'k' or 'lo:hi'") from None


def scan_row(m: int, r: int, window=None) -> dict:
    """One summary row; failures land in the classification column."""
    fan = bundle_fan(m, r)
    row = {"m": m, "r": r, "dim": fan.dim, "rays": len(fan.rays)}
    try:
        kwargs = {} if window is None else {"window": window}
        rep = analyze_fan(fan, **kwargs)
    except Exception as exc:  # noqa: BLE001 - a scan reports and moves on
        log.warning("bundle(%d,%d) failed: %s", m, r, exc)
        row["classification"] = f"error: {type(exc).__name__}: {exc}"
        return row
    orbits = []
    valid = []
    for res in rep.parametrizations:
        name = "{" + ",".join(str(i + 1) for i in res.parametrized) + "}"
        if res.status != "ok":
            orbits.append(f"{name}:{res.status}")
            continue
        good = res.valid_solutions
        orbits.append(f"{name}:{len(good)}/{len(res.solutions)}")
        valid.extend(s.decimal for s in good)
    row.update(
        volume=str(rep.moments.volume),
        ke=rep.ke.is_ke,
        semisimple=rep.reductivity.semisimple,
        nill_sufficient=rep.reductivity.nill_sufficient,
        classification=rep.classification,
        orbits="; ".join(orbits),
        valid_roots=" ".join(sorted(valid)),
    )
    return row


def _mirror_key(row: dict):
    return (row.get("volume"), row.get("ke"), row.get("semisimple"), row.get("classification"), row.get("valid_roots"))


def scan(pairs, window=None) -> list[dict]:
    rows = [scan_row(m, r, window) for m, r in pairs]
    by_pair = {(row["m"], row["r"]): row for row in rows}
    for row in rows:
        other = by_pair.get((row["r"], row["m"]))
        if other is None or other is row:
            row["mirror"] = ""
        else:
            row["mirror"] = "agrees" if _mirror_key(row) == _mirror_key(other) else "DISAGREES"
    return rows


def cmd_scan(args) -> int:
    try:
        if args.max_dim < 2:
            raise JobError("--max-dim must be at least 2")
        ms = _range(args.m, range(1, args.max_dim))
        rs = _range(args.r, range(1, args.max_dim))
        window = parse_interval(args.window) if args.window is not None else None
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    pairs = [(m, r) for m in ms for r in rs if m >= 1 and r >= 1 and m + r + 1 <= args.max_dim]
    if not pairs:
        print("error: no (m, r) pairs in range", file=sys.stderr)
        return EXIT_INPUT
    rows = scan(pairs, window)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    for name in sorted(FIXTURES):
        print(f"{name:10s} {DESCRIPTIONS[name]}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for geometry here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toric-cke", description="Exact KE / coupled-KE checks for toric Fano fans.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def job_flags(p):
        p.add_argument("--job", help="JSON job file (or a bare fan file)")
        p.add_argument("--fixture", help="built-in job name")
        p.add_argument("--m", help="bundle parameter m (instead of a job)")
        p.add_argument("--r", help="bundle parameter r (instead of a job)")
        p.add_argument("--window", help='parameter window, e.g. "(1/4,3/4)"')
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="polytope, KE and reductivity report")
    job_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cke", help="full report including the coupled search")
    job_flags(p)
    p.set_defaults(func=cmd_cke)

    p = sub.add_parser("scan", help="CSV summary over bundle(m, r)")
    p.add_argument("--m", help="m or lo:hi")
    p.add_argument("--r", help="r or lo:hi")
    p.add_argument("--max-dim", type=int, default=8, help="skip bundles above this dimension (default 8)")
    p.add_argument("--window", help='parameter window, e.g. "(0,1)"')
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fixtures", help="list built-in jobs")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
