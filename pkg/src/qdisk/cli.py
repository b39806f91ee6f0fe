"""Command-line front end.

Subcommands:
    classify  a,b,c,d     classify a sheet coefficient tuple
    table                 emit the full matching table (CSV or JSON)
    minimize  TRACE.json  spectral minimizer for boundary data, field dump +
                          frequency profile, optional relaxation oracle
    blowup    TRACE.json  blow-up at given radii and catalog identification

Exit codes: 0 success, 1 negative classification result, 2 invalid input,
3 numerical-verification failure.

File formats:
    boundary trace  JSON array of {"theta": t, "p1": [x, y], "p2": [x, y]}
                    at uniform angles starting from 0
    field dump      CSV rows (ring_index, angle_index, sheet, x, y) plus a
                    JSON sidecar {"n_r", "n_theta", "seam"}
    profile         CSV columns r, D, H, N
    match table     CSV columns form_i, form_j, continuation,
                    frequency_class, constraints (JSON: same records)
    blow-up report  JSON {fitted_N, rounded_N, continuation, residual,
                    boundary_mass, 1/N}
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .blowup import (
    blowup_report,
    blowup_sequence,
    identify_catalog,
    report_to_json,
)
from .errors import (
    AmbiguousClass,
    NoCatalogMatch,
    NoConvergence,
    QdiskError,
)
from .field import (
    PolarGrid,
    dirichlet_energy,
    frequency_profile,
    save_field,
)
from .forms import (
    Continuation,
    FourTuple,
    build_match_table,
    classify_form,
    conformal_defect,
    table_to_csv,
    table_to_json,
)
from .minimizer import (
    analyze_spectrum,
    forced_lift,
    frequency_from_spectrum,
    lift_boundary,
    load_trace,
    minimize,
    relax_oracle,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# Classification tolerance for tuples fitted from finite-resolution blow-up
# limits; the exact-input tolerance (--tol) is far below fit noise.
BLOWUP_FIT_TOL = 0.05

DEFAULT_PROFILE_RADII = tuple(np.linspace(0.25, 1.0, 16))
DEFAULT_BLOWUP_RADII = (0.4, 0.2, 0.1)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nr", type=int, default=64, help="radial cells")
    parser.add_argument("--ntheta", type=int, default=256, help="angular cells")
    parser.add_argument("--tol", type=float, default=1e-9, help="classification tolerance")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--radii", type=str, default=None, help="comma-separated radii")
    parser.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument(
        "--class",
        dest="klass",
        choices=("identity", "swap"),
        default=None,
        help="force the continuation class",
    )
    parser.add_argument("--oracle", action="store_true", help="run the relaxation oracle")
    parser.add_argument("--oracle-tol", type=float, default=0.01, help="max relative oracle gap")
    parser.add_argument(
        "--dump-fields",
        metavar="PREFIX",
        default=None,
        help="blowup only: write each rescaled field to PREFIX_r<RADIUS>.csv",
    )


def _parse_radii(arg: str | None, default) -> tuple:
    if arg is None:
        return tuple(default)
    try:
        radii = tuple(float(x) for x in arg.split(","))
    except ValueError as exc:
        raise UsageError(f"bad radii list {arg!r}") from exc
    if not radii or any(not 0 < r <= 1 for r in radii):
        raise UsageError("radii must lie in (0, 1]")
    return radii


class UsageError(Exception):
    pass


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_classify(args) -> int:
    parts = args.tuple.split(",")
    if len(parts) != 4:
        raise UsageError(f"expected 4 comma-separated reals, got {args.tuple!r}")
    try:
        t = FourTuple(*(float(p) for p in parts))
    except ValueError as exc:
        raise UsageError(f"bad tuple {args.tuple!r}") from exc
    form = classify_form(t, args.tol)
    d1, d2 = conformal_defect(t)
    print(f"tuple: ({t.a:g}, {t.b:g}, {t.c:g}, {t.d:g})")
    print(f"conformal defect: ({d1:.6g}, {d2:.6g})")
    print(f"classification: {form}")
    return EXIT_OK if form.is_conformal else EXIT_NEGATIVE


def cmd_table(args) -> int:
    rows = build_match_table()
    text = table_to_json(rows) if args.format == "json" else table_to_csv(rows)
    _write_out(text, args.out)
    return EXIT_OK


def _load_trace_checked(path: str):
    try:
        trace = load_trace(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load trace {path}: {exc}") from exc
    try:
        lift = lift_boundary(trace)
        print(f"detected class: {lift.kind.value} "
              f"(separation {trace.separation():.3g})")
    except AmbiguousClass:
        print("detected class: ambiguous (sheets collide)")
    return trace


def cmd_minimize(args) -> int:
    trace = _load_trace_checked(args.trace)
    grid = PolarGrid(args.nr, args.ntheta)
    kind = Continuation(args.klass) if args.klass else None
    result = minimize(trace, grid, kind=kind)
    print(f"class: {result.kind.value}")
    print(f"energy: {result.energy:.12g}")
    if result.alt_energy is not None:
        print(f"alt-energy: {result.alt_energy:.12g}")

    radii = _parse_radii(args.radii, DEFAULT_PROFILE_RADII)
    profile = frequency_profile(result.field, radii)
    print(f"N0: {profile.N0:.6g}  monotonicity defect: {profile.monotonicity_defect:.3g}")

    base = Path(args.out) if args.out else Path("minimized_field.csv")
    save_field(result.field, base)
    profile_path = base.with_name(base.stem + "_profile.csv")
    profile.to_csv(profile_path)
    print(f"field dump: {base}  profile: {profile_path}")

    if args.oracle:
        try:
            relaxed = relax_oracle(trace, grid, kind=result.kind)
        except NoConvergence as exc:
            print(f"oracle failed to converge: {exc}")
            return EXIT_NUMERICAL
        gap = abs(dirichlet_energy(relaxed, 1.0) - result.energy) / max(
            result.energy, 1e-30
        )
        print(f"oracle gap: {gap:.3e}")
        if gap > args.oracle_tol:
            print(f"oracle gap exceeds {args.oracle_tol:g}")
            return EXIT_NUMERICAL
    return EXIT_OK


def cmd_blowup(args) -> int:
    trace = _load_trace_checked(args.trace)
    grid = PolarGrid(args.nr, args.ntheta)
    kind = Continuation(args.klass) if args.klass else None

    lift = forced_lift(trace, kind) if kind else lift_boundary(trace)
    spectrum = analyze_spectrum(lift)
    n0 = frequency_from_spectrum(spectrum)
    if n0 == 0.0:
        # nonzero value at the origin: frequency zero, nothing to blow up
        report = {"fitted_N": 0.0, "rounded_N": 0.0, "continuation": None,
                  "residual": None, "boundary_mass": None, "1/N": None,
                  "note": "value at origin is nonzero; frequency 0"}
        _write_out(report_to_json(report), args.out)
        return EXIT_OK

    radii = _parse_radii(args.radii, DEFAULT_BLOWUP_RADII)
    radii = tuple(sorted(radii, reverse=True))
    if any(r * grid.n_r < 3 for r in radii):
        raise UsageError("blow-up radii below grid resolution (3 rings)")

    result = minimize(trace, grid, kind=kind)
    seq = blowup_sequence(result.field, radii)
    limit = seq.fields[-1]
    profile = frequency_profile(limit, (0.25, 0.5, 0.75, 1.0))
    entry, residual = identify_catalog(limit, BLOWUP_FIT_TOL)
    report = blowup_report(limit, entry, float(np.median(profile.N)), residual)
    report["cauchy_defects"] = list(seq.cauchy_defects)
    if args.dump_fields:
        for r, rescaled in zip(seq.radii, seq.fields):
            save_field(rescaled, Path(f"{args.dump_fields}_r{r:g}.csv"))
    _write_out(report_to_json(report), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdisk",
        description="Two-valued Dirichlet minimizers on the unit disk",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a sheet coefficient tuple")
    p.add_argument("tuple", help="four comma-separated reals a,b,c,d")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", help="emit the matching table")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("minimize", help="minimize boundary data")
    p.add_argument("trace", help="boundary trace JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("blowup", help="blow-up analysis of a minimizer")
    p.add_argument("trace", help="boundary trace JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_blowup)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguousClass as exc:
        print(f"error: AmbiguousClass: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoCatalogMatch, NoConvergence) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QdiskError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
