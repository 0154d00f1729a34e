"""Command-line front end.

Exit codes: 0 success / all comparisons pass, 1 a comparison misses its
tolerance, 2 usage or input error (message on stderr).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .crosscheck import (
    DEFAULT_SPEEDS,
    DEFAULT_STEPS,
    DEFAULT_TOL,
    campaign,
    compare_precession,
    perpendicular_grid,
    random_pairs,
    summarize,
)
from .errors import DomainError, SingularChartError
from .lorentz import _as_velocity, rotation_to_angle_axis, su2_from_rotation, twr_of_two_boosts, velocity_add_general
from .pathfile import load_path
from .serialize import HOLONOMY_COLUMNS, REPORT_COLUMNS, WIGNER_COLUMNS, dumps_csv, dumps_json, report_row
from .shell import gamma_of_speed
from .transport import holonomy_ambient, holonomy_path_ordered

OUTPUT_DIR_ENV = "TWR_HOLONOMY_OUTPUT_DIR"
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    mass: float = 1.0
    speeds: list = field(default_factory=list)
    velocities: dict = field(default_factory=dict)
    steps: int | None = DEFAULT_STEPS
    tolerance: float | None = DEFAULT_TOL
    fmt: str = "json"
    output: str | None = None
    seed: int | None = None

    def validate(self) -> None:
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise DomainError(f"mass must be positive, got {self.mass}")
        for v in self.speeds:
            gamma_of_speed(v)
        for v in self.velocities.values():
            _as_velocity(v)
        if self.steps is not None and self.steps < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        if self.tolerance is not None and not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")

    def as_dict(self) -> dict:
        d = {"mass": self.mass}
        if self.speeds:
            d["speeds"] = list(self.speeds)
        for k, v in self.velocities.items():
            d[k] = list(v)
        if self.steps is not None:
            d["steps"] = self.steps
        if self.tolerance is not None:
            d["tolerance"] = self.tolerance
        if self.seed is not None:
            d["seed"] = self.seed
        return d


def _envelope(command: str, config: dict, **body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command, "config": config, **body}


def _su2_pairs(u) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(u)]


# ---------------------------------------------------------------- commands


def cmd_precession(args):
    cfg = RunConfig("precession", args.mass, [args.speed], steps=args.steps, tolerance=args.tol)
    cfg.validate()
    rep = compare_precession(args.speed, args.mass, args.steps, args.tol)
    reports = [rep.as_dict()]
    doc = _envelope("precession", cfg.as_dict(), reports=reports, summary=summarize([rep]))
    return doc, [report_row(r) for r in reports], REPORT_COLUMNS, 0 if rep.passed else 1


def cmd_wigner(args):
    cfg = RunConfig("wigner", args.mass, velocities={"v1": args.v1, "v2": args.v2}, steps=None, tolerance=None)
    cfg.validate()
    r = twr_of_two_boosts(args.v1, args.v2)
    aa = rotation_to_angle_axis(r)
    body = {
        "angle": aa.angle,
        "angle_degrees": math.degrees(aa.angle),
        "axis": aa.axis,
        "rotation": r.ravel(),
        "su2": _su2_pairs(su2_from_rotation(r)),
        "combined_velocity": velocity_add_general(args.v1, args.v2),
    }
    row = {"angle": aa.angle, **{f"axis_{c}": x for c, x in zip("xyz", aa.axis)}}
    row.update({f"r{i}{j}": r[i, j] for i in range(3) for j in range(3)})
    return _envelope("wigner", cfg.as_dict(), wigner=body), [row], WIGNER_COLUMNS, 0


def cmd_holonomy(args):
    cfg = RunConfig("holonomy", steps=args.steps, tolerance=args.tol)
    cfg.validate()
    path = load_path(args.path_file)
    if not path.closed:
        raise DomainError("holonomy needs a closed path (set \"closed\": true)")
    engine = args.engine
    if engine in ("auto", "spinor"):
        try:
            res = holonomy_path_ordered(path, args.steps)
            engine = "spinor"
        except SingularChartError:
            if engine == "spinor":
                raise
            engine = "ambient"
    if engine == "ambient":
        res = holonomy_ambient(path, args.steps)
    aa = res.angle_axis
    body = {
        "engine": engine,
        "frame": res.frame,
        "angle": aa.angle,
        "axis": aa.axis,
        "su2": _su2_pairs(res.su2),
        "so3": res.so3.ravel(),
        "convergence": res.convergence,
        "degenerate": res.degenerate,
        "steps": res.steps,
    }
    config = {"path_file": str(args.path_file), "mass": path.mass, "engine": args.engine}
    if args.steps is not None:
        config["steps"] = args.steps
    if args.tol is not None:
        config["tolerance"] = args.tol
    row = {k: body[k] for k in ("angle", "convergence", "frame", "engine", "degenerate", "steps")}
    row.update({f"axis_{c}": x for c, x in zip("xyz", aa.axis)})
    for i in range(2):
        for j in range(2):
            row[f"u{i}{j}_re"], row[f"u{i}{j}_im"] = res.su2[i, j].real, res.su2[i, j].imag
    row.update({f"r{i}{j}": res.so3[i, j] for i in range(3) for j in range(3)})
    code = 1 if args.tol is not None and res.convergence > args.tol else 0
    return _envelope("holonomy", config, holonomy=body), [row], HOLONOMY_COLUMNS, code


def cmd_validate(args):
    speeds = list(args.speeds)
    cfg = RunConfig("validate", args.mass, speeds, steps=args.steps, tolerance=args.tol,
                    seed=args.seed if args.random_pairs else None)
    cfg.validate()
    pairs = perpendicular_grid(speeds)
    if args.random_pairs:
        pairs += random_pairs(args.random_pairs, args.seed)
    prec = [] if args.no_precession else speeds
    if not pairs and not prec:
        raise UsageError("empty validation grid: give --speeds and/or --random-pairs")
    reports = campaign(pairs, prec, args.mass, args.steps, args.tol, args.workers)
    config = cfg.as_dict()
    config["random_pairs"] = args.random_pairs
    config["precession"] = not args.no_precession
    dicts = [r.as_dict() for r in reports]
    summary = summarize(reports)
    doc = _envelope("validate", config, reports=dicts, summary=summary)
    return doc, [report_row(r) for r in dicts], REPORT_COLUMNS, 0 if summary["all_pass"] else 1


# ------------------------------------------------------------------ parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", help=f"output file (default: ${OUTPUT_DIR_ENV}/<command>.<format>, else stdout)")


def _int_at_least(low: int):
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < low:
            raise argparse.ArgumentTypeError(f"must be >= {low}, got {n}")
        return n

    return parse


_positive_int = _int_at_least(1)


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twr-holonomy",
        description="Thomas-Wigner rotations as holonomies of the mass shell.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("precession", help="spin holonomy of a circular momentum loop vs 2 pi (gamma - 1)")
    p.add_argument("--speed", type=_finite, required=True)
    p.add_argument("--mass", type=_finite, default=1.0)
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=_finite, default=DEFAULT_TOL)
    _add_common(p)
    p.set_defaults(func=cmd_precession)

    p = sub.add_parser("wigner", help="algebraic Thomas-Wigner rotation of two boosts")
    p.add_argument("--v1", type=_finite, nargs=3, required=True, metavar=("VX", "VY", "VZ"))
    p.add_argument("--v2", type=_finite, nargs=3, required=True, metavar=("VX", "VY", "VZ"))
    p.add_argument("--mass", type=_finite, default=1.0)
    _add_common(p)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("holonomy", help="holonomy of a closed loop read from a JSON path file")
    p.add_argument("path_file")
    p.add_argument("--steps", type=_positive_int, default=None, help="override every segment's step count")
    p.add_argument("--engine", choices=("auto", "spinor", "ambient"), default="auto")
    p.add_argument("--tol", type=_finite, default=None, help="fail (exit 1) if the convergence estimate exceeds this")
    _add_common(p)
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("validate", help="campaign comparing algebraic and geometric rotations")
    p.add_argument("--speeds", type=_finite, nargs="*", default=list(DEFAULT_SPEEDS))
    p.add_argument("--mass", type=_finite, default=1.0)
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=_finite, default=DEFAULT_TOL)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--random-pairs", type=_int_at_least(0), default=0, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-precession", action="store_true", help="skip the circular-loop scenarios")
    _add_common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def _destination(args) -> Path | None:
    if args.output:
        return Path(args.output)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{args.command}.{args.format}"
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, rows, columns, code = args.func(args)
    except (DomainError, UsageError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = dumps_json(doc) if args.format == "json" else dumps_csv(rows, columns)
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
