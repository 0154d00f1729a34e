"""Validation campaigns: algebraic Thomas-Wigner rotations and precession closed
forms against transport holonomies on the mass shell."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError
from .lorentz import (
    AngleAxis,
    _as_velocity,
    axis_deviation,
    rotation_to_angle_axis,
    su2_from_angle_axis,
    su2_from_rotation,
    twr_of_two_boosts,
)
from .paths import circle_path
from .shell import rho_of_speed
from .transport import (
    holonomy_disk_circle,
    holonomy_path_ordered,
    thomas_precession_angle,
    triangle_holonomy,
)

#: pass requires every deviation <= SAFETY * discretization estimate
SAFETY = 10.0
DEFAULT_STEPS = 10_000
DEFAULT_TOL = 1e-5
DEFAULT_SPEEDS = tuple(k / 10 for k in range(1, 10))
_E2 = np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class ComparisonReport:
    scenario_id: str
    kind: str
    parameters: dict
    algebraic_angle: float
    algebraic_axis: tuple
    geometric_angle: float
    geometric_axis: tuple
    angle_diff: float
    axis_deviation: float
    su2_deviation: float
    discretization_estimate: float
    tolerance: float
    steps: int
    passed: bool = field(default=False)

    def recompute_pass(self) -> bool:
        return recompute_pass(self.angle_diff, self.axis_deviation, self.su2_deviation,
                              self.discretization_estimate, self.tolerance)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def recompute_pass(angle_diff, axis_dev, su2_dev, estimate, tol) -> bool:
    """Deviations below tol and within SAFETY x estimate; the estimate itself must resolve tol."""
    worst = max(angle_diff, axis_dev, su2_dev)
    return bool(worst < tol and estimate < tol and worst <= SAFETY * estimate)


def _axis_gap(a: AngleAxis, b: AngleAxis, tol: float) -> float:
    # the axis of a near-identity rotation is meaningless
    if a.angle < tol and b.angle < tol:
        return 0.0
    near_pi = max(a.angle, b.angle) > math.pi - math.sqrt(tol)
    return axis_deviation(a, b, antipodal=near_pi)


def _report(sid, kind, params, alg: AngleAxis, geo: AngleAxis, su2_dev, estimate, tol, steps):
    angle_diff = abs(alg.angle - geo.angle)
    axis_dev = _axis_gap(alg, geo, tol)
    return ComparisonReport(
        sid, kind, params,
        float(alg.angle), tuple(float(x) for x in alg.axis),
        float(geo.angle), tuple(float(x) for x in geo.axis),
        float(angle_diff), float(axis_dev), float(su2_dev), float(estimate), float(tol), int(steps),
        recompute_pass(angle_diff, axis_dev, su2_dev, estimate, tol),
    )


def _fmt_vec(v) -> str:
    return ",".join(f"{x:.6g}" for x in v)


def triangle_id(v1, v2) -> str:
    return f"triangle[{_fmt_vec(v1)}][{_fmt_vec(v2)}]"


def precession_id(v: float) -> str:
    return f"precession[{v:.6g}]"


def _check_run(steps: int, tol: float) -> None:
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if int(steps) < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")


def compare_triangle(v1, v2, m: float = 1.0, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL) -> ComparisonReport:
    _check_run(steps, tol)
    v1, v2 = _as_velocity(v1), _as_velocity(v2)
    alg_r = twr_of_two_boosts(v1, v2)
    geo = triangle_holonomy(v1, v2, m, steps)
    alg = rotation_to_angle_axis(alg_r)
    u_alg = su2_from_rotation(alg_r)
    # the algebraic side has no preferred lift, so compare up to sign
    su2_dev = min(np.abs(geo.su2 - u_alg).max(), np.abs(geo.su2 + u_alg).max())
    params = {"v1": [float(x) for x in v1], "v2": [float(x) for x in v2], "mass": float(m)}
    return _report(triangle_id(v1, v2), "triangle", params, alg, geo.angle_axis, su2_dev,
                   geo.convergence, tol, steps)


def compare_precession(v: float, m: float = 1.0, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL) -> ComparisonReport:
    """Path-ordered holonomy of the circle against the disk integral and 2 pi (gamma - 1)."""
    _check_run(steps, tol)
    alpha = thomas_precession_angle(v)
    rho0 = rho_of_speed(v, m)
    disk = holonomy_disk_circle(rho0, m)
    geo = holonomy_path_ordered(circle_path(rho0, m, steps))
    u_formula = su2_from_angle_axis(AngleAxis(alpha, _E2))
    # fold in the disagreement between the two closed forms as well
    closed_gap = np.abs(disk.su2 - u_formula).max()
    su2_dev = max(np.abs(geo.su2 - disk.su2).max(), closed_gap)
    return _report(precession_id(v), "precession", {"speed": float(v), "mass": float(m), "alpha": alpha},
                   disk.angle_axis, geo.angle_axis, su2_dev, geo.convergence, tol, steps)


def _run(task):
    kind, args = task
    if kind == "triangle":
        return compare_triangle(*args)
    return compare_precession(*args)


def perpendicular_grid(speeds=DEFAULT_SPEEDS):
    return [((a, 0.0, 0.0), (0.0, b, 0.0)) for a in speeds for b in speeds]


def random_pairs(n: int, seed: int, max_speed: float = 0.95):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = rng.normal(size=(2, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        s = rng.uniform(0.0, max_speed, size=2)
        out.append((tuple(float(x) for x in s[0] * d[0]), tuple(float(x) for x in s[1] * d[1])))
    return out


def campaign(pairs=(), speeds=(), m: float = 1.0, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL,
             workers: int = 1) -> list[ComparisonReport]:
    """Run triangle comparisons for ``pairs`` and precession comparisons for ``speeds``.

    Reports come back sorted by scenario id, independent of ``workers``.
    """
    _check_run(steps, tol)
    tasks = [("triangle", (v1, v2, m, steps, tol)) for v1, v2 in pairs]
    tasks += [("precession", (v, m, steps, tol)) for v in speeds]
    if not tasks:
        raise DomainError("campaign has no scenarios")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run, tasks))
    else:
        reports = [_run(t) for t in tasks]
    return sorted(reports, key=lambda r: r.scenario_id)


def summarize(reports) -> dict:
    angle = np.array([r.angle_diff for r in reports])
    axis = np.array([r.axis_deviation for r in reports])
    return {
        "scenarios": len(reports),
        "passed": sum(r.passed for r in reports),
        "max_angle_diff": float(angle.max()),
        "mean_angle_diff": float(angle.mean()),
        "max_axis_deviation": float(axis.max()),
        "mean_axis_deviation": float(axis.mean()),
        "all_pass": all(r.passed for r in reports),
    }
