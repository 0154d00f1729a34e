"""Parallel transport on the mass shell and the holonomies built from it.

Three engines, deliberately independent of one another:

* **ambient** - tangent vectors as four-vectors X with eta(X, p) = 0, moved by
  dX/dt = -eta(X, dp/dt) p / m^2 (the derivative is kept normal to the shell).
  Classical RK4. Chart-free, so it handles the rest point.
* **intrinsic** - chart components, dX^i/dt + Gamma^i_jk dz^j/dt X^k = 0. RK4.
* **spinor** - two-component spinors in the spherical spin frame,
  dpsi/dt = -omega_s(dz/dt) psi, as an ordered product of exact SU(2)
  exponentials evaluated at step midpoints.

Spin-frame convention: spinor components refer to the lift of the spherical
frame with phi taken in [0, 2 pi). That lift flips sign each time phi winds
once, so after solving the ODE the result is multiplied by (-1)^k, k being the
number of times the path crosses phi = 0 (net). For a loop around the polar
axis this turns exp(-i pi gamma sigma2) into exp(-i pi (gamma - 1) sigma2).

Holonomies from the ambient engine are expressed in the *boost frame*
b_k(p) = L(p) e_k, which is smooth everywhere and equals the Cartesian axes at
rest. Their SU(2) lift is accumulated step by step from the near-identity
preimage of each incremental rotation, so the sign is fixed by continuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularChartError
from .lorentz import (
    ETA,
    SIGMA,
    AngleAxis,
    minkowski_dot,
    pure_boost,
    rest_momentum,
    su2_from_rotation_vector,
    su2_to_angle_axis,
    su2_to_so3,
    successive_boosts,
)
from .paths import PathSpec, circle_path, triangle_path
from .shell import (
    CHART_EPS,
    CURVATURE_PAIRS,
    ShellPoint,
    chart_coordinates,
    chart_velocity,
    christoffel_array,
    connection_vectors,
    curvature_vectors,
    embedding_jacobian,
    metric_at,
    rho_of_speed,
)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class HolonomyResult:
    """Holonomy of a closed loop.

    ``frame`` names the basis the matrices are written in: ``"chart"`` (the
    orthonormal spherical frame e1, e2, e3 at the base point) or ``"boost"``
    (L(p) applied to the Cartesian axes; Cartesian at the rest point).
    ``convergence`` is a step-halving estimate of the discretization error
    plus a roundoff allowance.
    """

    su2: np.ndarray
    so3: np.ndarray
    angle_axis: AngleAxis
    convergence: float
    frame: str
    steps: int = 0
    degenerate: bool = False

    @classmethod
    def from_su2(cls, u, convergence: float, frame: str, steps: int = 0, degenerate: bool = False):
        u = np.asarray(u, dtype=complex)
        return cls(u, su2_to_so3(u), su2_to_angle_axis(u), float(convergence), frame, steps, degenerate)

    @classmethod
    def identity(cls, frame: str, steps: int = 0, degenerate: bool = False):
        return cls.from_su2(np.eye(2, dtype=complex), 0.0, frame, steps, degenerate)


# --------------------------------------------------------------- utilities


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """mats[n-1] @ ... @ mats[1] @ mats[0], by pairwise reduction."""
    mats = np.asarray(mats)
    if len(mats) == 0:
        raise ValueError("empty product")
    while len(mats) > 1:
        if len(mats) % 2:
            eye = np.broadcast_to(np.eye(mats.shape[-1], dtype=mats.dtype), (1,) + mats.shape[1:])
            mats = np.concatenate([mats, eye])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def _project_su2(u: np.ndarray) -> np.ndarray:
    """Nearest matrix of the form [[a, -b*], [b, a*]] with |a|^2 + |b|^2 = 1.

    Identical factors make rounding errors add coherently over long products;
    this removes the drift without changing the rotation.
    """
    a = 0.5 * (u[0, 0] + np.conj(u[1, 1]))
    b = 0.5 * (u[1, 0] - np.conj(u[0, 1]))
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a, b = a / norm, b / norm
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def _rk4_linear_steps(a0, a_mid, a1, h: float) -> np.ndarray:
    """Per-step RK4 propagators for the linear ODE X' = A(t) X."""
    eye = np.eye(a0.shape[-1])
    b2 = a_mid @ (eye + 0.5 * h * a0)
    b3 = a_mid @ (eye + 0.5 * h * b2)
    b4 = a1 @ (eye + h * b3)
    return eye + (h / 6.0) * (a0 + 2.0 * b2 + 2.0 * b3 + b4)


def _grid(n: int):
    t = np.linspace(0.0, 1.0, n + 1)
    return t, 0.5 * (t[:-1] + t[1:]), 1.0 / n


def _step_ends(nodes: np.ndarray, count: int):
    """Start and end values of every step from node values laid out chord-major.

    A piece with ``count`` chords evaluates count * (n + 1) nodes; steps never
    straddle two chords, so joints keep the velocity of their own chord.
    """
    per = nodes.reshape((count, -1) + nodes.shape[1:])
    tail = nodes.shape[1:]
    return per[:, :-1].reshape((-1,) + tail), per[:, 1:].reshape((-1,) + tail)


def _is_stationary(path: PathSpec) -> bool:
    return path.length() <= 1e-14 * path.mass


def _roundoff(n_steps: int) -> float:
    return 4.0 * n_steps * _EPS


def boost_frames(p, m: float) -> np.ndarray:
    """b_k(p) = L(p) e_k as columns, shape (..., 4, 3)."""
    u = np.asarray(p, dtype=float) / m
    out = np.empty(u.shape[:-1] + (4, 3))
    out[..., 0, :] = u[..., 1:]
    out[..., 1:, :] = np.eye(3) + u[..., 1:, None] * u[..., None, 1:] / (1.0 + u[..., 0])[..., None, None]
    return out


def _check_chart_regular(z: np.ndarray) -> None:
    rho, theta = z[..., 0], z[..., 1]
    bad = (rho <= CHART_EPS) | (np.abs(np.sin(theta)) <= CHART_EPS)
    if np.any(bad):
        k = int(np.flatnonzero(bad.ravel())[0])
        raise SingularChartError(
            f"path meets a chart singularity (rho={rho.ravel()[k]:.3g}, theta={theta.ravel()[k]:.3g}); "
            "use the ambient transport engine for paths through the rest point or the polar axis"
        )


# ---------------------------------------------------------- ambient engine


def _ambient_step_matrices(path: PathSpec, steps: int | None = None, divisor: int = 1):
    """Per-step 4x4 propagators with the node positions they connect."""
    m2 = path.mass**2
    mats, nodes = [], []
    for piece, n in path.pieces_with_steps(steps, divisor):
        t, tm, h = _grid(n)
        p, pdot = piece.ambient(t)
        p_m, pdot_m = piece.ambient(tm)

        def gen(q, qdot):
            return -(q[:, :, None] * (qdot * np.diag(ETA))[:, None, :]) / m2
        a0, a1 = _step_ends(gen(p, pdot), piece.count)
        mats.append(_rk4_linear_steps(a0, gen(p_m, pdot_m), a1, h))
        nodes.append(_step_ends(p, piece.count))
    return np.concatenate(mats), np.concatenate([n[0] for n in nodes]), np.concatenate([n[1] for n in nodes])


def transport_vector_ambient(path: PathSpec, x0, tol: float = 1e-9, steps: int | None = None) -> np.ndarray:
    """Parallel-transport ambient tangent vector(s) ``x0`` (shape (4,) or (4, k)) along the path."""
    x0 = np.asarray(x0, dtype=float)
    p0 = path.start_point()
    scale = max(1.0, float(np.abs(x0).max(initial=0.0))) * p0[0]
    if np.abs(minkowski_dot(x0.T, p0)).max() > tol * scale:
        raise DomainError("initial vector is not tangent to the shell (eta(X, p) != 0)")
    if _is_stationary(path):
        return x0.copy()
    mats, _, _ = _ambient_step_matrices(path, steps)
    return _ordered_product(mats) @ x0


def ambient_propagator(path: PathSpec, steps: int | None = None) -> np.ndarray:
    if _is_stationary(path):
        return np.eye(4)
    return _ordered_product(_ambient_step_matrices(path, steps)[0])


def _ambient_holonomy_once(path: PathSpec, steps: int | None, divisor: int = 1):
    m = path.mass
    mats, p_from, p_to = _ambient_step_matrices(path, steps, divisor)
    # incremental rotations expressed in the boost frames at both ends of each step
    b_from, b_to = boost_frames(p_from, m), boost_frames(p_to, m)
    inc = -(np.swapaxes(b_to, 1, 2) * np.diag(ETA)) @ (mats @ b_from)
    w = np.stack(
        [inc[:, 2, 1] - inc[:, 1, 2], inc[:, 0, 2] - inc[:, 2, 0], inc[:, 1, 0] - inc[:, 0, 1]], axis=-1
    )
    q0 = 0.5 * np.sqrt(np.clip(1.0 + np.trace(inc, axis1=1, axis2=2), 0.0, None))
    if np.any(q0 < 0.5):
        raise DomainError("transport step too coarse for a continuous SU(2) lift; increase steps")
    qv = w / (4.0 * q0[:, None])
    norm = np.sqrt(q0**2 + np.sum(qv**2, axis=1))
    q0, qv = q0 / norm, qv / norm[:, None]
    lifts = q0[:, None, None] * np.eye(2) - 1j * (qv @ SIGMA.reshape(3, 4)).reshape(-1, 2, 2)
    u = _project_su2(_ordered_product(lifts))
    b0 = boost_frames(path.start_point(), m)
    so3 = -b0.T @ ETA @ _ordered_product(mats) @ b0
    return u, so3, len(mats)


def holonomy_ambient(loop: PathSpec, steps: int | None = None) -> HolonomyResult:
    """Holonomy of a closed loop in the boost frame at its base point (chart-free)."""
    loop.validate()
    if not loop.closed:
        raise DomainError("holonomy needs a closed path")
    if _is_stationary(loop):
        return HolonomyResult.identity("boost")
    u, so3, n_total = _ambient_holonomy_once(loop, steps)
    _, so3_half, _ = _ambient_holonomy_once(loop, steps, divisor=2)
    est = np.abs(so3 - so3_half).max() / 15.0 + _roundoff(n_total)
    return HolonomyResult(u, so3, su2_to_angle_axis(u), float(est), "boost", n_total)


# -------------------------------------------------------- intrinsic engine


def _intrinsic_step_matrices(path: PathSpec, steps: int | None = None) -> np.ndarray:
    m = path.mass
    mats = []
    for piece, n in path.pieces_with_steps(steps):
        t, tm, h = _grid(n)
        z, zdot = piece.chart(t)
        zm, zdot_m = piece.chart(tm)
        _check_chart_regular(z)
        _check_chart_regular(zm)

        def gen(zz, zzdot):
            gam = christoffel_array(zz[:, 0], zz[:, 1], m)
            return -np.einsum("nijk,nj->nik", gam, zzdot)

        a0, a1 = _step_ends(gen(z, zdot), piece.count)
        mats.append(_rk4_linear_steps(a0, gen(zm, zdot_m), a1, h))
    return np.concatenate(mats)


def transport_vector_intrinsic(path: PathSpec, x0, steps: int | None = None) -> np.ndarray:
    """Parallel-transport chart components X^i (shape (3,) or (3, k)) with the Christoffel symbols."""
    x0 = np.asarray(x0, dtype=float)
    if _is_stationary(path):
        return x0.copy()
    return _ordered_product(_intrinsic_step_matrices(path, steps)) @ x0


# ---------------------------------------------------------- spinor engine


def _canonical_phi(p) -> float:
    phi = float(chart_coordinates(p)[2]) % (2 * math.pi)
    # atan2 of a roundoff-sized negative y lands just below 2 pi
    return 0.0 if 2 * math.pi - phi < 1e-12 else phi


def _phi_winding(path: PathSpec, steps: int | None, divisor: int = 1) -> int:
    """Net number of times the path crosses phi = 0 in the positive sense."""
    total = 0.0
    for piece, n in path.pieces_with_steps(steps, divisor):
        z, _ = piece.chart(np.linspace(0.0, 1.0, n + 1))
        phi = z[:, 2].reshape(piece.count, n + 1)
        total += float(np.sum(np.diff(np.unwrap(phi, axis=1), axis=1)))
    phi0 = _canonical_phi(path.start_point())
    phi1 = _canonical_phi(path.end_point())
    return round((phi0 + total - phi1) / (2 * math.pi))


def spinor_propagator(path: PathSpec, steps: int | None = None, divisor: int = 1) -> np.ndarray:
    """2x2 SU(2) transport matrix in the canonical spherical spin frame."""
    if _is_stationary(path):
        return np.eye(2, dtype=complex)
    m = path.mass
    factors = []
    for piece, n in path.pieces_with_steps(steps, divisor):
        t, tm, h = _grid(n)
        _check_chart_regular(piece.chart(t)[0])
        zm, zdot_m = piece.chart(tm)
        _check_chart_regular(zm)
        w = np.einsum("ni,nik->nk", zdot_m, connection_vectors(zm[:, 0], zm[:, 1], m))
        factors.append(su2_from_rotation_vector(-h * w))
    u = _project_su2(_ordered_product(np.concatenate(factors)))
    if _phi_winding(path, steps, divisor) % 2:
        u = -u
    return u


def transport_spinor(path: PathSpec, psi0, steps: int | None = None) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    return spinor_propagator(path, steps) @ psi0


def holonomy_path_ordered(loop: PathSpec, steps: int | None = None) -> HolonomyResult:
    """Path-ordered exponential of the spinor connection around a closed chart-regular loop."""
    loop.validate()
    if not loop.closed:
        raise DomainError("holonomy needs a closed path")
    if _is_stationary(loop):
        return HolonomyResult.identity("chart")
    u = spinor_propagator(loop, steps)
    u_half = spinor_propagator(loop, steps, divisor=2)
    n_total = loop.total_steps(steps)
    est = np.abs(u - u_half).max() / 3.0 + _roundoff(n_total)
    return HolonomyResult.from_su2(u, est, "chart", n_total)


# --------------------------------------------------- closed forms & scenarios


def thomas_precession_angle(v: float) -> float:
    """2 pi (gamma(V) - 1), evaluated without cancellation at small V."""
    if not 0.0 <= v < 1.0:
        raise DomainError(f"superluminal speed V = {v}" if v >= 1 else f"speed must be >= 0, got {v}")
    s = math.sqrt(1.0 - v * v)
    return 2.0 * math.pi * v * v / (s * (1.0 + s))


def holonomy_disk_circle(rho0: float, m: float) -> HolonomyResult:
    """exp(-integral of Omega_s over the disk) for the circle (rho0, pi/2, tau).

    Only the drho^dphi component survives at theta = pi/2 and it commutes with
    itself, so the exponent is -i pi (E(rho0)/m - 1) sigma2.
    """
    if rho0 < 0:
        raise DomainError(f"rho0 must be >= 0, got {rho0}")
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")
    e = math.hypot(m, rho0)
    half_angle = math.pi * rho0 * rho0 / (m * (e + m))  # pi (E - m)/m
    u = np.array(
        [[math.cos(half_angle), -math.sin(half_angle)], [math.sin(half_angle), math.cos(half_angle)]],
        dtype=complex,
    )
    return HolonomyResult.from_su2(u, 0.0, "chart")


def triangle_holonomy(v1, v2, m: float = 1.0, steps: int = 10_000) -> HolonomyResult:
    """Holonomy of the geodesic triangle rest -> p_B -> p_C -> rest.

    p_B = L(v1) rest and p_C is reached from p_B by the boost v2 measured in
    p_B's rest frame, i.e. p_C = L(v1) L(v2) rest. Result is in the Cartesian
    frame at rest.
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    pa = rest_momentum(m)
    pb = pure_boost(v1) @ pa
    pc = successive_boosts(v1, v2) @ pa
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    if n1 == 0 or n2 == 0 or np.linalg.norm(np.cross(v1, v2)) <= 1e-12 * n1 * n2:
        return HolonomyResult.identity("boost", 3 * steps, degenerate=True)
    return holonomy_ambient(triangle_path(pa, pb, pc, m, steps))


def chart_to_ambient(z: ShellPoint, x, m: float) -> np.ndarray:
    return embedding_jacobian(z, m) @ np.asarray(x, dtype=float)


def ambient_to_chart(z: ShellPoint, x, m: float) -> np.ndarray:
    """Chart components X^i = g^{ij} eta(d_j f, X) of an ambient tangent vector."""
    jac = embedding_jacobian(z, m)
    g = metric_at(z, m)
    return np.linalg.solve(g, jac.T @ ETA @ np.asarray(x, dtype=float))


def geodesic_triangle_curvature(pa, pb, pc, m: float, order: int = 48) -> float:
    """Integrated curvature |Omega| over a geodesic triangle (Gauss-Bonnet side of the holonomy).

    The triangle is flat in Klein coordinates u = p/p0, where it is
    parameterized as u = uA + s[(1 - t)(uB - uA) + t(uC - uA)] and integrated
    with a tensor Gauss-Legendre rule.
    """
    ua, ub, uc = (np.asarray(q, dtype=float)[1:] / np.asarray(q, dtype=float)[0] for q in (pa, pb, pc))
    x, wts = np.polynomial.legendre.leggauss(order)
    x, wts = 0.5 * (x + 1.0), 0.5 * wts
    s, t = np.meshgrid(x, x, indexing="ij")
    s, t = s.ravel(), t.ravel()
    weight = np.outer(wts, wts).ravel()
    edge = (1.0 - t)[:, None] * (ub - ua) + t[:, None] * (uc - ua)
    u = ua + s[:, None] * edge
    du_s, du_t = edge, s[:, None] * (uc - ub)
    g = 1.0 / np.sqrt(1.0 - np.sum(u * u, axis=1))
    p = m * g[:, None] * np.column_stack([np.ones_like(g), u])

    def dp(du):
        udu = np.sum(u * du, axis=1)
        return m * np.column_stack([g**3 * udu, g[:, None] * du + (g**3 * udu)[:, None] * u])

    zs, zt = chart_velocity(p, dp(du_s)), chart_velocity(p, dp(du_t))
    z = chart_coordinates(p)
    curv = curvature_vectors(z[:, 0], z[:, 1], m)
    density = np.zeros((len(s), 3))
    for k, (i, j) in enumerate(CURVATURE_PAIRS):
        density += (zs[:, i] * zt[:, j] - zs[:, j] * zt[:, i])[:, None] * curv[:, k]
    return float(np.sum(weight * np.linalg.norm(density, axis=1)))


def precession_loop(v: float, m: float = 1.0, steps: int = 10_000) -> PathSpec:
    return circle_path(rho_of_speed(v, m), m, steps)


__all__ = [
    "HolonomyResult",
    "ambient_propagator",
    "ambient_to_chart",
    "boost_frames",
    "chart_to_ambient",
    "geodesic_triangle_curvature",
    "holonomy_ambient",
    "holonomy_disk_circle",
    "holonomy_path_ordered",
    "precession_loop",
    "spinor_propagator",
    "thomas_precession_angle",
    "transport_spinor",
    "transport_vector_ambient",
    "transport_vector_intrinsic",
    "triangle_holonomy",
]
