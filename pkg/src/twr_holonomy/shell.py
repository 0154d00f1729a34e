"""Intrinsic geometry of the forward mass hyperboloid in the spherical chart.

The chart is ``z = (rho, theta, phi) -> (E, rho sin(theta) cos(phi),
rho sin(theta) sin(phi), rho cos(theta))`` with ``E = sqrt(m^2 + rho^2)``. The
induced metric is negative definite,

    g = -(m^2/E^2 drho^2 + rho^2 dtheta^2 + rho^2 sin^2(theta) dphi^2),

and the orthonormal frame is ``e1 = (E/m) d_rho``, ``e2 = (1/rho) d_theta``,
``e3 = 1/(rho sin theta) d_phi`` with ``g(e_A, e_B) = -delta_AB``.

Array layouts
-------------
* Christoffels ``gamma[i, j, k] = Gamma^i_{jk}`` in chart order (rho, theta, phi).
* Connection ``omega[i, A, B]``: the antisymmetric frame matrix multiplying dz^i.
* Curvature ``Omega[k, A, B]`` for the coordinate 2-form ``CURVATURE_PAIRS[k]``,
  i.e. drho^dtheta, drho^dphi, dtheta^dphi.

Both so(3)-valued forms are also available as rotation vectors (the ``vee`` of
each antisymmetric matrix), which is the representation transport works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularChartError
from .lorentz import DEFAULT_TOL, hat, is_on_shell

CURVATURE_PAIRS = ((0, 1), (0, 2), (1, 2))

#: points closer than this to rho = 0 or to the polar axis count as chart-singular
CHART_EPS = 1e-12

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ShellPoint:
    """Chart coordinates on the mass shell; angles are reduced on construction.

    ``theta`` is folded into [0, pi] (with the matching half-turn in ``phi``)
    and ``phi`` into [0, 2 pi). ``degenerate`` marks the rest point, where the
    angles are a convention (pi/2, 0).
    """

    rho: float
    theta: float = math.pi / 2
    phi: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        rho, theta, phi = float(self.rho), float(self.theta), float(self.phi)
        if not (math.isfinite(rho) and math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError("chart coordinates must be finite")
        if rho < 0:
            raise DomainError(f"rho must be >= 0, got {rho}")
        theta = theta % TWO_PI
        if theta > math.pi:
            theta = TWO_PI - theta
            phi += math.pi
        phi = phi % TWO_PI
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def regular(self) -> bool:
        return self.rho > CHART_EPS and CHART_EPS < self.theta < math.pi - CHART_EPS

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.theta, self.phi])


class FrameAtPoint(NamedTuple):
    frame: np.ndarray  # frame[A, i] = e_A^i
    coframe: np.ndarray  # coframe[A, i] = e^A_i


def _check_mass(m: float) -> None:
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m}")


def _require_regular(z: ShellPoint) -> None:
    if not z.regular:
        raise SingularChartError(
            f"chart-singular point (rho={z.rho}, theta={z.theta}); the spherical frame is undefined there"
        )


# ------------------------------------------------------------- scalar relations


def energy(rho, m: float):
    _check_mass(m)
    return np.hypot(m, rho)


def gamma_of_speed(v: float) -> float:
    if not 0.0 <= v < 1.0:
        raise DomainError(f"superluminal speed V = {v}" if v >= 1 else f"speed must be >= 0, got {v}")
    return 1.0 / math.sqrt(1.0 - v * v)


def rho_of_speed(v: float, m: float) -> float:
    _check_mass(m)
    return m * v * gamma_of_speed(v)


def speed_of_rho(rho: float, m: float) -> float:
    return float(rho / energy(rho, m))


# ----------------------------------------------------------- embedding & chart


def embed(z: ShellPoint, m: float) -> np.ndarray:
    _check_mass(m)
    st, ct = math.sin(z.theta), math.cos(z.theta)
    return np.array(
        [
            math.hypot(m, z.rho),
            z.rho * st * math.cos(z.phi),
            z.rho * st * math.sin(z.phi),
            z.rho * ct,
        ]
    )


def embedding_jacobian(z: ShellPoint, m: float) -> np.ndarray:
    """d(embed)/dz as a 4x3 matrix; column i is the ambient image of d/dz^i."""
    _check_mass(m)
    rho, th, ph = z.rho, z.theta, z.phi
    st, ct, sp, cp = math.sin(th), math.cos(th), math.sin(ph), math.cos(ph)
    e = math.hypot(m, rho)
    return np.array(
        [
            [rho / e, 0.0, 0.0],
            [st * cp, rho * ct * cp, -rho * st * sp],
            [st * sp, rho * ct * sp, rho * st * cp],
            [ct, -rho * st, 0.0],
        ]
    )


def chart_from_momentum(p, m: float, tol: float = DEFAULT_TOL) -> ShellPoint:
    p = np.asarray(p, dtype=float)
    _check_mass(m)
    if p.shape != (4,) or not is_on_shell(p, m, tol):
        raise DomainError(f"momentum {p} is not on the mass shell m = {m}")
    rho = float(np.linalg.norm(p[1:]))
    if rho == 0.0:
        return ShellPoint(0.0, math.pi / 2, 0.0, degenerate=True)
    theta = math.atan2(math.hypot(p[1], p[2]), p[3])
    phi = math.atan2(p[2], p[1])
    return ShellPoint(rho, theta, phi)


def chart_coordinates(p) -> np.ndarray:
    """Vectorized (rho, theta, phi) of ambient points, phi in (-pi, pi]; no on-shell check."""
    p = np.asarray(p, dtype=float)
    s = np.hypot(p[..., 1], p[..., 2])
    rho = np.hypot(s, p[..., 3])
    return np.stack([rho, np.arctan2(s, p[..., 3]), np.arctan2(p[..., 2], p[..., 1])], axis=-1)


def chart_velocity(p, pdot) -> np.ndarray:
    """dz/dt along an ambient curve p(t) with derivative pdot (vectorized).

    Points on the chart's singular locus give non-finite entries; callers
    screen for them.
    """
    p = np.asarray(p, dtype=float)
    pdot = np.asarray(pdot, dtype=float)
    x, y, zc = p[..., 1], p[..., 2], p[..., 3]
    dx, dy, dz = pdot[..., 1], pdot[..., 2], pdot[..., 3]
    s2 = x * x + y * y
    s = np.sqrt(s2)
    rho2 = s2 + zc * zc
    rho = np.sqrt(rho2)
    with np.errstate(divide="ignore", invalid="ignore"):
        sdot = (x * dx + y * dy) / s
        return np.stack(
            [
                (x * dx + y * dy + zc * dz) / rho,
                (zc * sdot - s * dz) / rho2,
                (x * dy - y * dx) / s2,
            ],
            axis=-1,
        )


# --------------------------------------------------------- metric & Christoffel


def metric_at(z: ShellPoint, m: float) -> np.ndarray:
    _check_mass(m)
    e2 = m * m + z.rho * z.rho
    return -np.diag([m * m / e2, z.rho**2, (z.rho * math.sin(z.theta)) ** 2])


def christoffel_array(rho, theta, m: float) -> np.ndarray:
    """Gamma^i_{jk} for arrays of (rho, theta); result shape (..., 3, 3, 3)."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    st, ct = np.sin(theta), np.cos(theta)
    e2 = m * m + rho * rho
    gam = np.zeros(rho.shape + (3, 3, 3))
    gam[..., 0, 0, 0] = -rho / e2
    gam[..., 0, 1, 1] = -rho * e2 / (m * m)
    gam[..., 0, 2, 2] = -rho * e2 / (m * m) * st * st
    gam[..., 1, 0, 1] = gam[..., 1, 1, 0] = 1.0 / rho
    gam[..., 1, 2, 2] = -st * ct
    gam[..., 2, 0, 2] = gam[..., 2, 2, 0] = 1.0 / rho
    gam[..., 2, 1, 2] = gam[..., 2, 2, 1] = ct / st
    return gam


def christoffels_at(z: ShellPoint, m: float) -> np.ndarray:
    """Levi-Civita symbols Gamma^i_{jk} of the shell metric (chart-regular points only)."""
    _check_mass(m)
    _require_regular(z)
    return christoffel_array(z.rho, z.theta, m)


def christoffel_derivatives(z: ShellPoint, m: float) -> np.ndarray:
    """Analytic d_l Gamma^i_{jk}, indexed [l, i, j, k]."""
    _check_mass(m)
    _require_regular(z)
    rho, th = z.rho, z.theta
    st, ct = math.sin(th), math.cos(th)
    e2 = m * m + rho * rho
    m2 = m * m
    d = np.zeros((3, 3, 3, 3))
    # d/drho
    d[0, 0, 0, 0] = (rho * rho - m2) / (e2 * e2)
    d[0, 0, 1, 1] = -(m2 + 3 * rho * rho) / m2
    d[0, 0, 2, 2] = -(m2 + 3 * rho * rho) / m2 * st * st
    d[0, 1, 0, 1] = d[0, 1, 1, 0] = -1.0 / (rho * rho)
    d[0, 2, 0, 2] = d[0, 2, 2, 0] = -1.0 / (rho * rho)
    # d/dtheta
    d[1, 0, 2, 2] = -rho * e2 / m2 * 2 * st * ct
    d[1, 1, 2, 2] = -(ct * ct - st * st)
    d[1, 2, 1, 2] = d[1, 2, 2, 1] = -1.0 / (st * st)
    return d


def riemann_at(z: ShellPoint, m: float) -> np.ndarray:
    """R^p_{qij} = d_i G^p_qj - d_j G^p_qi + G^p_si G^s_qj - G^p_sj G^s_qi."""
    gam = christoffels_at(z, m)
    dg = christoffel_derivatives(z, m)
    r = np.einsum("ipqj->pqij", dg) - np.einsum("jpqi->pqij", dg)
    quad = np.einsum("psi,sqj->pqij", gam, gam)
    return r + quad - np.swapaxes(quad, 2, 3)


def ricci_scalar_at(z: ShellPoint, m: float) -> float:
    riem = riemann_at(z, m)
    ricci = np.einsum("pqpj->qj", riem)
    ginv = np.diag(1.0 / np.diag(metric_at(z, m)))
    return float(np.einsum("qj,qj->", ginv, ricci))


# ------------------------------------------------------------ frame & forms


def frame_at(z: ShellPoint, m: float) -> FrameAtPoint:
    _check_mass(m)
    _require_regular(z)
    e = math.hypot(m, z.rho)
    rs = z.rho * math.sin(z.theta)
    return FrameAtPoint(
        frame=np.diag([e / m, 1.0 / z.rho, 1.0 / rs]),
        coframe=np.diag([m / e, z.rho, rs]),
    )


def connection_vectors(rho, theta, m: float) -> np.ndarray:
    """Rotation-vector form of the so(3) connection, shape (..., 3 [dz^i], 3).

    ``omega_i = hat(connection_vectors(...)[i])``; the drho row is zero.
    """
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    g = np.hypot(m, rho) / m
    out = np.zeros(rho.shape + (3, 3))
    out[..., 1, 2] = g
    out[..., 2, 0] = np.cos(theta)
    out[..., 2, 1] = -np.sin(theta) * g
    return out


def curvature_vectors(rho, theta, m: float) -> np.ndarray:
    """Rotation-vector form of the so(3) curvature per CURVATURE_PAIRS, shape (..., 3, 3)."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    e = np.hypot(m, rho)
    st = np.sin(theta)
    out = np.zeros(rho.shape + (3, 3))
    out[..., 0, 2] = rho / (e * m)
    out[..., 1, 1] = -st * rho / (e * m)
    out[..., 2, 0] = st * rho * rho / (m * m)
    return out


def so3_connection_at(z: ShellPoint, m: float) -> np.ndarray:
    """Connection coefficients omega[i, A, B]; e.g. omega[1, 0, 1] = -E/m."""
    _check_mass(m)
    _require_regular(z)
    return hat(connection_vectors(z.rho, z.theta, m))


def so3_curvature_at(z: ShellPoint, m: float) -> np.ndarray:
    """Curvature coefficients Omega[k, A, B] on the 2-form CURVATURE_PAIRS[k]."""
    _check_mass(m)
    _require_regular(z)
    return hat(curvature_vectors(z.rho, z.theta, m))


def curvature_2form(omega_pairs: np.ndarray) -> np.ndarray:
    """Expand pair-indexed 2-form coefficients into a full [i, j, ...] antisymmetric array."""
    shape = omega_pairs.shape[1:]
    full = np.zeros((3, 3) + shape, dtype=omega_pairs.dtype)
    for k, (i, j) in enumerate(CURVATURE_PAIRS):
        full[i, j] = omega_pairs[k]
        full[j, i] = -omega_pairs[k]
    return full
