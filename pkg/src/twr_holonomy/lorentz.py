"""Special-relativistic kinematics: pure boosts, velocity addition, Wigner rotations,
and the SU(2) -> SO(3) double cover.

Conventions
-----------
* Natural units, metric ``ETA = diag(1, -1, -1, -1)``.
* Four-vectors are stored with contravariant components ``(p0, p1, p2, p3)``.
  Lowering an index flips the sign of the spatial part; every comparison in
  this package is between like-typed objects.
* Lorentz maps act on column vectors from the left.
* ``su2_from_angle_axis(AngleAxis(a, n)) = exp(-i a n.sigma / 2)`` and
  ``su2_to_so3`` of it is the right-handed rotation by ``a`` about ``n``.

Boost ordering
--------------
``successive_boosts(v1, v2)`` is the lab-frame matrix of "boost by ``v1``,
then boost by ``v2`` as measured in the frame reached after the first boost".
That lab matrix is ``pure_boost(v1) @ pure_boost(v2)`` and its rest-frame
image moves with ``velocity_add_general(v1, v2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

#: su(2) basis J_k = -(i/2) sigma_k, with [J_i, J_k] = eps_ikj J_j.
J_BASIS = -0.5j * SIGMA

DEFAULT_TOL = 1e-9

_Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class AngleAxis:
    """Rotation angle in [0, pi] and unit axis; the identity reports the z axis."""

    angle: float
    axis: np.ndarray

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        norm = np.linalg.norm(axis)
        if not np.isfinite(norm) or norm == 0.0:
            raise DomainError("rotation axis must be a nonzero finite vector")
        object.__setattr__(self, "axis", axis / norm)

    @property
    def rotation_vector(self) -> np.ndarray:
        return self.angle * self.axis


# ---------------------------------------------------------------- basic helpers


def minkowski_dot(a, b):
    """eta(a, b) for contravariant four-vectors (broadcasts over leading axes)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] - np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def hat(w) -> np.ndarray:
    """Antisymmetric matrix of the cross product, ``hat(w) @ x == cross(w, x)``."""
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape[:-1] + (3, 3))
    out[..., 0, 1] = -w[..., 2]
    out[..., 0, 2] = w[..., 1]
    out[..., 1, 0] = w[..., 2]
    out[..., 1, 2] = -w[..., 0]
    out[..., 2, 0] = -w[..., 1]
    out[..., 2, 1] = w[..., 0]
    return out


def vee(a) -> np.ndarray:
    """Inverse of :func:`hat` applied to the antisymmetric part of ``a``."""
    a = np.asarray(a)
    return 0.5 * np.stack(
        [a[..., 2, 1] - a[..., 1, 2], a[..., 0, 2] - a[..., 2, 0], a[..., 1, 0] - a[..., 0, 1]],
        axis=-1,
    )


def _as_velocity(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"velocity must have 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("velocity components must be finite")
    if v @ v >= 1.0:
        raise DomainError(f"superluminal speed |v| = {np.sqrt(v @ v):.17g} >= 1")
    return v


def lorentz_factor(v) -> float:
    v = _as_velocity(v)
    return 1.0 / np.sqrt(1.0 - v @ v)


def velocity_of(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return p[1:] / p[0]


def rest_momentum(m: float) -> np.ndarray:
    return np.array([m, 0.0, 0.0, 0.0])


def is_on_shell(p, m: float, tol: float = DEFAULT_TOL) -> bool:
    p = np.asarray(p, dtype=float)
    # relative to the energy scale: absolute residues grow like p0^2 eps
    scale = max(1.0, p[0] * p[0])
    return bool(p[0] > 0 and abs(minkowski_dot(p, p) - m * m) <= tol * scale)


def is_lorentz(lam, tol: float = DEFAULT_TOL) -> bool:
    """Proper orthochronous check: lam^T eta lam = eta, det = +1, lam00 >= 1."""
    lam = np.asarray(lam, dtype=float)
    scale = max(1.0, np.abs(lam).max() ** 2)
    return bool(
        lam.shape == (4, 4)
        and np.abs(lam.T @ ETA @ lam - ETA).max() <= tol * scale
        and abs(np.linalg.det(lam) - 1.0) <= tol * scale**2
        and lam[0, 0] >= 1.0 - tol
    )


def is_rotation(r, tol: float = DEFAULT_TOL) -> bool:
    r = np.asarray(r, dtype=float)
    return bool(
        r.shape == (3, 3)
        and np.abs(r.T @ r - np.eye(3)).max() <= tol
        and abs(np.linalg.det(r) - 1.0) <= tol
    )


def is_su2(u, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return bool(
        u.shape == (2, 2)
        and np.abs(u.conj().T @ u - np.eye(2)).max() <= tol
        and abs(np.linalg.det(u) - 1.0) <= tol
    )


# ----------------------------------------------------------------------- boosts


def pure_boost(v) -> np.ndarray:
    """Rotation-free boost taking the rest momentum (m, 0) to (gamma m, gamma m v)."""
    v = _as_velocity(v)
    v2 = v @ v
    lam = np.eye(4)
    if v2 == 0.0:
        return lam
    g = 1.0 / np.sqrt(1.0 - v2)
    lam[0, 0] = g
    lam[0, 1:] = g * v
    lam[1:, 0] = g * v
    # (g - 1)/v^2 written without the cancellation at small v
    lam[1:, 1:] += (g * g / (1.0 + g)) * np.outer(v, v)
    return lam


def boost_from_momentum(p, m: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The standard boost L(p): the pure boost mapping (m, 0, 0, 0) to p."""
    p = np.asarray(p, dtype=float)
    if m <= 0:
        raise DomainError(f"mass must be positive, got {m}")
    if p.shape != (4,) or not is_on_shell(p, m, tol):
        raise DomainError(f"momentum {p} is not on the mass shell m = {m}")
    return pure_boost(velocity_of(p))


def rotation_lorentz(r) -> np.ndarray:
    """Embed a 3x3 rotation as a Lorentz map fixing the time axis."""
    lam = np.eye(4)
    lam[1:, 1:] = np.asarray(r, dtype=float)
    return lam


def successive_boosts(v1, v2) -> np.ndarray:
    """Boost by v1, then by v2 measured in the new frame (lab-frame matrix)."""
    return pure_boost(v1) @ pure_boost(v2)


def boost_in_frame(v_frame, v) -> np.ndarray:
    """Lab-frame matrix of a pure boost by ``v`` as seen from a frame moving with ``v_frame``."""
    lf = pure_boost(v_frame)
    return lf @ pure_boost(v) @ pure_boost(-np.asarray(v_frame, dtype=float))


def velocity_add_collinear(v1: float, v2: float) -> float:
    if abs(v1) >= 1.0 or abs(v2) >= 1.0:
        raise DomainError("superluminal speed")
    return (v1 + v2) / (1.0 + v1 * v2)


def velocity_add_general(v1, v2) -> np.ndarray:
    """Relativistic composition: v2 measured in a frame that moves with v1 relative to the lab.

    Equals the velocity of ``successive_boosts(v1, v2) @ (m, 0, 0, 0)``.
    """
    v1 = _as_velocity(v1)
    v2 = _as_velocity(v2)
    g1 = 1.0 / np.sqrt(1.0 - v1 @ v1)
    d = v1 @ v2
    return ((1.0 + g1 / (1.0 + g1) * d) * v1 + v2 / g1) / (1.0 + d)


# ------------------------------------------------------------ Wigner rotations


def _rotation_block(w: np.ndarray, tol: float) -> np.ndarray:
    residue = max(abs(w[0, 0] - 1.0), np.abs(w[0, 1:]).max(), np.abs(w[1:, 0]).max())
    if residue > tol:
        raise ConsistencyError(
            f"boost composition is not a rotation: time-row/column residue {residue:.3e} > {tol:.1e}"
        )
    return w[1:, 1:].copy()


def wigner_lorentz(lam, p, m: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The 4x4 product L(lam p)^-1 lam L(p); fixes the rest momentum."""
    lam = np.asarray(lam, dtype=float)
    p = np.asarray(p, dtype=float)
    lp = boost_from_momentum(p, m, tol)
    q = lam @ p
    lq_inv = pure_boost(-velocity_of(q))
    return lq_inv @ lam @ lp


def wigner_rotation(lam, p, m: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """W(lam, p) as a 3x3 rotation; raises ConsistencyError on a boost residue."""
    return _rotation_block(wigner_lorentz(lam, p, m, tol), tol)


def twr_of_two_boosts(v1, v2, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Thomas-Wigner rotation R(v1, v2) = L(v12)^-1 * [boost v1 then v2], v12 = v1 (+) v2."""
    v12 = velocity_add_general(v1, v2)
    w = pure_boost(-v12) @ successive_boosts(v1, v2)
    return _rotation_block(w, tol)


# ------------------------------------------------------------- angle and axis


def rodrigues(aa: AngleAxis) -> np.ndarray:
    k = hat(aa.axis)
    return np.eye(3) + np.sin(aa.angle) * k + (1.0 - np.cos(aa.angle)) * (k @ k)


def rotation_to_angle_axis(r) -> AngleAxis:
    """Angle in [0, pi] and unit axis of a proper rotation.

    Near angle pi the axis magnitudes come from the symmetric part (R + I)/2,
    pivoting on its largest diagonal entry; the sign comes from the
    antisymmetric part when that is resolvable, otherwise the first nonzero
    axis component is made positive.
    """
    r = np.asarray(r, dtype=float)
    w = vee(r)
    s = np.linalg.norm(w)
    c = 0.5 * (np.trace(r) - 1.0)
    angle = float(np.arctan2(s, c))
    if s < 1e-300 and c > 0:
        return AngleAxis(0.0, _Z_AXIS)
    if s > 1e-3 or c > 0:
        return AngleAxis(angle, w / s)

    sym = 0.25 * (r + r.T) + 0.5 * np.eye(3)  # symmetric part of (R + I)/2
    nn = (sym - 0.5 * (1.0 + c) * np.eye(3)) * (2.0 / (1.0 - c))
    k = int(np.argmax(np.diag(sym)))
    axis = nn[:, k] / np.sqrt(max(nn[k, k], 1e-300))
    axis = axis / np.linalg.norm(axis)
    # sin(angle) at the roundoff level carries no sign information
    if abs(axis @ w) > 1e-14:
        if axis @ w < 0:
            axis = -axis
    else:
        nz = np.flatnonzero(np.abs(axis) > 1e-12)
        if nz.size and axis[nz[0]] < 0:
            axis = -axis
    return AngleAxis(angle, axis)


def su2_from_angle_axis(aa: AngleAxis) -> np.ndarray:
    """exp(-i angle n.sigma / 2) in closed form."""
    half = 0.5 * aa.angle
    n_sigma = np.einsum("k,kij->ij", aa.axis, SIGMA)
    return np.cos(half) * np.eye(2) - 1j * np.sin(half) * n_sigma


def su2_from_rotation_vector(w) -> np.ndarray:
    """exp(w . J) for one or many rotation vectors ``w`` (shape (..., 3))."""
    w = np.asarray(w, dtype=float)
    a = np.linalg.norm(w, axis=-1)
    half = 0.5 * a
    # sin(a/2)/a with its limit 1/2 at a = 0
    sinc = np.where(a > 1e-8, np.sin(half) / np.where(a > 1e-8, a, 1.0), 0.5 - a * a / 48.0)
    n_sigma = np.einsum("...k,kij->...ij", w, SIGMA)
    return np.cos(half)[..., None, None] * np.eye(2) - 1j * sinc[..., None, None] * n_sigma


def su2_to_so3(u) -> np.ndarray:
    """Adjoint action on the J basis: U J_b U^-1 = sum_a R_ab J_a, read off with -2 Tr."""
    u = np.asarray(u, dtype=complex)
    ad = np.einsum("ij,bjk,lk->bil", u, J_BASIS, u.conj())
    r = -2.0 * np.einsum("aij,bji->ab", J_BASIS, ad)
    return r.real


def su2_quaternion(u) -> np.ndarray:
    """(q0, q1, q2, q3) with U = q0 I - i q.sigma."""
    u = np.asarray(u, dtype=complex)
    q0 = 0.5 * np.trace(u).real
    q = np.array([(0.5j * np.trace(s @ u)).real for s in SIGMA])
    return np.concatenate([[q0], q])


def su2_to_angle_axis(u) -> AngleAxis:
    """SO(3) angle-axis of an SU(2) element, resolved without the pi-branch ambiguity.

    The sign of U is chosen so that q0 >= 0; at q0 == 0 exactly the vector part
    of U itself fixes the axis.
    """
    q = su2_quaternion(u)
    if q[0] < 0:
        q = -q
    vec = q[1:]
    s = np.linalg.norm(vec)
    if s < 1e-300:
        return AngleAxis(0.0, _Z_AXIS)
    return AngleAxis(float(2.0 * np.arctan2(s, q[0])), vec / s)


def su2_from_rotation(r) -> np.ndarray:
    """The lift of a rotation with nonnegative q0 (one of the two preimages)."""
    return su2_from_angle_axis(rotation_to_angle_axis(r))


def axis_deviation(a: AngleAxis, b: AngleAxis, antipodal: bool = False) -> float:
    """Angle between two axes; with ``antipodal`` the axes n and -n are identified."""
    c = float(np.clip(a.axis @ b.axis, -1.0, 1.0))
    if antipodal:
        c = abs(c)
    return float(np.arctan2(np.linalg.norm(np.cross(a.axis, b.axis)), c))
