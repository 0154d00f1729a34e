"""The su(2) side of the shell geometry: basis, so(3) -> su(2) isomorphism, and the
spinor connection and curvature on the mass shell.

With eps_123 = +1 the isomorphism sends the elementary antisymmetric matrix
E_i^j (-1 at (i, j), +1 at (j, i)) to eps_i^{jk} J_k, i.e.

    E_1^2 -> J_3,    E_1^3 -> -J_2,    E_2^3 -> J_1,

equivalently ``phi_iso(hat(w)) == w . J``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .lorentz import J_BASIS, SIGMA, hat, vee
from .shell import ShellPoint, _check_mass, _require_regular


def su2_basis() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return J_BASIS[0].copy(), J_BASIS[1].copy(), J_BASIS[2].copy()


def elementary_so3(i: int, j: int) -> np.ndarray:
    """E_i^j with 1-based indices: -1 at (i, j), +1 at (j, i)."""
    e = np.zeros((3, 3))
    e[i - 1, j - 1] = -1.0
    e[j - 1, i - 1] = 1.0
    return e


def phi_iso(a, tol: float = 1e-12) -> np.ndarray:
    """Map so(3) matrices (shape (..., 3, 3)) to su(2); rejects non-antisymmetric input."""
    a = np.asarray(a)
    if a.shape[-2:] != (3, 3):
        raise DomainError(f"expected 3x3 matrices, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a + np.swapaxes(a, -1, -2)).max(initial=0.0) > tol * scale:
        raise DomainError("phi_iso expects an antisymmetric matrix")
    return np.einsum("...k,kij->...ij", vee(a), J_BASIS)


def phi_iso_inverse(x) -> np.ndarray:
    """su(2) -> so(3), reading coefficients with the trace form -2 Tr(J_a X)."""
    x = np.asarray(x, dtype=complex)
    w = -2.0 * np.einsum("kij,...ji->...k", J_BASIS, x).real
    return hat(w)


def spinor_connection_at(z: ShellPoint, m: float) -> np.ndarray:
    """omega_s[i] (2x2, anti-Hermitian, traceless) multiplying dz^i.

    omega_s = -(i/2) [ (E/m) dtheta sigma3 - (E/m) sin(theta) dphi sigma2 + cos(theta) dphi sigma1 ]
    """
    _check_mass(m)
    _require_regular(z)
    g = math.hypot(m, z.rho) / m
    st, ct = math.sin(z.theta), math.cos(z.theta)
    out = np.zeros((3, 2, 2), dtype=complex)
    out[1] = -0.5j * g * SIGMA[2]
    out[2] = -0.5j * (-g * st * SIGMA[1] + ct * SIGMA[0])
    return out


def spinor_curvature_at(z: ShellPoint, m: float) -> np.ndarray:
    """Omega_s per coordinate 2-form (drho^dtheta, drho^dphi, dtheta^dphi)."""
    _check_mass(m)
    _require_regular(z)
    e = math.hypot(m, z.rho)
    k = z.rho / (e * m)  # sqrt(E^2 - m^2) / (E m)
    st = math.sin(z.theta)
    out = np.zeros((3, 2, 2), dtype=complex)
    out[0] = 0.5j * (-k * SIGMA[2])
    out[1] = 0.5j * (k * st * SIGMA[1])
    out[2] = 0.5j * (-(z.rho * z.rho) / (m * m) * st * SIGMA[0])
    return out


def is_su2_algebra(x, tol: float = 1e-12) -> bool:
    """Anti-Hermitian and traceless (broadcasts over leading axes)."""
    x = np.asarray(x, dtype=complex)
    herm = np.abs(x + np.conj(np.swapaxes(x, -1, -2))).max(initial=0.0)
    tr = np.abs(np.trace(x, axis1=-2, axis2=-1)).max(initial=0.0)
    return bool(herm <= tol and tr <= tol)
