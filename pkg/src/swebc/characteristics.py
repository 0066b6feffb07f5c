"""Energy, entropy flux and the characteristic decomposition at a boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PhysParams, State, UnitNormal, normal_velocity, tangential_velocity
from .errors import NonPositiveGeopotential

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class EigenSystem:
    """Shared eigenvectors of ``Ahat`` and ``Nhat``.

    Columns of ``R`` are ordered (+, 0, -). ``lambda_a`` and ``lambda_n`` are
    the eigenvalues of ``Ahat`` and ``Nhat``; ``augmented`` is their
    difference ``(u_n + c/2, u_n, u_n - c/2)``.
    """

    R: np.ndarray
    lambda_a: np.ndarray
    lambda_n: np.ndarray
    augmented: np.ndarray


@dataclass(frozen=True)
class CharVars:
    """Scaled characteristic amplitudes ``w = R^T S q``."""

    w1: float | np.ndarray
    w2: float | np.ndarray
    w3: float | np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.w1, self.w2, self.w3), axis=-1).astype(float)


def total_energy(s: State, p: PhysParams):
    """Kinetic plus potential energy density ``(phi (u^2+v^2) + phi^2) / 2g``."""
    return (s.phi * (s.u**2 + s.v**2) + s.phi**2) / (2.0 * p.g)


def entropy_fluxes(s: State, p: PhysParams):
    """Energy (entropy) fluxes ``(f_eps, g_eps)``."""
    speed2 = s.u**2 + s.v**2
    base = s.phi * speed2 / (2.0 * p.g) + s.phi**2 / p.g
    return base * s.u, base * s.v


def augmented_values(s: State, n: UnitNormal) -> np.ndarray:
    """``(u_n + c/2, u_n, u_n - c/2)`` stacked on the last axis."""
    un = normal_velocity(s, n)
    half_c = 0.5 * np.sqrt(s.phi)
    return np.stack(np.broadcast_arrays(un + half_c, un, un - half_c), axis=-1).astype(float)


def eigensystem(s: State, n: UnitNormal) -> EigenSystem:
    nx, ny = np.broadcast_arrays(np.asarray(n.nx, dtype=float), np.asarray(n.ny, dtype=float))
    r = 1.0 / SQRT2
    cols = [
        (np.full_like(nx, r), nx * r, ny * r),
        (np.zeros_like(nx), -ny, nx),
        (np.full_like(nx, r), -nx * r, -ny * r),
    ]
    # R[..., :, k] is the k-th eigenvector.
    R = np.stack([np.stack(col, axis=-1) for col in cols], axis=-1)

    un = np.asarray(normal_velocity(s, n), dtype=float)
    c = np.sqrt(np.asarray(s.phi, dtype=float))
    un, c = np.broadcast_arrays(un, c)
    lam_a = np.stack([un + c, un, un - c], axis=-1)
    lam_n = np.stack([0.5 * c, np.zeros_like(c), -0.5 * c], axis=-1)
    return EigenSystem(R=R, lambda_a=lam_a, lambda_n=lam_n, augmented=lam_a - lam_n)


def to_characteristic(s: State, n: UnitNormal, p: PhysParams) -> CharVars:
    """``w = (phi + c u_n, sqrt(2) c u_s, phi - c u_n) / (2 sqrt(g))``."""
    c = np.sqrt(s.phi)
    un = normal_velocity(s, n)
    us = tangential_velocity(s, n)
    scale = 1.0 / (2.0 * np.sqrt(p.g))
    return CharVars(
        w1=scale * (s.phi + c * un),
        w2=scale * SQRT2 * c * us,
        w3=scale * (s.phi - c * un),
    )


def from_characteristic(w: CharVars, n: UnitNormal, p: PhysParams) -> State:
    """Invert :func:`to_characteristic`.

    Raises :class:`NonPositiveGeopotential` when ``w1 + w3 <= 0``.
    """
    total = np.asarray(w.w1, dtype=float) + np.asarray(w.w3, dtype=float)
    if not np.all(total > 0):
        raise NonPositiveGeopotential(f"w1 + w3 must be positive, got {np.min(total)!r}")
    sg = np.sqrt(p.g)
    phi = sg * total
    c = np.sqrt(phi)
    un = sg * (np.asarray(w.w1) - np.asarray(w.w3)) / c
    us = np.sqrt(2.0 * p.g) * np.asarray(w.w2) / c
    u = un * n.nx - us * n.ny
    v = un * n.ny + us * n.nx
    return State(phi, u, v)


def characteristic_jacobian(s: State, n: UnitNormal, p: PhysParams) -> np.ndarray:
    """Jacobian ``dw/dq`` of :func:`to_characteristic` (trailing 3x3 block)."""
    phi = np.asarray(s.phi, dtype=float)
    c = np.sqrt(phi)
    un = normal_velocity(s, n)
    us = tangential_velocity(s, n)
    nx, ny = n.nx, n.ny
    k = 1.0 / (2.0 * np.sqrt(p.g))
    rows = [
        [1.0 + 0.5 * un / c, c * nx, c * ny],
        [us / (SQRT2 * c), -SQRT2 * c * ny, SQRT2 * c * nx],
        [1.0 - 0.5 * un / c, -c * nx, -c * ny],
    ]
    entries = np.broadcast_arrays(*[np.asarray(e, dtype=float) for row in rows for e in row])
    return k * np.stack(entries, axis=-1).reshape(entries[0].shape + (3, 3))


def boundary_integrand(s: State, n: UnitNormal, p: PhysParams):
    """Boundary quadratic ``lam1 w1^2 + lam2 w2^2 + lam3 w3^2``.

    Equals ``f_eps nx + g_eps ny`` identically; see :func:`flux_integrand`
    for the flux route.
    """
    w = to_characteristic(s, n, p).as_vector()
    lam = augmented_values(s, n)
    return np.sum(lam * w**2, axis=-1)


def flux_integrand(s: State, n: UnitNormal, p: PhysParams):
    feps, geps = entropy_fluxes(s, p)
    return feps * n.nx + geps * n.ny
