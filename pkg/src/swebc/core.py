"""Pointwise states and system matrices of the 2D shallow water equations.

The solution vector is ``q = (phi, u, v)`` with ``phi = g h`` the geopotential.
Every function here accepts scalar states or states whose fields are numpy
arrays of a common (broadcastable) shape; matrices are returned with the
3x3 block in the trailing two axes, rows ordered (phi, u, v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidNormal, NonPositiveGeopotential

NORMAL_TOL = 1e-12


@dataclass(frozen=True)
class PhysParams:
    """Gravity ``g`` (> 0) and constant Coriolis parameter ``f``."""

    g: float = 9.81
    f: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError(f"gravity must be positive, got {self.g!r}")


@dataclass(frozen=True)
class State:
    """Pointwise solution ``(phi, u, v)``; fields may be numpy arrays."""

    phi: float | np.ndarray
    u: float | np.ndarray
    v: float | np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if not np.all(phi > 0):
            raise NonPositiveGeopotential(
                f"geopotential must be positive, got min phi = {np.min(phi)!r}"
            )

    @property
    def c(self):
        """Wave celerity ``sqrt(phi)``."""
        return np.sqrt(self.phi)

    def as_vector(self) -> np.ndarray:
        """Stack into ``q`` with the component axis last."""
        return np.stack(np.broadcast_arrays(self.phi, self.u, self.v), axis=-1).astype(float)


@dataclass(frozen=True)
class UnitNormal:
    """Outward boundary normal; must satisfy ``nx**2 + ny**2 == 1``."""

    nx: float | np.ndarray
    ny: float | np.ndarray

    def __post_init__(self):
        err = np.abs(np.asarray(self.nx) ** 2 + np.asarray(self.ny) ** 2 - 1.0)
        if not np.all(err <= NORMAL_TOL):
            raise InvalidNormal(f"normal is not unit length (|n|^2 - 1 = {np.max(err):.3e})")

    @classmethod
    def from_angle(cls, alpha) -> "UnitNormal":
        return cls(np.cos(alpha), np.sin(alpha))


def make_state(phi, u, v) -> State:
    """Build a :class:`State`, raising :class:`NonPositiveGeopotential` if ``phi <= 0``."""
    return State(phi, u, v)


def normal_velocity(s: State, n: UnitNormal):
    return s.u * n.nx + s.v * n.ny


def tangential_velocity(s: State, n: UnitNormal):
    return s.v * n.nx - s.u * n.ny


def _matrix(rows) -> np.ndarray:
    entries = np.broadcast_arrays(*[np.asarray(e, dtype=float) for row in rows for e in row])
    shape = entries[0].shape
    return np.stack(entries, axis=-1).reshape(shape + (3, 3))


def flux_matrices(s: State) -> tuple[np.ndarray, np.ndarray]:
    """Flux Jacobians ``A`` and ``B`` of the non-conservative form."""
    phi, u, v = s.phi, s.u, s.v
    zero, one = np.zeros_like(np.asarray(phi, dtype=float)), 1.0
    A = _matrix([[u, phi, zero], [one, u, zero], [zero, zero, u]])
    B = _matrix([[v, zero, phi], [zero, v, zero], [one, zero, v]])
    return A, B


def coriolis_matrix(p: PhysParams) -> np.ndarray:
    f = float(p.f)
    return np.array([[0.0, 0.0, 0.0], [0.0, 0.0, f], [0.0, -f, 0.0]])


def symmetrizer(s: State, p: PhysParams) -> np.ndarray:
    """``S = diag(1, sqrt(phi), sqrt(phi)) / sqrt(2 g)``.

    ``S A S^-1`` and ``S B S^-1`` are symmetric and ``|S q|^2`` is the total
    energy density.
    """
    kappa = 1.0 / np.sqrt(2.0 * p.g)
    c = np.sqrt(np.asarray(s.phi, dtype=float))
    one, zero = np.ones_like(c), np.zeros_like(c)
    return kappa * _matrix([[one, zero, zero], [zero, c, zero], [zero, zero, c]])


def norm_matrix(s: State, p: PhysParams) -> np.ndarray:
    """``P = S^2 = diag(1, phi, phi) / (2 g)``."""
    S = symmetrizer(s, p)
    return S @ S


def correction_matrices(s: State) -> tuple[np.ndarray, np.ndarray]:
    """Matrices ``N1``, ``N2`` that commute with ``A`` and ``B`` respectively.

    They absorb the scalar terms ``(phi^2 u / 2g)_x`` and ``(phi^2 v / 2g)_y``
    of the energy equation into quadratic forms ``q^T P N q``.
    """
    phi = np.asarray(s.phi, dtype=float)
    zero, half = np.zeros_like(phi), 0.5 * np.ones_like(phi)
    N1 = _matrix([[zero, 0.5 * phi, zero], [half, zero, zero], [zero, zero, zero]])
    N2 = _matrix([[zero, zero, 0.5 * phi], [zero, zero, zero], [half, zero, zero]])
    return N1, N2


def normal_matrices(s: State, n: UnitNormal) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized normal flux ``Ahat`` and correction ``Nhat``.

    ``Ahat = S (A nx + B ny) S^-1`` and ``Nhat = S (N1 nx + N2 ny) S^-1``;
    both are symmetric and they commute.
    """
    c = np.sqrt(np.asarray(s.phi, dtype=float))
    un = normal_velocity(s, n)
    a, b = n.nx * c, n.ny * c
    zero = np.zeros_like(c * un)
    Ahat = _matrix([[un, a, b], [a, un, zero], [b, zero, un]])
    Nhat = 0.5 * _matrix([[zero, a, b], [a, zero, zero], [b, zero, zero]])
    return Ahat, Nhat
