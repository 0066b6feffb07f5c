"""Froude-regime classification and energy-stable boundary conditions.

A boundary condition is written in characteristic form as
``w_in = R w_out + g_ext`` where ``w_in`` collects the characteristic
amplitudes whose augmented speed is negative. It is energy stable when
``Lambda_out + R^T Lambda_in R`` is positive semi-definite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .characteristics import augmented_values
from .core import PhysParams, State, UnitNormal, normal_velocity, tangential_velocity
from .errors import (
    AmbiguousRegime,
    OutOfRegime,
    PartitionMismatch,
    UnstableCoefficients,
    WrongCoefficientCount,
)

SQRT2 = np.sqrt(2.0)
FR_TOL = 1e-9
WALL_TOL = 1e-12


class Regime(str, enum.Enum):
    SupercriticalInflow = "SupercriticalInflow"
    SupercriticalOutflow = "SupercriticalOutflow"
    SubcriticalInflowLowFr = "SubcriticalInflowLowFr"
    SubcriticalInflowHighFr = "SubcriticalInflowHighFr"
    SubcriticalOutflowLowFr = "SubcriticalOutflowLowFr"
    SubcriticalOutflowHighFr = "SubcriticalOutflowHighFr"
    Wall = "Wall"

    @property
    def is_inflow(self) -> bool:
        return self in _INFLOW


_INFLOW = {
    Regime.SupercriticalInflow,
    Regime.SubcriticalInflowLowFr,
    Regime.SubcriticalInflowHighFr,
}

# (outgoing, incoming) characteristic indices, 0-based into (w1, w2, w3).
_PARTITIONS = {
    Regime.SupercriticalInflow: ((), (0, 1, 2)),
    Regime.SubcriticalInflowHighFr: ((), (0, 1, 2)),
    Regime.SubcriticalInflowLowFr: ((0,), (1, 2)),
    Regime.SubcriticalOutflowLowFr: ((0, 1), (2,)),
    Regime.Wall: ((0, 1), (2,)),
    Regime.SubcriticalOutflowHighFr: ((0, 1, 2), ()),
    Regime.SupercriticalOutflow: ((0, 1, 2), ()),
}

_COEFFICIENT_COUNTS = {
    Regime.SubcriticalInflowLowFr: 2,
    Regime.SubcriticalOutflowLowFr: 2,
}


@dataclass(frozen=True)
class BCSpec:
    """Boundary condition ``w[incoming] = reflection @ w[outgoing] + external_data``.

    ``external_data`` has one entry per incoming characteristic, or a leading
    node axis when it varies along an edge.
    """

    regime: Regime
    reflection: np.ndarray
    external_data: np.ndarray
    outgoing: tuple[int, ...]
    incoming: tuple[int, ...]
    coefficients: tuple[float, ...] = field(default=())

    @property
    def count(self) -> int:
        return len(self.incoming)

    def with_external_data(self, data) -> "BCSpec":
        data = np.asarray(data, dtype=float)
        if data.shape[-1:] != (self.count,) and not (self.count == 0 and data.size == 0):
            raise WrongCoefficientCount(
                f"external data needs {self.count} components per node, got shape {data.shape}"
            )
        return BCSpec(self.regime, self.reflection, data, self.outgoing, self.incoming, self.coefficients)


@dataclass(frozen=True)
class AnalysisComparison:
    """Boundary-condition counts predicted by the three analyses."""

    nonlinear_count: int
    linear_count: int
    entropy_count: int
    regime: Regime

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.nonlinear_count, self.linear_count, self.entropy_count)


def froude(s: State, n: UnitNormal):
    return np.abs(normal_velocity(s, n)) / np.sqrt(s.phi)


def augmented_eigenvalues(s: State, n: UnitNormal) -> tuple[float, float, float]:
    lam = augmented_values(s, n)
    return tuple(float(x) for x in lam)


def _regime_array(s: State, n: UnitNormal, wall_tol, fr_tol):
    """Vectorised classification; ``None`` marks an ambiguous node."""
    phi = np.atleast_1d(np.asarray(s.phi, dtype=float))
    un = np.atleast_1d(np.asarray(normal_velocity(s, n), dtype=float))
    phi, un = np.broadcast_arrays(phi, un)
    c = np.sqrt(phi)
    fr = np.abs(un) / c
    wall_limit = WALL_TOL * c if wall_tol is None else np.full_like(c, wall_tol)

    out = np.empty(un.shape, dtype=object)
    wall = np.abs(un) <= wall_limit
    ambiguous = ~wall & ((np.abs(fr - 0.5) <= fr_tol * 0.5) | (np.abs(fr - 1.0) <= fr_tol))
    inflow = un < 0
    superc = fr > 1.0
    low = fr < 0.5

    out[:] = None
    pick = ~wall & ~ambiguous
    out[pick & inflow & superc] = Regime.SupercriticalInflow
    out[pick & ~inflow & superc] = Regime.SupercriticalOutflow
    out[pick & inflow & ~superc & low] = Regime.SubcriticalInflowLowFr
    out[pick & inflow & ~superc & ~low] = Regime.SubcriticalInflowHighFr
    out[pick & ~inflow & ~superc & low] = Regime.SubcriticalOutflowLowFr
    out[pick & ~inflow & ~superc & ~low] = Regime.SubcriticalOutflowHighFr
    out[wall] = Regime.Wall
    return out, fr


def classify_nodes(s: State, n: UnitNormal, wall_tol=None, fr_tol=FR_TOL) -> list:
    """Classify every node of an array-valued state; ambiguous nodes give ``None``."""
    out, _ = _regime_array(s, n, wall_tol, fr_tol)
    return list(out.ravel())


def classify(s: State, n: UnitNormal, wall_tol=None, fr_tol=FR_TOL) -> Regime:
    """Flow regime of a single boundary state.

    ``wall_tol`` defaults to ``1e-12 * c``. A Froude number within ``fr_tol``
    (relative) of 1/2 or 1 raises :class:`AmbiguousRegime`.
    """
    out, fr = _regime_array(s, n, wall_tol, fr_tol)
    if out.size != 1:
        raise ValueError("classify expects a scalar state; use classify_nodes for arrays")
    regime = out.ravel()[0]
    if regime is None:
        raise AmbiguousRegime(
            f"Fr = {float(fr.ravel()[0]):.12g} is within tolerance of a crossover (1/2 or 1); "
            "an augmented eigenvalue vanishes and the boundary-condition count is undecided"
        )
    return regime


def required_bc_count(r: Regime) -> int:
    return len(_PARTITIONS[Regime(r)][1])


def partition(r: Regime) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(outgoing, incoming)`` characteristic indices for a regime."""
    return _PARTITIONS[Regime(r)]


def coefficient_count(r: Regime) -> int:
    return _COEFFICIENT_COUNTS.get(Regime(r), 0)


def build_bc(regime, coefficients=(), validate=True, fr=None, external_data=None) -> BCSpec:
    """Assemble a :class:`BCSpec` for ``regime``.

    Low-Froude inflow takes ``(gamma_in, theta_in)`` with ``w2 = gamma w1``,
    ``w3 = theta w1``; low-Froude outflow takes ``(gamma_out, theta_out)`` with
    ``w3 = gamma w1 + theta w2``. Every other regime takes no coefficients.
    Validation checks the coefficients against the stability ellipse at
    Froude number ``fr``.
    """
    regime = Regime(regime)
    coefficients = tuple(float(x) for x in coefficients)
    expected = coefficient_count(regime)
    if len(coefficients) != expected:
        raise WrongCoefficientCount(
            f"{regime.value} takes {expected} coefficients, got {len(coefficients)}"
        )
    outgoing, incoming = _PARTITIONS[regime]

    if regime is Regime.SubcriticalInflowLowFr:
        R = np.array(coefficients, dtype=float).reshape(2, 1)
    elif regime is Regime.SubcriticalOutflowLowFr:
        R = np.array(coefficients, dtype=float).reshape(1, 2)
    elif regime is Regime.Wall:
        # u_n = 0  <=>  w3 = w1
        R = np.array([[1.0, 0.0]])
    else:
        R = np.zeros((len(incoming), len(outgoing)))

    if validate and expected:
        if fr is None:
            raise ValueError(f"validating {regime.value} coefficients needs the Froude number")
        gamma, theta = coefficients
        contains = (
            inflow_ellipse_contains if regime is Regime.SubcriticalInflowLowFr else outflow_ellipse_contains
        )
        if not contains(fr, gamma, theta):
            raise UnstableCoefficients(
                f"(gamma, theta) = ({gamma}, {theta}) lies outside the stable region at Fr = {fr}"
            )

    data = np.zeros(len(incoming)) if external_data is None else np.asarray(external_data, dtype=float)
    return BCSpec(regime, R, data, outgoing, incoming, coefficients)


def _partition_tolerance(lam: np.ndarray) -> float:
    return 1e-12 * max(1.0, float(np.max(np.abs(lam))))


def check_partition(bc: BCSpec, lam) -> None:
    lam = np.asarray(lam, dtype=float)
    n_in, n_out = len(bc.incoming), len(bc.outgoing)
    if bc.reflection.shape != (n_in, n_out):
        raise PartitionMismatch(
            f"reflection matrix has shape {bc.reflection.shape}, expected {(n_in, n_out)}"
        )
    tol = _partition_tolerance(lam)
    bad_out = [i for i in bc.outgoing if lam[i] < -tol]
    bad_in = [i for i in bc.incoming if lam[i] > tol]
    if bad_out or bad_in:
        raise PartitionMismatch(
            f"{bc.regime.value}: eigenvalues {lam.tolist()} contradict the partition "
            f"(negative outgoing {bad_out}, positive incoming {bad_in})"
        )


def stability_matrix(bc: BCSpec, lam) -> np.ndarray:
    """``Lambda_out + R^T Lambda_in R`` on the outgoing subspace."""
    lam = np.asarray(lam, dtype=float)
    lam_out = np.diag(lam[list(bc.outgoing)]) if bc.outgoing else np.zeros((0, 0))
    lam_in = np.diag(lam[list(bc.incoming)]) if bc.incoming else np.zeros((0, 0))
    R = bc.reflection
    return lam_out + R.T @ lam_in @ R


def stability_check(bc: BCSpec, lam) -> tuple[bool, float]:
    """Energy-stability test of a homogeneous boundary condition.

    Returns ``(stable, margin)`` with ``margin`` the smallest eigenvalue of
    :func:`stability_matrix`. External data is ignored.
    """
    check_partition(bc, lam)
    lam = np.asarray(lam, dtype=float)
    if not bc.outgoing:
        return True, 0.0
    if not bc.incoming:
        margin = float(np.min(lam[list(bc.outgoing)]))
        return margin >= 0.0, margin
    margin = float(np.min(np.linalg.eigvalsh(stability_matrix(bc, lam))))
    return margin >= 0.0, margin


def _check_subcritical_band(fr) -> float:
    fr = float(fr)
    if not 0.0 < fr < 0.5:
        raise OutOfRegime(f"stability ellipses are defined for 0 < Fr < 1/2, got Fr = {fr}")
    return fr


def inflow_ellipse_slack(fr, gamma, theta):
    """``(1/2 - Fr) - gamma^2 Fr - theta^2 (1/2 + Fr)``; non-negative inside."""
    fr = _check_subcritical_band(fr)
    return (0.5 - fr) - (np.square(gamma) * fr + np.square(theta) * (0.5 + fr))


def outflow_ellipse_slack(fr, gamma, theta):
    """``Fr (1/2 + Fr) - gamma^2 Fr (1/2 - Fr) - theta^2 (1/4 - Fr^2)``."""
    fr = _check_subcritical_band(fr)
    return fr * (0.5 + fr) - (
        np.square(gamma) * fr * (0.5 - fr) + np.square(theta) * (0.5 + fr) * (0.5 - fr)
    )


def inflow_ellipse_contains(fr, gamma, theta) -> bool:
    return bool(inflow_ellipse_slack(fr, gamma, theta) >= 0.0)


def outflow_ellipse_contains(fr, gamma, theta) -> bool:
    return bool(outflow_ellipse_slack(fr, gamma, theta) >= 0.0)


def ellipse_semi_axes(fr, kind: str) -> tuple[float, float]:
    """Semi-axes ``(gamma_max, theta_max)`` of the stable region."""
    fr = _check_subcritical_band(fr)
    if kind == "inflow":
        return float(np.sqrt((0.5 - fr) / fr)), float(np.sqrt((0.5 - fr) / (0.5 + fr)))
    if kind == "outflow":
        return float(np.sqrt((0.5 + fr) / (0.5 - fr))), float(np.sqrt(fr / (0.5 - fr)))
    raise ValueError(f"kind must be 'inflow' or 'outflow', got {kind!r}")


def ellipse_boundary(fr, kind: str, nsamples: int) -> np.ndarray:
    """``nsamples`` points ``(gamma, theta)`` evenly spaced in angle on the ellipse."""
    if nsamples < 3:
        raise ValueError("need at least 3 samples")
    a, b = ellipse_semi_axes(fr, kind)
    t = 2.0 * np.pi * np.arange(nsamples) / nsamples
    # exact zeros on the axes keep the equality check tight
    cos, sin = np.cos(t), np.sin(t)
    quarter = np.isclose(cos, 0.0, atol=1e-15)
    cos[quarter] = 0.0
    sin[np.isclose(sin, 0.0, atol=1e-15)] = 0.0
    return np.column_stack([a * cos, b * sin])


def compare_analyses(s: State, n: UnitNormal) -> AnalysisComparison:
    """Boundary-condition counts from the nonlinear energy, linear energy and entropy analyses.

    The linear count is the number of negative classical speeds
    ``(u_n + c, u_n, u_n - c)``; the entropy count depends only on the sign
    of ``u_n``. At a wall both give the single condition ``u_n = 0``.
    """
    regime = classify(s, n)
    if regime is Regime.Wall:
        return AnalysisComparison(1, 1, 1, regime)
    un = float(normal_velocity(s, n))
    c = float(np.sqrt(s.phi))
    linear = sum(1 for speed in (un + c, un, un - c) if speed < 0)
    entropy = 3 if un < 0 else 0
    return AnalysisComparison(required_bc_count(regime), linear, entropy, regime)


_EDGES = {(-1, 0): "left", (1, 0): "right", (0, -1): "bottom", (0, 1): "top"}


def edge_of(n: UnitNormal) -> str:
    key = (int(round(float(n.nx))), int(round(float(n.ny))))
    if key not in _EDGES or abs(float(n.nx)) + abs(float(n.ny)) != 1.0:
        raise ValueError(f"normal ({n.nx}, {n.ny}) is not axis-aligned")
    return _EDGES[key]


def table1_residuals(bc: BCSpec, s: State, n: UnitNormal, p: PhysParams | None = None) -> np.ndarray:
    """Primitive-variable boundary conditions of the rectangular-domain table.

    Rows vanish exactly when the characteristic conditions hold with
    homogeneous data. Edge/regime combinations absent from the table
    (inflow on the right or top, say) use the same substitution with the
    local normal and tangential velocities.
    """
    edge = edge_of(n)
    phi, u, v = float(s.phi), float(s.u), float(s.v)
    c = np.sqrt(phi)
    un = float(normal_velocity(s, n))
    us = float(tangential_velocity(s, n))
    regime = bc.regime

    if regime in (Regime.SupercriticalInflow, Regime.SubcriticalInflowHighFr):
        return np.array([phi, u, v])
    if regime in (Regime.SupercriticalOutflow, Regime.SubcriticalOutflowHighFr):
        return np.zeros(0)
    if regime is Regime.Wall:
        return np.array([un])

    gamma, theta = bc.coefficients
    if regime is Regime.SubcriticalInflowLowFr:
        if edge == "bottom":
            return np.array([
                c * u * SQRT2 - gamma * (phi - c * v),
                phi * (1 - theta) + c * v * (1 + theta),
            ])
        if edge == "left":
            return np.array([
                c * v * SQRT2 + gamma * (phi - c * u),
                phi * (1 - theta) + c * u * (1 + theta),
            ])
        return np.array([
            c * us * SQRT2 - gamma * (phi + c * un),
            phi * (1 - theta) - c * un * (1 + theta),
        ])

    # SubcriticalOutflowLowFr
    if edge == "right":
        return np.array([phi * (1 - gamma) - c * u * (1 + gamma) - theta * c * v * SQRT2])
    if edge == "top":
        return np.array([phi * (1 - gamma) - c * v * (1 + gamma) + theta * c * u * SQRT2])
    return np.array([phi * (1 - gamma) - c * un * (1 + gamma) - theta * c * us * SQRT2])


def boundary_quadratic(lam, w) -> float:
    """``lam1 w1^2 + lam2 w2^2 + lam3 w3^2``."""
    return float(np.dot(np.asarray(lam, dtype=float), np.square(np.asarray(w, dtype=float))))


def impose(bc: BCSpec, w_out) -> np.ndarray:
    """Full characteristic vector with the incoming part set by ``bc`` (``g_ext = 0``)."""
    w = np.zeros(3)
    w_out = np.asarray(w_out, dtype=float)
    w[list(bc.outgoing)] = w_out
    if bc.incoming:
        w[list(bc.incoming)] = bc.reflection @ w_out
    return w


def eigen_witness(bc: BCSpec, lam):
    """Characteristic vector making the boundary quadratic negative, or ``None``.

    Uses the eigenvector of the smallest eigenvalue of the stability matrix.
    """
    if not bc.outgoing:
        return None
    vals, vecs = np.linalg.eigh(stability_matrix(bc, lam))
    if vals[0] >= 0.0:
        return None
    w = impose(bc, vecs[:, 0])
    return w if boundary_quadratic(lam, w) < 0.0 else None


def random_witness(bc: BCSpec, lam, rng: np.random.Generator, trials: int = 1000, tol: float = 1e-12):
    """Randomised search for a negative boundary quadratic.

    Returns the most negative ``w`` found (normalised), or ``None`` when every
    sample satisfies ``Q(w) >= -tol |w|^2``.
    """
    if not bc.outgoing:
        return None
    lam = np.asarray(lam, dtype=float)
    w_out = rng.standard_normal((trials, len(bc.outgoing)))
    w = np.zeros((trials, 3))
    w[:, list(bc.outgoing)] = w_out
    if bc.incoming:
        w[:, list(bc.incoming)] = w_out @ bc.reflection.T
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    q = np.square(w) @ lam
    k = int(np.argmin(q))
    return w[k] if q[k] < -tol else None


def subcritical_lambdas(fr, kind: str, c: float = 1.0) -> np.ndarray:
    """Augmented eigenvalues of a boundary state with Froude number ``fr``."""
    un = -fr * c if kind == "inflow" else fr * c
    return np.array([un + 0.5 * c, un, un - 0.5 * c])
