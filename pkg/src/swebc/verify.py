"""Randomised checks of the matrix identities behind the energy estimate.

Each family reports the largest residual over all sampled states. The
functions are looked up through their modules at call time so that a
deliberately corrupted build is caught.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import characteristics, core

TOLERANCE = 1e-12
FAMILIES = (
    "symmetrizer_symmetry",
    "commutation",
    "eigendecomposition",
    "energy_norm",
    "boundary_flux",
)
GRAVITIES = (1.0, 9.81)


@dataclass
class IdentityReport:
    trials: int
    seed: int | None
    residuals: dict[str, float]
    tolerance: float = TOLERANCE

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v <= self.tolerance]

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "residuals": self.residuals,
            "failures": self.failures,
            "ok": self.ok,
        }


def random_states(rng: np.random.Generator, size: int):
    """Admissible states with ``phi in [0.1, 10]``, ``|u|, |v| <= 5`` and random unit normals."""
    phi = rng.uniform(0.1, 10.0, size)
    u = rng.uniform(-5.0, 5.0, size)
    v = rng.uniform(-5.0, 5.0, size)
    alpha = rng.uniform(0.0, 2.0 * np.pi, size)
    return core.State(phi, u, v), core.UnitNormal(np.cos(alpha), np.sin(alpha))


def _maxabs(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def _t(m):
    return np.swapaxes(m, -1, -2)


def _batch_residuals(s: core.State, n: core.UnitNormal, p: core.PhysParams) -> dict[str, float]:
    nx = np.asarray(n.nx)[..., None, None]
    ny = np.asarray(n.ny)[..., None, None]
    A, B = core.flux_matrices(s)
    S = core.symmetrizer(s, p)
    Sinv = np.linalg.inv(S)
    P = core.norm_matrix(s, p)
    N1, N2 = core.correction_matrices(s)
    Ahat, Nhat = core.normal_matrices(s, n)

    As, Bs = S @ A @ Sinv, S @ B @ Sinv
    sym = max(
        _maxabs(As - _t(As)),
        _maxabs(Bs - _t(Bs)),
        _maxabs(Ahat - S @ (A * nx + B * ny) @ Sinv),
        _maxabs(Nhat - S @ (N1 * nx + N2 * ny) @ Sinv),
    )

    comm = max(
        _maxabs(Ahat @ Nhat - Nhat @ Ahat),
        _maxabs(A @ N1 - N1 @ A),
        _maxabs(B @ N2 - N2 @ B),
        _maxabs(A @ N2 + B @ N1 - N2 @ A - N1 @ B),
    )

    es = characteristics.eigensystem(s, n)
    R = es.R
    eye = np.eye(3)
    eig = max(
        _maxabs(R @ _t(R) - eye),
        _maxabs(Ahat - (R * es.lambda_a[..., None, :]) @ _t(R)),
        _maxabs(Nhat - (R * es.lambda_n[..., None, :]) @ _t(R)),
    )

    q = s.as_vector()
    eps = characteristics.total_energy(s, p)
    qPq = np.einsum("...i,...ij,...j->...", q, P, q)
    qSNSq = np.einsum("...i,...ij,...j->...", q, S @ Nhat @ S, q)
    un = core.normal_velocity(s, n)
    floor = np.maximum(1.0, np.abs(eps))
    energy = max(
        _maxabs((qPq - eps) / floor),
        _maxabs((qSNSq - s.phi**2 * un / (2.0 * p.g)) / floor),
    )

    quad = characteristics.boundary_integrand(s, n, p)
    flux = characteristics.flux_integrand(s, n, p)
    bflux = _maxabs((quad - flux) / np.maximum(1.0, np.abs(flux)))

    return {
        "symmetrizer_symmetry": sym,
        "commutation": comm,
        "eigendecomposition": eig,
        "energy_norm": energy,
        "boundary_flux": bflux,
    }


def run_identity_suite(trials: int = 10_000, seed: int | None = 0) -> IdentityReport:
    """Run all identity families over ``trials`` random states per gravity value."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(FAMILIES, 0.0)
    for g in GRAVITIES:
        s, n = random_states(rng, trials)
        res = _batch_residuals(s, n, core.PhysParams(g=g, f=0.0))
        for k, v in res.items():
            worst[k] = max(worst[k], v) if np.isfinite(v) else float("inf")
    return IdentityReport(trials=trials, seed=seed, residuals=worst)
