"""Rectangular node grid, grid fields and initial-condition presets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import PhysParams, State, UnitNormal
from ..errors import BadGridSpec, DryState
from .operators import trapezoid_weights

MIN_CELLS = 8

EDGES = ("left", "right", "bottom", "top")
EDGE_NORMALS = {
    "left": UnitNormal(-1.0, 0.0),
    "right": UnitNormal(1.0, 0.0),
    "bottom": UnitNormal(0.0, -1.0),
    "top": UnitNormal(0.0, 1.0),
}
# index of the velocity component normal to each edge within q = (phi, u, v)
NORMAL_COMPONENT = {"left": 1, "right": 1, "bottom": 2, "top": 2}


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on ``[0, a] x [0, b]`` with ``(nx+1) x (ny+1)`` nodes."""

    a: float
    b: float
    nx: int
    ny: int

    @property
    def hx(self) -> float:
        return self.a / self.nx

    @property
    def hy(self) -> float:
        return self.b / self.ny

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.a, self.nx + 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, self.b, self.ny + 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx + 1, self.ny + 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def wx(self) -> np.ndarray:
        return trapezoid_weights(self.nx + 1, self.hx)

    @property
    def wy(self) -> np.ndarray:
        return trapezoid_weights(self.ny + 1, self.hy)

    def edge_index(self, edge: str):
        return {
            "left": (0, slice(None)),
            "right": (-1, slice(None)),
            "bottom": (slice(None), 0),
            "top": (slice(None), -1),
        }[edge]

    def edge_weights(self, edge: str) -> np.ndarray:
        """Trapezoidal line weights along an edge."""
        return self.wy if edge in ("left", "right") else self.wx

    def normal_weight(self, edge: str) -> float:
        """Boundary entry of the 1D norm in the direction normal to ``edge``."""
        return 0.5 * (self.hx if edge in ("left", "right") else self.hy)


def make_grid(a, b, nx, ny) -> Grid:
    if not (a > 0 and b > 0):
        raise BadGridSpec(f"domain extents must be positive, got a={a}, b={b}")
    if int(nx) != nx or int(ny) != ny or nx < MIN_CELLS or ny < MIN_CELLS:
        raise BadGridSpec(f"cell counts must be integers >= {MIN_CELLS}, got nx={nx}, ny={ny}")
    return Grid(float(a), float(b), int(nx), int(ny))


@dataclass
class Field:
    """Nodal solution ``q`` of shape ``(3, nx+1, ny+1)`` holding ``(phi, u, v)``."""

    grid: Grid
    q: np.ndarray
    params: PhysParams

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        if self.q.shape != (3,) + self.grid.shape:
            raise ValueError(f"field shape {self.q.shape} does not match grid {self.grid.shape}")
        check_wet(self.q)

    @property
    def phi(self) -> np.ndarray:
        return self.q[0]

    @property
    def u(self) -> np.ndarray:
        return self.q[1]

    @property
    def v(self) -> np.ndarray:
        return self.q[2]

    def state(self) -> State:
        return State(self.q[0], self.q[1], self.q[2])

    def edge_state(self, edge: str) -> State:
        idx = self.grid.edge_index(edge)
        return State(self.q[0][idx], self.q[1][idx], self.q[2][idx])

    def copy(self) -> "Field":
        return Field(self.grid, self.q.copy(), self.params)


def check_wet(q: np.ndarray) -> None:
    phi = q[0]
    if not np.all(np.isfinite(q)) or not np.all(phi > 0):
        bad = np.nanmin(phi) if np.any(np.isfinite(phi)) else float("nan")
        raise DryState(f"geopotential left the admissible set (min phi = {bad!r})")


def gaussian(grid: Grid, x0=None, y0=None, width=0.1) -> np.ndarray:
    X, Y = grid.mesh()
    x0 = 0.5 * grid.a if x0 is None else x0
    y0 = 0.5 * grid.b if y0 is None else y0
    return np.exp(-((X - x0) ** 2 + (Y - y0) ** 2) / width**2)


PRESETS = ("rest_bump", "stream", "stream_bump")


def initial_field(grid: Grid, params: PhysParams, preset: str = "rest_bump", phi0=1.0, u0=0.0,
                  v0=0.0, amplitude=0.1, width=0.1, x0=None, y0=None) -> Field:
    """Built-in initial conditions.

    ``rest_bump``: still water with a Gaussian geopotential bump.
    ``stream``: uniform ``(phi0, u0, v0)``.
    ``stream_bump``: the uniform stream plus the bump.
    """
    ones = np.ones(grid.shape)
    if preset == "rest_bump":
        u0 = v0 = 0.0
    elif preset == "stream":
        amplitude = 0.0
    elif preset != "stream_bump":
        raise ValueError(f"unknown preset {preset!r}; choose from {PRESETS}")
    phi = phi0 * ones + amplitude * gaussian(grid, x0, y0, width)
    return Field(grid, np.stack([phi, u0 * ones, v0 * ones]), params)
