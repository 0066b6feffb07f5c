"""Second-order summation-by-parts difference operator on a uniform node grid.

``D = H^-1 Q`` with ``H = h diag(1/2, 1, ..., 1, 1/2)`` (the trapezoidal
rule) and ``Q + Q^T = diag(-1, 0, ..., 0, 1)``, so that for any grid
functions ``a``, ``b``::

    a^T H D b + b^T H D a = a[-1] b[-1] - a[0] b[0]
"""

from __future__ import annotations

import numpy as np


def trapezoid_weights(n_nodes: int, h: float) -> np.ndarray:
    w = np.full(n_nodes, h)
    w[0] = w[-1] = 0.5 * h
    return w


def sbp_diff(a: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Central differences inside, one-sided first-order differences at the ends."""
    a = np.moveaxis(a, axis, 0)
    d = np.empty_like(a)
    d[1:-1] = (a[2:] - a[:-2]) / (2.0 * h)
    d[0] = (a[1] - a[0]) / h
    d[-1] = (a[-1] - a[-2]) / h
    return np.moveaxis(d, 0, axis)


def second_difference_dissipation(s: np.ndarray, B: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    """``-H^-1 Delta^T B Delta s`` along ``axis``.

    ``s`` has the component axis first (shape ``(3, nx, ny)``), ``B`` holds a
    symmetric positive semi-definite 3x3 block per node (shape
    ``(nx, ny, 3, 3)``) and ``Delta`` is the undivided second difference
    centred on interior nodes. Contracting the result with ``H s`` gives
    ``-sum (Delta s)^T B (Delta s) <= 0``.
    """
    sa = np.moveaxis(s, axis + 1, 1)
    Ba = np.moveaxis(B, axis, 0)
    lap = sa[:, :-2] - 2.0 * sa[:, 1:-1] + sa[:, 2:]
    flux = np.einsum("i...ab,bi...->ai...", Ba[1:-1], lap)
    out = np.zeros_like(sa)
    out[:, :-2] += flux
    out[:, 1:-1] -= 2.0 * flux
    out[:, 2:] += flux
    shape = [1] * out.ndim
    shape[1] = -1
    out /= weights.reshape(shape)
    return -np.moveaxis(out, 1, axis + 1)
