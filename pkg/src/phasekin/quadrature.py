"""Gauss-Legendre quadrature on a log-mapped radial axis with panel doubling.

Radial integrands here are smooth multi-scale bumps (Gaussians and
exponentials times powers of r).  In the variable s = log r every bump has
O(1) width regardless of its scale, so uniform panels in s with a fixed
Gauss-Legendre order converge geometrically; panels are doubled until two
successive estimates agree to the requested relative tolerance.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["QuadratureError", "gauss_legendre", "log_radial_nodes", "integrate_radial"]


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails to reach its tolerance within its caps."""


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def log_radial_nodes(r_lo: float, r_hi: float, n_panels: int, order: int) -> tuple:
    """Nodes and weights for int f(r) dr over [r_lo, r_hi], log-spaced panels.

    The returned weights already contain the r ds Jacobian of r = e^s.
    """
    if not (0.0 < r_lo < r_hi):
        raise ValueError("need 0 < r_lo < r_hi")
    x, w = gauss_legendre(order)
    edges = np.linspace(np.log(r_lo), np.log(r_hi), n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    r = np.exp(s)
    return r, ws * r


def integrate_radial(
    f,
    r_lo: float,
    r_hi: float,
    tol: float = 1e-12,
    order: int = 24,
    start_panels: int = 4,
    max_doublings: int = 12,
) -> float:
    """Integrate a vectorized f(r) over [r_lo, r_hi] to relative tolerance tol."""
    prev = None
    n = start_panels
    for _ in range(max_doublings + 1):
        r, w = log_radial_nodes(r_lo, r_hi, n, order)
        val = float(np.dot(w, f(r)))
        if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
            return val
        prev = val
        n *= 2
    raise QuadratureError(
        f"radial quadrature did not reach tol={tol:g} within {max_doublings} doublings"
    )
