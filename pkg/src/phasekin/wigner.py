"""Analytic Wigner functions of radial Gaussian superpositions.

For a normalized sum of isotropic Gaussians the defining integral
factorizes over Cartesian components and every pair (i, j) of basis
functions contributes one term

    amp * exp(-A r^2 - B p^2 + 2 C (r.p)) * cos(omega (r.p) + chirp p^2)

with real parameters.  Conjugate cross terms are combined into the cosine
at construction, so the function is real by construction.  Free-particle
Liouville evolution is the substitution r -> r - t p / M, which this
parametrization absorbs exactly into (B, C, chirp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .states import RadialGaussianState

__all__ = [
    "WignerTerm",
    "WignerGaussianSum",
    "wigner_of_state",
    "evolve_free",
    "evaluate",
    "grid_export",
]


@dataclass(frozen=True)
class WignerTerm:
    """One real Gaussian(-times-cosine) term of a Wigner function."""

    amp: float
    A: float
    B: float
    C: float = 0.0
    omega: float = 0.0
    chirp: float = 0.0


@dataclass(frozen=True)
class WignerGaussianSum:
    """Wigner function of a radial Gaussian superposition in d dimensions.

    time_shift records the accumulated t/M of free evolution already baked
    into the term parameters; evaluation needs only the terms.
    """

    d: int
    terms: tuple
    time_shift: float = 0.0


def _closed_form_norm(state: RadialGaussianState) -> float:
    a = state.exponents
    c = state.coeffs
    pair = a[:, None] + a[None, :]
    return float(c @ (math.pi ** (state.d / 2.0) / pair ** (state.d / 2.0)) @ c)


def wigner_of_state(state: RadialGaussianState) -> WignerGaussianSum:
    """Exact Wigner function of a normalized RadialGaussianState.

    A single Gaussian with exponent a = alpha^2/2 yields the minimum
    uncertainty form (pi hbar)^(-d) exp(-alpha^2 r^2 - p^2 / alpha^2 hbar^2).
    """
    if not isinstance(state, RadialGaussianState):
        raise TypeError(
            "wigner_of_state needs a RadialGaussianState; other states have no "
            "analytic Wigner function here"
        )
    norm = _closed_form_norm(state)
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"state must be normalized (norm integral = {norm:.6g})")
    d = state.d
    a = state.exponents
    c = state.coeffs
    merged: dict = {}
    for i in range(len(a)):
        for j in range(i, len(a)):
            s = a[i] + a[j]
            amp = c[i] * c[j] * (math.pi * s) ** (-d / 2.0)
            if j > i:
                amp *= 2.0
            key = (
                4.0 * a[i] * a[j] / s,          # A
                1.0 / s,                         # B (hbar = 1)
                2.0 * (a[j] - a[i]) / s,         # omega
            )
            merged[key] = merged.get(key, 0.0) + amp
    terms = tuple(
        WignerTerm(amp=amp, A=A, B=B, C=0.0, omega=om, chirp=0.0)
        for (A, B, om), amp in merged.items()
        if amp != 0.0
    )
    return WignerGaussianSum(d=d, terms=terms)


def evolve_free(w: WignerGaussianSum, t: float, mass: float = 1.0) -> WignerGaussianSum:
    """Free Liouville flow: substitute r -> r - (t/M) p in every term, exactly."""
    s = t / mass
    terms = tuple(
        replace(
            term,
            B=term.B + 2.0 * term.C * s + term.A * s * s,
            C=term.C + term.A * s,
            chirp=term.chirp - term.omega * s,
        )
        for term in w.terms
    )
    return WignerGaussianSum(d=w.d, terms=terms, time_shift=w.time_shift + s)


def evaluate(w: WignerGaussianSum, r, p, u):
    """W at reduced coordinates (r, p, u), with r.p = r p cos(u).

    Accepts scalars or broadcastable arrays; r, p >= 0 and u in [0, pi].
    """
    r = np.asarray(r, dtype=float)
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    rp = r * p * np.cos(u)
    r2 = r * r
    p2 = p * p
    out = np.zeros(np.broadcast(r, p, u).shape)
    for t in w.terms:
        val = t.amp * np.exp(-t.A * r2 - t.B * p2 + 2.0 * t.C * rp)
        if t.omega != 0.0 or t.chirp != 0.0:
            val = val * np.cos(t.omega * rp + t.chirp * p2)
        out = out + val
    if out.ndim == 0:
        return float(out)
    return out


def grid_export(w: WignerGaussianSum, r_grid, p_grid, u_values) -> np.ndarray:
    """Rows (r, p, u, W) over the tensor grid, row-major in (r, p, u)."""
    r_grid = np.asarray(r_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)
    u_values = np.asarray(u_values, dtype=float)
    R, P, U = np.meshgrid(r_grid, p_grid, u_values, indexing="ij")
    W = evaluate(w, R, P, U)
    return np.column_stack([R.ravel(), P.ravel(), U.ravel(), np.asarray(W).ravel()])
