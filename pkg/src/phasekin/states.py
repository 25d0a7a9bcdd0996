"""Concrete s-state wavefunctions and operator-picture expectation values.

Internal units are hbar = M = 1; the Gaussian width parameter and the Bohr
radius carry the dimensions.  Expectation values use the gradient form of
the radial kinetic operator,

    <T_rad> = (1/2) S_d  int (dR/dr)^2 r^(d-1) dr,

whose integrand is manifestly positive; agreement with the second
derivative form is a test, not an assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import check_dimension, solid_angle
from .quadrature import integrate_radial

__all__ = [
    "RadialGaussianState",
    "HydrogenicState",
    "OperatorReport",
    "normalize",
    "norm_integral",
    "op_kinetic_report",
    "expect_inv_r2",
]


@dataclass(frozen=True)
class RadialGaussianState:
    """Real radial superposition sum_i c_i exp(-a_i r^2) in d dimensions."""

    d: int
    coeffs: np.ndarray
    exponents: np.ndarray

    def __post_init__(self):
        check_dimension(self.d)
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "exponents", np.asarray(self.exponents, dtype=float))
        if self.coeffs.shape != self.exponents.shape or self.coeffs.ndim != 1:
            raise ValueError("coeffs and exponents must be 1-d arrays of equal length")
        if not np.all(self.exponents > 0):
            raise ValueError("all Gaussian exponents must be positive")
        if not np.any(self.coeffs):
            raise ValueError("state must have at least one nonzero coefficient")

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.exponents * np.square(r)[..., None]) @ self.coeffs

    def radial_prime(self, r):
        r = np.asarray(r, dtype=float)
        g = np.exp(-self.exponents * np.square(r)[..., None])
        return -2.0 * r * (g @ (self.coeffs * self.exponents))

    def radial_second(self, r):
        r = np.asarray(r, dtype=float)
        g = np.exp(-self.exponents * np.square(r)[..., None])
        a = self.exponents
        return g @ (self.coeffs * (-2.0 * a)) + np.square(r) * (g @ (self.coeffs * 4.0 * a * a))

    def radial_at_zero(self) -> float:
        return float(np.sum(self.coeffs))

    def quad_bounds(self) -> tuple:
        # widest Gaussian sets the tail, narrowest the smallest feature
        r_hi = math.sqrt(90.0 / float(np.min(self.exponents)))
        r_lo = 1e-14 / math.sqrt(float(np.max(self.exponents)))
        return r_lo, r_hi


@dataclass(frozen=True)
class HydrogenicState:
    """Ground state of the d-dimensional Coulomb problem, R(r) = amp e^(-r/(n0 a0)).

    The principal scale is n0 = (d-1)/2; the default amplitude is the
    closed-form normalization constant.
    """

    d: int
    a0: float
    amplitude: float = field(default=0.0)

    def __post_init__(self):
        check_dimension(self.d)
        if self.a0 <= 0:
            raise ValueError("Bohr radius must be positive")
        if self.amplitude == 0.0:
            n0 = self.n0
            norm2 = (
                solid_angle(self.d)
                * self.a0 ** self.d
                * (n0 / 2.0) ** (2.0 * n0 + 1.0)
                * math.gamma(2.0 * n0 + 1.0)
            )
            object.__setattr__(self, "amplitude", 1.0 / math.sqrt(norm2))

    @property
    def n0(self) -> float:
        return (self.d - 1) / 2.0

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-r / (self.n0 * self.a0))

    def radial_prime(self, r):
        return -self.radial(r) / (self.n0 * self.a0)

    def radial_second(self, r):
        return self.radial(r) / (self.n0 * self.a0) ** 2

    def radial_at_zero(self) -> float:
        return self.amplitude

    def quad_bounds(self) -> tuple:
        scale = self.n0 * self.a0
        return 1e-14 * scale, 50.0 * scale


@dataclass(frozen=True)
class OperatorReport:
    """Operator-picture kinetic decomposition of an s-state.

    inv_r2 holds <hbar^2 / (4 M r^2)>, or None when that expectation is
    undefined (d = 2 with a wavefunction finite at the origin).
    """

    T_total: float
    T_rad: float
    T_ang: float
    L2: float
    inv_r2: float | None
    picture: str = "operator"
    units: str = "hbar=M=1"


def norm_integral(state) -> float:
    """S_d int R(r)^2 r^(d-1) dr for the given state."""
    r_lo, r_hi = state.quad_bounds()
    power = state.d - 1
    val = integrate_radial(lambda r: state.radial(r) ** 2 * r ** power, r_lo, r_hi)
    return solid_angle(state.d) * val


def normalize(state):
    """Rescale the state so its norm integral is exactly 1 (to quadrature tol)."""
    n2 = norm_integral(state)
    if n2 <= 0 or not math.isfinite(n2):
        raise ValueError("cannot normalize state with non-positive norm")
    s = 1.0 / math.sqrt(n2)
    if isinstance(state, RadialGaussianState):
        return replace(state, coeffs=state.coeffs * s)
    if isinstance(state, HydrogenicState):
        return replace(state, amplitude=state.amplitude * s)
    raise TypeError(f"cannot normalize {type(state).__name__}")


def _is_origin_finite(state) -> bool:
    scale = float(np.max(np.abs(state.coeffs))) if isinstance(state, RadialGaussianState) else abs(
        state.amplitude
    )
    return abs(state.radial_at_zero()) > 1e-12 * scale


def expect_inv_r2(state) -> float | None:
    """<hbar^2 / (4 M r^2)> for a normalized state, or None when undefined.

    In two dimensions the volume element carries only one power of r, so
    the expectation diverges for any wavefunction finite at the origin;
    that case reports None rather than a number.
    """
    if state.d == 2 and _is_origin_finite(state):
        return None
    r_lo, r_hi = state.quad_bounds()
    power = state.d - 3
    val = integrate_radial(lambda r: state.radial(r) ** 2 * r ** float(power), r_lo, r_hi)
    return 0.25 * solid_angle(state.d) * val


def op_kinetic_report(state) -> OperatorReport:
    """Kinetic-energy decomposition in the operator picture.

    For the s-states modeled here the angular piece and <L^2> vanish
    identically, so the total equals the radial part.
    """
    r_lo, r_hi = state.quad_bounds()
    power = state.d - 1
    grad = integrate_radial(lambda r: state.radial_prime(r) ** 2 * r ** power, r_lo, r_hi)
    t_rad = 0.5 * solid_angle(state.d) * grad
    return OperatorReport(
        T_total=t_rad,
        T_rad=t_rad,
        T_ang=0.0,
        L2=0.0,
        inv_r2=expect_inv_r2(state),
    )
