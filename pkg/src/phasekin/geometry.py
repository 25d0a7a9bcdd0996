"""Hyperspherical geometry: solid angles and the reduced phase-space measure.

For a state whose Wigner function depends only on the scalars (r, p, u),
where u is the angle between the position and momentum vectors, the full
2D-dimensional phase-space integral collapses to three variables.  This
module provides the weights of that reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["check_dimension", "solid_angle", "ReducedMeasure", "reduced_measure"]


def check_dimension(d: int) -> int:
    """Validate a spatial dimension (an integer, at least 2)."""
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    return d


def solid_angle(d: int) -> float:
    """Total solid angle of the unit sphere in d dimensions, 2 pi^(d/2) / Gamma(d/2).

    The formula continues smoothly to d = 1, where it gives 2 (the two
    endpoints of an interval); that value is what the reduced measure
    needs in two spatial dimensions.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"solid_angle requires an integer d >= 1, got {d!r}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class ReducedMeasure:
    """Weight data reducing s-state phase-space integrals to (r, p, u).

    For any integrable f depending only on (r, p, u),

        integral over d^d r d^d p of f
          = prefactor * int_0^inf dr int_0^inf dp int_0^pi du
            f(r, p, u) r^radial_power p^momentum_power sin(u)^angle_power

    with prefactor = S_d * S_(d-1).
    """

    d: int
    prefactor: float
    radial_power: int
    momentum_power: int
    angle_power: int


def reduced_measure(d: int) -> ReducedMeasure:
    """Reduced measure for dimension d (requires d >= 2)."""
    check_dimension(d)
    return ReducedMeasure(
        d=d,
        prefactor=solid_angle(d) * solid_angle(d - 1),
        radial_power=d - 1,
        momentum_power=d - 1,
        angle_power=d - 2,
    )
