"""Jacobi coordinates for three equal-mass particles on a line.

The orthogonal transform separates the centre of mass Z from two relative
coordinates (X, Y):

    Z = (x1 + x2 + x3)/sqrt(3)
    X = (x1 - x2)/sqrt(2)
    Y = (x1 + x2 - 2*x3)/sqrt(6)

The inverse is the transpose.  Relative motion is then re-parametrized by
polar coordinates

    X = rho*sin(phi),   Y = rho*cos(phi),

under which the three pair differences collapse to shifted sines of a
single angle:

    x1 - x2 = sqrt(2)*rho*sin(phi)
    x2 - x3 = sqrt(2)*rho*sin(phi + 2*pi/3)
    x3 - x1 = sqrt(2)*rho*sin(phi - 2*pi/3)

The wedge phi in (0, pi/3) is the region with x1 > x2 > x3 (the first two
differences positive, the third negative).  Nothing here clamps to the
wedge: callers may probe any angle, boundaries included.
"""

from __future__ import annotations

import math
from typing import NamedTuple

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

#: Physical wedge: open angular interval with x1 > x2 > x3.
WEDGE = (0.0, math.pi / 3.0)


class ParticleConfig(NamedTuple):
    """Positions of the three particles (dimensionless lengths)."""

    x1: float
    x2: float
    x3: float


class JacobiConfig(NamedTuple):
    """Centre-of-mass coordinate Z plus relative coordinates X, Y."""

    Z: float
    X: float
    Y: float


class PolarConfig(NamedTuple):
    """Polar form of the relative coordinates; rho >= 0, phi in radians."""

    rho: float
    phi: float


# Rows of the forward transform; the inverse is the transpose.
_FORWARD = (
    (1.0 / SQRT3, 1.0 / SQRT3, 1.0 / SQRT3),
    (1.0 / SQRT2, -1.0 / SQRT2, 0.0),
    (1.0 / SQRT6, 1.0 / SQRT6, -2.0 / SQRT6),
)


def to_jacobi(c: ParticleConfig) -> JacobiConfig:
    """Apply the orthogonal particle-to-Jacobi transform."""
    x1, x2, x3 = c
    return JacobiConfig(
        Z=_FORWARD[0][0] * x1 + _FORWARD[0][1] * x2 + _FORWARD[0][2] * x3,
        X=_FORWARD[1][0] * x1 + _FORWARD[1][1] * x2 + _FORWARD[1][2] * x3,
        Y=_FORWARD[2][0] * x1 + _FORWARD[2][1] * x2 + _FORWARD[2][2] * x3,
    )


def from_jacobi(j: JacobiConfig) -> ParticleConfig:
    """Invert :func:`to_jacobi` (transpose of the forward matrix)."""
    Z, X, Y = j
    return ParticleConfig(
        x1=_FORWARD[0][0] * Z + _FORWARD[1][0] * X + _FORWARD[2][0] * Y,
        x2=_FORWARD[0][1] * Z + _FORWARD[1][1] * X + _FORWARD[2][1] * Y,
        x3=_FORWARD[0][2] * Z + _FORWARD[1][2] * X + _FORWARD[2][2] * Y,
    )


def polar_map(p: PolarConfig) -> tuple[float, float]:
    """Return (X, Y) = (rho*sin(phi), rho*cos(phi))."""
    rho, phi = p
    return rho * math.sin(phi), rho * math.cos(phi)


def pair_differences(p: PolarConfig) -> tuple[float, float, float]:
    """Return (x1-x2, x2-x3, x3-x1) for a configuration at (rho, phi).

    Computed by composing :func:`polar_map` with :func:`from_jacobi` at
    Z = 0.  The result equals sqrt(2)*rho*sin(phi + 2*pi*k/3) for
    k = 0, 1, 2 up to roundoff; the sum of the three telescopes to zero.
    """
    X, Y = polar_map(p)
    x1, x2, x3 = from_jacobi(JacobiConfig(0.0, X, Y))
    return x1 - x2, x2 - x3, x3 - x1
