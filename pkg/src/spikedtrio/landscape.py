"""Minima, critical radius and confinement bounds of the 2-D potential.

Every potential built from the closed forms is symmetric about the
mid-angle phi = pi/6 (t = sin(3*phi) is invariant under
phi -> pi/3 - phi), so the mid-angle is always a critical line.  Confining
specs with an inverse-square spike have their absolute minimum on it; the
cubic-spiked family in addition undergoes a symmetric pitchfork in the
angle as rho grows: a single mid-angle minimum splits into two symmetric
off-axis minima at a critical radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._roots import bracket_sign_change, newton_bisect
from .errors import CriticalRadiusNotFound, NoMinimumError, NotAMinimumError
from .trigform import (SQRT2, PotentialSpec, evaluate_potential,
                       potential_partials, power_sum)

MID_ANGLE = math.pi / 6.0
WEDGE_WIDTH = math.pi / 3.0

#: Two refined angular minima closer than this to the mid-angle are treated
#: as a single (merged) minimum; the Hessian degenerates at the merge and
#: counting must stay stable.
MERGE_TOLERANCE = 1e-6

CONFINING = "confining"
NON_CONFINING = "non-confining"


@dataclass(frozen=True)
class CriticalPoint:
    rho: float
    phi: float
    value: float
    kind: str  # "minimum" | "maximum" | "saddle"


@dataclass(frozen=True)
class LandscapeReport:
    absolute_minimum: CriticalPoint
    critical_radius: Optional[float]
    angular_minima_sample: tuple[tuple[float, tuple[float, ...]], ...]

    def to_json_dict(self) -> dict:
        return {
            "absolute_minimum": {
                "rho": self.absolute_minimum.rho,
                "phi": self.absolute_minimum.phi,
                "value": self.absolute_minimum.value,
                "kind": self.absolute_minimum.kind,
            },
            "critical_radius": self.critical_radius,
            "angular_minima_sample": [
                {"rho": rho, "phi_minima": list(phis)} for rho, phis in self.angular_minima_sample
            ],
        }


def classify(spec: PotentialSpec) -> str:
    """"confining" iff the largest positive exponent has a positive
    coupling.  Odd leading exponents count as confining because the wedge
    restricts sin(3*phi) to [0, 1], where the odd closed forms are
    non-negative."""
    positive = [(m, c) for m, c in spec.terms if m > 0]
    if not positive:
        return NON_CONFINING
    _, coupling = max(positive)
    return CONFINING if coupling > 0.0 else NON_CONFINING


def symmetry_line_minimum(spec: PotentialSpec) -> tuple[float, float]:
    """Minimize rho -> potential(rho, pi/6) over rho > 0.

    Returns (R, value at R).  Newton on the radial derivative with
    bisection fallback inside a bracket found by geometric scan of
    (1e-6, 1e9); the result satisfies
    |dV/drho| < 1e-12 * (1 + |d2V/drho2| * R).
    """
    if classify(spec) != CONFINING:
        raise NoMinimumError(f"potential {spec.describe()} is not confining")

    def deriv(rho: float) -> float:
        return potential_partials(spec, rho, MID_ANGLE).rho

    def second(rho: float) -> float:
        return potential_partials(spec, rho, MID_ANGLE).rho_rho

    lo, hi = bracket_sign_change(deriv)

    # Converge well past the contractual 1e-12*(1 + |d2V|*R) bound so the
    # curvatures read at R carry no stopping-rule bias.
    def converged(x: float, fx: float) -> bool:
        return abs(fx) < 1e-15 * (1.0 + abs(second(x)) * x)

    radius = newton_bisect(deriv, second, lo, hi, converged)
    return radius, float(evaluate_potential(spec, radius, MID_ANGLE))


def _angular_profile(spec: PotentialSpec, rho: float, n_scan: int) -> tuple[np.ndarray, np.ndarray]:
    """Angle-dependent part of the potential on a uniform interior grid.

    Angle-independent terms only shift the profile, so they are dropped;
    keeping them would drown small angular wells in the float resolution
    of a huge radial constant at extreme radii.
    """
    step = WEDGE_WIDTH / (n_scan + 1)
    phis = step * np.arange(1, n_scan + 1)
    t = np.sin(3.0 * phis)
    values = np.zeros(n_scan)
    for m, coupling in spec.terms:
        poly = power_sum(m)
        if poly.is_zero() or (poly.min_power == 0 and poly.max_power == 0):
            continue
        values += coupling * SQRT2 ** m * rho ** m * poly(t)
    return phis, values


def _refine_angular_minimum(spec: PotentialSpec, rho: float, lo: float, hi: float,
                            phi0: float) -> float:
    """Bisection on the angular derivative inside [lo, hi]; falls back to
    the scan point when the derivative does not change sign (flat
    profile)."""
    flo = potential_partials(spec, rho, lo).phi
    fhi = potential_partials(spec, rho, hi).phi
    if not (flo < 0.0 < fhi):
        return phi0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if potential_partials(spec, rho, mid).phi < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def angular_minima(spec: PotentialSpec, rho: float, n_scan: int = 2048) -> list[float]:
    """All interior minima of phi -> potential(rho, phi) on (0, pi/3).

    A uniform scan locates the candidate wells, each refined by bisection
    on the angular derivative to |phi error| < 1e-12.  A symmetric pair
    that has collapsed onto the mid-angle (both within ``MERGE_TOLERANCE``
    of pi/6) is reported as the single merged minimum.
    """
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    phis, values = _angular_profile(spec, rho, n_scan)
    found: list[float] = []
    for i in range(1, n_scan - 1):
        if values[i] < values[i - 1] and values[i] <= values[i + 1]:
            found.append(float(_refine_angular_minimum(
                spec, rho, float(phis[i - 1]), float(phis[i + 1]), float(phis[i]))))
    # Collapse duplicates from adjacent scan cells refined to the same root.
    found.sort()
    minima: list[float] = []
    for phi in found:
        if not minima or phi - minima[-1] > 1e-9:
            minima.append(phi)
    if len(minima) == 2 and all(abs(phi - MID_ANGLE) < MERGE_TOLERANCE for phi in minima):
        return [MID_ANGLE]
    return minima


def _mid_angle_curvature(spec: PotentialSpec, rho: float) -> float:
    return potential_partials(spec, rho, MID_ANGLE).phi_phi


def _closed_form_critical_radius(spec: PotentialSpec) -> Optional[float]:
    """(2*b2/a2)**(1/5) for the pure {+3, -2} family, in the polar
    coefficient convention a2 = coupling*(3*sqrt(2)/2), b2 = coupling*9/2."""
    if spec.exponents != (-2, 3):
        return None
    f_neg2 = spec.coupling(-2)
    f_3 = spec.coupling(3)
    if f_neg2 <= 0.0 or f_3 <= 0.0:
        return None
    a2 = 1.5 * SQRT2 * f_3
    b2 = 4.5 * f_neg2
    return (2.0 * b2 / a2) ** 0.2


def critical_radius(spec: PotentialSpec, method: str = "auto",
                    probe_range: tuple[float, float] = (1e-3, 1e6)) -> float:
    """Radius separating the one-minimum and two-minima angular regimes.

    ``method="auto"`` uses the closed form for the cubic-spiked two-term
    family and falls back to the generic scan otherwise; ``method="scan"``
    always runs the generic search.  The generic search brackets the count
    change of :func:`angular_minima` on a geometric grid, then refines by
    bisection; because the split is a symmetric pitchfork at the
    mid-angle, the refinement bisects the sign change of the mid-angle
    curvature inside the verified bracket (same boundary, resolution far
    below the scan step).  Falls back to bisection on the raw count if the
    curvature does not change sign across the bracket.
    """
    if method not in ("auto", "scan"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        closed = _closed_form_critical_radius(spec)
        if closed is not None:
            return closed

    lo, hi = probe_range
    grid = np.geomspace(lo, hi, 64)
    counts = [len(angular_minima(spec, float(r))) for r in grid]
    bracket = None
    for i in range(len(grid) - 1):
        if counts[i] == 1 and counts[i + 1] >= 2:
            bracket = (float(grid[i]), float(grid[i + 1]))
            break
    if bracket is None:
        raise CriticalRadiusNotFound(
            f"angular minima count never changes on ({lo:g}, {hi:g})"
        )
    blo, bhi = bracket
    if _mid_angle_curvature(spec, blo) > 0.0 > _mid_angle_curvature(spec, bhi):
        while bhi - blo > 1e-9 * bhi:
            mid = 0.5 * (blo + bhi)
            if _mid_angle_curvature(spec, mid) > 0.0:
                blo = mid
            else:
                bhi = mid
        return 0.5 * (blo + bhi)
    # Non-pitchfork transition: bisect the count itself (scan-limited).
    while bhi - blo > 1e-7 * bhi:
        mid = 0.5 * (blo + bhi)
        if len(angular_minima(spec, mid)) == 1:
            blo = mid
        else:
            bhi = mid
    return 0.5 * (blo + bhi)


def hessian_at_minimum(spec: PotentialSpec, radius: float, phi0: float) -> tuple[float, float]:
    """Curvature pair (k_rho, k_eta) at a verified minimum.

    k_rho is half the radial second derivative; k_eta is half the angular
    second derivative with the 1/R**2 metric weight, i.e. the curvature in
    the arc-length coordinate eta = R*(phi - phi0).
    """
    parts = potential_partials(spec, radius, phi0)
    k_rho = 0.5 * parts.rho_rho
    k_eta = 0.5 * parts.phi_phi / (radius * radius)
    if k_rho <= 0.0 or k_eta <= 0.0:
        raise NotAMinimumError(
            f"curvatures ({k_rho:g}, {k_eta:g}) at (rho={radius:g}, phi={phi0:g}) "
            "are not both positive"
        )
    return k_rho, k_eta


def confinement_bound(a2: float, b2: float, rho: float) -> float:
    """Lower bound (3*rho/2)*(2*a2**2*b2*rho)**(1/3) for the cubic-spiked
    potential a2*rho**3*t + b2/(rho**2*t**2) over the whole wedge, valid
    for rho at or beyond the critical radius (it equals the value at the
    off-axis minima there)."""
    if a2 <= 0.0 or b2 <= 0.0:
        raise ValueError("couplings must be positive")
    rho0 = (2.0 * b2 / a2) ** 0.2
    if rho < rho0 * (1.0 - 1e-12):
        raise ValueError(f"bound requires rho >= critical radius {rho0:g}")
    return 1.5 * rho * (2.0 * a2 * a2 * b2 * rho) ** (1.0 / 3.0)


def landscape_report(spec: PotentialSpec,
                     rho_samples: Optional[Sequence[float]] = None) -> LandscapeReport:
    """Absolute minimum, critical radius (None when not applicable) and a
    sample of angular minima positions."""
    radius, value = symmetry_line_minimum(spec)
    hessian_at_minimum(spec, radius, MID_ANGLE)  # raises unless a true minimum
    minimum = CriticalPoint(rho=radius, phi=MID_ANGLE, value=value, kind="minimum")
    try:
        rho0 = critical_radius(spec)
    except CriticalRadiusNotFound:
        rho0 = None
    if rho_samples is None:
        center = rho0 if rho0 is not None else radius
        rho_samples = list(np.geomspace(0.25 * center, 4.0 * center, 9))
    sample = tuple(
        (float(r), tuple(angular_minima(spec, float(r)))) for r in rho_samples
    )
    return LandscapeReport(absolute_minimum=minimum, critical_radius=rho0,
                           angular_minima_sample=sample)
