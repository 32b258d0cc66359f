"""Harmonic (osculating) approximations and their closed-form spectra.

Strong short-range repulsion pushes the absolute minimum of the potential
far from the origin; around it the well is deep and locally quadratic, so
the low-lying spectrum approaches that of the osculating harmonic well.
The 2-D version quantizes the radial and arc-length angular modes
separately:

    E(m, n) = V_min + sqrt(k_rho)*(2m+1) + sqrt(k_eta)*(2n+1),

with (k_rho, k_eta) the curvature pair of the minimum; the error scale of
the truncation is 1/R.  The 1-D machinery (Taylor data of radial wells,
matched spiked-quadratic wells, ladder spectra) lives here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from ._roots import bracket_sign_change, newton_bisect
from .errors import NonConvexError
from .landscape import MID_ANGLE, hessian_at_minimum, symmetry_line_minimum
from .trigform import PotentialSpec


@dataclass(frozen=True)
class HarmonicApproximation:
    """Separable quadratic model of a 2-D well around its minimum."""

    R: float
    phi0: float
    omega_min: float
    k_rho: float
    k_eta: float

    @property
    def error_scale(self) -> float:
        """Relative size of the neglected anharmonic corrections."""
        return 1.0 / self.R

    def energy(self, m: int, n: int) -> float:
        return (self.omega_min
                + math.sqrt(self.k_rho) * (2 * m + 1)
                + math.sqrt(self.k_eta) * (2 * n + 1))


@dataclass(frozen=True)
class SpectrumTable:
    """Energies indexed by (radial m, angular n) quantum numbers.

    ``method`` tags the provenance: "harmonic", "numeric-2d" or
    "separable".
    """

    entries: tuple[tuple[int, int, float], ...]
    description: str = ""
    method: str = "harmonic"

    def energies(self) -> list[float]:
        return sorted(e for _, _, e in self.entries)

    def energy(self, m: int, n: int) -> float:
        for mm, nn, e in self.entries:
            if mm == m and nn == n:
                return e
        raise KeyError((m, n))

    def to_json_dict(self) -> dict:
        return {
            "description": self.description,
            "method": self.method,
            "entries": [{"m": m, "n": n, "E": e} for m, n, e in self.entries],
        }

    def to_csv_rows(self) -> list[tuple]:
        return [("m", "n", "E", "method")] + [
            (m, n, e, self.method) for m, n, e in self.entries
        ]


@dataclass(frozen=True)
class RadialPotential:
    """1-D radial well V(r) = sum coeff * r**p with integer powers."""

    terms: tuple[tuple[int, float], ...]

    def __init__(self, terms: Iterable[tuple[int, float]]):
        cleaned = []
        for p, coeff in terms:
            p = int(p)
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError(f"coefficient for power {p} is not finite")
            if coeff != 0.0:
                cleaned.append((p, coeff))
        object.__setattr__(self, "terms", tuple(sorted(cleaned)))

    @classmethod
    def spiked_harmonic(cls, omega: float, nu: float) -> "RadialPotential":
        return cls(((2, omega * omega), (-2, nu * (nu + 1.0))))

    @classmethod
    def cubic_spiked(cls, well: float, spike: float) -> "RadialPotential":
        """well*r**3 + spike/r**3."""
        return cls(((3, well), (-3, spike)))

    def value(self, r: float) -> float:
        return sum(c * r ** p for p, c in self.terms)

    def derivative(self, r: float, order: int = 1) -> float:
        total = 0.0
        for p, c in self.terms:
            factor = 1.0
            for j in range(order):
                factor *= (p - j)
            if factor != 0.0:
                total += c * factor * r ** (p - order)
        return total

    def with_term(self, p: int, coeff: float) -> "RadialPotential":
        return RadialPotential(self.terms + ((p, coeff),))

    def describe(self) -> str:
        return " + ".join(f"{c:g}*r^{p}" for p, c in self.terms)


def harmonic_approximation(spec: PotentialSpec) -> HarmonicApproximation:
    """Locate the absolute minimum on the symmetry line and read off the
    curvature pair; raises when the spec is not confining or the critical
    point is not a minimum."""
    radius, value = symmetry_line_minimum(spec)
    k_rho, k_eta = hessian_at_minimum(spec, radius, MID_ANGLE)
    return HarmonicApproximation(R=radius, phi0=MID_ANGLE, omega_min=value,
                                 k_rho=k_rho, k_eta=k_eta)


def approximate_spectrum(h: HarmonicApproximation, m_levels: int, n_levels: int) -> SpectrumTable:
    """Closed-form separable-harmonic energies for m < m_levels and
    n < n_levels."""
    if m_levels < 1 or n_levels < 1:
        raise ValueError("level counts must be positive")
    entries = tuple(
        (m, n, h.energy(m, n)) for m in range(m_levels) for n in range(n_levels)
    )
    return SpectrumTable(entries=entries, method="harmonic",
                         description=f"harmonic approximation at R={h.R:g}")


def sho_exact_spectrum(omega: float, nu: float, n: int) -> float:
    """Exact level omega*(4n + 2*nu + 3) of the spiked harmonic well
    omega**2*r**2 + nu*(nu+1)/r**2 on the half line."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    if nu <= -0.5:
        raise ValueError("nu must exceed -1/2")
    if n < 0:
        raise ValueError("n must be non-negative")
    return omega * (4 * n + 2 * nu + 3)


def radial_taylor(potential: RadialPotential, order: int = 4) -> tuple[float, tuple[float, ...]]:
    """Minimum location R and Taylor coefficients (c0..c_order) of the
    well around it, c_j = V^(j)(R)/j!.

    R is found by safeguarded Newton on V'; the derivatives are analytic
    in the power terms.  Orders beyond 4 are outside the intended use.
    """
    if order < 0 or order > 4:
        raise ValueError("order must be between 0 and 4")

    deriv = potential.derivative
    lo, hi = bracket_sign_change(lambda r: deriv(r, 1))

    def converged(x: float, fx: float) -> bool:
        return abs(fx) < 1e-15 * (1.0 + abs(deriv(x, 2)) * x)

    radius = newton_bisect(lambda r: deriv(r, 1), lambda r: deriv(r, 2), lo, hi, converged)
    coeffs = [potential.value(radius)]
    factorial = 1.0
    for j in range(1, order + 1):
        factorial *= j
        coeffs.append(deriv(radius, j) / factorial)
    return radius, tuple(coeffs)


def sho_osculate(F: float, G: float) -> tuple[float, float]:
    """Couplings (F0, G0) of the spiked quadratic well F0*r**2 + G0/r**2
    matched to the cubic-spiked well F*r**3 + G/r**3:

        F0 = (9/4)*(G*F**5)**(1/6),    G0 = (4/9)*(G**5*F)**(1/6).

    The matched well reproduces the depth 2*sqrt(G*F) and the harmonic
    coefficient 9*sqrt(G*F)/R**2 of the cubic-spiked well exactly, so the
    two harmonic ladder spectra coincide.
    """
    if F <= 0.0 or G <= 0.0:
        raise ValueError("couplings must be positive")
    return (2.25 * (G * F ** 5) ** (1.0 / 6.0),
            (4.0 / 9.0) * (G ** 5 * F) ** (1.0 / 6.0))


def rho_approx_spectrum(potential: RadialPotential, levels: int) -> SpectrumTable:
    """Ladder spectrum c0 + sqrt(c2)*(2m+1) of the harmonic well osculating
    a 1-D radial potential at its minimum."""
    if levels < 1:
        raise ValueError("levels must be positive")
    radius, (c0, _, c2) = radial_taylor(potential, order=2)
    if c2 <= 0.0:
        raise NonConvexError(
            f"quadratic coefficient {c2:g} at r={radius:g} is not positive"
        )
    spacing = math.sqrt(c2)
    entries = tuple((m, 0, c0 + spacing * (2 * m + 1)) for m in range(levels))
    return SpectrumTable(entries=entries, method="harmonic",
                         description=f"1-D harmonic ladder of {potential.describe()} at R={radius:g}")
