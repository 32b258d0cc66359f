"""Exact closed forms for three-body power-law potential sums.

For a two-body power-law interaction, the total three-body term is a power
sum over the oriented pair separations.  In polar Jacobi coordinates every
such sum collapses to

    W_m(rho, phi) = (sqrt(2))**m * rho**m * p_m(t),      t = sin(3*phi),

where p_m is a Laurent polynomial in t with rational coefficients.  This
module generates p_m exactly for any integer m != 0 and provides float
evaluation plus analytic partial derivatives.

Orientation convention
----------------------
Odd exponents are sensitive to the orientation of the differences.  The
power sums here use the cyclic orientation (x2-x1, x3-x2, x1-x3): inside
the wedge phi in (0, pi/3) the two adjacent gaps enter negatively and the
outer span positively, which makes every odd-exponent well non-negative
there (confining for a positive coupling).  Equivalently, the three
oriented separations are sqrt(2)*rho times the sines -sin(phi + 2*pi*k/3),
whose elementary symmetric functions are

    e1 = 0,   e2 = -3/4,   e3 = t/4.

Newton's identities then yield the terminating recurrences

    p_k = (3/4)*p_{k-2} + (t/4)*p_{k-3},     seeds p1 = 0, p2 = 3/2,
                                                   p3 = (3/4)*t,

and, via the reciprocal roots (elementary symmetric functions -3/t, 0,
4/t),

    q_k = (-3/t)*q_{k-1} + (4/t)*q_{k-3},    seeds q1 = -3/t, q2 = 9/t**2,
                                                   q3 = -27/t**3 + 12/t,

for p_{-k} = q_k.  All coefficients are kept as exact rationals; floats
appear only at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

import numpy as np

from .coordinates import PolarConfig, pair_differences
from .errors import SingularConfigurationError

SQRT2 = math.sqrt(2.0)

#: Default relative threshold for the singularity guard: a configuration is
#: rejected when some pair separation is below ``epsilon * rho``.
SINGULAR_EPSILON = 1e-12

ArrayLike = Union[float, np.ndarray]


class LaurentPoly:
    """Laurent polynomial in one variable with exact rational coefficients.

    Zero coefficients are never stored.  Instances are immutable and
    hashable; arithmetic returns new objects.
    """

    __slots__ = ("_coeffs", "_float_terms", "_hash")

    def __init__(self, coeffs: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean: dict[int, Fraction] = {}
        for power, c in items:
            c = Fraction(c)
            if c != 0:
                clean[int(power)] = clean.get(int(power), Fraction(0)) + c
        clean = {p: c for p, c in sorted(clean.items()) if c != 0}
        self._coeffs = clean
        self._float_terms = tuple((p, float(c)) for p, c in clean.items())
        self._hash = hash(tuple(clean.items()))

    @property
    def coefficients(self) -> Mapping[int, Fraction]:
        """Read-only power -> coefficient map (no zero entries)."""
        return MappingProxyType(self._coeffs)

    def coefficient(self, power: int) -> Fraction:
        return self._coeffs.get(power, Fraction(0))

    @property
    def min_power(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no minimal power")
        return min(self._coeffs)

    @property
    def max_power(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no maximal power")
        return max(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out.get(p, Fraction(0)) + c
        return LaurentPoly(out)

    def scaled(self, factor: Fraction | int) -> "LaurentPoly":
        f = Fraction(factor)
        return LaurentPoly({p: c * f for p, c in self._coeffs.items()})

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by t**k (shift all powers by k)."""
        return LaurentPoly({p + k: c for p, c in self._coeffs.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({p - 1: c * p for p, c in self._coeffs.items() if p != 0})

    def __call__(self, t: ArrayLike) -> ArrayLike:
        """Evaluate in floating point; accepts scalars or numpy arrays."""
        out = 0.0
        for p, c in self._float_terms:
            out = out + c * t ** p
        return out

    def evaluate_exact(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        total = Fraction(0)
        for p, c in self._coeffs.items():
            total += c * t ** p
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self._coeffs!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for p, c in self._coeffs.items():
            mag = abs(c)
            if p == 0:
                term = str(mag)
            else:
                var = "t" if p == 1 else f"t^{p}"
                term = var if mag == 1 else f"{mag} {var}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


@lru_cache(maxsize=None)
def power_sum(m: int) -> LaurentPoly:
    """Return p_m(t), the power sum of the three oriented separations
    divided by (sqrt(2)*rho)**m, as a Laurent polynomial in t = sin(3*phi).

    Cached process-wide; safe for concurrent readers (construction is pure
    and insertion is one-time).
    """
    m = int(m)
    if m == 0:
        raise ValueError("exponent m must be a non-zero integer")
    if m > 0:
        if m == 1:
            return LaurentPoly({})
        if m == 2:
            return LaurentPoly({0: Fraction(3, 2)})
        if m == 3:
            return LaurentPoly({1: Fraction(3, 4)})
        return power_sum(m - 2).scaled(Fraction(3, 4)) + power_sum(m - 3).shifted(1).scaled(Fraction(1, 4))
    k = -m
    if k == 1:
        return LaurentPoly({-1: Fraction(-3)})
    if k == 2:
        return LaurentPoly({-2: Fraction(9)})
    if k == 3:
        return LaurentPoly({-3: Fraction(-27), -1: Fraction(12)})
    return (
        power_sum(-(k - 1)).shifted(-1).scaled(Fraction(-3))
        + power_sum(-(k - 3)).shifted(-1).scaled(Fraction(4))
    )


@dataclass(frozen=True)
class TrigForm:
    """Exact closed form (sqrt(2))**m * rho**m * poly(sin(3*phi)).

    Parity facts, all consequences of the recurrences: for even m > 0 the
    poly holds only even non-negative powers of t, for odd m > 0 only odd
    non-negative powers, and for m < 0 only powers of the same parity as m
    with the lowest power exactly m.
    """

    m: int
    poly: LaurentPoly

    @property
    def sqrt2_power(self) -> int:
        """Exponent of the sqrt(2) prefactor (kept symbolic, equals m)."""
        return self.m

    def evaluate(self, rho: ArrayLike, phi: ArrayLike) -> ArrayLike:
        t = np.sin(3.0 * np.asarray(phi, dtype=float))
        if t.ndim == 0:
            t = float(t)
        return SQRT2 ** self.m * rho ** self.m * self.poly(t)

    def __str__(self) -> str:
        return f"(√2)^{self.m} ρ^{self.m} [ {self.poly} ],  t = sin 3φ"


@lru_cache(maxsize=None)
def closed_form_omega(m: int) -> TrigForm:
    """Exact closed form of the total power-law term with exponent m."""
    return TrigForm(int(m), power_sum(m))


def brute_force_omega(m: int, p: PolarConfig, epsilon: float = SINGULAR_EPSILON) -> float:
    """Numeric power sum over the oriented pair separations at (rho, phi).

    Independent of the closed forms: goes through the Jacobi matrices via
    :func:`spikedtrio.coordinates.pair_differences` and reverses the
    orientation of each difference (see the module docstring).

    Raises :class:`SingularConfigurationError` when ``m < 0`` and some pair
    separation is below ``epsilon * rho``.
    """
    m = int(m)
    if m == 0:
        raise ValueError("exponent m must be a non-zero integer")
    rho = p[0]
    diffs = pair_differences(PolarConfig(*p))
    if m < 0:
        limit = epsilon * abs(rho)
        for d in diffs:
            if abs(d) <= limit:
                raise SingularConfigurationError(
                    f"pair separation {d:.3e} below threshold {limit:.3e} at phi={p[1]!r}"
                )
    return float(sum((-d) ** m for d in diffs))


@dataclass(frozen=True)
class PotentialSpec:
    """Power-law potential: a list of (exponent, coupling) pairs.

    Couplings of terms sharing an exponent are summed; zero couplings are
    dropped.  At least one term must survive.
    """

    terms: tuple[tuple[int, float], ...]

    def __init__(self, terms: Iterable[tuple[int, float]]):
        merged: dict[int, float] = {}
        for m, coupling in terms:
            m = int(m)
            coupling = float(coupling)
            if m == 0:
                raise ValueError("exponent 0 is not a potential term")
            if not math.isfinite(coupling):
                raise ValueError(f"coupling for exponent {m} is not finite")
            merged[m] = merged.get(m, 0.0) + coupling
        cleaned = tuple(sorted((m, c) for m, c in merged.items() if c != 0.0))
        if not cleaned:
            raise ValueError("potential needs at least one non-zero term")
        object.__setattr__(self, "terms", cleaned)

    # -- named families -------------------------------------------------
    @classmethod
    def calogero(cls, omega: float = 1.0, nu: float = 1.0) -> "PotentialSpec":
        """Quadratic well omega**2*x**2 plus inverse-square spike
        nu*(nu+1)/x**2 per pair."""
        return cls(((2, omega * omega), (-2, nu * (nu + 1.0))))

    @classmethod
    def spiked_cubic(cls, alpha2: float = 1.0, beta2: float = 1.0) -> "PotentialSpec":
        """Cubic well plus inverse-square spike, parametrized by the polar
        coefficients: the total is alpha2*rho**3*sin(3*phi)
        + beta2/(rho**2*sin(3*phi)**2).

        The per-pair couplings absorb the closed-form prefactors:
        F_3 = alpha2*sqrt(2)/3 and F_{-2} = 2*beta2/9.
        """
        return cls(((3, alpha2 * SQRT2 / 3.0), (-2, 2.0 * beta2 / 9.0)))

    @classmethod
    def spiked_quartic(cls, omega: float = 1.0, lam: float = 0.0, nu: float = 1.0) -> "PotentialSpec":
        """Quadratic plus quartic well with an inverse-square spike (the
        only family beyond the quadratic one whose polar form splits into
        f(rho) + g(phi)/rho**2)."""
        return cls(((2, omega * omega), (4, lam), (-2, nu * (nu + 1.0))))

    # -- views -----------------------------------------------------------
    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.terms)

    @property
    def has_singular_terms(self) -> bool:
        return any(m < 0 for m, _ in self.terms)

    def coupling(self, m: int) -> float:
        for mm, c in self.terms:
            if mm == m:
                return c
        return 0.0

    def describe(self) -> str:
        return " + ".join(f"{c:g}*W[{m}]" for m, c in self.terms)


@lru_cache(maxsize=None)
def _compiled(spec: PotentialSpec):
    """Per-term (m, coupling*(sqrt2)**m, p_m, p_m', p_m'') tuples."""
    rows = []
    for m, coupling in spec.terms:
        poly = power_sum(m)
        rows.append((m, coupling * SQRT2 ** m, poly, poly.derivative(), poly.derivative().derivative()))
    return tuple(rows)


def _check_regular(spec: PotentialSpec, phi: ArrayLike, epsilon: float) -> None:
    """Reject configurations whose pair separations vanish to within the
    threshold, but only when the spec actually carries singular terms."""
    if not spec.has_singular_terms:
        return
    # |pair difference| = sqrt(2)*rho*|sin(phi + 2*pi*k/3)|; the rho factor
    # cancels against the relative threshold epsilon*rho.
    limit = epsilon / SQRT2
    phi_arr = np.asarray(phi, dtype=float)
    for k in range(3):
        s = np.abs(np.sin(phi_arr + 2.0 * math.pi * k / 3.0))
        if np.any(s <= limit):
            raise SingularConfigurationError(
                f"configuration within {epsilon:g}*rho of a two-particle collision"
            )


def evaluate_potential(spec: PotentialSpec, rho: ArrayLike, phi: ArrayLike,
                       epsilon: float = SINGULAR_EPSILON) -> ArrayLike:
    """Sum of coupling * closed form over the spec's terms at (rho, phi).

    Accepts scalars or broadcastable numpy arrays.
    """
    _check_regular(spec, phi, epsilon)
    t = np.sin(3.0 * np.asarray(phi, dtype=float))
    if t.ndim == 0:
        t = float(t)
    total = 0.0
    for m, coef, poly, _, _ in _compiled(spec):
        total = total + coef * rho ** m * poly(t)
    return total


class PotentialPartials(NamedTuple):
    """Value and partial derivatives of the potential at one point."""

    value: float
    rho: float
    phi: float
    rho_rho: float
    phi_phi: float
    rho_phi: float


def potential_partials(spec: PotentialSpec, rho: float, phi: float,
                       epsilon: float = SINGULAR_EPSILON) -> PotentialPartials:
    """Exact analytic value and partials (rho, phi, rho_rho, phi_phi,
    rho_phi) of the potential sum at a single point.

    The angular derivatives chain through t = sin(3*phi):
    d/dphi = 3*cos(3*phi) d/dt and d2/dphi2 = -9*t d/dt
    + 9*cos(3*phi)**2 d2/dt2.  On the symmetry line phi = pi/6 the first
    angular derivative therefore vanishes identically.
    """
    _check_regular(spec, phi, epsilon)
    t = math.sin(3.0 * phi)
    c3 = 3.0 * math.cos(3.0 * phi)
    value = d_rho = d2_rho = s_p = s_pp = s_pr = 0.0
    for m, coef, poly, dpoly, d2poly in _compiled(spec):
        pm = poly(t)
        value += coef * rho ** m * pm
        d_rho += coef * m * rho ** (m - 1) * pm
        d2_rho += coef * m * (m - 1) * rho ** (m - 2) * pm
        s_p += coef * rho ** m * dpoly(t)
        s_pp += coef * rho ** m * d2poly(t)
        s_pr += coef * m * rho ** (m - 1) * dpoly(t)
    return PotentialPartials(
        value=value,
        rho=d_rho,
        phi=c3 * s_p,
        rho_rho=d2_rho,
        phi_phi=-9.0 * t * s_p + c3 * c3 * s_pp,
        rho_phi=c3 * s_pr,
    )


# -- rendering (identities CLI) -----------------------------------------

def form_to_json_dict(form: TrigForm) -> dict:
    """JSON-friendly view: {"m", "sqrt2_power", "coefficients"} with exact
    "numerator/denominator" strings keyed by the power of t."""
    return {
        "m": form.m,
        "sqrt2_power": form.sqrt2_power,
        "coefficients": {
            str(p): f"{c.numerator}/{c.denominator}"
            for p, c in form.poly.coefficients.items()
        },
    }


def form_to_text(form: TrigForm) -> str:
    return f"m={form.m}: {form}"
