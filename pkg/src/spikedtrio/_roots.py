"""Bracketed 1-D root finding for smooth radial derivatives.

The radial profiles in this package are smooth on (0, inf) and their first
derivatives cross zero at most once from below on the ranges we probe, so
a geometric scan for a sign change followed by safeguarded Newton (with
bisection fallback) is exact enough and never diverges.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import NoMinimumError

#: Radial search window used by the minimizers.
SEARCH_RANGE = (1e-6, 1e9)


def bracket_sign_change(f: Callable[[float], float],
                        lo_limit: float = SEARCH_RANGE[0],
                        hi_limit: float = SEARCH_RANGE[1],
                        factor: float = 2.0) -> tuple[float, float]:
    """Scan a geometric grid for adjacent points where f goes from
    negative to positive; raise :class:`NoMinimumError` if none exist."""
    x = lo_limit
    prev_x, prev_f = None, None
    while x <= hi_limit * (1.0 + 1e-12):
        fx = f(x)
        if prev_f is not None and prev_f < 0.0 <= fx:
            return prev_x, x
        if fx == 0.0 and prev_f is not None and prev_f < 0.0:
            return prev_x, x
        prev_x, prev_f = x, fx
        x *= factor
    raise NoMinimumError(
        f"derivative has no negative-to-positive sign change on ({lo_limit:g}, {hi_limit:g})"
    )


def newton_bisect(f: Callable[[float], float],
                  fprime: Callable[[float], float],
                  lo: float, hi: float,
                  converged: Callable[[float, float], bool],
                  maxiter: int = 200) -> float:
    """Newton iteration kept inside [lo, hi]; any step leaving the bracket
    (or hitting a non-positive derivative) is replaced by bisection.

    ``converged(x, fx)`` decides termination; the last bracket midpoint is
    returned if the iteration cap is reached.
    """
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if converged(x, fx):
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        fpx = fprime(x)
        if fpx > 0.0:
            step = x - fx / fpx
            x = step if lo < step < hi else 0.5 * (lo + hi)
        else:
            x = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * math.ulp(x):
            return x
    return x
