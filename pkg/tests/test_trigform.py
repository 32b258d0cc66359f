import math
import threading
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikedtrio.coordinates import PolarConfig
from spikedtrio.errors import SingularConfigurationError
from spikedtrio.trigform import (
    LaurentPoly,
    PotentialSpec,
    brute_force_omega,
    closed_form_omega,
    evaluate_potential,
    form_to_json_dict,
    potential_partials,
    power_sum,
)

SQRT2 = math.sqrt(2.0)
MID = math.pi / 6.0

wedge_phi = st.floats(min_value=5e-3, max_value=math.pi / 3 - 5e-3)
radius = st.floats(min_value=0.3, max_value=3.0)


# -- LaurentPoly basics ------------------------------------------------------

def test_poly_drops_zero_coefficients():
    p = LaurentPoly({2: Fraction(1), 1: Fraction(0)})
    assert dict(p.coefficients) == {2: Fraction(1)}


def test_poly_derivative_and_shift():
    p = LaurentPoly({-2: Fraction(9), 1: Fraction(2)})
    assert dict(p.derivative().coefficients) == {-3: Fraction(-18), 0: Fraction(2)}
    assert dict(p.shifted(2).coefficients) == {0: Fraction(9), 3: Fraction(2)}


def test_poly_exact_and_float_eval_agree():
    p = power_sum(-6)
    t = Fraction(1, 3)
    assert float(p.evaluate_exact(t)) == pytest.approx(p(float(t)), rel=1e-15)


# -- generator seeds ---------------------------------------------------------

def test_power_sum_rejects_zero():
    with pytest.raises(ValueError):
        power_sum(0)
    with pytest.raises(ValueError):
        closed_form_omega(0)


def test_power_sum_linear_term_vanishes():
    assert power_sum(1).is_zero()


def test_power_sum_quadratic_is_constant():
    assert dict(power_sum(2).coefficients) == {0: Fraction(3, 2)}
    # full closed form: 3*rho**2, angle independent
    assert closed_form_omega(2).evaluate(1.7, 0.3) == pytest.approx(3 * 1.7 ** 2, rel=1e-14)


def test_power_sum_inverse_square():
    assert dict(power_sum(-2).coefficients) == {-2: Fraction(9)}
    rho, phi = 1.3, 0.4
    expected = 9.0 / (2.0 * rho ** 2 * math.sin(3 * phi) ** 2)
    assert closed_form_omega(-2).evaluate(rho, phi) == pytest.approx(expected, rel=1e-14)


def test_sixth_power_table():
    # (3/4)*rho**6*(9 + 2 t**2), i.e. poly (27/32, 3/16) against (sqrt2)**6
    assert dict(power_sum(6).coefficients) == {0: Fraction(27, 32), 2: Fraction(3, 16)}


def test_negative_family_ratios():
    # ratio of p_{-k} to its own leading Laurent term (-3/t)**k
    def ratio(k):
        poly = power_sum(-k)
        return {p: c for p, c in poly.shifted(k).scaled(Fraction(-1, 3) ** k).coefficients.items()}

    assert ratio(3) == {0: Fraction(1), 2: Fraction(-4, 9)}
    assert ratio(4) == {0: Fraction(1), 2: Fraction(-16, 27)}
    assert ratio(5) == {0: Fraction(1), 2: Fraction(-20, 27)}
    # Brute-force-validated coefficients (see the identity-agreement tests).
    assert ratio(6) == {0: Fraction(1), 2: Fraction(-8, 9), 4: Fraction(16, 243)}


# -- closed forms vs brute force ---------------------------------------------

def test_brute_force_examples():
    rho, phi = 1.0, MID
    assert brute_force_omega(2, PolarConfig(1.37, 0.21)) == pytest.approx(3 * 1.37 ** 2, rel=1e-12)
    assert brute_force_omega(3, PolarConfig(rho, phi)) == pytest.approx(1.5 * SQRT2, rel=1e-12)
    assert brute_force_omega(-1, PolarConfig(rho, phi)) == pytest.approx(-3.0 / SQRT2, rel=1e-12)


def test_brute_force_rejects_zero_exponent():
    with pytest.raises(ValueError):
        brute_force_omega(0, PolarConfig(1.0, 0.3))


def test_brute_force_singular_guard():
    with pytest.raises(SingularConfigurationError):
        brute_force_omega(-2, PolarConfig(1.0, 1e-14))
    # positive exponents never raise
    brute_force_omega(2, PolarConfig(1.0, 0.0))


def test_closed_equals_brute_over_full_exponent_range():
    rng = np.random.default_rng(7)
    ms = [m for m in range(-12, 14) if m != 0]
    forms = {m: closed_form_omega(m) for m in ms}
    for _ in range(1000):
        rho = float(rng.uniform(0.3, 3.0))
        phi = float(rng.uniform(0.01, math.pi / 3 - 0.01))
        for m in ms:
            closed = forms[m].evaluate(rho, phi)
            brute = brute_force_omega(m, PolarConfig(rho, phi))
            assert abs(closed - brute) / (1.0 + abs(brute)) < 1e-12


def test_parity_structure():
    for m in range(-12, 14):
        if m == 0:
            continue
        poly = power_sum(m)
        if m == 1:
            assert poly.is_zero()
            continue
        powers = list(poly.coefficients)
        assert all(p % 2 == m % 2 for p in powers)
        if m > 0:
            assert min(powers) >= 0
        else:
            assert min(powers) == m


@pytest.mark.parametrize("M", range(1, 9))
def test_even_constant_term(M):
    # coefficient of t**0 in the full form over rho**(2M)
    constant = power_sum(2 * M).coefficient(0) * Fraction(2) ** M
    assert constant == Fraction(3) ** M / Fraction(2) ** (M - 1)


@pytest.mark.parametrize("M", range(1, 7))
def test_odd_leading_coefficient(M):
    # full coefficient of t over rho**(2M+1) is sqrt2*(2M+1)*3**(M-1)/2**M;
    # the exact statement divides out the surd: p[1] = (2M+1)*3**(M-1)/4**M
    lead = power_sum(2 * M + 1).coefficient(1)
    assert lead == Fraction(2 * M + 1) * Fraction(3) ** (M - 1) / Fraction(4) ** M


@pytest.mark.parametrize("M", range(1, 8))
def test_odd_highest_power(M):
    n_cap = (M - 1) // 3
    assert power_sum(2 * M + 1).max_power == 2 * n_cap + 1


@pytest.mark.parametrize("k", range(1, 9))
def test_negative_family_unit_constant(k):
    ratio = power_sum(-k).shifted(k).scaled(Fraction(-1, 3) ** k)
    assert ratio.coefficient(0) == 1
    assert all(p >= 0 and p % 2 == 0 for p in ratio.coefficients)


# -- PotentialSpec ------------------------------------------------------------

def test_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec(((0, 1.0),))
    with pytest.raises(ValueError):
        PotentialSpec(((2, float("nan")),))
    with pytest.raises(ValueError):
        PotentialSpec(((2, 0.0),))  # nothing survives
    merged = PotentialSpec(((2, 1.0), (2, 2.0), (-2, 0.5)))
    assert merged.terms == ((-2, 0.5), (2, 3.0))


def test_named_families():
    calogero = PotentialSpec.calogero(omega=2.0, nu=1.0)
    assert calogero.terms == ((-2, 2.0), (2, 4.0))
    sc = PotentialSpec.spiked_cubic(alpha2=1.0, beta2=1.0)
    assert sc.coupling(3) == pytest.approx(SQRT2 / 3.0)
    assert sc.coupling(-2) == pytest.approx(2.0 / 9.0)
    sqao = PotentialSpec.spiked_quartic(omega=1.0, lam=0.1, nu=10.0)
    assert sqao.exponents == (-2, 2, 4)


def test_evaluate_calogero_midline():
    omega, nu, rho = 1.3, 2.0, 0.9
    spec = PotentialSpec.calogero(omega, nu)
    expected = 3 * omega ** 2 * rho ** 2 + 4.5 * nu * (nu + 1) / rho ** 2
    assert evaluate_potential(spec, rho, MID) == pytest.approx(expected, rel=1e-13)


def test_evaluate_cubic_spiked_midline():
    gamma, nu, rho = 0.8, 3.0, 1.4
    spec = PotentialSpec(((3, gamma), (-2, nu * (nu + 1))))
    expected = 1.5 * SQRT2 * gamma * rho ** 3 + 4.5 * nu * (nu + 1) / rho ** 2
    assert evaluate_potential(spec, rho, MID) == pytest.approx(expected, rel=1e-13)


def test_evaluate_regular_spec_at_boundary():
    spec = PotentialSpec(((2, 1.0), (4, 0.5)))
    value = evaluate_potential(spec, 1.0, 0.0)
    assert math.isfinite(value)
    assert value == pytest.approx(3.0 + 0.5 * 4.5, rel=1e-13)


def test_evaluate_matches_term_sum_brute():
    rng = np.random.default_rng(11)
    spec = PotentialSpec(((3, 0.7), (-2, 1.9), (5, 0.2)))
    for _ in range(200):
        rho = float(rng.uniform(0.4, 2.0))
        phi = float(rng.uniform(0.02, math.pi / 3 - 0.02))
        brute = sum(c * brute_force_omega(m, PolarConfig(rho, phi)) for m, c in spec.terms)
        assert evaluate_potential(spec, rho, phi) == pytest.approx(brute, rel=1e-12)


def test_evaluate_vectorized_matches_scalar():
    spec = PotentialSpec.calogero(1.0, 5.0)
    rho = np.linspace(0.5, 2.0, 7)
    phi = np.linspace(0.2, 0.9, 7)
    vec = evaluate_potential(spec, rho, phi)
    scalars = [evaluate_potential(spec, float(r), float(p)) for r, p in zip(rho, phi)]
    assert np.allclose(vec, scalars, rtol=1e-14)


def test_singular_guard_on_eval():
    spec = PotentialSpec.calogero(1.0, 1.0)
    with pytest.raises(SingularConfigurationError):
        evaluate_potential(spec, 1.0, 0.0)


# -- partial derivatives ------------------------------------------------------

# Richardson-extrapolated central differences.  The base steps balance
# truncation against float64 cancellation: second derivatives need a much
# larger step than first ones to stay below 1e-6 relative noise.

def _fd1(f, x, h=1e-5):
    d = lambda hh: (f(x + hh) - f(x - hh)) / (2 * hh)
    return (4 * d(h / 2) - d(h)) / 3


def _fd2(f, x, h=6e-4):
    d = lambda hh: (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh)
    return (4 * d(h / 2) - d(h)) / 3


def _fd_cross(f, x, y, h=6e-4):
    def d(hh):
        return (f(x + hh, y + hh) - f(x + hh, y - hh)
                - f(x - hh, y + hh) + f(x - hh, y - hh)) / (4 * hh * hh)

    return (4 * d(h / 2) - d(h)) / 3


def test_partials_match_finite_differences():
    rng = np.random.default_rng(23)
    specs = [
        PotentialSpec.calogero(1.1, 2.3),
        PotentialSpec.spiked_cubic(1.2, 0.8),
        PotentialSpec.spiked_quartic(0.9, 0.3, 1.7),
        PotentialSpec(((5, 0.4), (-4, 1.5))),
    ]
    for spec in specs:
        for _ in range(5):
            rho = float(rng.uniform(0.7, 1.8))
            phi = float(rng.uniform(0.15, math.pi / 3 - 0.15))
            parts = potential_partials(spec, rho, phi)
            f_rho = lambda r: evaluate_potential(spec, r, phi)
            f_phi = lambda p: evaluate_potential(spec, rho, p)
            checks = [
                (parts.value, evaluate_potential(spec, rho, phi)),
                (parts.rho, _fd1(f_rho, rho)),
                (parts.phi, _fd1(f_phi, phi)),
                (parts.rho_rho, _fd2(f_rho, rho)),
                (parts.phi_phi, _fd2(f_phi, phi)),
                (parts.rho_phi, _fd_cross(lambda r, p: evaluate_potential(spec, r, p), rho, phi)),
            ]
            for analytic, numeric in checks:
                assert abs(analytic - numeric) <= 1e-6 * (1.0 + abs(analytic))


def test_angular_derivative_vanishes_on_midline():
    # zero up to the rounding of pi/6 itself (cos(3*phi) ~ 1e-16 there)
    parts = potential_partials(PotentialSpec(((3, 1.0),)), 1.3, MID)
    assert abs(parts.phi) < 1e-13 * (1.0 + abs(parts.value))


def test_calogero_midline_angular_curvature():
    omega, nu = 1.0, 4.0
    spec = PotentialSpec.calogero(omega, nu)
    radius = (1.5 * nu * (nu + 1) / omega ** 2) ** 0.25
    parts = potential_partials(spec, radius, MID)
    assert parts.phi_phi == pytest.approx(81.0 * nu * (nu + 1) / radius ** 2, rel=1e-12)


# -- caching and rendering ----------------------------------------------------

def test_memo_table_concurrent_access():
    power_sum.cache_clear()
    results = []

    def worker():
        results.append(power_sum(37))
        results.append(power_sum(-19))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert all(r == results[0] for r in results[::2])
    assert all(r == results[1] for r in results[1::2])


def test_form_json_schema():
    payload = form_to_json_dict(closed_form_omega(6))
    assert payload == {
        "m": 6,
        "sqrt2_power": 6,
        "coefficients": {"0": "27/32", "2": "3/16"},
    }


@settings(max_examples=60, deadline=None)
@given(radius, wedge_phi, st.integers(min_value=-8, max_value=9).filter(lambda m: m != 0))
def test_closed_form_property(rho, phi, m):
    closed = closed_form_omega(m).evaluate(rho, phi)
    brute = brute_force_omega(m, PolarConfig(rho, phi))
    assert abs(closed - brute) / (1.0 + abs(brute)) < 1e-12
