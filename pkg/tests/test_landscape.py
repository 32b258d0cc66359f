import math

import numpy as np
import pytest
from scipy.optimize import minimize

from spikedtrio.errors import (
    CriticalRadiusNotFound,
    NoMinimumError,
    NotAMinimumError,
)
from spikedtrio.landscape import (
    CONFINING,
    MID_ANGLE,
    NON_CONFINING,
    angular_minima,
    classify,
    confinement_bound,
    critical_radius,
    hessian_at_minimum,
    landscape_report,
    symmetry_line_minimum,
)
from spikedtrio.trigform import PotentialSpec, evaluate_potential

SQRT2 = math.sqrt(2.0)


def sc_spec(a2=1.0, b2=1.0):
    return PotentialSpec.spiked_cubic(alpha2=a2, beta2=b2)


# -- classification -----------------------------------------------------------

def test_classify_examples():
    assert classify(PotentialSpec(((3, 1.0), (-2, 12.0)))) == CONFINING
    assert classify(PotentialSpec(((3, -1.0),))) == NON_CONFINING
    assert classify(PotentialSpec(((2, 1.0),))) == CONFINING
    assert classify(PotentialSpec(((-2, 1.0),))) == NON_CONFINING
    assert classify(PotentialSpec(((2, 1.0), (4, -2.0)))) == NON_CONFINING


# -- symmetry-line minimum ----------------------------------------------------

def test_unit_radius_when_couplings_balance():
    radius, _ = symmetry_line_minimum(sc_spec(a2=2.0, b2=3.0))  # 2*b2 = 3*a2
    assert radius == pytest.approx(1.0, rel=1e-12)


def test_calogero_radius_formula():
    omega, nu = 1.3, 7.0
    radius, value = symmetry_line_minimum(PotentialSpec.calogero(omega, nu))
    expected = (1.5 * nu * (nu + 1) / omega ** 2) ** 0.25
    assert radius == pytest.approx(expected, rel=1e-12)
    assert value == pytest.approx(6.0 * omega ** 2 * expected ** 2, rel=1e-12)


@pytest.mark.parametrize("a2,b2", [(1.0, 1.0), (0.7, 2.9), (3.1, 0.4)])
def test_cubic_spiked_radius_and_depth(a2, b2):
    radius, value = symmetry_line_minimum(sc_spec(a2, b2))
    expected = (2.0 * b2 / (3.0 * a2)) ** 0.2
    assert radius == pytest.approx(expected, rel=1e-12)
    assert value == pytest.approx(2.5 * a2 * expected ** 3, rel=1e-12)


def test_no_minimum_without_spike():
    with pytest.raises(NoMinimumError):
        symmetry_line_minimum(PotentialSpec(((2, 1.0),)))


def test_no_minimum_when_non_confining():
    with pytest.raises(NoMinimumError):
        symmetry_line_minimum(PotentialSpec(((3, -1.0), (-2, 1.0))))


# -- angular minima -----------------------------------------------------------

def test_single_minimum_below_critical_radius():
    spec = sc_spec()
    rho0 = 2.0 ** 0.2
    minima = angular_minima(spec, 0.9 * rho0)
    assert len(minima) == 1
    assert minima[0] == pytest.approx(MID_ANGLE, abs=1e-9)


def test_two_symmetric_minima_above_critical_radius():
    spec = sc_spec()
    rho0 = 2.0 ** 0.2
    minima = angular_minima(spec, 2.0 * rho0)
    assert len(minima) == 2
    lo, hi = minima
    assert lo < MID_ANGLE < hi
    assert lo == pytest.approx(math.pi / 3 - hi, abs=1e-9)


def test_pure_calogero_single_minimum_any_radius():
    spec = PotentialSpec.calogero(1.0, 3.0)
    for rho in (0.2, 1.0, 5.0, 40.0):
        minima = angular_minima(spec, rho)
        assert len(minima) == 1
        assert minima[0] == pytest.approx(MID_ANGLE, abs=1e-9)


def test_flat_angular_profile_has_no_interior_minima():
    assert angular_minima(PotentialSpec(((2, 1.0),)), 1.0) == []


def test_stationarity_condition_off_axis():
    # the off-axis minima satisfy sin(3*phi)**3 = 2*b2/(a2*rho**5)
    a2, b2 = 1.3, 0.9
    spec = sc_spec(a2, b2)
    rho0 = (2.0 * b2 / a2) ** 0.2
    for rho in (1.5 * rho0, 3.0 * rho0):
        for phi in angular_minima(spec, rho):
            assert math.sin(3 * phi) ** 3 == pytest.approx(
                2.0 * b2 / (a2 * rho ** 5), rel=1e-8)


# -- critical radius ----------------------------------------------------------

def test_critical_radius_closed_form():
    assert critical_radius(sc_spec(1.0, 1.0)) == pytest.approx(2.0 ** 0.2, rel=1e-12)


def test_critical_radius_scan_matches_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(5):
        a2 = float(rng.uniform(0.5, 4.0))
        b2 = float(rng.uniform(0.5, 4.0))
        scanned = critical_radius(sc_spec(a2, b2), method="scan")
        closed = (2.0 * b2 / a2) ** 0.2
        assert abs(scanned - closed) / closed < 1e-6


def test_critical_radius_not_applicable_for_calogero():
    with pytest.raises(CriticalRadiusNotFound):
        critical_radius(PotentialSpec.calogero(1.0, 3.0))


def test_minima_count_transition_is_monotone():
    spec = sc_spec(1.0, 1.0)
    rho0 = 2.0 ** 0.2
    for factor in (0.3, 0.6, 0.9, 0.999):
        assert len(angular_minima(spec, factor * rho0)) == 1
    for factor in (1.001, 1.5, 3.0, 8.0):
        assert len(angular_minima(spec, factor * rho0)) == 2


# -- curvatures ---------------------------------------------------------------

def test_calogero_curvatures():
    omega, nu = 1.0, 6.0
    spec = PotentialSpec.calogero(omega, nu)
    radius, _ = symmetry_line_minimum(spec)
    k_rho, k_eta = hessian_at_minimum(spec, radius, MID_ANGLE)
    assert k_rho == pytest.approx(12.0 * omega ** 2, rel=1e-12)
    assert k_eta == pytest.approx(27.0 * omega ** 2, rel=1e-12)


def test_cubic_spiked_curvatures():
    a2 = 1.4
    spec = sc_spec(a2, 2.2)
    radius, _ = symmetry_line_minimum(spec)
    k_rho, k_eta = hessian_at_minimum(spec, radius, MID_ANGLE)
    assert k_rho == pytest.approx(7.5 * a2 * radius, rel=1e-12)
    assert k_eta == pytest.approx(9.0 * a2 * radius, rel=1e-12)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(17)
    for _ in range(4):
        spec = PotentialSpec(((2, float(rng.uniform(0.5, 2.0))),
                              (3, float(rng.uniform(0.1, 1.0))),
                              (-2, float(rng.uniform(1.0, 5.0)))))
        radius, _ = symmetry_line_minimum(spec)
        k_rho, k_eta = hessian_at_minimum(spec, radius, MID_ANGLE)
        h = 6e-4 * radius

        def d2(f, x, hh):
            two = (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh)
            one = (f(x + hh / 2) - 2 * f(x) + f(x - hh / 2)) / (hh * hh / 4)
            return (4 * one - two) / 3

        fd_rho = 0.5 * d2(lambda r: evaluate_potential(spec, r, MID_ANGLE), radius, h)
        fd_eta = 0.5 * d2(lambda p: evaluate_potential(spec, radius, p), MID_ANGLE, 6e-4) / radius ** 2
        assert abs(fd_rho - k_rho) <= 1e-6 * (1.0 + abs(k_rho))
        assert abs(fd_eta - k_eta) <= 1e-6 * (1.0 + abs(k_eta))


def test_hessian_rejects_angular_maximum():
    # above the critical radius the mid-angle is an angular maximum
    spec = sc_spec(1.0, 1.0)
    with pytest.raises(NotAMinimumError):
        hessian_at_minimum(spec, 3.0, MID_ANGLE)


# -- confinement bound --------------------------------------------------------

def test_bound_equals_value_at_merge():
    a2 = b2 = 1.0
    rho0 = 2.0 ** 0.2
    bound = confinement_bound(a2, b2, rho0)
    merged = float(evaluate_potential(sc_spec(a2, b2), rho0, MID_ANGLE))
    assert bound == pytest.approx(merged, rel=1e-9)


def test_bound_below_dense_scan_minimum():
    a2, b2 = 1.0, 1.0
    spec = sc_spec(a2, b2)
    rho = 2.0 * (2.0 ** 0.2)
    phis = np.linspace(1e-4, math.pi / 3 - 1e-4, 10000)
    scan_min = float(np.min(evaluate_potential(spec, rho, phis)))
    assert confinement_bound(a2, b2, rho) <= scan_min * (1.0 + 1e-9)


def test_bound_scaling():
    bound = confinement_bound(1.3, 0.7, 4.0)
    assert confinement_bound(1.3, 0.7, 8.0) / bound == pytest.approx(2.0 ** (4.0 / 3.0), rel=1e-14)


def test_bound_rejects_small_radius():
    with pytest.raises(ValueError):
        confinement_bound(1.0, 1.0, 0.5 * 2.0 ** 0.2)


def test_bound_matches_off_axis_minimum_value():
    a2, b2 = 2.0, 1.1
    spec = sc_spec(a2, b2)
    rho0 = (2.0 * b2 / a2) ** 0.2
    for rho in (1.2 * rho0, 2.5 * rho0):
        values = [float(evaluate_potential(spec, rho, phi))
                  for phi in angular_minima(spec, rho)]
        assert min(values) == pytest.approx(confinement_bound(a2, b2, rho), rel=1e-9)


# -- absolute minimum against multi-start descent -----------------------------

@pytest.mark.parametrize("spec", [
    PotentialSpec.calogero(1.0, 5.0),
    sc_spec(1.0, 2.0),
    PotentialSpec(((2, 0.5), (3, 0.3), (-2, 8.0))),
])
def test_absolute_minimum_on_symmetry_line(spec):
    radius, value = symmetry_line_minimum(spec)

    def objective(x):
        return float(evaluate_potential(spec, x[0], x[1]))

    best = None
    rng = np.random.default_rng(31)
    for _ in range(8):
        start = (radius * rng.uniform(0.5, 2.0),
                 rng.uniform(0.1, math.pi / 3 - 0.1))
        res = minimize(objective, start, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    assert best.fun == pytest.approx(value, rel=1e-9)
    assert best.x[0] == pytest.approx(radius, rel=1e-5)
    assert best.x[1] == pytest.approx(MID_ANGLE, abs=1e-5)


# -- report -------------------------------------------------------------------

def test_landscape_report_cubic_spiked():
    report = landscape_report(sc_spec(1.0, 1.0))
    assert report.absolute_minimum.kind == "minimum"
    assert report.absolute_minimum.rho == pytest.approx((2.0 / 3.0) ** 0.2, rel=1e-12)
    assert report.critical_radius == pytest.approx(2.0 ** 0.2, rel=1e-12)
    counts = {rho: len(phis) for rho, phis in report.angular_minima_sample}
    assert set(counts.values()) <= {1, 2}
    payload = report.to_json_dict()
    assert payload["critical_radius"] == report.critical_radius


def test_landscape_report_calogero_has_no_critical_radius():
    report = landscape_report(PotentialSpec.calogero(1.0, 4.0))
    assert report.critical_radius is None
