import math

import numpy as np
import pytest

from casimir_planck import casimir
from casimir_planck.casimir import (
    ModeSpectrum,
    PlateGeometry,
    RegulatorConfig,
    delta_I_abel_plana,
    delta_I_log_route,
    energy_density,
    energy_density_closed_form,
    pressure,
    pressure_closed_form,
    pressure_via_derivative,
    regulated_finite_part,
    regulated_mode_sum,
    total_force,
)
from casimir_planck.numerics import ConvergenceError
from casimir_planck.quantities import AREA, LENGTH, TEMPERATURE, DimensionError, Quantity

PI = math.pi

# l * Delta I at l * k_perp = x, from 30-digit mpmath quadrature of the log integrand
DELTA_I_ORACLE = {
    0.05: -0.238691926995174020851981458307,
    0.1: -0.218266729835755479270060388373,
    0.5: -0.109732946555067482165607240964,
    1.0: -0.046663785039622046351688378325,
    5.0: -0.0000296809129481512826002715421106,
    10.0: -0.00000000187263551405470402197888875512,
}

# -pi^2 hbar c / (240 l^4) at l = 1 um with CODATA-2018 constants
P_1UM_PA = -1.3001257724477536e-03


def rel(a, b):
    return abs(a - b) / abs(b)


def test_plate_geometry():
    g = PlateGeometry(1.0)
    assert g.transverse_area is None
    np.testing.assert_allclose(g.k_z([0, 1, 2]), [0.0, PI, 2 * PI])
    assert PlateGeometry(Quantity(1e-6, LENGTH)).gap == 1e-6
    assert PlateGeometry(1e-6, Quantity(1e-4, AREA)).transverse_area == 1e-4
    with pytest.raises(ValueError):
        PlateGeometry(0.0)
    with pytest.raises(DimensionError):
        PlateGeometry(Quantity(1.0, TEMPERATURE))
    with pytest.raises(DimensionError):
        PlateGeometry(1.0, Quantity(1.0, LENGTH))


def test_mode_spectrum():
    m = ModeSpectrum(k_perp=0.7, gap=1.0)
    k = m.k(np.arange(50))
    assert k[0] == 0.7
    assert np.all(np.diff(k) > 0)
    np.testing.assert_array_equal(ModeSpectrum.degeneracy([0, 1, 5]), [1, 2, 2])
    with pytest.raises(ValueError):
        ModeSpectrum(k_perp=-1.0, gap=1.0)


@pytest.mark.parametrize("x", sorted(DELTA_I_ORACLE))
def test_delta_I_routes_match_oracle(x):
    exact = DELTA_I_ORACLE[x]
    assert rel(delta_I_log_route(x, 1.0), exact) <= 1e-12
    assert rel(delta_I_abel_plana(x, 1.0), exact) <= 1e-12


@pytest.mark.parametrize("x", [0.05, 0.1, 0.5, 1.0, 5.0, 10.0])
@pytest.mark.parametrize("l", [0.3, 1.0, 7.0, 1e-6])
def test_delta_I_route_equality(x, l):
    a = delta_I_log_route(x / l, l)
    b = delta_I_abel_plana(x / l, l)
    assert rel(a, b) <= 1e-8


def test_delta_I_scaling():
    for k_perp, l in [(0.3, 2.0), (4.0, 0.1)]:
        assert rel(delta_I_log_route(k_perp, l), delta_I_log_route(l * k_perp, 1.0) / l) <= 1e-12


def test_delta_I_zero_k_perp():
    assert delta_I_abel_plana(0.0, 1.0) == pytest.approx(-PI / 12, rel=1e-12)
    assert delta_I_log_route(0.0, 1.0) == pytest.approx(-PI / 12, rel=1e-12)


def test_delta_I_vanishes_for_large_k_perp():
    assert delta_I_log_route(400.0, 1.0) == 0.0
    assert delta_I_abel_plana(400.0, 1.0) == 0.0
    assert abs(delta_I_log_route(100.0, 1.0)) < 1e-80
    assert all(delta_I_log_route(x, 1.0) <= 0 for x in (0.0, 0.5, 3.0, 30.0))


def test_energy_density_examples():
    assert energy_density(1.0) == pytest.approx(-PI ** 2 / 720, rel=1e-10)
    assert energy_density(1.0) == pytest.approx(-1.3707783e-2, abs=1e-9)
    assert energy_density(2.0) == pytest.approx(-0.000856736493150117935662716232628, rel=1e-10)
    assert energy_density(1.0) * 1.0 == pytest.approx(-PI ** 2 / 720, rel=1e-10)


def test_pressure_examples():
    assert pressure(1.0) == pytest.approx(-4.1123352e-2, abs=1e-9)
    si = pressure(Quantity(1e-6, LENGTH)) * 1.054571817e-34 * 2.99792458e8
    assert si == pytest.approx(P_1UM_PA, rel=1e-12)
    for l in (0.2, 1.0, 13.0):
        assert pressure(l) / energy_density(l) == pytest.approx(3.0, rel=1e-10)


@pytest.mark.parametrize("l", [0.25, 0.5, 1, 2])
def test_closed_forms(l):
    assert rel(energy_density(l), energy_density_closed_form(l)) <= 1e-8
    assert rel(pressure(l), pressure_closed_form(l)) <= 1e-8


@pytest.mark.parametrize("alpha", [0.5, 2, 10])
def test_scaling_laws(alpha):
    l = 0.8
    assert rel(pressure(alpha * l), alpha ** -4 * pressure(l)) <= 1e-10
    assert rel(energy_density(alpha * l), alpha ** -4 * energy_density(l)) <= 1e-10


def test_signs():
    for l in np.geomspace(1e-9, 1e3, 9):
        assert energy_density(l) < 0
        assert pressure(l) < 0


@pytest.mark.parametrize("l, expected", [(1.0, -PI ** 2 / 240), (0.5, -16 * PI ** 2 / 240), (1e-6, -PI ** 2 / 240e-24)])
def test_pressure_via_derivative(l, expected):
    assert rel(pressure_via_derivative(l), expected) <= 1e-6
    assert rel(pressure_via_derivative(l), pressure(l)) <= 1e-6


def test_regulated_mode_sum_l1():
    r = regulated_mode_sum(1.0)
    assert r.lambdas == (0.2, 0.1, 0.05, 0.025)
    assert all(math.isfinite(v) for v in r.values)
    # regulated values approach the limit monotonically from above
    assert all(a > b for a, b in zip(r.values, r.values[1:]))
    assert rel(r.extrapolated, -PI ** 2 / 720) <= 1e-3


def test_regulated_finite_part_l2():
    assert rel(regulated_finite_part(2.0), -PI ** 2 / 720 / 8) <= 1e-3


def test_regulated_custom_lambdas():
    reg = RegulatorConfig(lambdas=(0.4, 0.2, 0.1, 0.05))
    assert rel(regulated_finite_part(1.0, reg), -PI ** 2 / 720) <= 1e-3


def test_regulated_single_lambda_is_finite():
    # both pieces grow like 1/lambda^3; their difference stays O(1)
    v = casimir._regulated_energy_per_area(1.0, 0.01, casimir.DEFAULT_QUADRATURE)
    assert math.isfinite(v) and abs(v + PI ** 2 / 720) < 1e-3


def test_regulated_residual_error():
    reg = RegulatorConfig(lambdas=(2.0, 1.5, 1.0, 0.8), tolerance=1e-9)
    with pytest.raises(ConvergenceError):
        regulated_finite_part(1.0, reg)


def test_regulator_config_validation():
    with pytest.raises(ValueError):
        RegulatorConfig(lambdas=(0.1, 0.2))
    with pytest.raises(ValueError):
        RegulatorConfig(lambdas=(0.1, -0.2))
    with pytest.raises(ValueError):
        RegulatorConfig(lambdas=(0.2, 0.1), extrapolation_order=3).resolve(1.0)


def test_total_force():
    g = PlateGeometry(1e-6, 1e-4)
    f_si = total_force(g) * 1.054571817e-34 * 2.99792458e8
    assert f_si == pytest.approx(P_1UM_PA * 1e-4, rel=1e-12)
    assert total_force(PlateGeometry(1.0, 0.0)) == 0.0
    assert total_force(PlateGeometry(1.0, 2.0)) == 2 * total_force(PlateGeometry(1.0, 1.0))
    with pytest.raises(ValueError):
        total_force(PlateGeometry(1.0))


def test_rejects_non_length():
    with pytest.raises(DimensionError):
        pressure(Quantity(300.0, TEMPERATURE))
    with pytest.raises(ValueError):
        energy_density(-1.0)
