import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_planck.numerics import (
    APERY,
    ConvergenceError,
    DerivativeConfig,
    QuadratureConfig,
    abel_plana,
    abel_plana_branch_term,
    bose_integral,
    bose_integral_closed_form,
    coth_series_check,
    derivative,
    integrate,
    integrate_to_infinity,
    log1mexp,
    log_bose_integral,
    zeta_value,
)

PI = math.pi


def rel(a, b):
    return abs(a - b) / abs(b)


# --- oracles -------------------------------------------------------------


def zeta_partial_sum_oracle(s, N=20000):
    """Partial sum plus the Euler-Maclaurin tail through the f'(N) term."""
    head = math.fsum(1.0 / n ** s for n in range(N, 0, -1))
    tail = 1.0 / ((s - 1) * N ** (s - 1)) - 0.5 / N ** s + s / (12.0 * N ** (s + 1))
    return head + tail


def log_bose_series_oracle(a, terms=5000):
    """-sum_n 2/(n^4 a^3), tail by integral."""
    head = math.fsum(2.0 / (n ** 4 * a ** 3) for n in range(terms, 0, -1))
    return -(head + 2.0 / (3.0 * terms ** 3 * a ** 3))


# --- quadrature ----------------------------------------------------------


def test_integrate_polynomial_and_orientation():
    assert integrate(lambda x: x ** 2, 0.0, 3.0) == pytest.approx(9.0, rel=1e-14)
    assert integrate(lambda x: x ** 2, 3.0, 0.0) == pytest.approx(-9.0, rel=1e-14)
    assert integrate(np.sin, 1.0, 1.0) == 0.0


def test_integrate_endpoint_log_singularity():
    # int_0^1 ln x dx = -1
    assert integrate(np.log, 0.0, 1.0) == pytest.approx(-1.0, rel=1e-12)


def test_integrate_scalar_callable_is_wrapped():
    assert integrate(lambda x: math.exp(-x), 0.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-13)


def test_integrate_to_infinity():
    assert integrate_to_infinity(lambda x: 1 / (1 + x) ** 2, 0.0) == pytest.approx(1.0, rel=1e-13)
    assert integrate_to_infinity(lambda x: np.exp(-x), 2.0) == pytest.approx(math.exp(-2), rel=1e-13)


def test_integrate_reports_non_finite():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: 1.0 / (x - 0.5) if abs(x - 0.5) > 1e-3 else math.nan, 0.0, 1.0)


def test_integrate_oscillatory_needs_bisection():
    exact = (1 - math.cos(2000.0)) / 200.0
    assert integrate(lambda x: np.sin(200 * x), 0.0, 10.0) == pytest.approx(exact, rel=1e-9)


def test_integrate_subdivision_budget():
    cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=1, max_level=3)
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sin(200 * x), 0.0, 10.0, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
    with pytest.raises(ValueError):
        DerivativeConfig(initial_step=-1.0)
    with pytest.raises(ValueError):
        DerivativeConfig(richardson_levels=0)


def test_log1mexp_both_regimes():
    x = np.array([1e-30, 1e-8, 0.5, 1.0, 20.0, 600.0])
    with mpmath.workdps(60):
        expected = [float(mpmath.log1p(-mpmath.exp(-mpmath.mpf(float(v))))) for v in x]
    np.testing.assert_allclose(log1mexp(x), expected, rtol=1e-15)


# --- Bose integrals ------------------------------------------------------


def test_bose_integral_examples():
    assert bose_integral(4, 1) == pytest.approx(PI ** 4 / 15, rel=1e-12)
    assert bose_integral(4, 2) == pytest.approx(PI ** 4 / 240, rel=1e-12)
    # independent high-precision quadrature
    assert bose_integral(4, 1) == pytest.approx(6.49393940226682914909602217925, rel=1e-13)
    assert bose_integral(4, 2) == pytest.approx(0.405871212641676821818501386203, rel=1e-13)


def test_bose_integral_vanishes_for_large_a():
    assert bose_integral(4, 1e6) < 1e-22


@pytest.mark.parametrize("s", [2, 3, 4])
@pytest.mark.parametrize("a", [0.5, 1, 2, 5])
def test_bose_integral_closed_form_grid(s, a):
    exact = math.gamma(s) * zeta_value(s) / a ** s
    assert rel(bose_integral(s, a), exact) <= 1e-8


@pytest.mark.parametrize("s", [1.5, 2.5, 7.0])
def test_bose_integral_non_integer_against_mpmath(s):
    exact = float(mpmath.gamma(s) * mpmath.zeta(s))
    assert rel(bose_integral(s, 1.0), exact) <= 1e-10
    assert rel(bose_integral_closed_form(s, 1.0), exact) <= 1e-13


@pytest.mark.parametrize("s, a", [(1.0, 1.0), (0.5, 1.0), (4.0, 0.0), (4.0, -1.0)])
def test_bose_integral_domain(s, a):
    with pytest.raises(ValueError):
        bose_integral(s, a)


def test_log_bose_examples():
    assert log_bose_integral(1) == pytest.approx(log_bose_series_oracle(1), rel=1e-10)
    assert log_bose_integral(1) == pytest.approx(-2.1646465, abs=1e-7)
    assert log_bose_integral(2) == pytest.approx(log_bose_series_oracle(2), rel=1e-10)
    assert log_bose_integral(2) == pytest.approx(-0.2705808, abs=1e-7)
    assert abs(log_bose_integral(1e6)) < 1e-17


@pytest.mark.parametrize("a", [0.1, 0.5, 1, 2, 5, 30])
def test_log_bose_scaling(a):
    assert rel(log_bose_integral(a) * a ** 3, -PI ** 4 / 45) <= 1e-8


def test_log_bose_domain():
    with pytest.raises(ValueError):
        log_bose_integral(0.0)


# --- zeta ------------------------------------------------------------------


@pytest.mark.parametrize("s, approx", [(2, 1.6449341), (3, 1.2020569), (4, 1.0823232)])
def test_zeta_against_partial_sums(s, approx):
    assert zeta_value(s) == pytest.approx(zeta_partial_sum_oracle(s), rel=1e-12)
    assert zeta_value(s) == pytest.approx(approx, abs=1e-7)


def test_zeta_literals():
    assert zeta_value(2) == PI ** 2 / 6
    assert zeta_value(4) == PI ** 4 / 90
    assert zeta_value(3) == APERY == 1.2020569031595942


@pytest.mark.parametrize("s", [1, 5, 0, 2.5])
def test_zeta_unsupported(s):
    with pytest.raises(ValueError):
        zeta_value(s)


# --- Abel-Plana ------------------------------------------------------------


def test_abel_plana_geometric():
    r = abel_plana(lambda x: np.exp(-x), lambda x: 2 * np.sin(x))
    brute = math.fsum(math.exp(-n) for n in range(800))
    assert r.total == pytest.approx(brute, rel=1e-12)
    assert r.total == pytest.approx(1.5819767, abs=1e-7)
    assert r.total == r.integral_term + r.half_f0 + r.branch_term


def test_abel_plana_inverse_square():
    r = abel_plana(lambda x: 1 / (x + 1) ** 2, lambda x: 4 * x / (1 + x * x) ** 2)
    N = 10 ** 6
    brute = math.fsum(1.0 / (n + 1.0) ** 2 for n in range(N - 1, -1, -1)) + 1.0 / (N + 1) - 0.5 / (N + 1) ** 2
    assert rel(r.total, brute) <= 1e-8
    assert r.integral_term == pytest.approx(1.0, rel=1e-13)
    assert r.half_f0 == 0.5
    # mpmath quadrature of the branch integral
    assert r.branch_term == pytest.approx(0.144934066848226436472415166646, rel=1e-12)


def test_abel_plana_zero():
    r = abel_plana(lambda x: 0 * x, lambda x: 0 * x)
    assert r == (0.0, 0.0, 0.0, 0.0)


def test_abel_plana_non_finite_term():
    with pytest.raises(ConvergenceError):
        with np.errstate(all="ignore"):
            abel_plana(lambda x: 1.0 / x, lambda x: 0 * x)


def test_branch_term_with_onset_smooths_sqrt():
    # int_1^inf -2 sqrt(x^2-1)/(e^{2 pi x}-1) dx against mpmath
    got = abel_plana_branch_term(lambda x: -2 * np.sqrt(np.maximum(x * x - 1, 0)), onset=1.0)
    exact = float(-2 * mpmath.quad(lambda x: mpmath.sqrt(x * x - 1) / mpmath.expm1(2 * mpmath.pi * x), [1, 2, mpmath.inf]))
    assert rel(got, exact) <= 1e-12


# --- coth --------------------------------------------------------------


def test_coth_examples():
    c = coth_series_check(1.0, 1000)
    assert c.target == pytest.approx(1.3130353, abs=1e-7)
    assert abs(c.partial - c.target) <= 2.03e-4
    assert c.tail_bound == pytest.approx(2 / (PI ** 2 * 1000))
    c5 = coth_series_check(5.0, 1000)
    assert c5.target == pytest.approx(0.2000182, abs=1e-7)


def test_coth_converges():
    errs = [abs(c.partial - c.target) for c in (coth_series_check(1.0, N) for N in (10, 100, 1000, 10000))]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 3e-5


@settings(max_examples=60)
@given(st.floats(0.01, 20.0) | st.floats(-20.0, -0.01), st.integers(1, 3000))
def test_coth_error_within_bound(z, N):
    c = coth_series_check(z, N)
    assert abs(c.partial - c.target) <= c.tail_bound


def test_coth_errors():
    with pytest.raises(ValueError):
        coth_series_check(0.0, 10)
    with pytest.raises(ValueError):
        coth_series_check(1.0, 0)


# --- derivative ----------------------------------------------------------


def test_derivative_examples():
    assert derivative(lambda x: x ** 2, 1.0) == pytest.approx(2.0, rel=1e-14)
    assert derivative(lambda x: x ** -4, 1.0) == pytest.approx(-4.0, rel=1e-10)
    assert abs(derivative(math.exp, 0.0) - 1.0) <= 1e-10


@pytest.mark.parametrize("p", [-4, -3, 1, 2, 4])
def test_derivative_power_laws(p):
    assert rel(derivative(lambda x: x ** p, 1.0), p) <= 1e-8


@given(st.floats(0.1, 10.0))
def test_derivative_sin(x):
    assert abs(derivative(math.sin, x) - math.cos(x)) <= 1e-9


def test_derivative_non_finite():
    with pytest.raises(ConvergenceError):
        derivative(lambda x: math.inf, 1.0)
