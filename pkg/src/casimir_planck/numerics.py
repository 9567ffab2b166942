"""Numerical kernel.

Quadrature is a double-exponential (tanh-sinh) rule refined by halving the
step, with interval bisection when a level budget runs out.  The rule never
evaluates the endpoints and clusters nodes there, which is what the
``ln(1 - e^{-x})`` and ``x^{s-2}`` endpoint singularities need.

All integrands must accept a numpy array and return an array of the same
shape; plain scalar callables are wrapped with ``np.vectorize``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import special

__all__ = [
    "ConvergenceError",
    "QuadratureConfig",
    "DerivativeConfig",
    "AbelPlanaResult",
    "CothCheck",
    "integrate",
    "integrate_to_infinity",
    "bose_integral",
    "bose_integral_closed_form",
    "log_bose_integral",
    "log1mexp",
    "log_bose_integral_closed_form",
    "zeta_value",
    "abel_plana",
    "abel_plana_branch_term",
    "coth_series_check",
    "derivative",
]

APERY = 1.2020569031595942


class ConvergenceError(ArithmeticError):
    """A quadrature or extrapolation did not reach its tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Error control for every integral in the package.

    ``tail_cut`` is measured in the dimensionless decay variable: a Bose
    integrand ``x^(s-1)/(e^(a x) - 1)`` is integrated up to ``a x = tail_cut``
    and the remainder is bounded analytically.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2 ** 16
    tail_cut: float = 50.0
    max_level: int = 8

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.tail_cut > 0:
            raise ValueError("tail_cut must be positive")
        if self.max_level < 3:
            raise ValueError("max_level must be >= 3")


@dataclass(frozen=True)
class DerivativeConfig:
    """Central differences with Richardson extrapolation.

    ``initial_step=None`` means ``1e-2 * max(|x|, 1)``.
    """

    initial_step: Optional[float] = None
    richardson_levels: int = 4

    def __post_init__(self):
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if self.richardson_levels < 1:
            raise ValueError("richardson_levels must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()
DEFAULT_DERIVATIVE = DerivativeConfig()


class AbelPlanaResult(NamedTuple):
    integral_term: float
    half_f0: float
    branch_term: float
    total: float


class CothCheck(NamedTuple):
    partial: float
    target: float
    tail_bound: float


def _as_array_fn(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.25, 0.5])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return f
    except (TypeError, ValueError):
        pass
    return np.vectorize(f, otypes=[float])


# --------------------------------------------------------------------------
# tanh-sinh
# --------------------------------------------------------------------------

_T_MAX = 4.0


def _level_abscissae(level: int) -> np.ndarray:
    """t-values first appearing at ``level`` (step 2**-level)."""
    if level == 0:
        return np.arange(-_T_MAX, _T_MAX + 0.5)
    h = 2.0 ** -level
    n = int(_T_MAX / h)
    j = np.arange(-n + 1, n, 2)
    return j * h


def _nodes(t: np.ndarray):
    """Fractional position from the left endpoint, its complement, and weight on [0, 1]."""
    y = 0.5 * math.pi * np.sinh(t)
    left = special.expit(2.0 * y)
    right = special.expit(-2.0 * y)
    w = 0.25 * math.pi * np.cosh(t) / np.cosh(y) ** 2
    return left, right, w


_NODE_CACHE = {}


def _cached_nodes(level: int):
    if level not in _NODE_CACHE:
        _NODE_CACHE[level] = _nodes(_level_abscissae(level))
    return _NODE_CACHE[level]


def _level_sum(f, a: float, b: float, level: int) -> float:
    left, right, w = _cached_nodes(level)
    span = b - a
    x = np.where(left < 0.5, a + span * left, b - span * right)
    keep = (x > a) & (x < b)
    if not keep.all():
        x, w = x[keep], w[keep]
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ConvergenceError(f"integrand is not finite on ({a}, {b})")
    return span * math.fsum(w * fx)


def _tanh_sinh(f, a: float, b: float, cfg: QuadratureConfig, abs_tol: float):
    total = _level_sum(f, a, b, 0)
    estimate = total
    for level in range(1, cfg.max_level + 1):
        total += _level_sum(f, a, b, level)
        prev, estimate = estimate, total * 2.0 ** -level
        err = abs(estimate - prev)
        if level >= 3 and err <= max(abs_tol, cfg.rel_tol * abs(estimate)):
            break
    return estimate, err


def integrate(f: Callable, a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integral of ``f`` over the finite interval ``[a, b]``.

    Intervals that miss the tolerance within ``cfg.max_level`` step halvings
    are bisected, up to ``cfg.max_subdivisions`` pieces in total.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate() needs finite limits; use integrate_to_infinity")
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, cfg)
    f = _as_array_fn(f)

    pieces = 1
    result = []
    stack = [(a, b, cfg.abs_tol)]
    while stack:
        lo, hi, tol = stack.pop()
        value, err = _tanh_sinh(f, lo, hi, cfg, tol)
        if err <= max(tol, cfg.rel_tol * abs(value)):
            result.append(value)
            continue
        pieces += 1
        if pieces > cfg.max_subdivisions:
            raise ConvergenceError(
                f"quadrature on [{a}, {b}] did not converge within {cfg.max_subdivisions} subdivisions"
            )
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, 0.5 * tol))
        stack.append((lo, mid, 0.5 * tol))
    return math.fsum(result)


def integrate_to_infinity(f: Callable, a: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Integral of ``f`` over ``[a, inf)``, split at ``a + 1`` with ``x = a + 1/v`` beyond."""
    f = _as_array_fn(f)

    def mapped(v):
        return f(a + 1.0 / v) / (v * v)

    return integrate(f, a, a + 1.0, cfg) + integrate(mapped, 0.0, 1.0, cfg)


# --------------------------------------------------------------------------
# Bose-type integrals
# --------------------------------------------------------------------------


def _bose_tail_bound(power: float, cut: float) -> float:
    """Bound on int_cut^inf y^power e^{-y} / (1 - e^{-cut}) dy."""
    return special.gamma(power + 1.0) * special.gammaincc(power + 1.0, cut) / -math.expm1(-cut)


def _bounded_cut(power: float, scale: float, cfg: QuadratureConfig) -> float:
    """Smallest doubling of ``cfg.tail_cut`` whose analytic tail bound is below tolerance."""
    cut = cfg.tail_cut
    for _ in range(12):
        if _bose_tail_bound(power, cut) <= max(cfg.abs_tol, cfg.rel_tol * scale) * 1e-2:
            return cut
        cut *= 2.0
    raise ConvergenceError(f"exponential tail bound not met for power {power}")


def bose_integral(s: float, a: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``int_0^inf x^(s-1) / (e^(a x) - 1) dx`` by quadrature.

    Integrated in ``y = a x`` on ``[0, cut]``; the remainder past ``cut`` is
    bounded by ``Gamma(s, cut) / (1 - e^-cut)`` and kept below tolerance.
    """
    if not s > 1:
        raise ValueError(f"bose_integral needs s > 1, got {s}")
    if not (math.isfinite(a) and a > 0):
        raise ValueError(f"bose_integral needs a > 0, got {a}")
    scale = special.gamma(s)
    cut = _bounded_cut(s - 1.0, scale, cfg)

    def integrand(y):
        return y ** (s - 1.0) / np.expm1(y)

    return integrate(integrand, 0.0, cut, cfg) / a ** s


def bose_integral_closed_form(s: float, a: float) -> float:
    """Gamma(s) zeta(s) / a^s."""
    if s in (2, 3, 4):
        z = zeta_value(int(s))
    else:
        z = float(special.zeta(s, 1))
    return special.gamma(s) * z / a ** s


def log1mexp(x):
    """``ln(1 - e^{-x})`` for ``x > 0``, accurate at both ends."""
    x = np.asarray(x, dtype=float)
    small = x < math.log(2.0)
    with np.errstate(divide="ignore"):
        return np.where(small, np.log(-np.expm1(-np.where(small, x, 1.0))), np.log1p(-np.exp(-x)))


def log_bose_integral(a: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``int_0^inf x^2 ln(1 - e^(-a x)) dx`` by quadrature (negative)."""
    if not (math.isfinite(a) and a > 0):
        raise ValueError(f"log_bose_integral needs a > 0, got {a}")
    cut = _bounded_cut(2.0, 2.0, cfg)

    def integrand(y):
        return y * y * log1mexp(y)

    return integrate(integrand, 0.0, cut, cfg) / a ** 3


def log_bose_integral_closed_form(a: float) -> float:
    """-2 zeta(4) / a^3 = -pi^4 / (45 a^3)."""
    return -2.0 * zeta_value(4) / a ** 3


def zeta_value(s: int) -> float:
    if s == 2:
        return math.pi ** 2 / 6.0
    if s == 3:
        return APERY
    if s == 4:
        return math.pi ** 4 / 90.0
    raise ValueError(f"zeta_value supports s in {{2, 3, 4}}, got {s!r}")


# --------------------------------------------------------------------------
# Abel-Plana
# --------------------------------------------------------------------------


def abel_plana_branch_term(
    branch_discontinuity: Callable,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    onset: float = 0.0,
) -> float:
    """``int_onset^inf d(x) / (e^(2 pi x) - 1) dx`` for the caller's discontinuity ``d``.

    ``d(x)`` stands for ``i [f(ix) - f(-ix)]`` and must vanish below ``onset``.
    With ``onset > 0`` the integral runs in ``x = onset cosh(theta)``, which
    turns a square-root branch point at the onset into a smooth integrand.
    The range stops at ``2 pi (x - onset) = cfg.tail_cut``.
    """
    if onset < 0 or not math.isfinite(onset):
        raise ValueError(f"onset must be finite and >= 0, got {onset}")
    d = _as_array_fn(branch_discontinuity)
    two_pi = 2.0 * math.pi
    upper = onset + cfg.tail_cut / two_pi

    def bose_weight(x):
        return 1.0 / np.expm1(two_pi * x)

    if onset == 0.0:
        return integrate(lambda x: d(x) * bose_weight(x), 0.0, upper, cfg)

    theta_max = math.acosh(upper / onset)

    def integrand(theta):
        x = onset * np.cosh(theta)
        return d(x) * bose_weight(x) * onset * np.sinh(theta)

    return integrate(integrand, 0.0, theta_max, cfg)


def abel_plana(
    f: Callable,
    branch_discontinuity: Callable,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    onset: float = 0.0,
) -> AbelPlanaResult:
    """Sum ``f(0) + f(1) + ...`` as integral + f(0)/2 + branch term.

    ``f`` is evaluated on the real axis only; the caller supplies the
    discontinuity across the imaginary axis, which is where the branch
    choice lives.  All three terms must be finite.
    """
    f = _as_array_fn(f)
    integral_term = integrate_to_infinity(f, 0.0, cfg)
    half_f0 = 0.5 * float(np.asarray(f(np.array([0.0])))[0])
    branch_term = abel_plana_branch_term(branch_discontinuity, cfg, onset)
    for name, v in (("integral_term", integral_term), ("half_f0", half_f0), ("branch_term", branch_term)):
        if not math.isfinite(v):
            raise ConvergenceError(f"Abel-Plana {name} is not finite ({v})")
    return AbelPlanaResult(integral_term, half_f0, branch_term, integral_term + half_f0 + branch_term)


# --------------------------------------------------------------------------
# coth partial fractions
# --------------------------------------------------------------------------


def coth_series_check(z: float, N: int) -> CothCheck:
    """Partial fractions of coth(z)/z truncated at N against the direct value.

    The dropped tail is below ``sum_{n>N} 2/(pi^2 n^2) < 2/(pi^2 N)``.
    """
    if z == 0:
        raise ValueError("coth(z)/z partial fractions need z != 0")
    if N < 1:
        raise ValueError("N must be >= 1")
    z2 = z * z
    n = np.arange(N, 0, -1, dtype=float)
    partial = 1.0 / z2 + math.fsum(2.0 / (z2 + (math.pi * n) ** 2))
    target = 1.0 / (math.tanh(z) * z)
    return CothCheck(partial, target, 2.0 / (math.pi ** 2 * N))


# --------------------------------------------------------------------------
# differentiation
# --------------------------------------------------------------------------


def derivative(g: Callable[[float], float], x: float, cfg: DerivativeConfig = DEFAULT_DERIVATIVE) -> float:
    """Central difference at ``x``, Richardson-extrapolated over halved steps."""
    h = cfg.initial_step if cfg.initial_step is not None else 1e-2 * max(abs(x), 1.0)
    row = []
    for i in range(cfg.richardson_levels):
        hi = h / 2 ** i
        gp, gm = g(x + hi), g(x - hi)
        if not (math.isfinite(gp) and math.isfinite(gm)):
            raise ConvergenceError(f"non-finite function value near x={x}")
        new = [(gp - gm) / (2.0 * hi)]
        for j, prev in enumerate(row, start=1):
            factor = 4.0 ** j
            new.append((factor * new[j - 1] - prev) / (factor - 1.0))
        row = new
    return row[-1]
