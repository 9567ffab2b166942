"""Parallel conducting plates: mode spectrum, finite zero-point energy, pressure.

Natural units throughout (hbar = c = 1, lengths in metres).  Inputs may be
floats (natural) or :class:`~casimir_planck.quantities.Quantity` lengths.

The finite part of the transverse-momentum integrand

    Delta I(k_perp) = 1/2 k_perp + sum_{n>=1} k_n - (l/pi) int_0^inf dk_z k

is available by two routes that share no code beyond the quadrature rule:
the log integrand left after integrating by parts, and the branch term of
the Abel-Plana formula for ``f(n) = sqrt(k_perp^2 + (pi n / l)^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy import special

from .numerics import (
    DEFAULT_DERIVATIVE,
    DEFAULT_QUADRATURE,
    ConvergenceError,
    DerivativeConfig,
    QuadratureConfig,
    abel_plana_branch_term,
    bose_integral,
    derivative,
    integrate,
    log1mexp,
    log_bose_integral,
)
from .quantities import AREA, DimensionError, Quantity, as_length, to_natural

__all__ = [
    "PlateGeometry",
    "ModeSpectrum",
    "RegulatorConfig",
    "RegulatedSum",
    "delta_I_log_route",
    "delta_I_abel_plana",
    "energy_density",
    "energy_density_closed_form",
    "pressure",
    "pressure_closed_form",
    "pressure_via_derivative",
    "regulated_mode_sum",
    "regulated_finite_part",
    "total_force",
]


@dataclass(frozen=True)
class PlateGeometry:
    gap: float
    transverse_area: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "gap", as_length(self.gap, "gap"))
        area = self.transverse_area
        if isinstance(area, Quantity):
            nat = to_natural(area)
            if nat.dim != AREA:
                raise DimensionError(f"transverse_area must be an area, got [{area.dim}]")
            area = nat.magnitude
        if area is not None:
            area = float(area)
            if not (math.isfinite(area) and area >= 0):
                raise ValueError(f"transverse_area must be >= 0, got {area!r}")
        object.__setattr__(self, "transverse_area", area)

    def k_z(self, n):
        """Allowed normal wave numbers pi n / l."""
        return math.pi * np.asarray(n) / self.gap


@dataclass(frozen=True)
class ModeSpectrum:
    """Modes at fixed transverse momentum; ``n = 0`` has a single polarization."""

    k_perp: float
    gap: float

    def __post_init__(self):
        if not (self.k_perp >= 0 and math.isfinite(self.k_perp)):
            raise ValueError(f"k_perp must be >= 0, got {self.k_perp!r}")
        object.__setattr__(self, "gap", as_length(self.gap, "gap"))

    def k(self, n):
        return np.hypot(self.k_perp, math.pi * np.asarray(n, dtype=float) / self.gap)

    @staticmethod
    def degeneracy(n):
        return np.where(np.asarray(n) == 0, 1, 2)


@dataclass(frozen=True)
class RegulatorConfig:
    """Exponential regulator values and the lambda -> 0 fit.

    ``lambdas=None`` means ``l * (1/5, 1/10, 1/20, 1/40)``.
    """

    lambdas: Optional[tuple] = None
    extrapolation_order: int = 3
    tolerance: float = 1e-3

    def __post_init__(self):
        if self.lambdas is not None:
            lam = tuple(float(x) for x in self.lambdas)
            if any(not (x > 0 and math.isfinite(x)) for x in lam):
                raise ValueError("regulator values must be positive")
            if any(b >= a for a, b in zip(lam, lam[1:])):
                raise ValueError("regulator values must be strictly decreasing")
            object.__setattr__(self, "lambdas", lam)
        if self.extrapolation_order < 0:
            raise ValueError("extrapolation_order must be >= 0")

    def resolve(self, gap: float) -> tuple:
        lam = self.lambdas if self.lambdas is not None else tuple(gap / d for d in (5.0, 10.0, 20.0, 40.0))
        if len(lam) <= self.extrapolation_order:
            raise ValueError(
                f"need more than {self.extrapolation_order} regulator values for an order-"
                f"{self.extrapolation_order} fit, got {len(lam)}"
            )
        return lam


@dataclass(frozen=True)
class RegulatedSum:
    gap: float
    lambdas: tuple
    values: tuple
    extrapolated: float
    fit_residual: float


def _scaled_cfg(cfg: QuadratureConfig, magnitude: float) -> QuadratureConfig:
    # absolute tolerance follows the e^{-2 l k_perp} size of the finite part
    return replace(cfg, abs_tol=cfg.abs_tol * magnitude)


def delta_I_log_route(k_perp: float, l, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``(1/pi) int_0^inf dk_z ln(1 - exp(-2 l sqrt(k_z^2 + k_perp^2)))``."""
    l = as_length(l, "gap")
    if not (k_perp >= 0 and math.isfinite(k_perp)):
        raise ValueError(f"k_perp must be >= 0, got {k_perp!r}")
    two_l = 2.0 * l
    if two_l * k_perp > 700.0:
        return 0.0
    # past this k_z the integrand has dropped by e^{-tail_cut} from its value at k_z = 0
    kz_max = math.sqrt((k_perp + cfg.tail_cut / two_l) ** 2 - k_perp ** 2)

    def integrand(kz):
        return log1mexp(two_l * np.hypot(kz, k_perp))

    cfg = _scaled_cfg(cfg, math.exp(-two_l * k_perp))
    return integrate(integrand, 0.0, kz_max, cfg) / math.pi


def delta_I_abel_plana(k_perp: float, l, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Abel-Plana branch term of ``sum_n' k_n``, onset at ``x = l k_perp / pi``.

    For ``x`` above the onset, ``f(+-ix) = +-i sqrt((pi x/l)^2 - k_perp^2)``
    on the branch with positive real part, so the discontinuity is
    ``-2 sqrt((pi x/l)^2 - k_perp^2)``; below the onset it vanishes.
    """
    l = as_length(l, "gap")
    if not (k_perp >= 0 and math.isfinite(k_perp)):
        raise ValueError(f"k_perp must be >= 0, got {k_perp!r}")
    if 2.0 * l * k_perp > 700.0:
        return 0.0
    scale = math.pi / l

    def discontinuity(x):
        return -2.0 * np.sqrt(np.maximum((scale * x) ** 2 - k_perp ** 2, 0.0))

    cfg = _scaled_cfg(cfg, math.exp(-2.0 * l * k_perp))
    return abel_plana_branch_term(discontinuity, cfg, onset=k_perp / scale)


def energy_density(l, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``(1/l) int d^3k/(2 pi)^3 ln(1 - e^{-2 l k})``, negative."""
    l = as_length(l, "gap")
    return log_bose_integral(2.0 * l, cfg) / (2.0 * math.pi ** 2 * l)


def energy_density_closed_form(l) -> float:
    l = as_length(l, "gap")
    return -math.pi ** 2 / (720.0 * l ** 4)


def pressure(l, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``-2 int d^3k/(2 pi)^3 k / (e^{2 l k} - 1)``, negative (attractive)."""
    l = as_length(l, "gap")
    return -bose_integral(4.0, 2.0 * l, cfg) / math.pi ** 2


def pressure_closed_form(l) -> float:
    l = as_length(l, "gap")
    return -math.pi ** 2 / (240.0 * l ** 4)


def pressure_via_derivative(
    l,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """``-d(l u)/dl`` with ``u`` from :func:`energy_density`."""
    l = as_length(l, "gap")
    if dcfg.initial_step is None:
        # keep l - h well inside the domain for small gaps
        dcfg = replace(dcfg, initial_step=1e-2 * l)
    return -derivative(lambda x: x * energy_density(x, cfg), l, dcfg)


def _mode_sum_minus_continuum(k_perp: np.ndarray, l: float, lam: float) -> np.ndarray:
    """``1/2 sum_n g(n) k_n e^{-lam k_n} - (l/pi) int_0^inf dk_z k e^{-lam k}`` per k_perp."""
    k_perp = np.asarray(k_perp, dtype=float)
    step = math.pi / l
    total = 0.5 * k_perp * np.exp(-lam * k_perp)
    peak_n = 1.0 / (lam * step)
    n = 1
    while True:
        kn = np.hypot(k_perp, step * n)
        term = kn * np.exp(-lam * kn)
        total = total + term
        if n > peak_n and np.all(term < 1e-16 * np.abs(total)):
            break
        n += 1
        if n > 10_000_000:
            raise ConvergenceError("regulated mode sum did not terminate")
    z = lam * k_perp
    with np.errstate(divide="ignore", invalid="ignore"):
        # int_0^inf sqrt(kz^2+q^2) e^{-lam sqrt(kz^2+q^2)} dkz = q^2 (K0(lam q) + K1(lam q)/(lam q))
        cont = np.where(
            z > 0,
            k_perp ** 2 * special.k0(z) + k_perp * special.k1(z) / lam,
            1.0 / lam ** 2,
        )
    return total - (l / math.pi) * cont


def _regulated_energy_per_area(l: float, lam: float, cfg: QuadratureConfig) -> float:
    # the subtracted integrand decays like e^{-2 l k_perp}
    k_max = cfg.tail_cut / (2.0 * l)
    cfg = replace(cfg, rel_tol=max(cfg.rel_tol, 1e-9))

    def integrand(kp):
        return kp * _mode_sum_minus_continuum(kp, l, lam)

    return integrate(integrand, 0.0, k_max, cfg) / (2.0 * math.pi)


def regulated_mode_sum(
    l,
    reg: RegulatorConfig = RegulatorConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> RegulatedSum:
    """Regulated zero-point energy per unit plate area minus its continuum value.

    Each ``Delta E(lambda)`` is finite.  The fit is a polynomial in lambda of
    ``reg.extrapolation_order``; ``fit_residual`` is the relative change of
    the lambda = 0 intercept when the order is lowered by one.
    """
    l = as_length(l, "gap")
    lambdas = reg.resolve(l)
    values = tuple(_regulated_energy_per_area(l, lam, cfg) for lam in lambdas)
    x = np.asarray(lambdas) / l
    y = np.asarray(values)
    order = reg.extrapolation_order
    extrapolated = float(np.polynomial.polynomial.polyfit(x, y, order)[0])
    if order >= 1:
        lower = float(np.polynomial.polynomial.polyfit(x[1:], y[1:], order - 1)[0])
        fit_residual = abs(extrapolated - lower) / abs(extrapolated)
    else:
        fit_residual = 0.0
    return RegulatedSum(l, tuple(lambdas), values, extrapolated, fit_residual)


def regulated_finite_part(
    l,
    reg: RegulatorConfig = RegulatorConfig(),
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """lambda -> 0 limit of :func:`regulated_mode_sum`; should equal ``l * energy_density(l)``."""
    result = regulated_mode_sum(l, reg, cfg)
    if result.fit_residual > reg.tolerance:
        raise ConvergenceError(
            f"lambda -> 0 extrapolation residual {result.fit_residual:.3g} exceeds {reg.tolerance:.3g}"
        )
    return result.extrapolated


def total_force(geom: PlateGeometry, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Pressure times plate area (natural units: 1/length^2)."""
    if geom.transverse_area is None:
        raise ValueError("total_force needs a transverse_area")
    return pressure(geom.gap, cfg) * geom.transverse_area
