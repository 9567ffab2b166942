"""Photon gas at temperature T: pressure, free energy, Planck energy, entropy.

``beta = hbar c / (k_B T)`` is a length.  In natural units ``T = 1/beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .numerics import (
    DEFAULT_DERIVATIVE,
    DEFAULT_QUADRATURE,
    DerivativeConfig,
    QuadratureConfig,
    bose_integral,
    derivative,
    log_bose_integral,
)
from .quantities import CODATA2018, Quantity, as_length, as_temperature

__all__ = [
    "ThermalState",
    "ThermoPoint",
    "DsDuCheck",
    "pressure_bb",
    "pressure_bb_closed_form",
    "free_energy_bb",
    "internal_energy_bb",
    "internal_energy_bb_closed_form",
    "internal_energy_via_derivative",
    "entropy_density",
    "entropy_from_free_energy",
    "thermo_point",
    "check_ds_du",
]


@dataclass(frozen=True)
class ThermalState:
    """Natural-unit temperature and its length-valued inverse."""

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", as_length(self.beta, "beta"))

    @property
    def T(self) -> float:
        return 1.0 / self.beta

    @classmethod
    def from_beta(cls, beta) -> "ThermalState":
        return cls(beta)

    @classmethod
    def from_temperature(cls, T) -> "ThermalState":
        """``T`` is a natural-unit float (1/length) or a kelvin Quantity."""
        return cls(1.0 / as_temperature(T))

    def temperature_kelvin(self, constants=CODATA2018) -> float:
        return constants.hbar_c / (constants.k_B * self.beta)


class ThermoPoint(NamedTuple):
    p: float
    f: float
    u: float
    s: float


class DsDuCheck(NamedTuple):
    ds_du: float
    expected: float
    residual: float
    entropy_residual: float


def _state(state) -> ThermalState:
    if isinstance(state, ThermalState):
        return state
    if isinstance(state, Quantity):
        return ThermalState.from_temperature(state)
    raise TypeError("expected a ThermalState or a temperature Quantity")


def pressure_bb(state: ThermalState, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``-(2/beta) int d^3k/(2 pi)^3 ln(1 - e^{-beta k})``."""
    beta = _state(state).beta
    return -log_bose_integral(beta, cfg) / (math.pi ** 2 * beta)


def pressure_bb_closed_form(state: ThermalState) -> float:
    return math.pi ** 2 / (45.0 * _state(state).beta ** 4)


def free_energy_bb(state: ThermalState, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return -pressure_bb(state, cfg)


def internal_energy_bb(state: ThermalState, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Planck's law integrated over all modes: ``2 int d^3k/(2 pi)^3 k / (e^{beta k} - 1)``."""
    beta = _state(state).beta
    return bose_integral(4.0, beta, cfg) / math.pi ** 2


def internal_energy_bb_closed_form(state: ThermalState) -> float:
    return math.pi ** 2 / (15.0 * _state(state).beta ** 4)


def internal_energy_via_derivative(
    state: ThermalState,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """``-d(beta p)/d beta``."""
    beta = _state(state).beta
    if dcfg.initial_step is None:
        dcfg = replace(dcfg, initial_step=1e-2 * beta)
    return -derivative(lambda b: b * pressure_bb(ThermalState(b), cfg), beta, dcfg)


def entropy_density(state: ThermalState, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``s = (p + u) / T``."""
    state = _state(state)
    return (pressure_bb(state, cfg) + internal_energy_bb(state, cfg)) / state.T


def entropy_from_free_energy(
    state: ThermalState,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """``s = -df/dT`` by numerical differentiation."""
    T = _state(state).T
    if dcfg.initial_step is None:
        dcfg = replace(dcfg, initial_step=1e-2 * T)
    return -derivative(lambda t: free_energy_bb(ThermalState(1.0 / t), cfg), T, dcfg)


def thermo_point(state: ThermalState, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> ThermoPoint:
    state = _state(state)
    p = pressure_bb(state, cfg)
    u = internal_energy_bb(state, cfg)
    return ThermoPoint(p=p, f=-p, u=u, s=(p + u) / state.T)


def check_ds_du(
    state: ThermalState,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> DsDuCheck:
    """``ds/du = (ds/dT) / (du/dT)`` along the temperature family, against ``1/T``.

    ``entropy_residual`` compares ``(p + u)/T`` with ``-df/dT``.
    """
    state = _state(state)
    T = state.T
    if dcfg.initial_step is None:
        dcfg = replace(dcfg, initial_step=1e-2 * T)
    ds_dT = derivative(lambda t: entropy_density(ThermalState(1.0 / t), cfg), T, dcfg)
    du_dT = derivative(lambda t: internal_energy_bb(ThermalState(1.0 / t), cfg), T, dcfg)
    ds_du = ds_dT / du_dT
    s = entropy_density(state, cfg)
    s_alt = entropy_from_free_energy(state, dcfg, cfg)
    return DsDuCheck(
        ds_du=ds_du,
        expected=1.0 / T,
        residual=abs(ds_du * T - 1.0),
        entropy_residual=abs(s_alt - s) / abs(s),
    )
