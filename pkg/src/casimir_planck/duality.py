"""The gap <-> inverse-temperature duality and what it does not give you.

Under ``2l <-> beta`` the Casimir pressure maps onto minus the Planck energy
density and the Casimir energy density onto minus the blackbody pressure.
Treating ``hbar c / (2 k_B l)`` as a temperature then breaks
``ds/du = 1/T``: the dual ratio comes out at 3 instead of 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, NamedTuple

from . import blackbody, casimir
from .blackbody import ThermalState
from .numerics import DEFAULT_DERIVATIVE, DEFAULT_QUADRATURE, DerivativeConfig, QuadratureConfig, derivative
from .quantities import as_length

__all__ = [
    "DualityMap",
    "Xi",
    "SwapResiduals",
    "ThermoRelation",
    "DualityReport",
    "map_gap_to_beta",
    "map_beta_to_gap",
    "xi_of",
    "xi_inversion",
    "xi_after_duality",
    "check_pressure_energy_swap",
    "dual_entropy_density",
    "dual_entropy_density_closed_form",
    "check_dual_thermo_relation",
    "check_thermal_relation",
    "full_report",
]


def map_gap_to_beta(l) -> float:
    return 2.0 * as_length(l, "gap")


def map_beta_to_gap(beta) -> float:
    return 0.5 * as_length(beta, "beta")


@dataclass(frozen=True)
class DualityMap:
    """One application of the duality map, in either direction."""

    direction: str
    input: float
    output: float

    @classmethod
    def gap_to_beta(cls, l) -> "DualityMap":
        l = as_length(l, "gap")
        return cls("gap->beta", l, map_gap_to_beta(l))

    @classmethod
    def beta_to_gap(cls, beta) -> "DualityMap":
        beta = as_length(beta, "beta")
        return cls("beta->gap", beta, map_beta_to_gap(beta))

    def inverse(self) -> "DualityMap":
        if self.direction == "gap->beta":
            return DualityMap.beta_to_gap(self.output)
        return DualityMap.gap_to_beta(self.output)


@dataclass(frozen=True)
class Xi:
    """Dimensionless ``T l = l / beta``."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"xi must be positive, got {self.value!r}")
        object.__setattr__(self, "value", v)


def xi_of(l, beta) -> Xi:
    return Xi(as_length(l, "gap") / as_length(beta, "beta"))


def xi_inversion(x: Xi) -> Xi:
    """``xi -> 1/(4 xi)``; fixed point 1/2."""
    if not isinstance(x, Xi):
        x = Xi(x)
    return Xi(1.0 / (4.0 * x.value))


def xi_after_duality(l, beta) -> Xi:
    """xi of ``(beta/2, 2l)``, i.e. the pair with both lengths sent through the map."""
    return xi_of(map_beta_to_gap(beta), map_gap_to_beta(l))


class SwapResiduals(NamedTuple):
    p_cas: float
    u_bb: float
    u_cas: float
    p_bb: float
    residual_p_swap: float
    residual_u_swap: float


def check_pressure_energy_swap(
    l,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    method: str = "quadrature",
) -> SwapResiduals:
    """Relative size of ``p_cas(l) + u_bb(2l)`` and ``u_cas(l) + p_bb(2l)``."""
    l = as_length(l, "gap")
    state = ThermalState(map_gap_to_beta(l))
    if method == "quadrature":
        p_cas = casimir.pressure(l, cfg)
        u_cas = casimir.energy_density(l, cfg)
        u_bb = blackbody.internal_energy_bb(state, cfg)
        p_bb = blackbody.pressure_bb(state, cfg)
    elif method == "closed_form":
        p_cas = casimir.pressure_closed_form(l)
        u_cas = casimir.energy_density_closed_form(l)
        u_bb = blackbody.internal_energy_bb_closed_form(state)
        p_bb = blackbody.pressure_bb_closed_form(state)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SwapResiduals(
        p_cas=p_cas,
        u_bb=u_bb,
        u_cas=u_cas,
        p_bb=p_bb,
        residual_p_swap=abs(p_cas + u_bb) / abs(u_bb),
        residual_u_swap=abs(u_cas + p_bb) / abs(p_bb),
    )


def dual_entropy_density(l, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``-(2 l)(u_cas + p_cas)``: the entropy the map would assign (natural units)."""
    l = as_length(l, "gap")
    return -2.0 * l * (casimir.energy_density(l, cfg) + casimir.pressure(l, cfg))


def dual_entropy_density_closed_form(l) -> float:
    l = as_length(l, "gap")
    return math.pi ** 2 / (90.0 * l ** 3)


class ThermoRelation(NamedTuple):
    ds_du: float
    inverse_temperature: float
    inconsistency_ratio: float


def _ds_du_ratio(
    x: float,
    entropy: Callable[[float], float],
    energy: Callable[[float], float],
    inverse_temperature: Callable[[float], float],
    dcfg: DerivativeConfig,
) -> ThermoRelation:
    """``(ds/dx)/(du/dx)`` against the claimed ``1/T``; one pipeline for both sides."""
    if dcfg.initial_step is None:
        dcfg = replace(dcfg, initial_step=1e-2 * x)
    ds_du = derivative(entropy, x, dcfg) / derivative(energy, x, dcfg)
    inv_t = inverse_temperature(x)
    return ThermoRelation(ds_du, inv_t, abs(ds_du) / inv_t)


def check_dual_thermo_relation(
    l,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> ThermoRelation:
    """ds/du along the gap family versus the effective ``1/T = 2 l``.

    The ratio is 3; ``ds_du`` itself is ``-6 l`` (entropy falls while the
    energy density rises with the gap).
    """
    l = as_length(l, "gap")
    return _ds_du_ratio(
        l,
        lambda x: dual_entropy_density(x, cfg),
        lambda x: casimir.energy_density(x, cfg),
        lambda x: 2.0 * x,
        dcfg,
    )


def check_thermal_relation(
    beta,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> ThermoRelation:
    """Control run of the same pipeline on the blackbody, along the beta family."""
    beta = as_length(beta, "beta")
    return _ds_du_ratio(
        beta,
        lambda b: blackbody.entropy_density(ThermalState(b), cfg),
        lambda b: blackbody.internal_energy_bb(ThermalState(b), cfg),
        lambda b: b,
        dcfg,
    )


@dataclass(frozen=True)
class DualityReport:
    l: float
    beta_dual: float
    residual_p_swap: float
    residual_u_swap: float
    ds_du_dual: float
    inconsistency_ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def full_report(
    l,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    dcfg: DerivativeConfig = DEFAULT_DERIVATIVE,
) -> DualityReport:
    l = as_length(l, "gap")
    swap = check_pressure_energy_swap(l, cfg)
    rel = check_dual_thermo_relation(l, dcfg, cfg)
    return DualityReport(
        l=l,
        beta_dual=map_gap_to_beta(l),
        residual_p_swap=swap.residual_p_swap,
        residual_u_swap=swap.residual_u_swap,
        ds_du_dual=rel.ds_du,
        inconsistency_ratio=rel.inconsistency_ratio,
    )
