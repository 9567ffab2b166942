"""Casimir pressure between plates and Planck's law, computed side by side.

Submodules: :mod:`quantities` (units), :mod:`numerics` (quadrature kernel),
:mod:`casimir`, :mod:`blackbody`, :mod:`duality`, :mod:`cli`.
"""

from .numerics import ConvergenceError, DerivativeConfig, QuadratureConfig
from .quantities import CODATA2018, DimensionError, Quantity

__version__ = "0.1.0"

__all__ = [
    "CODATA2018",
    "ConvergenceError",
    "DerivativeConfig",
    "DimensionError",
    "QuadratureConfig",
    "Quantity",
]
