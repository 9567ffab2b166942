"""Dimensions, CODATA constants, and natural-unit conversion.

Everything downstream works in natural units (hbar = c = k_B = 1) where
the only surviving dimension is length, measured in metres.  SI values
only appear at the CLI boundary.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "DimensionError",
    "Dimension",
    "Quantity",
    "PhysicalConstants",
    "CODATA2018",
    "DIMENSIONLESS",
    "LENGTH",
    "TIME",
    "MASS",
    "TEMPERATURE",
    "AREA",
    "INVERSE_LENGTH",
    "ENERGY",
    "FORCE",
    "PRESSURE",
    "ENERGY_DENSITY",
    "ENTROPY_DENSITY",
    "to_natural",
    "from_natural",
    "beta_from_temperature",
    "as_length",
    "as_temperature",
    "parse_quantity",
    "SI_UNIT_NAMES",
]


class DimensionError(ValueError):
    """Raised when quantities with incompatible dimensions are combined."""


@dataclass(frozen=True)
class Dimension:
    """Integer exponents of (length, time, mass, temperature)."""

    length: int = 0
    time: int = 0
    mass: int = 0
    temperature: int = 0

    def __post_init__(self):
        for name in ("length", "time", "mass", "temperature"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"dimension exponent {name} must be an int")

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(
            self.length + other.length,
            self.time + other.time,
            self.mass + other.mass,
            self.temperature + other.temperature,
        )

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(
            self.length - other.length,
            self.time - other.time,
            self.mass - other.mass,
            self.temperature - other.temperature,
        )

    def __pow__(self, n: int) -> "Dimension":
        if not isinstance(n, int):
            raise TypeError("dimensions only support integer powers")
        return Dimension(self.length * n, self.time * n, self.mass * n, self.temperature * n)

    @property
    def is_pure_length(self) -> bool:
        return self.time == 0 and self.mass == 0 and self.temperature == 0

    def __str__(self) -> str:
        parts = []
        for sym, exp in zip(("m", "s", "kg", "K"), (self.length, self.time, self.mass, self.temperature)):
            if exp == 1:
                parts.append(sym)
            elif exp:
                parts.append(f"{sym}^{exp}")
        return " ".join(parts) or "1"


DIMENSIONLESS = Dimension()
LENGTH = Dimension(length=1)
TIME = Dimension(time=1)
MASS = Dimension(mass=1)
TEMPERATURE = Dimension(temperature=1)
AREA = LENGTH ** 2
INVERSE_LENGTH = LENGTH ** -1
ENERGY = Dimension(length=2, time=-2, mass=1)
FORCE = Dimension(length=1, time=-2, mass=1)
PRESSURE = Dimension(length=-1, time=-2, mass=1)
ENERGY_DENSITY = PRESSURE
ENTROPY_DENSITY = Dimension(length=-1, time=-2, mass=1, temperature=-1)

SI_UNIT_NAMES = {
    DIMENSIONLESS: "1",
    LENGTH: "m",
    AREA: "m2",
    INVERSE_LENGTH: "1/m",
    TEMPERATURE: "K",
    ENERGY: "J",
    FORCE: "N",
    PRESSURE: "Pa",
    ENTROPY_DENSITY: "J/(K m3)",
    Dimension(length=-2, time=-2, mass=1): "J/m2",
    Dimension(temperature=-1): "1/K",
    Dimension(length=1, temperature=-1): "m/K",
}


@dataclass(frozen=True)
class Quantity:
    """A magnitude carrying an SI dimension (or a natural-unit length power)."""

    magnitude: float
    dim: Dimension = DIMENSIONLESS

    def _check_same(self, other: "Quantity", op: str) -> None:
        if not isinstance(other, Quantity):
            raise TypeError(f"cannot {op} Quantity and {type(other).__name__}")
        if self.dim != other.dim:
            raise DimensionError(f"cannot {op} [{self.dim}] and [{other.dim}]")

    def __add__(self, other: "Quantity") -> "Quantity":
        self._check_same(other, "add")
        return Quantity(self.magnitude + other.magnitude, self.dim)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._check_same(other, "subtract")
        return Quantity(self.magnitude - other.magnitude, self.dim)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.magnitude, self.dim)

    def __mul__(self, other: Union["Quantity", float]) -> "Quantity":
        if isinstance(other, Quantity):
            return Quantity(self.magnitude * other.magnitude, self.dim * other.dim)
        return Quantity(self.magnitude * other, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["Quantity", float]) -> "Quantity":
        if isinstance(other, Quantity):
            return Quantity(self.magnitude / other.magnitude, self.dim / other.dim)
        return Quantity(self.magnitude / other, self.dim)

    def __rtruediv__(self, other: float) -> "Quantity":
        return Quantity(other / self.magnitude, self.dim ** -1)

    def __pow__(self, n: int) -> "Quantity":
        return Quantity(self.magnitude ** n, self.dim ** n)

    def __lt__(self, other: "Quantity") -> bool:
        self._check_same(other, "compare")
        return self.magnitude < other.magnitude

    def __le__(self, other: "Quantity") -> bool:
        self._check_same(other, "compare")
        return self.magnitude <= other.magnitude

    def __gt__(self, other: "Quantity") -> bool:
        self._check_same(other, "compare")
        return self.magnitude > other.magnitude

    def __ge__(self, other: "Quantity") -> bool:
        self._check_same(other, "compare")
        return self.magnitude >= other.magnitude

    def __str__(self) -> str:
        return f"{self.magnitude:.12g} [{self.dim}]"


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar [J s], c [m/s], k_B [J/K]."""

    hbar: float
    c: float
    k_B: float

    def __post_init__(self):
        for name in ("hbar", "c", "k_B"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


CODATA2018 = PhysicalConstants(hbar=1.054571817e-34, c=2.99792458e8, k_B=1.380649e-23)


def _natural_exponents(dim: Dimension) -> tuple[int, int, int, int]:
    """Exponents (p, q, r, n) with [dim] = [hbar^p c^q k_B^r m^n].

    hbar = kg m^2 s^-1, c = m s^-1 and k_B = kg m^2 s^-2 K^-1 span the
    time, mass and temperature directions, so the system always has an
    integer solution.
    """
    r = -dim.temperature
    p = dim.mass - r
    q = -dim.time - p - 2 * r
    n = dim.length - 2 * p - q - 2 * r
    return p, q, r, n


def to_natural(q: Quantity, constants: PhysicalConstants = CODATA2018) -> Quantity:
    """Convert an SI quantity to natural units; the result is a pure length power."""
    if not math.isfinite(q.magnitude):
        raise ValueError(f"non-finite magnitude {q.magnitude!r}")
    p, qc, r, n = _natural_exponents(q.dim)
    scale = constants.hbar ** p * constants.c ** qc * constants.k_B ** r
    return Quantity(q.magnitude / scale, Dimension(length=n))


def from_natural(q: Quantity, target: Dimension, constants: PhysicalConstants = CODATA2018) -> Quantity:
    """Inverse of :func:`to_natural` for a requested SI dimension."""
    if not q.dim.is_pure_length:
        raise DimensionError(f"natural-unit quantity must be a length power, got [{q.dim}]")
    p, qc, r, n = _natural_exponents(target)
    if n != q.dim.length:
        raise DimensionError(
            f"length power m^{q.dim.length} cannot represent [{target}] (needs m^{n})"
        )
    scale = constants.hbar ** p * constants.c ** qc * constants.k_B ** r
    return Quantity(q.magnitude * scale, target)


def beta_from_temperature(T: Union[Quantity, float], constants: PhysicalConstants = CODATA2018) -> float:
    """Length-valued inverse temperature hbar c / (k_B T).

    A bare float is a natural-unit temperature (inverse length), so the
    result is simply ``1/T``.  A :class:`Quantity` must carry kelvin.
    """
    if isinstance(T, Quantity):
        if T.dim != TEMPERATURE:
            raise DimensionError(f"expected a temperature, got [{T.dim}]")
        t = T.magnitude
        if not (math.isfinite(t) and t > 0):
            raise ValueError(f"temperature must be positive, got {t!r}")
        return constants.hbar_c / (constants.k_B * t)
    t = float(T)
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"temperature must be positive, got {t!r}")
    return 1.0 / t


def _as_length_power(x, power: int, what: str, constants: PhysicalConstants) -> float:
    if isinstance(x, Quantity):
        nat = to_natural(x, constants)
        if nat.dim != Dimension(length=power):
            raise DimensionError(f"{what} must reduce to m^{power}, got [{x.dim}]")
        value = nat.magnitude
    elif isinstance(x, (int, float)) and not isinstance(x, bool):
        value = float(x)
    else:
        raise TypeError(f"{what} must be a float or Quantity, got {type(x).__name__}")
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{what} must be finite and positive, got {value!r}")
    return value


def as_length(x, what: str = "length", constants: PhysicalConstants = CODATA2018) -> float:
    """Positive natural-unit length from a float (already natural) or a Quantity."""
    return _as_length_power(x, 1, what, constants)


def as_temperature(x, constants: PhysicalConstants = CODATA2018) -> float:
    """Positive natural-unit temperature (inverse length)."""
    return _as_length_power(x, -1, "temperature", constants)


_UNIT_TABLE = {
    "m": (1.0, LENGTH),
    "mm": (1e-3, LENGTH),
    "um": (1e-6, LENGTH),
    "nm": (1e-9, LENGTH),
    "K": (1.0, TEMPERATURE),
    "Pa": (1.0, PRESSURE),
    "J/m3": (1.0, ENERGY_DENSITY),
    "m2": (1.0, AREA),
    "cm2": (1e-4, AREA),
    "mm2": (1e-6, AREA),
    "um2": (1e-12, AREA),
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/0-9]*)\s*$")


def parse_quantity(text: str) -> Union[Quantity, float]:
    """Parse ``"1um"``, ``"300K"``, ``"2.5e-7 m"`` or a bare number.

    Bare numbers are returned as floats and mean natural units.
    """
    m = _QUANTITY_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse quantity {text!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if not unit or unit == "natural":
        return value
    try:
        factor, dim = _UNIT_TABLE[unit]
    except KeyError:
        known = ", ".join(sorted(_UNIT_TABLE))
        raise ValueError(f"unknown unit {unit!r} in {text!r} (known: {known})") from None
    return Quantity(value * factor, dim)
