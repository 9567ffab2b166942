"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import blackbody, casimir, duality
from .blackbody import ThermalState
from .numerics import ConvergenceError, DerivativeConfig, QuadratureConfig
from .quantities import (
    AREA,
    ENERGY_DENSITY,
    ENTROPY_DENSITY,
    FORCE,
    LENGTH,
    PRESSURE,
    SI_UNIT_NAMES,
    TEMPERATURE,
    Dimension,
    DimensionError,
    Quantity,
    from_natural,
    parse_quantity,
    to_natural,
)

METHODS = ("closed_form", "quadrature", "derivative", "regulated_sum", "abel_plana")
OUTPUT_KEYS = ("quantity", "value_natural", "value_si", "si_unit", "method", "rel_residual", "parameters")

# SI dimension of each reported quantity
_DIMS = {
    "casimir_pressure": PRESSURE,
    "casimir_energy_density": ENERGY_DENSITY,
    "casimir_energy_per_area": Dimension(length=-2, time=-2, mass=1),
    "casimir_total_force": FORCE,
    "blackbody_pressure": PRESSURE,
    "blackbody_free_energy_density": ENERGY_DENSITY,
    "blackbody_internal_energy": ENERGY_DENSITY,
    "blackbody_entropy_density": ENTROPY_DENSITY,
    "dual_entropy_density": ENTROPY_DENSITY,
}


# same dimension as pressure, different reading
_UNIT_LABELS = {
    "casimir_energy_density": "J/m3",
    "blackbody_free_energy_density": "J/m3",
    "blackbody_internal_energy": "J/m3",
}


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    quantity: str
    value_natural: float
    value_si: float
    si_unit: str
    method: str
    rel_residual: Optional[float] = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.rel_residual is not None and self.rel_residual < 0:
            raise ValueError("rel_residual must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "OutputRecord":
        return cls(**{k: d[k] for k in OUTPUT_KEYS})


def _record(quantity: str, value: float, method: str, closed: Optional[float], parameters: dict) -> OutputRecord:
    dim = _DIMS[quantity]
    n = to_natural(Quantity(1.0, dim)).dim
    si = from_natural(Quantity(value, n), dim).magnitude
    residual = None if closed is None else abs(value - closed) / abs(closed)
    unit = _UNIT_LABELS.get(quantity, SI_UNIT_NAMES[dim])
    return OutputRecord(quantity, value, si, unit, method, residual, dict(parameters))


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _natural_value(text: str, units: str, expected, what: str) -> float:
    """Parse a CLI magnitude into natural units; bare numbers only under ``--units natural``."""
    try:
        q = parse_quantity(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(q, float):
        if units == "si":
            raise UsageError(f"{what} {text!r} has no unit but --units si was given")
        value = q
    else:
        if q.dim != expected:
            raise UsageError(f"{what} {text!r} has the wrong dimension [{q.dim}]")
        value = to_natural(q).magnitude
    if not (math.isfinite(value) and value > 0):
        raise UsageError(f"{what} must be positive, got {text!r}")
    return value


def _gap(text, units):
    return _natural_value(text, units, LENGTH, "--gap")


def _beta(text, units):
    return _natural_value(text, units, LENGTH, "--beta")


def _temperature_to_beta(text, units):
    T = _natural_value(text, units, TEMPERATURE, "--temperature")
    return 1.0 / T


def _quad_cfg(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_common(p, formats=("table", "csv", "json"), default="table"):
    p.add_argument("--units", choices=("natural", "si"), default="natural")
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--rel-tol", type=float, default=QuadratureConfig.rel_tol)
    p.add_argument("--abs-tol", type=float, default=QuadratureConfig.abs_tol)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="casimir-planck", description="Casimir plates and blackbody radiation, side by side.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("casimir", help="Casimir pressure and energy density for a plate gap")
    p.add_argument("--gap", required=True, help="plate separation, e.g. 1um or a bare natural-unit number")
    p.add_argument("--area", default=None, help="plate area for the total force, e.g. 1cm2")
    p.add_argument("--method", choices=("quadrature", "closed_form", "derivative"), default="quadrature")
    _add_common(p)

    p = sub.add_parser("planck", help="blackbody p, f, u, s")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--temperature", help="e.g. 300K, or a natural-unit number (1/length)")
    g.add_argument("--beta", help="hbar c / k_B T as a length")
    p.add_argument("--method", choices=("quadrature", "closed_form", "derivative"), default="quadrature")
    _add_common(p)

    p = sub.add_parser("duality", help="duality residuals and the dual ds/du inconsistency")
    p.add_argument("--gap", required=True)
    p.add_argument("--json", action="store_true", help="same as --format json")
    _add_common(p, formats=("json", "table"), default="json")

    p = sub.add_parser("sweep", help="tabulate one quantity over a parameter range")
    p.add_argument("quantity", choices=sorted(_SWEEPS))
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gap", help="min:max")
    g.add_argument("--beta", help="min:max")
    g.add_argument("--temperature", help="min:max")
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--scale", choices=("log", "linear"), default="log")
    p.add_argument("--method", choices=("quadrature", "closed_form"), default="quadrature")
    _add_common(p, default="csv")

    p = sub.add_parser("modesum", help="regulated mode sum extrapolated to zero regulator")
    p.add_argument("--gap", required=True)
    p.add_argument("--lambda", dest="lambdas", default=None, help="comma-separated decreasing regulator lengths")
    p.add_argument("--order", type=int, default=3)
    _add_common(p)
    return ap


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_casimir(args) -> list:
    l = _gap(args.gap, args.units)
    cfg = _quad_cfg(args)
    params = {"gap": l}
    p_closed = casimir.pressure_closed_form(l)
    u_closed = casimir.energy_density_closed_form(l)
    if args.method == "closed_form":
        p, p_method = p_closed, "closed_form"
        u, u_method = u_closed, "closed_form"
    elif args.method == "derivative":
        p, p_method = casimir.pressure_via_derivative(l, DerivativeConfig(), cfg), "derivative"
        u, u_method = casimir.energy_density(l, cfg), "quadrature"
    else:
        p, p_method = casimir.pressure(l, cfg), "quadrature"
        u, u_method = casimir.energy_density(l, cfg), "quadrature"
    records = [
        _record("casimir_pressure", p, p_method, p_closed, params),
        _record("casimir_energy_density", u, u_method, u_closed, params),
        _record("casimir_energy_per_area", u * l, u_method, u_closed * l, params),
    ]
    if args.area is not None:
        try:
            area = parse_quantity(args.area)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if isinstance(area, float):
            if args.units == "si":
                raise UsageError(f"--area {args.area!r} has no unit but --units si was given")
        elif area.dim != AREA:
            raise UsageError(f"--area {args.area!r} is not an area")
        else:
            area = area.magnitude
        if area < 0:
            raise UsageError("--area must be >= 0")
        force = casimir.total_force(casimir.PlateGeometry(l, area), cfg) if p_method == "quadrature" else p * area
        records.append(
            _record("casimir_total_force", force, p_method, p_closed * area, dict(params, area=area))
        )
    return records


def cmd_planck(args) -> list:
    if args.beta is not None:
        beta = _beta(args.beta, args.units)
    else:
        beta = _temperature_to_beta(args.temperature, args.units)
    state = ThermalState(beta)
    cfg = _quad_cfg(args)
    params = {"beta": beta, "temperature": state.T, "temperature_K": state.temperature_kelvin()}
    p_closed = blackbody.pressure_bb_closed_form(state)
    u_closed = blackbody.internal_energy_bb_closed_form(state)
    s_closed = 4.0 * u_closed / (3.0 * state.T)
    if args.method == "closed_form":
        p, u, method, u_method = p_closed, u_closed, "closed_form", "closed_form"
    else:
        p = blackbody.pressure_bb(state, cfg)
        method = "quadrature"
        if args.method == "derivative":
            u, u_method = blackbody.internal_energy_via_derivative(state, DerivativeConfig(), cfg), "derivative"
        else:
            u, u_method = blackbody.internal_energy_bb(state, cfg), "quadrature"
    s = (p + u) / state.T
    return [
        _record("blackbody_pressure", p, method, p_closed, params),
        _record("blackbody_free_energy_density", -p, method, -p_closed, params),
        _record("blackbody_internal_energy", u, u_method, u_closed, params),
        _record("blackbody_entropy_density", s, u_method, s_closed, params),
    ]


DUALITY_SWAP_TOL = 1e-8
DUALITY_RATIO_TOL = 1e-6


def cmd_duality(args):
    l = _gap(args.gap, args.units)
    report = duality.full_report(l, _quad_cfg(args))
    ok = (
        report.residual_p_swap <= DUALITY_SWAP_TOL
        and report.residual_u_swap <= DUALITY_SWAP_TOL
        and abs(report.inconsistency_ratio - 3.0) <= DUALITY_RATIO_TOL
    )
    return report, ok


def _casimir_sweep(fn, closed, quantity):
    def run(x, cfg, method):
        if method == "closed_form":
            return _record(quantity, closed(x), "closed_form", closed(x), {"gap": x})
        return _record(quantity, fn(x, cfg), "quadrature", closed(x), {"gap": x})

    return run


def _planck_sweep(fn, closed, quantity):
    def run(beta, cfg, method):
        state = ThermalState(beta)
        params = {"beta": beta, "temperature": state.T}
        if method == "closed_form":
            return _record(quantity, closed(state), "closed_form", closed(state), params)
        return _record(quantity, fn(state, cfg), "quadrature", closed(state), params)

    return run


_SWEEPS: dict = {
    "casimir-pressure": ("gap", _casimir_sweep(casimir.pressure, casimir.pressure_closed_form, "casimir_pressure")),
    "casimir-energy": (
        "gap",
        _casimir_sweep(casimir.energy_density, casimir.energy_density_closed_form, "casimir_energy_density"),
    ),
    "dual-entropy": (
        "gap",
        _casimir_sweep(duality.dual_entropy_density, duality.dual_entropy_density_closed_form, "dual_entropy_density"),
    ),
    "planck-u": (
        "beta",
        _planck_sweep(blackbody.internal_energy_bb, blackbody.internal_energy_bb_closed_form, "blackbody_internal_energy"),
    ),
    "planck-p": ("beta", _planck_sweep(blackbody.pressure_bb, blackbody.pressure_bb_closed_form, "blackbody_pressure")),
    "planck-s": (
        "beta",
        _planck_sweep(
            blackbody.entropy_density,
            lambda s: 4.0 * blackbody.internal_energy_bb_closed_form(s) / (3.0 * s.T),
            "blackbody_entropy_density",
        ),
    ),
}


def _parse_range(text: str, convert: Callable[[str], float]):
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"range must look like min:max, got {text!r}")
    lo, hi = convert(parts[0]), convert(parts[1])
    return lo, hi


def sample_points(lo: float, hi: float, points: int, scale: str) -> np.ndarray:
    if points < 2:
        raise UsageError("--points must be >= 2")
    if not lo < hi:
        raise UsageError(f"range needs min < max, got {lo} and {hi}")
    if scale == "log":
        pts = np.geomspace(lo, hi, points)
    else:
        pts = np.linspace(lo, hi, points)
    pts[0], pts[-1] = lo, hi
    return pts


def cmd_sweep(args) -> list:
    kind, run = _SWEEPS[args.quantity]
    if kind == "gap":
        if args.gap is None:
            raise UsageError(f"{args.quantity} sweeps over --gap")
        lo, hi = _parse_range(args.gap, lambda t: _gap(t, args.units))
        pts = sample_points(lo, hi, args.points, args.scale)
    else:
        if args.beta is not None:
            lo, hi = _parse_range(args.beta, lambda t: _beta(t, args.units))
            pts = sample_points(lo, hi, args.points, args.scale)
        elif args.temperature is not None:
            lo, hi = _parse_range(args.temperature, lambda t: _natural_value(t, args.units, TEMPERATURE, "--temperature"))
            pts = 1.0 / sample_points(lo, hi, args.points, args.scale)
        else:
            raise UsageError(f"{args.quantity} sweeps over --beta or --temperature")
    cfg = _quad_cfg(args)
    return [run(float(x), cfg, args.method) for x in pts]


MODESUM_TOL = 1e-3


def cmd_modesum(args):
    l = _gap(args.gap, args.units)
    lambdas = None
    if args.lambdas:
        try:
            lambdas = tuple(_natural_value(t.strip(), args.units, LENGTH, "--lambda") for t in args.lambdas.split(","))
            reg = casimir.RegulatorConfig(lambdas=lambdas, extrapolation_order=args.order)
            reg.resolve(l)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        try:
            reg = casimir.RegulatorConfig(extrapolation_order=args.order)
            reg.resolve(l)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    result = casimir.regulated_mode_sum(l, reg, _quad_cfg(args))
    closed = casimir.energy_density_closed_form(l) * l
    rows = [
        _record("casimir_energy_per_area", v, "regulated_sum", None, {"gap": l, "lambda": lam})
        for lam, v in zip(result.lambdas, result.values)
    ]
    final = _record(
        "casimir_energy_per_area",
        result.extrapolated,
        "regulated_sum",
        closed,
        {"gap": l, "lambda": 0.0, "order": reg.extrapolation_order, "fit_residual": result.fit_residual},
    )
    return rows + [final], final.rel_residual <= MODESUM_TOL


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    return "%.11e" % x


def _param_text(params: dict) -> str:
    return " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in params.items())


def render_table(records: list, units: str) -> str:
    if units == "si":
        header = ("quantity", "value", "unit", "method", "rel_residual", "parameters")
        rows = [(r.quantity, "%.6e" % r.value_si, r.si_unit, r.method, _short(r.rel_residual), _param_text(r.parameters)) for r in records]
    else:
        header = ("quantity", "value_natural", "value_si", "method", "rel_residual", "parameters")
        rows = [
            (r.quantity, "%.10e" % r.value_natural, f"{r.value_si:.6e} {r.si_unit}", r.method, _short(r.rel_residual), _param_text(r.parameters))
            for r in records
        ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines)


def _short(x) -> str:
    return "" if x is None else "%.2e" % x


def render_csv(records: list) -> str:
    buf = io.StringIO()
    param_keys = []
    for r in records:
        for k in r.parameters:
            if k not in param_keys:
                param_keys.append(k)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(param_keys + ["quantity", "value_natural", "value_si", "si_unit", "method", "rel_residual"])
    for r in records:
        w.writerow(
            [_fmt(r.parameters.get(k)) if isinstance(r.parameters.get(k), float) else r.parameters.get(k, "") for k in param_keys]
            + [r.quantity, _fmt(r.value_natural), _fmt(r.value_si), r.si_unit, r.method, _fmt(r.rel_residual)]
        )
    return buf.getvalue().rstrip("\n")


def render_json(command: str, records: list) -> str:
    return json.dumps({"command": command, "records": [r.to_dict() for r in records]}, indent=2)


def _emit(command: str, records: list, args) -> None:
    if args.format == "json":
        print(render_json(command, records))
    elif args.format == "csv":
        print(render_csv(records))
    else:
        print(render_table(records, args.units))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "casimir":
            _emit("casimir", cmd_casimir(args), args)
        elif args.command == "planck":
            _emit("planck", cmd_planck(args), args)
        elif args.command == "sweep":
            _emit("sweep", cmd_sweep(args), args)
        elif args.command == "modesum":
            records, ok = cmd_modesum(args)
            _emit("modesum", records, args)
            if not ok:
                print(f"modesum: extrapolated value misses the closed form by more than {MODESUM_TOL:g}", file=sys.stderr)
                return 2
        elif args.command == "duality":
            report, ok = cmd_duality(args)
            if args.json or args.format == "json":
                print(json.dumps(report.to_dict(), indent=2))
            else:
                for k, v in report.to_dict().items():
                    print(f"{k:<20} {v:.12g}")
            if not ok:
                print("duality: residuals or inconsistency ratio outside tolerance", file=sys.stderr)
                return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
