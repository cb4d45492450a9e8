"""Command-line interface: ``qheat {zeta,heat,asym,oracle,reproduce}``.

Reports are CSV (default) or JSON (schema ``qheat/1``), with every float
printed to 17 significant digits so that output round-trips and identical
configurations give byte-identical files.  A flat ``key = value`` config file
(``#`` comments) may supply any long option; command-line flags override it.

Exit codes: 0 success, 1 a check or comparison failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import models as M
from .asymptotics import DEFAULT_GRID, AsymptoticsError, analyse
from .heat_traces import (
    heat_trace_for,
    torus_heat_trace,
    torus_trace,
)
from .oracle import (
    SUQ2_SAMPLES,
    TOEPLITZ_SAMPLES,
    OracleRegionError,
    compare_suq2,
    compare_toeplitz,
)
from .reproduce import run_checks
from .special_functions import DomainError, PoleError, default_precision
from .zeta_traces import LaurentError, ZetaFunction, laurent_at, zeta_eval

__all__ = ["main", "build_parser", "RunConfig", "load_config", "cmd_zeta", "cmd_heat",
           "cmd_asymptotics", "cmd_oracle", "cmd_reproduce", "SCHEMA"]

SCHEMA = "qheat/1"
MODELS = ("toeplitz", "heisenberg", "heisenberg-r", "nctorus", "nctorus-c", "suq2", "torus")
OPS = ("identity", "laplacian", "radial2")


class UsageError(Exception):
    """Invalid configuration (exit code 2)."""


@dataclass
class RunConfig:
    """Fully resolved settings for one command."""

    command: str
    model: str = "toeplitz"
    N: int = 1
    Tf: int = 0
    r: float = 1.0
    op: str = "identity"
    gauge: str = "radial"
    delta: tuple[float, ...] = (1.0,)
    z: tuple[complex, ...] = ()
    t: tuple[float, ...] = ()
    tol: float | None = None
    out: str | None = None
    format: str = "csv"
    only: tuple[str, ...] = ()
    precision_bits: int = 53
    extra: dict[str, Any] = field(default_factory=dict)


# --------------------------------------------------------------------------
# parsing


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _t_grid(text: str) -> tuple[float, ...]:
    """``start:stop:count`` with logarithmic spacing (inclusive)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("t-grid must be start:stop:count")
    start, stop = _positive_float(parts[0]), _positive_float(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError("count must be an integer") from exc
    if count < 1:
        raise argparse.ArgumentTypeError("count must be positive")
    if count == 1:
        return (start,)
    return tuple(float(x) for x in np.geomspace(start, stop, count))


def _delta(text: str) -> tuple[float, ...]:
    vals = tuple(_positive_float(x) for x in text.split(",") if x.strip())
    if not vals:
        raise argparse.ArgumentTypeError("delta needs at least one value")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--N", type=int)
    common.add_argument("--Tf", type=int)
    common.add_argument("--r", type=_positive_float)
    common.add_argument("--op", choices=OPS, help="operator for `zeta` (default identity)")
    common.add_argument("--gauge", choices=("radial", "separable"))
    common.add_argument("--delta", type=_delta, help="gauge scaling(s), comma separated")
    common.add_argument("--z", type=_complex, action="append", help="gauge parameter (repeatable)")
    common.add_argument("--t", type=_positive_float, action="append", help="time (repeatable)")
    common.add_argument("--t-grid", dest="t_grid", type=_t_grid, help="start:stop:count, log spaced")
    common.add_argument("--tol", type=_positive_float)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="qheat", description="Zeta-regularized traces and heat traces "
                                     "of quantum-semigroup models.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("zeta", parents=[common], help="evaluate gauged zeta functions")
    sub.add_parser("heat", parents=[common], help="evaluate heat traces")
    sub.add_parser("asym", parents=[common], help="small-t pole order and leading coefficient")
    sub.add_parser("oracle", parents=[common], help="compare direct sums with continued forms")
    rep = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    rep.add_argument("--only", action="append", help="criterion ids or tags (e.g. 3, toeplitz-trace)")
    return parser


def load_config(path: str | os.PathLike) -> dict[str, str]:
    """Read ``key = value`` lines (UTF-8, ``#`` comments, blank lines ignored)."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_CONVERTERS = {
    "model": str, "N": int, "Tf": int, "r": _positive_float, "op": str, "gauge": str,
    "delta": _delta, "tol": _positive_float, "out": str, "format": str,
    "z": lambda s: [_complex(x) for x in s.split(",") if x.strip()],
    "t": lambda s: [_positive_float(x) for x in s.split(",") if x.strip()],
    "t_grid": _t_grid,
    "only": lambda s: [x.strip() for x in s.split(",") if x.strip()],
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge config-file values with flags (flags win) into a :class:`RunConfig`."""
    file_vals: dict[str, Any] = {}
    if args.config:
        try:
            raw = load_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        for key, value in raw.items():
            if key not in _CONVERTERS:
                raise UsageError(f"unknown config key {key!r}")
            try:
                file_vals[key] = _CONVERTERS[key](value)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc

    def pick(name, default):
        v = getattr(args, name, None)
        if v is not None:
            return v
        return file_vals.get(name, default)

    cfg = RunConfig(command=args.command)
    cfg.model = pick("model", cfg.model)
    if cfg.model not in MODELS:
        raise UsageError(f"unknown model {cfg.model!r}")
    cfg.N = int(pick("N", cfg.N))
    cfg.Tf = int(pick("Tf", cfg.Tf))
    cfg.r = float(pick("r", cfg.r))
    cfg.op = pick("op", cfg.op)
    cfg.gauge = pick("gauge", cfg.gauge)
    cfg.delta = tuple(pick("delta", cfg.delta))
    cfg.z = tuple(pick("z", []))
    ts = list(pick("t", []))
    grid = pick("t_grid", None)
    if grid:
        ts.extend(grid)
    cfg.t = tuple(ts)
    cfg.tol = pick("tol", None)
    cfg.out = pick("out", None)
    cfg.format = pick("format", cfg.format)
    cfg.only = tuple(pick("only", []))
    if cfg.op not in OPS or cfg.gauge not in ("radial", "separable") or cfg.format not in ("csv", "json"):
        raise UsageError("invalid op, gauge or format")
    if cfg.N < 0 or cfg.Tf < 0:
        raise UsageError("N and Tf must be nonnegative")
    cfg.precision_bits = default_precision().bits
    return cfg


# --------------------------------------------------------------------------
# models


def _model(cfg: RunConfig) -> M.SpectralModel:
    name = cfg.model
    if name != "toeplitz" and name != "suq2" and cfg.N < 1:
        raise UsageError(f"model {name} needs N >= 1")
    if name == "toeplitz":
        return M.toeplitz()
    if name == "heisenberg":
        return M.heisenberg(cfg.N)
    if name == "heisenberg-r":
        return M.reduced_heisenberg(cfg.N)
    if name == "nctorus":
        return M.nc_torus(cfg.N, cfg.Tf)
    if name in ("nctorus-c", "torus"):
        return M.nc_torus_complex(cfg.N)
    if name == "suq2":
        return M.suq2(cfg.r)
    raise UsageError(f"unknown model {name!r}")


def _operator(cfg: RunConfig, model: M.SpectralModel) -> M.PolyhomOperator:
    if cfg.op == "laplacian":
        return M.laplacian_operator(model)
    if cfg.op == "radial2":
        return M.radial_symbol(2)
    return M.radial_symbol(0)


def _gauge(cfg: RunConfig, model: M.SpectralModel) -> M.GaugeSpec:
    if cfg.gauge == "radial":
        if len(cfg.delta) != 1:
            raise UsageError("a radial gauge takes a single --delta")
        return M.GaugeSpec.radial(cfg.delta[0])
    delta = cfg.delta * model.family.dim if len(cfg.delta) == 1 else cfg.delta
    return M.GaugeSpec.separable(delta)


# --------------------------------------------------------------------------
# commands (each returns (columns, rows, ok))


Report = tuple[list[str], list[dict[str, Any]], bool]


def cmd_zeta(cfg: RunConfig) -> Report:
    model = _model(cfg)
    zf = ZetaFunction(model, _operator(cfg, model), _gauge(cfg, model))
    cols = ["z_re", "z_im", "value_re", "value_im", "error_bound", "near_pole", "order",
            "residue_re", "residue_im", "finite_part_re", "finite_part_im"]
    rows = []
    for z in cfg.z:
        row: dict[str, Any] = {"z_re": z.real, "z_im": z.imag}
        arg = z if cfg.gauge == "radial" else [z] * len(zf.gauge.delta)
        try:
            v = zeta_eval(zf, arg)
            row.update(value_re=complex(v.value).real, value_im=complex(v.value).imag,
                       error_bound=v.error_bound, near_pole=False)
        except PoleError as exc:
            pole = getattr(exc, "location", None)
            if pole is not None and cfg.gauge == "radial":
                arg = pole
            try:
                ld = laurent_at(zf, arg)
            except LaurentError as exc:
                raise UsageError(f"cannot resolve the singularity at z={z}: {exc}") from exc
            row.update(near_pole=True, order=ld.order, residue_re=complex(ld.residue).real,
                       residue_im=complex(ld.residue).imag, finite_part_re=complex(ld.finite_part).real,
                       finite_part_im=complex(ld.finite_part).imag, error_bound=ld.error_estimate)
        rows.append(row)
    return cols, rows, True


def _heat_trace(cfg: RunConfig):
    if cfg.model == "torus":
        return torus_trace(cfg.N)
    return heat_trace_for(_model(cfg))


def cmd_heat(cfg: RunConfig) -> Report:
    cols = ["t", "value", "error_bound"]
    rows = []
    if cfg.model == "torus":
        for t in cfg.t:
            v = torus_heat_trace(cfg.N, t)
            rows.append({"t": t, "value": v.value, "error_bound": v.error_bound})
        return cols, rows, True
    tr = _heat_trace(cfg)
    for t in cfg.t:
        v = tr(t)
        rows.append({"t": t, "value": v.value, "error_bound": v.error_bound})
    return cols, rows, True


def cmd_asymptotics(cfg: RunConfig) -> Report:
    if cfg.model == "torus" and cfg.N < 1:
        raise UsageError("asym needs N >= 1 for the torus")
    tr = _heat_trace(cfg)
    grid = cfg.t if cfg.t else DEFAULT_GRID
    res = analyse(tr, grid)
    cols = ["model", "pole_order", "leading_coefficient", "leading_error", "fit_residual", "confident",
            "t_min", "t_max", "grid_points"]
    row = {"model": tr.name, "pole_order": res.pole_order, "leading_coefficient": res.leading_coefficient,
           "leading_error": res.leading_error, "fit_residual": res.fit_residual, "confident": res.confident,
           "t_min": min(res.grid), "t_max": max(res.grid), "grid_points": len(res.grid)}
    return cols, [row], res.confident


def cmd_oracle(cfg: RunConfig) -> Report:
    cols = ["model", "z", "t", "direct", "direct_bound", "continued", "continued_bound", "difference", "agree"]
    rows = []
    if cfg.model == "toeplitz":
        tol = cfg.tol or 1e-10
        if cfg.z or cfg.t:
            z2s = [z.real for z in cfg.z] or [-2.0]
            samples = [((0.0, z2), t) for z2 in z2s for t in (cfg.t or (1.0,))]
        else:
            samples = list(TOEPLITZ_SAMPLES)
        comps = [compare_toeplitz(z[1], t, tol) for z, t in samples]
    elif cfg.model == "suq2":
        tol = cfg.tol or 1e-8
        if cfg.z or cfg.t:
            z2s = [z.real for z in cfg.z] or [-2.0]
            samples = [((-1.0, z2, -1.0), t) for z2 in z2s for t in (cfg.t or (1.0,))]
        else:
            samples = list(SUQ2_SAMPLES)
        comps = [compare_suq2(z, cfg.r, t, tol) for z, t in samples]
    else:
        raise UsageError("oracle comparisons exist for --model toeplitz and --model suq2")
    for c in comps:
        rows.append({"model": c.model, "z": ";".join(_fmt(complex(x).real) for x in c.z), "t": c.t,
                     "direct": complex(c.direct_value.value).real, "direct_bound": c.direct_value.error_bound,
                     "continued": complex(c.closedform_value.value).real,
                     "continued_bound": c.closedform_value.error_bound,
                     "difference": c.difference, "agree": bool(c.agree)})
    return cols, rows, all(bool(c.agree) for c in comps)


def cmd_reproduce(cfg: RunConfig) -> Report:
    try:
        results = run_checks(cfg.only or None)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cols = ["id", "title", "passed", "measured", "tolerance"]
    rows = [{k: getattr(r, k) for k in cols} for r in results]
    return cols, rows, all(r.passed for r in results)


COMMANDS = {"zeta": cmd_zeta, "heat": cmd_heat, "asym": cmd_asymptotics, "oracle": cmd_oracle,
            "reproduce": cmd_reproduce}


# --------------------------------------------------------------------------
# output


def _fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # normalise -0.0
        if math.isnan(x) or math.isinf(x):
            return "null"
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _json(x: Any, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f'{pad}{_json(str(k))}: {_json(v, indent + 1)}' for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        return "[\n" + ",\n".join(pad + _json(v, indent + 1) for v in x) + "\n" + end + "]"
    if isinstance(x, str):
        return json.dumps(x)
    if x is None:
        return "null"
    return _fmt(x)


def render(cfg: RunConfig, cols: Sequence[str], rows: Sequence[dict[str, Any]], ok: bool) -> str:
    if cfg.format == "json":
        doc = {
            "schema": SCHEMA,
            "command": cfg.command,
            "config": {"model": cfg.model, "N": cfg.N, "Tf": cfg.Tf, "r": cfg.r, "op": cfg.op,
                       "gauge": cfg.gauge, "delta": list(cfg.delta), "precision_bits": cfg.precision_bits},
            "ok": ok,
            "rows": [{c: row.get(c) for c in cols} for row in rows],
        }
        return _json(doc) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        cfg = resolve_config(args)
        cols, rows, ok = COMMANDS[cfg.command](cfg)
    except (UsageError, M.ModelError, DomainError, OracleRegionError) as exc:
        print(f"qheat: error: {exc}", file=sys.stderr)
        return 2
    except AsymptoticsError as exc:
        print(f"qheat: analysis failed: {exc}", file=sys.stderr)
        return 1
    if cfg.command == "reproduce" and cfg.format == "csv" and not cfg.out:
        for r in run_rows_to_lines(rows):
            print(r, file=sys.stderr)
    _emit(cfg, render(cfg, cols, rows, ok))
    return 0 if ok else 1


def run_rows_to_lines(rows: Sequence[dict[str, Any]]) -> list[str]:
    """Human-readable summary lines for reproduce results."""
    return [f"[{'PASS' if r['passed'] else 'FAIL'}] {r['id']:>4}  {r['title']}: {r['measured']}" for r in rows]


if __name__ == "__main__":
    sys.exit(main())
