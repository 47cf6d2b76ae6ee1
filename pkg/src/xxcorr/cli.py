"""Command-line front end: compute, scan, compare, verify; CSV/JSON output.

Precedence for every knob: built-in default < config file (flat key=value
lines, '#' comments) < command-line flag.  Grid points are dispatched to a
thread pool but gathered in grid order, so identical configurations produce
identical output bytes regardless of --threads.  Timing is only recorded
under --timing (wall_ms is 0 otherwise) to keep the default output
deterministic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import checks
from .errors import DomainError, XXCorrError, ConvergenceError, SingularSystemError
from .fredholm import formfactor_leading_term, fredholm_correlator
from .hightemp import (longitudinal_exact, longitudinal_highT,
                       transverse_closed_form, transverse_highT)
from .lattice import ed_longitudinal, ed_transverse
from .model import PhysicalParams

COMMANDS = ("asym", "closed", "fredholm", "ed", "longitudinal", "compare", "check")

_DEFAULTS = {
    "J": 1.0, "h": 1.0, "T": 10.0, "m": 0, "t": 0.1, "t_grid": None,
    "quad_nodes": 48, "N": 504, "L": 8, "threads": None, "format": "csv",
    "output": None, "timing": False, "methods": "asym,fredholm",
    "longitudinal_variant": "exact",
}


@dataclass
class RunConfig:
    command: str
    J: float = 1.0
    h: float = 1.0
    T: float = 10.0
    m: int = 0
    t_values: tuple[float, ...] = (0.1,)
    quad_nodes: int = 48
    N: int = 504
    L: int = 8
    threads: int = 1
    format: str = "csv"
    output: str | None = None
    timing: bool = False
    methods: tuple[str, ...] = ("asym", "fredholm")
    longitudinal_variant: str = "exact"

    def params(self) -> PhysicalParams:
        return PhysicalParams(J=self.J, h=self.h, T=self.T)


def _parse_grid(spec: str) -> tuple[float, ...]:
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise DomainError(f"bad t-grid {spec!r}, expected start:stop:count") from exc
    if count < 1:
        raise DomainError("t-grid count must be >= 1")
    if count == 1:
        return (start,)
    return tuple(start + (stop - start) * i / (count - 1) for i in range(count))


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{line_no}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


_COMPUTERS = {
    "asym": lambda cfg, m, t: transverse_highT(m, t, cfg.params(),
                                               quad_nodes=cfg.quad_nodes),
    "closed": lambda cfg, m, t: transverse_closed_form(m, t, cfg.params()),
    "fredholm": lambda cfg, m, t: fredholm_correlator(m, t, cfg.params(), N=cfg.N),
    "leading": lambda cfg, m, t: formfactor_leading_term(m, t, cfg.params(), N=cfg.N),
    "ed": lambda cfg, m, t: ed_transverse(m, t, cfg.params(), cfg.L),
    "ed-longitudinal": lambda cfg, m, t: ed_longitudinal(m, t, cfg.params(), cfg.L),
    "longitudinal": lambda cfg, m, t: longitudinal_exact(m, t, cfg.params(),
                                                         quad_nodes=cfg.quad_nodes),
    "longitudinal-highT": lambda cfg, m, t: longitudinal_highT(m, t, cfg.params()),
}


def _compute_row(cfg: RunConfig, method: str, m: int, t: float) -> dict:
    started = time.perf_counter()
    result = _COMPUTERS[method](cfg, m, t)
    wall_ms = (time.perf_counter() - started) * 1000.0 if cfg.timing else 0.0
    return {
        "m": m, "t": t, "method": method,
        "re": result.value.real, "im": result.value.imag,
        "error_estimate": result.error_estimate, "wall_ms": wall_ms,
    }


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _emit_csv(rows: list[dict], columns: list[str], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([
            _fmt(row[c]) if isinstance(row[c], float) else str(row[c])
            for c in columns
        ])


def _emit(rows: list[dict], columns: list[str], cfg: RunConfig) -> None:
    if cfg.format == "json":
        text = json.dumps(rows, indent=2, default=float) + "\n"
    else:
        buf = io.StringIO()
        _emit_csv(rows, columns, buf)
        text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_grid(cfg: RunConfig, methods: list[str]) -> list[dict]:
    tasks = [(method, cfg.m, t) for t in cfg.t_values for method in methods]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            futures = [pool.submit(_compute_row, cfg, *task) for task in tasks]
            return [f.result() for f in futures]
    return [_compute_row(cfg, *task) for task in tasks]


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    columns = ["m", "t", "method", "re", "im", "error_estimate", "wall_ms"]
    if cfg.command == "check":
        results = checks.run_all(cfg.params(), L=min(cfg.L, 8))
        ok = True
        for name, residual, tol, passed in results:
            ok &= passed
            print(f"{'PASS' if passed else 'FAIL'}  {name}: residual {residual:.3e} "
                  f"(tolerance {tol:.1e})")
        print(f"{sum(1 for r in results if r[3])}/{len(results)} invariants hold")
        return 0 if ok else 2
    if cfg.command == "compare":
        rows = []
        for t in cfg.t_values:
            pair = [_compute_row(cfg, method, cfg.m, t) for method in cfg.methods]
            a, b = pair[0], pair[1]
            va = complex(a["re"], a["im"])
            vb = complex(b["re"], b["im"])
            denom = max(abs(va), abs(vb), 1e-300)
            rows.append({
                "m": cfg.m, "t": t,
                "method": f"{cfg.methods[0]}|{cfg.methods[1]}",
                "re": va.real, "im": va.imag,
                "re_2": vb.real, "im_2": vb.imag,
                "rel_deviation": abs(va - vb) / denom,
                "wall_ms": a["wall_ms"] + b["wall_ms"],
            })
        _emit(rows, ["m", "t", "method", "re", "im", "re_2", "im_2",
                     "rel_deviation", "wall_ms"], cfg)
        return 0
    if cfg.command == "longitudinal":
        method = ("longitudinal" if cfg.longitudinal_variant == "exact"
                  else "longitudinal-highT")
        rows = _run_grid(cfg, [method])
    else:
        rows = _run_grid(cfg, [cfg.command])
    _emit(rows, columns, cfg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xxcorr",
        description="Transverse/longitudinal dynamical correlators of the XX chain")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in [
        ("asym", "high-temperature asymptotic pipeline"),
        ("closed", "closed Bessel forms (m <= 3)"),
        ("fredholm", "Fredholm-determinant evaluation"),
        ("ed", "finite-chain exact diagonalisation"),
        ("longitudinal", "longitudinal correlator"),
        ("compare", "two methods side by side"),
        ("check", "run the invariant suite"),
    ]:
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--J", type=float)
        p.add_argument("--h", type=float)
        p.add_argument("--T", type=float)
        p.add_argument("--m", type=int)
        p.add_argument("--t", type=float, help="single time point")
        p.add_argument("--t-grid", dest="t_grid", help="start:stop:count")
        p.add_argument("--quad-nodes", dest="quad_nodes", type=int)
        p.add_argument("--N", type=int, help="particle-contour quadrature budget")
        p.add_argument("--L", type=int, help="chain length for ed")
        p.add_argument("--threads", type=int)
        p.add_argument("--output", help="write table to this path")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--timing", action="store_true", default=None,
                       help="record wall-clock times (breaks byte determinism)")
        if name == "compare":
            p.add_argument("--methods", help="comma-separated pair, e.g. asym,fredholm")
        if name == "longitudinal":
            p.add_argument("--variant", dest="longitudinal_variant",
                           choices=("exact", "highT"))
    return parser


def _coerce(key: str, raw: str):
    kind = type(_DEFAULTS[key]) if _DEFAULTS.get(key) is not None else str
    if key in ("m", "quad_nodes", "N", "L", "threads"):
        return int(raw)
    if key in ("J", "h", "T", "t"):
        return float(raw)
    if key == "timing":
        return raw.lower() in ("1", "true", "yes")
    return kind(raw) if kind is not str else raw


def make_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, raw in _read_config_file(args.config).items():
            if key not in merged:
                raise DomainError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, raw)
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "t", None) is not None and getattr(args, "t_grid", None):
        raise DomainError("use either --t or --t-grid, not both")
    if merged["t_grid"]:
        t_values = _parse_grid(merged["t_grid"])
    else:
        t_values = (float(merged["t"]),)
    threads = merged["threads"]
    if threads is None:
        threads = int(os.environ.get("XXCORR_THREADS", "1"))
    methods = tuple(str(merged["methods"]).split(","))
    if args.command == "compare":
        if len(methods) != 2 or any(m not in _COMPUTERS for m in methods):
            raise DomainError(f"--methods must name two of {sorted(_COMPUTERS)}")
    return RunConfig(
        command=args.command, J=merged["J"], h=merged["h"], T=merged["T"],
        m=merged["m"], t_values=t_values, quad_nodes=merged["quad_nodes"],
        N=merged["N"], L=merged["L"], threads=max(1, threads),
        format=merged["format"], output=merged["output"],
        timing=bool(merged["timing"]), methods=methods,
        longitudinal_variant=merged["longitudinal_variant"])


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        return run(cfg)
    except (ConvergenceError, SingularSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except XXCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
