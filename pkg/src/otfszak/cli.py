"""Command-line front end: sweeps, single-path checks, and validation.

Commands
--------
sweep-speed   mean SE of both receivers versus UAS speed (CSV/JSON)
sweep-snr     mean SE versus rho in dB at fixed speed (CSV/JSON)
single-path   closed-form vs matrix SE report for one integer-Doppler path (JSON)
validate      run the self-validation suite (--quick for the fast subset)

Every data file starts with a header carrying the tool version, the full run
configuration, the seed, and a timestamp, so any output can be traced back to
the exact invocation. Set SOURCE_DATE_EPOCH to pin the timestamp for
byte-identical reruns. Worker count for the sweeps is capped by the
OTFS_THREADS environment variable.

Exit codes: 0 success, 1 validation/mismatch failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import se_two_step, se_zak_approx, single_path_closed_forms
from .channel import build_two_step_matrix, build_zak_matrix
from .grid import ChannelPath, GridConfig, PathSet, db_to_lin
from .uas import (
    DEFAULT_RHO_DB_GRID,
    DEFAULT_SPEED_GRID,
    SweepResult,
    UASConfig,
    sweep_rho,
    sweep_speed,
)
from .validate import run_checks

__all__ = ["main", "RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    """Echo of one invocation: command name, flat parameter map, seed."""

    command: str
    params: dict
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {"command": self.command, "seed": self.seed, **self.params}, sort_keys=True
        )


def _timestamp() -> str:
    """UTC timestamp; honors SOURCE_DATE_EPOCH for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return datetime.fromtimestamp(t, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _header_lines(run: RunConfig) -> list[str]:
    return [
        f"# otfszak {__version__}",
        f"# run_config: {run.to_json()}",
        f"# seed: {run.seed}",
        f"# timestamp: {_timestamp()}",
    ]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _sweep_rows(res: SweepResult) -> tuple[list[str], list[dict]]:
    columns = [
        res.axis_name,
        "se_zak_exact",
        "se_zak_exact_stderr",
        "se_zak_approx",
        "se_zak_approx_stderr",
        "se_twostep",
        "se_twostep_stderr",
        "trials",
        "seed",
    ]
    rows = []
    for i, v in enumerate(res.axis):
        rows.append({
            res.axis_name: float(v),
            "se_zak_exact": float(res.se_zak_exact[i]),
            "se_zak_exact_stderr": float(res.se_zak_exact_stderr[i]),
            "se_zak_approx": float(res.se_zak_approx[i]),
            "se_zak_approx_stderr": float(res.se_zak_approx_stderr[i]),
            "se_twostep": float(res.se_twostep[i]),
            "se_twostep_stderr": float(res.se_twostep_stderr[i]),
            "trials": res.trials,
            "seed": res.seed,
        })
    return columns, rows


def _write_sweep(res: SweepResult, run: RunConfig, out: str | None, fmt: str) -> None:
    columns, rows = _sweep_rows(res)
    if fmt == "csv":
        buf = io.StringIO()
        for line in _header_lines(run):
            buf.write(line + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        _emit(buf.getvalue(), out)
    else:
        doc = {
            "tool": f"otfszak {__version__}",
            "run_config": json.loads(run.to_json()),
            "seed": run.seed,
            "timestamp": _timestamp(),
            "columns": columns,
            "rows": rows,
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", out)


# =========================================================================
# Argument plumbing
# =========================================================================

_CONFIG_TYPES = {
    "seed": int,
    "trials": int,
    "rho_db": float,
    "speed": float,
    "k_db": float,
    "M": int,
    "N": int,
    "delta_f": float,
    "carrier_hz": float,
    "beamwidth_deg": float,
    "tau2_s": float,
    "out": str,
    "format": str,
    "speeds": str,
    "rhos_db": str,
    "q": int,
    "h1": complex,
}


def _load_config(path: str) -> dict:
    """key=value override file; '#' comments and blank lines allowed."""
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            overrides[key] = _CONFIG_TYPES[key](value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return overrides


def _add_shared(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--seed", type=int, default=0, help="base RNG seed (u64)")
    sp.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials per point")
    sp.add_argument("--rho-db", type=float, default=10.0, help="SNR rho in dB")
    sp.add_argument("--speed", type=float, default=400.0, help="UAS speed in m/s")
    sp.add_argument("--k-db", type=float, default=15.0, help="Rician K factor in dB")
    sp.add_argument("--M", type=int, default=15, help="delay bins (subcarriers)")
    sp.add_argument("--N", type=int, default=46, help="Doppler bins (symbols)")
    sp.add_argument("--delta-f", type=float, default=2000.0, help="subcarrier spacing in Hz")
    sp.add_argument("--carrier-hz", type=float, default=5.06e9, help="carrier frequency")
    sp.add_argument("--beamwidth-deg", type=float, default=3.5, help="reflection beamwidth")
    sp.add_argument("--tau2-s", type=float, default=33.0e-6, help="reflection path delay")
    sp.add_argument("--out", type=str, default=None, help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    sp.add_argument("--config", type=str, default=None, help="key=value override file")


def _parse_float_list(text: str, what: str, parser: argparse.ArgumentParser) -> list[float]:
    items = [part.strip() for part in text.split(",")]
    values = []
    for part in items:
        if not part:
            continue
        try:
            values.append(float(part))
        except ValueError:
            parser.error(f"bad {what} value {part!r}")
    if not values:
        parser.error(f"empty {what} list")
    return values


def _grid(args: argparse.Namespace) -> GridConfig:
    return GridConfig(M=args.M, N=args.N, delta_f=args.delta_f)


def _scenario(args: argparse.Namespace) -> UASConfig:
    return UASConfig(
        carrier_hz=args.carrier_hz,
        speed_mps=args.speed,
        k_db=args.k_db,
        beamwidth_deg=args.beamwidth_deg,
        tau2_s=args.tau2_s,
        grid=_grid(args),
    )


def _scenario_params(args: argparse.Namespace) -> dict:
    return {
        "M": args.M,
        "N": args.N,
        "delta_f": args.delta_f,
        "carrier_hz": args.carrier_hz,
        "k_db": args.k_db,
        "beamwidth_deg": args.beamwidth_deg,
        "tau2_s": args.tau2_s,
        "trials": args.trials,
        "format": args.format,
    }


# =========================================================================
# Commands
# =========================================================================

def _cmd_sweep_speed(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    speeds = (
        _parse_float_list(args.speeds, "speed", parser)
        if args.speeds is not None
        else list(DEFAULT_SPEED_GRID)
    )
    res = sweep_speed(
        _scenario(args),
        speeds=speeds,
        rho=db_to_lin(args.rho_db),
        trials=args.trials,
        seed=args.seed,
    )
    params = {**_scenario_params(args), "speeds": speeds, "rho_db": args.rho_db}
    _write_sweep(res, RunConfig("sweep-speed", params, args.seed), args.out, args.format)
    return 0


def _cmd_sweep_snr(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    rhos_db = (
        _parse_float_list(args.rhos_db, "rho", parser)
        if args.rhos_db is not None
        else list(DEFAULT_RHO_DB_GRID)
    )
    res = sweep_rho(
        _scenario(args),
        rhos_db=rhos_db,
        trials=args.trials,
        seed=args.seed,
    )
    params = {**_scenario_params(args), "rhos_db": rhos_db, "speed": args.speed}
    _write_sweep(res, RunConfig("sweep-snr", params, args.seed), args.out, args.format)
    return 0


def _cmd_single_path(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if not (0 <= args.q < args.M):
        parser.error(f"q must lie in [0, M): got q={args.q}, M={args.M}")
    if args.format == "csv":
        parser.error("single-path emits a JSON report; use --format json")
    cfg = _grid(args)
    rho = db_to_lin(args.rho_db)
    h1 = complex(args.h1)
    forms = single_path_closed_forms(args.q, cfg.M, h1, rho)
    paths = PathSet((ChannelPath(h1, 0.0, args.q * cfg.delta_f),))
    c_two = se_two_step(build_two_step_matrix(paths, cfg), rho).se_bits_per_sec_per_hz
    c_zak = se_zak_approx(build_zak_matrix(paths, cfg), rho, cfg).se_bits_per_sec_per_hz

    H = build_two_step_matrix(paths, cfg).matrix
    eigs = np.linalg.eigvalsh(H.conj().T @ H)
    power = abs(h1) ** 2
    nonzero = int(np.sum(eigs > 0.5 * power))
    residual = float(
        np.max(np.minimum(np.abs(eigs), np.abs(eigs - power)))
    )
    mult_nonzero = nonzero / cfg.N
    mult_zero = (cfg.size - nonzero) / cfg.N
    err_two = abs(c_two - forms.c_two_step)
    err_zak = abs(c_zak - forms.c_zak)
    mismatch = (
        err_two > 1e-6
        or err_zak > 1e-6
        or mult_nonzero != cfg.M - args.q
        or mult_zero != args.q
        or residual > 1e-6
    )
    params = {
        "M": args.M,
        "N": args.N,
        "delta_f": args.delta_f,
        "q": args.q,
        "rho_db": args.rho_db,
        "h1": [h1.real, h1.imag],
        "format": "json",
    }
    run = RunConfig("single-path", params, args.seed)
    doc = {
        "tool": f"otfszak {__version__}",
        "run_config": json.loads(run.to_json()),
        "seed": args.seed,
        "timestamp": _timestamp(),
        "closed_form": {"se_twostep": forms.c_two_step, "se_zak": forms.c_zak},
        "matrix": {"se_twostep": c_two, "se_zak": c_zak},
        "abs_error": {"se_twostep": err_two, "se_zak": err_zak},
        "gram_eigenvalues": {
            "nonzero_value": power,
            "nonzero_multiplicity_per_delay_block": mult_nonzero,
            "zero_multiplicity_per_delay_block": mult_zero,
            "max_residual": residual,
        },
        "mismatch": bool(mismatch),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 1 if mismatch else 0


def _cmd_validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    mode = "quick" if args.quick else "full"
    print(f"# otfszak {__version__} validate ({mode}, seed {args.seed})")
    results = run_checks(quick=args.quick, seed=args.seed)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.2f} s): {r.detail}")
    failed = sum(not r.passed for r in results)
    total = sum(r.seconds for r in results)
    print(f"{len(results) - failed} passed, {failed} failed in {total:.1f} s")
    return 1 if failed else 0


def _build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="otfszak",
        description="OTFS link simulator: two-step vs direct Zak delay-Doppler receivers.",
    )
    parser.add_argument("--version", action="version", version=f"otfszak {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = []

    sp = sub.add_parser("sweep-speed", help="mean SE versus UAS speed at fixed rho")
    _add_shared(sp)
    sp.add_argument("--speeds", type=str, default=None, help="comma-separated speeds in m/s")
    sp.set_defaults(handler=_cmd_sweep_speed)
    subparsers.append(sp)

    sp = sub.add_parser("sweep-snr", help="mean SE versus rho at fixed speed")
    _add_shared(sp)
    sp.add_argument("--rhos-db", type=str, default=None, help="comma-separated rho values in dB")
    sp.set_defaults(handler=_cmd_sweep_snr)
    subparsers.append(sp)

    sp = sub.add_parser("single-path", help="closed-form vs matrix SE for one on-grid path")
    _add_shared(sp)
    sp.add_argument("--q", type=int, default=3, help="integer Doppler in subcarrier units")
    sp.add_argument("--h1", type=complex, default=1.0 + 0.0j, help="path gain (complex ok)")
    sp.set_defaults(handler=_cmd_single_path, format="json")
    subparsers.append(sp)

    sp = sub.add_parser("validate", help="run the self-validation suite")
    _add_shared(sp)
    sp.add_argument("--quick", action="store_true", help="fast subset of checks")
    sp.set_defaults(handler=_cmd_validate)
    subparsers.append(sp)
    return parser, subparsers


def main(argv: list[str] | None = None) -> int:
    parser, subparsers = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)

    # A config file supplies defaults only; explicit flags still win because
    # set_defaults is applied before the real parse.
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=str, default=None)
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config:
            overrides = _load_config(known.config)
            for sp in subparsers:
                sp.set_defaults(**overrides)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        return args.handler(args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
