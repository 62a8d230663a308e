"""Command-line front end.

Four command groups: `bounds` evaluates certificates, `simulate` runs seeded
Monte Carlo experiments, `verify` executes the bound-check battery, and
`compare-tables` scores computed values against the bundled reference
tables. Every run is deterministic given its flags and seed; the only
non-reproducible output lives under the single JSON key "timestamp".

Exit codes: 0 success, 1 usage error, 2 domain or side-condition error,
3 at least one verified bound violated.

Flags may also be supplied through `--config FILE.json` whose keys are the
snake_case spellings of the kebab-case flags; explicit flags win. Numeric
values accept fraction strings such as 1/3. The fully resolved
configuration is echoed both into the primary JSON payload and into a
sibling `*-config.json` file in the output directory.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence

from .errors import ComputationError, DomainError, SideConditionError
from .gauss_frame_bounds import nerf_certificate, square_nerf_certificate
from .kernels import gaussian, subseed
from .monte_carlo import (
    SimConfig,
    VERIFY_FAMILIES,
    default_verification_suite,
    mp_edge_cond,
    run_nerf_sim,
    run_square_sim,
    square_cond_q90_estimate,
    verify_jl,
    verify_srip,
)
from .pm1_bounds import ErasureLevel, jl_certificate, srip_certificate

SCHEMA_VERSION = 1
DEFAULT_SEED = 20260818
REFERENCE_NU = 0.1
REFERENCE_LAMBDA_GRID = ("1/5", "1/3", "1/2", "2/3", "4/5")


class UsageError(Exception):
    """Bad flags or config; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2 (2 means domain error here)
    def error(self, message):
        raise UsageError(message)


_DEST_FLAGS = {"lam": "lambda", "fmt": "format"}


def _flag(dest: str) -> str:
    return _DEST_FLAGS.get(dest, dest.replace("_", "-"))


def _as_float(value, flag: str) -> float:
    if isinstance(value, bool):
        raise UsageError(f"--{flag} expects a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(Fraction(str(value).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{flag}: cannot read {value!r} as a number") from exc


def _as_int(value, flag: str) -> int:
    if isinstance(value, bool):
        raise UsageError(f"--{flag} expects an integer, got {value!r}")
    if isinstance(value, int):
        return value
    try:
        f = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{flag}: cannot read {value!r} as an integer") from exc
    if f.denominator != 1:
        raise UsageError(f"--{flag} must be an integer, got {value!r}")
    return int(f)


def _as_fraction(value, flag: str) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{flag}: cannot read {value!r} as a number") from exc


def _req(args, dest: str, conv: Callable):
    value = getattr(args, dest)
    if value is None:
        raise UsageError(f"missing required flag --{_flag(dest)}")
    return conv(value, _flag(dest))


def _opt(args, dest: str, conv: Callable, default):
    value = getattr(args, dest)
    if value is None:
        return default
    return conv(value, _flag(dest))


def _positive_trials(args) -> int:
    trials = _req(args, "trials", _as_int)
    if trials < 1:
        raise UsageError(f"--trials must be at least 1, got {trials}")
    return trials


def _quantile_levels(value, flag: str) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise UsageError(f"--{flag} expects a comma list of levels in (0,1)")
    if not parts:
        raise UsageError(f"--{flag} expects at least one level")
    return tuple(_as_float(p, flag) for p in parts)


def _apply_config(args: argparse.Namespace, leaf: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    path = Path(args.config)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    try:
        loaded = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    key_to_dest = {}
    for action in leaf._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                key_to_dest[opt[2:].replace("-", "_")] = action.dest
    unknown = sorted(set(loaded) - set(key_to_dest))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    for key, value in loaded.items():
        dest = key_to_dest[key]
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)


class _Run:
    """Shared output plumbing: resolved seed, format, and artifact sinks."""

    def __init__(self, args, command: str, default_fmt: str = "json"):
        self.command = command
        self.started = time.perf_counter()
        seed = _opt(args, "seed", _as_int, DEFAULT_SEED)
        if not 0 <= seed < 2**64:
            raise UsageError(f"--seed must fit in 64 unsigned bits, got {seed}")
        self.seed = seed
        self.fmt = args.fmt if args.fmt else default_fmt
        self.out_dir = Path(args.out) if args.out else Path.cwd()
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.config: dict = {}

    def emit(self, result: dict, basename: str, stdout_text: Optional[str] = None) -> None:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "result": result,
            "timestamp": {
                "generated_at": datetime.now(timezone.utc).isoformat(),
                "elapsed_seconds": time.perf_counter() - self.started,
            },
        }
        text = json.dumps(payload, indent=2) + "\n"
        (self.out_dir / f"{basename}.json").write_text(text)
        echo = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
        }
        (self.out_dir / f"{basename}-config.json").write_text(json.dumps(echo, indent=2) + "\n")
        if stdout_text is not None:
            print(stdout_text, end="" if stdout_text.endswith("\n") else "\n")
        elif self.fmt == "csv":
            flat = _flatten(result)
            csv_text = _csv_text(list(flat.keys()), [list(flat.values())])
            (self.out_dir / f"{basename}.csv").write_text(csv_text)
            print(csv_text, end="")
        else:
            print(text, end="")


def _flatten(d: dict, prefix: str = "") -> dict:
    out: dict = {}
    for k, v in d.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            out.update(_flatten(v, key))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _cell(value) -> str:
    return "" if value is None else str(value)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _svg_curve(xs, ys, title: str, xlabel: str, ylabel: str) -> str:
    """Minimal standalone plot: two axes and one polyline."""
    width, height = 640, 400
    ml, mr, mt, mb = 75, 20, 35, 50
    log_y = min(ys) > 0 and max(ys) / min(ys) > 100.0
    ty = [math.log10(y) for y in ys] if log_y else list(ys)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ty), max(ty)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def sy(y: float) -> float:
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ty))
    y_name = f"log10({ylabel})" if log_y else ylabel
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black" stroke-width="1"/>',
        f'<text x="{(ml + width - mr) / 2:.0f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>',
        f'<text x="18" y="{(mt + height - mb) / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {(mt + height - mb) / 2:.0f})">{y_name}</text>',
        f'<text x="{ml}" y="{height - mb + 16}" text-anchor="middle" font-size="11">{x0:.3g}</text>',
        f'<text x="{width - mr}" y="{height - mb + 16}" text-anchor="middle" '
        f'font-size="11">{x1:.3g}</text>',
        f'<text x="{ml - 6}" y="{height - mb}" text-anchor="end" font-size="11">{y0:.3g}</text>',
        f'<text x="{ml - 6}" y="{mt + 4}" text-anchor="end" font-size="11">{y1:.3g}</text>',
        f'<polyline points="{points}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def _load_reference() -> dict:
    data = resources.files("erasurelab.data").joinpath("reference_tables.json")
    return json.loads(data.read_text())


def _erasure_level(beta: float, alpha: float, clamp: bool) -> ErasureLevel:
    if clamp:
        try:
            return ErasureLevel(beta=beta, alpha=alpha)
        except DomainError:
            return ErasureLevel.unchecked(beta=beta, alpha=alpha)
    return ErasureLevel(beta=beta, alpha=alpha)


# ---------------------------------------------------------------- bounds


def cmd_bounds_srip(args) -> int:
    run = _Run(args, "bounds srip")
    beta = _req(args, "beta", _as_float)
    alpha = _req(args, "alpha", _as_float)
    s = _req(args, "s", _as_int)
    m = _req(args, "m", _as_int)
    n = _req(args, "n", _as_int)
    eps = _req(args, "eps", _as_float)
    clamp = bool(getattr(args, "clamp", None))
    run.config = {
        "beta": beta, "alpha": alpha, "s": s, "m": m, "n": n, "eps": eps,
        "clamp": clamp, "seed": run.seed, "format": run.fmt,
    }
    level = _erasure_level(beta, alpha, clamp)
    cert = srip_certificate(level, s=s, m=m, n=n, epsilon=eps, clamp=clamp)
    run.emit({"certificate": asdict(cert)}, "srip-certificate")
    return 0


def _reference_comparison(lam: Fraction, beta: Fraction, computed_c: float) -> Optional[dict]:
    for table in _load_reference()["certificate_tables"]:
        for cell in table["cells"]:
            if Fraction(cell["lambda"]) == lam and Fraction(cell["beta"]) == beta:
                ref = cell["C"]
                return {
                    "table": table["table"],
                    "lambda": cell["lambda"],
                    "beta": cell["beta"],
                    "reference_C": ref,
                    "computed_C": computed_c,
                    "relative_gap": (computed_c - ref) / abs(ref),
                }
    return None


def cmd_bounds_nerf(args) -> int:
    run = _Run(args, "bounds nerf")
    nu = _req(args, "nu", _as_float)
    lam_frac = _req(args, "lam", _as_fraction)
    beta_frac = _req(args, "beta", _as_fraction)
    m = _opt(args, "m", _as_int, None)
    sweep = bool(getattr(args, "sweep", None))
    run.config = {
        "nu": nu, "lambda": str(lam_frac), "beta": str(beta_frac), "m": m,
        "sweep": sweep, "seed": run.seed, "format": run.fmt,
    }
    if not sweep:
        try:
            cert = nerf_certificate(nu, float(lam_frac), float(beta_frac), m=m)
        except SideConditionError as exc:
            raise SideConditionError(
                f"{exc.inequality}; see `erasurelab bounds square`"
            ) from exc
        result = {
            "certificate": asdict(cert),
            "comparison": _reference_comparison(lam_frac, beta_frac, cert.C),
        }
        run.emit(result, "nerf-certificate")
        return 0

    ratio = beta_frac / lam_frac
    if not 0 < ratio < 1:
        raise UsageError(f"sweep needs 0 < beta/lambda < 1, got {ratio}")
    rows = []
    for lam_str in REFERENCE_LAMBDA_GRID:
        lam = Fraction(lam_str)
        beta = ratio * lam
        cert = nerf_certificate(nu, float(lam), float(beta))
        rows.append([lam_str, str(beta), cert.alpha, cert.R, cert.P, cert.C])
    csv_text = _csv_text(["lambda", "beta", "alpha", "R", "P", "C"], rows)
    (run.out_dir / "nerf-sweep.csv").write_text(csv_text)

    curve_x, curve_y = [], []
    for i in range(33):
        lam = 0.18 + (0.82 - 0.18) * i / 32
        try:
            cert = nerf_certificate(nu, lam, float(ratio) * lam)
        except (SideConditionError, ComputationError):
            continue
        curve_x.append(lam)
        curve_y.append(cert.C)
    svg = _svg_curve(
        curve_x, curve_y,
        f"C(nu, lambda, beta) at beta/lambda = {ratio}, nu = {nu:g}",
        "lambda", "C",
    )
    (run.out_dir / "nerf-sweep.svg").write_text(svg)
    run.emit(
        {
            "sweep": [
                {"lambda": r[0], "beta": r[1], "alpha": r[2], "R": r[3], "P": r[4], "C": r[5]}
                for r in rows
            ],
            "artifacts": ["nerf-sweep.csv", "nerf-sweep.svg"],
        },
        "nerf-sweep",
        stdout_text=csv_text,
    )
    return 0


def cmd_bounds_square(args) -> int:
    run = _Run(args, "bounds square")
    alpha = _req(args, "alpha", _as_float)
    c = _req(args, "c", _as_float)
    lam = _req(args, "lam", _as_float)
    m = _req(args, "m", _as_int)
    run.config = {
        "alpha": alpha, "c": c, "lambda": lam, "m": m, "seed": run.seed, "format": run.fmt,
    }
    cert = square_nerf_certificate(alpha, c, lam, m)
    run.emit({"certificate": asdict(cert)}, "square-certificate")
    return 0


def cmd_bounds_jl(args) -> int:
    run = _Run(args, "bounds jl")
    beta = _req(args, "beta", _as_float)
    alpha = _req(args, "alpha", _as_float)
    n_points = _req(args, "n_points", _as_int)
    n = _req(args, "n", _as_int)
    clamp = bool(getattr(args, "clamp", None))
    run.config = {
        "beta": beta, "alpha": alpha, "n_points": n_points, "n": n,
        "clamp": clamp, "seed": run.seed, "format": run.fmt,
    }
    cert = jl_certificate(_erasure_level(beta, alpha, clamp), n_points=n_points, n=n)
    run.emit({"certificate": asdict(cert)}, "jl-certificate")
    return 0


# -------------------------------------------------------------- simulate


def _trial_csv(summary) -> str:
    rows = [
        [i, summary.trial_seeds[i], summary.s_min[i], summary.s_max[i], summary.cond[i]]
        for i in range(len(summary.trial_seeds))
    ]
    return _csv_text(["trial", "seed", "s_min", "s_max", "cond"], rows)


def _emit_sim(run: _Run, summary, basename: str, want_trial_csv: bool,
              result: Optional[dict] = None) -> None:
    csv_text = None
    if want_trial_csv or run.fmt == "csv":
        csv_text = _trial_csv(summary)
        (run.out_dir / f"{basename}-trials.csv").write_text(csv_text)
    run.emit(
        result if result is not None else summary.to_dict(),
        basename,
        stdout_text=csv_text if run.fmt == "csv" else None,
    )


def cmd_simulate_nerf(args) -> int:
    run = _Run(args, "simulate nerf")
    rows = _req(args, "rows", _as_int)
    cols = _req(args, "cols", _as_int)
    beta = _req(args, "beta", _as_float)
    trials = _positive_trials(args)
    distribution = _opt(args, "distribution", lambda v, f: str(v), "gaussian")
    mode = _opt(args, "erasure_mode", lambda v, f: str(v), "random_subset")
    quantiles = _opt(args, "quantiles", _quantile_levels, (0.5, 0.9, 0.99))
    want_csv = bool(getattr(args, "trial_csv", None))
    run.config = {
        "rows": rows, "cols": cols, "beta": beta, "trials": trials,
        "distribution": distribution, "erasure_mode": mode,
        "quantiles": list(quantiles), "trial_csv": want_csv,
        "seed": run.seed, "format": run.fmt,
    }
    config = SimConfig(
        rows=rows, cols=cols, beta=beta, trials=trials, master_seed=run.seed,
        distribution=distribution, erasure_mode=mode, quantiles=quantiles,
    )
    _emit_sim(run, run_nerf_sim(config), "simulate-nerf", want_csv)
    return 0


def cmd_simulate_square(args) -> int:
    run = _Run(args, "simulate square")
    rows = _req(args, "rows", _as_int)
    cols = _req(args, "cols", _as_int)
    trials = _positive_trials(args)
    distribution = _opt(args, "distribution", lambda v, f: str(v), "gaussian")
    quantiles = _opt(args, "quantiles", _quantile_levels, (0.5, 0.9, 0.99))
    want_csv = bool(getattr(args, "trial_csv", None))
    if not 1 <= cols < rows:
        raise UsageError(f"need 1 <= cols < rows, got {rows}x{cols}")
    beta = 1.0 - cols / rows
    run.config = {
        "rows": rows, "cols": cols, "beta": beta, "trials": trials,
        "distribution": distribution, "quantiles": list(quantiles),
        "trial_csv": want_csv, "seed": run.seed, "format": run.fmt,
    }
    config = SimConfig(
        rows=rows, cols=cols, beta=beta, trials=trials, master_seed=run.seed,
        distribution=distribution, quantiles=quantiles,
    )
    summary = run_square_sim(config)
    result = summary.to_dict()
    for q in summary.quantile_estimates:
        if q.level == 0.9:
            result["cond_exceeded_10pct"] = q.value
    _emit_sim(run, summary, "simulate-square", want_csv, result=result)
    return 0


def cmd_simulate_srip(args) -> int:
    run = _Run(args, "simulate srip")
    rows = _req(args, "rows", _as_int)
    cols = _req(args, "cols", _as_int)
    beta = _req(args, "beta", _as_float)
    alpha = _req(args, "alpha", _as_float)
    s = _req(args, "s", _as_int)
    eps = _req(args, "eps", _as_float)
    trials = _positive_trials(args)
    x_samples = _opt(args, "x_samples", _as_int, 16)
    t_samples = _opt(args, "t_samples", _as_int, None)
    mode = _opt(args, "erasure_mode", lambda v, f: str(v), "random_subset")
    clamp = bool(getattr(args, "clamp", None))
    run.config = {
        "rows": rows, "cols": cols, "beta": beta, "alpha": alpha, "s": s, "eps": eps,
        "trials": trials, "x_samples": x_samples, "t_samples": t_samples,
        "erasure_mode": mode, "clamp": clamp, "seed": run.seed, "format": run.fmt,
    }
    cert = srip_certificate(
        _erasure_level(beta, alpha, clamp), s=s, m=cols, n=rows, epsilon=eps, clamp=clamp
    )
    config = SimConfig(
        rows=rows, cols=cols, beta=beta, trials=trials, master_seed=run.seed,
        distribution="rademacher", erasure_mode=mode,
    )
    check, extremes = verify_srip(config, cert, x_samples, t_samples)
    run.emit(
        {
            "certificate": asdict(cert),
            "check": check.to_dict(),
            "extremes": asdict(extremes),
        },
        "simulate-srip",
    )
    return 0


def cmd_simulate_jl(args) -> int:
    run = _Run(args, "simulate jl")
    rows = _req(args, "rows", _as_int)
    dim = _req(args, "dim", _as_int)
    n_points = _req(args, "n_points", _as_int)
    beta = _req(args, "beta", _as_float)
    alpha = _req(args, "alpha", _as_float)
    trials = _positive_trials(args)
    t_samples = _opt(args, "t_samples", _as_int, 32)
    mode = _opt(args, "erasure_mode", lambda v, f: str(v), "random_subset")
    clamp = bool(getattr(args, "clamp", None))
    run.config = {
        "rows": rows, "dim": dim, "n_points": n_points, "beta": beta, "alpha": alpha,
        "trials": trials, "t_samples": t_samples, "erasure_mode": mode, "clamp": clamp,
        "seed": run.seed, "format": run.fmt,
    }
    cert = jl_certificate(_erasure_level(beta, alpha, clamp), n_points=n_points, n=rows)
    # the point cloud is part of the seeded setup, not per-trial randomness
    points = [gaussian(subseed(run.seed, 1000 + i), dim) for i in range(n_points)]
    config = SimConfig(
        rows=rows, cols=dim, beta=beta, trials=trials, master_seed=run.seed,
        distribution="rademacher", erasure_mode=mode,
    )
    check = verify_jl(points, config, cert, t_samples)
    run.emit({"certificate": asdict(cert), "check": check.to_dict()}, "simulate-jl")
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    run = _Run(args, "verify")
    trials = _opt(args, "trials", _as_int, 10_000)
    if trials < 1:
        raise UsageError(f"--trials must be at least 1, got {trials}")
    only = getattr(args, "only", None)
    forced = bool(getattr(args, "force_bad_bound", None))
    run.config = {
        "trials": trials, "only": only, "force_bad_bound": forced,
        "seed": run.seed, "format": run.fmt,
    }
    checks = default_verification_suite(
        trials=trials, master_seed=run.seed, only=only, include_forced_bad=forced
    )
    violated = sum(1 for c in checks if c.verdict == "violated")
    lines = [
        f"{'name':<36} {'bound':>12} {'estimate':>12} {'confidence':>12}  verdict",
    ]
    for c in checks:
        lines.append(
            f"{c.name:<36} {c.theoretical_bound:>12.4e} {c.empirical_estimate:>12.4e} "
            f"{c.upper_confidence:>12.4e}  {c.verdict}"
        )
    lines.append(f"checks: {len(checks)}, violated: {violated}")
    table_text = "\n".join(lines) + "\n"
    if run.fmt == "csv":
        csv_text = _csv_text(
            ["name", "theoretical_bound", "empirical_estimate", "upper_confidence",
             "verdict", "trials", "successes", "note"],
            [[c.name, c.theoretical_bound, c.empirical_estimate, c.upper_confidence,
              c.verdict, c.trials, c.successes, c.note] for c in checks],
        )
        (run.out_dir / "verify.csv").write_text(csv_text)
    run.emit(
        {"checks": [c.to_dict() for c in checks], "violated": violated},
        "verify",
        stdout_text=table_text,
    )
    return 3 if violated else 0


# -------------------------------------------------------- compare-tables

_COMPARISON_HEADER = (
    "table", "quantity", "lambda", "beta", "rows", "cols",
    "reference_value", "computed_value", "relative_gap", "note",
)


def _comparison_rows(selection: Optional[set], sim_trials: int, seed: int) -> list[list]:
    reference = _load_reference()
    nu = reference["nu"]
    rows: list[list] = []
    cert_cache: dict = {}

    def certificate(lam: Fraction, beta: Fraction):
        key = (lam, beta)
        if key not in cert_cache:
            cert_cache[key] = nerf_certificate(nu, float(lam), float(beta))
        return cert_cache[key]

    def wanted(table_id: int) -> bool:
        return selection is None or table_id in selection

    def add(table_id, quantity, lam, beta, shape, ref, computed, note=""):
        gap = None if ref is None else (computed - ref) / abs(ref)
        rows.append([
            table_id, quantity, str(lam), str(beta),
            shape[0] if shape else None, shape[1] if shape else None,
            ref, computed, gap, note,
        ])

    for table in reference["certificate_tables"]:
        if not wanted(table["table"]):
            continue
        for cell in table["cells"]:
            lam, beta = Fraction(cell["lambda"]), Fraction(cell["beta"])
            cert = certificate(lam, beta)
            for quantity, computed in (("R", cert.R), ("P", cert.P), ("C", cert.C)):
                add(table["table"], quantity, lam, beta, None, cell[quantity], computed)

    for table in reference["erasure_sim_tables"]:
        if not wanted(table["table"]):
            continue
        lam, beta = Fraction(table["lambda"]), Fraction(table["beta"])
        cert = certificate(lam, beta)
        table_note = table.get("note", "")
        for idx, cell in enumerate(table["cells"]):
            n_rows, n_cols = cell["rows"], cell["cols"]
            erased = int(math.floor(float(beta) * n_rows + 0.5))
            if sim_trials > 0:
                config = SimConfig(
                    rows=n_rows, cols=n_cols, beta=float(beta), trials=sim_trials,
                    master_seed=subseed(seed, table["table"] * 100 + idx),
                    quantiles=(0.9,),
                )
                q90 = run_nerf_sim(config).quantile_estimates[0].value
                note = f"simulated 90th percentile over {sim_trials} trials"
            else:
                q90 = mp_edge_cond(n_rows - erased, n_cols)
                note = "Marchenko-Pastur edge estimate; pass --sim-trials for a simulated quantile"
            if table_note:
                note = f"{note}; {table_note}"
            add(table["table"], "cond_q90", lam, beta, (n_rows, n_cols),
                cell["cond_q90"], q90, note)
            add(table["table"], "ratio_to_certificate", lam, beta, (n_rows, n_cols),
                cell["ratio_to_certificate"], q90 / cert.C, note)

    for table in reference["square_sim_tables"]:
        if not wanted(table["table"]):
            continue
        lam, beta = Fraction(table["lambda"]), Fraction(table["beta"])
        table_note = table.get("note", "")
        for idx, cell in enumerate(table["cells"]):
            n_rows, n_cols = cell["rows"], cell["cols"]
            if sim_trials > 0:
                config = SimConfig(
                    rows=n_rows, cols=n_cols, beta=1.0 - n_cols / n_rows, trials=sim_trials,
                    master_seed=subseed(seed, table["table"] * 100 + idx),
                    quantiles=(0.9,),
                )
                q90 = run_square_sim(config).quantile_estimates[0].value
                note = f"simulated 90th percentile over {sim_trials} trials"
            else:
                q90 = square_cond_q90_estimate(n_cols)
                note = "limit-law estimate (about 19.93 cols); pass --sim-trials to simulate"
            if table_note:
                note = f"{note}; {table_note}"
            add(table["table"], "cond_q90", lam, beta, (n_rows, n_cols),
                cell["cond_q90"], q90, note)
    return rows


def cmd_compare_tables(args) -> int:
    run = _Run(args, "compare-tables", default_fmt="csv")
    raw_tables = getattr(args, "tables", None)
    sim_trials = _opt(args, "sim_trials", _as_int, 0)
    if sim_trials < 0:
        raise UsageError(f"--sim-trials must be at least 0, got {sim_trials}")
    if raw_tables is None:
        selection = None
    else:
        known = {1, 2, 3, 4, 5, 6, 8, 9, 10}
        selection = set()
        for part in str(raw_tables).split(","):
            if not part.strip():
                continue
            table_id = _as_int(part.strip(), "tables")
            if table_id not in known:
                raise UsageError(f"--tables: unknown table id {table_id}; known: {sorted(known)}")
            selection.add(table_id)
    run.config = {
        "tables": None if selection is None else sorted(selection),
        "sim_trials": sim_trials, "seed": run.seed, "format": run.fmt,
    }
    rows = _comparison_rows(selection, sim_trials, run.seed)
    csv_text = _csv_text(_COMPARISON_HEADER, rows)
    (run.out_dir / "comparison.csv").write_text(csv_text)
    result = {
        "rows": [dict(zip(_COMPARISON_HEADER, row)) for row in rows],
        "artifacts": ["comparison.csv"],
    }
    run.emit(result, "comparison", stdout_text=csv_text if run.fmt == "csv" else None)
    return 0


# ----------------------------------------------------------------- wiring


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="output directory (default: current)")
    parser.add_argument("--seed", default=None, help=f"master seed (default {DEFAULT_SEED})")
    parser.add_argument("--config", default=None, help="JSON file with snake_case flag values")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None,
                        help="primary output format")


def _leaf(subparsers, name: str, func, help_text: str, flags: Sequence[tuple]) -> None:
    p = subparsers.add_parser(name, help=help_text, description=help_text)
    for flag, kwargs in flags:
        p.add_argument(flag, **kwargs)
    _add_common(p)
    p.set_defaults(func=func, leaf=p)


def _build_parser() -> _Parser:
    parser = _Parser(prog="erasurelab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    bounds = commands.add_parser("bounds", help="evaluate certificates")
    bounds_sub = bounds.add_subparsers(dest="subcommand", required=True, metavar="kind")
    _leaf(bounds_sub, "srip", cmd_bounds_srip,
          "sparse-isometry certificate for sign matrices", [
              ("--beta", {}), ("--alpha", {}), ("--s", {}), ("--m", {}), ("--n", {}),
              ("--eps", {}),
              ("--clamp", {"action": "store_const", "const": True, "default": None,
                           "help": "record side-condition failures instead of erroring"}),
          ])
    _leaf(bounds_sub, "nerf", cmd_bounds_nerf,
          "erasure-robustness certificate for Gaussian frames", [
              ("--nu", {}), ("--lambda", {"dest": "lam"}), ("--beta", {}), ("--m", {}),
              ("--sweep", {"action": "store_const", "const": True, "default": None,
                           "help": "CSV plus SVG over the reference lambda grid at fixed beta/lambda"}),
          ])
    _leaf(bounds_sub, "square", cmd_bounds_square,
          "certificate for erasure down to a square matrix", [
              ("--alpha", {}), ("--c", {}), ("--lambda", {"dest": "lam"}), ("--m", {}),
          ])
    _leaf(bounds_sub, "jl", cmd_bounds_jl,
          "erasure-robust distance-preservation certificate", [
              ("--beta", {}), ("--alpha", {}), ("--n-points", {}), ("--n", {}),
              ("--clamp", {"action": "store_const", "const": True, "default": None,
                           "help": "record side-condition failures instead of erroring"}),
          ])

    simulate = commands.add_parser("simulate", help="run seeded Monte Carlo experiments")
    sim_sub = simulate.add_subparsers(dest="subcommand", required=True, metavar="kind")
    _leaf(sim_sub, "nerf", cmd_simulate_nerf,
          "condition numbers of randomly erased matrices", [
              ("--rows", {}), ("--cols", {}), ("--beta", {}), ("--trials", {}),
              ("--distribution", {"choices": ("gaussian", "rademacher")}),
              ("--erasure-mode", {"choices": ("random_subset", "exhaustive", "none", "greedy")}),
              ("--quantiles", {}),
              ("--trial-csv", {"action": "store_const", "const": True, "default": None,
                               "help": "also write per-trial rows as CSV"}),
          ])
    _leaf(sim_sub, "square", cmd_simulate_square,
          "erase down to square and track the condition number", [
              ("--rows", {}), ("--cols", {}), ("--trials", {}),
              ("--distribution", {"choices": ("gaussian", "rademacher")}),
              ("--quantiles", {}),
              ("--trial-csv", {"action": "store_const", "const": True, "default": None,
                               "help": "also write per-trial rows as CSV"}),
          ])
    _leaf(sim_sub, "srip", cmd_simulate_srip,
          "sparse-isometry failure frequency against the certificate", [
              ("--rows", {}), ("--cols", {}), ("--beta", {}), ("--alpha", {}), ("--s", {}),
              ("--eps", {}), ("--trials", {}), ("--x-samples", {}), ("--t-samples", {}),
              ("--erasure-mode", {"choices": ("random_subset", "exhaustive", "none")}),
              ("--clamp", {"action": "store_const", "const": True, "default": None,
                           "help": "allow certificates whose side conditions fail"}),
          ])
    _leaf(sim_sub, "jl", cmd_simulate_jl,
          "pairwise distance distortion against the certificate", [
              ("--rows", {}), ("--dim", {}), ("--n-points", {}), ("--beta", {}),
              ("--alpha", {}), ("--trials", {}), ("--t-samples", {}),
              ("--erasure-mode", {"choices": ("random_subset", "exhaustive", "none")}),
              ("--clamp", {"action": "store_const", "const": True, "default": None,
                           "help": "allow certificates whose side conditions fail"}),
          ])

    _leaf(commands, "verify", cmd_verify, "run the bound-check battery", [
        ("--trials", {}),
        ("--only", {"choices": VERIFY_FAMILIES}),
        ("--force-bad-bound", {"action": "store_const", "const": True, "default": None,
                               "help": argparse.SUPPRESS}),
    ])
    _leaf(commands, "compare-tables", cmd_compare_tables,
          "score computed values against the bundled reference tables", [
              ("--tables", {"help": "comma list of table ids (empty for header-only output)"}),
              ("--sim-trials", {"help": "Monte Carlo trials per simulation cell (default 0: closed-form estimates)"}),
          ])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, args.leaf)
        return args.func(args)
    except UsageError as exc:
        print(f"erasurelab: error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, SideConditionError, ComputationError) as exc:
        print(f"erasurelab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
