"""Command-line workbench: closed forms, simulated CDFs, N sweeps and correlation gain.

Subcommands ``analytic``, ``cdf``, ``sweep-n`` and ``gain`` write CSV (comma
separated, LF line endings) to ``--out`` or stdout.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import analytic, mc
from .channel import correlation_matrix, steering_vectors
from .distfit import empirical_cdf, fit_gamma, gamma_cdf, gamma_quantile, ks_distance
from .gains import LinkGains
from .scenario import ScenarioConfig

__all__ = [
    "ConfigError",
    "CONFIG_KEYS",
    "parse_config",
    "squarest_split",
    "cmd_analytic",
    "cmd_cdf",
    "cmd_sweep_n",
    "cmd_gain",
    "calibrate_tau_bar",
    "main",
]

DEFAULT_SAMPLES = 100_000
SWEEP_SCENARIOS = {
    "uncorrelated": (0.0, 0.0),
    "fully-correlated": (1.0, 1.0),
    "favorable": (0.0, 1.0),
}
CDF_MATRIX_N = (64, 256)
CDF_MATRIX_RHO = (0.0, 0.7, 0.95)


class ConfigError(ValueError):
    pass


# key -> (target object, field name, converter)
CONFIG_KEYS = {
    "label": ("label", "label", str),
    "m_y": ("geometry", "M_y", int),
    "m_z": ("geometry", "M_z", int),
    "n_y": ("geometry", "N_y", int),
    "n_z": ("geometry", "N_z", int),
    "d_b": ("geometry", "d_b", float),
    "d_r": ("geometry", "d_r", float),
    "theta_a_deg": ("geometry", "theta_A", lambda s: math.radians(float(s))),
    "omega_a_deg": ("geometry", "omega_A", lambda s: math.radians(float(s))),
    "theta_d_deg": ("geometry", "theta_D", lambda s: math.radians(float(s))),
    "omega_d_deg": ("geometry", "omega_D", lambda s: math.radians(float(s))),
    "beta_d": ("gains", "beta_d", float),
    "beta_br": ("gains", "beta_br", float),
    "beta_ru": ("gains", "beta_ru", float),
    "tau_db": ("gains", "tau_bar", lambda s: 10.0 ** (float(s) / 10.0)),
    "rho_d": ("correlation", "rho_d", float),
    "rho_ru": ("correlation", "rho_ru", float),
}


def _read_config_file(path) -> dict:
    text = Path(path).read_text()
    if not text.lstrip().startswith("["):
        text = "[scenario]\n" + text
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str.lower
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    extra = [s for s in parser.sections() if s != "scenario"]
    if extra:
        raise ConfigError(f"unknown section(s) {extra}; use [scenario] or no header")
    return dict(parser["scenario"]) if parser.has_section("scenario") else {}


def parse_config(path=None, overrides: Optional[dict] = None, base: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    """Build a validated scenario from a key=value file and flag overrides.

    Unset keys keep the baseline values (or those of ``base``). Angles are in
    degrees and ``tau_db`` is 10 log10 of tau_bar.
    """
    raw = _read_config_file(path) if path else {}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    base = base or ScenarioConfig()
    parts = {"geometry": {}, "gains": {}, "correlation": {}, "label": {}}
    for key, value in raw.items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        target, name, conv = CONFIG_KEYS[key]
        try:
            parts[target][name] = conv(value) if isinstance(value, str) else conv(str(value))
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot convert {value!r}") from exc
    try:
        geometry = replace(base.geometry, **parts["geometry"])
        gains = replace(base.gains, **parts["gains"])
        correlation = replace(base.correlation, **parts["correlation"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ScenarioConfig(geometry, gains, correlation, parts["label"].get("label", base.label))


def squarest_split(n: int) -> tuple[int, int]:
    """Factor pair (n_y, n_z) with n_y >= n_z and n_z as large as possible."""
    if n < 1:
        raise ValueError("N must be positive")
    for n_z in range(math.isqrt(n), 0, -1):
        if n % n_z == 0:
            if n_z == 1 and n > 3:
                raise ValueError(f"N={n} is prime; set n_y and n_z explicitly")
            return n // n_z, n_z
    raise AssertionError("unreachable")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def _write_csv(rows: Iterable[Sequence], header: Sequence[str], out=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def _gamma_for(cfg: ScenarioConfig):
    stats = cfg.statistics()
    return stats, fit_gamma(stats.mean, stats.variance)


def cmd_analytic(cfg: ScenarioConfig) -> dict:
    """Closed-form moments, gamma fit and ingredients for one scenario."""
    stats, params = _gamma_for(cfg)
    ing = cfg.ingredients
    g = cfg.gains
    report = {
        "label": cfg.label,
        "M": ing.M,
        "N": ing.N,
        "rho_d": cfg.correlation.rho_d,
        "rho_ru": cfg.correlation.rho_ru,
        "tau_bar": g.tau_bar,
        "mean": stats.mean,
        "variance": stats.variance,
        "exactness": stats.exactness,
        "k_gamma": params.k_shape,
        "theta_gamma": params.theta_scale,
        "p95_db": 10.0 * math.log10(gamma_quantile(params, 0.95)),
        "A": ing.A,
        "B": ing.B,
        "F": ing.F,
        "C1": ing.C1,
        "C2": ing.C2,
        "a_shape": ing.a_shape,
        "b_scale": ing.b_scale,
        "trace_Rd_sq": ing.trace_Rd_sq,
    }
    if cfg.correlation.rho_d == 0.0 and cfg.correlation.rho_ru == 0.0 and cfg.correlation.mode == "exponential-decay":
        report["mean_uncorrelated"] = analytic.mean_snr_uncorrelated(g, ing.M, ing.N)
        report["variance_uncorrelated"] = analytic.var_snr_uncorrelated(g, ing.M, ing.N)
    return report


def format_report(report: dict) -> str:
    """Two-column CSV; floats use repr so they parse back exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["quantity", "value"])
    for key, value in report.items():
        writer.writerow([key, repr(value) if isinstance(value, float) else value])
    return buf.getvalue()


def parse_report(text: str) -> dict:
    rows = list(csv.reader(io.StringIO(text)))[1:]
    out = {}
    for key, value in rows:
        try:
            out[key] = int(value)
        except ValueError:
            try:
                out[key] = float(value)
            except ValueError:
                out[key] = value
    return out


def cmd_cdf(cfg: ScenarioConfig, n_samples: int = DEFAULT_SAMPLES, seed: int = 0, grid=None, workers: int = 1):
    """Simulated vs gamma CDF on a dB grid.

    Returns ``(rows, summary)``; rows are ``(snr_db, empirical, gamma)`` and
    summary holds the KS distance and both 95th percentiles in dB.
    """
    result = mc.run(mc.McConfig(n_samples, seed, cfg, workers))
    _, params = _gamma_for(cfg)
    dist = result.distribution
    if grid is None:
        lo = 10.0 * math.log10(max(dist.samples[0], 1e-12))
        hi = 10.0 * math.log10(dist.samples[-1])
        grid = np.linspace(math.floor(lo), math.ceil(hi), 201)
    rows = []
    for snr_db in grid:
        x = 10.0 ** (snr_db / 10.0)
        rows.append((snr_db, empirical_cdf(dist, x), gamma_cdf(params, x)))
    summary = {
        "ks_distance": ks_distance(dist, params),
        "p95_db_empirical": 10.0 * math.log10(dist.quantile(0.95)),
        "p95_db_gamma": 10.0 * math.log10(gamma_quantile(params, 0.95)),
    }
    return rows, summary


def cdf_csv(rows, summary, out=None) -> str:
    tail = [(key, value, "") for key, value in summary.items()]
    return _write_csv(list(rows) + tail, ["snr_db", "empirical_cdf", "gamma_cdf"], out)


def _with_n(cfg: ScenarioConfig, n: int) -> ScenarioConfig:
    n_y, n_z = squarest_split(n)
    return cfg.with_(N_y=n_y, N_z=n_z)


def cmd_sweep_n(cfg: ScenarioConfig, n_list, scenarios=None, n_samples: int = DEFAULT_SAMPLES,
                seed: int = 0, workers: int = 1):
    """Simulated and analytic mean/variance versus N for several correlation cases."""
    scenarios = scenarios or SWEEP_SCENARIOS
    rows = []
    for n in n_list:
        for name, (rho_d, rho_ru) in scenarios.items():
            scen = _with_n(cfg, n).with_(rho_d=rho_d, rho_ru=rho_ru, label=name)
            stats = scen.statistics()
            res = mc.run(mc.McConfig(n_samples, seed, scen, workers))
            rows.append((n, name, res.mean, stats.mean, res.variance, stats.variance))
    return rows


SWEEP_HEADER = ["N", "scenario", "mc_mean", "analytic_mean", "mc_var", "analytic_var"]


def cmd_gain(cfg: ScenarioConfig, n_list, rho_d_list, n_samples: int = DEFAULT_SAMPLES,
             seed: int = 0, workers: int = 1, simulate: bool = True):
    """Relative mean-SNR gain of a fully correlated UE-RIS channel over an uncorrelated one."""
    rows = []
    for n in n_list:
        for rho_d in rho_d_list:
            scen = _with_n(cfg, n).with_(rho_d=rho_d)
            # Only the BS side matters here; skip building the RIS correlation.
            geom = scen.geometry
            R_d = correlation_matrix(scen.correlation, geom, "BS")
            A = analytic.direct_array_gain(R_d, steering_vectors(geom)[0])
            g_an = analytic.gain_corr(scen.gains, geom.M, geom.N, A)
            g_mc = float("nan")
            if simulate:
                lb = mc.run(mc.McConfig(n_samples, seed, scen.with_(rho_ru=0.0), workers)).mean
                ub = mc.run(mc.McConfig(n_samples, seed, scen.with_(rho_ru=1.0), workers)).mean
                g_mc = (ub - lb) / lb
            rows.append((n, rho_d, g_an, g_mc))
    rows.append(("inf", "", analytic.gain_max(), ""))
    return rows


GAIN_HEADER = ["N", "rho_d", "gain_analytic", "gain_mc"]


def calibrate_tau_bar(cfg: ScenarioConfig, target_db: float = 25.0, p: float = 0.95) -> float:
    """tau_bar that puts the ``p`` quantile of the fitted gamma SNR at ``target_db``."""
    unit = cfg.with_(tau_bar=1.0)

    def excess(tau_db: float) -> float:
        _, params = _gamma_for(unit.with_(tau_bar=10.0 ** (tau_db / 10.0)))
        return 10.0 * math.log10(gamma_quantile(params, p)) - target_db

    tau_db = brentq(excess, -100.0, 100.0, xtol=1e-10)
    return 10.0 ** (tau_db / 10.0)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value scenario file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", type=Path, help="output file (directory for cdf --matrix)")
    for flag in ("rho-d", "rho-ru", "beta-d", "beta-br", "beta-ru", "tau-db"):
        common.add_argument(f"--{flag}", type=float)
    for flag in ("m-y", "m-z", "n-y", "n-z"):
        common.add_argument(f"--{flag}", type=int)

    parser = argparse.ArgumentParser(prog="rissnr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analytic", parents=[common], help="closed-form moments and gamma fit")
    cdf = sub.add_parser("cdf", parents=[common], help="simulated vs gamma CDF")
    cdf.add_argument("--grid", help="start:stop:num in dB")
    cdf.add_argument("--matrix", action="store_true",
                     help="write the N in {64,256} x rho in {0,0.7,0.95} curve set into --out")
    sweep = sub.add_parser("sweep-n", parents=[common], help="mean/variance versus N")
    sweep.add_argument("--n-list", type=_int_list, default=[16, 32, 64, 128, 256])
    gain = sub.add_parser("gain", parents=[common], help="correlation gain versus N")
    gain.add_argument("--n-list", type=_int_list, default=[4, 16, 64, 256, 1024])
    gain.add_argument("--rho-d-list", type=_float_list, default=[0.0, 0.5, 0.95])
    gain.add_argument("--no-mc", action="store_true", help="skip the simulated gain column")
    return parser


def _overrides(args) -> dict:
    return {key: getattr(args, key, None) for key in
            ("rho_d", "rho_ru", "beta_d", "beta_br", "beta_ru", "tau_db", "m_y", "m_z", "n_y", "n_z")}


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    base = None
    if args.command == "gain":
        # The gain study uses unit link gains unless overridden.
        base = ScenarioConfig(gains=LinkGains(1.0, 1.0, 1.0, 1.0))
    try:
        cfg = parse_config(args.config, _overrides(args), base)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "analytic":
        _emit(format_report(cmd_analytic(cfg)), args.out)
    elif args.command == "cdf":
        grid = None
        if args.grid:
            start, stop, num = args.grid.split(":")
            grid = np.linspace(float(start), float(stop), int(num))
        if args.matrix:
            if args.out is None:
                print("error: --matrix needs --out DIR", file=sys.stderr)
                return 2
            args.out.mkdir(parents=True, exist_ok=True)
            for n in CDF_MATRIX_N:
                for rho in CDF_MATRIX_RHO:
                    scen = _with_n(cfg, n).with_(rho_d=rho, rho_ru=rho, label=f"N{n}_rho{rho}")
                    rows, summary = cmd_cdf(scen, args.samples, args.seed, grid, args.workers)
                    cdf_csv(rows, summary, args.out / f"cdf_N{n}_rho{rho:g}.csv")
        else:
            rows, summary = cmd_cdf(cfg, args.samples, args.seed, grid, args.workers)
            _emit(cdf_csv(rows, summary), args.out)
    elif args.command == "sweep-n":
        rows = cmd_sweep_n(cfg, args.n_list, None, args.samples, args.seed, args.workers)
        _emit(_write_csv(rows, SWEEP_HEADER), args.out)
    elif args.command == "gain":
        rows = cmd_gain(cfg, args.n_list, args.rho_d_list, args.samples, args.seed,
                        args.workers, simulate=not args.no_mc)
        _emit(_write_csv(rows, GAIN_HEADER), args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
