"""Command line front end: ``simulate run | sweep | figures``.

``run`` executes one config and writes a trace CSV; ``sweep`` executes
the config once per swept value and adds a summary CSV; ``figures``
does either for a packaged preset.  Output is deterministic: the same
config produces byte-identical files.

Trace CSV layout: ``#``-prefixed lines echo the effective config as
sorted dotted keys, then a header row, then one row per sample with
columns ``t``, the real/imaginary parts of the four uncoupled
amplitudes, ``norm`` and ``concurrence``.  Sweep summaries carry one
row per swept value with ``value``, ``peak_concurrence``,
``mean_concurrence``, ``oscillation_amplitude`` (max minus min) and
``dominant_frequency`` (an angular estimate from mean crossings),
sorted by value.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml

from .approx import perturb_x1, perturb_x2, rwa_evolve, rwa_orthogonal
from .config import (
    RunConfig,
    apply_sweep_value,
    build_ic1,
    build_ic2,
    build_numeric,
    build_perturbation,
    build_rwa,
    load_config,
    parse_config,
)
from .entangle import FourState, concurrence_pure
from .errors import AdmissibilityError, ConfigError, NormDriftError, SpinpairError
from .exact import ic1_evolve, ic2_admissible, ic2_evolve
from .model import Subspace, spectrum
from .oracle import IntegratorConfig, integrate_full, suggest_step

__all__ = [
    "CSV_COLUMNS",
    "SUMMARY_COLUMNS",
    "EvolutionTrace",
    "compute_trace",
    "dominant_frequency",
    "trace_stats",
    "run_single",
    "run_sweep",
    "preset_ids",
    "load_preset",
    "main",
]

CSV_COLUMNS = (
    "t",
    "re_fpp",
    "im_fpp",
    "re_fmm",
    "im_fmm",
    "re_fpm",
    "im_fpm",
    "re_fmp",
    "im_fmp",
    "norm",
    "concurrence",
)

SUMMARY_COLUMNS = (
    "value",
    "peak_concurrence",
    "mean_concurrence",
    "oscillation_amplitude",
    "dominant_frequency",
)

_PRESET_PACKAGE = "spinpair.presets"
_ANALYTIC_NORM_TOL = 1e-9
_ROOT2 = math.sqrt(0.5)

_NAMED_UNCOUPLED = {
    "pp": (1.0, 0.0, 0.0, 0.0),
    "mm": (0.0, 1.0, 0.0, 0.0),
    "pm": (0.0, 0.0, 1.0, 0.0),
    "mp": (0.0, 0.0, 0.0, 1.0),
    "bell_s": (_ROOT2, _ROOT2, 0.0, 0.0),
    "bell_a": (_ROOT2, -_ROOT2, 0.0, 0.0),
}


@dataclass(frozen=True)
class EvolutionTrace:
    """Sampled four-amplitude evolution plus derived columns.

    ``amplitudes`` is (n, 4) complex in uncoupled order; ``norms`` the
    raw squared norms; ``concurrences`` the pure-state concurrence of
    each normalized sample.  ``echo`` is the effective config mapping
    written into the CSV header.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    norms: np.ndarray
    concurrences: np.ndarray
    echo: dict[str, Any]

    def to_csv(self, path: Path) -> None:
        """Write the trace; same trace, same bytes."""
        lines = [f"# {key}: {val}" for key, val in _flatten_echo(self.echo)]
        lines.append(",".join(CSV_COLUMNS))
        for i in range(self.times.size):
            f = self.amplitudes[i]
            row = (
                self.times[i],
                f[0].real, f[0].imag,
                f[1].real, f[1].imag,
                f[2].real, f[2].imag,
                f[3].real, f[3].imag,
                self.norms[i],
                self.concurrences[i],
            )
            lines.append(",".join("%.12e" % v for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _flatten_echo(node: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(node, dict):
        out: list[tuple[str, str]] = []
        for key in sorted(node):
            out.extend(_flatten_echo(node[key], f"{prefix}{key}."))
        return out
    return [(prefix[:-1], json.dumps(node, sort_keys=True))]


def _initial_uncoupled(
    cfg: RunConfig, theta10: float, theta20: float
) -> tuple[complex, complex, complex, complex]:
    """Uncoupled-order amplitudes of the configured initial state."""
    if isinstance(cfg.initial, tuple):
        return cfg.initial
    if cfg.initial in _NAMED_UNCOUPLED:
        return tuple(complex(v) for v in _NAMED_UNCOUPLED[cfg.initial])
    c1, s1 = math.cos(theta10), math.sin(theta10)
    c2, s2 = math.cos(theta20), math.sin(theta20)
    eigen = {
        "phi1": (c1, s1, 0.0, 0.0),
        "phi2": (-s1, c1, 0.0, 0.0),
        "phi3": (0.0, 0.0, c2, s2),
        "phi4": (0.0, 0.0, -s2, c2),
    }
    return tuple(complex(v) for v in eigen[cfg.initial])


def _eigen_mixtures(
    initial: tuple[complex, complex, complex, complex], theta10: float, theta20: float
) -> tuple[complex, complex, complex, complex]:
    """Project uncoupled amplitudes onto the canonical eigenstate pairs."""
    a, b, c, d = initial
    c1, s1 = math.cos(theta10), math.sin(theta10)
    c2, s2 = math.cos(theta20), math.sin(theta20)
    return (
        a * c1 + b * s1,
        -a * s1 + b * c1,
        c * c2 + d * s2,
        -c * s2 + d * c2,
    )


def _finish(
    times: np.ndarray,
    amps: np.ndarray,
    echo: dict[str, Any],
    norm_tol: float | None,
) -> EvolutionTrace:
    norms = np.sum(np.abs(amps) ** 2, axis=1)
    if norm_tol is not None:
        drift = float(np.max(np.abs(norms - 1.0)))
        if drift > norm_tol:
            raise NormDriftError(
                f"trace norm drifted by {drift:.3e}, tolerance {norm_tol:.3e}"
            )
    conc = np.empty(times.size)
    for i in range(times.size):
        f = amps[i] / math.sqrt(norms[i])
        conc[i] = concurrence_pure(FourState.uncoupled(*f))
    return EvolutionTrace(times, amps, norms, conc, echo)


def _trace_ic1(cfg: RunConfig, times: np.ndarray) -> EvolutionTrace:
    setup, params, convention = build_ic1(cfg.data["ic1"])
    initial = _initial_uncoupled(cfg, setup.theta10, setup.theta20)
    alpha, beta, gamma, delta = _eigen_mixtures(initial, setup.theta10, setup.theta20)
    need_one = alpha != 0 or beta != 0
    need_two = gamma != 0 or delta != 0
    amps = np.zeros((times.size, 4), dtype=complex)
    for i, t in enumerate(times):
        tt = float(t)
        if need_one:
            x = ic1_evolve(setup, params, tt, "phi1", convention)
            y = ic1_evolve(setup, params, tt, "phi2", convention)
            amps[i, 0] = alpha * x.a1 + beta * y.a1
            amps[i, 1] = alpha * x.a2 + beta * y.a2
        if need_two:
            z = ic1_evolve(setup, params, tt, "phi3", convention)
            w = ic1_evolve(setup, params, tt, "phi4", convention)
            amps[i, 2] = gamma * z.a1 + delta * w.a1
            amps[i, 3] = gamma * z.a2 + delta * w.a2
    return _finish(times, amps, copy.deepcopy(cfg.data), _ANALYTIC_NORM_TOL)


def _trace_ic2(cfg: RunConfig, times: np.ndarray) -> EvolutionTrace:
    setup = build_ic2(cfg.data["ic2"])
    initial = _initial_uncoupled(cfg, setup.theta10, setup.theta20)
    alpha, beta, gamma, delta = _eigen_mixtures(initial, setup.theta10, setup.theta20)
    need_one = alpha != 0 or beta != 0
    need_two = gamma != 0 or delta != 0
    for needed, subspace in ((need_one, Subspace.ONE), (need_two, Subspace.TWO)):
        if needed:
            verdict = ic2_admissible(setup, subspace)
            if not verdict.valid:
                raise AdmissibilityError(verdict.reason)
    amps = np.zeros((times.size, 4), dtype=complex)
    for i, t in enumerate(times):
        tt = float(t)
        if need_one:
            x = ic2_evolve(setup, tt, "phi1")
            y = ic2_evolve(setup, tt, "phi2")
            amps[i, 0] = alpha * x.a1 + beta * y.a1
            amps[i, 1] = alpha * x.a2 + beta * y.a2
        if need_two:
            z = ic2_evolve(setup, tt, "phi3")
            w = ic2_evolve(setup, tt, "phi4")
            amps[i, 2] = gamma * z.a1 + delta * w.a1
            amps[i, 3] = gamma * z.a2 + delta * w.a2
    return _finish(times, amps, copy.deepcopy(cfg.data), _ANALYTIC_NORM_TOL)


def _trace_rwa(cfg: RunConfig, times: np.ndarray) -> EvolutionTrace:
    setup = build_rwa(cfg.data["rwa"])
    initial = _initial_uncoupled(cfg, setup.theta10, 0.0)
    if initial[2] != 0 or initial[3] != 0:
        raise ConfigError("rwa mode supports subspace-I initial states only")
    alpha, beta, _g, _d = _eigen_mixtures(initial, setup.theta10, 0.0)
    amps = np.zeros((times.size, 4), dtype=complex)
    for i, t in enumerate(times):
        tt = float(t)
        x = rwa_evolve(setup, tt)
        y = rwa_orthogonal(setup, tt)
        amps[i, 0] = alpha * x.a1 + beta * y.a1
        amps[i, 1] = alpha * x.a2 + beta * y.a2
    return _finish(times, amps, copy.deepcopy(cfg.data), _ANALYTIC_NORM_TOL)


def _trace_perturbation(cfg: RunConfig, times: np.ndarray) -> EvolutionTrace:
    omega_plus, drive_profile = build_perturbation(cfg.data["perturbation"])
    if cfg.initial != "pp":
        raise ConfigError("perturbation mode requires initial_state: pp")
    amps = np.zeros((times.size, 4), dtype=complex)
    for i, t in enumerate(times):
        tt = float(t)
        amps[i, 0] = perturb_x1(omega_plus, tt)
        amps[i, 1] = perturb_x2(omega_plus, drive_profile, tt)
    # first-order amplitudes are not unitary; norm is reported, not checked
    return _finish(times, amps, copy.deepcopy(cfg.data), None)


def _trace_numeric(
    cfg: RunConfig, times: np.ndarray, step_override: float | None
) -> EvolutionTrace:
    params, cfg_step = build_numeric(cfg.data["numeric"])
    step = step_override if step_override is not None else cfg_step
    if step is None:
        step = suggest_step(params, cfg.t_end)
    theta10 = spectrum(params, 0.0, Subspace.ONE).theta
    theta20 = spectrum(params, 0.0, Subspace.TWO).theta
    initial = _initial_uncoupled(cfg, theta10, theta20)
    trace = integrate_full(
        params, initial, cfg.t_end, IntegratorConfig(step=step), sample_times=times
    )
    echo = copy.deepcopy(cfg.data)
    echo["numeric"]["step"] = float(step)
    return _finish(trace.times, trace.amplitudes, echo, None)


def compute_trace(cfg: RunConfig, step_override: float | None = None) -> EvolutionTrace:
    """Evaluate one run request on its sample grid.

    ``step_override`` replaces the integrator step and applies to
    numeric mode only.

    Raises
    ------
    ConfigError
        On mode/initial-state mismatches or a step override outside
        numeric mode.
    AdmissibilityError
        If a rate-matched run violates its branch-confinement
        inequality.
    """
    if step_override is not None:
        if cfg.mode != "numeric":
            raise ConfigError("--step applies to numeric mode only")
        if step_override <= 0.0:
            raise ConfigError("--step must be positive")
    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    if cfg.mode == "ic1":
        return _trace_ic1(cfg, times)
    if cfg.mode == "ic2":
        return _trace_ic2(cfg, times)
    if cfg.mode == "rwa":
        return _trace_rwa(cfg, times)
    if cfg.mode == "perturbation":
        return _trace_perturbation(cfg, times)
    return _trace_numeric(cfg, times, step_override)


def dominant_frequency(times: Sequence[float], values: Sequence[float]) -> float:
    """Angular frequency estimate: pi * mean crossings / duration."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    centered = v - np.mean(v)
    signs = np.signbit(centered)
    crossings = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return math.pi * crossings / float(t[-1] - t[0])


def trace_stats(trace: EvolutionTrace) -> dict[str, float]:
    """Summary row of one sweep point."""
    c = trace.concurrences
    return {
        "peak_concurrence": float(np.max(c)),
        "mean_concurrence": float(np.mean(c)),
        "oscillation_amplitude": float(np.max(c) - np.min(c)),
        "dominant_frequency": dominant_frequency(trace.times, c),
    }


def run_single(
    cfg: RunConfig, outdir: Path, step_override: float | None = None
) -> Path:
    """Execute one run and write ``<outdir>/<name>.csv``."""
    trace = compute_trace(cfg, step_override)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{cfg.name}.csv"
    trace.to_csv(path)
    return path


def _sweep_point(
    base: RunConfig, value: float, step_override: float | None, outdir: Path
) -> tuple[float, dict[str, float], Path]:
    data = apply_sweep_value(base.data, base.sweep.parameter, value)
    data["name"] = f"{base.name}_{value:g}"
    cfg = parse_config(data, data["name"])
    trace = compute_trace(cfg, step_override)
    path = outdir / f"{cfg.name}.csv"
    trace.to_csv(path)
    return value, trace_stats(trace), path


def run_sweep(
    cfg: RunConfig,
    outdir: Path,
    threads: int = 1,
    step_override: float | None = None,
) -> list[Path]:
    """Execute each sweep point in a worker and write the summary.

    Point traces land next to the summary as ``<name>_<value>.csv``;
    the summary rows are sorted by swept value, so the output does not
    depend on worker scheduling.
    """
    if cfg.sweep is None:
        raise ConfigError("config has no sweep block; use 'simulate run'")
    if threads < 1:
        raise ConfigError("--threads must be at least 1")
    outdir.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_sweep_point, cfg, value, step_override, outdir)
            for value in cfg.sweep.values
        ]
        results = [f.result() for f in futures]
    results.sort(key=lambda item: item[0])
    lines = [f"# {key}: {val}" for key, val in _flatten_echo(cfg.data)]
    lines.append(",".join(SUMMARY_COLUMNS))
    for value, stats, _path in results:
        row = (value,) + tuple(stats[k] for k in SUMMARY_COLUMNS[1:])
        lines.append(",".join("%.12e" % v for v in row))
    summary = outdir / f"{cfg.name}_summary.csv"
    summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return [path for _v, _s, path in results] + [summary]


def preset_ids() -> list[str]:
    """Identifiers of the packaged figure presets."""
    root = resources.files(_PRESET_PACKAGE)
    return sorted(
        entry.name[: -len(".yaml")]
        for entry in root.iterdir()
        if entry.name.endswith(".yaml")
    )


def load_preset(preset_id: str) -> RunConfig:
    """Load one packaged preset by id."""
    entry = resources.files(_PRESET_PACKAGE) / f"{preset_id}.yaml"
    if not entry.is_file():
        raise ConfigError(
            f"unknown preset {preset_id!r}; available: {', '.join(preset_ids())}"
        )
    data = yaml.safe_load(entry.read_text(encoding="utf-8"))
    return parse_config(data, preset_id)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--output", type=Path, default=Path("."), help="output directory (default: .)"
    )
    sub.add_argument(
        "--threads", type=int, default=1, help="sweep worker count (default: 1)"
    )
    sub.add_argument(
        "--step", type=float, default=None, help="integrator step override (numeric mode)"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Two-qubit exchange-model simulator: traces, sweeps and presets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute one config and write its trace CSV")
    run_p.add_argument("config", type=Path, help="YAML run config")
    _add_common(run_p)
    sweep_p = sub.add_parser("sweep", help="execute a sweep config and its summary")
    sweep_p.add_argument("config", type=Path, help="YAML sweep config")
    _add_common(sweep_p)
    fig_p = sub.add_parser("figures", help="run a packaged preset (or all of them)")
    fig_p.add_argument("preset", nargs="?", help="preset id, or 'all'")
    fig_p.add_argument("--list", action="store_true", help="list preset ids and exit")
    _add_common(fig_p)
    return parser


def _dispatch(args: argparse.Namespace) -> list[Path]:
    if args.command == "run":
        cfg = load_config(args.config)
        if cfg.sweep is not None:
            raise ConfigError("config contains a sweep block; use 'simulate sweep'")
        return [run_single(cfg, args.output, args.step)]
    if args.command == "sweep":
        cfg = load_config(args.config)
        return run_sweep(cfg, args.output, args.threads, args.step)
    if args.list:
        for preset_id in preset_ids():
            print(preset_id)
        return []
    if not args.preset:
        raise ConfigError("preset id required (or --list)")
    ids = preset_ids() if args.preset == "all" else [args.preset]
    written: list[Path] = []
    for preset_id in ids:
        cfg = load_preset(preset_id)
        if cfg.sweep is not None:
            written.extend(run_sweep(cfg, args.output, args.threads, args.step))
        else:
            written.append(run_single(cfg, args.output, args.step))
    return written


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    try:
        for path in _dispatch(args):
            print(path)
    except SpinpairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
