"""Numerical reference propagation (fixed-step RK4).

This module provides the independent check against which the analytic
propagators are validated.  It never renormalizes the state: norm drift
is the integration-quality diagnostic, and a drift beyond the configured
tolerance raises :class:`NormDriftError`.

Integration marches through the merged, sorted set of sample times and
drive breakpoints, so every requested output time is hit exactly (no
interpolation) and discontinuities of the drive never fall inside an RK4
step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import NormDriftError
from .model import ModelParams, Subspace

__all__ = [
    "IntegratorConfig",
    "BlockTrace",
    "FullTrace",
    "suggest_step",
    "integrate_block",
    "integrate_full",
    "integrate_block_fn",
    "integrate_block_ic2",
    "kernel_backend",
]

_METHODS = ("rk4_fixed", "rk4_doubling")


def kernel_backend() -> str:
    """Name of the kernel implementation in use ("cython" or "python")."""
    return _kernels.BACKEND


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    ``step`` is the nominal step; each inter-knot segment is subdivided
    into equal steps no longer than it.  ``rk4_doubling`` additionally
    integrates each segment at half the step and accumulates a
    Richardson error estimate (the reported trace still comes from the
    nominal step).
    """

    step: float
    method: str = "rk4_fixed"
    norm_tolerance: float = 1e-6

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("step must be positive")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}; use one of {_METHODS}")
        if self.norm_tolerance <= 0.0:
            raise ValueError("norm_tolerance must be positive")


@dataclass(frozen=True)
class BlockTrace:
    """Sampled 2-amplitude evolution."""

    times: np.ndarray
    amplitudes: np.ndarray  # shape (n, 2), complex
    norm_drift: float
    error_estimate: float | None = None


@dataclass(frozen=True)
class FullTrace:
    """Sampled 4-amplitude evolution (uncoupled order)."""

    times: np.ndarray
    amplitudes: np.ndarray  # shape (n, 4), complex
    norm_drift: float
    error_estimate: float | None = None


def suggest_step(params: ModelParams, t_end: float) -> float:
    """Default step: shortest drive period / 200; t_end/2000 for static drives."""
    freqs = params.all_frequencies()
    if freqs:
        return (2.0 * math.pi / max(freqs)) / 200.0
    return t_end / 2000.0


def _event_grid(
    t_end: float, sample_times: Sequence[float] | None, breakpoints: Iterable[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Merged ascending event times plus a boolean mask of sample events."""
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if sample_times is None:
        samples = np.linspace(0.0, t_end, 201)
    else:
        samples = np.asarray(sample_times, dtype=float)
        if samples.ndim != 1 or len(samples) == 0:
            raise ValueError("sample_times must be a nonempty 1-d sequence")
        if np.any(np.diff(samples) <= 0.0):
            raise ValueError("sample_times must be strictly increasing")
        if samples[0] < 0.0 or samples[-1] > t_end:
            raise ValueError("sample_times must lie within [0, t_end]")
    marks = [b for b in breakpoints if 0.0 < b < t_end]
    events = np.unique(np.concatenate([samples, np.asarray(marks, dtype=float), [0.0]]))
    is_sample = np.isin(events, samples)
    return events, is_sample


def _march(step_fn, y0, events, is_sample, cfg: IntegratorConfig):
    """Generic march over event segments.

    step_fn(y, a, b, n) advances state tuple y from a to b in n steps.
    Returns (samples array, norm drift, error estimate or None).
    """
    dim = len(y0)
    n_samples = int(np.count_nonzero(is_sample))
    out = np.empty((n_samples, dim), dtype=complex)
    y = tuple(complex(v) for v in y0)
    norm0 = sum(abs(v) ** 2 for v in y)
    drift = 0.0
    estimate = 0.0 if cfg.method == "rk4_doubling" else None

    row = 0
    if is_sample[0]:  # events always start at exactly 0.0
        out[row] = y
        row += 1

    for k in range(1, len(events)):
        a, b = float(events[k - 1]), float(events[k])
        n = max(1, math.ceil((b - a) / cfg.step))
        y_next = step_fn(y, a, b, n)
        if estimate is not None:
            y_half = step_fn(y, a, b, 2 * n)
            diff = math.sqrt(
                sum(abs(y_next[i] - y_half[i]) ** 2 for i in range(dim))
            )
            estimate += diff * (16.0 / 15.0)
        y = y_next
        if is_sample[k]:
            out[row] = y
            row += 1
            drift = max(drift, abs(sum(abs(v) ** 2 for v in y) - norm0))
    if drift > cfg.norm_tolerance:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds tolerance {cfg.norm_tolerance:.3e}; "
            "reduce the step"
        )
    return out, drift, estimate


def _block_coeffs(params: ModelParams, subspace: Subspace) -> tuple[float, ...]:
    if subspace is Subspace.ONE:
        field = params.derived_two_term("omega_plus")
        coupling = params.derived_two_term("lambda_m")
        zdiag = params.derived_two_term("lambda_z")
    else:
        field = params.derived_two_term("omega_minus")
        coupling = params.derived_two_term("lambda_p")
        a1, b1, p1, a2, b2, p2, off = params.derived_two_term("lambda_z")
        zdiag = (-a1, b1, p1, -a2, b2, p2, -off)
    return field + coupling + zdiag


def integrate_block(
    params: ModelParams,
    subspace: Subspace,
    initial: Sequence[complex],
    t_end: float,
    cfg: IntegratorConfig,
    sample_times: Sequence[float] | None = None,
) -> BlockTrace:
    """RK4 propagation of one 2x2 block of the Hamiltonian."""
    coeffs = _block_coeffs(params, subspace)
    events, is_sample = _event_grid(t_end, sample_times, ())

    def step(y, a, b, n):
        return _kernels.rk4_block_profiles(coeffs, y[0], y[1], a, b, n)

    out, drift, est = _march(step, tuple(initial), events, is_sample, cfg)
    return BlockTrace(events[is_sample], out, drift, est)


def integrate_full(
    params: ModelParams,
    initial: Sequence[complex],
    t_end: float,
    cfg: IntegratorConfig,
    sample_times: Sequence[float] | None = None,
) -> FullTrace:
    """RK4 propagation of the full 4-amplitude state (uncoupled order).

    The Hamiltonian is block diagonal, so amplitudes starting at exactly
    zero in one block stay exactly zero: no numerical leakage.
    """
    coeffs = (
        params.derived_two_term("omega_plus")
        + params.derived_two_term("omega_minus")
        + params.derived_two_term("lambda_m")
        + params.derived_two_term("lambda_p")
        + params.derived_two_term("lambda_z")
    )
    events, is_sample = _event_grid(t_end, sample_times, ())

    def step(y, a, b, n):
        return _kernels.rk4_full_profiles(coeffs, y[0], y[1], y[2], y[3], a, b, n)

    out, drift, est = _march(step, tuple(initial), events, is_sample, cfg)
    return FullTrace(events[is_sample], out, drift, est)


def integrate_block_fn(
    hfun: Callable[[float], object],
    initial: Sequence[complex],
    t_end: float,
    cfg: IntegratorConfig,
    sample_times: Sequence[float] | None = None,
    breakpoints: Iterable[float] = (),
) -> BlockTrace:
    """RK4 propagation of a generic 2x2 Hermitian Hamiltonian callable.

    ``hfun(t)`` must return a 2x2 indexable.  ``breakpoints`` marks times
    where the Hamiltonian is discontinuous; integration never steps
    across them, and stage times are nudged 1e-9 inside each segment so
    ``hfun`` is only asked for one-sided limits at its discontinuities.
    """
    events, is_sample = _event_grid(t_end, sample_times, breakpoints)

    def deriv(t, y1, y2):
        h = hfun(t)
        h00 = complex(h[0][0])
        h01 = complex(h[0][1])
        h10 = complex(h[1][0])
        h11 = complex(h[1][1])
        return -1j * (h00 * y1 + h01 * y2), -1j * (h10 * y1 + h11 * y2)

    def step(y, a, b, n):
        y1, y2 = y
        h = (b - a) / n
        lo, hi = a + 1e-9, b - 1e-9
        if hi < lo:
            lo = hi = 0.5 * (a + b)
        for i in range(n):
            t = a + i * h
            k1a, k1b = deriv(min(max(t, lo), hi), y1, y2)
            hh = 0.5 * h
            k2a, k2b = deriv(min(max(t + hh, lo), hi), y1 + hh * k1a, y2 + hh * k1b)
            k3a, k3b = deriv(min(max(t + hh, lo), hi), y1 + hh * k2a, y2 + hh * k2b)
            k4a, k4b = deriv(min(max(t + h, lo), hi), y1 + h * k3a, y2 + h * k3b)
            y1 = y1 + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
            y2 = y2 + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        return y1, y2

    out, drift, est = _march(step, tuple(initial), events, is_sample, cfg)
    return BlockTrace(events[is_sample], out, drift, est)


def integrate_block_ic2(
    coeffs: Sequence[float],
    initial: Sequence[complex],
    t_end: float,
    cfg: IntegratorConfig,
    sample_times: Sequence[float] | None = None,
    breakpoints: Iterable[float] = (),
) -> BlockTrace:
    """RK4 propagation against the rate-matched derived field kernel.

    ``coeffs`` comes from :func:`spinpair.exact.ic2_kernel_coeffs`;
    ``breakpoints`` from :func:`spinpair.exact.ic2_breakpoints` (the
    derived field jumps there, so segments must not straddle them).
    """
    coeffs = tuple(float(v) for v in coeffs)
    events, is_sample = _event_grid(t_end, sample_times, breakpoints)

    def step(y, a, b, n):
        return _kernels.rk4_block_ic2(coeffs, y[0], y[1], a, b, n)

    out, drift, est = _march(step, tuple(initial), events, is_sample, cfg)
    return BlockTrace(events[is_sample], out, drift, est)
