"""Monte Carlo sampling of the timing jitter.

Trial timing is the only random ingredient: under the instantaneous
model each trial draws a collapse time ``t_s`` and a weak-coupling time
``t_w`` independently and uniformly from ``(0, delta_t_m)`` and
contributes the strong-first value when ``t_w > t_s``, the weak-first
value otherwise; under the objective model each trial draws ``t_w``
uniformly from the weak window and contributes the per-trial value of
:func:`weakprobe.weakvalues.objective_weak_value_at`.

Reproducibility contract: the random stream is Philox (counter-based).
Trials are split into fixed chunks of ``CHUNK_TRIALS``; chunk ``j``
owns the generator keyed ``(seed, j)``.  Within a chunk, trial ``i``
consumes draws ``2i`` and ``2i+1`` (``t_s`` then ``t_w``) under the
instantaneous model, or draw ``i`` under the objective model, so the
draws of any trial are fixed by ``(seed, trial index)`` alone: results
are bit-identical for a given spec no matter how the chunks are
evaluated, and prefixes of a stream are stable.  Per-trial values are
combined in trial-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .weakvalues import (
    ProtocolConfig,
    averaged_weak_value_objective,
    averaged_weak_value_vn,
    protocol_traces,
)

__all__ = [
    "CHUNK_TRIALS",
    "SimulationSpec",
    "AveragedResult",
    "simulate_vn",
    "simulate_objective",
    "run_simulation",
    "convergence_report",
    "analytic_target",
    "to_record",
    "CSV_COLUMNS",
]

CHUNK_TRIALS = 1 << 16

MODELS = ("vn", "objective")


@dataclass(frozen=True, eq=False)
class SimulationSpec:
    """What to simulate: configuration, model, trial count, seed."""

    cfg: ProtocolConfig
    model: str
    trials: int
    seed: int

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError("trials must be a positive integer")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class AveragedResult:
    """Sample mean of the per-trial weak values with standard errors.

    ``stderr`` and ``stderr_im`` are the standard errors of the real and
    imaginary parts (sample standard deviation over sqrt(N); zero by
    convention for a single trial).
    """

    mean: complex
    stderr: float
    stderr_im: float
    trials: int
    seed: int


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunks(n: int):
    for j in range(0, (n + CHUNK_TRIALS - 1) // CHUNK_TRIALS):
        lo = j * CHUNK_TRIALS
        yield j, lo, min(lo + CHUNK_TRIALS, n)


def _vn_draws(spec: SimulationSpec) -> tuple[np.ndarray, np.ndarray]:
    """Collapse and weak-coupling times for every instantaneous-model trial."""
    n = spec.trials
    dtm = spec.cfg.delta_t_m
    t_s = np.empty(n)
    t_w = np.empty(n)
    for j, lo, hi in _chunks(n):
        block = _chunk_rng(spec.seed, j).uniform(0.0, dtm, size=2 * (hi - lo))
        t_s[lo:hi] = block[0::2]
        t_w[lo:hi] = block[1::2]
    return t_s, t_w


def _objective_draws(spec: SimulationSpec) -> np.ndarray:
    """Weak-coupling times for every objective-model trial."""
    n = spec.trials
    window = spec.cfg.weak_window
    t_w = np.empty(n)
    for j, lo, hi in _chunks(n):
        t_w[lo:hi] = _chunk_rng(spec.seed, j).uniform(window.lo, window.hi, hi - lo)
    return t_w


def _trial_values(spec: SimulationSpec) -> np.ndarray:
    t = protocol_traces(spec.cfg)
    w1 = t.proj_obs_in / t.proj_in
    w3 = t.fin_obs_proj / t.fin_proj
    if spec.model == "vn":
        t_s, t_w = _vn_draws(spec)
        return np.where(t_w > t_s, w3, w1)
    t_w = _objective_draws(spec)
    dtc = spec.cfg.delta_t_c
    x = t_w / dtc
    mid = (1.0 - x) * t.obs_in + x * t.obs_proj
    return np.select([t_w < 0.0, t_w > dtc], [w1, w3], default=mid)


def _stats(values: np.ndarray, spec: SimulationSpec, trials: int) -> AveragedResult:
    mean = complex(values.mean())
    if trials > 1:
        root = math.sqrt(trials)
        stderr = float(values.real.std(ddof=1)) / root
        stderr_im = float(values.imag.std(ddof=1)) / root
    else:
        stderr = stderr_im = 0.0
    return AveragedResult(mean, stderr, stderr_im, trials, spec.seed)


def simulate_vn(spec: SimulationSpec) -> AveragedResult:
    """Sample the time-averaged weak value under instantaneous collapse."""
    if spec.model != "vn":
        raise ValueError(f"spec.model is {spec.model!r}, expected 'vn'")
    values = _trial_values(spec)
    return _stats(values, spec, spec.trials)


def simulate_objective(spec: SimulationSpec) -> AveragedResult:
    """Sample the time-averaged weak value under objective collapse."""
    if spec.model != "objective":
        raise ValueError(f"spec.model is {spec.model!r}, expected 'objective'")
    values = _trial_values(spec)
    return _stats(values, spec, spec.trials)


def run_simulation(spec: SimulationSpec) -> AveragedResult:
    """Dispatch on ``spec.model``."""
    return simulate_vn(spec) if spec.model == "vn" else simulate_objective(spec)


def analytic_target(spec: SimulationSpec) -> complex:
    """The exact average the simulation estimates."""
    if spec.model == "vn":
        return averaged_weak_value_vn(spec.cfg)
    return averaged_weak_value_objective(spec.cfg)


def convergence_report(
    spec: SimulationSpec, checkpoints: Sequence[int]
) -> list[AveragedResult]:
    """Running estimates at increasing trial counts from one stream.

    ``checkpoints`` must be strictly increasing positive integers; the
    result at checkpoint ``N`` is the statistics of the first ``N``
    trials of the stream defined by ``spec.seed`` (prefix-stable by the
    chunking contract), so the entries show the ``1/sqrt(N)`` shrink of
    the standard error on actual data.
    """
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints or any(c < 1 for c in checkpoints):
        raise ValueError("checkpoints must be positive integers")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    full = replace(spec, trials=checkpoints[-1])
    values = _trial_values(full)
    return [_stats(values[:c], spec, c) for c in checkpoints]


CSV_COLUMNS = ("model", "N", "seed", "mean_re", "mean_im", "stderr_re", "stderr_im")


def to_record(spec: SimulationSpec, result: AveragedResult) -> dict:
    """Flat record of one result, keyed like the CSV columns."""
    return {
        "model": spec.model,
        "N": result.trials,
        "seed": result.seed,
        "mean_re": float(result.mean.real),
        "mean_im": float(result.mean.imag),
        "stderr_re": result.stderr,
        "stderr_im": result.stderr_im,
    }
