"""Seeded Monte Carlo estimates of EL_n for the string and Bernoulli r-reach models.

Each trial t draws from its own generator seeded by
``SeedSequence(entropy=seed, spawn_key=(t,))``, so the outcome of a trial does
not depend on batching or on the number of workers.  One lattice is sampled
per trial and the running R[n, n] is recorded for every n up to ``n_max``, so
values for different n within a trial are correlated.  Per-n accumulators are
integer sums, which makes the reduction order-independent.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from .fit import FitResult, fit_affine
from .lattice import advance_section_batch
from .propagation import ExactCurve

MODELS = ("bernoulli", "string")
DEFAULT_BATCH = 2000


@dataclass(frozen=True)
class McConfig:
    model: str
    k: int
    r: int
    n_max: int
    trials: int
    seed: int
    fit_min: int = 50
    fit_max: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.k < 2 or self.r < 1:
            raise ValueError("need k >= 2 and r >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        hi = self.n_max if self.fit_max is None else self.fit_max
        if not 1 <= self.fit_min <= hi <= self.n_max:
            raise ValueError(f"fit window {self.fit_min}:{hi} must lie inside 1..{self.n_max}")

    @property
    def window(self) -> tuple[int, int]:
        return self.fit_min, self.n_max if self.fit_max is None else self.fit_max


@dataclass(frozen=True)
class McCurve:
    config: McConfig
    sum_lengths: np.ndarray  # int64, index n-1
    sum_squares: np.ndarray | None = None

    @property
    def trials(self) -> int:
        return self.config.trials

    @property
    def mean(self) -> np.ndarray:
        return self.sum_lengths / self.trials

    @property
    def stderr(self) -> np.ndarray:
        if self.sum_squares is None:
            raise ValueError("curve was loaded without second moments")
        t = self.trials
        if t < 2:
            return np.full(len(self.sum_lengths), np.nan)
        mean = self.mean
        var = (self.sum_squares - t * mean * mean) / (t - 1)
        return np.sqrt(np.maximum(var, 0.0) / t)


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(trial,))))


def _trial_bits(config: McConfig, trial: int) -> np.ndarray:
    """Fresh match bits of one trial, shape (n_max, 2r+2).

    Column i <= r holds eps[n-i, n]; column r+1 is a zero pad and column r+1+j
    holds eps[n, n-j].  Cells with an index < 1 are zero.
    """
    n, r, k = config.n_max, config.r, config.k
    rng = trial_generator(config.seed, trial)
    out = np.zeros((n, 2 * r + 2), dtype=bool)
    if config.model == "bernoulli":
        draws = rng.integers(0, k, size=(n, 2 * r + 1), dtype=np.int16) == 0
        out[:, :r + 1] = draws[:, :r + 1]
        out[:, r + 2:] = draws[:, r + 1:]
    else:
        u = rng.integers(0, k, size=n, dtype=np.int16)
        v = rng.integers(0, k, size=n, dtype=np.int16)
        s = np.arange(n)  # 0-based position of step s+1
        for i in range(r + 1):
            valid = s - i >= 0
            idx = np.where(valid, s - i, 0)
            out[:, i] = (u[idx] == v) & valid
            if i:
                out[:, r + 1 + i] = (u == v[idx]) & valid
    # cells outside the lattice must not matter, but keep them zero anyway
    for s in range(min(r, n)):
        out[s, s + 1:r + 1] = False
        out[s, r + 2 + s:] = False
    return out


def lengths_from_bits(bits: np.ndarray, r: int) -> np.ndarray:
    """Running R[n, n] for a batch, ``bits`` of shape (B, n_max, 2r+2); returns (B, n_max)."""
    B, n_max, _ = bits.shape
    x = np.zeros((B, r + 1), dtype=np.int32)
    y = np.zeros((B, r + 1), dtype=np.int32)
    out = np.empty((B, n_max), dtype=np.int32)
    for s in range(1, n_max + 1):
        b = bits[:, s - 1]
        x, y = advance_section_batch(x, y, b[:, :r + 1], b[:, r + 1:], r, s if s <= r else None)
        out[:, s - 1] = x[:, 0]
    return out


def _run_batch(args) -> tuple[np.ndarray, np.ndarray]:
    config, start, stop = args
    bits = np.stack([_trial_bits(config, t) for t in range(start, stop)])
    lengths = lengths_from_bits(bits, config.r).astype(np.int64)
    return lengths.sum(axis=0), (lengths * lengths).sum(axis=0)


def run_trials(config: McConfig, batch_size: int = DEFAULT_BATCH, workers: int = 1) -> McCurve:
    jobs = [(config, s, min(s + batch_size, config.trials)) for s in range(0, config.trials, batch_size)]
    sums = np.zeros(config.n_max, dtype=np.int64)
    sq = np.zeros(config.n_max, dtype=np.int64)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_batch, jobs))
    else:
        results = map(_run_batch, jobs)
    for s1, s2 in results:
        sums += s1
        sq += s2
    return McCurve(config, sums, sq)


def fit_extrapolation(curve: McCurve, n_min: int | None = None, n_max: int | None = None) -> FitResult:
    lo, hi = curve.config.window
    lo = lo if n_min is None else n_min
    hi = hi if n_max is None else n_max
    if not 1 <= lo <= hi <= len(curve.sum_lengths):
        raise ValueError(f"fit window {lo}:{hi} must lie inside 1..{len(curve.sum_lengths)}")
    if lo == hi:
        raise ValueError("degenerate fit window: all n are equal")
    ns = np.arange(lo, hi + 1)
    return fit_affine(ns, curve.mean[lo - 1:hi])


def s_statistic(curve: McCurve, exact: ExactCurve) -> float:
    """Mean over n = 1..N of (MC mean / n - exact / n)^2."""
    c = curve.config
    if (c.model, c.k, c.r) != (exact.model, exact.k, exact.r):
        raise ValueError("curves describe different models")
    N = len(curve.sum_lengths)
    if exact.n_max < N:
        raise ValueError(f"exact curve covers n <= {exact.n_max}, need {N}")
    ns = np.arange(1, N + 1)
    diff = curve.mean / ns - exact.as_floats()[:N] / ns
    return float(np.mean(diff * diff))


CSV_COLUMNS = ("model", "k", "r", "n", "trials", "sum_length", "mean", "stderr")


def write_curve_csv(curve: McCurve, path) -> None:
    c = curve.config
    mean, err = curve.mean, curve.stderr
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for n in range(1, len(curve.sum_lengths) + 1):
            w.writerow([c.model, c.k, c.r, n, c.trials, int(curve.sum_lengths[n - 1]),
                        repr(float(mean[n - 1])), repr(float(err[n - 1]))])


def read_curve_csv(path, seed: int = 0) -> McCurve:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: empty curve file")
    rows.sort(key=lambda row: int(row["n"]))
    first = rows[0]
    config = McConfig(first["model"], int(first["k"]), int(first["r"]), len(rows),
                      int(first["trials"]), seed, fit_min=1)
    sums = np.array([int(row["sum_length"]) for row in rows], dtype=np.int64)
    t = config.trials
    err = np.array([float(row["stderr"]) for row in rows])
    mean = sums / t
    # second moments recovered from the stored standard error
    sq = err * err * t * (t - 1) + t * mean * mean
    return McCurve(config, sums, sq)


def fit_json(curve: McCurve, fit: FitResult) -> dict:
    c = curve.config
    return {"model": c.model, "k": c.k, "r": c.r, "gamma_hat": fit.gamma_hat, "a_hat": fit.a_hat,
            "n_min": fit.n_min, "n_max": fit.n_max, "seed": c.seed}


def config_dict(config: McConfig) -> dict:
    return asdict(config)


def seed_averaged_fit(model: str, k: int, r: int, seeds: Sequence[int], trials: int = 10_000,
                      n_max: int = 1000, window: tuple[int, int] = (50, 1000),
                      workers: int = 1) -> tuple[float, float, list[FitResult], list[McCurve]]:
    fits, curves = [], []
    for seed in seeds:
        cfg = McConfig(model, k, r, n_max, trials, seed, *window)
        curve = run_trials(cfg, workers=workers)
        curves.append(curve)
        fits.append(fit_extrapolation(curve))
    return (math.fsum(f.gamma_hat for f in fits) / len(fits),
            math.fsum(f.a_hat for f in fits) / len(fits), fits, curves)
