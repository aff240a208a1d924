"""Affine extrapolation EL_n ~ gamma * n - A.

A is chosen to minimise the variance over the window of (EL_n + A) / n.  With
y_n = EL_n / n and x_n = 1 / n that variance is Var(y) + 2A Cov(x, y) + A^2 Var(x),
so A* = -Cov(x, y) / Var(x) and gamma is the window mean of y + A* x.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class FitResult:
    gamma_hat: float
    a_hat: float
    n_min: int
    n_max: int
    residual_variance: float

    def to_dict(self) -> dict:
        return asdict(self)


def fit_affine(ns: Sequence[int], values: Sequence[float]) -> FitResult:
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ns.shape != values.shape:
        raise ValueError("ns and values must have equal length")
    if len(ns) < 3:
        raise ValueError("the fit window needs at least 3 points")
    if ns.min() == ns.max():
        raise ValueError("degenerate fit window: all n are equal")
    x = 1.0 / ns
    y = values / ns
    dx = x - x.mean()
    var_x = np.dot(dx, dx)
    a = -np.dot(dx, y - y.mean()) / var_x
    corrected = y + a * x
    return FitResult(float(corrected.mean()), float(a), int(ns.min()), int(ns.max()),
                     float(corrected.var()))
