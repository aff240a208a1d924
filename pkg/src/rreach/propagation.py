"""Exact finite-n propagation of the section distribution.

``step`` applies P_n(z) = P_{n-1}(z) M + P_{n-1}(z-1) N to a full joint
distribution over (z, state).  For long curves only the first moment is
needed, and it obeys its own closed recurrence

    p_n = p_{n-1} T(1),        E_n = E_{n-1} T(1) + p_{n-1} N,

where p_n = sum_z P_n(z) and E_n = sum_z z P_n(z); then EL_n = E_n . 1.
``exact_curve`` runs that recurrence on integer numerators over a common
power-of-k denominator.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .bernoulli import TransitionPair, _encode_profile, build_transition_matrices
from .errors import DimensionError, ResourceCapError, UnsupportedParameters
from .fit import FitResult, fit_affine
from .lattice import advance_section_batch
from .strings import augmented_index, build_string_matrices

DEFAULT_MAX_SQUARE_CELLS = 16

MODELS = ("bernoulli", "string")
_PAIR_MODEL = {"bernoulli": "bernoulli", "string": "string-augmented"}


def _max_square_cells() -> int:
    return int(os.environ.get("RREACH_MAX_SQUARE_CELLS", DEFAULT_MAX_SQUARE_CELLS))


@dataclass(frozen=True)
class SectionDistribution:
    n: int
    model: str  # TransitionPair.model tag
    k: int
    r: int
    support: dict  # z -> tuple of Fraction, one entry per state

    def mass(self) -> Fraction:
        return sum((sum(v, Fraction(0)) for v in self.support.values()), Fraction(0))

    def expected_length(self) -> Fraction:
        return sum((z * sum(v, Fraction(0)) for z, v in self.support.items()), Fraction(0))

    def state_marginal(self) -> list[Fraction]:
        out = None
        for v in self.support.values():
            out = list(v) if out is None else [a + b for a, b in zip(out, v)]
        return out

    def first_moment(self) -> list[Fraction]:
        out = None
        for z, v in self.support.items():
            zv = [z * e for e in v]
            out = zv if out is None else [a + b for a, b in zip(out, zv)]
        return out


@dataclass(frozen=True)
class ExactCurve:
    model: str
    k: int
    r: int
    values: tuple  # EL_n as Fraction for n = 1..len(values)

    @property
    def n_max(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= len(self.values):
            raise IndexError(n)
        return self.values[n - 1]

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


@lru_cache(maxsize=None)
def square_distribution(k: int, n: int, r: int) -> dict:
    """Exact law of (R[n,n], section state) on the n x n square, n <= r.

    Enumerates all 2^(n^2) match patterns of the square; for n <= r every cell
    lies in the band.  Returns {(z, state): probability}.
    """
    if n > r:
        raise ValueError("square enumeration needs n <= r")
    cells = n * n
    if cells > _max_square_cells():
        raise ResourceCapError(
            f"initial enumeration of 2^{cells} patterns exceeds cap of 2^{_max_square_cells()} "
            "(set RREACH_MAX_SQUARE_CELLS to raise it)")
    A = 2 ** cells
    pats = np.arange(A, dtype=np.int64)
    eps = ((pats[:, None] >> np.arange(cells)) & 1).reshape(A, n, n).astype(bool)  # eps[:, i-1, j-1]
    ones = eps.reshape(A, -1).sum(axis=1)
    x = np.zeros((A, r + 1), dtype=np.int64)
    y = np.zeros((A, r + 1), dtype=np.int64)
    for s in range(1, n + 1):
        col = np.zeros((A, r + 1), dtype=bool)
        row = np.zeros((A, r + 1), dtype=bool)
        for i in range(0, s):
            col[:, i] = eps[:, s - i - 1, s - 1]
            row[:, i] = eps[:, s - 1, s - i - 1]
        x, y = advance_section_batch(x, y, col, row, r, s)
    z = x[:, 0]
    state = _encode_profile(x - z[:, None], y - z[:, None], r)
    key = np.stack([z, state, ones], axis=1)
    uniq, cnt = np.unique(key, axis=0, return_counts=True)
    out: dict = {}
    for (zz, st, o), c in zip(uniq.tolist(), cnt.tolist()):
        w = Fraction(c * (k - 1) ** (cells - o), k ** cells)
        out[(zz, st)] = out.get((zz, st), Fraction(0)) + w
    return out


def transition_pair(model: str, k: int, r: int) -> TransitionPair:
    if model == "bernoulli":
        return build_transition_matrices(k, r)
    if model == "string":
        if (k, r) != (2, 1):
            raise UnsupportedParameters("string model supports k=2, r=1 only")
        return build_string_matrices()
    raise UnsupportedParameters(f"unknown model {model!r}; expected one of {MODELS}")


def initialize_at_r(k: int, r: int, model: str = "bernoulli") -> SectionDistribution:
    if model == "string":
        if (k, r) != (2, 1):
            raise UnsupportedParameters("string model supports k=2, r=1 only")
        half = Fraction(1, 2)
        support = {0: tuple(half if i == augmented_index(0, 0, 0) else Fraction(0) for i in range(8)),
                   1: tuple(half if i == augmented_index(1, 1, 1) else Fraction(0) for i in range(8))}
        return SectionDistribution(1, "string-augmented", 2, 1, support)
    if model != "bernoulli":
        raise UnsupportedParameters(f"unknown model {model!r}")
    dim = 4 ** r
    support: dict = {}
    for (z, st), w in square_distribution(k, r, r).items():
        vec = support.setdefault(z, [Fraction(0)] * dim)
        vec[st] += w
    return SectionDistribution(r, "bernoulli", k, r, {z: tuple(v) for z, v in sorted(support.items())})


def step(dist: SectionDistribution, pair: TransitionPair) -> SectionDistribution:
    if (dist.model, dist.k, dist.r) != (pair.model, pair.k, pair.r):
        raise ValueError(
            f"distribution ({dist.model}, k={dist.k}, r={dist.r}) does not match "
            f"transition pair ({pair.model}, k={pair.k}, r={pair.r})")
    out: dict = {}
    for z, vec in dist.support.items():
        stay = pair.M.vecmat(vec)
        move = pair.N.vecmat(vec)
        if any(stay):
            cur = out.setdefault(z, [Fraction(0)] * pair.dim)
            for j, v in enumerate(stay):
                cur[j] += v
        if any(move):
            cur = out.setdefault(z + 1, [Fraction(0)] * pair.dim)
            for j, v in enumerate(move):
                cur[j] += v
    return SectionDistribution(dist.n + 1, dist.model, dist.k, dist.r,
                               {z: tuple(v) for z, v in sorted(out.items())})


class MomentPropagator:
    """Integer-numerator form of the (p_n, E_n) recurrence."""

    def __init__(self, dist: SectionDistribution, pair: TransitionPair):
        D, Mi, Ni = pair.integer_form()
        self.step_den = D
        self.rows = [[(j, m + nn, nn) for j, (m, nn) in enumerate(zip(mr, nr)) if m or nn]
                     for mr, nr in zip(Mi, Ni)]
        p = dist.state_marginal()
        e = dist.first_moment()
        den = lcm(*(v.denominator for v in p + e))
        self.den = den
        self.p = [int(v * den) for v in p]
        self.e = [int(v * den) for v in e]
        self.n = dist.n

    def expected_length(self) -> Fraction:
        return Fraction(sum(self.e), self.den)

    def advance(self):
        dim = len(self.p)
        newp = [0] * dim
        newe = [0] * dim
        for pi, ei, row in zip(self.p, self.e, self.rows):
            if not pi and not ei:
                continue
            for j, t, nn in row:
                newp[j] += pi * t
                newe[j] += ei * t + pi * nn
        self.p, self.e = newp, newe
        self.den *= self.step_den
        self.n += 1


def exact_curve(model: str, k: int, r: int, n_max: int) -> ExactCurve:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if model == "string":
        if (k, r) != (2, 1):
            raise UnsupportedParameters("string model supports k=2, r=1 only")
    elif model != "bernoulli":
        raise UnsupportedParameters(f"unknown model {model!r}")
    values = []
    start = 1 if model == "string" else r
    for n in range(1, min(start, n_max + 1)):
        dist = square_distribution(k, n, r)
        values.append(sum((z * w for (z, _), w in dist.items()), Fraction(0)))
    if n_max >= start:
        prop = MomentPropagator(initialize_at_r(k, r, model), transition_pair(model, k, r))
        values.append(prop.expected_length())
        while prop.n < n_max:
            prop.advance()
            values.append(prop.expected_length())
    return ExactCurve(model, k, r, tuple(values))


def affine_tail_fit(curve: ExactCurve, n_min: int, n_max: int) -> FitResult:
    if not 1 <= n_min < n_max <= curve.n_max:
        raise ValueError(f"fit window {n_min}:{n_max} must satisfy 1 <= n_min < n_max <= {curve.n_max}")
    if n_max - n_min + 1 < 3:
        raise ValueError("the fit window needs at least 3 points")
    ns = np.arange(n_min, n_max + 1)
    return fit_affine(ns, [float(curve[n]) for n in ns])


CURVE_COLUMNS = ("model", "k", "r", "n", "el_exact_num", "el_exact_den", "el_float")


def write_curve_csv(curve: ExactCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CURVE_COLUMNS)
        for n, v in enumerate(curve.values, start=1):
            w.writerow([curve.model, curve.k, curve.r, n, v.numerator, v.denominator, repr(float(v))])


def read_curve_csv(path) -> ExactCurve:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DimensionError(f"{path}: empty curve file")
    rows.sort(key=lambda row: int(row["n"]))
    if [int(row["n"]) for row in rows] != list(range(1, len(rows) + 1)):
        raise DimensionError(f"{path}: n must run 1..N without gaps")
    first = rows[0]
    return ExactCurve(first["model"], int(first["k"]), int(first["r"]),
                      tuple(Fraction(int(row["el_exact_num"]), int(row["el_exact_den"])) for row in rows))
