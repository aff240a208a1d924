"""Section transfer matrices for the Bernoulli matching r-reach model.

A section state is the 2r decrement bits (d1x, d1y, d2x, d2y, ..., drx, dry)
read as a big-endian integer, so for r = 1 the order is
(z,z,z), (z,z,z-1), (z,z-1,z), (z,z-1,z-1).

``M[i, j]`` is the probability of moving from old state i to new state j with
the centre value unchanged, ``N[i, j]`` the same with the centre incremented;
both act on row vectors, ``P_n(z) = P_{n-1}(z) M + P_{n-1}(z-1) N``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .errors import DegeneracyError, ResourceCapError, UnsupportedParameters
from .lattice import advance_section_batch
from .rational import (RationalMatrix, UniPolynomial, integer_det, interpolate,
                       left_nullspace, poly_derivative_at)

DEFAULT_MAX_R = 6
# 64 is r = 3; r = 4 needs 514 exact determinants of side 256
DEFAULT_MAX_SLICE_DIM = 64


def max_transfer_r() -> int:
    return int(os.environ.get("RREACH_MAX_R", DEFAULT_MAX_R))


def max_slice_dim() -> int:
    return int(os.environ.get("RREACH_MAX_SLICE_DIM", DEFAULT_MAX_SLICE_DIM))


def state_index(dx, dy) -> int:
    idx = 0
    for a, b in zip(dx, dy):
        idx = (idx << 2) | (int(a) << 1) | int(b)
    return idx


def decode_state(index: int, r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    dx, dy = [], []
    for i in range(r):
        shift = 2 * (r - 1 - i)
        dx.append((index >> (shift + 1)) & 1)
        dy.append((index >> shift) & 1)
    return tuple(dx), tuple(dy)


def state_profile(index: int, r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Section values relative to the centre: (z - x_i, z - y_i) for i = 1..r."""
    dx, dy = decode_state(index, r)
    return tuple(np.cumsum(dx).tolist()), tuple(np.cumsum(dy).tolist())


def r2_table_position(index: int) -> tuple[int, int]:
    """Cell of a 2-reach state in the 4x4 tabular layout of the stationary vector.

    Rows are indexed by (d1x, d2x) and columns by (d1y, d2y), each read as a
    two-bit number with the first-step bit most significant.
    """
    (d1x, d2x), (d1y, d2y) = decode_state(index, 2)
    return 2 * d1x + d2x, 2 * d1y + d2y


def _states_relative(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Section values of every state with the centre at 0, shape (S, r+1)."""
    S = 4 ** r
    idx = np.arange(S)
    x = np.zeros((S, r + 1), dtype=np.int64)
    y = np.zeros((S, r + 1), dtype=np.int64)
    for i in range(1, r + 1):
        shift = 2 * (r - i)
        x[:, i] = x[:, i - 1] - ((idx >> (shift + 1)) & 1)
        y[:, i] = y[:, i - 1] - ((idx >> shift) & 1)
    return x, y


def _encode_profile(x: np.ndarray, y: np.ndarray, r: int) -> np.ndarray:
    dx = x[..., :-1] - x[..., 1:]
    dy = y[..., :-1] - y[..., 1:]
    if dx.min(initial=0) < 0 or dx.max(initial=0) > 1 or dy.min(initial=0) < 0 or dy.max(initial=0) > 1:
        raise AssertionError("adjacent section values must differ by 0 or 1")
    out = np.zeros(x.shape[:-1], dtype=np.int64)
    for i in range(r):
        out = (out << 2) | (dx[..., i] << 1) | dy[..., i]
    return out


def _fresh_patterns(r: int):
    """All 2^(2r+1) fresh-eps patterns as (col, row, ones) arrays.

    Bit order, most significant first: eps[n-r, n], ..., eps[n, n],
    eps[n, n-1], ..., eps[n, n-r] -- the section read left to right.
    """
    m = 2 * r + 1
    pats = np.arange(2 ** m, dtype=np.int64)
    bits = (pats[:, None] >> np.arange(m - 1, -1, -1)) & 1
    col = bits[:, :r + 1][:, ::-1]  # col[i] = eps[n-i, n]
    row = np.concatenate([np.zeros((len(pats), 1), dtype=np.int64), bits[:, r + 1:]], axis=1)
    return col.astype(bool), row.astype(bool), bits.sum(axis=1)


def transition_counts(r: int) -> dict:
    """k-independent transition census.

    Maps ``(incr, old, new, eps_nn, ones)`` to the number of fresh patterns
    with that many ones producing that transition.
    """
    if r < 1:
        raise ValueError("reach r must be >= 1")
    if r > max_transfer_r():
        raise ResourceCapError(
            f"r={r} exceeds the transfer-matrix cap r <= {max_transfer_r()} "
            f"(set RREACH_MAX_R to raise it; needs {2 ** (4 * r + 1)} section updates)"
        )
    return _transition_counts(r)


@lru_cache(maxsize=None)
def _transition_counts(r: int) -> dict:
    col, row, ones = _fresh_patterns(r)
    x0, y0 = _states_relative(r)
    S, P = len(x0), len(ones)
    chunk = max(1, (1 << 21) // P)
    counts: dict = {}
    for start in range(0, S, chunk):
        xs = x0[start:start + chunk, None, :]
        ys = y0[start:start + chunk, None, :]
        shape = (xs.shape[0], P, r + 1)
        nx, ny = advance_section_batch(
            np.broadcast_to(xs, shape), np.broadcast_to(ys, shape),
            np.broadcast_to(col, shape), np.broadcast_to(row, shape), r)
        incr = nx[..., 0]
        if incr.min() < 0 or incr.max() > 1:
            raise AssertionError("centre must advance by 0 or 1")
        new = _encode_profile(nx - incr[..., None], ny - incr[..., None], r)
        old = np.broadcast_to(np.arange(start, start + xs.shape[0])[:, None], new.shape)
        enn = np.broadcast_to(col[:, 0], new.shape)
        key = np.stack([incr, old, new, enn, np.broadcast_to(ones, new.shape)], axis=-1).reshape(-1, 5)
        uniq, cnt = np.unique(key, axis=0, return_counts=True)
        for kk, c in zip(map(tuple, uniq.tolist()), cnt.tolist()):
            counts[kk] = counts.get(kk, 0) + c
    return counts


@dataclass(frozen=True)
class TransitionPair:
    k: int
    r: int
    M: RationalMatrix
    N: RationalMatrix
    model: str = "bernoulli"

    @property
    def dim(self) -> int:
        return self.M.rows

    def T(self, b=1) -> RationalMatrix:
        return self.M + self.N.scale(b)

    def integer_form(self) -> tuple[int, list[list[int]], list[list[int]]]:
        """Common denominator D and integer numerator matrices D*M, D*N."""
        D = lcm(self.M.common_denominator(), self.N.common_denominator())
        Mi = [[int(e * D) for e in self.M.row(i)] for i in range(self.dim)]
        Ni = [[int(e * D) for e in self.N.row(i)] for i in range(self.dim)]
        return D, Mi, Ni

    def sparse_rows(self) -> list[list[tuple[int, Fraction, Fraction]]]:
        """Per old state, the (new state, M entry, N entry) triples with a nonzero entry."""
        out = []
        for i in range(self.dim):
            mr, nr = self.M.row(i), self.N.row(i)
            out.append([(j, mr[j], nr[j]) for j in range(self.dim) if mr[j] or nr[j]])
        return out


def _pair_from_counts(k: int, m: int, S: int, counts: dict, augmented: bool, model: str):
    den = k ** m
    dim = 2 * S if augmented else S
    acc = [[[0] * dim for _ in range(dim)] for _ in range(2)]
    for (incr, old, new, enn, ones), c in counts.items():
        w = c * (k - 1) ** (m - ones)
        if augmented:
            # rows are identical for both values of the old match bit
            for old_on in (0, 1):
                acc[incr][old_on * S + old][enn * S + new] += w
        else:
            acc[incr][old][new] += w
    M, N = (RationalMatrix(dim, dim, tuple(Fraction(v, den) for row in a for v in row)) for a in acc)
    return M, N


def build_transition_matrices(k: int, r: int) -> TransitionPair:
    if k < 2:
        raise UnsupportedParameters("alphabet size k must be at least 2")
    counts = transition_counts(r)
    M, N = _pair_from_counts(k, 2 * r + 1, 4 ** r, counts, False, "bernoulli")
    return TransitionPair(k, r, M, N, "bernoulli")


def build_augmented_matrices(k: int = 2, r: int = 1) -> TransitionPair:
    """8x8 matrices with states split by the match bit at (n, n): off block first."""
    if (k, r) != (2, 1):
        raise UnsupportedParameters("augmented Bernoulli matrices are defined for k=2, r=1 only")
    M, N = _pair_from_counts(k, 3, 4, transition_counts(1), True, "bernoulli-augmented")
    return TransitionPair(k, r, M, N, "bernoulli-augmented")


@dataclass(frozen=True)
class GammaExact:
    gamma: Fraction
    stationary: tuple
    char_slice_lambda: UniPolynomial  # g(lambda, 1)
    char_slice_b: UniPolynomial  # g(1, b)
    pair: TransitionPair = field(repr=False, compare=False, default=None)


def char_slices(pair: TransitionPair) -> tuple[UniPolynomial, UniPolynomial]:
    """g(lambda, 1) and g(1, b) of g(lambda, b) = det(T(b) - lambda I), by interpolation."""
    n = pair.dim
    if n > max_slice_dim():
        raise ResourceCapError(
            f"characteristic slices need {2 * (n + 1)} exact determinants of side {n}; "
            f"cap is side {max_slice_dim()} (set RREACH_MAX_SLICE_DIM to raise it)")
    D, Mi, Ni = pair.integer_form()
    scale = Fraction(1, D ** n)
    Ti = [[a + b for a, b in zip(mr, nr)] for mr, nr in zip(Mi, Ni)]

    def g_lambda(lam: int) -> Fraction:
        rows = [list(r) for r in Ti]
        for i in range(n):
            rows[i][i] -= lam * D
        return integer_det(rows) * scale

    def g_b(b: int) -> Fraction:
        rows = [[a + b * c for a, c in zip(mr, nr)] for mr, nr in zip(Mi, Ni)]
        for i in range(n):
            rows[i][i] -= D
        return integer_det(rows) * scale

    pts = range(n + 1)
    return (interpolate([(t, g_lambda(t)) for t in pts]),
            interpolate([(t, g_b(t)) for t in pts]))


def stationary_vector(pair: TransitionPair) -> tuple:
    basis = left_nullspace(pair.T(1) - pair.M.identity(pair.dim))
    if len(basis) != 1:
        raise DegeneracyError(
            f"stationary vector is not unique: left nullspace of T(1)-I has dimension {len(basis)}")
    v = basis[0].entries
    total = sum(v, Fraction(0))
    return tuple(e / total for e in v)


def drift_gamma(pair: TransitionPair, stationary) -> Fraction:
    """Mean centre increment per step under ``stationary``: pi N 1."""
    return sum((p * s for p, s in zip(stationary, pair.N.row_sums())), Fraction(0))


def gamma_exact(pair: TransitionPair) -> GammaExact:
    g_lam, g_b = char_slices(pair)
    dl = poly_derivative_at(g_lam, 1)
    if dl == 0:
        raise DegeneracyError("lambda = 1 is not a simple root of g(lambda, 1)")
    db = poly_derivative_at(g_b, 1)
    pi = stationary_vector(pair)
    return GammaExact(-db / dl, pi, g_lam, g_b, pair)


def gamma_formula_check(k: int, r: int) -> Fraction:
    """Closed forms of the limiting constant for reach 1 and 2."""
    if r == 1:
        return Fraction(3 * k + 2, k * k + 3 * k + 1)
    if r == 2:
        return Fraction(5 * k ** 3 + 20 * k ** 2 + 15 * k + 2,
                        k ** 4 + 10 * k ** 3 + 20 * k ** 2 + 10 * k + 1)
    raise UnsupportedParameters("closed forms exist for r in {1, 2} only")


def pair_to_json(pair: TransitionPair) -> dict:
    def enc(m: RationalMatrix):
        return [[[str(e.numerator), str(e.denominator)] for e in m.row(i)] for i in range(m.rows)]
    return {"k": pair.k, "r": pair.r, "model": pair.model, "M": enc(pair.M), "N": enc(pair.N)}


def pair_from_json(data: dict) -> TransitionPair:
    def dec(rows):
        return RationalMatrix.from_rows([[Fraction(int(a), int(b)) for a, b in row] for row in rows])
    return TransitionPair(int(data["k"]), int(data["r"]), dec(data["M"]), dec(data["N"]),
                          data.get("model", "bernoulli"))
