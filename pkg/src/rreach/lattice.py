"""Dynamic-programming engines for L(u, v), L_r(u, v) and banded match lattices.

Lattice coordinates are 1-based as in the usual LCS table: cell (i, j) pairs
u(i) with v(j), and row/column 0 is the zero boundary.

A *section* at step n is the set of 2r+1 cells (n-r, n), ..., (n, n), ...,
(n, n-r).  Its values are kept as two lists ``x`` and ``y`` of length r+1
with ``x[i] = R[n-i, n]``, ``y[i] = R[n, n-i]`` and ``x[0] = y[0] = R[n, n]``.
Cells that fall on or outside the boundary (index <= 0) hold 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class StringSeq:
    symbols: tuple
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("alphabet size k must be at least 2")
        syms = tuple(int(s) for s in self.symbols)
        if any(s < 0 or s >= self.k for s in syms):
            raise ValueError(f"symbols must lie in [0, {self.k})")
        object.__setattr__(self, "symbols", syms)

    def __len__(self):
        return len(self.symbols)

    @classmethod
    def from_text(cls, text: str, alphabet: str | None = None) -> "StringSeq":
        """Encode ``text`` over a dense alphabet (sorted distinct characters by default)."""
        alphabet = alphabet if alphabet is not None else "".join(sorted(set(text)))
        index = {c: i for i, c in enumerate(alphabet)}
        return cls(tuple(index[c] for c in text), max(2, len(alphabet)))

    @classmethod
    def encode_pair(cls, a: str, b: str) -> tuple["StringSeq", "StringSeq"]:
        alphabet = "".join(sorted(set(a) | set(b)))
        return cls.from_text(a, alphabet), cls.from_text(b, alphabet)


@dataclass(frozen=True)
class EpsilonBand:
    """Match indicators eps[i, j] for 1 <= i, j <= n and |i - j| <= r."""

    n: int
    r: int
    bits: tuple  # bits[i-1][j-i+r], out-of-lattice slots hold 0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("reach r must be >= 1")
        if len(self.bits) != self.n or any(len(row) != 2 * self.r + 1 for row in self.bits):
            raise DimensionError("bits must be an n x (2r+1) table")

    def in_band(self, i: int, j: int) -> bool:
        return 1 <= i <= self.n and 1 <= j <= self.n and abs(i - j) <= self.r

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not self.in_band(i, j):
            raise IndexError(f"cell {ij} is outside the band (n={self.n}, r={self.r})")
        return self.bits[i - 1][j - i + self.r]

    def cells(self):
        for i in range(1, self.n + 1):
            for j in range(max(1, i - self.r), min(self.n, i + self.r) + 1):
                yield i, j

    @property
    def num_cells(self) -> int:
        return sum(1 for _ in self.cells())

    @classmethod
    def from_function(cls, n: int, r: int, f: Callable[[int, int], int]) -> "EpsilonBand":
        rows = []
        for i in range(1, n + 1):
            row = []
            for d in range(-r, r + 1):
                j = i + d
                row.append(1 if (1 <= j <= n and f(i, j)) else 0)
            rows.append(tuple(row))
        return cls(n, r, tuple(rows))

    @classmethod
    def from_cells(cls, n: int, r: int, values: dict) -> "EpsilonBand":
        return cls.from_function(n, r, lambda i, j: values[(i, j)])


@dataclass(frozen=True)
class DpResult:
    length: int
    final_section: tuple  # R[n-r, n], ..., R[n, n], ..., R[n, n-r]


def _check_pair(u: StringSeq, v: StringSeq):
    if u.k != v.k:
        raise ValueError(f"alphabet mismatch: k={u.k} vs k={v.k}")


def lcs_length(u: StringSeq, v: StringSeq) -> int:
    _check_pair(u, v)
    a, b = u.symbols, v.symbols
    prev = [0] * (len(b) + 1)
    for i in range(1, len(a) + 1):
        cur = [0] * (len(b) + 1)
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] > prev[j] else prev[j]
        prev = cur
    return prev[-1]


def rreach_grid_length(n: int, r: int, eps: Callable[[int, int], int]) -> int:
    """R[n, n] from the full-table r-reach recurrence; ``eps`` is queried in-band only."""
    if r < 1:
        raise ValueError("reach r must be >= 1")
    R = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(max(1, i - r), min(n, i + r) + 1):
            if eps(i, j):
                R[i][j] = R[i - 1][j - 1] + 1
            elif j - i >= r:
                R[i][j] = R[i][j - 1]
            elif i - j >= r:
                R[i][j] = R[i - 1][j]
            else:
                R[i][j] = max(R[i][j - 1], R[i - 1][j])
    return R[n][n]


def rreach_string_length(u: StringSeq, v: StringSeq, r: int) -> int:
    _check_pair(u, v)
    if len(u) != len(v):
        raise DimensionError("r-reach LCS needs strings of equal length")
    a, b = u.symbols, v.symbols
    return rreach_grid_length(len(a), r, lambda i, j: a[i - 1] == b[j - 1])


def band_from_strings(u: StringSeq, v: StringSeq, r: int) -> EpsilonBand:
    _check_pair(u, v)
    if len(u) != len(v):
        raise DimensionError("band needs strings of equal length")
    a, b = u.symbols, v.symbols
    return EpsilonBand.from_function(len(a), r, lambda i, j: a[i - 1] == b[j - 1])


def advance_section(x: Sequence[int], y: Sequence[int], col: Sequence[int],
                    row: Sequence[int], r: int, n: int | None = None):
    """One section step of the r-reach recurrence.

    ``col[i] = eps[n-i, n]`` for i = 0..r and ``row[j] = eps[n, n-j]`` for
    j = 1..r (``row[0]`` is ignored).  ``n`` masks the cells that fall on the
    boundary while n <= r; omit it in the steady state.
    """
    lim = r if n is None else min(r, n - 1)
    nx = [0] * (r + 1)
    ny = [0] * (r + 1)
    for new, old, e in ((nx, x, col), (ny, y, row)):
        for i in range(lim, 0, -1):
            if e[i]:
                new[i] = old[i] + 1
            elif i == r:
                new[i] = old[i - 1]
            else:
                a, b = old[i - 1], new[i + 1]
                new[i] = a if a > b else b
    if col[0]:
        z = x[0] + 1
    else:
        z = nx[1] if nx[1] > ny[1] else ny[1]
    nx[0] = ny[0] = z
    return nx, ny


def rreach_band_length(band: EpsilonBand) -> DpResult:
    r, n = band.r, band.n
    x = [0] * (r + 1)
    y = [0] * (r + 1)
    for step in range(1, n + 1):
        bits = band.bits[step - 1]
        # bits[d + r] = eps[step, step + d]; column cells need eps[step - i, step]
        col = [0] * (r + 1)
        for i in range(0, min(r, step - 1) + 1):
            col[i] = band.bits[step - i - 1][i + r]
        row = [0] + [bits[r - j] for j in range(1, r + 1)]
        x, y = advance_section(x, y, col, row, r, step)
    section = tuple(reversed(x[1:])) + (x[0],) + tuple(y[1:])
    return DpResult(x[0], section)


def advance_section_batch(x: np.ndarray, y: np.ndarray, col: np.ndarray,
                          row: np.ndarray, r: int, n: int | None = None):
    """Vectorised :func:`advance_section`; the section index is the last axis.

    ``x``, ``y``, ``col``, ``row`` have shape (..., r+1); ``col``/``row`` are
    boolean-like.  Returns new (x, y) arrays.
    """
    lim = r if n is None else min(r, n - 1)
    nx = np.zeros_like(x)
    ny = np.zeros_like(y)
    for new, old, e in ((nx, x, col), (ny, y, row)):
        for i in range(lim, 0, -1):
            if i == r:
                fallback = old[..., i - 1]
            else:
                fallback = np.maximum(old[..., i - 1], new[..., i + 1])
            new[..., i] = np.where(e[..., i], old[..., i] + 1, fallback)
    z = np.where(col[..., 0], x[..., 0] + 1, np.maximum(nx[..., 1], ny[..., 1]))
    nx[..., 0] = z
    ny[..., 0] = z
    return nx, ny
