"""Brute-force ground truth by exhaustive enumeration.

Every expectation here is a plain weighted sum over all inputs, evaluated with
the full-table DP from :mod:`rreach.lattice`.  Nothing is pruned or shared
with the transfer-matrix code.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceCapError
from .lattice import (EpsilonBand, StringSeq, band_from_strings, lcs_length,
                      rreach_grid_length, rreach_string_length)
from .strings import realizability_weight

DEFAULT_MAX_STRING_PAIRS = 10 ** 8
DEFAULT_MAX_BAND_CELLS = 25
MAX_CENSUS_N = 5


def _cap(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


@dataclass(frozen=True)
class OracleResult:
    model: str
    k: int
    r: int | None  # None means unrestricted
    n: int
    expectation: Fraction
    enumeration_count: int


def string_expectation(k: int, n: int, r: int | None = None) -> OracleResult:
    """Exact mean of L(u, v) (or L_r) over all k^(2n) ordered string pairs."""
    count = k ** (2 * n)
    cap = _cap("RREACH_MAX_STRING_PAIRS", DEFAULT_MAX_STRING_PAIRS)
    if count > cap:
        raise ResourceCapError(f"{count} string pairs exceeds the cap of {cap}")
    words = [StringSeq(w, k) for w in itertools.product(range(k), repeat=n)]
    total = 0
    for u in words:
        for v in words:
            total += lcs_length(u, v) if r is None else rreach_string_length(u, v, r)
    return OracleResult("string", k, r, n, Fraction(total, count), count)


def band_cells(n: int, r: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if abs(i - j) <= r]


def bernoulli_expectation(k: int, n: int, r: int) -> OracleResult:
    """Exact E[R_nn] when every band cell is an independent Bernoulli(1/k)."""
    cells = band_cells(n, r)
    cap = _cap("RREACH_MAX_BAND_CELLS", DEFAULT_MAX_BAND_CELLS)
    if len(cells) > cap:
        raise ResourceCapError(f"{len(cells)} band cells exceeds the cap of {cap}")
    by_ones = Counter()  # number of ones -> summed length
    for bits in itertools.product((0, 1), repeat=len(cells)):
        values = dict(zip(cells, bits))
        by_ones[sum(bits)] += rreach_grid_length(n, r, lambda i, j: values[(i, j)])
    m = len(cells)
    num = sum(total * (k - 1) ** (m - ones) for ones, total in by_ones.items())
    return OracleResult("bernoulli", k, r, n, Fraction(num, k ** m), 2 ** m)


def realizability_census(n: int) -> dict[int, int]:
    """Check the window criterion against brute force; return {weight: #configurations}.

    Every banded r = 1 configuration is compared with the number of binary
    string pairs producing it.  Raises AssertionError on any disagreement.
    """
    if n > MAX_CENSUS_N:
        raise ResourceCapError(f"census is capped at n <= {MAX_CENSUS_N}")
    cells = band_cells(n, 1)
    realized = Counter()
    words = [StringSeq(w, 2) for w in itertools.product((0, 1), repeat=n)]
    for u in words:
        for v in words:
            band = band_from_strings(u, v, 1)
            realized[tuple(band[c] for c in cells)] += 1
    summary = Counter()
    for bits in itertools.product((0, 1), repeat=len(cells)):
        brute = realized.get(bits, 0)
        band = EpsilonBand.from_cells(n, 1, dict(zip(cells, bits)))
        predicted = realizability_weight(band)
        if brute != predicted:
            raise AssertionError(f"configuration {bits}: {brute} realising pairs, criterion says {predicted}")
        summary[brute] += 1
    return dict(summary)
