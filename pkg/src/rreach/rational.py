"""Exact rational linear algebra and univariate polynomials.

Scalars are :class:`fractions.Fraction`, which already keeps values in lowest
terms with a positive denominator.  Matrices are small immutable dense
containers; determinants go through integer Bareiss elimination after the
rows are cleared of denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionError

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major, Fraction

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise DimensionError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("rows must be non-empty and of equal length")
        flat = tuple(as_rational(x) for r in rows for x in r)
        return cls(len(rows), len(rows[0]), flat)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(_ONE if i == j else _ZERO for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def _check_same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), _ZERO))
        return RationalMatrix(self.rows, other.cols, tuple(out))

    def vecmat(self, v: Sequence) -> list[Fraction]:
        """Row vector times matrix."""
        if len(v) != self.rows:
            raise DimensionError("vector length must equal row count")
        out = [_ZERO] * self.cols
        for i, vi in enumerate(v):
            if not vi:
                continue
            base = i * self.cols
            for j in range(self.cols):
                a = self.entries[base + j]
                if a:
                    out[j] += vi * a
        return out

    def row_sums(self) -> list[Fraction]:
        return [sum(self.row(i), _ZERO) for i in range(self.rows)]

    def common_denominator(self) -> int:
        return lcm(*(e.denominator for e in self.entries))


def _bareiss_int(a: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination (in place)."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            if aik:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            else:
                # exact division still required for the rows below the pivot
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * akk) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    return _bareiss_int([list(r) for r in rows]) if rows else 1


def det(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise DimensionError(f"det needs a square matrix, got {m.rows}x{m.cols}")
    scale = 1
    rows = []
    for i in range(m.rows):
        r = m.row(i)
        d = lcm(*(x.denominator for x in r))
        scale *= d
        rows.append([x.numerator * (d // x.denominator) for x in r])
    return Fraction(_bareiss_int(rows), scale)


def _rref_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Right nullspace basis of the matrix given by ``rows``."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai, ar = a[i], a[r]
                a[i] = [x - f * y for x, y in zip(ai, ar)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for row_idx, pc in enumerate(pivots):
            v[pc] = -a[row_idx][f]
        basis.append(v)
    return basis


def left_nullspace(m: RationalMatrix) -> list[RationalMatrix]:
    """Basis (as 1 x n row vectors) of ``{v : v m = 0}``."""
    if not m.is_square:
        raise DimensionError(f"left_nullspace needs a square matrix, got {m.rows}x{m.cols}")
    mt = m.transpose()
    basis = _rref_nullspace([list(mt.row(i)) for i in range(mt.rows)], mt.cols)
    return [RationalMatrix(1, m.rows, tuple(v)) for v in basis]


@dataclass(frozen=True)
class UniPolynomial:
    coefficients: tuple  # index = power

    def __post_init__(self):
        c = [as_rational(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPolynomial":
        return UniPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def __eq__(self, other):
        if isinstance(other, UniPolynomial):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)


def interpolate(points: Iterable[tuple]) -> UniPolynomial:
    """Unique polynomial of degree < len(points) through ``points`` (Newton form)."""
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    xs = [p[0] for p in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be pairwise distinct")
    n = len(pts)
    if n == 0:
        return UniPolynomial(())
    coef = [p[1] for p in pts]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form, Horner-style from the highest divided difference
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        shifted = [_ZERO] + poly
        for t in range(len(poly)):
            shifted[t] -= xs[i] * poly[t]
        shifted[0] += coef[i]
        poly = shifted
    return UniPolynomial(tuple(poly))


def poly_derivative_at(p: UniPolynomial, x) -> Fraction:
    return p.derivative()(as_rational(x))
