"""Random String model, binary alphabet, reach 1.

For k = 2 the match indicators on the r = 1 band are produced by a string pair
exactly when every 2x2 window has an even number of ones, in which case two
pairs realise them (u, v and the complemented pair).  This makes the section
process Markov once the state remembers the match bit at (n, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import GammaExact, TransitionPair, decode_state, gamma_exact, state_index
from .errors import UnsupportedParameters
from .lattice import EpsilonBand, advance_section
from .rational import RationalMatrix


@dataclass(frozen=True)
class Window2x2:
    """Match bits around a diagonal step, laid out

        eps[i-1, i]    eps[i, i]
        eps[i-1, i-1]  eps[i, i-1]
    """

    top_left: int
    top_right: int
    bottom_left: int
    bottom_right: int

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return self.top_left, self.top_right, self.bottom_left, self.bottom_right

    @property
    def realizable(self) -> bool:
        return sum(self.bits) in (0, 2, 4)

    @classmethod
    def at(cls, band: EpsilonBand, i: int) -> "Window2x2":
        return cls(band[i - 1, i], band[i, i], band[i - 1, i - 1], band[i, i - 1])


REALIZABLE_WINDOWS = frozenset(
    Window2x2(*b) for b in (
        (1, 1, 1, 1), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 1, 0),
        (0, 0, 0, 0), (1, 0, 0, 1), (1, 1, 0, 0), (0, 1, 0, 1),
    )
)


def realizability_weight(band: EpsilonBand) -> int:
    """Number of binary string pairs whose match pattern on the band is ``band``."""
    if band.r != 1:
        raise UnsupportedParameters("realizability weight is defined for r = 1 only")
    for i in range(2, band.n + 1):
        if not Window2x2.at(band, i).realizable:
            return 0
    return 2


def augmented_index(d_x: int, d_y: int, on: int) -> int:
    return 4 * on + state_index((d_x,), (d_y,))


def build_string_matrices() -> TransitionPair:
    """Augmented 8x8 transfer matrices of the k = 2, r = 1 string model.

    Given the previous match bit e = eps[n-1, n-1], let a = [u(n) = u(n-1)] and
    b = [v(n) = v(n-1)], independent fair bits.  Over two letters the fresh
    indicators are eps[n-1, n] = e xor not b, eps[n, n-1] = e xor not a and
    eps[n, n] = e xor (a xor b).
    """
    rows_m = [[Fraction(0)] * 8 for _ in range(8)]
    rows_n = [[Fraction(0)] * 8 for _ in range(8)]
    quarter = Fraction(1, 4)
    for on in (0, 1):
        for s in range(4):
            (dx,), (dy,) = decode_state(s, 1)
            x, y = [0, -dx], [0, -dy]
            for a in (0, 1):
                for b in (0, 1):
                    e_top = on ^ (1 - b)
                    e_right = on ^ (1 - a)
                    e_nn = on ^ a ^ b
                    nx, ny = advance_section(x, y, [e_nn, e_top], [0, e_right], 1)
                    z = nx[0]
                    new = augmented_index(nx[0] - nx[1], ny[0] - ny[1], e_nn)
                    target = rows_n if z == 1 else rows_m
                    target[augmented_index(dx, dy, on)][new] += quarter
    return TransitionPair(2, 1, RationalMatrix.from_rows(rows_m), RationalMatrix.from_rows(rows_n),
                          "string-augmented")


def gamma_string_exact() -> GammaExact:
    return gamma_exact(build_string_matrices())
