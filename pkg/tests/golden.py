"""Hand-computed reference matrices and polynomials, transcribed for comparison."""

from fractions import Fraction as F

Q, H, E = F(1, 4), F(1, 2), F(1, 8)


def bernoulli_r1(k):
    k = F(k)
    M = [[(k - 1) ** 3 / k ** 3, 0, 0, 0],
         [(k - 1) ** 2 / k ** 2, 0, 0, 0],
         [(k - 1) ** 2 / k ** 2, 0, 0, 0],
         [(k - 1) / k, 0, 0, 0]]
    N = [[1 / k ** 2, (k - 1) / k ** 2, (k - 1) / k ** 2, (k - 1) ** 2 / k ** 3],
         [0, 1 / k, 0, (k - 1) / k ** 2],
         [0, 0, 1 / k, (k - 1) / k ** 2],
         [0, 0, 0, 1 / k]]
    return M, N


def _first_column(col):
    return [[c] + [0] * 7 for c in col]


STRING_M = _first_column([Q, Q, Q, H, 0, Q, Q, H])
STRING_N = [
    [Q, 0, 0, 0, 0, Q, Q, 0],
    [0, Q, 0, 0, 0, Q, 0, Q],
    [0, 0, Q, 0, 0, 0, Q, Q],
    [0, 0, 0, 0, 0, 0, 0, H],
    [0, Q, Q, 0, Q, 0, 0, Q],
    [0, Q, 0, 0, 0, Q, 0, Q],
    [0, 0, Q, 0, 0, 0, Q, Q],
    [0, 0, 0, 0, 0, 0, 0, H],
]

AUGMENTED_M = _first_column([E, Q, Q, H, E, Q, Q, H])
AUGMENTED_N = [
    [E, E, E, 0, E, E, E, E],
    [0, Q, 0, 0, 0, Q, 0, Q],
    [0, 0, Q, 0, 0, 0, Q, Q],
    [0, 0, 0, 0, 0, 0, 0, H],
    [E, E, E, 0, E, E, E, E],
    [0, Q, 0, 0, 0, Q, 0, Q],
    [0, 0, Q, 0, 0, 0, Q, Q],
    [0, 0, 0, 0, 0, 0, 0, H],
]


def g_bernoulli_r1(k, lam, b):
    k = F(k)
    inner = (b ** 3 - b ** 2 * k * lam * (k + 2)
             + b * lam * (k ** 3 + 2 * k ** 3 * lam - 3 * k ** 2 + k ** 2 * lam + 3 * k - 1)
             + lam ** 2 * k * (k ** 3 - lam * k ** 3 - 3 * k ** 2 + 3 * k - 1))
    return (-lam * k + b) * inner / k ** 5


def g_string(lam, b):
    inner = b ** 3 + b ** 2 * (-8 * lam + 1) + 2 * b * lam * (-1 + 10 * lam) + 4 * lam ** 2 * (-4 * lam + 1)
    return -F(1, 128) * lam ** 3 * (b - 2 * lam) * (b - 4 * lam) * inner


def g_augmented(lam, b):
    inner = b ** 3 - 8 * b ** 2 * lam + b * lam * (1 + 20 * lam) + 2 * lam ** 2 * (1 - 8 * lam)
    return F(1, 32) * lam ** 4 * (b - 2 * lam) * inner


def r2_stationary_table(k):
    k = F(k)
    return [[k ** 2, 2 * k, k, 1],
            [2 * k, k + 4, k + 2, 2 * (k + 1) / k],
            [k, k + 2, k + 1, (2 * k + 1) / k],
            [1, 2 * (k + 1) / k, (2 * k + 1) / k, (k ** 2 + 4 * k + 1) / k ** 2]]


# published Monte Carlo extrapolations, r = 1..10
MC_GAMMA_BERNOULLI = dict(zip(range(1, 11), (0.72726, 0.77166, 0.78898, 0.79813, 0.80396,
                                             0.80796, 0.81119, 0.81284, 0.81458, 0.81592)))
MC_GAMMA_STRING = dict(zip(range(1, 11), (0.70014, 0.73767, 0.75610, 0.76718, 0.77467,
                                          0.78004, 0.78408, 0.78726, 0.78976, 0.79180)))
EXACT_FIT_GAMMA = {1: 0.7272727273, 2: 0.7715736043, 3: 0.7889693851, 4: 0.7982222051}
EXACT_FIT_A = {1: 0.264463, 2: 0.434745, 3: 0.574312, 4: 0.696534}
