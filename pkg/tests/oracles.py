"""Independent reference computations used by the tests.

Everything here is deliberately naive (plain lists, trial division) and shares
no code with the package.
"""

from fractions import Fraction


def sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein_list(k, N):
    c = {2: -24, 4: 240, 6: -504}[k]
    return [Fraction(1)] + [Fraction(c * sigma(k - 1, n)) for n in range(1, N + 1)]


def mul(a, b, N):
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a[:N + 1]):
        if x:
            for j, y in enumerate(b[:N + 1 - i]):
                out[i + j] += x * y
    return out


def inv(a, N):
    """Power-series inverse by long division; a[0] must be nonzero."""
    out = [Fraction(0)] * (N + 1)
    out[0] = 1 / Fraction(a[0])
    for n in range(1, N + 1):
        s = sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        out[n] = -s / a[0]
    return out


def j_coefficients(N):
    """Coefficients of q^-1, q^0, ..., q^N in j = E4^3 / ((E4^3 - E6^2)/1728)."""
    W = N + 2
    E4, E6 = eisenstein_list(4, W), eisenstein_list(6, W)
    E4c = mul(mul(E4, E4, W), E4, W)
    disc = [(x - y) / 1728 for x, y in zip(E4c, mul(E6, E6, W))]
    assert disc[0] == 0 and disc[1] == 1
    shifted = disc[1:] + [Fraction(0)]
    return mul(E4c, inv(shifted, W), W)[:N + 2]


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def std_j(g):
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = -1
    return J


def transpose(A):
    return [list(r) for r in zip(*A)]


def is_symplectic_lists(M):
    g = len(M) // 2
    J = std_j(g)
    return mat_mul(mat_mul(transpose(M), J), M) == J
