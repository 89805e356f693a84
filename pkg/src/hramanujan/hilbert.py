"""Real quadratic fields and Hilbert-Blumenthal period data for g = 2.

Field elements are ``a + b sqrt(d)`` with exact coefficients. The coefficients
may themselves be field elements, so ``C (x) F`` is modelled exactly by
nesting over the Gaussian rationals ``Q(i) = Q(sqrt(-1))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InvalidField, NotInGroup, NotInInverseDifferent
from .periods import HodgeBasis, PolarizedTorus, period_matrices, standard_bases
from .symplectic import TWO_PI_I, is_exact_symplectic, psi, sp_residual


def _frac(x):
    if isinstance(x, QuadFieldElement):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


class QuadFieldElement:
    """``a + b sqrt(d)``; d may be negative (``d = -1`` gives the Gaussian rationals)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 5):
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = int(d)

    def depth(self) -> int:
        return 1 + max(_depth(self.a), _depth(self.b))

    def _lift(self, other):
        if isinstance(other, QuadFieldElement):
            if other.d == self.d:
                return other
            if other.depth() >= self.depth():
                return None
        return QuadFieldElement(other, 0, self.d)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadFieldElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadFieldElement(self.a * o.a + self.d * self.b * o.b,
                                self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self) -> "QuadFieldElement":
        return QuadFieldElement(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def trace(self):
        return 2 * self.a

    def inverse(self) -> "QuadFieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        ninv = _inv(n)
        return QuadFieldElement(self.a * ninv, -self.b * ninv, self.d)

    def __truediv__(self, other):
        return self * _inv(other)

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __eq__(self, other):
        if not isinstance(other, QuadFieldElement):
            if isinstance(other, (int, Fraction)):
                return self.b == 0 and self.a == other
            return NotImplemented
        return self.d == other.d and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def is_rational(self) -> bool:
        return self.b == 0 and not isinstance(self.a, QuadFieldElement)

    def to_complex(self) -> complex:
        return _to_complex(self.a) + _to_complex(self.b) * cmath.sqrt(self.d)

    def embed(self, k: int) -> complex:
        """``sigma_k``: k = 0 keeps sqrt(d) positive, k = 1 conjugates."""
        return (self if k == 0 else self.conj()).to_complex()

    def __repr__(self):
        return f"({self.a}) + ({self.b})*sqrt({self.d})"

    def to_json(self):
        def enc(x):
            return x.to_json() if isinstance(x, QuadFieldElement) else str(x)
        return {"a": enc(self.a), "b": enc(self.b), "d": self.d}


def _depth(x) -> int:
    return x.depth() if isinstance(x, QuadFieldElement) else 0


def _inv(x):
    if isinstance(x, QuadFieldElement):
        return x.inverse()
    return Fraction(1) / x


def _to_complex(x) -> complex:
    return x.to_complex() if isinstance(x, QuadFieldElement) else complex(float(x))


def gaussian(re, im=0) -> QuadFieldElement:
    return QuadFieldElement(re, im, -1)


def _squarefree(d: int) -> bool:
    return all(d % (p * p) for p in range(2, math.isqrt(d) + 1))


@dataclass(frozen=True)
class QuadFieldContext:
    d: int
    omega: QuadFieldElement
    disc: int
    x_basis: tuple
    r_basis: tuple
    X_embed: np.ndarray
    R_embed: np.ndarray

    def el(self, a, b=0) -> QuadFieldElement:
        return QuadFieldElement(a, b, self.d)

    def sqrt_disc(self) -> QuadFieldElement:
        return self.el(0, 1) if self.disc == self.d else self.el(0, 2)

    def integral_coords(self, x: QuadFieldElement):
        """Coordinates of x in the basis (1, omega) of R; rational in general."""
        b = x.b / self.omega.b
        return x.a - b * self.omega.a, b

    def in_ring(self, x) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.integral_coords(x))

    def in_inverse_different(self, x) -> bool:
        # x lies in D^{-1} iff Tr(x r) is an integer for every r in R
        return all(Fraction((x * r).trace()).denominator == 1 for r in (self.el(1), self.omega))

    def to_json(self) -> dict:
        return {
            "d": self.d, "disc": self.disc, "omega": self.omega.to_json(),
            "x_basis": [x.to_json() for x in self.x_basis],
            "r_basis": [r.to_json() for r in self.r_basis],
            "X_embed": self.X_embed.tolist(), "R_embed": self.R_embed.tolist(),
        }


def _solve_dual(xs, d):
    """Exact r_1, r_2 with Tr(r_i x_j) = delta_ij."""
    # Tr((p + q sqrt d)(a + b sqrt d)) = 2 p a + 2 d q b
    M = [[2 * Fraction(x.a), 2 * d * Fraction(x.b)] for x in xs]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    inv = [[M[1][1] / det, -M[0][1] / det], [-M[1][0] / det, M[0][0] / det]]
    # rows of M times (p, q) = e_i  ->  (p, q) = inv e_i
    return tuple(QuadFieldElement(inv[0][i], inv[1][i], d) for i in range(2))


def _totally_positive(x: QuadFieldElement) -> bool:
    a, b = Fraction(x.a), Fraction(x.b)
    # a + b sqrt(d) > 0 and a - b sqrt(d) > 0  iff  a > 0 and a^2 > d b^2
    return a > 0 and a * a > x.d * b * b


def _search_x_basis(d, omega, sqrt_disc, bound=3):
    y = (QuadFieldElement(1, 0, d) / sqrt_disc, omega / sqrt_disc)
    cands = []
    for m, n in product(range(-bound, bound + 1), repeat=2):
        x = y[0] * m + y[1] * n
        if _totally_positive(x):
            cands.append(((m, n), x))
    best = None
    for i, (ci, xi) in enumerate(cands):
        for cj, xj in cands[i + 1:]:
            if abs(ci[0] * cj[1] - ci[1] * cj[0]) != 1:
                continue
            key = (xi.trace() + xj.trace(), tuple(sorted((ci, cj))))
            if best is None or key < best[0]:
                best = (key, xi, xj)
    if best is None:
        raise InvalidField(f"no totally positive basis of the inverse different within bound {bound}")
    _, xi, xj = best
    pair = sorted((xi, xj), key=lambda x: (Fraction(x.b), Fraction(x.a)), reverse=True)
    return tuple(pair)


@lru_cache(maxsize=None)
def field_context(d: int) -> QuadFieldContext:
    if not isinstance(d, int) or d <= 1 or not _squarefree(d):
        raise InvalidField(f"d must be a squarefree integer > 1, got {d!r}")
    if d % 4 == 1:
        omega, disc = QuadFieldElement(Fraction(1, 2), Fraction(1, 2), d), d
    else:
        omega, disc = QuadFieldElement(0, 1, d), 4 * d
    sqrt_disc = QuadFieldElement(0, 1 if disc == d else 2, d)
    xs = _search_x_basis(d, omega, sqrt_disc)
    rs = _solve_dual(xs, d)
    X = np.array([[x.embed(k).real for x in xs] for k in range(2)])
    R = np.array([[r.embed(k).real for r in rs] for k in range(2)])
    return QuadFieldContext(d, omega, disc, xs, rs, X, R)


def dual_basis_report(ctx: QuadFieldContext) -> dict:
    trace_matrix = [[(r * x).trace() for x in ctx.x_basis] for r in ctx.r_basis]
    exact = all(trace_matrix[i][j] == (1 if i == j else 0) for i in range(2) for j in range(2))
    positive = all(_totally_positive(x) for x in ctx.x_basis)
    spans = ctx.in_inverse_different(ctx.x_basis[0]) and ctx.in_inverse_different(ctx.x_basis[1])
    rs_integral = all(ctx.in_ring(r) for r in ctx.r_basis)
    embed_res = float(np.max(np.abs(np.linalg.inv(ctx.X_embed) - ctx.R_embed.T)))
    return {
        "trace_matrix": [[str(t) for t in row] for row in trace_matrix],
        "trace_identity_exact": exact,
        "x_totally_positive": positive,
        "x_in_inverse_different": spans,
        "r_in_ring": rs_integral,
        "embedding_residual": embed_res,
        "pass": exact and positive and spans and rs_integral and embed_res <= 1e-12,
    }


# -- h_t and the symplectic embedding ----------------------------------------------


def h_map(ctx: QuadFieldContext, tau) -> np.ndarray:
    """``R^T diag(tau) R`` with ``R[k][j] = sigma_k(r_j)``."""
    tau = np.asarray(tau, dtype=complex).reshape(2)
    h = ctx.R_embed.T @ np.diag(tau) @ ctx.R_embed
    # the two triangles differ only by rounding order; make the symmetry exact
    return (h + h.T) / 2


def h_map_exact(ctx: QuadFieldContext, t: QuadFieldElement) -> list:
    """``h_t`` at the point of ``C (x) F`` given by t, summing over both embeddings exactly."""
    conj = [lambda z: z, lambda z: z.conj()]
    out = []
    for ri in ctx.r_basis:
        row = []
        for rj in ctx.r_basis:
            total = sum((s(ri) * s(t) * s(rj) for s in conj), QuadFieldElement(0, 0, ctx.d))
            if total.b != 0:
                raise ArithmeticError("h_t entry is not fixed by conjugation")
            row.append(total.a)
        out.append(row)
    return out


def tau_to_element(ctx: QuadFieldContext, tau):
    """Complex pair ``(alpha, beta)`` with ``alpha + beta sqrt(d)`` embedding to ``tau``."""
    t1, t2 = complex(tau[0]), complex(tau[1])
    return ((t1 + t2) / 2, (t1 - t2) / (2 * math.sqrt(ctx.d)))


def _numeric_trace(ctx, pair, u: QuadFieldElement, v: QuadFieldElement) -> complex:
    """``Tr(u s v)`` for s given by complex coordinates in (1, sqrt d)."""
    alpha, beta = pair
    sq = math.sqrt(ctx.d)
    return sum((u.embed(k) * v.embed(k)).real * (alpha + (beta * sq if k == 0 else -beta * sq))
               for k in range(2))


def iota_embed(ctx: QuadFieldContext, s, tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``s`` acting on ``D^{-1} (+) R`` in the basis (x1, x2, r1, r2).

    Entries of ``s`` are either QuadFieldElements (exact result, object array) or
    complex pairs ``(alpha, beta)`` meaning ``alpha + beta sqrt(d)``.
    """
    xs, rs = ctx.x_basis, ctx.r_basis
    exact = all(isinstance(e, QuadFieldElement) for row in s for e in row)
    # block (p, q): coefficient on basis_row[j] of s_pq * basis_col[k]
    duals = (rs, xs)
    cols = (xs, rs)
    if exact:
        M = np.empty((4, 4), dtype=object)
        for p, q in product(range(2), repeat=2):
            for j, k in product(range(2), repeat=2):
                M[2 * p + j, 2 * q + k] = _exact_trace(duals[p][j] * s[p][q] * cols[q][k])
        if not is_exact_symplectic(M):
            raise NotInGroup("image is not symplectic (det s != 1?)")
        return M
    M = np.zeros((4, 4), dtype=complex)
    for p, q in product(range(2), repeat=2):
        for j, k in product(range(2), repeat=2):
            M[2 * p + j, 2 * q + k] = _numeric_trace(ctx, s[p][q], duals[p][j], cols[q][k])
    r = sp_residual(M)
    if r > tol * max(1.0, float(np.max(np.abs(M)))) ** 2:
        raise NotInGroup(f"image symplectic residual {r:.3e}")
    return M


def _exact_trace(z: QuadFieldElement):
    t = z.trace()
    while isinstance(t, QuadFieldElement) and t.b == 0:
        t = t.a
    return _frac(t)


def integral_generators(ctx: QuadFieldContext) -> list:
    """Exact generators of SL(D^{-1} (+) R): unipotents, a Weyl-type element, the unit -1."""
    el = ctx.el
    one, zero = el(1), el(0)
    sd = ctx.sqrt_disc()
    gens = []
    for x in ctx.x_basis:
        gens.append(((one, x), (zero, one)))
    for r in ctx.r_basis:
        gens.append(((one, zero), (r * sd, one)))
    w = one / sd
    gens.append(((zero, w), (-sd, zero)))
    gens.append(((-one, zero), (zero, -one)))
    return gens


def _mat2_mul(s, t):
    return tuple(tuple(s[i][0] * t[0][j] + s[i][1] * t[1][j] for j in range(2)) for i in range(2))


def random_integral_sl(ctx: QuadFieldContext, word_length: int, seed):
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    gens = integral_generators(ctx)
    one, zero = ctx.el(1), ctx.el(0)
    s = ((one, zero), (zero, one))
    for _ in range(word_length):
        g = gens[int(rng.integers(len(gens)))]
        if rng.integers(2):
            # inverse of a determinant-one 2x2 matrix
            g = ((g[1][1], -g[0][1]), (-g[1][0], g[0][0]))
        s = _mat2_mul(s, g)
    return s


# -- theta_F and q-expansions --------------------------------------------------------


def theta_F_coefficients(ctx: QuadFieldContext, x: QuadFieldElement) -> tuple:
    if not ctx.in_inverse_different(x):
        raise NotInInverseDifferent(f"{x!r} is not in the inverse different")
    return tuple(x.embed(k).real / TWO_PI_I for k in range(2))


QEXP_SOURCES = ("q11", "q12", "q22")


def qexp_exponent_map(ctx: QuadFieldContext) -> dict:
    """``{q_ij: (Tr(r_i r_j x_1), Tr(r_i r_j x_2))}`` for i <= j."""
    out = {}
    for name in QEXP_SOURCES:
        i, j = int(name[1]) - 1, int(name[2]) - 1
        row = []
        for x in ctx.x_basis:
            t = Fraction((ctx.r_basis[i] * ctx.r_basis[j] * x).trace())
            if t.denominator != 1:
                raise ArithmeticError("trace is not integral")
            row.append(int(t))
        out[name] = tuple(row)
    return out


def substitution_matrix(ctx: QuadFieldContext) -> list:
    """Rows indexed by target variables, columns by q11, q12, q22."""
    m = qexp_exponent_map(ctx)
    return [[m[src][k] for src in QEXP_SOURCES] for k in range(2)]


# -- period compatibility ------------------------------------------------------------


def hilbert_hodge_check(ctx: QuadFieldContext, tau) -> dict:
    tau = np.asarray(tau, dtype=complex).reshape(2)
    if np.any(tau.imag <= 0):
        raise ValueError("tau must lie in H^2")
    X, R = ctx.X_embed, ctx.R_embed
    h = h_map(ctx, tau)
    T = PolarizedTorus.at(h)
    std = standard_bases(T).hodge

    # (i) lattice basis {x_j} u {diag(tau) r_j} is carried to (gamma_j, delta_j) by z -> R^T z
    x_cycles = X
    r_cycles = np.diag(tau) @ R
    target = np.column_stack(T.lattice_basis())
    c1 = float(np.max(np.abs(R.T @ np.hstack([x_cycles, r_cycles]) - target)))
    c1_exact = all((ri * xj).trace() == (1 if a == b else 0)
                   for a, ri in enumerate(ctx.r_basis) for b, xj in enumerate(ctx.x_basis))

    # (ii) omega_F r_i = 2 pi i sum_k sigma_k(r_i) dz_k, integrated on the Hilbert lattice
    forms = TWO_PI_I * R.T
    Om1 = (forms @ x_cycles).T
    Om2 = (forms @ r_cycles).T
    O1s, O2s, _, _ = std.blocks()
    c2 = float(max(np.max(np.abs(Om1 - O1s)), np.max(np.abs(Om2 - O2s))))

    # (iii) theta_F(1 (x) x_i) applied to the periods of omega_F; the periods are linear in tau,
    # so a unit difference quotient is the exact derivative
    def omega_periods(t):
        return (TWO_PI_I * np.ones(2) @ X, TWO_PI_I * np.ones(2) @ (np.diag(t) @ R))
    base = omega_periods(tau)
    N1 = np.zeros((2, 2), dtype=complex)
    N2 = np.zeros((2, 2), dtype=complex)
    for i, x in enumerate(ctx.x_basis):
        direction = np.array(theta_F_coefficients(ctx, x))
        moved = omega_periods(tau + direction)
        N1[:, i] = moved[0] - base[0]
        N2[:, i] = moved[1] - base[1]
    c3 = float(max(np.max(np.abs(N1)), np.max(np.abs(N2 - np.eye(2)))))

    # (iv) assembled period matrix against iota of (1 t; 0 1)
    basis = HodgeBasis.from_blocks(Om1, Om2, N1, N2)
    Pi = period_matrices(T, basis).Pi
    t = tau_to_element(ctx, tau)
    s = (((1, 0), t), ((0, 0), (1, 0)))
    c4 = float(max(np.max(np.abs(Pi - iota_embed(ctx, s))), np.max(np.abs(Pi - psi(h)))))

    clauses = {"lattice": c1, "omega": c2, "eta": c3, "period_compat": c4}
    return {"clauses": clauses, "lattice_exact": c1_exact,
            "pass": c1_exact and all(v <= 1e-10 for v in clauses.values())}
