"""Symplectic linear algebra on ``C^{2g}`` with ``J = (0 1; -1 0)``.

Matrices are numpy arrays. Complex work is in double precision; passing an
``object`` array of ints or Fractions keeps every product exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import tolerances
from .errors import (
    NotInGroup,
    NotInStarCell,
    NotParabolic,
    NotSiegel,
    OddSize,
    SingularCocycle,
)

TWO_PI_I = 2j * np.pi


def standard_j(g: int, exact: bool = False) -> np.ndarray:
    dtype = object if exact else complex
    J = np.zeros((2 * g, 2 * g), dtype=dtype)
    if exact:
        J[:] = 0
    for i in range(g):
        J[i, g + i] = 1
        J[g + i, i] = -1
    return J


def identity(n: int, exact: bool = False) -> np.ndarray:
    if exact:
        M = np.zeros((n, n), dtype=object)
        M[:] = 0
        for i in range(n):
            M[i, i] = 1
        return M
    return np.eye(n, dtype=complex)


def blocks(M: np.ndarray):
    n = M.shape[0]
    if M.shape != (n, n) or n % 2:
        raise OddSize(f"expected an even square matrix, got shape {M.shape}")
    g = n // 2
    return M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:]


def from_blocks(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def _maxnorm(X) -> float:
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    return float(np.max(np.abs(X.astype(complex))))


def psi(Z) -> np.ndarray:
    """``(1 Z; 0 1)``, the exponential of ``(0 Z; 0 0)``."""
    Z = np.asarray(Z)
    g = Z.shape[0]
    exact = Z.dtype == object
    one = identity(g, exact)
    zero = one * 0
    return from_blocks(one, Z, zero, one)


# -- membership --------------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticCheck:
    member: bool
    residual: float
    similitude: complex | None = None


def sp_residual(M) -> float:
    M = np.asarray(M)
    J = standard_j(M.shape[0] // 2, exact=M.dtype == object)
    return _maxnorm(M.T @ J @ M - J)


def sp_residual_right(M) -> float:
    """Residual of the equivalent form ``M J M^T = J``."""
    M = np.asarray(M)
    J = standard_j(M.shape[0] // 2, exact=M.dtype == object)
    return _maxnorm(M @ J @ M.T - J)


def symplectic_check(M, group: str = "Sp", tol: float | None = None) -> SymplecticCheck:
    M = np.asarray(M)
    A, B, C, D = blocks(M)
    tol = tolerances().membership if tol is None else tol
    if group == "Sp":
        r = sp_residual(M)
        return SymplecticCheck(r <= tol, r)
    if group == "GSp":
        g = A.shape[0]
        S = A @ D.T - B @ C.T
        nu = complex(np.trace(S.astype(complex))) / g
        J = standard_j(g)
        r = _maxnorm(M.astype(complex) @ J @ M.T.astype(complex) - nu * J)
        member = r <= tol * max(1.0, abs(nu)) and abs(nu) > tol
        return SymplecticCheck(member, r, nu)
    raise ValueError(f"unknown group {group!r}")


def is_exact_symplectic(M) -> bool:
    M = np.asarray(M, dtype=object)
    J = standard_j(M.shape[0] // 2, exact=True)
    return bool(np.all(M.T @ J @ M == J))


@dataclass(frozen=True)
class SymplecticElement:
    g: int
    matrix: np.ndarray
    residual: float

    @classmethod
    def from_matrix(cls, M, tol: float | None = None) -> "SymplecticElement":
        M = np.asarray(M)
        chk = symplectic_check(M, "Sp", tol)
        if not chk.member:
            raise NotInGroup(f"symplectic residual {chk.residual:.3e} exceeds tolerance")
        return cls(M.shape[0] // 2, M, chk.residual)

    def inverse(self) -> np.ndarray:
        # M^{-1} = -J M^T J for symplectic M
        J = standard_j(self.g, exact=self.matrix.dtype == object)
        return -J @ self.matrix.T @ J


def symplectic_inverse(M) -> np.ndarray:
    M = np.asarray(M)
    J = standard_j(M.shape[0] // 2, exact=M.dtype == object)
    return -J @ M.T @ J


# -- Siegel space ------------------------------------------------------------------


def is_siegel(tau, tol: float | None = None) -> bool:
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    tol = tolerances().symmetry if tol is None else tol
    if _maxnorm(tau - tau.T) > tol * max(1.0, _maxnorm(tau)):
        return False
    try:
        np.linalg.cholesky(((tau + tau.T) / 2).imag)
    except np.linalg.LinAlgError:
        return False
    return True


@dataclass(frozen=True)
class SiegelPoint:
    g: int
    tau: np.ndarray

    @classmethod
    def from_matrix(cls, tau, tol: float | None = None) -> "SiegelPoint":
        tau = np.atleast_2d(np.asarray(tau, dtype=complex))
        tol = tolerances().symmetry if tol is None else tol
        asym = _maxnorm(tau - tau.T)
        if asym > tol * max(1.0, _maxnorm(tau)):
            raise NotSiegel(f"asymmetry {asym:.3e} exceeds tolerance")
        tau = (tau + tau.T) / 2
        try:
            np.linalg.cholesky(tau.imag)
        except np.linalg.LinAlgError:
            raise NotSiegel("imaginary part is not positive definite") from None
        return cls(tau.shape[0], tau)


def mobius_raw(M, tau):
    """``(A tau + B)(C tau + D)^{-1}`` and the cocycle ``C tau + D`` for any 2g x 2g matrix."""
    A, B, C, D = (np.asarray(X, dtype=complex) for X in blocks(np.asarray(M)))
    tau = np.asarray(tau, dtype=complex)
    j = C @ tau + D
    if np.linalg.cond(j) > 1e12:
        raise SingularCocycle("C tau + D is numerically singular")
    return (A @ tau + B) @ np.linalg.inv(j), j


def mobius_act(gamma, tau: SiegelPoint | np.ndarray):
    """Image of ``tau`` under a real symplectic ``gamma`` and the cocycle ``j(gamma, tau)``."""
    gm = gamma.matrix if isinstance(gamma, SymplecticElement) else np.asarray(gamma)
    t = tau.tau if isinstance(tau, SiegelPoint) else tau
    image, j = mobius_raw(gm, t)
    return SiegelPoint.from_matrix(image), j


def cocycle(M, tau) -> np.ndarray:
    _, _, C, D = blocks(np.asarray(M))
    return np.asarray(C, dtype=complex) @ np.asarray(tau, dtype=complex) + np.asarray(D, dtype=complex)


# -- GSp* factorization ------------------------------------------------------------


def gsp_star_factor(s, tol: float | None = None):
    """``s -> (nu(s), C A^{-1}, (A^{-1}  -B^T; 0  A^T))`` on the cell where A is invertible."""
    s = np.asarray(s, dtype=complex)
    chk = symplectic_check(s, "GSp", tol)
    if not chk.member:
        raise NotInGroup(f"not a symplectic similitude (residual {chk.residual:.3e})")
    A, B, C, D = blocks(s)
    if np.linalg.cond(A) > 1e12:
        raise NotInStarCell("A block is singular")
    Ainv = np.linalg.inv(A)
    tau_part = C @ Ainv
    tau_part = (tau_part + tau_part.T) / 2
    p = from_blocks(Ainv, -B.T, np.zeros_like(A), A.T)
    return chk.similitude, tau_part, p


def gsp_star_assemble(nu, tau_part, p) -> np.ndarray:
    """Inverse of :func:`gsp_star_factor`."""
    X, Y, _, _ = blocks(np.asarray(p, dtype=complex))
    Z = np.asarray(tau_part, dtype=complex)
    Xinv = np.linalg.inv(X)
    g = X.shape[0]
    return from_blocks(Xinv, -Y.T, Z @ Xinv, (nu * np.eye(g) - Z @ Xinv @ Y) @ X.T)


# -- parabolics, Lagrangian Grassmannian, leaves -----------------------------------


def check_parabolic(p, tol: float | None = None):
    """Return the (A, B) blocks of ``p = (A B; 0 A^{-T})`` or raise NotParabolic."""
    p = np.asarray(p)
    A, B, C, D = blocks(p)
    tol = tolerances().membership if tol is None else tol
    scale = max(1.0, _maxnorm(p))
    if _maxnorm(C) > tol * scale:
        raise NotParabolic("lower-left block is not zero")
    if p.dtype == object:
        ok = np.all(A.T @ D == identity(A.shape[0], exact=True))
    else:
        ok = _maxnorm(A.T @ D - np.eye(A.shape[0])) <= tol * scale ** 2
    if not ok:
        raise NotParabolic("lower-right block is not the inverse transpose of A")
    return A, B


def parabolic_transport(p, tol: float | None = None) -> np.ndarray:
    """``(A B; 0 A^{-T}) -> (A^{-T} 0; 2 pi i B  A)``."""
    A, B = check_parabolic(p, tol)
    D = np.asarray(p)[A.shape[0]:, A.shape[0]:]
    return from_blocks(D, np.zeros_like(B), TWO_PI_I * B, A)


def parabolic_from_blocks(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return from_blocks(A, np.asarray(B, dtype=complex), np.zeros_like(A), np.linalg.inv(A).T)


@dataclass(frozen=True)
class LagrangianPoint:
    B: np.ndarray
    D: np.ndarray
    affine: np.ndarray | None
    in_siegel: bool


def grassmann_project(s) -> LagrangianPoint:
    """``(A B; C D) -> (B : D)``, reported as ``B D^{-1}`` when D is invertible."""
    _, B, _, D = blocks(np.asarray(s, dtype=complex))
    if np.linalg.cond(D) > 1e12:
        return LagrangianPoint(B, D, None, False)
    Z = B @ np.linalg.inv(D)
    return LagrangianPoint(B, D, Z, is_siegel(Z))


def p_delta_tau(delta, tau) -> np.ndarray:
    """``((C tau + D)^{-1}, -C^T / 2 pi i; 0, (C tau + D)^T)``."""
    _, _, C, _ = blocks(np.asarray(delta, dtype=complex))
    j = cocycle(delta, tau)
    if np.linalg.cond(j) > 1e12:
        raise SingularCocycle("tau is outside U_delta")
    return from_blocks(np.linalg.inv(j), -C.T / TWO_PI_I, np.zeros_like(j), j.T)


@dataclass(frozen=True)
class LeafFrame:
    in_U_delta: bool
    p_delta_tau: np.ndarray | None = None
    psi_tau: np.ndarray | None = None
    psi_delta_tau: np.ndarray | None = None
    identity_residual: float | None = None


def psi_delta(delta, tau) -> np.ndarray:
    """``delta^{-1} psi(delta . tau)``."""
    image, _ = mobius_raw(delta, tau)
    return np.linalg.solve(np.asarray(delta, dtype=complex), psi(image))


def leaf_frame(delta, tau) -> LeafFrame:
    delta = np.asarray(delta.matrix if isinstance(delta, SymplecticElement) else delta,
                       dtype=complex)
    tau = np.asarray(tau.tau if isinstance(tau, SiegelPoint) else tau, dtype=complex)
    j = cocycle(delta, tau)
    if np.linalg.cond(j) > 1e12:
        return LeafFrame(False)
    p = p_delta_tau(delta, tau)
    ps = psi(tau)
    psd = psi_delta(delta, tau)
    resid = _maxnorm(psd - ps @ parabolic_transport(p))
    return LeafFrame(True, p, ps, psd, resid)


def solve_delta(tau, p) -> np.ndarray:
    """A symplectic ``delta`` with ``p_{delta, tau} = p``."""
    tau = np.asarray(tau.tau if isinstance(tau, SiegelPoint) else tau, dtype=complex)
    A, B = check_parabolic(p)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    return from_blocks(A.T, -A.T @ tau, -TWO_PI_I * B.T, np.linalg.inv(A) + TWO_PI_I * B.T @ tau)


# -- sampling ----------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerSymplectic:
    g: int
    entries: tuple

    @property
    def matrix(self) -> np.ndarray:
        M = np.empty((2 * self.g, 2 * self.g), dtype=object)
        for i, row in enumerate(self.entries):
            for k, x in enumerate(row):
                M[i, k] = x
        return M

    def as_complex(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)


def _random_symmetric_int(g, rng, bound=2):
    N = np.zeros((g, g), dtype=object)
    N[:] = 0
    for i in range(g):
        for k in range(i, g):
            N[i, k] = N[k, i] = int(rng.integers(-bound, bound + 1))
    return N


def _random_elementary(g, rng):
    U = identity(g, exact=True)
    if g == 1:
        U[0, 0] = -1
        return U
    i, k = rng.choice(g, size=2, replace=False)
    U[int(i), int(k)] = int(rng.choice([-1, 1]))
    return U


def _integer_inverse_unimodular(U):
    # elementary matrices: (1 + cE)^{-1} = 1 - cE, and [-1]^{-1} = [-1]
    g = U.shape[0]
    if g == 1:
        return U.copy()
    one = identity(g, exact=True)
    return one - (U - one)


def random_symplectic_integer(g: int, word_length: int, seed) -> IntegerSymplectic:
    """Product of ``word_length`` random generators of ``Sp_2g(Z)``, computed exactly."""
    if word_length < 0:
        raise ValueError("word_length must be nonnegative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    M = identity(2 * g, exact=True)
    one = identity(g, exact=True)
    zero = one * 0
    for _ in range(word_length):
        kind = int(rng.integers(4))
        if kind == 0:
            G = standard_j(g, exact=True)
        elif kind == 1:
            G = from_blocks(one, _random_symmetric_int(g, rng), zero, one)
        elif kind == 2:
            G = from_blocks(one, zero, _random_symmetric_int(g, rng), one)
        else:
            U = _random_elementary(g, rng)
            G = from_blocks(U, zero, zero, _integer_inverse_unimodular(U).T)
        M = M @ G
    return IntegerSymplectic(g, tuple(tuple(int(x) for x in row) for row in M))


def random_symmetric(g, rng, scale=1.0) -> np.ndarray:
    X = rng.normal(size=(g, g)) + 1j * rng.normal(size=(g, g))
    return scale * (X + X.T) / 2


def random_siegel(g: int, rng, spread: float = 1.0) -> np.ndarray:
    X = rng.uniform(-spread, spread, size=(g, g))
    L = rng.normal(size=(g, g)) * 0.5
    Y = L @ L.T + np.eye(g) * (0.5 + rng.uniform())
    return (X + X.T) / 2 + 1j * Y


def random_gl(g, rng, scale=0.5) -> np.ndarray:
    return np.eye(g) + scale * (rng.normal(size=(g, g)) + 1j * rng.normal(size=(g, g)))


def random_parabolic(g: int, rng, scale: float = 0.5) -> np.ndarray:
    A = random_gl(g, rng, scale)
    S = random_symmetric(g, rng, scale)
    # A^{-1} B symmetric makes A B^T symmetric
    return parabolic_from_blocks(A, A @ S)


def random_symplectic_complex(g: int, rng, scale: float = 0.5) -> np.ndarray:
    """Product of a unipotent upper, a unipotent lower and a Levi factor."""
    U = psi(random_symmetric(g, rng, scale))
    L = from_blocks(np.eye(g), np.zeros((g, g)), random_symmetric(g, rng, scale), np.eye(g))
    A = random_gl(g, rng, scale)
    levi = from_blocks(A, np.zeros((g, g)), np.zeros((g, g)), np.linalg.inv(A).T)
    return U @ L @ levi
