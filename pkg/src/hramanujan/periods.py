"""Principally polarized complex tori ``C^g / (Z^g + tau Z^g)`` and their periods.

A de Rham class is stored only through its periods on the standard integral
symplectic basis ``gamma_i = e_i``, ``delta_i = tau e_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import tolerances
from .errors import NotInGroup, OutsideLeafDomain, SingularCocycle, SizeMismatch
from .symplectic import (
    TWO_PI_I,
    SiegelPoint,
    check_parabolic,
    from_blocks,
    is_siegel,
    leaf_frame,
    psi,
    sp_residual,
    symplectic_check,
)


def _as_siegel(tau) -> SiegelPoint:
    return tau if isinstance(tau, SiegelPoint) else SiegelPoint.from_matrix(tau)


@dataclass(frozen=True)
class PolarizedTorus:
    g: int
    tau: SiegelPoint

    @classmethod
    def at(cls, tau) -> "PolarizedTorus":
        t = _as_siegel(tau)
        return cls(t.g, t)

    def lattice_basis(self) -> list[np.ndarray]:
        """``gamma_1..gamma_g, delta_1..delta_g`` as vectors in ``C^g``."""
        eye = np.eye(self.g, dtype=complex)
        return [eye[:, i] for i in range(self.g)] + [self.tau.tau[:, i] for i in range(self.g)]


def riemann_form(T: PolarizedTorus, v, w) -> float:
    """``Im(conj(v)^T (Im tau)^{-1} w)``."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    Y = T.tau.tau.imag
    return float(np.imag(np.conj(v) @ np.linalg.solve(Y, w)))


@dataclass(frozen=True)
class DeRhamClass:
    gamma_periods: np.ndarray
    delta_periods: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.gamma_periods, dtype=complex).reshape(-1)
        b = np.asarray(self.delta_periods, dtype=complex).reshape(-1)
        if a.shape != b.shape:
            raise SizeMismatch("gamma and delta period tuples differ in length")
        object.__setattr__(self, "gamma_periods", a)
        object.__setattr__(self, "delta_periods", b)

    @property
    def g(self) -> int:
        return self.gamma_periods.shape[0]

    def to_json(self) -> dict:
        return {"gamma_periods": [[z.real, z.imag] for z in self.gamma_periods],
                "delta_periods": [[z.real, z.imag] for z in self.delta_periods]}


def deRham_pairing(a: DeRhamClass, b: DeRhamClass) -> complex:
    """``(a_gamma . b_delta - a_delta . b_gamma) / 2 pi i``."""
    if a.g != b.g:
        raise SizeMismatch(f"classes on tori of dimension {a.g} and {b.g}")
    return complex(a.gamma_periods @ b.delta_periods - a.delta_periods @ b.gamma_periods) / TWO_PI_I


def horizontal_class(T: PolarizedTorus, x) -> DeRhamClass:
    """The class ``E(x, .)`` for a lattice vector ``x``, through its periods."""
    basis = T.lattice_basis()
    vals = np.array([riemann_form(T, x, y) for y in basis])
    return DeRhamClass(vals[:T.g], vals[T.g:])


def pairing_oracle_residual(T: PolarizedTorus) -> float:
    """Compare the closed pairing formula with ``<E(x,.), E(y,.)> = E(x, y) / 2 pi i``.

    Runs over all pairs of standard lattice basis vectors and returns the worst
    discrepancy (sign included).
    """
    basis = T.lattice_basis()
    classes = [horizontal_class(T, x) for x in basis]
    worst = 0.0
    for x, cx in zip(basis, classes):
        for y, cy in zip(basis, classes):
            expected = riemann_form(T, x, y) / TWO_PI_I
            worst = max(worst, abs(deRham_pairing(cx, cy) - expected))
    return worst


@dataclass(frozen=True)
class HodgeBasis:
    omega: tuple
    eta: tuple

    @property
    def g(self) -> int:
        return len(self.omega)

    @classmethod
    def from_blocks(cls, Omega1, Omega2, N1, N2) -> "HodgeBasis":
        """Columns are the classes: ``(Omega1)_{ij}`` is the gamma_i-period of omega_j."""
        g = np.asarray(Omega1).shape[0]
        om = tuple(DeRhamClass(Omega1[:, j], Omega2[:, j]) for j in range(g))
        et = tuple(DeRhamClass(N1[:, j], N2[:, j]) for j in range(g))
        return cls(om, et)

    def blocks(self):
        O1 = np.column_stack([c.gamma_periods for c in self.omega])
        O2 = np.column_stack([c.delta_periods for c in self.omega])
        N1 = np.column_stack([c.gamma_periods for c in self.eta])
        N2 = np.column_stack([c.delta_periods for c in self.eta])
        return O1, O2, N1, N2

    def gram(self) -> np.ndarray:
        classes = list(self.omega) + list(self.eta)
        return np.array([[deRham_pairing(a, b) for b in classes] for a in classes])

    def hodge_residual(self) -> float:
        g = self.g
        J = np.block([[np.zeros((g, g)), np.eye(g)], [-np.eye(g), np.zeros((g, g))]])
        return float(np.max(np.abs(self.gram() - J)))

    def to_json(self) -> dict:
        return {"omega": [c.to_json() for c in self.omega],
                "eta": [c.to_json() for c in self.eta]}


@dataclass(frozen=True)
class StandardBases:
    hodge: HodgeBasis
    eta_ij: dict


def _unit(g, k):
    e = np.zeros(g, dtype=complex)
    e[k] = 1
    return e


def eij_matrix(g, i, j) -> np.ndarray:
    """The symmetric elementary matrix ``E^{ij}`` (a single 1 on the diagonal when i = j)."""
    E = np.zeros((g, g), dtype=complex)
    E[i, j] = E[j, i] = 1
    return E


def standard_bases(T: PolarizedTorus) -> StandardBases:
    g = T.g
    tau = T.tau.tau
    omega = tuple(DeRhamClass(TWO_PI_I * _unit(g, k), TWO_PI_I * tau[:, k]) for k in range(g))
    eta = tuple(DeRhamClass(np.zeros(g), _unit(g, k)) for k in range(g))
    eta_ij = {}
    for i in range(g):
        for j in range(i, g):
            E = eij_matrix(g, i, j)
            for k in range(g):
                eta_ij[(i, j, k)] = DeRhamClass(np.zeros(g), E[k, :])
    return StandardBases(HodgeBasis(omega, eta), eta_ij)


@dataclass(frozen=True)
class PeriodData:
    Omega1: np.ndarray
    Omega2: np.ndarray
    N1: np.ndarray
    N2: np.ndarray
    P: np.ndarray
    Pi: np.ndarray
    nu: complex
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .jsonio import complex_matrix

        return {
            "Omega1": complex_matrix(self.Omega1), "Omega2": complex_matrix(self.Omega2),
            "N1": complex_matrix(self.N1), "N2": complex_matrix(self.N2),
            "P": complex_matrix(self.P), "Pi": complex_matrix(self.Pi),
            "nu": [self.nu.real, self.nu.imag],
            "residuals": dict(self.residuals),
        }


def period_matrices(T: PolarizedTorus, b: HodgeBasis) -> PeriodData:
    if b.g != T.g:
        raise SizeMismatch("basis and torus have different dimensions")
    O1, O2, N1, N2 = b.blocks()
    P = from_blocks(O1, N1, O2, N2)
    Pi = from_blocks(N2, O2 / TWO_PI_I, N1, O1 / TWO_PI_I)
    gsp = symplectic_check(P, "GSp")
    residuals = {
        "hodge": b.hodge_residual(),
        "P_gsp": gsp.residual,
        "nu": abs(gsp.similitude - TWO_PI_I),
        "Pi_sp": sp_residual(Pi),
    }
    try:
        tau_from = O2 @ np.linalg.inv(O1)
        residuals["Omega1_cond"] = float(np.linalg.cond(O1))
        residuals["tau_in_siegel"] = bool(is_siegel(tau_from))
        residuals["tau"] = float(np.max(np.abs(tau_from - T.tau.tau)))
    except np.linalg.LinAlgError:
        residuals["Omega1_cond"] = math.inf
        residuals["tau_in_siegel"] = False
    return PeriodData(O1, O2, N1, N2, P, Pi, gsp.similitude, residuals)


def basis_right_action(b: HodgeBasis, p) -> HodgeBasis:
    """``b . p = (omega A, omega B + eta A^{-T})`` for ``p = (A B; 0 A^{-T})``."""
    A, B = check_parabolic(np.asarray(p))
    g = A.shape[0]
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    D = np.asarray(p, dtype=complex)[g:, g:]
    O1, O2, N1, N2 = b.blocks()
    return HodgeBasis.from_blocks(O1 @ A, O2 @ A, O1 @ B + N1 @ D, O2 @ B + N2 @ D)


@dataclass(frozen=True)
class PhiPoint:
    basis: HodgeBasis
    coset_rep: np.ndarray
    consistency: float


def phi_point(tau, delta=None) -> PhiPoint:
    T = PolarizedTorus.at(tau)
    std = standard_bases(T).hodge
    if delta is None:
        basis, rep = std, psi(T.tau.tau)
    else:
        frame = leaf_frame(delta, T.tau)
        if not frame.in_U_delta:
            raise OutsideLeafDomain("C tau + D is singular")
        basis = basis_right_action(std, frame.p_delta_tau)
        rep = frame.psi_delta_tau
    Pi = period_matrices(T, basis).Pi
    return PhiPoint(basis, rep, float(np.max(np.abs(Pi - rep))))


# -- Eisenstein series and their twist ---------------------------------------------

_EIS_CONST = {2: -24, 4: 240, 6: -504}
_CUTOFF = 1e-17
_MAX_TERMS = 200000


def eisenstein_value(k: int, tau: complex, cutoff: float = _CUTOFF) -> complex:
    """``E_k(tau)`` by direct summation of ``sum sigma_{k-1}(n) q^n`` until terms drop below cutoff."""
    q = np.exp(TWO_PI_I * complex(tau))
    aq = abs(q)
    if aq >= 1:
        raise ValueError("tau must lie in the upper half plane")
    total = 0j
    qn = 1 + 0j
    for n in range(1, _MAX_TERMS):
        qn *= q
        total += _sigma(n, k - 1) * qn
        # sigma_{k-1}(n) <= n^k, so this bounds the size of the term just added
        if n ** k * aq ** n < cutoff:
            break
    else:
        raise ValueError("q-series did not converge; Im tau too small")
    return 1 + _EIS_CONST[k] * total


def _sigma(n, e):
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** e
            if d * d != n:
                total += (n // d) ** e
        d += 1
    return total


def eisenstein_partial(k: int, tau: complex, terms: int) -> complex:
    q = np.exp(TWO_PI_I * complex(tau))
    return 1 + _EIS_CONST[k] * sum(_sigma(n, k - 1) * q ** n for n in range(1, terms + 1))


def eisenstein_twist_g1(tau: complex, delta, tol: float | None = None):
    """``((c tau + d)^2 E2 + 12 c (c tau + d) / 2 pi i, (c tau + d)^4 E4, (c tau + d)^6 E6)``."""
    delta = np.asarray(delta, dtype=complex)
    tol = tolerances().membership if tol is None else tol
    if delta.shape != (2, 2):
        raise SizeMismatch("delta must be 2 x 2")
    if abs(np.linalg.det(delta) - 1) > tol * max(1.0, float(np.max(np.abs(delta))) ** 2):
        raise NotInGroup("delta is not in SL_2")
    c, d = delta[1, 0], delta[1, 1]
    j = c * tau + d
    if abs(j) < 1e-12:
        raise SingularCocycle("c tau + d vanishes")
    e2, e4, e6 = (eisenstein_value(k, tau) for k in (2, 4, 6))
    return (j ** 2 * e2 + 12 * c * j / TWO_PI_I, j ** 4 * e4, j ** 6 * e6)
