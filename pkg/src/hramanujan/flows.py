"""Flows of the Ramanujan vector fields.

In group coordinates the higher fields are left invariant and nilpotent, so their
flows are closed form. For g = 1 the classical system is also integrated
numerically in the e- and b-charts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .charts import chart_change, ramanujan_field
from .errors import InsufficientSamples, PathLeavesDomain, StepTooLarge
from .periods import eisenstein_twist_g1
from .symplectic import TWO_PI_I, cocycle, p_delta_tau, psi, random_symplectic_integer


# -- exact flows in Sp_2g ----------------------------------------------------------


def exact_flow(s, T) -> np.ndarray:
    """``s (1 T; 0 1)``: flow of ``sum t_kl v_kl`` for time 1 starting at ``s``.

    Object arrays of ints or Fractions give exact results.
    """
    s = np.asarray(s)
    T = np.asarray(T)
    if T.dtype != object and np.max(np.abs(T - T.T), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(T))):
        raise ValueError("flow times must form a symmetric matrix")
    if T.dtype == object and not np.all(T == T.T):
        raise ValueError("flow times must form a symmetric matrix")
    return s @ psi(T)


# -- numeric integration for g = 1 ------------------------------------------------


@dataclass(frozen=True)
class OdeState:
    chart: str
    point: tuple
    tau: complex


def _compile(field):
    """Fast numeric evaluator for a polynomial vector field."""
    comps = [[(e, complex(c)) for e, c in comp.terms.items()] for comp in field.components]

    def f(x):
        out = []
        for terms in comps:
            total = 0j
            for e, c in terms:
                m = c
                for xi, k in zip(x, e):
                    if k:
                        m *= xi ** k
                total += m
            out.append(total)
        return np.array(out)
    return f


_FIELDS = {}


def _field(chart):
    if chart not in _FIELDS:
        _FIELDS[chart] = _compile(ramanujan_field(chart))
    return _FIELDS[chart]


def integrate_g1(chart: str, start: OdeState, tau_end: complex, step: float) -> OdeState:
    """RK4 for ``d phi / d tau = 2 pi i v(phi)`` along the segment ``start.tau -> tau_end``."""
    if step <= 0:
        raise ValueError("step must be positive")
    if chart != start.chart:
        raise ValueError(f"state lives on {start.chart}, not {chart}")
    t0, t1 = complex(start.tau), complex(tau_end)
    if min(t0.imag, t1.imag) <= 0:
        raise PathLeavesDomain("segment leaves the upper half plane")
    length = abs(t1 - t0)
    if length == 0:
        return start
    n = max(1, math.ceil(length / step - 1e-9))
    h = (t1 - t0) / n
    f = _field(chart)
    x = np.array(start.point, dtype=complex)

    def rhs(y):
        return TWO_PI_I * f(y)

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            k1 = rhs(x)
            k2 = rhs(x + h / 2 * k1)
            k3 = rhs(x + h / 2 * k2)
            k4 = rhs(x + h * k3)
            x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise StepTooLarge("integration produced a non-finite value")
    return OdeState(chart, tuple(complex(z) for z in x), t1)


def eisenstein_state(chart: str, tau: complex) -> OdeState:
    """``(E2, E4, E6)(tau)`` from q-series, moved to the requested chart."""
    e = eisenstein_twist_g1(tau, np.eye(2))
    if chart == "e_chart":
        return OdeState(chart, tuple(complex(z) for z in e), tau)
    if chart == "b_chart":
        return OdeState(chart, tuple(complex(p(e)) for p in chart_change("e->b")), tau)
    raise ValueError(f"unsupported chart {chart!r}")


def twisted_ode_residual(delta, tau: complex, h: float) -> float:
    """Central-difference check of ``(1/2 pi i) d phi_delta / d tau = (c tau + d)^{-2} v(phi_delta)``."""
    delta = np.asarray(delta, dtype=complex)
    c, d = delta[1, 0], delta[1, 1]
    fwd = np.array(eisenstein_twist_g1(tau + h, delta))
    bwd = np.array(eisenstein_twist_g1(tau - h, delta))
    mid = np.array(eisenstein_twist_g1(tau, delta))
    lhs = (fwd - bwd) / (2 * h) / TWO_PI_I
    rhs = _field("e_chart")(mid) / (c * tau + d) ** 2
    return float(np.max(np.abs(lhs - rhs)))


# -- density probe ------------------------------------------------------------------


def probe_coordinates(g: int) -> list[str]:
    names = [f"a{i}{k}" for i in range(g) for k in range(g)]
    names += [f"ai{i}{k}" for i in range(g) for k in range(g)]
    names += [f"b{i}{k}" for i in range(g) for k in range(g)]
    return names


def probe_monomials(g: int, degree: int) -> list[tuple]:
    """Exponent tuples of degree at most ``degree``.

    Monomials using both an entry of A and an entry of A^{-1} are dropped: the
    relation A A^{-1} = 1 would otherwise make the evaluation matrix rank
    deficient for a trivial reason.
    """
    n = 3 * g * g
    a_idx = set(range(g * g))
    ai_idx = set(range(g * g, 2 * g * g))
    out = []
    for deg in range(degree + 1):
        for combo in combinations_with_replacement(range(n), deg):
            used = set(combo)
            if used & a_idx and used & ai_idx:
                continue
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True)
class DensityResult:
    rank: int
    monomial_count: int
    full_rank: bool
    singular_values: tuple
    samples: int
    attempts: int


def density_probe(delta, tau, degree: int, samples: int, seed, max_word: int = 6,
                  rel_cutoff: float = 1e-8) -> DensityResult:
    """Numerical rank of monomials evaluated at ``p_{delta gamma, tau}`` for random integral gamma."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    delta = np.asarray(delta, dtype=complex)
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    g = tau.shape[0]
    monos = probe_monomials(g, degree)
    rng = np.random.default_rng(seed)
    rows = []
    attempts = 0
    while len(rows) < samples:
        if attempts >= 100 * samples:
            raise InsufficientSamples(f"only {len(rows)} of {samples} samples after {attempts} draws")
        attempts += 1
        gamma = random_symplectic_integer(g, int(rng.integers(1, max_word + 1)), rng).as_complex()
        dg = delta @ gamma
        if np.linalg.cond(cocycle(dg, tau)) > 1e10:
            continue
        p = p_delta_tau(dg, tau)
        A, B = p[:g, :g], p[:g, g:]
        coords = np.concatenate([A.ravel(), np.linalg.inv(A).ravel(), B.ravel()])
        rows.append([np.prod(coords ** np.array(e)) for e in monos])
    M = np.array(rows, dtype=complex)
    # column scaling does not change the rank but keeps the relative cutoff meaningful
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1
    sv = np.linalg.svd(M / norms, compute_uv=False)
    rank = int(np.sum(sv > rel_cutoff * sv[0])) if sv.size else 0
    return DensityResult(rank, len(monos), rank == len(monos),
                         tuple(float(s) for s in sv), samples, attempts)
