import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hramanujan.errors import InvalidField, NotInGroup, NotInInverseDifferent
from hramanujan.hilbert import (
    QuadFieldElement,
    dual_basis_report,
    field_context,
    gaussian,
    h_map,
    h_map_exact,
    hilbert_hodge_check,
    iota_embed,
    qexp_exponent_map,
    random_integral_sl,
    substitution_matrix,
    tau_to_element,
    theta_F_coefficients,
)
from hramanujan.symplectic import TWO_PI_I, is_exact_symplectic, is_siegel, psi

FIELDS = (2, 3, 5, 13)
seeds = st.integers(0, 2 ** 32 - 1)
fields = st.sampled_from(FIELDS)
rat = st.fractions(min_value=-6, max_value=6, max_denominator=9)


def elements(d):
    return st.builds(lambda a, b: QuadFieldElement(a, b, d), rat, rat)


def maxabs(X):
    return float(np.max(np.abs(X)))


def random_tau(rng):
    return rng.uniform(-1, 1, 2) + 1j * rng.uniform(0.3, 2, 2)


# -- field arithmetic ----------------------------------------------------------------


@given(elements(5), elements(5), elements(5))
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a + b).trace() == a.trace() + b.trace()
    if a.norm() != 0:
        assert a * a.inverse() == 1


def test_element_conventions():
    x = QuadFieldElement(Fraction(1, 2), 3, 7)
    assert x.conj() == QuadFieldElement(Fraction(1, 2), -3, 7)
    assert x.trace() == 1
    assert x.norm() == Fraction(1, 4) - 63
    with pytest.raises(ZeroDivisionError):
        QuadFieldElement(0, 0, 7).inverse()


def test_gaussian_coefficients():
    i = gaussian(0, 1)
    assert i * i == -1
    z = QuadFieldElement(gaussian(1, 2), gaussian(0, 1), 5)
    assert z.embed(0) == pytest.approx((1 + 2j) + 1j * math.sqrt(5))
    assert z.embed(1) == pytest.approx((1 + 2j) - 1j * math.sqrt(5))


# -- contexts --------------------------------------------------------------------------


def test_context_sqrt5():
    ctx = field_context(5)
    assert ctx.omega == QuadFieldElement(Fraction(1, 2), Fraction(1, 2), 5)
    assert ctx.disc == 5
    assert ctx.x_basis == (QuadFieldElement(Fraction(1, 2), Fraction(1, 10), 5),
                           QuadFieldElement(Fraction(1, 2), Fraction(-1, 10), 5))
    assert ctx.r_basis == (QuadFieldElement(Fraction(1, 2), Fraction(1, 2), 5),
                           QuadFieldElement(Fraction(1, 2), Fraction(-1, 2), 5))


def test_context_omega_and_disc():
    assert field_context(2).omega == QuadFieldElement(0, 1, 2) and field_context(2).disc == 8
    assert field_context(13).disc == 13


@pytest.mark.parametrize("d", FIELDS)
def test_context_invariants(d):
    ctx = field_context(d)
    report = dual_basis_report(ctx)
    assert report["pass"], report
    for x in ctx.x_basis:
        assert x.embed(0).real > 0 and x.embed(1).real > 0


@pytest.mark.parametrize("d", [1, 0, -3, 4, 12, 2.0])
def test_invalid_field(d):
    with pytest.raises(InvalidField):
        field_context(d)


def test_context_json_is_exact():
    data = field_context(5).to_json()
    assert data["x_basis"][0] == {"a": "1/2", "b": "1/10", "d": 5}


# -- h_t -----------------------------------------------------------------------------------


def test_h_map_example():
    h = h_map(field_context(5), (1j, 1j))
    assert maxabs(h - 1j * np.array([[3, -2], [-2, 3]])) < 1e-14


def test_h_map_diagonal_scalar():
    ctx = field_context(13)
    z = 0.3 + 0.7j
    assert maxabs(h_map(ctx, (z, z)) - z * ctx.R_embed.T @ ctx.R_embed) < 1e-13


@pytest.mark.parametrize("d", FIELDS)
def test_h_map_lands_in_siegel_space(d):
    ctx = field_context(d)
    rng = np.random.default_rng(d)
    for _ in range(100):
        h = h_map(ctx, random_tau(rng))
        assert is_siegel(h) and np.array_equal(h, h.T)


@given(fields, rat, rat, rat, rat)
def test_h_map_exact_symmetric(d, a, b, c, e):
    ctx = field_context(d)
    t = QuadFieldElement(gaussian(a, b), gaussian(c, e), d)
    h = h_map_exact(ctx, t)
    assert h[0][1] == h[1][0]


# -- the embedding iota ------------------------------------------------------------------------


def ident(ctx):
    one, zero = ctx.el(1), ctx.el(0)
    return ((one, zero), (zero, one))


def test_iota_identity():
    for d in FIELDS:
        ctx = field_context(d)
        assert np.array_equal(iota_embed(ctx, ident(ctx)), np.eye(4, dtype=int))


@given(fields, rat, rat, rat, rat)
def test_iota_unipotent_exact(d, a, b, c, e):
    ctx = field_context(d)
    t = QuadFieldElement(gaussian(a, b), gaussian(c, e), d)
    one, zero = ctx.el(1), ctx.el(0)
    lhs = iota_embed(ctx, ((one, t), (zero, one)))
    rhs = psi(np.array(h_map_exact(ctx, t), dtype=object))
    assert all(lhs[i, j] == rhs[i, j] for i in range(4) for j in range(4))


@given(fields, seeds)
def test_iota_unipotent_numeric(d, seed):
    ctx = field_context(d)
    tau = random_tau(np.random.default_rng(seed))
    s = ((1, 0), tau_to_element(ctx, tau)), ((0, 0), (1, 0))
    assert maxabs(iota_embed(ctx, s) - psi(h_map(ctx, tau))) <= 1e-12


def pair_mul(d, u, v):
    return (u[0] * v[0] + d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def pair_add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def mat_mul_pairs(d, s, t):
    return tuple(tuple(pair_add(pair_mul(d, s[i][0], t[0][j]), pair_mul(d, s[i][1], t[1][j]))
                       for j in range(2)) for i in range(2))


def random_sl_pairs(d, rng):
    # upper unipotent times lower unipotent: determinant one with complex entries
    def z():
        return complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    one, zero = (1, 0), (0, 0)
    return mat_mul_pairs(d, ((one, z()), (zero, one)), ((one, zero), (z(), one)))


@given(fields, seeds)
def test_iota_homomorphism_numeric(d, seed):
    ctx = field_context(d)
    rng = np.random.default_rng(seed)
    s1, s2 = random_sl_pairs(d, rng), random_sl_pairs(d, rng)
    lhs = iota_embed(ctx, mat_mul_pairs(d, s1, s2))
    rhs = iota_embed(ctx, s1) @ iota_embed(ctx, s2)
    assert maxabs(lhs - rhs) <= 1e-12 * max(1.0, maxabs(lhs))


@given(fields, seeds, st.integers(0, 8))
def test_iota_integral_samples(d, seed, n):
    ctx = field_context(d)
    rng = np.random.default_rng(seed)
    s1, s2 = random_integral_sl(ctx, n, rng), random_integral_sl(ctx, n, rng)
    m1 = iota_embed(ctx, s1)
    assert is_exact_symplectic(m1)
    assert all(isinstance(v, int) for v in m1.ravel())
    prod = tuple(tuple(s1[i][0] * s2[0][j] + s1[i][1] * s2[1][j] for j in range(2)) for i in range(2))
    assert np.array_equal(iota_embed(ctx, prod), m1.dot(iota_embed(ctx, s2)))


def test_iota_rejects_non_sl():
    ctx = field_context(5)
    two, zero = ctx.el(2), ctx.el(0)
    with pytest.raises(NotInGroup):
        iota_embed(ctx, ((two, zero), (zero, two)))
    with pytest.raises(NotInGroup):
        iota_embed(ctx, (((2, 0), (0, 0)), ((0, 0), (2, 0))))


# -- theta_F and q-expansions -------------------------------------------------------------------


def test_theta_coefficients():
    ctx = field_context(5)
    c = theta_F_coefficients(ctx, ctx.x_basis[0])
    s5 = math.sqrt(5)
    assert c[0] == pytest.approx((5 + s5) / 10 / TWO_PI_I)
    assert c[1] == pytest.approx((5 - s5) / 10 / TWO_PI_I)
    assert theta_F_coefficients(ctx, ctx.el(0)) == (0, 0)
    with pytest.raises(NotInInverseDifferent):
        theta_F_coefficients(ctx, ctx.el(Fraction(1, 3)))


@given(fields, st.integers(-5, 5), st.integers(-5, 5))
def test_theta_linear(d, m, n):
    ctx = field_context(d)
    x1, x2 = ctx.x_basis
    lhs = theta_F_coefficients(ctx, x1 * m + x2 * n)
    c1, c2 = theta_F_coefficients(ctx, x1), theta_F_coefficients(ctx, x2)
    for k in range(2):
        assert lhs[k] == pytest.approx(m * c1[k] + n * c2[k], abs=1e-14)


def test_qexp_examples():
    assert qexp_exponent_map(field_context(5)) == {"q11": (2, 1), "q12": (-1, -1), "q22": (1, 2)}
    assert qexp_exponent_map(field_context(2)) == {"q11": (3, 1), "q12": (-2, -1), "q22": (2, 2)}
    assert substitution_matrix(field_context(5)) == [[2, -1, 1], [1, -1, 2]]


@pytest.mark.parametrize("d", FIELDS)
def test_qexp_against_traces(d):
    ctx = field_context(d)
    m = qexp_exponent_map(ctx)
    for name, row in m.items():
        i, j = int(name[1]) - 1, int(name[2]) - 1
        for k, x in enumerate(ctx.x_basis):
            prod = ctx.r_basis[i] * ctx.r_basis[j] * x
            assert row[k] == round((prod.embed(0) + prod.embed(1)).real)
            assert isinstance(row[k], int)


# -- period compatibility -----------------------------------------------------------------------


def test_hodge_check_example():
    rep = hilbert_hodge_check(field_context(5), (1j, 1j))
    assert rep["pass"] and rep["lattice_exact"]
    assert rep["clauses"]["lattice"] < 1e-14


@pytest.mark.parametrize("d", FIELDS)
def test_hodge_check_random(d):
    rng = np.random.default_rng(100 + d)
    for _ in range(20):
        rep = hilbert_hodge_check(field_context(d), random_tau(rng))
        assert rep["pass"], rep
        assert max(rep["clauses"].values()) <= 1e-10


def test_hodge_check_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        hilbert_hodge_check(field_context(5), (1j, -1j))
