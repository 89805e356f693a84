"""Genus-one charts: discriminants, Ramanujan fields and Gauss-Manin connections.

Three charts are supported:

``weierstrass``  coordinates (g2, g3), curve y^2 = 4x^3 - g2 x - g3
``e_chart``      coordinates (e2, e4, e6), quasimodular normalization
``b_chart``      coordinates (b2, b4, b6), the integral chart over Z[1/2]

A connection is stored as a 2x2 matrix of 1-forms ``Omega`` together with the
discriminant ``Delta``; the connection form is ``A = Omega / Delta`` acting on the
row vector of the basis: ``nabla (omega eta) = (omega eta) (x) A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import ChartMismatch, UnsupportedChart
from .polys import PolyExpr, RationalFunctionExpr
from .series import TruncatedLaurentSeries, eisenstein_series

CHART_VARIABLES = {
    "weierstrass": ("g2", "g3"),
    "e_chart": ("e2", "e4", "e6"),
    "b_chart": ("b2", "b4", "b6"),
}


def chart_variables(chart: str) -> tuple:
    try:
        return CHART_VARIABLES[chart]
    except KeyError:
        raise UnsupportedChart(f"unknown chart {chart!r}") from None


def _gens(chart):
    vs = chart_variables(chart)
    return [PolyExpr.var(v, vs) for v in vs]


def F(n, d=1):
    return Fraction(n, d)


def delta_poly(chart: str) -> PolyExpr:
    """Discriminant of the chart's universal curve."""
    if chart == "weierstrass":
        g2, g3 = _gens(chart)
        return g2 ** 3 - 27 * g3 ** 2
    if chart == "e_chart":
        _, e4, e6 = _gens(chart)
        return e4 ** 3 - e6 ** 2
    if chart == "b_chart":
        b2, b4, b6 = _gens(chart)
        return (b2 ** 2 * (b4 ** 2 - b2 * b6)) / 4 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    raise UnsupportedChart(f"unknown chart {chart!r}")


def chart_change(direction: str) -> tuple:
    """Polynomial coordinate change between the e- and b-charts.

    ``"e->b"`` returns (b2, b4, b6) as polynomials in (e2, e4, e6);
    ``"b->e"`` returns (e2, e4, e6) as polynomials in (b2, b4, b6).
    """
    if direction in ("e->b", "e_to_b"):
        e2, e4, e6 = _gens("e_chart")
        return (e2, (e2 ** 2 - e4) / 24, (4 * e2 ** 3 - 12 * e2 * e4 + 8 * e6) / 1728)
    if direction in ("b->e", "b_to_e"):
        b2, b4, b6 = _gens("b_chart")
        return (b2, b2 ** 2 - 24 * b4, b2 ** 3 - 36 * b2 * b4 + 216 * b6)
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class ChartVectorField:
    chart: str
    components: tuple

    def __post_init__(self):
        if len(self.components) != len(chart_variables(self.chart)):
            raise ValueError("component count does not match chart dimension")

    def __call__(self, point):
        return tuple(c(point) for c in self.components)


def ramanujan_field(chart: str) -> ChartVectorField:
    if chart == "e_chart":
        e2, e4, e6 = _gens(chart)
        comps = ((e2 ** 2 - e4) / 12, (e2 * e4 - e6) / 3, (e2 * e6 - e4 ** 2) / 2)
    elif chart == "b_chart":
        b2, b4, b6 = _gens(chart)
        comps = (2 * b4, 3 * b6, b2 * b6 - b4 ** 2)
    elif chart == "weierstrass":
        raise UnsupportedChart("no Ramanujan field is attached to the Weierstrass chart")
    else:
        raise UnsupportedChart(f"unknown chart {chart!r}")
    return ChartVectorField(chart, comps)


def zero_field(chart: str) -> ChartVectorField:
    vs = chart_variables(chart)
    return ChartVectorField(chart, tuple(PolyExpr(vs) for _ in vs))


def jacobian(polys, variables) -> list:
    return [[p.diff(v) for v in variables] for p in polys]


def pushforward_residual() -> tuple:
    """``Jac(b->e) . v_b - v_e o (b->e)``; every component is zero when the fields correspond."""
    b_to_e = chart_change("b->e")
    jac = jacobian(b_to_e, chart_variables("b_chart"))
    vb = ramanujan_field("b_chart").components
    ve = ramanujan_field("e_chart").components
    out = []
    for i in range(3):
        lhs = sum((jac[i][k] * vb[k] for k in range(3)), PolyExpr(chart_variables("b_chart")))
        out.append(lhs - ve[i].compose(b_to_e))
    return tuple(out)


# -- Gauss-Manin connections --------------------------------------------------------


@dataclass(frozen=True)
class ConnectionMatrix:
    """``omega[a][b]`` maps each chart variable ``v`` to the ``dv`` coefficient of Omega_ab."""

    chart: str
    omega: tuple
    delta: PolyExpr
    notes: tuple = field(default=(), compare=False)

    @property
    def variables(self):
        return chart_variables(self.chart)

    def entry(self, a: int, b: int, var: str) -> RationalFunctionExpr:
        return self.omega[a][b].get(var, RationalFunctionExpr.const(0, self.variables))

    def antidiagonal_ok(self) -> bool:
        """Omega_22 = -Omega_11 componentwise."""
        return all(self.entry(1, 1, v) == -self.entry(0, 0, v) for v in self.variables)


def _forms(chart, **coeffs):
    vs = chart_variables(chart)
    assert set(coeffs) <= set(vs), coeffs
    return {v: RationalFunctionExpr(p) for v, p in coeffs.items()}


def _make_connection(chart, o11, o12, o21, notes=()):
    neg = {v: -c for v, c in o11.items()}
    return ConnectionMatrix(chart, ((o11, o12), (o21, neg)), delta_poly(chart), tuple(notes))


def _weierstrass():
    g2, g3 = _gens("weierstrass")
    o11 = _forms("weierstrass", g2=-(g2 ** 2) / 4, g3=F(9, 2) * g3)
    o12 = _forms("weierstrass", g2=F(3, 8) * g2 * g3, g3=-(g2 ** 2) / 4)
    o21 = _forms("weierstrass", g2=F(-9, 2) * g3, g3=3 * g2)
    return _make_connection("weierstrass", o11, o12, o21)


def _e_chart():
    e2, e4, e6 = _gens("e_chart")
    delta = delta_poly("e_chart")
    o11 = _forms("e_chart", e4=(e2 * e6 - e4 ** 2) / 4, e6=(e6 - e2 * e4) / 6)
    o12 = _forms("e_chart", e2=-delta / 12,
                 e4=-(e4 * e6 - 2 * e2 * e4 ** 2 + e2 ** 2 * e6) / 48,
                 e6=(e4 ** 2 - 2 * e2 * e6 + e2 ** 2 * e4) / 72)
    o21 = _forms("e_chart", e4=3 * e6, e6=-2 * e4)
    return _make_connection("e_chart", o11, o12, o21)


def b_chart_candidates():
    """The b-chart matrix with the duplicated middle slot assigned to each variable in turn."""
    b2, b4, b6 = _gens("b_chart")
    out = {}
    for slot in ("b2", "b4", "b6"):
        def build(first, middle, last):
            forms = {"b2": first}
            forms[slot] = forms.get(slot, PolyExpr(first.variables)) + middle
            forms["b6"] = forms.get("b6", PolyExpr(first.variables)) + last
            return _forms("b_chart", **forms)

        o11 = build((b2 ** 2 * b6 - 6 * b4 * b6 - b2 * b4 ** 2) / 8,
                    (4 * b4 ** 2 - 3 * b2 * b6) / 2,
                    (18 * b6 - b2 * b4) / 4)
        o12 = build((2 * b4 ** 3 + 9 * b6 ** 2 - 2 * b2 * b4 * b6) / 4,
                    (b2 ** 2 * b6 - b2 * b4 ** 2 - 6 * b4 * b6) / 4,
                    (4 * b4 ** 2 - 3 * b2 * b6) / 4)
        o21 = _forms("b_chart", b2=(3 * b2 * b6 - 4 * b4 ** 2) / 4,
                     b4=(b2 * b4 - 18 * b6) / 2, b6=(24 * b4 - b2 ** 2) / 4)
        out[slot] = _make_connection("b_chart", o11, o12, o21,
                                     notes=(f"middle slot of Omega_11, Omega_12 read as d{slot}",))
    return out


def transcription_checks(conn: ConnectionMatrix) -> dict:
    """The three identities a transcription of the b-chart matrix must satisfy."""
    contract = connection_contract(conn, ramanujan_field(conn.chart))
    return {
        "antidiagonal": conn.antidiagonal_ok(),
        "contraction": is_lower_unit(contract),
        "flat": flatness_convention(conn) is not None,
    }


@lru_cache(maxsize=None)
def _b_chart():
    accepted = [slot for slot, conn in b_chart_candidates().items()
                if all(transcription_checks(conn).values())]
    if accepted != ["b4"]:
        raise RuntimeError(f"b-chart transcription check failed: accepted slots {accepted}")
    return b_chart_candidates()["b4"]


def gauss_manin_matrix(chart: str) -> ConnectionMatrix:
    if chart == "weierstrass":
        return _weierstrass()
    if chart == "e_chart":
        return _e_chart()
    if chart == "b_chart":
        return _b_chart()
    raise UnsupportedChart(f"unknown chart {chart!r}")


def connection_contract(conn: ConnectionMatrix, vf: ChartVectorField) -> list:
    """``A(v)``: entry (a, b) is ``sum_v Omega_ab[v] * field[v] / Delta``."""
    if conn.chart != vf.chart:
        raise ChartMismatch(f"connection on {conn.chart}, field on {vf.chart}")
    vs = conn.variables
    out = []
    for a in range(2):
        row = []
        for b in range(2):
            num = RationalFunctionExpr.const(0, vs)
            for v, comp in zip(vs, vf.components):
                num = num + conn.entry(a, b, v) * comp
            row.append(num / conn.delta)
        out.append(row)
    return out


def is_lower_unit(m) -> bool:
    return m[0][0] == 0 and m[0][1] == 0 and m[1][0] == 1 and m[1][1] == 0


def connection_curvature(conn: ConnectionMatrix, sign: int = 1) -> dict:
    """``dA + sign * A^A`` as ``{(vi, vj): 2x2 matrix}`` over the basis dvi^dvj, i < j."""
    vs = conn.variables
    A = [[{v: conn.entry(a, b, v) / conn.delta for v in vs} for b in range(2)] for a in range(2)]
    out = {}
    for vi, vj in combinations(vs, 2):
        mat = []
        for a in range(2):
            row = []
            for b in range(2):
                val = A[a][b][vj].diff(vi) - A[a][b][vi].diff(vj)
                for c in range(2):
                    val = val + sign * (A[a][c][vi] * A[c][b][vj] - A[a][c][vj] * A[c][b][vi])
                row.append(val)
            mat.append(row)
        out[(vi, vj)] = mat
    return out


def curvature_vanishes(curv: dict) -> bool:
    return all(x.is_zero() for mat in curv.values() for row in mat for x in row)


def flatness_convention(conn: ConnectionMatrix) -> str | None:
    """``"dA+A^A"`` or ``"dA-A^A"`` if that curvature vanishes identically, else None."""
    if curvature_vanishes(connection_curvature(conn, +1)):
        return "dA+A^A"
    if curvature_vanishes(connection_curvature(conn, -1)):
        return "dA-A^A"
    return None


def delta_transfer_residual() -> PolyExpr:
    """``Delta_b o (e->b) - (e4^3 - e6^2)/1728``."""
    return delta_poly("b_chart").compose(chart_change("e->b")) - delta_poly("e_chart") / 1728


def roundtrip_residuals() -> dict:
    e_to_b, b_to_e = chart_change("e->b"), chart_change("b->e")
    eb = tuple(p.compose(e_to_b) for p in b_to_e)
    be = tuple(p.compose(b_to_e) for p in e_to_b)
    return {
        "e->b->e": tuple(p - g for p, g in zip(eb, _gens("e_chart"))),
        "b->e->b": tuple(p - g for p, g in zip(be, _gens("b_chart"))),
    }


# -- exact series-level verifications ----------------------------------------------

SERIES_CHECKS = ("ramanujan", "chazy", "phihat_b", "j_relation")


def _compare(name, lhs, rhs, upto):
    for n in range(lhs.lower_bound, upto + 1):
        a, b = lhs.coefficient(n), rhs.coefficient(n)
        if a != b:
            return {"identity": name, "exponent": n, "lhs": str(a), "rhs": str(b)}
    return None


def _ramanujan(N):
    E2, E4, E6 = (eisenstein_series(k, N) for k in (2, 4, 6))
    return [
        ("theta E2 = (E2^2 - E4)/12", E2.theta("q"), (E2 * E2 - E4) / 12),
        ("theta E4 = (E2 E4 - E6)/3", E4.theta("q"), (E2 * E4 - E6) / 3),
        ("theta E6 = (E2 E6 - E4^2)/2", E6.theta("q"), (E2 * E6 - E4 * E4) / 2),
    ], {}


def _chazy(N):
    E2 = eisenstein_series(2, N)
    t1 = E2.theta("q")
    t2 = t1.theta("q")
    t3 = t2.theta("q")
    return [("theta^3 E2 = E2 theta^2 E2 - 3/2 (theta E2)^2", t3, E2 * t2 - (t1 * t1) * F(3, 2))], {}


def phihat_b_series(N):
    """(b2, b4, b6) = (E2, theta E2 / 2, theta^2 E2 / 6)."""
    E2 = eisenstein_series(2, N)
    return E2, E2.theta("q") / 2, E2.theta("q").theta("q") / 6


def _phihat_b(N):
    b2, b4, b6 = phihat_b_series(N)
    extra = {"integral": all(s.is_integral() for s in (b2, b4, b6))}
    return [
        ("theta b2 = 2 b4", b2.theta("q"), b4 * 2),
        ("theta b4 = 3 b6", b4.theta("q"), b6 * 3),
        ("theta b6 = b2 b6 - b4^2", b6.theta("q"), b2 * b6 - b4 * b4),
    ], extra


J_MARGIN = 8


def j_invariant(N, lower_bound=-1):
    """``j = 1728 E4^3 / (E4^3 - E6^2)`` as a Laurent series correct through degree ``N``."""
    W = N + J_MARGIN
    E4 = eisenstein_series(4, W, lower_bound=lower_bound)
    E6 = eisenstein_series(6, W, lower_bound=lower_bound)
    E4c = E4 * E4 * E4
    j = E4c * 1728 * (E4c - E6 * E6).inverse()
    return j


def _j_relation(N):
    W = N + J_MARGIN
    j = j_invariant(N)
    E2, E4, E6 = (eisenstein_series(k, W, lower_bound=-1) for k in (2, 4, 6))
    tj = j.theta("q")
    t2j = tj.theta("q")
    a = tj * j.inverse()
    b = tj * (j - 1728).inverse()
    extra = {"j_leading": [str(c) for c in j.coefficients(-1, 1)]}
    return [
        ("E2 = 6 theta^2 j/theta j - 4 theta j/j - 3 theta j/(j-1728)", E2,
         t2j * tj.inverse() * 6 - a * 4 - b * 3),
        ("E4 = (theta j)^2 / (j (j-1728))", E4, a * b),
        ("E6 = -(theta j)^3 / (j^2 (j-1728))", E6, -(a * a * b)),
    ], extra


_BUILDERS = {"ramanujan": _ramanujan, "chazy": _chazy, "phihat_b": _phihat_b,
             "j_relation": _j_relation}


def verify_series_solution(check: str, order: int) -> dict:
    """Exact coefficientwise check of one series identity family through ``q^order``."""
    check = check.replace("-", "_")
    if check not in _BUILDERS:
        raise ValueError(f"unknown check {check!r}; expected one of {SERIES_CHECKS}")
    if order < 1:
        raise ValueError("order must be >= 1")
    identities, extra = _BUILDERS[check](order)
    failure = None
    for name, lhs, rhs in identities:
        failure = _compare(name, lhs, rhs, order)
        if failure:
            break
    ok = failure is None and extra.get("integral", True)
    report = {"check": check, "order": order, "pass": ok, "first_failure": failure}
    report.update(extra)
    return report

