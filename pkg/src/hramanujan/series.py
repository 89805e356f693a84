"""Truncated multivariate Laurent series with exact rational coefficients.

A series lives in a *context*: an ordered tuple of variable names, a total
degree bound ``order`` (terms of higher total degree are dropped) and a lower
bound ``lower_bound`` (terms below it are an error, never silently dropped).
Coefficients are Python ints or :class:`fractions.Fraction`; floats never
enter.

Products of series with negative-degree terms are products of the stored
truncations, so their top coefficients only see the stored part of each
factor. Callers that need every coefficient up to ``N`` to be the true ones
work at a slightly larger order and truncate (see ``charts.verify_series_solution``).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    NonUnitLeadingTerm,
    TruncationUnderflow,
    UnsupportedWeight,
    VariableMismatch,
)

EISENSTEIN_CONSTANTS = {2: -24, 4: 240, 6: -504}


def _normalize(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _parse_rational(text):
    return _normalize(Fraction(text))


class TruncatedLaurentSeries:
    """An immutable element of ``Q((x_1, ..., x_n))`` known up to total degree ``order``."""

    __slots__ = ("variables", "order", "lower_bound", "_terms")

    def __init__(self, variables: Sequence[str], order: int,
                 terms: Mapping[tuple, object] | Iterable = (), lower_bound: int = 0):
        variables = tuple(variables)
        if order < 0 and lower_bound >= 0:
            raise ValueError("order must be nonnegative")
        if lower_bound > order:
            raise ValueError("lower_bound exceeds order")
        self.variables = variables
        self.order = int(order)
        self.lower_bound = int(lower_bound)
        n = len(variables)
        items = terms.items() if isinstance(terms, Mapping) else terms
        store = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise DimensionMismatch(
                    f"exponent {exps} has length {len(exps)}, context has {n} variables")
            deg = sum(exps)
            if deg > self.order:
                continue
            if deg < self.lower_bound:
                raise TruncationUnderflow(
                    f"term of total degree {deg} below lower bound {self.lower_bound}")
            store[exps] = store.get(exps, 0) + c
        self._terms = {e: _normalize(c) for e, c in store.items() if c != 0}

    # -- construction helpers -------------------------------------------------

    def _same(self, terms):
        return TruncatedLaurentSeries(self.variables, self.order, terms, self.lower_bound)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence, var: str = "q", order: int | None = None,
                          lower_bound: int = 0) -> "TruncatedLaurentSeries":
        """Univariate series whose ``k``-th list entry is the coefficient of ``var**(lower_bound + k)``."""
        if order is None:
            order = lower_bound + len(coeffs) - 1
        return cls((var,), order, {(lower_bound + k,): c for k, c in enumerate(coeffs)},
                   lower_bound)

    @classmethod
    def constant(cls, value, variables: Sequence[str], order: int, lower_bound: int = 0):
        return cls(variables, order, {(0,) * len(tuple(variables)): value}, lower_bound)

    @classmethod
    def monomial(cls, exps: Sequence[int], variables: Sequence[str], order: int,
                 coefficient=1, lower_bound: int = 0):
        return cls(variables, order, {tuple(exps): coefficient}, lower_bound)

    def zero(self):
        return self._same({})

    def one(self):
        return self._same({(0,) * len(self.variables): 1})

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms sorted lexicographically by exponent tuple."""
        return sorted(self._terms.items())

    def coefficient(self, exps) -> int | Fraction:
        if isinstance(exps, int):
            exps = (exps,)
        return self._terms.get(tuple(exps), 0)

    def coefficients(self, start: int | None = None, stop: int | None = None) -> list:
        """Univariate convenience: coefficients from ``start`` to ``stop`` inclusive."""
        self._require_univariate()
        start = self.lower_bound if start is None else start
        stop = self.order if stop is None else stop
        return [self._terms.get((n,), 0) for n in range(start, stop + 1)]

    def valuation(self) -> int | None:
        if not self._terms:
            return None
        return min(sum(e) for e in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def context(self):
        return (self.variables, self.order, self.lower_bound)

    def _require_univariate(self):
        if len(self.variables) != 1:
            raise DimensionMismatch("operation defined for univariate series only")

    def _check(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            raise TypeError(f"expected TruncatedLaurentSeries, got {type(other).__name__}")
        if other.context() != self.context():
            raise VariableMismatch(
                f"incompatible contexts {self.context()} and {other.context()}")

    def _coerce(self, other):
        if isinstance(other, TruncatedLaurentSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return self.constant(other, self.variables, self.order, self.lower_bound)
        return NotImplemented

    # -- ring structure -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return self._same(out)

    __radd__ = __add__

    def __neg__(self):
        return self._same({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _normalize(c)
        return self._same({e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = self.order
        b_items = sorted(((sum(e), e, c) for e, c in other._terms.items()))
        out: dict = {}
        if len(self.variables) == 1:
            for (ea,), ca in self._terms.items():
                for db, (eb,), cb in b_items:
                    if ea + db > N:
                        break
                    k = (ea + eb,)
                    out[k] = out.get(k, 0) + ca * cb
        else:
            for ea, ca in self._terms.items():
                da = sum(ea)
                for db, eb, cb in b_items:
                    if da + db > N:
                        break
                    k = tuple(x + y for x, y in zip(ea, eb))
                    out[k] = out.get(k, 0) + ca * cb
        return self._same(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def inverse(self) -> "TruncatedLaurentSeries":
        """Multiplicative inverse, for series whose lowest-degree part is a single monomial."""
        if not self._terms:
            raise NonUnitLeadingTerm("zero series is not invertible")
        v = self.valuation()
        lead = [(e, c) for e, c in self._terms.items() if sum(e) == v]
        if len(lead) != 1:
            raise NonUnitLeadingTerm(
                f"lowest homogeneous part (degree {v}) has {len(lead)} terms")
        m, c = lead[0]
        if -v < self.lower_bound:
            raise NonUnitLeadingTerm(
                f"inverse would start in degree {-v}, below lower bound {self.lower_bound}")
        work = max(self.order + v, 0)
        cinv = Fraction(1) / Fraction(c)
        unit = TruncatedLaurentSeries(
            self.variables, work,
            {tuple(x - y for x, y in zip(e, m)): cc * cinv for e, cc in self._terms.items()
             if sum(e) - v <= work})
        inv = _unit_inverse(unit)
        neg_m = tuple(-x for x in m)
        return self._same({tuple(x + y for x, y in zip(e, neg_m)): cc * cinv
                           for e, cc in inv._terms.items()})

    # -- derivations and truncation ------------------------------------------

    def theta(self, var: str) -> "TruncatedLaurentSeries":
        """``var * d/dvar``: scales each coefficient by that variable's exponent."""
        try:
            i = self.variables.index(var)
        except ValueError:
            raise VariableMismatch(f"{var!r} not among {self.variables}") from None
        return self._same({e: e[i] * c for e, c in self._terms.items()})

    def with_order(self, order: int) -> "TruncatedLaurentSeries":
        """Change the truncation order; raising it treats the stored terms as exact."""
        return TruncatedLaurentSeries(self.variables, order, self._terms, self.lower_bound)

    def with_lower_bound(self, lower_bound: int) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(self.variables, self.order, self._terms, lower_bound)

    # -- comparison and serialization -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self._coerce(other)
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self.context() == other.context() and self._terms == other._terms

    def __hash__(self):
        return hash((self.context(), frozenset(self._terms.items())))

    def __repr__(self):
        shown = self.items()[:6]
        body = " + ".join(f"{c}*{_fmt_mono(e, self.variables)}" for e, c in shown) or "0"
        more = " + ..." if len(self._terms) > 6 else ""
        return f"<{body}{more} + O(deg {self.order + 1})>"

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "order": self.order,
            "lower_bound": self.lower_bound,
            "terms": [[list(e), str(c)] for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedLaurentSeries":
        return cls(data["variables"], data["order"],
                   [(tuple(e), _parse_rational(c)) for e, c in data["terms"]],
                   data.get("lower_bound", 0))


def _fmt_mono(e, variables):
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k]
    return "*".join(parts) or "1"


def _unit_inverse(u: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    # Newton iteration r <- r(2 - u r); u has constant term 1, precision doubles.
    N = u.order
    r = u.one()
    prec = 1
    while prec <= N:
        prec = min(2 * prec, N + 1)
        uu = u.with_order(prec - 1)
        rr = r.with_order(prec - 1)
        r = rr + rr * (rr.one() - uu * rr)
    return r.with_order(N)


# -- module-level operations -------------------------------------------------------


def laurent_arith(a: TruncatedLaurentSeries, b: TruncatedLaurentSeries | None, kind: str):
    """Dispatch ``add``, ``sub``, ``mul`` or ``invert-first`` (which ignores ``b``)."""
    if kind == "add":
        return a + _checked(a, b)
    if kind == "sub":
        return a - _checked(a, b)
    if kind == "mul":
        return a * _checked(a, b)
    if kind in ("invert-first", "invert_first", "inv"):
        return a.inverse()
    raise ValueError(f"unknown kind {kind!r}")


def _checked(a, b):
    if not isinstance(b, TruncatedLaurentSeries):
        raise TypeError("second operand must be a series")
    a._check(b)
    return b


def theta_derive(s: TruncatedLaurentSeries, var: str | None = None) -> TruncatedLaurentSeries:
    if var is None:
        s._require_univariate()
        var = s.variables[0]
    return s.theta(var)


def divisor_sigma_table(power: int, n_max: int) -> list[int]:
    """``sigma_power(n)`` for ``0 <= n <= n_max`` (entry 0 is 0)."""
    table = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d ** power
        for m in range(d, n_max + 1, d):
            table[m] += dp
    return table


def eisenstein_series(k: int, order: int, var: str = "q", lower_bound: int = 0):
    """``E_k = 1 + c_k * sum sigma_{k-1}(n) q^n`` for ``k`` in {2, 4, 6}."""
    if k not in EISENSTEIN_CONSTANTS:
        raise UnsupportedWeight(f"weight {k} not in (2, 4, 6)")
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = EISENSTEIN_CONSTANTS[k]
    sigma = divisor_sigma_table(k - 1, order)
    terms = {(0,): 1}
    for n in range(1, order + 1):
        terms[(n,)] = c * sigma[n]
    return TruncatedLaurentSeries((var,), order, terms, lower_bound)


def monomial_substitute(s: TruncatedLaurentSeries, matrix: Sequence[Sequence[int]],
                        target_variables: Sequence[str], order: int | None = None,
                        lower_bound: int | None = None) -> TruncatedLaurentSeries:
    """Apply the ring map ``x^e -> y^(M e)``; ``matrix`` has one row per target variable."""
    target_variables = tuple(target_variables)
    rows = [tuple(int(x) for x in row) for row in matrix]
    if len(rows) != len(target_variables):
        raise DimensionMismatch(
            f"{len(rows)} rows for {len(target_variables)} target variables")
    if any(len(r) != len(s.variables) for r in rows):
        raise DimensionMismatch(f"each row needs {len(s.variables)} entries")
    order = s.order if order is None else order
    lower_bound = s.lower_bound if lower_bound is None else lower_bound
    out: dict = {}
    for e, c in s._terms.items():
        img = tuple(sum(r[j] * e[j] for j in range(len(e))) for r in rows)
        deg = sum(img)
        if deg < lower_bound:
            raise TruncationUnderflow(
                f"image {img} of {e} has total degree {deg} < {lower_bound}")
        if deg <= order:
            out[img] = out.get(img, 0) + c
    return TruncatedLaurentSeries(target_variables, order, out, lower_bound)
