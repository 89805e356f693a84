"""Sparse multivariate polynomials and rational functions over Q.

Arithmetic is done here on plain dicts; only the GCD needed to reduce a
rational function is delegated to sympy's sparse polynomial rings.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Mapping, Sequence

from sympy import QQ
from sympy.polys.rings import ring


def _norm(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class PolyExpr:
    """Polynomial with exact rational coefficients in a fixed ordered variable tuple."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] = ()):
        self.variables = tuple(variables)
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict = {}
        n = len(self.variables)
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for variables {self.variables}")
            store[e] = store.get(e, 0) + c
        self._terms = {e: _norm(c) for e, c in store.items() if c != 0}

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "PolyExpr":
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if sum(e) != 1:
            raise ValueError(f"{name!r} not among {variables}")
        return cls(variables, {e: 1})

    @classmethod
    def const(cls, value, variables: Sequence[str]) -> "PolyExpr":
        return cls(variables, {(0,) * len(tuple(variables)): value})

    def gens(self):
        return [PolyExpr.var(v, self.variables) for v in self.variables]

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading(self):
        """Lexicographically largest exponent and its coefficient."""
        e = max(self._terms)
        return e, self._terms[e]

    def _lift(self, other):
        if isinstance(other, PolyExpr):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Rational)):
            return PolyExpr.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return PolyExpr(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyExpr(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                k = tuple(x + y for x, y in zip(ea, eb))
                out[k] = out.get(k, 0) + ca * cb
        return PolyExpr(self.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            inv = Fraction(1) / Fraction(other)
            return PolyExpr(self.variables, {e: c * inv for e, c in self._terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        out = PolyExpr.const(1, self.variables)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, var: str) -> "PolyExpr":
        i = self.variables.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                k = list(e)
                k[i] -= 1
                out[tuple(k)] = c * e[i]
        return PolyExpr(self.variables, out)

    def compose(self, images: Mapping[str, "PolyExpr"] | Sequence["PolyExpr"]) -> "PolyExpr":
        """Substitute a polynomial for every variable (all images share one variable tuple)."""
        if isinstance(images, Mapping):
            images = [images[v] for v in self.variables]
        images = list(images)
        target = images[0].variables
        out = PolyExpr(target)
        cache: dict = {}
        for e, c in self._terms.items():
            term = PolyExpr.const(c, target)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        total = 0
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = PolyExpr.const(other, self.variables)
        if not isinstance(other, PolyExpr):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"variables": list(self.variables),
                "terms": [[list(e), str(c)] for e, c in sorted(self._terms.items())]}


@lru_cache(maxsize=None)
def _sympy_ring(variables: tuple):
    R, *_ = ring(",".join(variables), QQ)
    return R


def _to_sympy(p: PolyExpr):
    R = _sympy_ring(p.variables)
    return R.from_dict({e: QQ(Fraction(c).numerator, Fraction(c).denominator)
                        for e, c in p._terms.items()})


def _from_sympy(sp, variables) -> PolyExpr:
    return PolyExpr(variables, {e: Fraction(int(c.numerator), int(c.denominator))
                                for e, c in sp.terms()})


def poly_gcd(a: PolyExpr, b: PolyExpr) -> PolyExpr:
    return _from_sympy(_to_sympy(a).gcd(_to_sympy(b)), a.variables)


class RationalFunctionExpr:
    """``numerator / denominator`` kept fully reduced.

    Normal form: numerator and denominator coprime, denominator has integer
    coefficients with content 1 and a positive lexicographic leading coefficient.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: PolyExpr, denominator: PolyExpr | None = None, *,
                 reduce: bool = True):
        if denominator is None:
            denominator = PolyExpr.const(1, numerator.variables)
        if denominator.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if numerator.variables != denominator.variables:
            raise ValueError("numerator and denominator use different variables")
        if reduce:
            numerator, denominator = _reduce(numerator, denominator)
        self.numerator = numerator
        self.denominator = denominator

    @property
    def variables(self):
        return self.numerator.variables

    @classmethod
    def const(cls, value, variables):
        return cls(PolyExpr.const(value, variables))

    def is_zero(self):
        return self.numerator.is_zero()

    def _lift(self, other):
        if isinstance(other, RationalFunctionExpr):
            return other
        if isinstance(other, PolyExpr):
            return RationalFunctionExpr(other)
        if isinstance(other, (int, Rational)):
            return RationalFunctionExpr.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.denominator == other.denominator:
            return RationalFunctionExpr(self.numerator + other.numerator, self.denominator)
        return RationalFunctionExpr(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionExpr(-self.numerator, self.denominator, reduce=False)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalFunctionExpr(self.numerator * other.numerator,
                                    self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalFunctionExpr(self.numerator * other.denominator,
                                    self.denominator * other.numerator)

    def diff(self, var: str) -> "RationalFunctionExpr":
        n, d = self.numerator, self.denominator
        return RationalFunctionExpr(n.diff(var) * d - n * d.diff(var), d * d)

    def __call__(self, *point):
        return self.numerator(*point) / self.denominator(*point)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        if self.denominator == 1:
            return repr(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}


def _reduce(num: PolyExpr, den: PolyExpr):
    if num.is_zero():
        return num, PolyExpr.const(1, num.variables)
    if den.degree() > 0 and num.degree() >= 0:
        g, pn, pd = _to_sympy(num).cofactors(_to_sympy(den))
        num, den = _from_sympy(pn, num.variables), _from_sympy(pd, num.variables)
    # integer primitive denominator with positive leading coefficient
    coeffs = [Fraction(c) for c in den._terms.values()]
    lcm = math.lcm(*(c.denominator for c in coeffs))
    content = math.gcd(*(int(c * lcm) for c in coeffs))
    scale = Fraction(lcm, content)
    if den.leading()[1] < 0:
        scale = -scale
    return num * scale, den * scale

