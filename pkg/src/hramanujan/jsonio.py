"""JSON helpers: complex numbers as ``[re, im]``, deterministic float formatting."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def complex_matrix(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def complex_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).reshape(-1)]


def integer_matrix(M) -> list:
    return [[int(x) for x in row] for row in np.asarray(M, dtype=object)]


def matrix_from_json(data) -> np.ndarray:
    """Inverse of :func:`complex_matrix`; plain numbers are accepted as real entries."""
    def entry(x):
        if isinstance(x, (list, tuple)):
            return complex(x[0], x[1])
        return complex(x)
    return np.array([[entry(x) for x in row] for row in data], dtype=complex)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return _Float(float(obj))
    if isinstance(obj, complex):
        return [_Float(obj.real), _Float(obj.imag)]
    return obj


class _Float(float):
    def __repr__(self):
        if math.isnan(self) or math.isinf(self):
            return json.dumps(float(self))
        return format(float(self), ".17g")


def _iter(o):
    if isinstance(o, dict):
        yield "{"
        for i, k in enumerate(sorted(o)):
            if i:
                yield ", "
            yield json.dumps(k)
            yield ": "
            yield from _iter(o[k])
        yield "}"
    elif isinstance(o, list):
        yield "["
        for i, v in enumerate(o):
            if i:
                yield ", "
            yield from _iter(v)
        yield "]"
    elif isinstance(o, _Float):
        yield repr(o)
    else:
        yield json.dumps(o)


def dumps(obj) -> str:
    """Sorted keys, floats at 17 significant digits."""
    return "".join(_iter(_plain(obj)))
