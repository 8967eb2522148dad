"""Small deterministic function handles: polynomials, a few builtins, constants.

These are the functions a run configuration can describe.  All of them are
pure callables accepting a real (or complex) scalar and expose ``derivative``
so that the derivative at the fixed point need not be approximated.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class Polynomial:
    """``c0 + c1 t + c2 t**2 + ...`` with coefficients in ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __call__(self, t):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self, t):
        acc = 0.0
        for n in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * t + n * self.coeffs[n]
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class Constant:
    """Constant function ``t -> value``."""

    value: complex

    def __call__(self, t):
        return self.value

    def derivative(self, t):
        return 0.0


_BUILTINS = {
    "sin": (math.sin, math.cos, cmath.sin, cmath.cos),
    "cos": (math.cos, lambda t: -math.sin(t), cmath.cos, lambda t: -cmath.sin(t)),
    "exp": (math.exp, math.exp, cmath.exp, cmath.exp),
}


@dataclass(frozen=True)
class Builtin:
    name: str

    def __post_init__(self):
        if self.name not in _BUILTINS:
            raise ValueError(f"unknown builtin {self.name!r}")

    def __call__(self, t):
        f, _, cf, _ = _BUILTINS[self.name]
        return cf(t) if isinstance(t, complex) else f(t)

    def derivative(self, t):
        _, df, _, cdf = _BUILTINS[self.name]
        return cdf(t) if isinstance(t, complex) else df(t)


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field, f"expected a number, got {value!r}")
    return float(value)


def _complex_number(value, field):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(field, "complex constants are [re, im]")
        return complex(_number(value[0], field + "[0]"), _number(value[1], field + "[1]"))
    return complex(_number(value, field))


def parse_function(obj, field="f"):
    """Build a function handle from its config description.

    Accepted forms are ``{"poly": [c0, c1, ...]}``, ``{"builtin": "sin"}``
    and ``{"constant": [re, im]}`` (a bare number is also accepted for the
    constant).  Polynomial coefficients may themselves be ``[re, im]`` pairs.
    """
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ConfigError(field, "expected exactly one of 'poly', 'builtin', 'constant'")
    (kind, payload), = obj.items()
    if kind == "poly":
        if not isinstance(payload, list) or not payload:
            raise ConfigError(field + ".poly", "coefficient list must be nonempty")
        coeffs = []
        for i, c in enumerate(payload):
            z = _complex_number(c, f"{field}.poly[{i}]")
            coeffs.append(z.real if z.imag == 0 else z)
        return Polynomial(tuple(coeffs))
    if kind == "builtin":
        if payload not in _BUILTINS:
            raise ConfigError(field + ".builtin", f"unknown builtin {payload!r}")
        return Builtin(payload)
    if kind == "constant":
        z = _complex_number(payload, field + ".constant")
        return Constant(z.real if z.imag == 0 else z)
    raise ConfigError(field, f"unknown function kind {kind!r}")
