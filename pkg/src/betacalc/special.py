"""beta-exponential and beta-trigonometric functions.

``e_{p,beta}(t) = 1 / prod_k [1 - p(t_k)(t_k - t_{k+1})]`` and
``E_{p,beta}(t) = prod_k [1 + p(t_k)(t_k - t_{k+1})]`` over the orbit
``t_k = beta^k(t)``.  The products are truncated at the first factor whose
deviation from 1 is negligible, ``|t_k - t_{k+1}| * max(1, |p(t_k)|) < atol``;
that criterion depends on the orbit point only, so the orbit of ``beta(t)``
is truncated at exactly the same place as the orbit of ``t``.  Factors are
multiplied from the deepest one outward, which makes ``E(t)`` equal
``(1 + p(t) mu) * E(beta(t))`` up to a single rounding and keeps
difference quotients of these functions accurate.

The trigonometric functions use the conventional normalisation
``sin = (e_{ip} - e_{-ip}) / (2i)``, for which ``D_beta sin = p cos``.
"""
from __future__ import annotations

import math
from typing import Callable, Union

from .beta_map import DEFAULT_TOL, BetaMap, Tolerances
from .errors import NoConvergence, NonFiniteValue, PoleEncountered
from .functions import Constant

CoefficientFunction = Union[Callable[[float], complex], complex, float]

KINDS = ("e", "E", "sin", "cos", "Sin", "Cos")


def as_coefficient(p: CoefficientFunction):
    if callable(p):
        return p
    return Constant(complex(p))


def _factors(p, t: float, beta: BetaMap, tol: Tolerances, scale: complex):
    """Factors ``1 + scale * p(t_k) * (t_k - t_{k+1})`` of the orbit of ``t``."""
    p = as_coefficient(p)
    s0 = beta.s0
    out = []
    cur = float(t)
    for _ in range(tol.k_max):
        if cur == s0:
            return out
        nxt = beta.forward(cur)
        gap = cur - nxt
        if gap == 0.0:
            return out
        pk = complex(p(cur))
        if not (math.isfinite(pk.real) and math.isfinite(pk.imag)):
            raise NonFiniteValue(f"p({cur!r}) = {pk!r}")
        if abs(gap) * max(1.0, abs(pk)) < tol.atol:
            return out
        out.append(1.0 + scale * pk * gap)
        cur = nxt
    raise NoConvergence(f"product for t={t!r} did not settle within k_max={tol.k_max} factors")


def _product(factors) -> complex:
    acc = 1.0 + 0j
    for f in reversed(factors):
        acc *= f
    return acc


def exp_small(p: CoefficientFunction, t: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL,
              scale: complex = 1.0) -> complex:
    """``e_{p,beta}(t)``; ``scale`` multiplies ``p`` (``scale=1j`` gives ``e_{ip}``)."""
    factors = _factors(p, t, beta, tol, -scale)
    for k, f in enumerate(factors):
        if abs(f) < tol.atol:
            raise PoleEncountered(f"e_p,beta has a pole at t={t!r} (factor {k} vanishes)")
    return 1.0 / _product(factors)


def exp_big(p: CoefficientFunction, t: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL,
            scale: complex = 1.0) -> complex:
    """``E_{p,beta}(t)``, the direct product."""
    return _product(_factors(p, t, beta, tol, scale))


def trig(kind: str, p: CoefficientFunction, t: float, beta: BetaMap,
         tol: Tolerances = DEFAULT_TOL) -> complex:
    """``sin``/``cos`` from ``e_{+-ip}`` and ``Sin``/``Cos`` from ``E_{+-ip}``."""
    if kind in ("sin", "cos"):
        plus, minus = exp_small(p, t, beta, tol, 1j), exp_small(p, t, beta, tol, -1j)
    elif kind in ("Sin", "Cos"):
        plus, minus = exp_big(p, t, beta, tol, 1j), exp_big(p, t, beta, tol, -1j)
    else:
        raise ValueError(f"unknown trigonometric kind {kind!r}")
    if kind in ("cos", "Cos"):
        return 0.5 * (plus + minus)
    return (plus - minus) / 2j


def evaluate(kind: str, p: CoefficientFunction, t: float, beta: BetaMap,
             tol: Tolerances = DEFAULT_TOL) -> complex:
    if kind == "e":
        return exp_small(p, t, beta, tol)
    if kind == "E":
        return exp_big(p, t, beta, tol)
    return trig(kind, p, t, beta, tol)


def special_function(kind: str, p: CoefficientFunction, beta: BetaMap,
                     tol: Tolerances = DEFAULT_TOL) -> Callable[[float], complex]:
    """Return ``t -> kind_{p,beta}(t)`` as a plain callable."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return lambda t: evaluate(kind, p, t, beta, tol)
