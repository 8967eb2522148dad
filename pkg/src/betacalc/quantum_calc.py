"""beta-derivatives, beta-integrals and the L^p_beta structure on lattices.

Series are accumulated with :func:`math.fsum` (real and imaginary parts
separately), which is exactly rounded and therefore at least as good as
Kahan compensation for the long geometric sums that appear here.

All integral identities in this module assume the integrands are continuous
at ``s0``; the jump correction for functions discontinuous there is not
implemented.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .beta_map import DEFAULT_TOL, BetaMap, Lattice, Tolerances, build_lattice, invert
from .errors import (
    InvalidExponent,
    LatticeMismatch,
    NonFiniteValue,
    OutOfRange,
    SeriesDivergence,
)

ScalarFunction = Callable[[float], complex]

CSV_HEADER = ("k", "t_k", "weight", "re_value", "im_value")


def csum(values) -> complex:
    """Exactly rounded sum of complex (or real) numbers."""
    values = list(values)
    re = math.fsum(complex(v).real for v in values)
    im = math.fsum(complex(v).imag for v in values)
    return complex(re, im)


def _finite(z, what):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteValue(f"{what} is not finite: {z!r}")
    return z


def derivative_at_fixed_point(f: ScalarFunction, beta: BetaMap, tol: Tolerances = DEFAULT_TOL):
    """``f'(s0)``: exact when ``f`` provides ``derivative``, else a central difference."""
    s0 = beta.s0
    exact = getattr(f, "derivative", None)
    if exact is not None:
        return complex(exact(s0))
    h = math.sqrt(tol.atol) * max(1.0, abs(s0))
    return (complex(f(s0 + h)) - complex(f(s0 - h))) / (2.0 * h)


def beta_derivative(f: ScalarFunction, t: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL) -> complex:
    """``D_beta f(t) = (f(beta(t)) - f(t)) / (beta(t) - t)``; ``f'(s0)`` at the fixed point."""
    bt = beta.forward(t)
    if t == beta.s0 or bt == t:
        return _finite(derivative_at_fixed_point(f, beta, tol), "D_beta f(s0)")
    return _finite((complex(f(bt)) - complex(f(t))) / (bt - t), f"D_beta f({t!r})")


def beta_inverse_derivative(f: ScalarFunction, t: float, beta: BetaMap,
                            tol: Tolerances = DEFAULT_TOL) -> complex:
    """``D_{beta^-1} f(t) = (f(t) - f(u)) / (t - u)`` with ``u = beta^-1(t)``.

    Evaluated as ``D_beta f(u)``, i.e. with ``beta(u)`` in place of ``t``, so
    that the quotient pairs exactly with the forward one even when the
    inverse is only accurate to rounding.
    """
    if t == beta.s0:
        return _finite(derivative_at_fixed_point(f, beta, tol), "D_beta^-1 f(s0)")
    u = invert(beta, t, tol)
    if u == t:
        return _finite(derivative_at_fixed_point(f, beta, tol), "D_beta^-1 f(s0)")
    bu = beta.forward(u)
    if bu == u:
        return _finite(derivative_at_fixed_point(f, beta, tol), "D_beta^-1 f(s0)")
    return _finite((complex(f(bu)) - complex(f(u))) / (bu - u), f"D_beta^-1 f({t!r})")


def inverse_weight(t: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL) -> float:
    """``(D_beta beta^-1)(t) = (t - beta^-1(t)) / (beta(t) - t)``.

    Equals ``1/q`` for Hahn and Jackson maps.  At ``s0`` the limit
    ``1 / beta'(s0)`` is estimated by a central difference.
    """
    bt = beta.forward(t)
    if t == beta.s0 or bt == t:
        h = math.sqrt(tol.atol) * max(1.0, abs(beta.s0))
        slope = (beta.forward(beta.s0 + h) - beta.forward(beta.s0 - h)) / (2.0 * h)
        return 1.0 / slope
    return (t - invert(beta, t, tol)) / (bt - t)


@dataclass(frozen=True)
class IntegralInfo:
    tail_bound: float
    depth: int
    capped: bool


def _orbit_sum(f, lattice: Lattice, tol: Tolerances):
    if lattice.degenerate:
        return 0j, IntegralInfo(0.0, 0, False)
    vals = [_finite(complex(f(float(t))), f"f({t!r})") for t in lattice.summed_points]
    terms = [float(w) * v for w, v in zip(lattice.weights, vals)]

    partial = np.abs(np.cumsum(terms))
    limit = 1.0 / tol.atol
    if partial[-1] > limit:
        window = partial[-min(10, partial.size):]
        if window.size > 1 and np.all(np.diff(window) > 0):
            raise SeriesDivergence(
                f"partial sums reached {partial[-1]:.3e} and are still growing"
            )
    tail = abs(float(lattice.weights[-1])) * max(abs(v) for v in vals[-3:])
    return csum(terms), IntegralInfo(tail, lattice.depth, lattice.capped)


def beta_integral_from_s0(f: ScalarFunction, x: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL,
                          full_output: bool = False, depth: Optional[int] = None):
    """``sum_k (t_k - t_{k+1}) f(t_k)`` over the truncated orbit of ``x``.

    Returns the value, or ``(value, IntegralInfo)`` with ``full_output``.
    The reported tail bound is ``|t_K - t_{K+1}|`` times the largest ``|f|``
    among the last three summed samples.
    """
    lattice = build_lattice(beta, x, tol, depth=depth)
    value, info = _orbit_sum(f, lattice, tol)
    return (value, info) if full_output else value


def beta_integral(f: ScalarFunction, a: float, b: float, beta: BetaMap, tol: Tolerances = DEFAULT_TOL,
                  full_output: bool = False, depth: Optional[int] = None):
    """``int_a^b f d_beta = int_{s0}^b f d_beta - int_{s0}^a f d_beta``."""
    if a == b:
        zero = (0j, IntegralInfo(0.0, 0, False))
        return zero if full_output else 0j
    vb, ib = beta_integral_from_s0(f, b, beta, tol, True, depth)
    va, ia = beta_integral_from_s0(f, a, beta, tol, True, depth)
    info = IntegralInfo(ib.tail_bound + ia.tail_bound, max(ib.depth, ia.depth), ib.capped or ia.capped)
    return (vb - va, info) if full_output else vb - va


def fundamental_theorem_residual(f: ScalarFunction, a: float, b: float, beta: BetaMap,
                                 tol: Tolerances = DEFAULT_TOL) -> float:
    """``|int_a^b D_beta f d_beta - (f(b) - f(a))|`` for ``f`` continuous at ``s0``."""
    lhs = beta_integral(lambda t: beta_derivative(f, t, beta, tol), a, b, beta, tol)
    return abs(lhs - (complex(f(b)) - complex(f(a))))


def integration_by_parts_residual(f: ScalarFunction, g: ScalarFunction, a: float, b: float,
                                  beta: BetaMap, tol: Tolerances = DEFAULT_TOL) -> float:
    """Residual of ``int f D_beta g = [f g]_a^b - int (g o beta) D_beta f``."""
    lhs = beta_integral(lambda t: complex(f(t)) * beta_derivative(g, t, beta, tol), a, b, beta, tol)
    boundary = complex(f(b)) * complex(g(b)) - complex(f(a)) * complex(g(a))
    rhs_int = beta_integral(
        lambda t: complex(g(beta.forward(t))) * beta_derivative(f, t, beta, tol), a, b, beta, tol
    )
    return abs(lhs - (boundary - rhs_int))


def change_of_variables_residual(f: ScalarFunction, b: float, beta: BetaMap,
                                 tol: Tolerances = DEFAULT_TOL) -> float:
    """Residual of ``int_{s0}^b f(beta(t)) d_beta t = int_{s0}^{beta(b)} f(u) (D_beta beta^-1)(u) d_beta u``."""
    # both sides run over the same orbit shifted by one step, so truncate them at the same depth
    lhs, info = beta_integral_from_s0(lambda t: f(beta.forward(t)), b, beta, tol, full_output=True)
    rhs = beta_integral_from_s0(
        lambda u: complex(f(u)) * inverse_weight(u, beta, tol), beta.forward(b), beta, tol,
        depth=info.depth,
    )
    return abs(lhs - rhs)


# --- L^p_beta on lattices -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Support:
    """The lattice ``[a, b]_beta``: the orbits of ``b`` and of ``a``.

    Integration weights are ``+mu`` on the orbit of ``b`` and ``-mu`` on the
    orbit of ``a``, so that summing them against a function gives
    ``int_a^b``.  They are all nonnegative when ``a <= s0 <= b``.  Endpoints
    equal to ``s0`` contribute no orbit.  ``ghosts`` holds ``beta^-1`` of
    each base point (``None`` where it leaves the interval).
    """

    beta: BetaMap
    a: float
    b: float
    lattices: tuple
    signs: tuple
    ghosts: tuple

    @property
    def points(self) -> np.ndarray:
        return np.concatenate([lat.points for lat in self.lattices]) if self.lattices else np.empty(0)

    @property
    def weights(self) -> np.ndarray:
        """Signed integration weight of every point; tail points get 0."""
        parts = []
        for lat, sign in zip(self.lattices, self.signs):
            w = np.zeros(lat.points.size)
            w[: lat.weights.size] = sign * lat.weights
            parts.append(w)
        return np.concatenate(parts) if parts else np.empty(0)

    def same_as(self, other: "Support") -> bool:
        return self is other or (
            len(self.lattices) == len(other.lattices)
            and self.signs == other.signs
            and all(x.same_as(y) for x, y in zip(self.lattices, other.lattices))
        )


def make_support(beta: BetaMap, a: float, b: float, tol: Tolerances = DEFAULT_TOL,
                 depth: Optional[int] = None) -> Support:
    lattices, signs, ghosts = [], [], []
    for base, sign in ((b, 1), (a, -1)):
        if base == beta.s0:
            continue
        lattices.append(build_lattice(beta, base, tol, depth=depth))
        signs.append(sign)
        try:
            ghosts.append(invert(beta, base, tol))
        except OutOfRange:
            ghosts.append(None)
    return Support(beta, float(a), float(b), tuple(lattices), tuple(signs), tuple(ghosts))


def _frozen(values):
    arr = np.array(values, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LatticeFunction:
    """Complex values on every point of a :class:`Support`.

    Two lattice functions compare equal when they live on the same lattice
    and agree at every lattice point; this is the equivalence that defines
    ``L^p_beta``.  ``ghost_values`` (one per orbit, optional) are values at
    ``beta^-1`` of the base points, needed by the inverse-direction
    derivative at the endpoints.
    """

    support: Support
    values: tuple
    s0_value: complex = 0j
    ghost_values: Optional[tuple] = None

    def __post_init__(self):
        vals = tuple(_frozen(v) for v in self.values)
        if len(vals) != len(self.support.lattices):
            raise LatticeMismatch("one value array per orbit is required")
        for v, lat in zip(vals, self.support.lattices):
            if v.size != lat.points.size:
                raise LatticeMismatch(f"{v.size} values for {lat.points.size} lattice points")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "s0_value", complex(self.s0_value))
        if self.ghost_values is not None:
            object.__setattr__(self, "ghost_values", tuple(
                None if g is None else complex(g) for g in self.ghost_values))

    @classmethod
    def sample(cls, f: ScalarFunction, support: Support, ghosts: bool = True) -> "LatticeFunction":
        values = [[complex(f(float(t))) for t in lat.points] for lat in support.lattices]
        ghost_values = None
        if ghosts:
            ghost_values = tuple(None if g is None else complex(f(g)) for g in support.ghosts)
        return cls(support, tuple(values), complex(f(support.beta.s0)), ghost_values)

    @property
    def flat_values(self) -> np.ndarray:
        return np.concatenate(self.values) if self.values else np.empty(0, dtype=complex)

    def _check(self, other):
        if not self.support.same_as(other.support):
            raise LatticeMismatch("functions live on different lattices")

    def __eq__(self, other):
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        return self.support.same_as(other.support) and all(
            np.array_equal(x, y) for x, y in zip(self.values, other.values)
        )

    __hash__ = None

    def _combine(self, other, op):
        self._check(other)
        ghosts = None
        if self.ghost_values is not None and other.ghost_values is not None:
            ghosts = tuple(None if x is None or y is None else op(x, y)
                           for x, y in zip(self.ghost_values, other.ghost_values))
        return LatticeFunction(
            self.support,
            tuple(op(x, y) for x, y in zip(self.values, other.values)),
            op(self.s0_value, other.s0_value),
            ghosts,
        )

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __mul__(self, c):
        if isinstance(c, LatticeFunction):
            return self._combine(c, lambda x, y: x * y)
        ghosts = None if self.ghost_values is None else tuple(
            None if g is None else c * g for g in self.ghost_values)
        return LatticeFunction(self.support, tuple(c * v for v in self.values), c * self.s0_value, ghosts)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def conj(self):
        ghosts = None if self.ghost_values is None else tuple(
            None if g is None else g.conjugate() for g in self.ghost_values)
        return LatticeFunction(self.support, tuple(np.conj(v) for v in self.values),
                               self.s0_value.conjugate(), ghosts)

    def to_csv(self, file=None) -> Optional[str]:
        """Write ``k, t_k, weight, re_value, im_value`` rows, orbit by orbit.

        Returns the text when ``file`` is None.
        """
        buf = io.StringIO() if file is None else None
        out = buf if file is None else file
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        weights = self.support.weights
        i = 0
        for lat, vals in zip(self.support.lattices, self.values):
            for k, (t, v) in enumerate(zip(lat.points, vals)):
                writer.writerow((k, repr(float(t)), repr(float(weights[i]) + 0.0),
                                 repr(float(v.real)), repr(float(v.imag))))
                i += 1
        return buf.getvalue() if buf is not None else None

    @classmethod
    def from_csv(cls, source, support: Support) -> "LatticeFunction":
        """Read values written by :meth:`to_csv` back onto ``support``."""
        text = source.read() if hasattr(source, "read") else str(source)
        rows = list(csv.reader(io.StringIO(text)))
        if tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {rows[0]!r}")
        rows = rows[1:]
        values, pos = [], 0
        for lat in support.lattices:
            chunk = rows[pos: pos + lat.points.size]
            pos += lat.points.size
            ts = np.array([float(r[1]) for r in chunk])
            if ts.size != lat.points.size or not np.array_equal(ts, lat.points):
                raise LatticeMismatch("CSV points do not match the support")
            values.append([complex(float(r[3]), float(r[4])) for r in chunk])
        if pos != len(rows):
            raise LatticeMismatch("CSV has more rows than the support")
        return cls(support, tuple(values), 0j, None)


def lp_norm(f: LatticeFunction, p) -> float:
    """``(int |f|^p d_beta)^(1/p)``; for ``p = inf`` the sup over all lattice values and ``s0``."""
    if p == math.inf:
        vals = np.abs(f.flat_values)
        return float(max(vals.max(initial=0.0), abs(f.s0_value)))
    if not p >= 1:
        raise InvalidExponent(f"p must be >= 1 or inf, got {p!r}")
    w = np.abs(f.support.weights)
    total = math.fsum(w * np.abs(f.flat_values) ** p)
    return total ** (1.0 / p)


def inner_product(f: LatticeFunction, g: LatticeFunction) -> complex:
    """``<f, g> = int_a^b f conj(g) d_beta`` on the shared lattice."""
    f._check(g)
    return csum(f.support.weights * f.flat_values * np.conj(g.flat_values))


def _sampled_inner(f, g, support: Support):
    """``<f, g>`` for two callables on ``support`` (signed weights)."""
    terms = []
    for lat, sign in zip(support.lattices, support.signs):
        for t, mu in zip(lat.summed_points, lat.weights):
            t = float(t)
            terms.append(sign * float(mu) * complex(f(t)) * complex(g(t)).conjugate())
    return csum(terms)


def adjoint_residual(f: ScalarFunction, g: ScalarFunction, b: float, beta: BetaMap,
                     tol: Tolerances = DEFAULT_TOL, form: str = "ii", a: Optional[float] = None) -> float:
    """Residual of the adjoint relations between ``D_beta`` and ``-w D_{beta^-1}``.

    With ``w = D_beta beta^-1`` and inner products on ``[a, b]_beta``
    (``a`` defaults to ``s0``):

    * ``form="ii"``:  ``<D f, g> = f(b) conj g(beta^-1 b) - f(a) conj g(beta^-1 a) + <f, -w D^- g>``
    * ``form="iii"``: ``<-w D^- f, g> = f(beta^-1 a) conj g(a) - f(beta^-1 b) conj g(b) + <f, D g>``

    For ``a = s0`` the ``a`` terms reduce to ``f(s0) conj g(s0)``.

    Each orbit is truncated at ``t_{K+1}``, so the boundary terms at ``s0``
    are taken at the truncated end of that orbit: ``f(t_{K+1}) conj g(t_K)``
    for form ii and ``f(t_K) conj g(t_{K+1})`` for form iii.  Summation by
    parts is then exact on the truncated lattice and the residual measures
    rounding only.  This matters for maps with superlinear convergence to
    ``s0``, where ``t_K`` can sit far from ``s0`` even though ``t_{K+1}``
    is within ``atol``.
    """
    a = beta.s0 if a is None else a
    support = make_support(beta, a, b, tol)

    def d(h):
        return lambda t: beta_derivative(h, t, beta, tol)

    def wdinv(h):
        return lambda t: -inverse_weight(t, beta, tol) * beta_inverse_derivative(h, t, beta, tol)

    def cf(x):
        return complex(f(x))

    def cg(x):
        return complex(g(x)).conjugate()

    boundary = []
    for lat, sign in zip(support.lattices, support.signs):
        if lat.degenerate:
            continue
        x, pre = lat.base, invert(beta, lat.base, tol)
        last, tail = float(lat.points[-2]), lat.tail
        if form == "ii":
            boundary.append(sign * (cf(x) * cg(pre) - cf(tail) * cg(last)))
        else:
            boundary.append(sign * (cf(last) * cg(tail) - cf(pre) * cg(x)))

    if form == "ii":
        lhs = _sampled_inner(d(f), g, support)
        rhs = csum(boundary) + _sampled_inner(f, wdinv(g), support)
    elif form == "iii":
        lhs = _sampled_inner(wdinv(f), g, support)
        rhs = csum(boundary) + _sampled_inner(f, d(g), support)
    else:
        raise ValueError(f"form must be 'ii' or 'iii', got {form!r}")
    return abs(lhs - rhs)
