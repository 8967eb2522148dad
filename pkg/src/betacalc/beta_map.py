"""The map ``beta``, its orbits, and truncated beta-lattices.

A :class:`BetaMap` is a strictly increasing continuous map of an interval
into itself with a unique attracting fixed point ``s0``.  Every quantity in
the library lives on orbits ``x, beta(x), beta(beta(x)), ...`` which
converge monotonically to ``s0``; :func:`build_lattice` truncates such an
orbit once it is within tolerance of the fixed point.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConfigError,
    DepthExceeded,
    InvalidInterval,
    InvalidParameter,
    NoConvergence,
    NonFiniteSample,
    OutOfRange,
    TruncationCapWarning,
)

__all__ = [
    "Interval",
    "Tolerances",
    "BetaMap",
    "Lattice",
    "ValidationReport",
    "validate",
    "iterate",
    "invert",
    "build_lattice",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or not self.lo < self.hi:
            raise InvalidInterval(f"interval needs lo < hi, got ({self.lo}, {self.hi})")
        # infinite ends are never attained
        if math.isinf(self.lo):
            object.__setattr__(self, "closed_lo", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "closed_hi", False)

    def __contains__(self, t) -> bool:
        above = t >= self.lo if self.closed_lo else t > self.lo
        below = t <= self.hi if self.closed_hi else t < self.hi
        return bool(above and below)

    def to_json(self):
        def end(v):
            return None if math.isinf(v) else v

        return {"interval": [end(self.lo), end(self.hi)], "closed": [self.closed_lo, self.closed_hi]}


REAL_LINE = Interval(-math.inf, math.inf, False, False)


@dataclass(frozen=True)
class Tolerances:
    """Comparison tolerances and the hard cap on orbit depth.

    ``atol`` drives lattice truncation (relative to the distance of the base
    point from ``s0``), product truncation and fixed point checks.
    """

    atol: float = 1e-12
    rtol: float = 1e-9
    k_max: int = 10_000

    def __post_init__(self):
        for name in ("atol", "rtol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameter(f"{name} must be finite and positive, got {v}")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise InvalidParameter(f"k_max must be an integer >= 1, got {self.k_max}")


DEFAULT_TOL = Tolerances()


def _hahn_forward(q, omega):
    return lambda t: q * t + omega


def _hahn_inverse(q, omega):
    return lambda u: (u - omega) / q


def _cube(t):
    return t * t * t


def _cube_root(u):
    return float(np.cbrt(u))


@dataclass(frozen=True, eq=False)
class BetaMap:
    """A validated-by-construction description of ``beta: I -> I``.

    Use the constructors :meth:`hahn`, :meth:`jackson`, :meth:`cubic` and
    :meth:`custom`; the dataclass fields are the common representation.
    """

    forward: Callable[[float], float]
    interval: Interval
    s0: float
    inverse: Optional[Callable[[float], float]] = None
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.forward(t)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"BetaMap.{self.family}({args})"

    @classmethod
    def hahn(cls, q, omega, interval=None):
        """``beta(t) = q t + omega`` with fixed point ``omega / (1 - q)``."""
        q, omega = float(q), float(omega)
        if not 0.0 < q < 1.0:
            raise InvalidParameter(f"Hahn map needs 0 < q < 1, got q={q}")
        if not (omega >= 0.0 and math.isfinite(omega)):
            raise InvalidParameter(f"Hahn map needs omega >= 0, got omega={omega}")
        return cls(
            forward=_hahn_forward(q, omega),
            inverse=_hahn_inverse(q, omega),
            interval=interval or REAL_LINE,
            s0=omega / (1.0 - q),
            family="hahn",
            params={"q": q, "omega": omega},
        )

    @classmethod
    def jackson(cls, q, interval=None):
        """``beta(t) = q t``; the Hahn map with ``omega = 0``."""
        q = float(q)
        if not 0.0 < q < 1.0:
            raise InvalidParameter(f"Jackson map needs 0 < q < 1, got q={q}")
        return cls(
            forward=_hahn_forward(q, 0.0),
            inverse=_hahn_inverse(q, 0.0),
            interval=interval or REAL_LINE,
            s0=0.0,
            family="jackson",
            params={"q": q},
        )

    @classmethod
    def cubic(cls):
        """``beta(t) = t**3`` on the open interval ``(-1, 1)``."""
        return cls(
            forward=_cube,
            inverse=_cube_root,
            interval=Interval(-1.0, 1.0, False, False),
            s0=0.0,
            family="cubic",
        )

    @classmethod
    def custom(cls, forward, interval, s0, inverse=None, **params):
        if not isinstance(interval, Interval):
            interval = Interval(*interval)
        return cls(
            forward=forward,
            inverse=inverse,
            interval=interval,
            s0=float(s0),
            family="custom",
            params=dict(params),
        )

    def to_json(self):
        if self.family == "custom":
            raise TypeError("custom maps built from callables are not serializable")
        out = {"family": self.family, **self.params}
        if self.interval is not REAL_LINE and self.family != "cubic":
            out.update(self.interval.to_json())
        return out

    @classmethod
    def from_json(cls, obj, field_name="beta"):
        """Inverse of :meth:`to_json`; custom maps take function descriptions.

        ``{"family": "custom", "forward": {"poly": [0, 0.5]}, "interval": [0, 1],
        "s0": 0}`` describes ``beta(t) = t / 2`` on ``[0, 1]``.
        """
        from .functions import parse_function

        if not isinstance(obj, dict):
            raise ConfigError(field_name, "expected an object")
        family = obj.get("family")
        if family is None:
            raise ConfigError(field_name + ".family", "missing required field")

        def need(key):
            if key not in obj:
                raise ConfigError(f"{field_name}.{key}", "missing required field")
            v = obj[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{field_name}.{key}", f"expected a number, got {v!r}")
            return float(v)

        interval = None
        if "interval" in obj:
            iv = obj["interval"]
            if not (isinstance(iv, list) and len(iv) == 2):
                raise ConfigError(field_name + ".interval", "expected [lo, hi]")
            lo = -math.inf if iv[0] is None else iv[0]
            hi = math.inf if iv[1] is None else iv[1]
            closed = obj.get("closed", [True, True])
            interval = Interval(float(lo), float(hi), bool(closed[0]), bool(closed[1]))

        if family == "hahn":
            return cls.hahn(need("q"), need("omega"), interval)
        if family == "jackson":
            return cls.jackson(need("q"), interval)
        if family == "cubic":
            return cls.cubic()
        if family == "custom":
            if "forward" not in obj:
                raise ConfigError(field_name + ".forward", "missing required field")
            if interval is None:
                raise ConfigError(field_name + ".interval", "missing required field")
            fwd = parse_function(obj["forward"], field_name + ".forward")
            inv = None
            if "inverse" in obj:
                inv = parse_function(obj["inverse"], field_name + ".inverse")
            return cls.custom(fwd, interval, need("s0"), inverse=inv)
        raise ConfigError(field_name + ".family", f"unknown family {family!r}")


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Lattice:
    """Truncated orbit ``t_k = beta^k(base)``, ``k = 0..depth+1``.

    ``weights[k] = t_k - t_{k+1}`` for ``k = 0..depth`` (signed; all share
    the sign of ``base - s0``).  The last point ``t_{depth+1}`` is the tail
    point: it is not summed, it stands in for ``s0``.  An orbit starting at
    ``s0`` is degenerate: a single point and no weights.
    """

    base: float
    s0: float
    points: np.ndarray
    weights: np.ndarray
    depth: int
    tail_gap: float
    capped: bool = False

    @property
    def degenerate(self) -> bool:
        return self.weights.size == 0

    @property
    def summed_points(self) -> np.ndarray:
        return self.points[: self.weights.size]

    @property
    def tail(self) -> float:
        return float(self.points[-1])

    def same_as(self, other: "Lattice") -> bool:
        return self is other or (
            self.s0 == other.s0 and np.array_equal(self.points, other.points)
        )

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    family: str
    s0: float
    region: tuple
    grid_size: int
    checks: dict
    first_violation: Optional[dict]
    note: str

    def to_dict(self):
        return {
            "passed": self.passed,
            "family": self.family,
            "s0": self.s0,
            "region": list(self.region),
            "grid_size": self.grid_size,
            "checks": dict(self.checks),
            "first_violation": self.first_violation,
            "note": self.note,
        }


def _validation_region(interval: Interval, s0: float, bound: float):
    lo = max(interval.lo, s0 - bound)
    hi = min(interval.hi, s0 + bound)
    return lo, hi


def _grid(interval: Interval, lo: float, hi: float, n: int) -> np.ndarray:
    # open ends are excluded by sampling strictly inside
    open_lo = lo == interval.lo and not interval.closed_lo
    open_hi = hi == interval.hi and not interval.closed_hi
    g = np.linspace(lo, hi, n + int(open_lo) + int(open_hi))
    return g[int(open_lo) : g.size - int(open_hi)]


def validate(beta: BetaMap, grid_size: int = 101, tol: Tolerances = DEFAULT_TOL,
             bound: float = 1e6) -> ValidationReport:
    """Check the defining properties of ``beta`` on a sampling grid.

    The grid spans ``I`` intersected with ``[s0 - bound, s0 + bound]``; a
    pass certifies that sampled region only.  Checked, point by point in
    ascending order: ``beta(t)`` finite and inside ``I``, strict increase
    against the previous sample, and ``(t - s0)(beta(t) - t) < 0`` away
    from ``s0``.  The fixed point equation is checked first.
    """
    if grid_size < 3:
        raise InvalidParameter("grid_size must be at least 3")
    iv = beta.interval
    s0 = beta.s0
    lo, hi = _validation_region(iv, s0, bound)
    if not lo < hi:
        raise InvalidInterval(f"validation region ({lo}, {hi}) is empty")
    checks = {
        "fixed_point": True,
        "maps_into_interval": True,
        "strictly_increasing": True,
        "moves_toward_fixed_point": True,
    }
    violation = None

    def fail(name, t, detail):
        nonlocal violation
        checks[name] = False
        if violation is None:
            violation = {"check": name, "t": float(t), "detail": detail}

    if s0 not in iv:
        fail("fixed_point", s0, "s0 lies outside the interval")
    else:
        b0 = beta.forward(s0)
        if not math.isfinite(b0):
            raise NonFiniteSample(f"beta({s0}) = {b0}")
        if abs(b0 - s0) > tol.atol:
            fail("fixed_point", s0, f"beta(s0) - s0 = {b0 - s0:.3e}")

    prev = None
    for t in _grid(iv, lo, hi, grid_size):
        t = float(t)
        bt = beta.forward(t)
        if not math.isfinite(bt):
            raise NonFiniteSample(f"beta({t}) = {bt}")
        if bt not in iv:
            fail("maps_into_interval", t, f"beta(t) = {bt!r} is outside the interval")
        if prev is not None and not bt > prev:
            fail("strictly_increasing", t, f"beta(t) = {bt!r} <= previous sample {prev!r}")
        prev = bt
        if abs(t - s0) > tol.atol:
            if not (t - s0) * (bt - t) < 0.0:
                fail("moves_toward_fixed_point", t,
                     f"(t - s0)(beta(t) - t) = {(t - s0) * (bt - t):.6g} is not negative")

    clipped = lo > iv.lo or hi < iv.hi
    note = f"sampled {grid_size} points on [{lo!r}, {hi!r}]"
    if clipped:
        note += "; behaviour outside this region is not certified"
    return ValidationReport(
        passed=violation is None,
        family=beta.family,
        s0=s0,
        region=(lo, hi),
        grid_size=grid_size,
        checks=checks,
        first_violation=violation,
        note=note,
    )


def iterate(beta: BetaMap, x: float, k: int) -> float:
    """Return ``beta^k(x)``."""
    if x not in beta.interval:
        raise OutOfRange(f"{x!r} is outside the interval of {beta!r}")
    if k < 0:
        raise InvalidParameter("k must be nonnegative")
    t = x
    for _ in range(k):
        t = beta.forward(t)
        if t not in beta.interval:
            raise DepthExceeded(f"orbit of {x!r} left the interval at {t!r}")
    return t


def invert(beta: BetaMap, u: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Return ``t`` with ``beta(t) = u``.

    Closed forms are used when the map has one; otherwise bisection on the
    (clipped) interval, which strict monotonicity makes safe.
    """
    if u == beta.s0:
        return beta.s0
    if beta.inverse is not None:
        t = beta.inverse(u)
        if not (math.isfinite(t) and t in beta.interval):
            raise OutOfRange(f"{u!r} is not in the image of {beta!r}")
        return float(t)

    iv = beta.interval
    lo, hi = _validation_region(iv, beta.s0, 1e6)
    if not iv.closed_lo and lo == iv.lo:
        lo = math.nextafter(lo, hi)
    if not iv.closed_hi and hi == iv.hi:
        hi = math.nextafter(hi, lo)
    flo, fhi = beta.forward(lo), beta.forward(hi)
    if not flo <= u <= fhi:
        raise OutOfRange(f"{u!r} is not in the image [{flo!r}, {fhi!r}] of {beta!r}")
    budget = math.ceil(math.log2((hi - lo) / tol.atol)) + 8
    for _ in range(budget):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if beta.forward(mid) < u:
            lo = mid
        else:
            hi = mid
    t = lo if abs(beta.forward(lo) - u) <= abs(beta.forward(hi) - u) else hi
    if abs(beta.forward(t) - u) > tol.atol:
        raise NoConvergence(f"bisection for beta^-1({u!r}) stalled at {t!r}")
    return t


def build_lattice(beta: BetaMap, x: float, tol: Tolerances = DEFAULT_TOL,
                  depth: Optional[int] = None) -> Lattice:
    """Truncated orbit of ``x``.

    Without ``depth`` the orbit is cut at the smallest ``K`` with
    ``|t_{K+1} - s0| <= atol * max(1, |x - s0|)``, at most ``k_max``; hitting
    the cap emits :class:`TruncationCapWarning` and sets ``capped``.  With
    ``depth`` exactly ``depth + 2`` points are produced.  The orbit also
    stops early if it reaches a floating point fixed point.
    """
    if x not in beta.interval:
        raise OutOfRange(f"{x!r} is outside the interval of {beta!r}")
    s0 = beta.s0
    if x == s0:
        return Lattice(x, s0, _readonly([x]), _readonly([]), 0, 0.0)
    if depth is not None and depth < 0:
        raise InvalidParameter("depth must be nonnegative")

    threshold = tol.atol * max(1.0, abs(x - s0))
    n_max = depth + 1 if depth is not None else tol.k_max + 1
    pts = [float(x)]
    cur = float(x)
    done = False
    for _ in range(n_max):
        nxt = beta.forward(cur)
        if not math.isfinite(nxt):
            raise NonFiniteSample(f"beta({cur!r}) = {nxt!r}")
        if nxt == cur:
            done = True
            break
        if nxt not in beta.interval:
            raise DepthExceeded(f"orbit of {x!r} left the interval at {nxt!r}")
        if abs(nxt - s0) >= abs(cur - s0) or (nxt - s0) * (cur - s0) < 0:
            raise DepthExceeded(f"orbit of {x!r} does not approach s0 monotonically at {nxt!r}")
        pts.append(nxt)
        cur = nxt
        if depth is None and abs(nxt - s0) <= threshold:
            done = True
            break
    capped = depth is None and not done
    if capped:
        warnings.warn(
            f"orbit of {x!r} truncated at k_max={tol.k_max} with gap {abs(cur - s0):.3e}",
            TruncationCapWarning,
            stacklevel=2,
        )
    if len(pts) == 1:
        # the base point itself is numerically fixed
        return Lattice(x, s0, _readonly(pts), _readonly([]), 0, abs(x - s0))
    points = np.array(pts)
    weights = points[:-1] - points[1:]
    return Lattice(
        base=float(x),
        s0=s0,
        points=_readonly(points),
        weights=_readonly(weights),
        depth=len(pts) - 2,
        tail_gap=abs(pts[-1] - s0),
        capped=capped,
    )
