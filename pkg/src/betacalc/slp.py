"""beta-Sturm-Liouville problems on truncated lattices.

The operator is ``l y = -w D_{beta^-1} D_beta y + r y`` with the pointwise
multiplier ``w = D_beta beta^-1``.  On an orbit ``t_0 = b, t_1, ...`` with
gaps ``h_k = t_k - t_{k+1}`` it reads

    h_k (l y)(t_k) = (y_k - y_{k+1}) / h_k - (y_{k-1} - y_k) / h_{k-1} + h_k r_k y_k,

so multiplying each row by the beta-measure ``|h_k|`` of its point gives a
symmetric tridiagonal matrix ``W L``.  Boundary conditions are imposed by
eliminating the ghost value at ``beta^-1(b)`` (or dropping ``y(b)`` for a
Dirichlet condition) and the value at the deepest point, which stands in for
``y(s0)``; both touch diagonal entries only.

For a problem on ``(a, b)`` with ``a < s0 < b`` the two orbits share one
value at ``s0``.  That value carries no beta-measure, and the only
elimination that keeps ``W L`` symmetric is the flux balance
``(y_K^b - y(s0)) / |h_K^b| = (y(s0) - y_K^a) / |h_K^a|``; the shared value is
therefore the gap-weighted mean of the two deepest orbit values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .beta_map import DEFAULT_TOL, BetaMap, Tolerances, invert
from .eigen import pencil_eigenvalues, pencil_inverse_iteration, tridiagonal_eigh
from .errors import DegenerateBC, InvalidParameter, OutOfRange, RealityViolation
from .functions import Constant
from .quantum_calc import (
    LatticeFunction,
    Support,
    beta_derivative,
    beta_inverse_derivative,
    csum,
    inner_product,
    inverse_weight,
    make_support,
)
from .special import evaluate

__all__ = [
    "SlpProblem",
    "DiscreteOperator",
    "SlpSolution",
    "SelfAdjointReport",
    "apply_ell",
    "apply_ell_lattice",
    "bracket",
    "lagrange_residual",
    "assemble",
    "solve",
    "check_self_adjoint",
    "particular_solution_residuals",
]


def _bc(pair, n1, n2):
    c1, c2 = (float(pair[0]), float(pair[1]))
    if abs(c1) + abs(c2) == 0.0:
        raise DegenerateBC(f"boundary condition needs |{n1}| + |{n2}| != 0, got {n1} = {n2} = 0")
    return c1, c2


@dataclass(frozen=True, eq=False)
class SlpProblem:
    """``l y = lambda y`` on ``(s0, b)`` (``a`` is None) or on ``(a, b)``.

    ``bc_left = (a1, a2)`` acts at ``s0`` (one-sided problems) or at ``a``:
    ``a1 y + a2 D_{beta^-1} y = 0``.  ``bc_right = (b1, b2)`` acts at ``b``.
    ``depth`` fixes the number of summed orbit points minus one; without it
    orbits are truncated by ``tol``.
    """

    beta: BetaMap
    b: float
    a: Optional[float] = None
    r: object = field(default_factory=lambda: Constant(0.0))
    bc_left: tuple = (1.0, 0.0)
    bc_right: tuple = (1.0, 0.0)
    tol: Tolerances = DEFAULT_TOL
    depth: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "bc_left", _bc(self.bc_left, "a1", "a2"))
        object.__setattr__(self, "bc_right", _bc(self.bc_right, "b1", "b2"))
        s0 = self.beta.s0
        if self.b == s0:
            raise InvalidParameter("b must differ from the fixed point s0")
        if self.a is not None:
            if self.a == s0:
                object.__setattr__(self, "a", None)
            elif not self.a < s0 < self.b:
                raise InvalidParameter(f"two-sided problems need a < s0 < b, got a={self.a}, b={self.b}")
        if self.depth is not None and self.depth < 1:
            raise InvalidParameter("depth must be at least 1")

    @property
    def two_sided(self) -> bool:
        return self.a is not None

    def support(self) -> Support:
        s0 = self.beta.s0
        if self.two_sided:
            lo, hi = self.a, self.b
        elif self.b > s0:
            lo, hi = s0, self.b
        else:
            lo, hi = self.b, s0
        sup = make_support(self.beta, lo, hi, self.tol, depth=self.depth)
        for lat in sup.lattices:
            if lat.depth < 1:
                raise InvalidParameter(f"orbit of {lat.base} is too shallow (depth {lat.depth})")
        return sup


@dataclass(frozen=True)
class _Orbit:
    """How the unknowns of one orbit map to lattice values."""

    index: tuple  # unknown index per summed point, -1 where y vanishes (Dirichlet)
    ghost_factor: Optional[float]  # ghost value = factor * y_0
    tail_factor: Optional[float]  # one-sided: y_tail = factor * y_K


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """``L`` in tridiagonal form: ``(L y)_k = sub[k-1] y_{k-1} + diag[k] y_k + super[k] y_{k+1}``.

    ``weights`` are the beta-measures of the unknowns' points, and
    ``symmetry_residual`` is ``max |W L - (W L)^T|`` over the off-diagonal
    pairs, computed from the stored (nonsymmetric) ``L``.
    """

    n: int
    diag: np.ndarray
    sub: np.ndarray
    super: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    symmetry_residual: float
    scale: float
    problem: SlpProblem
    support: Support
    orbits: tuple
    coupling: Optional[float] = None  # two-sided: share of the b-side value in y(s0)
    wl_off: Optional[np.ndarray] = None  # -(W L)[i, i+1]
    excess: Optional[np.ndarray] = None  # (W L)[i, i] minus the neighbouring wl_off

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.n > 1:
            m += np.diag(self.super, 1) + np.diag(self.sub, -1)
        return m

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.super * v[1:]
        out[1:] += self.sub * v[:-1]
        return out

    def symmetrized(self):
        """Diagonal and off-diagonal of ``S = W^{1/2} L W^{-1/2}``."""
        sw = np.sqrt(self.weights)
        off = np.asarray(self.wl_off)
        wl_diag = np.asarray(self.excess).copy()
        wl_diag[:-1] += off
        wl_diag[1:] += off
        return wl_diag / self.weights, -off / (sw[:-1] * sw[1:])

    def unknowns(self, f: LatticeFunction) -> np.ndarray:
        """The values of ``f`` at the unknowns' points, in the order of ``points``."""
        out = np.empty(self.n, dtype=complex)
        for j, orb in enumerate(self.orbits):
            for k, idx in enumerate(orb.index):
                if idx >= 0:
                    out[idx] = f.values[j][k]
        return out

    def extend(self, u) -> LatticeFunction:
        """Lattice function (with ghost and tail values) from unknown values ``u``."""
        u = np.asarray(u)
        values, ghosts = [], []
        for lat, orb in zip(self.support.lattices, self.orbits):
            v = np.zeros(lat.points.size, dtype=complex)
            idx = np.array(orb.index)
            live = idx >= 0
            v[: idx.size][live] = u[idx[live]]
            values.append(v)
            ghosts.append(0j if orb.ghost_factor is None else orb.ghost_factor * v[0])
        if self.coupling is None:
            orb = self.orbits[0]
            values[0][-1] = orb.tail_factor * values[0][-2]
            s0_value = values[0][-1]
        else:
            s0_value = self.coupling * values[0][-2] + (1.0 - self.coupling) * values[1][-2]
            values[0][-1] = s0_value
            values[1][-1] = s0_value
        return LatticeFunction(self.support, tuple(values), s0_value, tuple(ghosts))


def _real_potential(problem: SlpProblem, t: float) -> float:
    v = complex(problem.r(t))
    if v.imag != 0.0:
        raise RealityViolation(f"potential r({t!r}) = {v!r} is not real")
    return v.real


def assemble(problem: SlpProblem) -> DiscreteOperator:
    """Discretize the problem into a tridiagonal ``L`` with symmetric ``W L``."""
    support = problem.support()
    blocks = []
    bcs = [problem.bc_right] + ([problem.bc_left] if problem.two_sided else [])

    for lat, ghost, (c1, c2) in zip(support.lattices, support.ghosts, bcs):
        h = np.asarray(lat.weights)  # signed gaps t_k - t_{k+1}
        K = lat.depth
        r = np.array([_real_potential(problem, float(t)) for t in lat.summed_points])
        # pointwise stencil of l, row k: coefficients of y_{k-1}, y_k, y_{k+1}
        with np.errstate(divide="ignore", over="ignore"):
            lower = np.empty(K + 1)
            lower[1:] = -1.0 / (h[:-1] * h[1:])
            lower[0] = 0.0
            upper = -1.0 / (h * h)
            center = np.empty(K + 1)
            center[1:] = (1.0 / h[1:] + 1.0 / h[:-1]) / h[1:] + r[1:]
            center[0] = 1.0 / (h[0] * h[0]) + r[0]
        if not (np.all(np.isfinite(upper)) and np.all(np.isfinite(center))):
            raise InvalidParameter(
                f"orbit of {lat.base!r} has gaps too small for a second difference; use a shallower depth")

        # the same rows of W L as off-diagonal magnitudes plus row excess
        g = np.abs(h)
        wl_off = 1.0 / g[:-1]
        excess = g * r

        ghost_factor = None
        keep_first = c2 != 0.0
        if keep_first:
            # D_{beta^-1} y(t_0) = -(c1/c2) y_0 replaces the ghost difference
            center[0] += (c1 / c2) / h[0]
            excess[0] += math.copysign(1.0, h[0]) * (c1 / c2)
            if ghost is not None:
                ghost_factor = 1.0 - (ghost - lat.points[0]) * (c1 / c2)
        else:
            excess[1] += 1.0 / g[0]
        blocks.append(dict(lat=lat, r=r, lower=lower, center=center, upper=upper, keep_first=keep_first,
                           ghost_factor=ghost_factor, wl_off=wl_off, excess=excess))

    # Row K loses its coupling to the deepest value; it is rebuilt from scratch
    # rather than corrected, since 1/h_K^2 dwarfs what remains near s0.
    def last_row(blk, tail_term):
        h = blk["lat"].weights
        return tail_term + 1.0 / (h[-1] * h[-2]) + blk["r"][-1]

    if problem.two_sided:
        gb = abs(float(support.lattices[0].weights[-1]))
        ga = abs(float(support.lattices[1].weights[-1]))
        coupling = ga / (ga + gb)  # y(s0) = coupling * y_K^b + (1 - coupling) * y_K^a
        cross = 1.0 / (ga + gb)
        tail_factors = [None, None]
        for blk, g in zip(blocks, (gb, ga)):
            blk["center"][-1] = last_row(blk, cross / g)
            blk["cross"] = -cross / g
        cross_off = cross
    else:
        coupling = None
        a1, a2 = problem.bc_left
        blk = blocks[0]
        lat = blk["lat"]
        K = lat.depth
        delta = float(lat.points[K + 1] - lat.points[K])
        denom = a1 * delta + a2
        if denom == 0.0 or not math.isfinite(denom):
            raise DegenerateBC(f"left boundary elimination is singular (a1 * gap + a2 = {denom})")
        c = a2 / denom
        hK = float(lat.weights[-1])
        # y_{K+1} = c y_K, and 1 - c = a1 delta / denom without cancellation
        blk["center"][-1] = last_row(blk, (a1 * delta / denom) / (hK * hK))
        blk["excess"][-1] += (a1 * delta / denom) / abs(hK)
        tail_factors = [c]

    # global order: orbit of b from b toward s0, then orbit of a from s0 toward a
    index_maps = []
    sequence = []  # (block id, k) in global order
    for bi, blk in enumerate(blocks):
        K = blk["lat"].depth
        ks = list(range(0 if blk["keep_first"] else 1, K + 1))
        if bi == 1:
            ks = ks[::-1]
        sequence.extend((bi, k) for k in ks)
    n = len(sequence)
    if n == 0:
        raise InvalidParameter("no unknowns left after boundary elimination")
    pos = {key: i for i, key in enumerate(sequence)}
    for bi, blk in enumerate(blocks):
        K = blk["lat"].depth
        index_maps.append(tuple(pos.get((bi, k), -1) for k in range(K + 1)))

    diag = np.empty(n)
    sup = np.zeros(max(n - 1, 0))
    sub = np.zeros(max(n - 1, 0))
    w = np.empty(n)
    pts = np.empty(n)
    wl_off = np.zeros(max(n - 1, 0))
    excess = np.empty(n)
    for i, (bi, k) in enumerate(sequence):
        blk = blocks[bi]
        diag[i] = blk["center"][k]
        excess[i] = blk["excess"][k]
        w[i] = abs(float(blk["lat"].weights[k]))
        pts[i] = blk["lat"].points[k]
    for i in range(n - 1):
        (b1_, k1), (b2_, k2) = sequence[i], sequence[i + 1]
        if b1_ == b2_:
            blk = blocks[b1_]
            if k2 == k1 + 1:
                sup[i] = blk["upper"][k1]
                sub[i] = blk["lower"][k2]
                wl_off[i] = blk["wl_off"][k1]
            else:  # reversed a-orbit: k2 == k1 - 1
                sup[i] = blk["lower"][k1]
                sub[i] = blk["upper"][k2]
                wl_off[i] = blk["wl_off"][k2]
        else:
            sup[i] = blocks[b1_]["cross"]
            sub[i] = blocks[b2_]["cross"]
            wl_off[i] = cross_off

    wl_diag = np.abs(w * diag)
    if n > 1:
        asym = np.abs(w[:-1] * sup - w[1:] * sub)
        symmetry_residual = float(asym.max())
        scale = float(max(wl_diag.max(), np.abs(w[:-1] * sup).max()))
    else:
        symmetry_residual = 0.0
        scale = float(wl_diag.max())

    orbits = tuple(
        _Orbit(index_maps[bi], blocks[bi]["ghost_factor"], tail_factors[bi])
        for bi in range(len(blocks))
    )
    for arr in (diag, sup, sub, w, pts, wl_off, excess):
        arr.flags.writeable = False
    return DiscreteOperator(n, diag, sub, sup, w, pts, symmetry_residual, scale, problem, support,
                            orbits, coupling, wl_off, excess)


# --- pointwise operator, bracket, Lagrange identity ---------------------------


def _locate(y: LatticeFunction, t: float, orbit: Optional[int] = None):
    lats = y.support.lattices
    candidates = range(len(lats)) if orbit is None else [orbit]
    for j in candidates:
        if t == y.support.beta.s0:
            return j, lats[j].points.size - 1
        hit = np.flatnonzero(lats[j].points == t)
        if hit.size:
            return j, int(hit[0])
    raise OutOfRange(f"{t!r} is not a point of the lattice")


def _neighbour(y: LatticeFunction, j: int, k: int):
    """Point and value of ``beta^-1(t_k)`` on orbit ``j`` (the ghost for k = 0)."""
    lat = y.support.lattices[j]
    if k > 0:
        return float(lat.points[k - 1]), y.values[j][k - 1]
    ghost_t = y.support.ghosts[j]
    if ghost_t is None or y.ghost_values is None or y.ghost_values[j] is None:
        raise OutOfRange(f"no ghost value at beta^-1({lat.points[0]!r})")
    return ghost_t, y.ghost_values[j]


def _ell_at(y: LatticeFunction, j: int, k: int, problem: SlpProblem) -> complex:
    lat = y.support.lattices[j]
    if k >= lat.points.size - 1:
        raise OutOfRange("l_beta needs beta(t); the deepest point has no successor")
    t = float(lat.points[k])
    tn = float(lat.points[k + 1])
    tp, yp = _neighbour(y, j, k)
    yk, yn = y.values[j][k], y.values[j][k + 1]
    d_here = (yn - yk) / (tn - t)
    d_prev = (yk - yp) / (t - tp)
    w = (t - tp) / (tn - t)
    return -w * (d_here - d_prev) / (t - tp) + complex(problem.r(t)) * yk


def apply_ell(f, t: float, problem: SlpProblem) -> complex:
    """``(l_beta f)(t) = -w(t) D_{beta^-1}[D_beta f](t) + r(t) f(t)``.

    ``f`` is either a callable on the interval or a :class:`LatticeFunction`
    (then ``t`` must be one of its lattice points with both neighbours).
    """
    if isinstance(f, LatticeFunction):
        j, k = _locate(f, t)
        return _ell_at(f, j, k, problem)
    beta, tol = problem.beta, problem.tol
    inner = beta_inverse_derivative(lambda s: beta_derivative(f, s, beta, tol), t, beta, tol)
    return -inverse_weight(t, beta, tol) * inner + complex(problem.r(t)) * complex(f(t))


def apply_ell_lattice(y: LatticeFunction, problem: SlpProblem) -> LatticeFunction:
    """``l_beta y`` at every summed point; deepest points (zero weight) get 0."""
    values = []
    for j, lat in enumerate(y.support.lattices):
        v = np.zeros(lat.points.size, dtype=complex)
        for k in range(lat.points.size - 1):
            v[k] = _ell_at(y, j, k, problem)
        values.append(v)
    return LatticeFunction(y.support, tuple(values), 0j, None)


def _dinv(y: LatticeFunction, j: int, k: int) -> complex:
    t = float(y.support.lattices[j].points[k])
    tp, yp = _neighbour(y, j, k)
    return (y.values[j][k] - yp) / (t - tp)


def _bracket_at(y, z, j, k):
    return y.values[j][k] * _dinv(z, j, k) - z.values[j][k] * _dinv(y, j, k)


def bracket(y: LatticeFunction, z: LatticeFunction, t: float, problem: SlpProblem,
            orbit: Optional[int] = None) -> complex:
    """``[y, z](t) = y(t) D_{beta^-1} z(t) - z(t) D_{beta^-1} y(t)``.

    At ``t = s0`` the deepest point of the orbit (the first one unless
    ``orbit`` is given) is used with its last-gap difference quotient.
    """
    y._check(z)
    j, k = _locate(y, t, orbit)
    return _bracket_at(y, z, j, k)


def _lagrange_sides(y: LatticeFunction, z: LatticeFunction, problem: SlpProblem):
    y._check(z)
    ly = apply_ell_lattice(y, problem)
    lz = apply_ell_lattice(z, problem)
    w = y.support.weights
    integral = csum(w * (ly.flat_values * np.conj(z.flat_values) - y.flat_values * np.conj(lz.flat_values)))
    zc = z.conj()
    sup = y.support
    base = [_bracket_at(y, zc, j, 0) for j in range(len(sup.lattices))]
    if problem.two_sided:
        boundary = base[0] - base[1]
    else:
        tail = _bracket_at(y, zc, 0, sup.lattices[0].points.size - 1)
        boundary = sup.signs[0] * (base[0] - tail)
    return integral, boundary


def lagrange_residual(y: LatticeFunction, z: LatticeFunction, problem: SlpProblem) -> float:
    """``|int (l y conj z - y conj(l z)) d_beta - ([y, conj z](b) - [y, conj z](s0 or a))|``."""
    integral, boundary = _lagrange_sides(y, z, problem)
    return abs(integral - boundary)


# --- spectra ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SlpSolution:
    eigenvalues: np.ndarray
    eigenfunctions: tuple
    residuals: np.ndarray
    gram_offdiag: float
    ties: tuple
    operator: DiscreteOperator

    @property
    def residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0

    def to_json(self, modes: Optional[int] = None) -> dict:
        modes = len(self.eigenfunctions) if modes is None else min(modes, len(self.eigenfunctions))
        points = []
        sup = self.operator.support
        for j, lat in enumerate(sup.lattices):
            for k, t in enumerate(lat.points):
                points.append({
                    "orbit": j,
                    "k": k,
                    "t": float(t),
                    "value": [float(phi.values[j][k].real) for phi in self.eigenfunctions[:modes]],
                })
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "gram_offdiag": self.gram_offdiag,
            "residual": self.residual,
            "eigenfunctions": points,
        }


def _equation_points(op: DiscreteOperator):
    for j, orb in enumerate(op.orbits):
        for k, idx in enumerate(orb.index):
            if idx >= 0:
                yield j, k


def solve(problem: SlpProblem, max_sweeps: int = 50) -> SlpSolution:
    """All eigenpairs of the discretized problem, ascending, beta-orthonormal."""
    op = assemble(problem)
    d, e = op.symmetrized()
    _, U = tridiagonal_eigh(d, e, max_sweeps=max_sweeps, relative=False)
    # QL is backward stable, i.e. accurate relative to the largest eigenvalue
    # only; the spectrum of a lattice operator spans many decades, so each pair
    # is polished in the excess representation.
    lam = pencil_eigenvalues(op.wl_off, op.excess, op.weights)
    sw = np.sqrt(op.weights)
    V = U / sw[:, None]
    for c in range(lam.size):
        V[:, c] = pencil_inverse_iteration(op.wl_off, op.excess, op.weights, lam[c], V[:, c])

    ties = []
    i = 0
    while i < lam.size:
        jend = i + 1
        while jend < lam.size and abs(lam[jend] - lam[i]) <= 1e-10 * max(1.0, abs(lam[i])):
            jend += 1
        if jend - i > 1:
            ties.append(tuple(range(i, jend)))
            q, _ = np.linalg.qr(V[:, i:jend] * sw[:, None])
            V[:, i:jend] = q / sw[:, None]
        i = jend

    for c in range(V.shape[1]):
        big = np.argmax(np.abs(V[:, c]))
        if V[big, c] < 0:
            V[:, c] = -V[:, c]
        V[:, c] /= math.sqrt(math.fsum(op.weights * V[:, c] ** 2))

    funcs = tuple(op.extend(V[:, c]) for c in range(V.shape[1]))
    points = list(_equation_points(op))
    residuals = np.array([
        max(abs(_ell_at(phi, j, k, problem) - lam[c] * phi.values[j][k]) for j, k in points)
        for c, phi in enumerate(funcs)
    ])
    flat = np.array([phi.flat_values for phi in funcs])
    gram = (flat * op.support.weights) @ flat.conj().T
    off = gram - np.diag(np.diag(gram))
    lam.flags.writeable = False
    return SlpSolution(lam, funcs, residuals, float(np.abs(off).max(initial=0.0)), tuple(ties), op)


@dataclass(frozen=True)
class SelfAdjointReport:
    passed: bool
    trials: int
    inner_residual: float
    symmetry_residual: float
    violation: Optional[str] = None

    def to_dict(self):
        return {
            "passed": self.passed,
            "trials": self.trials,
            "inner_residual": self.inner_residual,
            "symmetry_residual": self.symmetry_residual,
            "violation": self.violation,
        }


def check_self_adjoint(problem: SlpProblem, trials: int = 100, seed: int = 0,
                       threshold: float = 1e-9) -> SelfAdjointReport:
    """Compare ``<l y, z>`` with ``<y, l z>`` for random pairs obeying the boundary conditions.

    Residuals are relative: the inner product difference is divided by
    ``|l y| |z| + |y| |l z|`` and the matrix asymmetry by ``max |W L|``.
    """
    try:
        op = assemble(problem)
    except RealityViolation:
        return SelfAdjointReport(False, trials, math.nan, math.nan, "RealityViolation")
    sym = op.symmetry_residual / op.scale
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        u = rng.normal(size=op.n) + 1j * rng.normal(size=op.n)
        v = rng.normal(size=op.n) + 1j * rng.normal(size=op.n)
        y, z = op.extend(u), op.extend(v)
        ly, lz = apply_ell_lattice(y, problem), apply_ell_lattice(z, problem)
        diff = abs(inner_product(ly, z) - inner_product(y, lz))

        def norm(f):
            return math.sqrt(abs(inner_product(f, f)))

        scale = norm(ly) * norm(z) + norm(y) * norm(lz)
        worst = max(worst, diff / scale if scale else diff)
    passed = worst <= threshold and sym <= threshold
    return SelfAdjointReport(passed, trials, worst, sym)


def particular_solution_residuals(kind: str, z: complex, problem: SlpProblem) -> dict:
    """Test ``l y = lambda y`` for ``y = kind_{z,beta}`` on the problem lattice.

    Requires ``D_beta beta^-1`` to equal a constant ``k`` (Hahn and Jackson
    maps, ``k = 1/q``).  Both candidate eigenvalues ``+k z^2`` and ``-k z^2``
    are tried; the returned dict holds the largest pointwise residual of
    each and the sign that vanishes, if any.
    """
    beta = problem.beta
    if beta.family not in ("hahn", "jackson"):
        raise InvalidParameter("a constant D_beta beta^-1 is only known for Hahn and Jackson maps")
    kconst = 1.0 / beta.params["q"]
    sup = problem.support()
    tol = problem.tol
    y = LatticeFunction.sample(lambda t: evaluate(kind, z, t, beta, tol), sup)
    out = {"k": kconst}
    for label, lam in (("+", kconst * z * z), ("-", -kconst * z * z)):
        res = 0.0
        for j, lat in enumerate(sup.lattices):
            for k in range(lat.points.size - 1):
                res = max(res, abs(_ell_at(y, j, k, problem) - lam * y.values[j][k]))
        out[label] = res
    best = min(("+", "-"), key=lambda s: out[s])
    out["matching_sign"] = best if out[best] <= 1e-8 * max(1.0, abs(kconst * z * z)) else None
    return out
