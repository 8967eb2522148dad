"""Tridiagonal eigensolvers.

:func:`tridiagonal_eigh` is implicit QL with Wilkinson shifts.  The weighted
pencils coming from lattice discretizations are solved by Sturm-count
bisection (:func:`pencil_eigenvalues`) with inverse iteration for the
eigenvectors, which keeps relative accuracy on strongly graded problems.

The QL deflation test compares each off-diagonal entry with its two diagonal
neighbours, so graded matrices (large entries toward the bottom right, as
produced by lattices accumulating at ``s0``) keep their small eigenvalues to
high relative accuracy.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import EigenNoConvergence


def tridiagonal_eigh(diag, off, max_sweeps: int = 50, vectors: bool = True, relative: bool = True):
    """Eigenpairs of the symmetric tridiagonal matrix ``(diag, off)``.

    Parameters
    ----------
    diag : array_like, shape (n,)
    off : array_like, shape (n - 1,)
        Sub/super diagonal.
    max_sweeps : int
        QL sweeps allowed per eigenvalue before giving up.
    relative : bool
        Deflate against the neighbouring diagonal entries (default) or
        against the norm of the whole matrix.  The relative test preserves
        small eigenvalues of matrices graded toward one end but may stall
        when large entries sit in the middle; the norm test always converges
        and is accurate relative to the largest eigenvalue only.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors, ``v[:, i]`` belonging to ``w[i]``.

    Raises
    ------
    EigenNoConvergence
        When an eigenvalue needs more than ``max_sweeps`` sweeps.
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = np.asarray(off, dtype=float)
    z = np.eye(n) if vectors else None
    eps = np.finfo(float).eps
    norm = float(np.max(np.abs(d)) + 2.0 * np.max(np.abs(e), initial=0.0)) if n else 0.0

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                ref = abs(d[m]) + abs(d[m + 1]) if relative else norm
                if abs(e[m]) <= eps * ref:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                raise EigenNoConvergence(f"eigenvalue {l} not converged after {max_sweeps} sweeps")
            sweeps += 1

            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zi = z[:, i].copy()
                    zi1 = z[:, i + 1]
                    z[:, i] = c * zi - s * zi1
                    z[:, i + 1] = s * zi + c * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    w = d[order]
    if z is None:
        return w
    return w, z[:, order]


# --- relatively accurate refinement for diagonally dominant pencils ------------
#
# The pencil is  A u = lam W u  with A tridiagonal, A[i, i+1] = -off[i] (off > 0)
# and A[i, i] = off[i-1] + off[i] + excess[i].  Carrying ``excess`` instead of the
# diagonal avoids the cancellation that destroys small eigenvalues when the
# off-diagonals span many orders of magnitude.  Pivots of A - x W are tracked
# as p_i = off[i] + sigma_i with
#     sigma_i = excess[i] - x w_i + off[i-1] sigma_{i-1} / p_{i-1}.


def _pivots(off, excess, weights, x, floor=None):
    """Pivots of ``A - x W`` for a vector of shifts ``x`` (one row per shift).

    Exact zero pivots become ``-floor[i]`` (default: the smallest normal number).
    """
    n = excess.size
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tiny = np.finfo(float).tiny
    piv = np.empty((x.size, n))
    sigma = excess[0] - x * weights[0]
    for i in range(n):
        if i > 0:
            sigma = excess[i] - x * weights[i] + off[i - 1] * sigma / p
        p = sigma + (off[i] if i < n - 1 else 0.0)
        if floor is None:
            p = np.where(p == 0.0, -tiny, p)
        else:
            p = np.where(p == 0.0, -floor[i], p)
        piv[:, i] = p
    return piv


def sturm_count(off, excess, weights, x):
    """Number of eigenvalues of the pencil below each shift in ``x``."""
    return np.count_nonzero(_pivots(off, excess, weights, x) < 0.0, axis=1)


def pencil_bounds(off, excess, weights):
    n = excess.size
    left = np.concatenate([[0.0], off])
    right = np.concatenate([off, [0.0]])
    diag = left + right + excess
    radius = left + right
    lo = np.min((diag - radius) / weights)
    hi = np.max((diag + radius) / weights)
    pad = 1e-12 * max(abs(lo), abs(hi)) + np.finfo(float).tiny
    return lo - pad, hi + pad


def pencil_eigenvalues(off, excess, weights, max_steps: int = 2200):
    """All eigenvalues of the pencil by simultaneous Sturm bisection, ascending.

    Each bracket is halved until its ends are adjacent floating point
    numbers, so every eigenvalue comes out to its full relative accuracy.
    """
    off = np.asarray(off, dtype=float)
    excess = np.asarray(excess, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = excess.size
    lo_b, hi_b = pencil_bounds(off, excess, weights)
    lo = np.full(n, lo_b)
    hi = np.full(n, hi_b)
    index = np.arange(n)
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        # bisect through zero first and then geometrically, so tiny
        # eigenvalues do not need a thousand linear halvings
        same_sign = (lo > 0) & (hi > 0) | (lo < 0) & (hi < 0)
        geo = np.sign(lo) * np.sqrt(np.abs(lo) * np.abs(hi))
        use_geo = same_sign & (np.abs(hi) > 4.0 * np.abs(lo)) | same_sign & (np.abs(lo) > 4.0 * np.abs(hi))
        mid = np.where(use_geo, geo, mid)
        mid = np.where(~same_sign & (lo < 0) & (hi > 0), 0.0, mid)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        below = sturm_count(off, excess, weights, mid) > index
        hi = np.where(active & below, mid, hi)
        lo = np.where(active & ~below, mid, lo)
    else:
        raise EigenNoConvergence("Sturm bisection did not close its brackets")
    return 0.5 * (lo + hi)


def pencil_inverse_iteration(off, excess, weights, lam, start, steps: int = 3):
    """Refine an eigenvector of the pencil for the eigenvalue ``lam``.

    Solves ``(A - lam W) x = W v`` with the factorisation in the excess
    representation; ``start`` seeds the iteration.  The result is
    normalised so that ``x^T W x = 1``.
    """
    off = np.asarray(off, dtype=float)
    n = excess.size
    n_off = np.concatenate([[0.0], off]) + np.concatenate([off, [0.0]])
    floor = np.finfo(float).eps ** 2 * (n_off + np.abs(excess) + abs(lam) * weights)
    piv = _pivots(off, excess, weights, lam, floor)[0]
    v = np.asarray(start, dtype=float).copy()
    for _ in range(steps):
        rhs = weights * v
        y = np.empty(n)
        y[0] = rhs[0]
        for i in range(1, n):
            y[i] = rhs[i] + off[i - 1] * y[i - 1] / piv[i - 1]
        x = np.empty(n)
        x[-1] = y[-1] / piv[-1]
        for i in range(n - 2, -1, -1):
            x[i] = (y[i] + off[i] * x[i + 1]) / piv[i]
        scale = math.sqrt(math.fsum(weights * x * x))
        if not math.isfinite(scale) or scale == 0.0:
            break
        v = x / scale
    return v
