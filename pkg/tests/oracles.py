"""Independent reference computations used by the test suite.

Nothing here imports the library's numerical kernels: each oracle recomputes
its quantity from first principles with plain loops and stdlib arithmetic.
"""
import math


def geometric_moment(q, n):
    """Jackson integral of t**n over [0, 1]: (1 - q) * sum q**k * q**(n k) = (1 - q) / (1 - q**(n + 1))."""
    return (1.0 - q) / (1.0 - q ** (n + 1))


def orbit(forward, x, count):
    pts = [x]
    for _ in range(count):
        pts.append(forward(pts[-1]))
    return pts


def orbit_sum(f, forward, x, count):
    """Brute-force sum of (t_k - t_{k+1}) f(t_k) over ``count`` orbit steps."""
    pts = orbit(forward, x, count)
    return math.fsum((pts[k] - pts[k + 1]) * f(pts[k]) for k in range(count)) if not isinstance(
        f(pts[0]), complex) else complex(
        math.fsum(((pts[k] - pts[k + 1]) * f(pts[k])).real for k in range(count)),
        math.fsum(((pts[k] - pts[k + 1]) * f(pts[k])).imag for k in range(count)))


def bisect_inverse(forward, u, lo, hi, steps=200):
    """Solve forward(t) = u on [lo, hi] for increasing ``forward``."""
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if forward(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def jacobi_eigenvalues(matrix, tol=1e-15, max_rotations=200000):
    """Cyclic Jacobi rotations on a dense symmetric matrix (list of lists).

    An entry is annihilated unless ``|a_ij| <= tol * sqrt(|a_ii a_jj|)``; this
    relative test is what lets Jacobi resolve tiny eigenvalues of graded
    matrices to high relative accuracy.
    """
    a = [list(map(float, row)) for row in matrix]
    n = len(a)
    rotations = 0
    while True:
        changed = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0 or abs(apq) <= tol * math.sqrt(abs(a[p][p] * a[q][q])):
                    continue
                changed = True
                rotations += 1
                if rotations > max_rotations:
                    raise RuntimeError("Jacobi oracle did not converge")
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                a[p][q] = a[q][p] = 0.0
        if not changed:
            return sorted(a[i][i] for i in range(n))




def mp_pencil_eigenvalues(off, excess, weights, dps=60):
    """Eigenvalues of ``W^-1 A`` in extended precision.

    ``A`` is symmetric tridiagonal with off-diagonal ``-off`` and diagonal
    ``off[i-1] + off[i] + excess[i]``; the diagonal sum is formed exactly
    in ``mpmath`` so no information is lost before the eigensolve.
    """
    import mpmath

    with mpmath.workdps(dps):
        n = len(weights)
        o = [mpmath.mpf(float(x)) for x in off]
        s = mpmath.matrix(n, n)
        root = [mpmath.sqrt(mpmath.mpf(float(w))) for w in weights]
        for i in range(n):
            d = mpmath.mpf(float(excess[i]))
            if i > 0:
                d += o[i - 1]
            if i < n - 1:
                d += o[i]
            s[i, i] = d / (root[i] * root[i])
            if i < n - 1:
                s[i, i + 1] = s[i + 1, i] = -o[i] / (root[i] * root[i + 1])
        vals = mpmath.eigsy(s, eigvals_only=True)
        return sorted(float(v) for v in vals)


def mp_slp_spectrum(orbits, ghosts, bcs, r, two_sided, dps=50):
    """Eigenvalues of the lattice Sturm-Liouville discretization, from scratch in ``mpmath``.

    ``orbits`` holds the orbit point lists (b first, then a), each ending in
    the point that stands in for s0; ``ghosts`` the preimages of the base
    points; ``bcs`` the (c1, c2) pairs at b and a, plus the s0 pair for
    one-sided problems; ``r`` the potential.  Every lattice value is written
    as a linear combination of the unknowns, the pointwise operator is
    applied to those combinations and the symmetrized matrix is
    diagonalized with ``mpmath.eigsy``.
    """
    import mpmath

    with mpmath.workdps(dps):
        mpf = mpmath.mpf
        pts = [[mpf(float(t)) for t in orb] for orb in orbits]
        unknown = []
        for j, orb in enumerate(pts):
            c1, c2 = bcs[j]
            first = 1 if c2 == 0 else 0
            ks = list(range(first, len(orb) - 1))
            unknown.extend((j, k) for k in (ks if j == 0 else ks[::-1]))
        index = {key: i for i, key in enumerate(unknown)}
        n = len(unknown)

        def unit(i):
            v = [mpf(0)] * n
            v[i] = mpf(1)
            return v

        def value(j, k):
            """Coefficient vector of y at orbit j, point k (k = -1 is the ghost)."""
            orb = pts[j]
            last = len(orb) - 1
            if (j, k) in index:
                return unit(index[(j, k)])
            if k == -1:
                c1, c2 = bcs[j]
                g = mpf(float(ghosts[j]))
                # c1 y0 + c2 (y0 - y_g) / (t0 - g) = 0
                factor = 1 + (orb[0] - g) * mpf(c1) / mpf(c2)
                return [factor * x for x in value(j, 0)]
            if k == last:
                if two_sided:
                    gb = abs(pts[0][-2] - pts[0][-1])
                    ga = abs(pts[1][-2] - pts[1][-1])
                    yb, ya = value(0, len(pts[0]) - 2), value(1, len(pts[1]) - 2)
                    return [(ga * x + gb * y) / (ga + gb) for x, y in zip(yb, ya)]
                a1, a2 = bcs[-1]
                delta = orb[last] - orb[last - 1]
                c = mpf(a2) / (mpf(a1) * delta + mpf(a2))
                return [c * x for x in value(j, last - 1)]
            return [mpf(0)] * n  # Dirichlet base point

        weights = []
        rows = []
        for j, k in unknown:
            orb = pts[j]
            t, tn = orb[k], orb[k + 1]
            tp = mpf(float(ghosts[j])) if k == 0 else orb[k - 1]
            yp, yk, yn = value(j, k - 1), value(j, k), value(j, k + 1)
            w = (t - tp) / (tn - t)
            rk = mpf(float(r(float(orbits[j][k]))))
            row = []
            for a, b_, c in zip(yp, yk, yn):
                d_here = (c - b_) / (tn - t)
                d_prev = (b_ - a) / (t - tp)
                row.append(-w * (d_here - d_prev) / (t - tp) + rk * b_)
            rows.append(row)
            weights.append(abs(t - tn))
        root = [mpmath.sqrt(x) for x in weights]
        s = mpmath.matrix(n, n)
        asym = mpf(0)
        for i in range(n):
            for m in range(n):
                s[i, m] = root[i] * rows[i][m] / root[m]
        for i in range(n):
            for m in range(i + 1, n):
                asym = max(asym, abs(s[i, m] - s[m, i]))
                s[i, m] = s[m, i] = (s[i, m] + s[m, i]) / 2
        vals = mpmath.eigsy(s, eigvals_only=True)
        return sorted(float(v) for v in vals), float(asym)
