import numpy as np
import pytest

from betacalc import BetaMap, Polynomial

MAPS = {
    "jackson0.3": BetaMap.jackson(0.3),
    "jackson0.5": BetaMap.jackson(0.5),
    "jackson0.9": BetaMap.jackson(0.9),
    "hahn": BetaMap.hahn(0.5, 1.0),
    "cubic": BetaMap.cubic(),
}

# (a, b) intervals straddling or touching s0 for each map
INTERVALS = {
    "jackson0.3": (0.0, 1.0),
    "jackson0.5": (-0.5, 1.0),
    "jackson0.9": (0.0, 1.5),
    "hahn": (1.5, 3.0),
    "cubic": (-0.6, 0.8),
}


def random_polynomials(count, seed, max_degree=6, complex_coeffs=False, center=0.0):
    """Random polynomials in ``t - center`` with coefficients in [-2, 2]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        deg = int(rng.integers(0, max_degree + 1))
        c = rng.uniform(-2, 2, deg + 1)
        if complex_coeffs:
            c = c + 1j * rng.uniform(-2, 2, deg + 1)
        shifted = np.polynomial.Polynomial(c)(np.polynomial.Polynomial((-center, 1.0)))
        out.append(Polynomial(tuple(shifted.coef)))
    return out


@pytest.fixture(params=sorted(MAPS))
def map_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
