"""Special functions: products, reciprocity and the difference identities.

The inverse-direction and second-order checks here use the forms obtained by
applying the inverse-direction product rule to the first-order identities;
they shift some arguments by ``beta`` or ``beta^-1``.
"""
import cmath
import math

import pytest

from betacalc import (
    BetaMap,
    Constant,
    NoConvergence,
    Polynomial,
    PoleEncountered,
    Tolerances,
    beta_derivative,
    beta_inverse_derivative,
    evaluate,
    exp_big,
    exp_small,
    invert,
    inverse_weight,
    special_function,
    trig,
)

JACKSON = BetaMap.jackson(0.5)
HAHN = BetaMap.hahn(0.5, 1.0)
CUBIC = BetaMap.cubic()
P = Polynomial((0.3, 0.2, -0.1))
CASES = [(JACKSON, 0.8), (HAHN, 3.5), (CUBIC, 0.7), (JACKSON, -0.6)]


def test_values_at_fixed_point():
    for beta in (JACKSON, HAHN, CUBIC):
        s0 = beta.s0
        assert exp_small(P, s0, beta) == 1.0
        assert exp_big(P, s0, beta) == 1.0
        assert trig("cos", P, s0, beta) == 1.0
        assert trig("Cos", P, s0, beta) == 1.0
        assert trig("sin", P, s0, beta) == 0.0
        assert trig("Sin", P, s0, beta) == 0.0


def test_zero_coefficient_gives_one():
    for t in (0.9, -0.3):
        assert exp_small(0.0, t, CUBIC) == 1.0
        assert exp_big(Constant(0.0), t, CUBIC) == 1.0


def test_product_against_sixty_factor_oracle():
    ref = 1.0
    for k in range(60):
        ref *= 1.0 - 0.25 * 0.5 ** k
    ref = 1.0 / ref
    # factors below atol are dropped, which costs about 2 * atol relative
    assert exp_small(Constant(1.0), 0.5, JACKSON) == pytest.approx(ref, rel=1e-11)
    assert exp_small(Constant(1.0), 0.5, JACKSON).real == pytest.approx(1.7313733, abs=1e-7)


@pytest.mark.parametrize("beta,t", CASES)
def test_reciprocal_identity(beta, t):
    minus = lambda s: -P(s)  # noqa: E731
    assert abs(exp_small(P, t, beta) * exp_big(minus, t, beta) - 1.0) <= 1e-12


def test_trig_recomposition():
    t = 0.5
    ep = exp_small(Constant(1j), t, JACKSON)
    em = exp_small(Constant(-1j), t, JACKSON)
    cos = trig("cos", Constant(1.0), t, JACKSON)
    sin = trig("sin", Constant(1.0), t, JACKSON)
    assert cos == pytest.approx((ep + em) / 2, rel=1e-12)
    assert cos ** 2 == pytest.approx((ep * ep + 2 * ep * em + em * em) / 4, rel=1e-12)
    # e_{ip} = cos + i sin with the 1/i normalization of sin
    assert ep == pytest.approx(cos + 1j * sin, rel=1e-12)


def test_pole_detected():
    # factor 1 - 0.5 * (6 - 4) vanishes at the base point
    with pytest.raises(PoleEncountered):
        exp_small(Constant(0.5), 6.0, HAHN)


def test_product_cap():
    with pytest.raises(NoConvergence):
        exp_small(Constant(1.0), 0.9, BetaMap.jackson(0.99), Tolerances(k_max=5))


def test_special_function_wrapper():
    f = special_function("Cos", P, HAHN)
    assert f(3.0) == evaluate("Cos", P, 3.0, HAHN)
    with pytest.raises(ValueError):
        special_function("tan", P, HAHN)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def _funcs(beta):
    return {k: special_function(k, P, beta) for k in ("e", "E", "sin", "cos", "Sin", "Cos")}


@pytest.mark.parametrize("beta,t", CASES)
def test_first_order_identities(beta, t):
    f = _funcs(beta)
    bt = beta.forward(t)
    p = P(t)
    expected = {
        "e": p * f["e"](t),
        "E": p * f["E"](bt),
        "sin": p * f["cos"](t),
        "cos": -p * f["sin"](t),
        "Sin": p * f["Cos"](bt),
        "Cos": -p * f["Sin"](bt),
    }
    for kind, rhs in expected.items():
        assert _rel(beta_derivative(f[kind], t, beta), rhs) <= 1e-9, kind


@pytest.mark.parametrize("beta,t", CASES)
def test_inverse_direction_identities(beta, t):
    f = _funcs(beta)
    u = invert(beta, t)
    pu = P(u)
    expected = {
        "e": pu * f["e"](u),
        "E": pu * f["E"](t),
        "sin": pu * f["cos"](u),
        "cos": -pu * f["sin"](u),
        "Sin": pu * f["Cos"](t),
        "Cos": -pu * f["Sin"](t),
    }
    for kind, rhs in expected.items():
        assert _rel(beta_inverse_derivative(f[kind], t, beta), rhs) <= 1e-9, kind


@pytest.mark.parametrize("beta,t", CASES)
def test_second_order_identities(beta, t):
    f = _funcs(beta)
    u = invert(beta, t)
    bt = beta.forward(t)
    pt, pu = P(t), P(u)
    dp = beta_inverse_derivative(P, t, beta)
    w = inverse_weight(t, beta)
    expected = {
        "e": dp * f["e"](t) + pu * pu * f["e"](u),
        "E": (pt * pu / w + dp) * f["E"](bt),
        "sin": dp * f["cos"](t) - pu * pu * f["sin"](u),
        "cos": -dp * f["sin"](t) - pu * pu * f["cos"](u),
        "Sin": dp * f["Cos"](bt) - pu * pt * f["Sin"](bt) / w,
        "Cos": -dp * f["Sin"](bt) - pu * pt * f["Cos"](bt) / w,
    }
    for kind, rhs in expected.items():
        d = lambda s, g=f[kind]: beta_derivative(g, s, beta)  # noqa: E731
        assert _rel(beta_inverse_derivative(d, t, beta), rhs) <= 1e-8, kind


def test_constant_coefficient_is_not_an_eigenfunction():
    # with p = z constant the second-order rule reduces to z^2 e(beta^-1 t), not z^2 e(t)
    z, t = 0.4, 3.0
    e = special_function("e", z, HAHN)
    d = lambda s: beta_derivative(e, s, HAHN)  # noqa: E731
    lhs = beta_inverse_derivative(d, t, HAHN)
    assert lhs == pytest.approx(z * z * e(invert(HAHN, t)), rel=1e-9)
    assert abs(lhs - z * z * e(t)) > 1e-3


def test_complex_coefficient_trig_matches_exponentials():
    t = -0.7
    p = Constant(0.3 + 0.2j)
    ep = exp_small(Constant(1j * p.value), t, JACKSON)
    em = exp_small(Constant(-1j * p.value), t, JACKSON)
    assert trig("sin", p, t, JACKSON) == pytest.approx((ep - em) / 2j, rel=1e-14)
    assert cmath.isfinite(trig("Cos", p, t, JACKSON))
    assert math.isclose(abs(exp_big(p, t, JACKSON) * exp_small(Constant(-p.value), t, JACKSON)), 1.0,
                        rel_tol=1e-12)
