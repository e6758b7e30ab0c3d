from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superw.scalar import (GaussianRational, LevelScalar, ScalarError, K, ONE, ZERO,
                           adjoin_root, evaluate, normalize, parse_scalar, to_scalar)

S = adjoin_root("2*k+3")
s = S.s


def test_defining_relation():
    assert s * s == 2 * K + 3


def test_three_halves_power_shape():
    x = (2 * K + 3) * s
    assert x * x == (2 * K + 3) ** 3
    assert evaluate(x, 3) == 27


def test_reduction():
    assert (K + 1) / (K + 1) == ONE


def test_evaluate_oracle():
    x = K / (K + Fraction(3, 2)) - 6 * K - Fraction(5, 2)
    assert evaluate(x, 1) == Fraction(-81, 10)


def test_principal_root():
    assert evaluate(s, 3) == 3
    assert evaluate(ONE, Fraction(7, 3)) == 1


def test_degenerate_root():
    t = adjoin_root(1)
    assert t.s == 1


def test_errors():
    with pytest.raises(ScalarError):
        ONE / ZERO
    with pytest.raises(ScalarError):
        evaluate(1 / (K - 1), 1)
    with pytest.raises(ScalarError):
        evaluate(s, 0)
    other = adjoin_root("k+1")
    with pytest.raises(ScalarError):
        s + other.s
    with pytest.raises(ScalarError):
        S.adjoin_root("k+1")
    with pytest.raises(ScalarError):
        parse_scalar("s")


def test_gaussian():
    i = parse_scalar("i")
    assert i * i == -1
    assert evaluate((1 + i) / (1 - i), 0) == GaussianRational(0, 1)


def test_negative_radicand_is_imaginary():
    t = adjoin_root("k")
    assert evaluate(t.s, -4) == GaussianRational(0, 2)


coeff = st.builds(Fraction, st.integers(-19, 19), st.integers(1, 6))


@st.composite
def scalars(draw):
    def poly():
        return [draw(coeff) for _ in range(draw(st.integers(0, 3)))]
    num = poly()
    den = poly()
    if not any(den):
        den = [1]
    rnum = poly() if draw(st.booleans()) else []
    ival = draw(coeff) if draw(st.booleans()) else 0
    base = LevelScalar(num, den, rnum, [1], S.q)
    return base + ival * parse_scalar("i")


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if a:
        assert a * a.inverse() == ONE


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars(), st.sampled_from([3, Fraction(11, 2), 23, -1]))
def test_evaluate_is_multiplicative(a, b, k0):
    try:
        ea, eb = evaluate(a, k0), evaluate(b, k0)
    except ScalarError:
        return
    assert evaluate(a * b, k0) == ea * eb
    assert evaluate(a + b, k0) == ea + eb
    assert evaluate(normalize(a), k0) == ea


@settings(max_examples=80, deadline=None)
@given(scalars())
def test_round_trip(a):
    txt = str(a)
    b = S.parse(txt)
    assert b == a
    assert str(b) == txt
    assert normalize(a) == a
