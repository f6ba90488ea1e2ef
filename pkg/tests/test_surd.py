from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oracles import hp_value
from pfh_lattice.surd import Surd, exact_sign, format_exact, sqrt_rational, squarefree_split


def test_squarefree_split():
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(1) == (1, 1)
    assert squarefree_split(49) == (7, 1)


def test_sqrt_of_square_is_rational():
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    assert isinstance(sqrt_rational(Fraction(9, 4)), Fraction)


def test_sqrt_squares_back():
    r = sqrt_rational(Fraction(2, 3))
    assert isinstance(r, Surd)
    assert r * r == Fraction(2, 3)


def test_negative_sqrt_rejected():
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_cancellation_returns_fraction():
    s = Surd({2: 1, 1: 3})
    out = s - Surd({2: 1})
    assert out == 3 and isinstance(out, Fraction)


def test_inverse():
    s = Surd({1: 1, 2: 1})
    assert s * (1 / s) == 1


def test_format():
    assert format_exact(Surd({1: Fraction(1, 2), 3: -2})) == "1/2 + -2*sqrt(3)"


def test_near_cancellation_sign():
    # 577/408 is a very close rational approximation of sqrt(2)
    s = Surd({2: 1}) - Fraction(577, 408)
    assert exact_sign(s) == -1
    s = Surd({2: 10 ** 12}) - Fraction(1414213562373, 1)
    assert exact_sign(s) == (1 if hp_value({2: Fraction(10 ** 12), 1: Fraction(-1414213562373)}) > 0 else -1)


small = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@settings(max_examples=200, deadline=None)
@given(a=small, b=small, c=small, r1=st.sampled_from([2, 3, 5, 6, 7]), r2=st.sampled_from([2, 3, 5, 10]))
def test_sign_matches_high_precision(a, b, c, r1, r2):
    terms = {1: a, r1: b}
    terms[r2] = terms.get(r2, 0) + c
    s = a + Surd({r1: b}) + Surd({r2: c})
    hp = hp_value({k: Fraction(v) for k, v in terms.items()})
    want = 0 if abs(hp) < mpmath.mpf(10) ** -40 else (1 if hp > 0 else -1)
    assert exact_sign(s) == want


@settings(max_examples=100, deadline=None)
@given(a=small, b=small, c=small, d=small)
def test_ring_identities(a, b, c, d):
    x = a + Surd({2: b})
    y = c + Surd({3: d})
    assert (x + y) - y == x
    assert x * y == y * x
    assert abs(float(x * y) - float(x) * float(y)) < 1e-9
