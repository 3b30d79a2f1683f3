from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from casimir_spectra.exactnum import Surd, exact, rat_arith, rational_sqrt, sign, surd_arith, to_float

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def test_rational_examples():
    assert rat_arith(F(1, 2), F(1, 3), "add") == F(5, 6)
    assert F(2, 4) == F(1, 2)
    assert rat_arith(F(3, 7), F(7, 3), "mul") == 1
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")


def test_exact_conversion():
    assert exact(0.1) == F(1, 10)
    assert exact("3/7") == F(3, 7)
    assert exact(4) == F(4)
    with pytest.raises(ValueError):
        exact(float("nan"))
    with pytest.raises(TypeError):
        exact(True)


def test_surd_examples():
    assert (Surd(1, 1, 5) * Surd(1, -1, 5)) == Surd(-4, 0, 5)
    assert Surd(0, 1, 5) ** 2 == 5
    assert 1 / Surd(1, 1, 5) == Surd(F(-1, 4), F(1, 4), 5)


def test_surd_perfect_square_folds():
    s = Surd(1, 2, 9)
    assert s.is_rational and s.rational() == 7


def test_surd_radicand_mismatch():
    with pytest.raises(ValueError):
        Surd.sqrt_of(2) + Surd.sqrt_of(3)


def test_surd_sign_and_sqrt():
    assert Surd(F(1, 2), F(-1, 2), 5).sign() == -1
    assert Surd(3, -1, 9).sign() == 0
    assert Surd(0, 0, 5).sign() == 0
    # (1 + sqrt5)^2 = 6 + 2 sqrt5
    assert Surd(6, 2, 5).sqrt() == Surd(1, 1, 5)
    assert Surd(-1, 0, 5).sqrt() is None
    assert sign(F(-3)) == -1


def test_to_float_examples():
    assert float(to_float(F(1, 3))) == pytest.approx(0.3333333333333333, abs=1e-16)
    assert float(to_float(Surd(F(1, 4), F(-1, 4), 5))) == pytest.approx(-0.3090169943749474, abs=1e-15)
    assert to_float(F(0)) == 0


def test_to_float_cancellation_keeps_precision():
    # 10^8 - sqrt(10^16 - 1) ~ 5e-9, catastrophic in double precision
    v = Surd(10 ** 8, -1, 10 ** 16 - 1)
    with mpmath.workdps(40):
        ref = mpmath.mpf(10) ** 8 - mpmath.sqrt(mpmath.mpf(10) ** 16 - 1)
    assert abs(to_float(v) - ref) < 1e-30


@given(rats, rats, rats)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * (1 / a) == 1


surds = st.builds(lambda a, b: Surd(a, b, 5), rats, rats)


@given(surds, surds, surds)
def test_surd_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a.sign() != 0:
        assert a * a.inverse() == 1
        assert surd_arith(b, a, "div") * a == b


@given(surds)
def test_surd_sign_matches_float(a):
    f = float(a.a) + float(a.b) * 5 ** 0.5
    if abs(f) > 1e-9:
        assert a.sign() == (1 if f > 0 else -1)


@given(st.fractions(min_value=0, max_value=100, max_denominator=20))
def test_rational_sqrt_roundtrip(q):
    r = rational_sqrt(q * q)
    assert r == q
