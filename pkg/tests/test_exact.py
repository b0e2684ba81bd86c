from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SEED
from knotcg.exact import (
    Cyclotomic,
    TwoLocal,
    UnitAngle,
    conj,
    cyc_arith,
    cyclotomic_poly,
    eval_angle,
    exact_sign,
    is_prime,
    totient,
)

X = sympy.Symbol("x")


def z(m: int, k: int = 1) -> Cyclotomic:
    return Cyclotomic.zeta(m, k)


def to_sympy(a: Cyclotomic) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)] or [0], X)


def sympy_mod(m: int) -> sympy.Poly:
    return sympy.Poly(sympy.cyclotomic_poly(m, X), X)


def from_sympy(p: sympy.Poly, m: int) -> Cyclotomic:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    return Cyclotomic.from_coeffs(m, coeffs)


def random_element(r: random.Random, m: int) -> Cyclotomic:
    return Cyclotomic.from_coeffs(m, [Fraction(r.randint(-5, 5), r.randint(1, 4)) for _ in range(totient(m))])


# -- examples ----------------------------------------------------------------

def test_cube_roots_sum_to_minus_one():
    assert cyc_arith(z(3), z(3, 2), "add") == Cyclotomic.rational(-1)


def test_inverse_pair_multiplies_to_one():
    assert cyc_arith(z(5), z(5, 4), "mul") == 1


def test_division_example():
    # (1 + z)/z = z^-1 + 1 = z^2 + 1
    assert cyc_arith(1 + z(3), z(3), "div") == 1 + z(3, 2)


def test_division_by_zero_is_distinct_error():
    with pytest.raises(ZeroDivisionError):
        cyc_arith(z(5), 0, "div")
    with pytest.raises(ZeroDivisionError):
        cyc_arith(z(5), z(5) + z(5, 2) + z(5, 3) + z(5, 4) + 1, "div")


def test_unknown_operation():
    with pytest.raises(ValueError):
        cyc_arith(1, 2, "pow")


def test_conj_examples():
    assert conj(z(5)) == z(5, 4)
    assert conj(Cyclotomic.rational(Fraction(3, 2))) == Fraction(3, 2)
    assert conj(z(3) + 2 * z(3, 2)) == z(3, 2) + 2 * z(3)


def test_exact_sign_examples():
    assert exact_sign(z(5) + z(5, 4)) == 1
    assert exact_sign(z(3) + z(3, 2)) == -1
    assert exact_sign(Cyclotomic.rational(0)) == 0


def test_exact_sign_rejects_non_real():
    with pytest.raises(ValueError):
        exact_sign(z(5))


def test_exact_sign_tiny_value():
    # 2cos(2pi/7) + 2cos(4pi/7) + 2cos(6pi/7) = -1, shifted by a small rational
    s = sum((z(7, k) for k in range(1, 7)), Cyclotomic.rational(0))
    assert exact_sign(s + 1 + Fraction(1, 10**30)) == 1
    assert exact_sign(s + 1 - Fraction(1, 10**30)) == -1


def test_eval_angle_examples():
    assert eval_angle(UnitAngle(0, 1)) == 1
    assert eval_angle(UnitAngle(1, 2)) == -1
    assert eval_angle(UnitAngle(1, 3)) == z(3)


def test_coefficient_length_is_totient():
    for m in (1, 2, 3, 4, 12, 15, 26, 30):
        assert len(z(m).coeffs) == totient(m)
    assert all(c == 0 for c in Cyclotomic.rational(0).embed(12))


def test_cyclotomic_poly_matches_sympy():
    for m in range(1, 80):
        ours = list(reversed(cyclotomic_poly(m)))
        assert ours == [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(m, X), X).all_coeffs()]


def test_is_prime_and_totient_against_sympy():
    for n in range(0, 400):
        assert is_prime(n) == sympy.isprime(n)
        if n:
            assert totient(n) == sympy.totient(n)


def test_cross_conductor_equality():
    assert z(3) == z(6, 2)
    assert z(4) * z(3) == z(12, 7)
    assert z(2) == -1
    assert hash(z(3)) == hash(z(6, 2))
    assert z(5) != z(10, 1)


def test_embedding_then_projection_is_identity():
    r = random.Random(SEED)
    for _ in range(50):
        m = r.choice([3, 4, 5, 7, 8, 9, 12])
        a = random_element(r, m)
        big = m * r.choice([2, 3, 5])
        d = math.lcm(*(c.denominator for c in a.coeffs))
        b = a * d  # integral, so embed returns the full coefficient vector
        lifted = Cyclotomic(big, b.embed(big), d)
        assert lifted == a
        assert Cyclotomic(m, b.embed(m), d) == a


def test_is_real():
    assert (z(7) + z(7, 6)).is_real()
    assert not z(7).is_real()


# -- sympy oracle: power-basis arithmetic mod the cyclotomic polynomial ----------

@pytest.mark.parametrize("m", [3, 5, 7, 8, 12, 13, 15])
def test_arithmetic_against_sympy(m):
    r = random.Random(SEED + m)
    phi = sympy_mod(m)
    for _ in range(40):
        a, b = random_element(r, m), random_element(r, m)
        pa, pb = to_sympy(a), to_sympy(b)
        assert a * b == from_sympy((pa * pb).rem(phi), m)
        assert a + b == from_sympy(pa + pb, m)
        if not b.is_zero():
            inv = sympy.invert(pb.as_expr(), phi.as_expr(), X)
            assert a / b == from_sympy(sympy.Poly(sympy.expand(pa.as_expr() * inv), X).rem(phi), m)


def test_numeric_value_agrees_with_floating_evaluation():
    r = random.Random(SEED)
    for _ in range(100):
        m = r.choice([5, 7, 9, 12, 20])
        a = random_element(r, m)
        w = cmath.exp(2j * math.pi / m)
        val = sum(float(c) * w**i for i, c in enumerate(a.coeffs))
        assert abs(a.approx() - val) < 1e-9


def test_exact_sign_against_floats():
    r = random.Random(SEED)
    for _ in range(300):
        m = r.choice([5, 7, 8, 9, 11, 12, 13])
        a = random_element(r, m)
        re = a + a.conj()
        v = re.approx().real
        if abs(v) > 1e-6:
            assert exact_sign(re) == (1 if v > 0 else -1)


# -- field and Galois properties ----------------------------------------------------

small = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def elements(draw, m=None):
    m = m or draw(st.sampled_from([3, 4, 5, 7, 12]))
    return Cyclotomic.from_coeffs(m, draw(st.lists(small, min_size=totient(m), max_size=totient(m))))


@settings(max_examples=150, deadline=None, derandomize=True)
@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@settings(max_examples=100, deadline=None, derandomize=True)
@given(elements(), elements())
def test_conj_is_involutive_homomorphism(a, b):
    assert conj(conj(a)) == a
    assert conj(a * b) == conj(a) * conj(b)
    assert conj(a + b) == conj(a) + conj(b)
    assert (a * conj(a)).is_real()


@settings(max_examples=60, deadline=None, derandomize=True)
@given(elements(m=7), elements(m=7))
def test_division_roundtrip(a, b):
    if not b.is_zero():
        assert (a / b) * b == a


# -- Z_(2) and unit angles -----------------------------------------------------------

def test_two_local_basics():
    x = TwoLocal(3, 5)
    assert x.numerator == 3 and x.denominator == 5
    assert x.is_odd() and x.parity == 1
    assert TwoLocal(4, 3).parity == 0
    assert x + TwoLocal(2, 5) == 1
    assert (x * 5) == 3
    with pytest.raises(ValueError):
        TwoLocal(1, 2)
    with pytest.raises(ValueError):
        TwoLocal(1) / 2


def test_two_local_parity_is_a_ring_map():
    r = random.Random(SEED)
    for _ in range(200):
        a = TwoLocal(r.randint(-20, 20), r.choice([1, 3, 5, 7, 9]))
        b = TwoLocal(r.randint(-20, 20), r.choice([1, 3, 5, 7, 9]))
        assert (a + b).parity == (a.parity + b.parity) % 2
        assert (a * b).parity == (a.parity * b.parity) % 2


def test_unit_angle_reduction_and_group_law():
    assert UnitAngle(2, 6) == UnitAngle(1, 3)
    assert UnitAngle(7, 6) == UnitAngle(1, 6)
    assert UnitAngle(-1, 6) == UnitAngle(5, 6)
    assert (UnitAngle(1, 6) * UnitAngle(1, 3)).fraction == Fraction(1, 2)
    assert UnitAngle(1, 6) ** 6 == UnitAngle(0)
    assert UnitAngle(1, 6).inverse() == UnitAngle(5, 6)
    assert UnitAngle.parse("3/9") == UnitAngle(1, 3)
    a = UnitAngle(1, 7)
    assert (a.num, a.den) == (1, 7)


@settings(max_examples=200, derandomize=True)
@given(st.integers(-50, 50), st.integers(1, 30), st.integers(-50, 50), st.integers(1, 30), st.integers(-9, 9))
def test_unit_angle_matches_eval(a, m, b, n, k):
    x, y = UnitAngle(a, m), UnitAngle(b, n)
    assert eval_angle(x * y) == eval_angle(x) * eval_angle(y)
    assert eval_angle(x**k) == eval_angle(x) ** k
    assert 0 <= x.fraction < 1
