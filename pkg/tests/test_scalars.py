from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.scalars import (CycNumber, DivisionByZero, NotDivisible, PrimeSpecialization, ScalarSyntaxError,
                              cyc_embed, cyclotomic_poly, divisors, euler_phi, format_literal, parse_literal,
                              specialize, zeta)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_eval_root(coeffs, N):
    return sum((c * zeta(N) ** k for k, c in enumerate(coeffs)), CycNumber(0))


def cyc(N):
    return st.lists(st.builds(Fraction, st.integers(-40, 40), st.integers(1, 7)), min_size=1, max_size=N + 1) \
        .map(lambda cs: CycNumber.from_coeffs(N, cs))


CONDUCTORS = [1, 3, 4, 12, 21]


def test_zeta4_squared():
    assert zeta(4) * zeta(4) == CycNumber(-1)


def test_inverse_of_one_plus_zeta3():
    assert (1 + zeta(3)) ** -1 == -zeta(3)
    assert (1 + zeta(3)).inverse() == -zeta(3)


def test_zeta3_sum():
    assert zeta(3) + zeta(3) ** 2 == CycNumber(-1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        zeta(4) / CycNumber(0)


@pytest.mark.parametrize("N,expected", [(1, (-1, 1)), (4, (1, 0, 1))])
def test_cyclotomic_small(N, expected):
    assert cyclotomic_poly(N) == expected


def test_cyclotomic_21_divides_x21_minus_1():
    phi = cyclotomic_poly(21)
    assert len(phi) - 1 == 12 == euler_phi(21)
    prod = [1]
    for d in divisors(21):
        prod = poly_mul(prod, list(cyclotomic_poly(d)))
    assert prod == [-1] + [0] * 20 + [1]


@pytest.mark.parametrize("N", range(1, 129))
def test_cyclotomic_vanishes_at_root(N):
    assert poly_eval_root(cyclotomic_poly(N), N).is_zero()


def test_embed_examples():
    assert cyc_embed(zeta(3), 6) == zeta(6, 2)
    half = CycNumber(5) / 2
    for M in (1, 4, 12, 35):
        assert cyc_embed(half, M) == half
        assert cyc_embed(half, M).to_fraction() == Fraction(5, 2)
    assert cyc_embed(cyc_embed(zeta(3), 6), 12) == cyc_embed(zeta(3), 12)


def test_embed_rejects_nondivisible():
    with pytest.raises(NotDivisible):
        cyc_embed(zeta(3), 4)


def test_specialize_basics():
    s = PrimeSpecialization.choose(12, seed=0)
    assert (s.prime - 1) % 12 == 0
    assert specialize(CycNumber(1), s) == 1
    assert pow(specialize(zeta(12), s), 12, s.prime) == 1
    assert pow(specialize(zeta(12), s), 6, s.prime) != 1
    assert PrimeSpecialization.choose(12, seed=0) == s


def test_literal_round_trip():
    x = parse_literal("-1/2*z^5+3", 6)
    assert parse_literal(format_literal(x), x.conductor) == x
    with pytest.raises(ScalarSyntaxError):
        parse_literal("3*+z", 6)


def test_mixed_conductors_unify():
    assert zeta(4) * zeta(3) == zeta(12, 7)


@pytest.mark.parametrize("N", CONDUCTORS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms(N, data):
    a, b, c = (data.draw(cyc(N)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == CycNumber(1)
        assert (b / a) * a == b


@settings(max_examples=100, deadline=None)
@given(a=cyc(12), b=cyc(12))
def test_specialize_multiplicative(a, b):
    s = PrimeSpecialization.choose(12, seed=3)
    p = s.prime
    assert specialize(a * b, s) == specialize(a, s) * specialize(b, s) % p
    assert specialize(a + b, s) == (specialize(a, s) + specialize(b, s)) % p


@settings(max_examples=60, deadline=None)
@given(a=cyc(3), b=cyc(3))
def test_embed_injective_and_multiplicative(a, b):
    ea, eb = cyc_embed(a, 12), cyc_embed(b, 12)
    assert cyc_embed(a * b, 12) == ea * eb
    assert (ea == eb) == (a == b)
    s = PrimeSpecialization.choose(12, seed=1)
    assert specialize(ea, s) == specialize(a, s)
