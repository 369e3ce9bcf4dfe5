import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kernel_equiv.errors import FieldMismatch, ParseError, ZeroInversion
from kernel_equiv.fields import (
    FieldSpec,
    field_equals,
    field_invert,
    field_is_own_inverse,
    is_prime,
)

RAT = FieldSpec.rational()
GF2 = FieldSpec.gfp(2)
GF7 = FieldSpec.gfp(7)
APPROX = FieldSpec.approx()


def test_invert_examples():
    assert field_invert(Fraction(3, 4), RAT) == Fraction(4, 3)
    assert field_invert(3, GF7) == 5
    assert field_invert(1, GF2) == 1


@pytest.mark.parametrize("spec", [RAT, GF7, APPROX])
def test_invert_zero_raises(spec):
    with pytest.raises(ZeroInversion):
        field_invert(spec.zero, spec)


def test_invert_tiny_approx_raises():
    with pytest.raises(ZeroInversion):
        field_invert(1e-13, APPROX)


def test_equals_examples():
    assert field_equals(Fraction(2, 4), Fraction(1, 2), RAT)
    assert field_equals(FieldSpec.gfp(5).element(7), 2, FieldSpec.gfp(5))
    assert field_equals(1.0, 1.0 + 1e-12, FieldSpec.approx(eq_tol=1e-9))
    assert not field_equals(1.0, 1.0 + 1e-6, APPROX)


def test_own_inverse_examples():
    assert field_is_own_inverse(Fraction(-1), RAT)
    assert field_is_own_inverse(1, GF2)
    assert GF2.neg(1) == 1  # +1 == -1 in characteristic 2
    assert not field_is_own_inverse(Fraction(2), RAT)
    assert field_is_own_inverse(6, GF7)  # 6 == -1 mod 7
    assert not field_is_own_inverse(2, GF7)


def test_characteristic():
    assert RAT.characteristic() == 0
    assert GF7.characteristic() == 7
    assert APPROX.characteristic() == 0


@pytest.mark.parametrize("p", [0, 1, 4, 9, 15, 91, 2**31 - 3])
def test_non_prime_moduli_rejected(p):
    with pytest.raises(ParseError):
        FieldSpec.gfp(p)


def test_primality_by_trial_division():
    primes = [q for q in range(200) if is_prime(q)]
    sieve = [q for q in range(2, 200) if all(q % d for d in range(2, q))]
    assert primes == sieve
    assert is_prime(2**31 - 1)


@pytest.mark.parametrize(
    "kwargs", [{"zero_tol": 0.0}, {"eq_tol": -1.0}, {"zero_tol": float("nan")}]
)
def test_bad_tolerances_rejected(kwargs):
    with pytest.raises(ParseError):
        FieldSpec.approx(**kwargs)


@pytest.mark.parametrize(
    "decl",
    [{"field": "rational"}, {"field": "gfp", "p": 7}, {"field": "approx", "zero_tol": 1e-12, "eq_tol": 1e-9}],
)
def test_declaration_round_trip(decl):
    assert FieldSpec.from_json(decl).to_json() == decl


@pytest.mark.parametrize("decl", [{"field": "complex"}, {"field": "gfp"}, {"p": 3}, 7])
def test_bad_declarations(decl):
    with pytest.raises(ParseError):
        FieldSpec.from_json(decl)


def test_parse_entries():
    assert RAT.parse("-3/6") == Fraction(-1, 2)
    assert RAT.parse("5") == Fraction(5)
    assert RAT.parse(4) == Fraction(4)
    assert GF7.parse(-1) == 6
    assert APPROX.parse("0.25") == 0.25
    for bad in ("1.5", "1/0", "x", 1.5, True, None):
        with pytest.raises(FieldMismatch):
            RAT.parse(bad)
    with pytest.raises(FieldMismatch):
        GF7.parse(2.0)
    with pytest.raises(FieldMismatch):
        APPROX.parse("nan?")


def test_rational_canonical_form():
    x = RAT.parse("-6/4")
    assert (x.numerator, x.denominator) == (-3, 2)


@pytest.mark.parametrize("spec", [RAT, GF2, FieldSpec.gfp(5), GF7, FieldSpec.gfp(101), APPROX])
def test_random_inverse_identity(spec):
    rng = random.Random(1234)
    for _ in range(1000):
        a = spec.random_nonzero(rng)
        b = field_invert(a, spec)
        prod = spec.mul(a, b)
        if spec.exact:
            assert prod == spec.one
        else:
            assert field_equals(prod, spec.one, spec)


@pytest.mark.parametrize("spec", [RAT, GF2, GF7, APPROX])
def test_own_inverse_iff_square_is_one(spec):
    rng = random.Random(99)
    samples = [spec.random_nonzero(rng) for _ in range(300)] + [spec.one, spec.neg(spec.one)]
    for a in samples:
        assert field_is_own_inverse(a, spec) == field_equals(spec.mul(a, a), spec.one, spec)


def test_gf2_every_nonzero_is_own_inverse():
    assert field_is_own_inverse(1, GF2)
    assert GF2.neg(GF2.one) == GF2.one


@given(
    st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50)
)
def test_sign_between_matches_square_equality(n1, d1, n2, d2):
    a, b = Fraction(n1, d1), Fraction(n2, d2)
    s = RAT.sign_between(b, a)
    assert (s is not None) == (a * a == b * b)
    if s is not None and a != 0:
        assert b == s * a


@given(st.integers(0, 10), st.integers(0, 10))
def test_sign_between_gfp(a, b):
    spec = FieldSpec.gfp(11)
    s = spec.sign_between(b, a)
    assert (s is not None) == (a * a % 11 == b * b % 11)


def test_approx_sign_snapping():
    assert APPROX.sign_between(-2.0, 2.0 + 1e-12) == -1
    assert APPROX.sign_between(2.0, 1.0) is None
    assert APPROX.sign_between(1.0, 0.0) is None


def test_equality_tolerance_is_not_transitive():
    spec = FieldSpec.approx(eq_tol=1.0)
    assert spec.equals(0.0, 0.9) and spec.equals(0.9, 1.8)
    assert not spec.equals(0.0, 1.8)
