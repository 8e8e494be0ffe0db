import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cealg.field import GF, QQ, FieldSpec, Scalar, field_enumerate, scalar_inv, scalar_parse


def test_parse_reduces_rationals():
    assert scalar_parse("2/4", QQ).value == Fraction(1, 2)


def test_parse_negative_mod_p():
    assert scalar_parse("-3", GF(5)).value == 2


def test_parse_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        scalar_parse("7/0", QQ)


@pytest.mark.parametrize("text", ["", "1.5", "a", "1/2/3", "--1"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        scalar_parse(text, QQ)


def test_fraction_syntax_not_allowed_mod_p():
    with pytest.raises(ValueError):
        scalar_parse("1/2", GF(5))


def test_inverses():
    assert scalar_inv(Scalar(2, GF(5))).value == 3
    assert scalar_inv(Scalar(Fraction(3, 4), QQ)).value == Fraction(4, 3)
    with pytest.raises(ZeroDivisionError):
        scalar_inv(Scalar(0, GF(7)))


def test_enumerate():
    assert [s.value for s in field_enumerate(GF(3))] == [0, 1, 2]
    assert [s.value for s in field_enumerate(GF(2))] == [0, 1]
    with pytest.raises(ValueError):
        field_enumerate(QQ)


@pytest.mark.parametrize("p", [0, 1, 4, 9, 2**31 + 11])
def test_bad_modulus(p):
    with pytest.raises(ValueError):
        FieldSpec("Fp", p)


@pytest.mark.parametrize("label", ["Q", "QQ", "F5", "GF(5)"])
def test_label_round_trip(label):
    f = FieldSpec.from_label(label)
    assert FieldSpec.from_label(f.label) == f


@pytest.mark.parametrize("p", [2, 3, 5, 7, 2_147_483_647])
def test_characteristic_finite(p):
    f = GF(p)
    assert f.characteristic() == p
    if p < 100:
        total = Scalar(0, f)
        for _ in range(p):
            total = total + Scalar(1, f)
        assert not total


def test_characteristic_zero_never_vanishes():
    total = Scalar(0, QQ)
    for _ in range(200):
        total = total + Scalar(1, QQ)
        assert total


def test_mixing_fields_is_an_error():
    with pytest.raises(ValueError):
        Scalar(1, GF(3)) + Scalar(1, GF(5))


FIELDS = [QQ, GF(2), GF(3), GF(5), GF(7), GF(2_147_483_647)]


def scalars(f):
    if f.is_finite:
        return st.integers(0, f.p - 1).map(lambda v: Scalar(v, f))
    return st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6).map(lambda v: Scalar(v, f))


def _axioms(f, a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Scalar(0, f)
    if a:
        assert a * a.inverse() == Scalar(1, f)
        assert b / a * a == b


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.label)
def test_field_axioms_property(f):
    @settings(max_examples=300, database=None)
    @given(scalars(f), scalars(f), scalars(f))
    def check(a, b, c):
        _axioms(f, a, b, c)

    check()


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f.label)
def test_field_axioms_ten_thousand_triples(f):
    rng = random.Random(f.label)

    def draw():
        if f.is_finite:
            return Scalar(rng.randrange(f.p), f)
        return Scalar(Fraction(rng.randint(-1000, 1000), rng.randint(1, 60)), f)

    for _ in range(10_000):
        _axioms(f, draw(), draw(), draw())


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(1, 20))
def test_canonical_form_is_unique(num, den, k):
    a = scalar_parse(f"{num}/{den}", QQ)
    b = scalar_parse(f"{num * k}/{den * k}", QQ)
    assert a == b and repr(a) == repr(b)


@given(st.integers(-10**6, 10**6))
def test_residues_are_canonical(x):
    f = GF(7)
    assert Scalar(x, f).value == Scalar(x % 7, f).value == x % 7
