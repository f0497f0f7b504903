import random

import pytest

from ncips.fields import (
    GF2_FIELD,
    QQ,
    FieldMismatchError,
    check_same_field,
    parse_field_spec,
    prime_field,
)


def test_gf2_characteristic_two():
    assert GF2_FIELD.add(1, 1) == 0
    assert GF2_FIELD.add(1, 0) == 1
    assert GF2_FIELD.neg(1) == 1
    assert GF2_FIELD.from_int(-1) == 1


def test_rational_arithmetic():
    third = QQ.parse("1/3")
    sixth = QQ.parse("1/6")
    assert QQ.add(third, sixth) == QQ.parse("1/2")
    assert QQ.to_text(QQ.parse("-4/6")) == "-2/3"


def test_z5_inverse():
    z5 = prime_field(5)
    assert z5.inv(2) == 3
    assert z5.mul(2, z5.inv(2)) == 1


def test_inverse_of_zero_raises():
    for f in (GF2_FIELD, QQ, prime_field(7)):
        with pytest.raises(ZeroDivisionError):
            f.inv(f.zero)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        check_same_field(GF2_FIELD, QQ)
    with pytest.raises(FieldMismatchError):
        check_same_field(prime_field(5), prime_field(7))
    check_same_field(prime_field(5), prime_field(5))


def test_parse_field_spec():
    assert parse_field_spec("gf2") is GF2_FIELD
    assert parse_field_spec("q") is QQ
    assert parse_field_spec("zp:31") == prime_field(31)
    with pytest.raises(ValueError):
        parse_field_spec("zp:6")  # not prime
    with pytest.raises(ValueError):
        parse_field_spec("zp:2147483659")  # >= 2^31
    with pytest.raises(ValueError):
        parse_field_spec("f4")


def test_rationals_reject_fractions_elsewhere():
    with pytest.raises(ValueError):
        GF2_FIELD.parse("1/2")
    with pytest.raises(ValueError):
        prime_field(5).parse("1/2")
    assert QQ.parse("3/4") == QQ.parse("6/8")


@pytest.mark.parametrize("field", [GF2_FIELD, prime_field(5), prime_field(2147483647), QQ])
def test_field_axioms_random_triples(field):
    rng = random.Random(12345)

    def sample():
        if field is QQ:
            return QQ.parse(f"{rng.randint(-50, 50)}/{rng.randint(1, 50)}")
        return field.from_int(rng.randint(-10**6, 10**6))

    for _ in range(10_000):
        a, b, c = sample(), sample(), sample()
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        assert field.add(a, field.neg(a)) == field.zero
        if a != field.zero:
            assert field.mul(a, field.inv(a)) == field.one
