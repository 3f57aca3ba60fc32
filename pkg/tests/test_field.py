from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bihom.errors import DivisionByZero, FieldMismatch, ParseError
from bihom.field import GF, Q, FieldDescriptor, FieldKind, Scalar, parse_field, scalar_arith, scalar_parse


def S(v, F=Q):
    return Scalar.of(v, F)


def test_rational_add():
    assert scalar_arith(S(Fraction(1, 2)), S(Fraction(1, 3)), "add") == S(Fraction(5, 6))


def test_gf3_mul():
    assert scalar_arith(S(2, GF(3)), S(2, GF(3)), "mul").value == 1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        scalar_arith(S(1), S(0), "div")
    with pytest.raises(ZeroDivisionError):
        scalar_arith(S(1, GF(5)), S(0, GF(5)), "div")


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        scalar_arith(S(1, GF(3)), S(1, GF(5)), "add")
    with pytest.raises(FieldMismatch):
        S(1) + S(1, GF(2))


@pytest.mark.parametrize("text,field,expected", [
    ("3/6", Q, Fraction(1, 2)),
    ("-4/6", Q, Fraction(-2, 3)),
    ("5", GF(3), 2),
    ("1/2", GF(3), 2),
    ("-1", GF(7), 6),
])
def test_parse(text, field, expected):
    assert scalar_parse(text, field).value == expected


def test_parse_inverts_denominator_zero_mod_p():
    with pytest.raises(DivisionByZero):
        scalar_parse("1/3", GF(3))


@pytest.mark.parametrize("text", ["", "1.5", "x", "1/", "--1", "1/-2"])
def test_parse_rejects_bad_text(text):
    with pytest.raises(ParseError):
        scalar_parse(text, Q)


def test_descriptor_equality_and_validation():
    assert GF(3) == FieldDescriptor(FieldKind.PRIME, 3)
    assert GF(3) != GF(5) and GF(3) != Q
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2 ** 31 + 11)  # prime, but too large


@pytest.mark.parametrize("text,expected", [("Q", Q), ("qq", Q), ("gf2", GF(2)), ("GF(7)", GF(7))])
def test_parse_field(text, expected):
    assert parse_field(text) == expected


def test_parse_field_rejects():
    for bad in ("GF(6)", "R", "gf"):
        with pytest.raises(ParseError):
            parse_field(bad)


def test_large_prime_uses_object_arithmetic():
    F = GF(2 ** 31 - 1)
    a = F.array([2 ** 30, 2 ** 30 + 5])
    assert F.reduce(a * a)[0] == pow(2 ** 30, 2, 2 ** 31 - 1)


def test_nullspace_and_inverse():
    m = Q.array([[1, 2], [2, 4]])
    (v,) = Q.nullspace(m)
    assert np.all(Q.equal(Q.reduce(m.dot(v)), Q.zeros(2)))
    assert Q.inverse(m) is None
    inv = Q.inverse(Q.array([[2, 0], [0, 3]]))
    assert inv[0, 0] == Fraction(1, 2) and inv[1, 1] == Fraction(1, 3)
    assert GF(2).rank(GF(2).array([[1, 1], [1, 1]])) == 1


fields = st.sampled_from([Q, GF(2), GF(3), GF(7), GF(2 ** 31 - 1)])


def scalars(F):
    if F.is_rational:
        return st.fractions(max_denominator=50).map(lambda v: Scalar.of(v, F))
    return st.integers(0, F.characteristic - 1).map(lambda v: Scalar.of(v, F))


@given(st.data())
def test_field_axioms(data):
    F = data.draw(fields)
    a, b, c = (data.draw(scalars(F)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Scalar.of(0, F)
    if a:
        assert (a / a) == Scalar.of(1, F)
        assert (b / a) * a == b


@given(st.data())
def test_parse_format_roundtrip(data):
    F = data.draw(fields)
    a = data.draw(scalars(F))
    text = F.format(a.value)
    assert scalar_parse(text, F) == a
    assert F.format(scalar_parse(text, F).value) == text
