import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trilie.algebra import ThreeLieAlgebra
from trilie.document import (
    DocumentError,
    format_span,
    format_vector,
    parse_algebra,
    serialize_algebra,
)
from trilie.families import example_algebra, example_derivation
from trilie.kernel import span


def doc(**over):
    data = {"schema": 1, "dim": 4, "brackets": []}
    data.update(over)
    return json.dumps(data)


def entry(a, b, c, coeffs):
    return {"a": a, "b": b, "c": c, "coeffs": coeffs}


def test_example_round_trip():
    text = serialize_algebra(example_algebra(), example_derivation())
    alg, der = parse_algebra(text)
    assert alg == example_algebra()
    assert der == example_derivation()
    assert serialize_algebra(alg, der) == text


def test_abelian_document():
    alg, der = parse_algebra(doc())
    assert alg.dim == 4 and not alg.constants and der is None


def test_skew_normalization_on_input():
    alg, _ = parse_algebra(doc(brackets=[entry(3, 2, 4, {"1": "-1/2"})]))
    assert alg.bracket_basis(1, 2, 3) == {0: Fraction(1, 2)}


tables = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)).filter(lambda t: t[0] < t[1] < t[2]),
    st.dictionaries(st.integers(0, 4), st.fractions(max_denominator=9).filter(bool), min_size=1, max_size=2),
    max_size=4,
)


@settings(max_examples=50, deadline=None)
@given(tables)
def test_serialize_parse_round_trip(table):
    alg = ThreeLieAlgebra(5, table)
    text = serialize_algebra(alg)
    back, _ = parse_algebra(text)
    assert back == alg
    assert serialize_algebra(back) == text


@pytest.mark.parametrize("text,code", [
    ("{", "PARSE_ERROR"),
    (doc(schema=2), "PARSE_ERROR"),
    (doc(extra=1), "PARSE_ERROR"),
    (doc(brackets=[entry(1, 2, 3, {"4": 1})]), "PARSE_ERROR"),
    (doc(brackets=[entry(1, 2, 3, {"4": "0.5"})]), "PARSE_ERROR"),
    (doc(brackets=[entry(1, 2, 5, {"4": "1"})]), "INDEX_OUT_OF_RANGE"),
    (doc(brackets=[entry(0, 2, 3, {"4": "1"})]), "INDEX_OUT_OF_RANGE"),
    (doc(brackets=[entry(1, 2, 3, {"9": "1"})]), "INDEX_OUT_OF_RANGE"),
    (doc(brackets=[entry(1, 1, 3, {"4": "1"})]), "SIGN_CONFLICT"),
    (doc(derivation=[["1"]]), "PARSE_ERROR"),
])
def test_error_codes(text, code):
    with pytest.raises(DocumentError) as err:
        parse_algebra(text)
    assert err.value.code == code


def test_sign_conflict_names_the_entry():
    text = doc(brackets=[entry(2, 3, 4, {"1": "1"}), entry(3, 2, 4, {"1": "1"})])
    with pytest.raises(DocumentError) as err:
        parse_algebra(text)
    assert err.value.code == "SIGN_CONFLICT"
    assert err.value.where == "$.brackets[1]"
    assert "[3,2,4]" in err.value.message


def test_json_errors_carry_a_position():
    with pytest.raises(DocumentError) as err:
        parse_algebra('{"schema": 1,\n "dim": }')
    assert err.value.where.startswith("line 2 column")


def test_formatting():
    labels = ["x1", "x2", "x3"]
    assert format_vector({0: 1, 2: Fraction(-1, 2)}, labels) == "x1 - 1/2 x3"
    assert format_vector({1: -2}, labels) == "-2 x2"
    assert format_vector({}, labels) == "0"
    assert format_span(span([[0, 1, 0], [1, 0, 0]], 3), labels) == "<x1, x2>"
    assert format_span(span([[1, 1, 0]], 3), labels) == "<x1 + x2>"
