from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trilie.kernel import (
    DimensionError,
    LinearMap,
    coordinate_subspace,
    format_rational,
    parse_rational,
    scalar,
    sm_compose,
    sm_from_map,
    sm_to_map,
    span,
    whole_space,
    zero_subspace,
)

small = st.integers(-3, 3)
fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@pytest.mark.parametrize("text,value", [
    ("0", Fraction(0)), ("7", Fraction(7)), ("-3", Fraction(-3)), ("+2", Fraction(2)),
    ("1/2", Fraction(1, 2)), ("-2/4", Fraction(-1, 2)), ("  5/3 ", Fraction(5, 3)),
])
def test_parse_rational_accepts(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "1.5", "1/0", "1/", "/2", "a", "1e3", "1 / 2", "--1", "1/-2"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(fractions)
def test_format_parse_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_scalar_refuses_floats_and_bools():
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(TypeError):
        scalar(True)
    assert scalar("3/6") == Fraction(1, 2)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_rank_nullity(rows):
    m = LinearMap.from_rows(rows, 4)
    ker = m.kernel()
    assert m.rank() + ker.dim == 4
    for v in ker.basis:
        assert all(x == 0 for x in m.apply(v))
    assert m.image().dim == m.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_inverse_when_invertible(rows):
    m = LinearMap.from_rows(rows, 3)
    if m.rank() < 3:
        with pytest.raises(ZeroDivisionError):
            m.inverse()
    else:
        assert (m @ m.inverse()).is_identity()
        assert (m.inverse() @ m).is_identity()


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3), matrices(3, 3), matrices(3, 3))
def test_composition_is_associative(a, b, c):
    a, b, c = (LinearMap.from_rows(x, 3) for x in (a, b, c))
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ b).transpose() == b.transpose() @ a.transpose()


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3), matrices(3, 3))
def test_sparse_composition_matches_dense(a, b):
    a, b = LinearMap.from_rows(a, 3), LinearMap.from_rows(b, 3)
    assert sm_to_map(sm_compose(sm_from_map(a), sm_from_map(b)), 3) == a @ b


@settings(max_examples=60, deadline=None)
@given(matrices(2, 4), matrices(2, 4))
def test_subspace_dimension_formula(us, ws):
    u, w = span(us, 4), span(ws, 4)
    assert (u + w).dim + u.intersection(w).dim == u.dim + w.dim
    assert u.intersection(w) <= u and u.intersection(w) <= w


@given(st.permutations([[1, 2, 0], [0, 1, 1], [1, 3, 1]]))
def test_span_is_order_independent(vectors):
    assert span(vectors, 3) == span([[1, 2, 0], [0, 1, 1], [1, 3, 1]], 3)


def test_coordinate_subspaces():
    u = coordinate_subspace(4, [2, 0])
    assert u.coordinate_indices() == [0, 2]
    assert u < whole_space(4)
    assert zero_subspace(4) < u
    assert (1, 0, 5, 0) in u
    assert (0, 1, 0, 0) not in u


def test_dimension_mismatch_is_reported():
    with pytest.raises(DimensionError):
        span([[1, 2], [1, 2, 3]])
    with pytest.raises(DimensionError):
        LinearMap.identity(2) + LinearMap.identity(3)
