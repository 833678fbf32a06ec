from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trilie.algebra import check_fundamental_identity
from trilie.derivation import (
    NotAdapted,
    NotDerivation,
    NotInvolutive,
    adapt,
    check_grading,
    eigen_split,
    grading_from_signs,
    is_derivation,
)
from trilie.families import example_algebra, example_derivation, pair_extension
from trilie.kernel import LinearMap, coordinate_subspace


def test_example_split():
    g = eigen_split(example_algebra(), example_derivation())
    assert g.s == 3
    assert g.plus_space == coordinate_subspace(4, [0, 1, 2])
    assert g.minus_space == coordinate_subspace(4, [3])
    assert g.is_adapted()
    assert g.signs() == (1, 1, 1, -1)


def test_not_involutive():
    with pytest.raises(NotInvolutive):
        eigen_split(example_algebra(), LinearMap.diagonal([1, 1, 1, 2]))


def test_involution_that_is_not_a_derivation():
    # x1 would need grade +1-1-1 = -1 for [x2,x3,x4] = x1
    with pytest.raises(NotDerivation):
        eigen_split(example_algebra(), LinearMap.diagonal([1, 1, -1, -1]))


@given(st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))
def test_diagonal_derivations_follow_the_grade_rule(signs):
    alg = example_algebra()
    # a diagonal map is a derivation iff every nonzero constant has eps_k = eps_a + eps_b + eps_c
    expected = all(signs[k] == signs[a] + signs[b] + signs[c]
                   for (a, b, c), img in alg.constants.items() for k in img)
    assert is_derivation(alg, LinearMap.diagonal(signs)).ok == expected


def test_non_diagonal_involution_is_adapted():
    alg = example_algebra()
    # the same algebra and involution written in a basis that mixes x1 and x2
    p = LinearMap.from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    moved = alg.transform(p)
    d = p.inverse() @ example_derivation() @ p
    g = eigen_split(moved, d)
    assert g.s == 3
    new, grading, change = adapt(moved, d)
    assert grading.is_adapted()
    assert check_fundamental_identity(new).ok
    assert check_grading(grading, new).ok


def test_grading_inclusions_on_example():
    rep = check_grading(grading_from_signs([1, 1, 1, -1]), example_algebra())
    assert rep.ok
    assert [p.check for p in rep.extra["parts"]] == [
        "[A+,A+,A+] = 0", "[A-,A-,A-] = 0", "[A+,A+,A-] in A+", "[A+,A-,A-] in A-",
    ]


def test_grading_violation_has_witness():
    alg, _ = pair_extension([[1]], [])
    bad = grading_from_signs([1, 1, 1])
    rep = check_grading(bad, alg)
    assert not rep.ok and rep.witness is not None


def test_signs_need_adapted_basis():
    with pytest.raises(NotInvolutive):
        grading_from_signs([1, 0, -1])
    g = grading_from_signs([-1, 1])
    with pytest.raises(NotAdapted):
        g.signs()


@pytest.mark.parametrize("m_plus,m_minus", list(product([[], [[2]]], [[], [[1, 1], [0, -1]]])))
def test_pair_extension_gradings(m_plus, m_minus):
    alg, signs = pair_extension(m_plus, m_minus)
    assert check_fundamental_identity(alg).ok
    assert is_derivation(alg, LinearMap.diagonal(signs)).ok
