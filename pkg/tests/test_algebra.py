from fractions import Fraction
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trilie.algebra import (
    SignConflictError,
    ThreeLieAlgebra,
    abelian,
    bracket_of_subspaces,
    check_fundamental_identity,
    check_homomorphism,
    direct_sum,
    fundamental_identity_residual,
    sort_with_sign,
)
from trilie.families import example_algebra, simple_four
from trilie.kernel import LinearMap, coordinate_subspace, whole_space


def perm_sign(seq):
    inversions = sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def levi_civita(n=4):
    """[e_a, e_b, e_c] = sum_d eps_{abcd} e_d, the simple 4-dimensional 3-Lie algebra."""
    table = {}
    for a, b, c in combinations(range(n), 3):
        d = next(i for i in range(n) if i not in (a, b, c))
        table[(a, b, c)] = {d: perm_sign((a, b, c, d))}
    return ThreeLieAlgebra(n, table)


def brute_force_fi(alg):
    """Evaluation of the fundamental identity on every basis 5-tuple, no pruning."""
    n = alg.dim

    def br(u, v, w):
        # trilinear extension of the basis bracket to sparse vectors
        out = {}
        for i, x in u.items():
            for j, y in v.items():
                for k, z in w.items():
                    for m, c in alg.bracket_basis(i, j, k).items():
                        out[m] = out.get(m, 0) + x * y * z * c
        return {m: c for m, c in out.items() if c}

    e = [{i: Fraction(1)} for i in range(n)]
    for a, b, c, d, f in product(range(n), repeat=5):
        lhs = br(e[a], e[b], br(e[c], e[d], e[f]))
        rhs = {}
        for term in (br(br(e[a], e[b], e[c]), e[d], e[f]), br(e[c], br(e[a], e[b], e[d]), e[f]),
                     br(e[c], e[d], br(e[a], e[b], e[f]))):
            for m, x in term.items():
                rhs[m] = rhs.get(m, 0) + x
        if lhs != {m: x for m, x in rhs.items() if x}:
            return False
    return True


def test_simple_four_is_levi_civita():
    assert simple_four() == levi_civita()


def test_sort_with_sign():
    assert sort_with_sign((2, 0, 1)) == ((0, 1, 2), 1)
    assert sort_with_sign((1, 0, 2)) == ((0, 1, 2), -1)
    assert sort_with_sign((1, 1, 2))[1] == 0


def test_example_brackets_and_skew_symmetry():
    alg = example_algebra()
    assert alg.structure_constant(0, 1, 2, 3) == 1
    assert alg.structure_constant(1, 0, 2, 3) == 1
    for perm in permutations((1, 2, 3)):
        _, sign = sort_with_sign(perm)
        assert alg.bracket_basis(*perm) == {0: Fraction(sign)}
    assert alg.bracket_basis(1, 1, 3) == {}


def test_duplicate_entries_must_agree():
    same = ThreeLieAlgebra.from_entries(4, [((1, 2, 3), {0: 1}), ((2, 1, 3), {0: -1})])
    assert same == ThreeLieAlgebra(4, {(1, 2, 3): {0: 1}})
    with pytest.raises(SignConflictError):
        ThreeLieAlgebra.from_entries(4, [((1, 2, 3), {0: 1}), ((2, 1, 3), {0: 1})])
    with pytest.raises(SignConflictError):
        ThreeLieAlgebra(4, {(1, 1, 3): {0: 1}})


@pytest.mark.parametrize("alg", [abelian(5), example_algebra(), levi_civita()], ids=["abelian", "example", "simple4"])
def test_known_three_lie_algebras_pass(alg):
    rep = check_fundamental_identity(alg)
    assert rep.ok
    n = alg.dim
    assert rep.checked == (n * (n - 1) // 2) * (n * (n - 1) * (n - 2) // 6)


def test_violation_reports_lowest_tuple_with_residual():
    # [e1,e2,e3] = e4 and [e1,e2,e4] = e1: ad(e1, e2) is not a derivation
    alg = ThreeLieAlgebra(4, {(0, 1, 2): {3: 1}, (0, 1, 3): {0: 1}})
    rep = check_fundamental_identity(alg)
    assert not rep.ok
    a, b, c, d, e = rep.witness
    res = fundamental_identity_residual(alg, a, b, c, d, e)
    assert res and tuple(res.get(i, 0) for i in range(4)) == rep.residual
    assert not brute_force_fi(alg)


sparse_tables = st.dictionaries(
    st.sampled_from(list(combinations(range(4), 3))),
    st.dictionaries(st.integers(0, 3), st.integers(-2, 2), max_size=2),
    max_size=3,
)


@settings(max_examples=40, deadline=None)
@given(sparse_tables)
def test_fundamental_identity_matches_brute_force(table):
    alg = ThreeLieAlgebra(4, table)
    assert check_fundamental_identity(alg).ok == brute_force_fi(alg)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=4, max_size=4))
def test_basis_change_preserves_the_identity(rows):
    p = LinearMap.from_rows(rows, 4)
    if p.rank() < 4:
        return
    alg = example_algebra()
    new = alg.transform(p)
    assert check_fundamental_identity(new).ok
    # p maps the new coordinates back to the old ones
    assert check_homomorphism(p, new, alg).ok


def test_direct_sum_and_permute():
    s = direct_sum(example_algebra(), levi_civita())
    assert s.dim == 8 and check_fundamental_identity(s).ok
    assert s.bracket_basis(4, 5, 6) == {7: Fraction(1)}
    assert s.bracket_basis(4, 5, 7) == {6: Fraction(-1)}
    back = s.permute(list(reversed(range(8))))
    assert check_fundamental_identity(back).ok
    assert back.bracket_basis(3, 2, 1) == {0: Fraction(1)}


def test_perturbation_changes_one_constant():
    alg = example_algebra()
    bumped = alg.perturbed((1, 2, 3), 0, Fraction(1, 2))
    assert bumped.structure_constant(0, 1, 2, 3) == Fraction(3, 2)
    assert bumped.structure_constant(1, 0, 2, 3) == 1


def test_bracket_of_subspaces():
    alg = example_algebra()
    whole = whole_space(4)
    assert bracket_of_subspaces(alg, whole, whole, whole) == coordinate_subspace(4, [0, 1])
    span12 = coordinate_subspace(4, [0, 1])
    assert bracket_of_subspaces(alg, span12, span12, whole).dim == 0
