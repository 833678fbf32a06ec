from fractions import Fraction

import pytest

from trilie.algebra import ThreeLieAlgebra
from trilie.derivation import grading_from_signs
from trilie.families import example_algebra
from trilie.kernel import LinearMap, coordinate_subspace
from trilie.manin import (
    BracketConflict,
    PairingForm,
    PipelineError,
    build_manin,
    build_pipeline,
    check_containment,
    check_derivation_images,
    check_invariance,
    check_isotropic,
    check_matched_pair,
    compare_semidirect,
    first_bracket,
    second_bracket,
    semidirect_closed_forms,
    standard_form,
    total_bracket,
)
from trilie.bialgebra import ClosedFormMismatch


def test_standard_form():
    form = standard_form(4)
    assert form.dim == 16
    # x1 pairs with y1*, x1* with y1
    assert form.basis_value(0, 12) == 1 and form.basis_value(4, 8) == 1
    assert form.basis_value(0, 8) == 0 and form.basis_value(0, 1) == 0
    with pytest.raises(ValueError):
        PairingForm(LinearMap.from_rows([[1, 0], [0, 0]]))
    with pytest.raises(ValueError):
        PairingForm(LinearMap.from_rows([[0, 1], [2, 0]]))


def test_example_triple(example_triple):
    t = example_triple
    assert t.dim == 16
    assert t.check().ok
    assert t.restriction_report().ok
    assert len(t.total.constants) == 64


def test_example_brackets_across_blocks(example_triple):
    br = example_triple.total.bracket_basis
    # x3, x4 in B1 acting on y1 in B2
    assert br(2, 3, 8) == {9: Fraction(1)}
    # the restriction to B1 keeps the original bracket
    assert br(1, 2, 3) == {0: Fraction(1)}


def test_invariance_fails_on_a_changed_bracket(example_triple):
    t = example_triple
    bad = t.total.perturbed((2, 3, 8), 9, 1)
    rep = check_invariance(bad, t.form)
    assert not rep.ok and rep.witness is not None


def test_isotropy_and_containment(example_triple):
    t = example_triple
    assert check_isotropic(t.form, t.part1).ok
    # a subspace containing a pair x1, y1* is not isotropic
    rep = check_isotropic(t.form, coordinate_subspace(16, [0, 12]))
    assert not rep.ok
    assert check_containment(t.total, t.part1, t.part1, t.part2, t.part2, "mixed").ok
    assert not check_containment(t.total, t.part1, t.part1, t.part2, t.part1, "wrong target").ok


def test_total_bracket_rejects_overlaps():
    a = ThreeLieAlgebra(4, {(0, 1, 2): {3: 1}})
    b = ThreeLieAlgebra(4, {(0, 1, 2): {3: 2}})
    with pytest.raises(BracketConflict):
        total_bracket(a, b)


def test_semidirect_closed_forms(random_batch):
    for alg, g in [(example_algebra(), grading_from_signs([1, 1, 1, -1]))] + random_batch[:6]:
        p = build_pipeline(alg, g)
        generic = (first_bracket(p.b1, p.adelta, verify=False), second_bracket(p.b2, p.apsi, verify=False))
        compare_semidirect(generic, semidirect_closed_forms(alg, g))


def test_semidirect_comparison_names_the_difference(example):
    alg, g = example
    first, second = semidirect_closed_forms(alg, g)
    key = next(iter(first.constants))
    k = next(iter(first.constants[key]))
    with pytest.raises(ClosedFormMismatch):
        compare_semidirect((first.perturbed(key, k, 1), second), (first, second))


def test_matched_pair(example_triple, random_batch):
    t = example_triple
    assert check_matched_pair(t.b1, t.b2, t.adelta, t.apsi).ok
    for alg, g in random_batch[:8]:
        p = build_pipeline(alg, g)
        assert check_matched_pair(p.b1, p.b2, p.adelta, p.apsi).ok
        assert check_derivation_images(alg, g).ok


def test_matched_pair_rejects_a_scaled_action(example_triple):
    t = example_triple
    from trilie.representation import Representation

    scaled = Representation(t.b1, t.adelta.space_dim,
                            {k: {j: {i: 2 * v for i, v in col.items()} for j, col in m.items()}
                             for k, m in t.adelta.action.items()})
    rep = check_matched_pair(t.b1, t.b2, scaled, t.apsi)
    assert not rep.ok and rep.witness is not None


def test_pipeline_names_the_failing_stage():
    alg = example_algebra()
    with pytest.raises(PipelineError) as err:
        build_manin(alg, grading_from_signs([1, 1, -1, -1]))
    assert err.value.stage == "grading"
    broken = ThreeLieAlgebra(4, {(0, 1, 2): {3: 1}, (0, 1, 3): {0: 1}})
    with pytest.raises(PipelineError) as err:
        build_manin(broken, grading_from_signs([1, 1, 1, -1]))
    assert err.value.stage == "fundamental identity"
    assert err.value.report.witness is not None
