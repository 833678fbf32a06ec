from fractions import Fraction

import pytest

from trilie import bialgebra
from trilie.algebra import check_fundamental_identity
from trilie.bialgebra import (
    ClosedFormMismatch,
    Comultiplication,
    b2_closed_form,
    check_local_cocycle,
    check_round_trip,
    compare_comultiplications,
    cybe_bracket,
    delta_closed_form,
    delta_from_r,
    dual_algebra,
    pair_index,
    r_matrix,
    swap,
)
from trilie.derivation import grading_from_signs
from trilie.families import example_algebra
from trilie.representation import b1


@pytest.fixture(scope="module")
def ex():
    alg = example_algebra()
    g = grading_from_signs([1, 1, 1, -1])
    first = b1(alg)
    return alg, g, first


def test_r_matrix_is_skew(ex):
    _, g, _ = ex
    r = r_matrix(g)
    assert swap(r).terms == {k: -v for k, v in r.terms.items()}


def test_cybe_vanishes(ex, random_batch):
    _, g, first = ex
    assert cybe_bracket(r_matrix(g), first) == {}
    for alg, gg in random_batch:
        assert cybe_bracket(r_matrix(gg), b1(alg)) == {}


def test_comultiplication_closed_form(ex, random_batch):
    for alg, g in [ex[:2]] + random_batch:
        com = delta_from_r(b1(alg), g, alg)
        assert compare_comultiplications(com.delta, delta_closed_form(alg, g)) is None


CHANGING = [e for e in bialgebra.DELTA_PLAIN_CORRECTIONS if e[2]]
DROPPED = [e for e in bialgebra.DELTA_PLAIN_CORRECTIONS if not e[2]]


@pytest.mark.parametrize("correction", CHANGING, ids=lambda e: f"{e[0]}{''.join(e[1])}")
def test_each_comultiplication_correction_is_needed(correction, ex, random_batch, monkeypatch):
    others = [e for e in bialgebra.DELTA_PLAIN_CORRECTIONS if e != correction]
    monkeypatch.setattr(bialgebra, "DELTA_PLAIN_CORRECTIONS", others)
    caught = 0
    for alg, g in [ex[:2]] + random_batch:
        try:
            delta_from_r(b1(alg), g, alg)
        except ClosedFormMismatch:
            caught += 1
    assert caught > 0


@pytest.mark.parametrize("correction", DROPPED, ids=lambda e: f"{e[0]}{''.join(e[1])}")
def test_dropped_pattern_is_zero_by_grading(correction):
    # Γ^j_{tik} needs eps_j = eps_t + eps_i + eps_k, impossible for every t on this pattern
    group, (gi, gj, gk), _ = correction
    sign = {"+": 1, "-": -1}
    assert group == "j_tik"
    assert all(sign[gj] != et + sign[gi] + sign[gk] for et in (1, -1))


def test_local_cocycle(ex, random_batch):
    for alg, g in [ex[:2]] + random_batch[:10]:
        first = b1(alg)
        assert check_local_cocycle(delta_from_r(first, g), first).ok


def test_perturbed_comultiplication_breaks_cocycle(ex):
    alg, g, first = ex
    com = delta_from_r(first, g)
    t = next(iter(com.delta1))
    key = next(iter(com.delta1[t]))
    bad = com.perturbed(t, key, Fraction(1))
    rep = check_local_cocycle(bad, first)
    assert not rep.ok and rep.witness is not None


def test_dual_algebra(ex, random_batch):
    for alg, g in [ex[:2]] + random_batch:
        com = delta_from_r(b1(alg), g)
        second = dual_algebra(com)
        assert second.dim == 2 * alg.dim
        assert check_fundamental_identity(second).ok
        assert b2_closed_form(alg, g) == second
        assert check_round_trip(com, second).ok


def test_round_trip_detects_a_changed_bracket(ex):
    alg, g, first = ex
    com = delta_from_r(first, g)
    second = dual_algebra(com)
    key = next(iter(second.constants))
    k = next(iter(second.constants[key]))
    rep = check_round_trip(com, second.perturbed(key, k, 1))
    assert not rep.ok


def test_pair_index():
    assert [pair_index(p, 8) for p in range(8)] == [4, 5, 6, 7, 0, 1, 2, 3]


def test_comultiplication_parts_are_rotations(ex):
    _, g, first = ex
    com = delta_from_r(first, g)
    assert isinstance(com, Comultiplication)
    for t, img in com.delta1.items():
        for (i, j, k), v in img.items():
            assert com.delta2[t][(k, i, j)] == v
            assert com.delta3[t][(j, k, i)] == v
