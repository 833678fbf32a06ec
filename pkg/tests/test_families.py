import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trilie.algebra import check_fundamental_identity
from trilie.derivation import check_grading, grading_from_signs, is_derivation
from trilie.families import (
    LIE_MODULES,
    graded_basis_change,
    lie_extension,
    nilpotent_graded,
    random_graded,
    random_graded_batch,
)
from trilie.kernel import LinearMap


@pytest.mark.parametrize("name", sorted(LIE_MODULES))
@pytest.mark.parametrize("grade", [1, -1])
def test_lie_extensions(name, grade):
    lie, rho = LIE_MODULES[name]
    alg, signs = lie_extension(lie, rho, grade)
    assert alg.dim == 1 + len(rho) + len(rho[0])
    assert check_fundamental_identity(alg).ok
    assert is_derivation(alg, LinearMap.diagonal(signs)).ok
    assert grading_from_signs(signs).is_adapted()


def test_nilpotent_family(rng):
    alg, signs = nilpotent_graded(2, 1, 1, 1, rng)
    assert check_fundamental_identity(alg).ok
    assert check_grading(grading_from_signs(signs), alg).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 6))
def test_random_graded_is_valid(seed, max_dim):
    alg, signs = random_graded(random.Random(seed), max_dim)
    assert alg.dim <= max_dim
    assert list(signs) == sorted(signs, reverse=True)
    assert check_fundamental_identity(alg).ok
    assert check_grading(grading_from_signs(signs), alg).ok


def test_basis_change_keeps_grading(rng):
    lie, rho = LIE_MODULES["sl2"]
    alg, signs = lie_extension(lie, rho)
    moved = graded_basis_change(alg, signs, rng)
    assert check_fundamental_identity(moved).ok
    assert check_grading(grading_from_signs(signs), moved).ok


def test_batches_are_reproducible():
    assert random_graded_batch(5, 6) == random_graded_batch(5, 6)
    kinds = {len(a.constants) > 0 for a, _ in random_graded_batch(5, 12)}
    assert True in kinds
