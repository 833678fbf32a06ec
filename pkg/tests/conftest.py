import random

import pytest

from trilie.derivation import grading_from_signs
from trilie.families import example_algebra, random_graded_batch
from trilie.manin import build_manin, build_pipeline

# acceptance lines, filled by test_acceptance.py and printed after the run
ACCEPTANCE: dict = {}

RANDOM_SEED = 20240611


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


@pytest.fixture(scope="session")
def example():
    """The 4-dimensional example in its (already adapted) basis with its grading."""
    return example_algebra(), grading_from_signs([1, 1, 1, -1])


@pytest.fixture(scope="session")
def example_triple(example):
    alg, g = example
    return build_manin(alg, g, matched_pair=True)


@pytest.fixture(scope="session")
def random_batch():
    """24 random graded algebras of dimension at most 5, with gradings."""
    return [(alg, grading_from_signs(signs)) for alg, signs in random_graded_batch(RANDOM_SEED, 24, 5)]


@pytest.fixture(scope="session")
def random_pipelines(random_batch):
    return [(alg, g, build_pipeline(alg, g)) for alg, g in random_batch]


@pytest.fixture
def rng():
    return random.Random(12345)
