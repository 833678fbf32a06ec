from trilie.algebra import ThreeLieAlgebra, abelian
from trilie.analysis import (
    centre,
    check_ideal,
    derived_series,
    ideal_closure,
    lower_central_series,
    minimality_probe,
)
from trilie.families import example_algebra, simple_four
from trilie.kernel import coordinate_subspace, whole_space, zero_subspace


def heisenberg_like():
    # [e1,e2,e3] = e4 with e4 central
    return ThreeLieAlgebra(4, {(0, 1, 2): {3: 1}})


def test_example_series():
    alg = example_algebra()
    der = derived_series(alg)
    assert der.terms[0] == coordinate_subspace(4, [0, 1])
    assert der.verdict == "1-solvable" and der.index == 1
    low = lower_central_series(alg)
    assert low.verdict.startswith("non-nilpotent") and low.index is None
    assert low.term(5) == coordinate_subspace(4, [0, 1])


def test_abelian_conventions():
    alg = abelian(3)
    assert derived_series(alg).verdict == "0-solvable"
    assert lower_central_series(alg).verdict == "nilpotent of class 1"


def test_nilpotent_algebra():
    alg = heisenberg_like()
    assert lower_central_series(alg).verdict == "nilpotent of class 2"
    assert derived_series(alg).verdict == "1-solvable"
    assert derived_series(alg).term(4).dim == 0


def test_simple_algebra_is_perfect():
    der = derived_series(simple_four())
    assert der.verdict == "not solvable (stable at dim 4)"
    assert der.dims == (4,)


def test_bound_stops_the_series():
    alg = heisenberg_like()
    assert lower_central_series(alg, bound=1).verdict == "not nilpotent within bound"


def test_ideal_closure_and_flags():
    alg = example_algebra()
    # x3 generates x1 and x2 through [x3, x4, x2] and [x3, x4, x1]
    closure = ideal_closure(alg, coordinate_subspace(4, [2]))
    assert closure == coordinate_subspace(4, [0, 1, 2])
    rep = check_ideal(alg, coordinate_subspace(4, [0, 1]))
    assert rep.ok
    assert rep.extra == {"is_ideal": True, "abelian_weak": True, "abelian_strong": True}
    rep = check_ideal(alg, coordinate_subspace(4, [3]))
    assert not rep.ok and rep.extra["abelian_weak"]


def test_centre():
    assert centre(heisenberg_like()) == coordinate_subspace(4, [3])
    assert centre(abelian(3)) == whole_space(3)
    assert centre(simple_four()) == zero_subspace(4)


def test_minimality_probe():
    alg = heisenberg_like()
    probe = minimality_probe(alg, coordinate_subspace(4, [3]))
    assert probe.consistent and probe.unique_minimum
    assert probe.contain_candidate == (0, 1, 2, 3)
    probe = minimality_probe(alg, whole_space(4))
    assert not probe.consistent
    assert "not minimal" in probe.summary()
