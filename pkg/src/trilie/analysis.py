"""Derived and lower central series, ideal closures and abelian-ideal checks."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import ThreeLieAlgebra, bracket_of_subspaces
from .kernel import LinearMap, Subspace, span, whole_space
from .report import Report


@dataclass(frozen=True)
class SeriesReport:
    """Terms of a descending series, starting with [B, B, B].

    ``index`` is the solvability index r (B^(r+1) = 0) for the derived
    series and the nilpotency class (first vanishing term) for the lower
    central series; None when the series did not reach zero.
    """

    kind: str
    terms: tuple
    verdict: str
    index: int | None
    stable: bool
    bound: int

    @property
    def dims(self) -> tuple:
        return tuple(t.dim for t in self.terms)

    def term(self, r: int) -> Subspace:
        """B^(r) or B^r with r counted from 1; a stable series repeats its last term."""
        if r > len(self.terms) and (self.stable or not self.terms[-1].dim):
            return self.terms[-1]
        return self.terms[r - 1]


def _series(alg: ThreeLieAlgebra, kind: str, step, bound: int | None) -> SeriesReport:
    n = alg.dim
    if bound is None:
        bound = 2 * n
    whole = whole_space(n)
    terms = [bracket_of_subspaces(alg, whole, whole, whole)]
    stable = False
    while terms[-1].dim and len(terms) < bound:
        nxt = step(terms[-1], whole)
        if nxt == terms[-1]:
            stable = True
            break
        terms.append(nxt)
    return SeriesReport(kind, tuple(terms), "", None, stable, bound)


def derived_series(alg: ThreeLieAlgebra, bound: int | None = None) -> SeriesReport:
    """B^(1) = [B,B,B] and B^(r+1) = [B^(r), B^(r), B]."""
    rep = _series(alg, "derived", lambda t, w: bracket_of_subspaces(alg, t, t, w), bound)
    if rep.terms[-1].dim == 0:
        r = len(rep.terms) - 1
        verdict = f"{r}-solvable"
        return SeriesReport(rep.kind, rep.terms, verdict, r, False, rep.bound)
    if rep.stable:
        verdict = f"not solvable (stable at dim {rep.terms[-1].dim})"
    else:
        verdict = "not solvable within bound"
    return SeriesReport(rep.kind, rep.terms, verdict, None, rep.stable, rep.bound)


def lower_central_series(alg: ThreeLieAlgebra, bound: int | None = None) -> SeriesReport:
    """B^1 = [B,B,B] and B^(r+1) = [B^r, B, B]."""
    rep = _series(alg, "lower-central", lambda t, w: bracket_of_subspaces(alg, t, w, w), bound)
    if rep.terms[-1].dim == 0:
        c = len(rep.terms)
        return SeriesReport(rep.kind, rep.terms, f"nilpotent of class {c}", c, False, rep.bound)
    if rep.stable:
        verdict = f"non-nilpotent (stable at dim {rep.terms[-1].dim})"
    else:
        verdict = "not nilpotent within bound"
    return SeriesReport(rep.kind, rep.terms, verdict, None, rep.stable, rep.bound)


def ideal_closure(alg: ThreeLieAlgebra, seed: Subspace) -> Subspace:
    """Smallest I containing ``seed`` with [I, B, B] ⊆ I."""
    whole = whole_space(alg.dim)
    cur = seed
    while True:
        nxt = cur + bracket_of_subspaces(alg, cur, whole, whole)
        if nxt == cur:
            return cur
        cur = nxt


def check_ideal(alg: ThreeLieAlgebra, sub: Subspace) -> Report:
    """Ideal test plus both abelian conventions: [I,I,I] = 0 and [I,I,B] = 0.

    ``ok`` is the ideal test; the three flags sit in ``extra``.
    """
    whole = whole_space(alg.dim)
    is_ideal = bracket_of_subspaces(alg, sub, whole, whole) <= sub
    weak = bracket_of_subspaces(alg, sub, sub, sub).dim == 0
    strong = bracket_of_subspaces(alg, sub, sub, whole).dim == 0
    flags = {"is_ideal": is_ideal, "abelian_weak": weak, "abelian_strong": strong}
    detail = ", ".join(f"{k}={v}" for k, v in flags.items())
    return Report("ideal", is_ideal, witness=None if is_ideal else "[I,B,B] not in I",
                  detail=detail, checked=3, extra=flags)


@dataclass(frozen=True)
class ProbeReport:
    """Ideals generated by single basis vectors, compared with a candidate ideal.

    This certifies minimality only among basis-generated ideals.
    """

    candidate: Subspace
    closures: tuple            # closure of <e_v> for each basis index v
    distinct: tuple            # distinct nonzero closures, by dimension then basis
    minimal: tuple             # distinct closures containing no other nonzero closure
    below: tuple               # nonzero closures strictly inside the candidate
    contain_candidate: tuple   # basis indices whose closure contains the candidate

    @property
    def consistent(self) -> bool:
        """No basis-generated nonzero ideal sits strictly inside the candidate."""
        return not self.below

    @property
    def unique_minimum(self) -> bool:
        return len(self.minimal) == 1

    def summary(self) -> str:
        word = "consistent with minimality" if self.consistent else "not minimal"
        return (f"minimality probe (basis-generated ideals only): {word}; "
                f"{len(self.distinct)} distinct closures, {len(self.minimal)} minimal, "
                f"{len(self.below)} strictly inside the candidate")


def minimality_probe(alg: ThreeLieAlgebra, candidate: Subspace) -> ProbeReport:
    n = alg.dim
    closures = []
    for v in range(n):
        unit = [0] * n
        unit[v] = 1
        closures.append(ideal_closure(alg, span([unit], n)))
    seen = []
    for c in closures:
        if c.dim and c not in seen:
            seen.append(c)
    seen.sort(key=lambda s: (s.dim, s.basis))
    minimal = tuple(c for c in seen if not any(o < c for o in seen))
    below = tuple(c for c in seen if c < candidate)
    contain = tuple(v for v, c in enumerate(closures) if candidate <= c)
    return ProbeReport(candidate, tuple(closures), tuple(seen), minimal, below, contain)


def centre(alg: ThreeLieAlgebra) -> Subspace:
    """Elements z with [z, B, B] = 0."""
    n = alg.dim
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            m = alg.ad_matrix(a, b)
            rows.extend(m.tolist())
    if not rows:
        return whole_space(n)
    return LinearMap.from_rows(rows, n).kernel()
