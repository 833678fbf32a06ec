"""Derivations, involutive derivations and the induced +1/-1 grading."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import ThreeLieAlgebra, bracket_of_subspaces
from .kernel import (
    DimensionError,
    LinearMap,
    Subspace,
    coordinate_subspace,
    sparse_axpy,
    to_dense,
    zero_subspace,
)
from .report import Report, combine, failed, passed


class NotInvolutive(ValueError):
    pass


class NotDerivation(ValueError):
    pass


class NotAdapted(ValueError):
    """The basis does not list the +1 eigenvectors first."""


def _check_square(alg: ThreeLieAlgebra, d: LinearMap) -> None:
    if d.shape != (alg.dim, alg.dim):
        raise DimensionError(f"derivation of shape {d.shape} on a {alg.dim}-dimensional algebra")


def derivation_residual(alg: ThreeLieAlgebra, d: LinearMap, a: int, b: int, c: int) -> dict:
    cols = [d.sparse_column(j) for j in (a, b, c)]
    out = d.apply_sparse(alg.bracket_basis(a, b, c))
    args = (a, b, c)
    for pos in range(3):
        for k, v in cols[pos].items():
            trip = list(args)
            trip[pos] = k
            sparse_axpy(out, -v, alg.bracket_basis(*trip))
    return out


def is_derivation(alg: ThreeLieAlgebra, d: LinearMap) -> Report:
    """Leibniz rule for the ternary bracket on every sorted basis triple."""
    _check_square(alg, d)
    checked = 0
    for a, b, c in combinations(range(alg.dim), 3):
        checked += 1
        res = derivation_residual(alg, d, a, b, c)
        if res:
            return failed("derivation", (a, b, c), to_dense(res, alg.dim), checked=checked)
    return passed("derivation", checked)


@dataclass(frozen=True)
class InvolutiveDerivation:
    map: LinearMap
    plus_space: Subspace
    minus_space: Subspace
    s: int

    @property
    def dim(self) -> int:
        return self.map.rows

    def is_adapted(self) -> bool:
        n = self.dim
        return (
            self.plus_space == coordinate_subspace(n, range(self.s))
            and self.minus_space == coordinate_subspace(n, range(self.s, n))
        )

    def signs(self) -> tuple:
        """+1/-1 per basis vector; only meaningful in an adapted basis."""
        if not self.is_adapted():
            raise NotAdapted("basis is not adapted to the grading")
        return tuple(1 if i < self.s else -1 for i in range(self.dim))


def eigen_split(alg: ThreeLieAlgebra, d: LinearMap) -> InvolutiveDerivation:
    _check_square(alg, d)
    n = alg.dim
    eye = LinearMap.identity(n)
    if not (d @ d).is_identity():
        raise NotInvolutive("the map does not square to the identity")
    rep = is_derivation(alg, d)
    if not rep.ok:
        raise NotDerivation(f"Leibniz rule fails on basis triple {rep.witness}")
    # images of the projectors (I +- D)/2; the factor 1/2 does not change them
    plus = (eye + d).image()
    minus = (eye - d).image()
    return InvolutiveDerivation(d, plus, minus, plus.dim)


def grading_from_signs(signs) -> InvolutiveDerivation:
    """Diagonal involution with the given signs, without any algebra check."""
    n = len(signs)
    d = LinearMap.diagonal(signs)
    plus = coordinate_subspace(n, [i for i, e in enumerate(signs) if e == 1])
    minus = coordinate_subspace(n, [i for i, e in enumerate(signs) if e == -1])
    if plus.dim + minus.dim != n:
        raise NotInvolutive("signs must be +1 or -1")
    return InvolutiveDerivation(d, plus, minus, plus.dim)


def check_grading(g: InvolutiveDerivation, alg: ThreeLieAlgebra) -> Report:
    """The four bracket inclusions forced by an involutive derivation."""
    p, m = g.plus_space, g.minus_space
    n = alg.dim
    zero = zero_subspace(n)
    cases = [
        ("[A+,A+,A+] = 0", (p, p, p), zero),
        ("[A-,A-,A-] = 0", (m, m, m), zero),
        ("[A+,A+,A-] in A+", (p, p, m), p),
        ("[A+,A-,A-] in A-", (p, m, m), m),
    ]
    reports = []
    for name, (u, v, w), target in cases:
        img = bracket_of_subspaces(alg, u, v, w)
        count = u.dim * v.dim * w.dim
        if img <= target:
            reports.append(passed(name, count))
        else:
            bad = next(b for b in img.basis if not target.contains(b))
            reports.append(failed(name, name, bad, detail="image escapes the target subspace", checked=count))
    return combine("grading", reports)


def adapted_basis(alg: ThreeLieAlgebra, g: InvolutiveDerivation) -> tuple:
    """Algebra rewritten in a basis listing A+ (rref order) then A-, plus the change of basis.

    Column j of the returned map is the j-th new basis vector in old coordinates.
    """
    n = alg.dim
    cols = list(g.plus_space.basis) + list(g.minus_space.basis)
    if len(cols) != n:
        raise NotInvolutive("eigenspaces do not span the whole space")
    p = LinearMap.from_columns(cols, rows=n)
    if p.is_identity():
        return alg, p
    order = []
    for c in cols:
        nz = [i for i, x in enumerate(c) if x]
        if len(nz) == 1 and c[nz[0]] == 1:
            order.append(nz[0])
    if len(order) == n:
        return alg.permute(order), p
    return alg.transform(p), p


def adapt(alg: ThreeLieAlgebra, d: LinearMap) -> tuple:
    """eigen_split followed by adapted_basis; returns (algebra, grading, change of basis)."""
    g = eigen_split(alg, d)
    new, p = adapted_basis(alg, g)
    signs = [1] * g.s + [-1] * (alg.dim - g.s)
    return new, grading_from_signs(signs), p
