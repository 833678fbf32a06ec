"""Representations of 3-Lie algebras, semidirect products and the B1 case table.

An action is stored per sorted basis pair (a, b) as a sparse map
{column: {row: value}}; reversed pairs pick up a sign and equal indices act by 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import ThreeLieAlgebra, check_fundamental_identity
from .derivation import InvolutiveDerivation, NotAdapted
from .kernel import (
    LinearMap,
    sm_apply,
    sm_axpy,
    sm_compose,
    sm_from_map,
    sm_to_map,
    sm_transpose,
    to_dense,
)
from .report import Report, combine, failed, passed


class RepresentationError(ValueError):
    pass


@dataclass
class Representation:
    base: ThreeLieAlgebra
    space_dim: int
    action: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), m in self.action.items():
            if isinstance(m, LinearMap):
                if m.shape != (self.space_dim, self.space_dim):
                    raise RepresentationError(f"action matrix for {(a, b)} has shape {m.shape}")
                m = sm_from_map(m)
            if a == b:
                if m:
                    raise RepresentationError("an action on a repeated pair must vanish")
                continue
            if a > b:
                a, b = b, a
                m = _neg(m)
            if m:
                clean[(a, b)] = m
        self.action = dict(sorted(clean.items()))

    def act(self, a: int, b: int) -> dict:
        if a == b:
            return {}
        if a < b:
            return self.action.get((a, b), {})
        return _neg(self.action.get((b, a), {}))

    def act_vector(self, u: dict, b: int) -> dict:
        """Sparse map of rho(u, x_b) for a sparse vector u."""
        out: dict = {}
        for a, c in u.items():
            sm_axpy(out, c, self.act(a, b))
        return out

    def matrix(self, a: int, b: int) -> LinearMap:
        return sm_to_map(self.act(a, b), self.space_dim)


def _neg(m: dict) -> dict:
    return {j: {i: -v for i, v in col.items()} for j, col in m.items()}


def _sub(a: dict, b: dict) -> dict:
    out = {j: dict(col) for j, col in a.items()}
    sm_axpy(out, -1, b)
    return out


def _int_maps(r: Representation):
    """Action and structure constants scaled by one common denominator."""
    from .algebra import IntegerView, common_denominator

    vals = [v for m in r.action.values() for col in m.values() for v in col.values()]
    vals += [v for img in r.base.constants.values() for v in img.values()]
    scale = common_denominator(vals)
    act = {}
    for (a, b), m in r.action.items():
        im = {j: {i: int(v * scale) for i, v in col.items()} for j, col in m.items()}
        act[(a, b)] = im
        act[(b, a)] = {j: {i: -v for i, v in col.items()} for j, col in im.items()}
    return scale, act, IntegerView(r.base, scale)


def _iapply(m: dict, v: dict, c: int, out: dict) -> None:
    for j, x in v.items():
        col = m.get(j)
        if col:
            cx = c * x
            for i, y in col.items():
                t = out.get(i, 0) + cx * y
                if t:
                    out[i] = t
                else:
                    del out[i]


def _icompose_into(a: dict, b: dict, c: int, out: dict) -> None:
    """out += c * (a∘b), columns as dicts."""
    for j, col in b.items():
        tgt = out.setdefault(j, {})
        _iapply(a, col, c, tgt)
        if not tgt:
            del out[j]


def _iact_vector_into(act: dict, u: dict, b: int, c: int, out: dict) -> None:
    for a, x in u.items():
        m = act.get((a, b))
        if m:
            for j, col in m.items():
                tgt = out.setdefault(j, {})
                cx = c * x
                for i, y in col.items():
                    t = tgt.get(i, 0) + cx * y
                    if t:
                        tgt[i] = t
                    else:
                        del tgt[i]
                if not tgt:
                    del out[j]


def _to_fraction_map(m: dict, den: int, dim: int) -> LinearMap:
    from fractions import Fraction

    return sm_to_map({j: {i: Fraction(v, den) for i, v in col.items()} for j, col in m.items()}, dim)


def check_representation(r: Representation, name: str = "representation") -> Report:
    """Both module axioms on basis tuples.

    The commutator axiom runs over pairs (a<b), (c<d); the product axiom
    over a<b<c and every d.  Both sides are quadratic in the data, so the
    check runs on integer-scaled copies.
    """
    alg = r.base
    n = alg.dim
    scale, act, view = _int_maps(r)
    den = scale * scale
    pairs = list(combinations(range(n), 2))
    empty: dict = {}
    checked = 0
    first = None
    for a, b in pairs:
        rab = act.get((a, b), empty)
        for c, d in pairs:
            checked += 1
            rcd = act.get((c, d), empty)
            lhs: dict = {}
            if rab and rcd:
                _icompose_into(rab, rcd, 1, lhs)
                _icompose_into(rcd, rab, -1, lhs)
            _iact_vector_into(act, view.br(a, b, c), d, -1, lhs)
            # rho(x_c, w) = -rho(w, x_c)
            _iact_vector_into(act, view.br(a, b, d), c, 1, lhs)
            if lhs:
                first = failed("module commutator axiom", (a, b, c, d),
                               _to_fraction_map(lhs, den, r.space_dim), checked=checked)
                break
        if first:
            break
    rep1 = first or passed("module commutator axiom", checked)
    checked = 0
    second = None
    for a, b, c in combinations(range(n), 3):
        for d in range(n):
            checked += 1
            lhs = {}
            _iact_vector_into(act, view.br(a, b, c), d, 1, lhs)
            for (p, q), (u, w) in (((a, b), (c, d)), ((b, c), (a, d)), ((c, a), (b, d))):
                m1, m2 = act.get((p, q)), act.get((u, w))
                if m1 and m2:
                    _icompose_into(m1, m2, -1, lhs)
            if lhs:
                second = failed("module product axiom", (a, b, c, d),
                                _to_fraction_map(lhs, den, r.space_dim), checked=checked)
                break
        if second:
            break
    rep2 = second or passed("module product axiom", checked)
    return combine(name, [rep1, rep2])


def adjoint_rep(alg: ThreeLieAlgebra) -> Representation:
    action = {}
    for a, b in combinations(range(alg.dim), 2):
        m = alg.ad_sparse(a, b)
        if m:
            action[(a, b)] = {t: dict(col) for t, col in m.items()}
    return Representation(alg, alg.dim, action)


def coadjoint_rep(alg: ThreeLieAlgebra) -> Representation:
    """Action on the dual space: minus the transpose of the adjoint action."""
    action = {}
    for a, b in combinations(range(alg.dim), 2):
        m = alg.ad_sparse(a, b)
        if m:
            action[(a, b)] = _neg(sm_transpose(m))
    return Representation(alg, alg.dim, action)


def zero_rep(alg: ThreeLieAlgebra, space_dim: int) -> Representation:
    return Representation(alg, space_dim, {})


def semidirect_table(alg: ThreeLieAlgebra, r: Representation) -> dict:
    """Structure constants of alg ⋉ V: A's bracket plus (x_a, x_b, v) -> rho(x_a, x_b) v."""
    n = alg.dim
    table = {k: dict(v) for k, v in alg.constants.items()}
    for (a, b), m in r.action.items():
        for j, col in m.items():
            table[(a, b, n + j)] = {n + i: v for i, v in col.items()}
    return table


def semidirect_product(alg: ThreeLieAlgebra, r: Representation, labels=None, verify: bool = True) -> ThreeLieAlgebra:
    if verify:
        rep = check_representation(r)
        if not rep.ok:
            raise RepresentationError(f"module axiom fails at {rep.witness}: {rep.detail}")
    dim = alg.dim + r.space_dim
    if labels is None:
        labels = list(alg.labels) + [f"v{j + 1}" for j in range(r.space_dim)]
    out = ThreeLieAlgebra(dim, semidirect_table(alg, r), labels)
    if verify:
        fi = check_fundamental_identity(out)
        if not fi.ok:
            raise RepresentationError(f"semidirect product violates the fundamental identity at {fi.witness}")
    return out


def dual_labels(alg: ThreeLieAlgebra) -> list:
    return list(alg.labels) + [f"{l}*" for l in alg.labels]


def b1(alg: ThreeLieAlgebra, verify: bool = True) -> ThreeLieAlgebra:
    """A ⋉ A* through the generic coadjoint construction."""
    return semidirect_product(alg, coadjoint_rep(alg), labels=dual_labels(alg), verify=verify)


# Case table for the brackets of B1 in an adapted basis.  Keys are the grade
# patterns of (a, b, c) with a before b; values give the grade of the summed
# index k and the overall sign, or None when the bracket vanishes.
B1_PLAIN_CASES = {
    ("+", "+", "-"): ("+", 1),
    ("+", "-", "-"): ("-", 1),
    ("+", "+", "+"): None,
    ("-", "-", "-"): None,
}

B1_DUAL_CASES = {
    ("+", "+", "+"): ("-", -1),
    ("-", "-", "-"): ("+", -1),
    ("+", "-", "+"): ("+", -1),
    ("+", "-", "-"): ("-", -1),
    ("+", "+", "-"): None,
    ("-", "-", "+"): None,
}


def _grade(i: int, s: int) -> str:
    return "+" if i < s else "-"


def _range(sym: str, s: int, n: int) -> range:
    return range(0, s) if sym == "+" else range(s, n)


def b1_closed_form(alg: ThreeLieAlgebra, g: InvolutiveDerivation) -> ThreeLieAlgebra:
    """B1 read off the graded case table instead of the coadjoint action."""
    if not g.is_adapted() or g.dim != alg.dim:
        raise NotAdapted("closed forms need a basis with the +1 eigenvectors first")
    n, s = alg.dim, g.s
    gam = alg.structure_constant
    table: dict = {}
    for a, b, c in combinations(range(n), 3):
        case = B1_PLAIN_CASES[(_grade(a, s), _grade(b, s), _grade(c, s))]
        if case is None:
            continue
        krange, sign = case
        img = {k: sign * gam(k, a, b, c) for k in _range(krange, s, n) if gam(k, a, b, c)}
        if img:
            table[(a, b, c)] = img
    for a, b in combinations(range(n), 2):
        for c in range(n):
            case = B1_DUAL_CASES.get((_grade(a, s), _grade(b, s), _grade(c, s)))
            if case is None:
                continue
            krange, sign = case
            img = {n + k: sign * gam(c, a, b, k) for k in _range(krange, s, n) if gam(c, a, b, k)}
            if img:
                table[(a, b, n + c)] = img
    return ThreeLieAlgebra(2 * n, table, dual_labels(alg))


def rho_of_vector(r: Representation, u: dict, v: dict) -> dict:
    """Sparse map rho(u, v) for sparse vectors u, v of the base algebra."""
    out: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            sm_axpy(out, ca * cb, r.act(a, b))
    return out


def apply_rho(r: Representation, u: dict, v: dict, w: dict) -> dict:
    return sm_apply(rho_of_vector(r, u, v), w)


def action_matrix(r: Representation, a: int, b: int) -> LinearMap:
    return sm_to_map(r.act(a, b), r.space_dim)


def dense(v: dict, n: int) -> tuple:
    return to_dense(v, n)
