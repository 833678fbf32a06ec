"""Matched pairs, invariant forms and the 4n-dimensional standard Manin triple.

The total space is B1 ⊕ B2 in the basis (x_1..x_n, x_1*..x_n*, y_1..y_n,
y_1*..y_n*).  The pairing between the blocks is <x_i, y_j*> = <x_i*, y_j> = δ_ij.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import (
    IntegerView,
    ThreeLieAlgebra,
    bracket_of_subspaces,
    check_fundamental_identity,
    common_denominator,
)
from .bialgebra import (
    ClosedFormMismatch,
    Comultiplication,
    b2_closed_form,
    check_local_cocycle,
    check_round_trip,
    cybe_bracket,
    delta_from_r,
    dual_algebra,
    pair_index,
    r_matrix,
)
from .derivation import InvolutiveDerivation, NotAdapted, check_grading
from .kernel import LinearMap, Subspace, coordinate_subspace, sm_from_map, to_dense
from .report import Report, combine, failed, passed
from .representation import (
    Representation,
    b1,
    b1_closed_form,
    check_representation,
    semidirect_product,
)


class PipelineError(RuntimeError):
    """A construction stage failed; ``stage`` names it and ``report`` holds the evidence."""

    def __init__(self, stage: str, message: str, report: Report | None = None):
        self.stage = stage
        self.report = report
        super().__init__(f"{stage}: {message}")


class BracketConflict(ValueError):
    pass


# -- forms ------------------------------------------------------------------


@dataclass(frozen=True)
class PairingForm:
    """Symmetric non-degenerate bilinear form given by its Gram matrix."""

    matrix: LinearMap

    def __post_init__(self):
        m = self.matrix
        if m.rows != m.cols:
            raise ValueError("a form needs a square Gram matrix")
        if m.T != m:
            raise ValueError("form is not symmetric")
        if m.rank() != m.rows:
            raise ValueError("form is degenerate")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __call__(self, u, v):
        """Value on two dense vectors."""
        return sum(u[i] * self.matrix[i, j] * v[j] for i in range(self.dim) if u[i]
                   for j in range(self.dim) if v[j])

    def basis_value(self, i: int, j: int):
        return self.matrix[i, j]


def block_pairing(n: int) -> LinearMap:
    """Gram matrix of <b_i, e_p> between B1 (rows) and B2 (columns), each of dimension 2n."""
    dim = 2 * n
    rows = [[1 if p == pair_index(i, dim) else 0 for p in range(dim)] for i in range(dim)]
    return LinearMap.from_rows(rows, dim)


def standard_form(n: int) -> PairingForm:
    """(u + α, v + β) = <u, β> + <α, v> on B1 ⊕ B2."""
    g = block_pairing(n)
    dim = 4 * n
    rows = [[0] * dim for _ in range(dim)]
    for i in range(2 * n):
        for p in range(2 * n):
            if g[i, p]:
                rows[i][2 * n + p] = g[i, p]
                rows[2 * n + p][i] = g[i, p]
    return PairingForm(LinearMap.from_rows(rows, dim))


# -- coadjoint transport ------------------------------------------------------


def coadjoint_on_second(first: ThreeLieAlgebra, second_dim: int, pairing: LinearMap) -> Representation:
    """Coadjoint action of ``first`` on a space paired with it.

    With Gram matrix G (first × second), <x, R y> = -<ad x, y> gives
    R = -G⁻¹ adᵀ G.
    """
    if pairing.shape != (first.dim, second_dim):
        raise ValueError("pairing has the wrong shape")
    ginv = pairing.inverse()
    action = {}
    for a, b in combinations(range(first.dim), 2):
        if not first.ad_sparse(a, b):
            continue
        m = first.ad_matrix(a, b)
        r = -(ginv @ m.T @ pairing)
        if not r.is_zero():
            action[(a, b)] = sm_from_map(r)
    return Representation(first, second_dim, action)


def coadjoint_on_first(second: ThreeLieAlgebra, first_dim: int, pairing: LinearMap) -> Representation:
    """Coadjoint action of ``second`` on the first space: <R x, y> = -<x, ad y>,
    i.e. R = -(G ad G⁻¹)ᵀ for the same Gram matrix G (first × second)."""
    if pairing.shape != (first_dim, second.dim):
        raise ValueError("pairing has the wrong shape")
    ginv = pairing.inverse()
    action = {}
    for p, q in combinations(range(second.dim), 2):
        if not second.ad_sparse(p, q):
            continue
        m = second.ad_matrix(p, q)
        r = -((pairing @ m @ ginv).T)
        if not r.is_zero():
            action[(p, q)] = sm_from_map(r)
    return Representation(second, first_dim, action)


def total_labels(n: int) -> list:
    xs = [f"x{i + 1}" for i in range(n)]
    ys = [f"y{i + 1}" for i in range(n)]
    return xs + [f"{x}*" for x in xs] + ys + [f"{y}*" for y in ys]


def first_bracket(b1_alg: ThreeLieAlgebra, rep: Representation, verify: bool = True) -> ThreeLieAlgebra:
    """B1 ⋉ B2 in the basis (B1, B2)."""
    n = b1_alg.dim // 2
    return semidirect_product(b1_alg, rep, labels=total_labels(n), verify=verify)


def second_bracket(b2_alg: ThreeLieAlgebra, rep: Representation, verify: bool = True) -> ThreeLieAlgebra:
    """B2 ⋉ B1, re-listed in the basis (B1, B2)."""
    m = b2_alg.dim
    raw = semidirect_product(b2_alg, rep, verify=verify)
    order = list(range(m, 2 * m)) + list(range(m))
    return raw.permute(order, labels=total_labels(m // 2))


def total_bracket(first: ThreeLieAlgebra, second: ThreeLieAlgebra) -> ThreeLieAlgebra:
    """Sum of two bracket tables whose supports must be disjoint."""
    if first.dim != second.dim:
        raise BracketConflict("bracket tables have different dimensions")
    table = {k: dict(v) for k, v in first.constants.items()}
    for key, img in second.constants.items():
        if key in table:
            raise BracketConflict(f"both brackets are nonzero on basis triple {key}")
        table[key] = dict(img)
    return ThreeLieAlgebra(first.dim, table, first.labels)


# -- closed forms for the two semidirect brackets --------------------------
#
# Mixed brackets [u, v, w] with u, v from one block and w from the other.
# Each family gives the Γ index pattern, an overall sign and, per grade
# pattern of its three free indices, the grade of the summed index k
# (None: the bracket vanishes).  Families not listed vanish.
#   "k_abt": Γ^k_{abt}   "t_abk": Γ^t_{abk}   "a_bkt": Γ^a_{bkt}

FIRST_MIXED = {
    # [x_a, x_b, y_t] = Σ_k Γ^k_{abt} y_k
    "x x y": ("k_abt", 1, {
        ("+", "+", "-"): "+", ("+", "-", "+"): "+", ("-", "-", "+"): "-", ("+", "-", "-"): "-",
        ("+", "+", "+"): None, ("-", "-", "-"): None,
    }),
    # [x_a, x_b, y_t*] = -Σ_k Γ^t_{abk} y_k*
    "x x y*": ("t_abk", -1, {
        ("+", "+", "+"): "-", ("-", "-", "-"): "+", ("+", "-", "+"): "+", ("+", "-", "-"): "-",
        ("+", "+", "-"): None, ("-", "-", "+"): None,
    }),
    # [x_a*, x_b, y_t] = Σ_k Γ^a_{bkt} y_k*
    "x* x y": ("a_bkt", 1, {
        ("+", "+", "+"): "-", ("-", "-", "-"): "+", ("+", "+", "-"): "+", ("+", "-", "+"): "+",
        ("-", "-", "+"): "-", ("-", "+", "-"): "-", ("+", "-", "-"): None, ("-", "+", "+"): None,
    }),
}

# the second bracket has the same patterns with x and y exchanged and the
# sign of every family flipped
SECOND_MIXED = {
    "y y x": ("k_abt", -1, FIRST_MIXED["x x y"][2]),
    "y y x*": ("t_abk", 1, FIRST_MIXED["x x y*"][2]),
    "y* y x": ("a_bkt", -1, FIRST_MIXED["x* x y"][2]),
}


def _grade(i: int, s: int) -> str:
    return "+" if i < s else "-"


def _krange(sym: str, s: int, n: int) -> range:
    return range(0, s) if sym == "+" else range(s, n)


def _mixed_entries(alg: ThreeLieAlgebra, s: int, cases: dict, blocks: dict) -> dict:
    """Table entries {(i, j, k): {m: c}} (unsorted keys) for the mixed families."""
    n = alg.dim
    gam = alg.structure_constant
    out = {}
    forms = {
        "k_abt": lambda a, b, t, k: gam(k, a, b, t),
        "t_abk": lambda a, b, t, k: gam(t, a, b, k),
        "a_bkt": lambda a, b, t, k: gam(a, b, k, t),
    }
    for name, (form, sign, table) in cases.items():
        first, second, third = name.split()
        out_block = blocks[_output_block(name)]
        ordered = first == second  # a < b only when both come from the same block
        for a in range(n):
            for b in range(n):
                if ordered and a >= b:
                    continue
                for t in range(n):
                    case = table[(_grade(a, s), _grade(b, s), _grade(t, s))]
                    if case is None:
                        continue
                    img = {}
                    for k in _krange(case, s, n):
                        v = forms[form](a, b, t, k)
                        if v:
                            img[out_block + k] = sign * v
                    if img:
                        key = (blocks[first] + a, blocks[second] + b, blocks[third] + t)
                        out[key] = img
    return out


def _output_block(name: str) -> str:
    return {"x x y": "y", "x x y*": "y*", "x* x y": "y*",
            "y y x": "x", "y y x*": "x*", "y* y x": "x*"}[name]


def semidirect_closed_forms(alg: ThreeLieAlgebra, g: InvolutiveDerivation) -> tuple:
    """Both 4n-dimensional semidirect brackets read off the graded case tables."""
    if not g.is_adapted() or g.dim != alg.dim:
        raise NotAdapted("closed forms need a basis with the +1 eigenvectors first")
    n, s = alg.dim, g.s
    blocks = {"x": 0, "x*": n, "y": 2 * n, "y*": 3 * n}
    labels = total_labels(n)
    b1c = b1_closed_form(alg, g)
    b2c = b2_closed_form(alg, g)

    table1 = list(b1c.constants.items())
    first = ThreeLieAlgebra.from_entries(4 * n, table1 + list(_mixed_entries(alg, s, FIRST_MIXED, blocks).items()),
                                         labels)
    off = 2 * n
    table2 = [((a + off, b + off, c + off), {k + off: v for k, v in img.items()})
              for (a, b, c), img in b2c.constants.items()]
    second = ThreeLieAlgebra.from_entries(4 * n, table2 + list(_mixed_entries(alg, s, SECOND_MIXED, blocks).items()),
                                          labels)
    return first, second


def _first_difference(generic: ThreeLieAlgebra, closed: ThreeLieAlgebra):
    for key in sorted(set(generic.constants) | set(closed.constants)):
        a, b = generic.constants.get(key, {}), closed.constants.get(key, {})
        if a != b:
            return key, a, b
    return None


def compare_semidirect(generic: tuple, closed: tuple) -> None:
    """Raise ClosedFormMismatch at the first basis triple where the tables differ."""
    for name, gen, clo in (("first semidirect bracket", generic[0], closed[0]),
                           ("second semidirect bracket", generic[1], closed[1])):
        diff = _first_difference(gen, clo)
        if diff is not None:
            key, a, b = diff
            raise ClosedFormMismatch(name, key, key, a, b)


# -- structural checks on the total algebra ----------------------------------


def check_invariance(alg: ThreeLieAlgebra, form: PairingForm) -> Report:
    """([u,v,w], z) + (w, [u,v,z]) = 0 on every basis 4-tuple (u < v).

    The identity is linear in the bracket and in the form, so both are
    scaled to integers first.
    """
    n = alg.dim
    if form.dim != n:
        raise ValueError("form and algebra dimensions differ")
    fscale = common_denominator(form.matrix[i, j] for i in range(n) for j in range(n))
    rows = [{j: int(form.matrix[i, j] * fscale) for j in range(n) if form.matrix[i, j]} for i in range(n)]
    view = alg.integer_view()
    per_pair = n * n
    checked = 0
    for u, v in combinations(range(n), 2):
        ad = view.ad.get((u, v))
        if not ad:
            checked += per_pair
            continue
        # (ad w, z) + (w, ad z) as a matrix in (w, z); only columns of ad contribute
        vals: dict = {}
        for w, img in ad.items():
            for k, c in img.items():
                for z, f in rows[k].items():
                    vals[(w, z)] = vals.get((w, z), 0) + c * f
                    vals[(z, w)] = vals.get((z, w), 0) + c * f
        bad = sorted(key for key, val in vals.items() if val)
        if bad:
            w, z = bad[0]
            val = Fraction(vals[(w, z)], fscale * view.scale)
            return failed("invariance", (u, v, w, z), val, checked=checked + w * n + z + 1,
                          detail=f"nonzero at {(u + 1, v + 1, w + 1, z + 1)} (1-based)")
        checked += per_pair
    return passed("invariance", checked)


def check_isotropic(form: PairingForm, sub: Subspace, name: str = "isotropy") -> Report:
    checked = 0
    for i, u in enumerate(sub.basis):
        for j, v in enumerate(sub.basis):
            checked += 1
            val = form(u, v)
            if val:
                return failed(name, (i, j), val, checked=checked)
    return passed(name, checked)


def check_containment(alg: ThreeLieAlgebra, u: Subspace, v: Subspace, w: Subspace, target: Subspace,
                      name: str) -> Report:
    img = bracket_of_subspaces(alg, u, v, w)
    count = u.dim * v.dim * w.dim
    if img <= target:
        return passed(name, count)
    bad = next(b for b in img.basis if not target.contains(b))
    return failed(name, name, bad, detail="image escapes the target subspace", checked=count)


@dataclass
class ManinTriple:
    total: ThreeLieAlgebra
    part1: Subspace
    part2: Subspace
    form: PairingForm
    b1: ThreeLieAlgebra
    b2: ThreeLieAlgebra
    first: ThreeLieAlgebra
    second: ThreeLieAlgebra
    adelta: Representation
    apsi: Representation
    comultiplication: Comultiplication
    reports: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.total.dim

    def check(self) -> Report:
        """All defining properties of a Manin triple."""
        t, p1, p2 = self.total, self.part1, self.part2
        return combine("manin triple", [
            check_fundamental_identity(t),
            check_invariance(t, self.form),
            check_isotropic(self.form, p1, "isotropy of B1"),
            check_isotropic(self.form, p2, "isotropy of B2"),
            check_containment(t, p1, p1, p1, p1, "B1 subalgebra"),
            check_containment(t, p2, p2, p2, p2, "B2 subalgebra"),
            check_containment(t, p1, p1, p2, p2, "[B1,B1,B2] in B2"),
            check_containment(t, p2, p2, p1, p1, "[B2,B2,B1] in B1"),
        ])

    def restriction_report(self) -> Report:
        """The total bracket restricted to each block equals that block's algebra."""
        m = self.b1.dim
        reports = []
        for name, alg, off in (("restriction to B1", self.b1, 0), ("restriction to B2", self.b2, m)):
            bad = None
            for a, b, c in combinations(range(m), 3):
                img = self.total.bracket_basis(a + off, b + off, c + off)
                want = {k + off: v for k, v in alg.bracket_basis(a, b, c).items()}
                if img != want:
                    bad = failed(name, (a, b, c), (img, want))
                    break
            reports.append(bad or passed(name, m * (m - 1) * (m - 2) // 6))
        return combine("block restrictions", reports)


# -- matched pairs -------------------------------------------------------------


def _int_rep(r: Representation, scale: int) -> dict:
    out = {}
    for (a, b), m in r.action.items():
        im = {j: {i: int(v * scale) for i, v in col.items()} for j, col in m.items()}
        out[(a, b)] = im
        out[(b, a)] = {j: {i: -v for i, v in col.items()} for j, col in im.items()}
    return out


def _add(out: dict, c: int, v: dict) -> None:
    for k, x in v.items():
        t = out.get(k, 0) + c * x
        if t:
            out[k] = t
        else:
            out.pop(k, None)


def _apply(m: dict, v: dict) -> dict:
    out: dict = {}
    for j, x in v.items():
        col = m.get(j)
        if col:
            _add(out, x, col)
    return out


def _act(act: dict, u: dict, v: dict, w: dict) -> dict:
    """act(u, v) w for sparse vectors, bilinear in (u, v)."""
    out: dict = {}
    for p, cu in u.items():
        for q, cv in v.items():
            m = act.get((p, q))
            if m:
                _add(out, cu * cv, _apply(m, w))
    return out


def _ad(view: IntegerView, a: int, b: int, w: dict) -> dict:
    ad = view.ad.get((a, b))
    return _apply(ad, w) if ad else {}


def _vec(i: int) -> dict:
    return {i: 1}


def _mcompose_into(out: dict, c: int, a: dict, b: dict) -> None:
    """out += c * (a∘b) for sparse maps {col: {row: value}}."""
    for j, col in b.items():
        img = _apply(a, col)
        if img:
            tgt = out.setdefault(j, {})
            _add(tgt, c, img)
            if not tgt:
                del out[j]


def _madd(out: dict, c: int, m: dict) -> None:
    for j, col in m.items():
        tgt = out.setdefault(j, {})
        _add(tgt, c, col)
        if not tgt:
            del out[j]


def _act_first(act: dict, u: dict, b: int, c: int, out: dict) -> None:
    """out += c * act(u, e_b) for a sparse vector u."""
    for j, x in u.items():
        m = act.get((j, b))
        if m:
            _madd(out, c * x, m)


def _act_second(act: dict, a: int, u: dict, c: int, out: dict) -> None:
    """out += c * act(e_a, u) for a sparse vector u."""
    for j, x in u.items():
        m = act.get((a, j))
        if m:
            _madd(out, c * x, m)


def _commuting(ad: dict, act_q: dict, act_p: dict, other: dict, q: tuple) -> dict:
    """ad∘act_q - act_q∘ad - other(act_p q1, q2) - other(q1, act_p q2) as a map.

    Here ``act_q`` is the action of the pair q on the space where ``ad``
    lives and ``act_p`` moves q's entries; ``other`` is the action whose
    arguments they are.
    """
    q1, q2 = q
    out: dict = {}
    if ad and act_q:
        _mcompose_into(out, 1, ad, act_q)
        _mcompose_into(out, -1, act_q, ad)
    if act_p:
        _act_first(other, act_p.get(q1, {}), q2, -1, out)
        _act_second(other, q1, act_p.get(q2, {}), -1, out)
    return out


def _identity_reports(a1, a2, rho: dict, chi: dict, v1: IntegerView, v2: IntegerView) -> list:
    """The four compatibility identities on basis tuples.

    For fixed pairs the parts linear in the remaining argument are composed
    into one map; only the cyclic terms are evaluated index by index.
    """
    n1, n2 = a1.dim, a2.dim
    pairs1 = list(combinations(range(n1), 2))
    pairs2 = list(combinations(range(n2), 2))
    empty: dict = {}

    def sweep(name, outer, inner, dim, ad_view, act_outer, act_inner):
        # outer pairs live in the algebra acted on by ``act_inner``
        checked = 0
        mixed = None
        cyclic = None
        for p in outer:
            ad = ad_view.ad.get(p, empty)
            act_p = act_outer.get(p, empty)
            for q in inner:
                act_q = act_inner.get(q, empty)
                if not (ad and act_q) and not act_p:
                    m = empty
                else:
                    m = _commuting(ad, act_q, act_p, act_inner, q)
                if mixed is None and m:
                    t = min(m)
                    mixed = failed(f"matched pair: {name} commutation", (p, q, t), m[t],
                                   checked=checked + t + 1)
                # cyclic identity: ad∘act_q - act_inner(act_p q1, q2) plus two terms per index
                base: dict = {}
                if ad and act_q:
                    _mcompose_into(base, 1, ad, act_q)
                if act_p:
                    _act_first(act_inner, act_p.get(q[0], {}), q[1], -1, base)
                x1, x2 = p
                q1, q2 = q
                for t in range(dim):
                    vec = dict(base.get(t, empty))
                    m31 = act_outer.get((t, x1))
                    if m31:
                        u = m31.get(q2)
                        if u:
                            for j, x in u.items():
                                col = act_inner.get((q1, j), empty).get(x2)
                                if col:
                                    _add(vec, x, col)
                    m23 = act_outer.get((x2, t))
                    if m23:
                        u = m23.get(q2)
                        if u:
                            for j, x in u.items():
                                col = act_inner.get((q1, j), empty).get(x1)
                                if col:
                                    _add(vec, x, col)
                    if vec and cyclic is None:
                        cyclic = failed(f"matched pair: {name} cyclic", (p, q, t), vec,
                                        checked=checked + t + 1)
                checked += dim
                if mixed is not None and cyclic is not None:
                    break
            if mixed is not None and cyclic is not None:
                break
        return [mixed or passed(f"matched pair: {name} commutation", checked),
                cyclic or passed(f"matched pair: {name} cyclic", checked)]

    return (sweep("chi", pairs1, pairs2, n1, v1, rho, chi)
            + sweep("rho", pairs2, pairs1, n2, v2, chi, rho))


def _derivation_report(name: str, act: dict, n_pairs: int, view: IntegerView) -> Report:
    """Every act(e_a, e_b) (a < b) is a derivation of the algebra behind ``view``."""
    dim = view.dim
    checked = 0
    for (a, b), m in sorted(act.items()):
        if a > b:
            continue
        for x, y, z in combinations(range(dim), 3):
            checked += 1
            out = _apply(m, view.br(x, y, z))
            _add(out, -1, _br_vec(view, _apply(m, _vec(x)), _vec(y), _vec(z)))
            _add(out, -1, _br_vec(view, _vec(x), _apply(m, _vec(y)), _vec(z)))
            _add(out, -1, _br_vec(view, _vec(x), _vec(y), _apply(m, _vec(z))))
            if out:
                return failed(name, ((a, b), (x, y, z)), out, checked=checked)
    return passed(name, checked)


def _br_vec(view: IntegerView, u: dict, v: dict, w: dict) -> dict:
    out: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for c, cc in w.items():
                img = view.br(a, b, c)
                if img:
                    _add(out, ca * cb * cc, img)
    return out


def _scaled(a1, a2, rho, chi):
    vals = [v for alg in (a1, a2) for img in alg.constants.values() for v in img.values()]
    vals += [v for r in (rho, chi) for m in r.action.values() for col in m.values() for v in col.values()]
    scale = common_denominator(vals)
    return (_int_rep(rho, scale), _int_rep(chi, scale), IntegerView(a1, scale), IntegerView(a2, scale))


def derivation_images(a1: ThreeLieAlgebra, a2: ThreeLieAlgebra, rho: Representation,
                      chi: Representation) -> Report:
    """rho(a1 ∧ a1) ⊆ Der(a2) and chi(a2 ∧ a2) ⊆ Der(a1)."""
    irho, ichi, v1, v2 = _scaled(a1, a2, rho, chi)
    return combine("derivation images", [
        _derivation_report("rho lands in Der of the second algebra", irho, 0, v2),
        _derivation_report("chi lands in Der of the first algebra", ichi, 0, v1),
    ])


def check_matched_pair(a1: ThreeLieAlgebra, a2: ThreeLieAlgebra, rho: Representation,
                       chi: Representation) -> Report:
    """Module axioms, derivation images and the four compatibility identities."""
    if rho.base.dim != a1.dim or rho.space_dim != a2.dim:
        raise ValueError("rho must be an action of the first algebra on the second")
    if chi.base.dim != a2.dim or chi.space_dim != a1.dim:
        raise ValueError("chi must be an action of the second algebra on the first")
    irho, ichi, v1, v2 = _scaled(a1, a2, rho, chi)
    parts = [
        check_representation(Representation(a1, a2.dim, rho.action), "rho is a representation"),
        check_representation(Representation(a2, a1.dim, chi.action), "chi is a representation"),
        _derivation_report("rho lands in Der of the second algebra", irho, 0, v2),
        _derivation_report("chi lands in Der of the first algebra", ichi, 0, v1),
    ]
    parts += _identity_reports(a1, a2, irho, ichi, v1, v2)
    return combine("matched pair", parts)


# -- pipeline -----------------------------------------------------------------


@dataclass
class Pipeline:
    """Intermediate objects of the construction, filled stage by stage."""

    alg: ThreeLieAlgebra
    grading: InvolutiveDerivation
    b1: ThreeLieAlgebra | None = None
    comultiplication: Comultiplication | None = None
    b2: ThreeLieAlgebra | None = None
    adelta: Representation | None = None
    apsi: Representation | None = None
    reports: list = field(default_factory=list)


def _require(stage: str, rep: Report, reports: list) -> None:
    reports.append(rep)
    if not rep.ok:
        raise PipelineError(stage, rep.summary(), rep)


def build_pipeline(alg: ThreeLieAlgebra, g: InvolutiveDerivation, closed_forms: bool = True) -> Pipeline:
    """Every stage up to the two coadjoint actions, each verified before the next."""
    if not g.is_adapted() or g.dim != alg.dim:
        raise PipelineError("grading", "the algebra must be given in an adapted basis")
    p = Pipeline(alg, g)
    _require("fundamental identity", check_fundamental_identity(alg), p.reports)
    _require("grading", check_grading(g, alg), p.reports)
    try:
        p.b1 = b1(alg)
    except ValueError as exc:
        raise PipelineError("semidirect product", str(exc)) from exc
    if closed_forms and b1_closed_form(alg, g) != p.b1:
        raise PipelineError("semidirect product", "closed form differs from the coadjoint construction")
    cy = cybe_bracket(r_matrix(g), p.b1)
    if cy:
        key = next(iter(sorted(cy)))
        raise PipelineError("r-matrix", f"CYBE bracket nonzero at {key}")
    try:
        p.comultiplication = delta_from_r(p.b1, g, alg if closed_forms else None)
    except ClosedFormMismatch as exc:
        raise PipelineError("comultiplication", str(exc)) from exc
    _require("local cocycle", check_local_cocycle(p.comultiplication, p.b1), p.reports)
    try:
        p.b2 = dual_algebra(p.comultiplication, alg if closed_forms else None, g if closed_forms else None)
    except (AssertionError, ValueError) as exc:
        raise PipelineError("dual algebra", str(exc)) from exc
    _require("duality round trip", check_round_trip(p.comultiplication, p.b2), p.reports)
    pairing = block_pairing(alg.dim)
    p.adelta = coadjoint_on_second(p.b1, p.b2.dim, pairing)
    p.apsi = coadjoint_on_first(p.b2, p.b1.dim, pairing)
    return p


def build_manin(alg: ThreeLieAlgebra, g: InvolutiveDerivation, closed_forms: bool = True,
                matched_pair: bool = False) -> ManinTriple:
    """Assemble B1 ⊕ B2 with the sum of both semidirect brackets and verify it.

    Raises PipelineError naming the first failing stage.
    """
    p = build_pipeline(alg, g, closed_forms)
    n = alg.dim
    # the module axioms are the whole content of each semidirect product; the
    # fundamental identity is checked once below on the total algebra
    _require("coadjoint action of B1", check_representation(p.adelta, "coadjoint action of B1"), p.reports)
    _require("coadjoint action of B2", check_representation(p.apsi, "coadjoint action of B2"), p.reports)
    first = first_bracket(p.b1, p.adelta, verify=False)
    second = second_bracket(p.b2, p.apsi, verify=False)
    if closed_forms:
        try:
            compare_semidirect((first, second), semidirect_closed_forms(alg, g))
        except ClosedFormMismatch as exc:
            raise PipelineError("semidirect closed forms", str(exc)) from exc
    try:
        total = total_bracket(first, second)
    except BracketConflict as exc:
        raise PipelineError("total bracket", str(exc)) from exc
    form = standard_form(n)
    part1 = coordinate_subspace(4 * n, range(2 * n))
    part2 = coordinate_subspace(4 * n, range(2 * n, 4 * n))
    triple = ManinTriple(total, part1, part2, form, p.b1, p.b2, first, second, p.adelta, p.apsi,
                         p.comultiplication, list(p.reports))
    _require("manin triple", triple.check(), triple.reports)
    _require("block restrictions", triple.restriction_report(), triple.reports)
    if matched_pair:
        _require("matched pair", check_matched_pair(p.b1, p.b2, p.adelta, p.apsi), triple.reports)
    return triple


def check_derivation_images(alg: ThreeLieAlgebra, g: InvolutiveDerivation) -> Report:
    """Both coadjoint actions of the pipeline act by derivations."""
    p = build_pipeline(alg, g)
    return derivation_images(p.b1, p.b2, p.adelta, p.apsi)


def form_matrix_rows(form: PairingForm) -> list:
    return [list(to_dense({j: form.matrix[i, j] for j in range(form.dim)}, form.dim)) for i in range(form.dim)]
