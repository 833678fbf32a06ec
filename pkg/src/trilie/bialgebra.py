"""r-matrices from involutive derivations, the comultiplication they induce,
and the dual 3-Lie algebra on the dual space of A ⋉ A*.

B1 (the semidirect product A ⋉ A*) uses basis (x_1..x_n, x_1*..x_n*); the
dual algebra B2 uses (y_1..y_n, y_1*..y_n*) with <x_i, y_j*> = <x_i*, y_j> = δ_ij,
so B2 index p pairs with B1 index (p + n) mod 2n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .algebra import SignConflictError, ThreeLieAlgebra, check_fundamental_identity, sort_with_sign
from .derivation import InvolutiveDerivation, NotAdapted
from .kernel import ZERO, scalar, sparse_axpy, to_dense
from .report import Report, combine, failed, passed


class ClosedFormMismatch(AssertionError):
    """Generic and case-table evaluations disagree; ``index`` names the basis vector."""

    def __init__(self, stage: str, index, key, generic, closed):
        self.stage = stage
        self.index = index
        self.key = key
        self.generic = generic
        self.closed = closed
        super().__init__(f"{stage}: closed form disagrees at basis index {index}, term {key}: "
                         f"generic {generic}, closed form {closed}")


# -- tensors ---------------------------------------------------------------


@dataclass
class Tensor2:
    """Sparse element of V ⊗ V keyed by index pairs."""

    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in sorted(self.terms.items()):
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise IndexError(f"tensor index {(i, j)} outside dimension {self.dim}")
            c = scalar(c)
            if c:
                clean[(i, j)] = c
        self.terms = clean

    def __eq__(self, other) -> bool:
        return isinstance(other, Tensor2) and self.dim == other.dim and self.terms == other.terms

    def __sub__(self, other: "Tensor2") -> "Tensor2":
        out = dict(self.terms)
        sparse_axpy(out, -1, other.terms)
        return Tensor2(self.dim, out)

    def __neg__(self) -> "Tensor2":
        return Tensor2(self.dim, {k: -v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms


def swap(t: Tensor2) -> Tensor2:
    """Exchange of the two tensor factors."""
    return Tensor2(t.dim, {(j, i): c for (i, j), c in t.terms.items()})


def dbar(g: InvolutiveDerivation) -> Tensor2:
    """Σ_i x_i* ⊗ D x_i inside B1 ⊗ B1."""
    n = g.dim
    terms = {}
    for i in range(n):
        for k, c in g.map.sparse_column(i).items():
            terms[(n + i, k)] = c
    return Tensor2(2 * n, terms)


def r_matrix(g: InvolutiveDerivation) -> Tensor2:
    d = dbar(g)
    r = d - swap(d)
    assert swap(r) == -r
    return r


def cybe_bracket(r: Tensor2, alg: ThreeLieAlgebra) -> dict:
    """The four-term Yang-Baxter bracket of r = Σ u⊗v as a sparse 4-tensor."""
    if alg.dim != r.dim:
        raise ValueError("tensor and algebra dimensions differ")
    out: dict = {}
    items = list(r.terms.items())

    def add(coef, img, build):
        for m, v in img.items():
            key = build(m)
            val = out.get(key, ZERO) + coef * v
            if val:
                out[key] = val
            else:
                out.pop(key, None)

    br = alg.bracket_basis
    for (ui, vi), ci in items:
        for (uj, vj), cj in items:
            cij = ci * cj
            for (uk, vk), ck in items:
                c = cij * ck
                add(c, br(ui, uj, uk), lambda m: (m, vi, vj, vk))
                add(c, br(vi, uj, uk), lambda m: (ui, m, vj, vk))
                add(c, br(vi, vj, uk), lambda m: (ui, uj, m, vk))
                add(c, br(vi, vj, vk), lambda m: (ui, uj, uk, m))
    return dict(sorted(out.items()))


# -- three-fold tensors and permutations ------------------------------------


def rotate(t: dict) -> dict:
    """a⊗b⊗c -> c⊗a⊗b, the composite σ13σ12."""
    return {(k, i, j): c for (i, j, k), c in t.items()}


def rotate_back(t: dict) -> dict:
    """a⊗b⊗c -> b⊗c⊗a, the composite σ12σ13."""
    return {(j, k, i): c for (i, j, k), c in t.items()}


def add3(*parts: dict) -> dict:
    out: dict = {}
    for p in parts:
        sparse_axpy(out, 1, p)
    return dict(sorted(out.items()))


@dataclass
class Comultiplication:
    """Δ = Δ1 + Δ2 + Δ3 on each basis vector of a 2n-dimensional algebra."""

    dim: int
    delta1: dict

    def __post_init__(self):
        self.delta1 = {t: dict(sorted(v.items())) for t, v in sorted(self.delta1.items()) if v}
        self.delta2 = {t: dict(sorted(rotate(v).items())) for t, v in self.delta1.items()}
        self.delta3 = {t: dict(sorted(rotate_back(v).items())) for t, v in self.delta1.items()}
        self.delta = {t: add3(self.delta1[t], self.delta2[t], self.delta3[t]) for t in self.delta1}
        self.delta = {t: v for t, v in self.delta.items() if v}

    def part(self, i: int) -> dict:
        return {1: self.delta1, 2: self.delta2, 3: self.delta3}[i]

    def of(self, t: int, part: int = 0) -> dict:
        src = self.delta if part == 0 else self.part(part)
        return src.get(t, {})

    def is_zero(self) -> bool:
        return not self.delta

    def perturbed(self, t: int, key, delta) -> "Comultiplication":
        """Copy with the Δ1 coefficient of ``key`` in Δ1(e_t) shifted."""
        d1 = {tt: dict(v) for tt, v in self.delta1.items()}
        img = d1.setdefault(t, {})
        img[key] = img.get(key, ZERO) + scalar(delta)
        if not img[key]:
            del img[key]
        return Comultiplication(self.dim, d1)


def delta1_from_tensor(b1: ThreeLieAlgebra, r: Tensor2) -> dict:
    """Δ1(x) = Σ_{α,β} [x, u_α, u_β] ⊗ v_β ⊗ v_α for r = Σ u_α ⊗ v_α."""
    out = {}
    items = list(r.terms.items())
    for t in range(b1.dim):
        acc: dict = {}
        for (ua, va), ca in items:
            for (ub, vb), cb in items:
                img = b1.bracket_basis(t, ua, ub)
                if not img:
                    continue
                c = ca * cb
                for m, v in img.items():
                    key = (m, vb, va)
                    val = acc.get(key, ZERO) + c * v
                    if val:
                        acc[key] = val
                    else:
                        acc.pop(key)
        if acc:
            out[t] = acc
    return out


# -- printed closed forms for Δ(x_t) and Δ(x_t*) ---------------------------
#
# Δ(x_t) is printed only through its x*⊗x*⊗x component, as three groups of
# Γ-sums; the remaining components follow by cyclic invariance of Δ.  Each
# group is a table from the grade pattern of (i, j, k) to a sign.
#   group "i_tjk": Γ^i_{tjk} x_k* ⊗ x_j* ⊗ x_i
#   group "j_tik": Γ^j_{tik} x_i* ⊗ x_k* ⊗ x_j
#   group "k_tij": Γ^k_{tij} x_j* ⊗ x_i* ⊗ x_k

DELTA_PLAIN_PRINTED = {
    "i_tjk": {
        ("+", "+", "-"): -1, ("+", "-", "+"): 1, ("-", "+", "-"): 1, ("-", "-", "+"): -1,
        ("+", "+", "+"): -1, ("-", "-", "-"): -1,
    },
    "j_tik": {
        ("+", "+", "-"): 1, ("+", "-", "-"): -1,
        ("-", "+", "+"): -1, ("-", "+", "-"): 1, ("+", "+", "+"): 1, ("-", "-", "-"): 1,
    },
    "k_tij": {
        ("+", "+", "+"): 1, ("+", "-", "+"): -1, ("+", "-", "-"): -1,
        ("-", "+", "+"): 1, ("-", "+", "-"): -1, ("-", "-", "+"): 1,
    },
}

# Corrections found by comparing against the generic comultiplication; each
# entry is (group, pattern, corrected sign or 0 to drop the pattern).
DELTA_PLAIN_CORRECTIONS: list = [
    # sign flip: the pattern i in A-, j,k in A+ carries -1, not +1
    ("k_tij", ("-", "+", "+"), -1),
    # the all-minus block is missing from this group (the other two list it)
    ("k_tij", ("-", "-", "-"), 1),
    # index-range typo: the printed (-,+,-) block is always zero by grading;
    # the block that is needed is (-,-,+)
    ("j_tik", ("-", "+", "-"), 0),
    ("j_tik", ("-", "-", "+"), 1),
]

# Δ(x_t*) = Σ sign · Γ^t_{ijk} (x_k*⊗x_j*⊗x_i* + x_i*⊗x_k*⊗x_j* + x_j*⊗x_i*⊗x_k*)
DELTA_DUAL_PRINTED = {
    ("+", "+", "-"): -1, ("+", "-", "+"): 1, ("+", "-", "-"): 1,
    ("-", "+", "+"): 1, ("-", "+", "-"): 1, ("-", "-", "+"): -1,
}


def delta_plain_table(corrected: bool = True) -> dict:
    table = {g: dict(v) for g, v in DELTA_PLAIN_PRINTED.items()}
    if corrected:
        for group, pattern, sign in DELTA_PLAIN_CORRECTIONS:
            if sign:
                table[group][pattern] = sign
            else:
                table[group].pop(pattern, None)
    return table


def _g(i: int, s: int) -> str:
    return "+" if i < s else "-"


def delta_closed_form(alg: ThreeLieAlgebra, g: InvolutiveDerivation, corrected: bool = True) -> dict:
    """Δ on every basis vector of B1 from the printed Γ-sums."""
    if not g.is_adapted() or g.dim != alg.dim:
        raise NotAdapted("closed forms need a basis with the +1 eigenvectors first")
    n, s = alg.dim, g.s
    gam = alg.structure_constant
    table = delta_plain_table(corrected)
    out = {}
    rng = range(n)
    for t in rng:
        comp: dict = {}
        for i, j, k in product(rng, rng, rng):
            pat = (_g(i, s), _g(j, s), _g(k, s))
            sign = table["i_tjk"].get(pat)
            if sign:
                c = gam(i, t, j, k)
                if c:
                    sparse_axpy(comp, sign * c, {(n + k, n + j, i): 1})
            sign = table["j_tik"].get(pat)
            if sign:
                c = gam(j, t, i, k)
                if c:
                    sparse_axpy(comp, sign * c, {(n + i, n + k, j): 1})
            sign = table["k_tij"].get(pat)
            if sign:
                c = gam(k, t, i, j)
                if c:
                    sparse_axpy(comp, sign * c, {(n + j, n + i, k): 1})
        full = add3(comp, rotate(comp), rotate_back(comp))
        if full:
            out[t] = full
    for t in rng:
        acc: dict = {}
        for i, j, k in product(rng, rng, rng):
            sign = DELTA_DUAL_PRINTED.get((_g(i, s), _g(j, s), _g(k, s)))
            if not sign:
                continue
            c = gam(t, i, j, k)
            if not c:
                continue
            c = sign * c
            for key in ((n + k, n + j, n + i), (n + i, n + k, n + j), (n + j, n + i, n + k)):
                sparse_axpy(acc, c, {key: 1})
        if acc:
            out[n + t] = dict(sorted(acc.items()))
    return out


def compare_comultiplications(generic: dict, closed: dict):
    """First (index, key, generic value, closed value) where they differ, else None."""
    for t in sorted(set(generic) | set(closed)):
        a, b = generic.get(t, {}), closed.get(t, {})
        for key in sorted(set(a) | set(b)):
            va, vb = a.get(key, ZERO), b.get(key, ZERO)
            if va != vb:
                return (t, key, va, vb)
    return None


def delta_from_r(b1: ThreeLieAlgebra, g: InvolutiveDerivation, alg: ThreeLieAlgebra | None = None,
                 check_closed_form: bool = True) -> Comultiplication:
    """Comultiplication induced by the r-matrix of ``g``.

    When ``alg`` (the underlying n-dimensional algebra in an adapted basis) is
    given, the printed closed forms are evaluated too and any disagreement
    raises ClosedFormMismatch naming the basis index.
    """
    c = Comultiplication(b1.dim, delta1_from_tensor(b1, r_matrix(g)))
    if alg is not None and check_closed_form:
        diff = compare_comultiplications(c.delta, delta_closed_form(alg, g))
        if diff is not None:
            raise ClosedFormMismatch("comultiplication", *diff)
    return c


# -- cocycle condition ------------------------------------------------------


def _act_slot(ad_all: dict, slot: int, a: int, b: int, tensor: dict, coef: int, out: dict) -> None:
    """out += coef · (ad(e_a, e_b) acting on the given tensor slot), integer arithmetic."""
    ad = ad_all.get((a, b))
    if not ad:
        return
    for key, v in tensor.items():
        img = ad.get(key[slot])
        if not img:
            continue
        cv = coef * v
        for m, w in img.items():
            nk = list(key)
            nk[slot] = m
            nk = tuple(nk)
            val = out.get(nk, 0) + cv * w
            if val:
                out[nk] = val
            else:
                del out[nk]


def _int_part(part: dict) -> tuple:
    from .algebra import common_denominator

    scale = common_denominator(v for img in part.values() for v in img.values())
    return scale, {t: {k: int(v * scale) for k, v in img.items()} for t, img in part.items()}


def _cocycle_residual_int(part: dict, view, slot: int, a: int, b: int, c: int) -> dict:
    out: dict = {}
    for k, v in view.br(a, b, c).items():
        img = part.get(k)
        if img:
            for key, w in img.items():
                val = out.get(key, 0) + v * w
                if val:
                    out[key] = val
                else:
                    del out[key]
    _act_slot(view.ad, slot, a, b, part.get(c, {}), -1, out)
    _act_slot(view.ad, slot, b, c, part.get(a, {}), -1, out)
    _act_slot(view.ad, slot, c, a, part.get(b, {}), -1, out)
    return out


def cocycle_residual(part: dict, alg: ThreeLieAlgebra, slot: int, a: int, b: int, c: int) -> dict:
    """Δ_i([x_a,x_b,x_c]) minus the three twisted-action terms, for tensor slot ``slot``."""
    view = alg.integer_view()
    scale, ipart = _int_part(part)
    res = _cocycle_residual_int(ipart, view, slot, a, b, c)
    return {k: Fraction(v, scale * view.scale) for k, v in sorted(res.items())}


def check_local_cocycle(c: Comultiplication, b1: ThreeLieAlgebra) -> Report:
    """Each Δ_i is a 1-cocycle for ad acting on tensor slot i."""
    view = b1.integer_view()
    reports = []
    for i in (1, 2, 3):
        scale, part = _int_part(c.part(i))
        checked = 0
        bad = None
        for a, b, cc in combinations(range(b1.dim), 3):
            checked += 1
            res = _cocycle_residual_int(part, view, i - 1, a, b, cc)
            if res:
                res = {k: Fraction(v, scale * view.scale) for k, v in sorted(res.items())}
                bad = failed(f"cocycle Δ{i}", (a, b, cc), res, checked=checked, detail=f"slot {i}")
                break
        reports.append(bad or passed(f"cocycle Δ{i}", checked))
    return combine("local cocycle", reports)


# -- dual algebra -----------------------------------------------------------


def pair_index(p: int, dim: int) -> int:
    """Index in the other algebra paired with index ``p`` (2n-dimensional blocks)."""
    n = dim // 2
    return (p + n) % dim


def check_skew(c: Comultiplication) -> Report:
    """Δ(x) must lie in the exterior cube for Δ* to define a skew bracket."""
    checked = 0
    for t, img in c.delta.items():
        for key, v in img.items():
            checked += 1
            srt, sign = sort_with_sign(key)
            if not sign:
                return failed("skew comultiplication", (t, key), v, checked=checked)
            a, b, cc = srt
            for perm in ((a, b, cc), (b, cc, a), (cc, a, b), (b, a, cc), (a, cc, b), (cc, b, a)):
                _, ps = sort_with_sign(perm)
                if img.get(perm, ZERO) != ps * sign * v:
                    return failed("skew comultiplication", (t, key), v, checked=checked)
    return passed("skew comultiplication", checked)


def dual_labels(n: int) -> list:
    return [f"y{i + 1}" for i in range(n)] + [f"y{i + 1}*" for i in range(n)]


def dual_algebra(c: Comultiplication, alg: ThreeLieAlgebra | None = None,
                 g: InvolutiveDerivation | None = None, verify: bool = True) -> ThreeLieAlgebra:
    """B2 with <Δ*(α,β,γ), x> = <α⊗β⊗γ, Δ(x)>.

    With ``alg`` and ``g`` the printed case table is evaluated independently
    and must agree exactly.
    """
    dim = c.dim
    sk = check_skew(c)
    if not sk.ok:
        raise SignConflictError(f"comultiplication is not skew at {sk.witness}")
    table: dict = {}
    for t, img in c.delta.items():
        out_idx = pair_index(t, dim)
        for key, v in img.items():
            p, q, r = (pair_index(k, dim) for k in key)
            if p < q < r:
                table.setdefault((p, q, r), {})[out_idx] = v
    b2 = ThreeLieAlgebra(dim, table, dual_labels(dim // 2))
    if verify:
        fi = check_fundamental_identity(b2)
        if not fi.ok:
            raise AssertionError(f"dual algebra violates the fundamental identity at {fi.witness}")
    if alg is not None and g is not None:
        closed = b2_closed_form(alg, g)
        if closed != b2:
            key = next(k for k in sorted(set(b2.constants) | set(closed.constants))
                       if b2.constants.get(k) != closed.constants.get(k))
            raise ClosedFormMismatch("dual algebra", key, key, b2.constants.get(key), closed.constants.get(key))
    return b2


# Case table for the dual algebra in the y-basis: same grade patterns as B1,
# opposite sign on the plain block, positive sign on the starred block.
B2_PLAIN_CASES = {
    ("+", "+", "-"): ("+", -1),
    ("+", "-", "-"): ("-", -1),
    ("+", "+", "+"): None,
    ("-", "-", "-"): None,
}

B2_DUAL_CASES = {
    ("+", "+", "+"): ("-", 1),
    ("-", "-", "-"): ("+", 1),
    ("+", "-", "+"): ("+", 1),
    ("+", "-", "-"): ("-", 1),
    ("+", "+", "-"): None,
    ("-", "-", "+"): None,
}


def _rng(sym: str, s: int, n: int) -> range:
    return range(0, s) if sym == "+" else range(s, n)


def b2_closed_form(alg: ThreeLieAlgebra, g: InvolutiveDerivation) -> ThreeLieAlgebra:
    if not g.is_adapted() or g.dim != alg.dim:
        raise NotAdapted("closed forms need a basis with the +1 eigenvectors first")
    n, s = alg.dim, g.s
    gam = alg.structure_constant
    table: dict = {}
    for a, b, c in combinations(range(n), 3):
        case = B2_PLAIN_CASES[(_g(a, s), _g(b, s), _g(c, s))]
        if case is None:
            continue
        kr, sign = case
        img = {k: sign * gam(k, a, b, c) for k in _rng(kr, s, n) if gam(k, a, b, c)}
        if img:
            table[(a, b, c)] = img
    for a, b in combinations(range(n), 2):
        for c in range(n):
            case = B2_DUAL_CASES.get((_g(a, s), _g(b, s), _g(c, s)))
            if case is None:
                continue
            kr, sign = case
            img = {n + k: sign * gam(c, a, b, k) for k in _rng(kr, s, n) if gam(c, a, b, k)}
            if img:
                table[(a, b, n + c)] = img
    return ThreeLieAlgebra(2 * n, table, dual_labels(n))


def comultiplication_from_dual(b2: ThreeLieAlgebra) -> dict:
    """Recover Δ on B1 by transposing the bracket of B2 (all argument orders)."""
    dim = b2.dim
    out: dict = {}
    for (p, q, r), img in b2.constants.items():
        for perm in ((p, q, r), (q, r, p), (r, p, q), (q, p, r), (p, r, q), (r, q, p)):
            _, sign = sort_with_sign(perm)
            key = tuple(pair_index(k, dim) for k in perm)
            for m, v in img.items():
                t = pair_index(m, dim)
                out.setdefault(t, {})[key] = sign * v
    return {t: dict(sorted(v.items())) for t, v in sorted(out.items())}


def check_round_trip(c: Comultiplication, b2: ThreeLieAlgebra) -> Report:
    back = comultiplication_from_dual(b2)
    diff = compare_comultiplications(c.delta, back)
    if diff is None:
        return passed("duality round trip", sum(len(v) for v in c.delta.values()))
    return failed("duality round trip", diff[:2], diff[2:])
