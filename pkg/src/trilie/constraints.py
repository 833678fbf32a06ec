"""Quadratic constraints on graded structure constants.

Four families of quadratic identities in the constants of a graded 3-Lie
algebra, each a graded component of the fundamental identity.  They are
stored as data, one string per product term:

    "<sign> <var><range> ... <up>.<lo1><lo2><lo3> <up>.<lo1><lo2><lo3>"

where a factor "k.ija" is the constant of e_k in [e_i, e_j, e_a] and a range
is "+" (the +1 eigenspace), "-" (the -1 eigenspace) or "0" (empty sum).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import ThreeLieAlgebra
from .derivation import InvolutiveDerivation, NotAdapted
from .report import Report, combine, failed, passed

# free-index ranges for each family
FAMILY_FREE = {
    "plus3-minus2": {"a": "+", "b": "+", "c": "+", "i": "-", "j": "-"},
    "plus4-minus1": {"a": "+", "b": "+", "c": "+", "i": "+", "j": "-"},
    "minus3-plus2": {"a": "-", "b": "-", "c": "-", "i": "+", "j": "+"},
    "minus4-plus1": {"a": "-", "b": "-", "c": "-", "i": "-", "j": "+"},
}

PRINTED = {
    "plus3-minus2": [
        ["+ k- t+ k.ija t.kbc", "+ k- t+ k.ijb t.akc", "+ k- t+ k.ijc t.abk"],
        ["+ k- t+ c.abk k.ijt", "+ k- t+ k.ija t.kbt", "+ k- t+ k.ijb c.akt"],
        ["+ k+ t+ k.abi c.jkt", "+ k+ t+ c.jak k.bit", "+ k+ t+ c.jbk k.iat"],
        ["+ t+ k+ k.abi c.kjt", "+ t+ k+ k.abj c.ikt", "- t+ k- c.abk k.ijt"],
        ["+ t+ k+ k.cja t.kbi", "+ t+ k+ k.cjb t.aki", "- t+ k+ k.abi t.cjk", "+ t+ k- k.cji t.abk"],
        ["+ t+ k+ b.aik k.cjt", "+ t+ k+ k.cja b.kit", "- t+ k+ b.cjk k.ait", "+ t+ k0 k.cji b.akt"],
        ["+ t+ k- k.aij b.ckt", "+ t+ k- b.cak k.ijt", "+ t+ k+ b.cik k.jat", "+ t+ k+ b.cjk k.ait"],
        ["+ t+ k+ k.bci t.akj", "+ t+ k+ k.bcj t.aik", "- t+ k- k.aij t.bck"],
    ],
    "plus4-minus1": [
        ["+ t- k- c.abk k.ijt", "+ t- k+ k.ija c.kbt", "+ t- k+ k.ijb c.akt", "+ t- k+ c.ijk k.abt"],
        ["+ k+ t- i.jak k.bct", "+ k+ t- i.jbk k.cat", "+ k+ t- i.jck k.abt"],
        ["+ k+ t- b.ajk k.ict", "+ k+ t- k.icj b.akt", "+ k- t+ b.ick k.ajt"],
        ["+ t- k+ k.abj i.ckt", "+ t- k+ i.cjk k.abt", "+ t- k- i.cak k.bjt", "+ t- k- i.cbk k.jat"],
    ],
    "minus3-plus2": [
        ["+ k+ t- k.ija t.kbc", "+ k+ t- k.ijb t.akc", "+ k+ t- k.ijc t.abk"],
        ["+ k+ t- c.abk k.ijt", "+ k+ t- k.ija c.kbt", "+ k+ t- k.ijb c.akt"],
        ["+ k- t- k.ibc a.jkt", "+ k- t- a.jbk k.cit", "+ k- t- a.jck k.ibt"],
        ["+ t- k+ k.jbi t.kac", "+ t- k- k.jba t.ikc", "+ t- k- k.jbc t.iak", "- t- k- k.iac t.jbk"],
        ["+ t- k- c.iak k.jbt", "+ t- k- k.jba c.ikt", "- t- k- c.jbk k.iat", "- t- k+ k.jbi c.kat"],
        ["+ t- k- k.abi t.kjc", "+ t- k- k.abj t.ikc", "- t- k+ c.abk k.ijt"],
        ["+ t- k- k.abi t.kjc", "+ t- k- k.abj t.ikc", "- t- k+ k.ijc t.abk"],
        ["+ t- k+ k.ijc a.bkt", "+ t- k+ a.bck k.ijt", "+ t- k- a.bik k.jct", "+ t- k- a.bjk k.cit"],
    ],
    "minus4-plus1": [
        ["+ t+ k+ c.abk k.jit", "+ t+ k- k.jia c.kbt", "+ t+ k- k.jib c.akt", "+ k- t- c.jik k.abt"],
        ["+ k- t+ i.jak k.bct", "+ k- t+ i.jbk k.cat", "+ k- t+ i.jck k.abt"],
        ["+ t+ k- k.jbc i.akt", "+ t+ k- i.ajk k.bct", "+ t+ k+ i.abk k.cjt", "+ t+ k+ i.ack k.jbt"],
        ["+ t+ k- c.jbk k.iat", "+ t+ k- k.iaj c.kbt", "+ t+ k+ c.iak k.jbt"],
    ],
}

# Corrections: (family, identity number from 1, term number from 1, replacement).
# Each identity is the e_c (or e_t) coefficient of one instance of the
# fundamental identity; the replacements restore that instance.  Several
# printed terms vanish identically by grading, so a wrong range or a dropped
# minus sign hides until the algebra has enough nonzero products.
CORRECTIONS = [
    # factor "t.kbt" repeats t; the output index is c
    ("plus3-minus2", 2, 2, "+ k- t+ k.ija c.kbt"),
    # empty range: k runs over the -1 eigenspace
    ("plus3-minus2", 6, 4, "+ t+ k- k.cji b.akt"),
    # the left-hand side term enters with a minus sign
    ("plus4-minus1", 1, 4, "- t- k+ c.ijk k.abt"),
    # minus sign, and t in "-" (in "+" the term is identically zero)
    ("plus4-minus1", 3, 3, "- k- t- b.ick k.ajt"),
    # the right-hand side term keeps its plus sign
    ("minus3-plus2", 5, 4, "+ t- k+ k.jbi c.kat"),
    # output index c and summed index t were exchanged
    ("minus3-plus2", 6, 1, "+ t- k- k.abi c.kjt"),
    ("minus3-plus2", 6, 2, "+ t- k- k.abj c.ikt"),
    # minus sign, and t in "+" (in "-" the term is identically zero)
    ("minus4-plus1", 1, 4, "- k- t+ c.jik k.abt"),
    ("minus4-plus1", 4, 3, "- t+ k+ c.iak k.jbt"),
]


@dataclass(frozen=True)
class Term:
    sign: int
    ranges: tuple  # ((var, range), ...)
    f1: tuple      # (up, lo1, lo2, lo3) variable names
    f2: tuple


def parse_term(text: str) -> Term:
    parts = text.split()
    sign = {"+": 1, "-": -1}[parts[0]]
    ranges = []
    factors = []
    for tok in parts[1:]:
        if "." in tok:
            up, lo = tok.split(".")
            if len(up) != 1 or len(lo) != 3:
                raise ValueError(f"bad factor {tok!r}")
            factors.append((up, lo[0], lo[1], lo[2]))
        else:
            if len(tok) != 2 or tok[1] not in "+-0":
                raise ValueError(f"bad range {tok!r}")
            ranges.append((tok[0], tok[1]))
    if len(factors) != 2:
        raise ValueError(f"expected two factors in {text!r}")
    return Term(sign, tuple(ranges), factors[0], factors[1])


def families(corrected: bool = True) -> dict:
    fams = {name: [list(ident) for ident in idents] for name, idents in PRINTED.items()}
    if corrected:
        for fam, ident, term, text in CORRECTIONS:
            fams[fam][ident - 1][term - 1] = text
    return {name: [[parse_term(t) for t in ident] for ident in idents] for name, idents in fams.items()}


def _span(sym: str, s: int, n: int) -> range:
    if sym == "+":
        return range(0, s)
    if sym == "-":
        return range(s, n)
    return range(0)


def evaluate(terms, env: dict, gam, s: int, n: int, fix_t: int | None = None):
    """Value of one identity for fixed free indices.

    With ``fix_t`` the variable t is pinned (terms whose t-range excludes it
    contribute nothing); otherwise every bound variable is summed as printed.
    """
    total = 0
    for term in terms:
        spans = []
        names = []
        skip = False
        for var, sym in term.ranges:
            rng = _span(sym, s, n)
            if var == "t" and fix_t is not None:
                if fix_t not in rng:
                    skip = True
                    break
                rng = (fix_t,)
            names.append(var)
            spans.append(rng)
        if skip:
            continue
        for vals in product(*spans):
            e = dict(env)
            e.update(zip(names, vals))
            if fix_t is not None and "t" not in names:
                e["t"] = fix_t
            u1, a1, b1, c1 = (e[v] for v in term.f1)
            x = gam(u1, a1, b1, c1)
            if not x:
                continue
            u2, a2, b2, c2 = (e[v] for v in term.f2)
            y = gam(u2, a2, b2, c2)
            if y:
                total += term.sign * x * y
    return total


def check_jacobi_constraints(alg: ThreeLieAlgebra, g: InvolutiveDerivation, corrected: bool = True,
                             per_index: bool = True) -> Report:
    """Evaluate every identity of the four families over its free-index ranges.

    ``per_index`` pins the summation index t (a stronger test than the summed
    form, since the summed form adds up the per-t values).
    """
    if not g.is_adapted() or g.dim != alg.dim:
        raise NotAdapted("constraint families are stated in an adapted basis")
    n, s = alg.dim, g.s
    view = alg.integer_view()
    full = view.full

    def gam(k, a, b, c):
        img = full.get((a, b, c))
        return img.get(k, 0) if img else 0

    reports = []
    for name, idents in families(corrected).items():
        free = FAMILY_FREE[name]
        names = sorted(free)
        spans = [_span(free[v], s, n) for v in names]
        checked = 0
        bad = None
        for num, terms in enumerate(idents, start=1):
            for vals in product(*spans):
                env = dict(zip(names, vals))
                ts = range(n) if per_index else [None]
                for t in ts:
                    checked += 1
                    val = evaluate(terms, env, gam, s, n, fix_t=t)
                    if val:
                        wit = {"identity": num, **env}
                        if t is not None:
                            wit["t"] = t
                        bad = failed(f"constraints {name}", wit, val, checked=checked,
                                     detail=f"identity {num} nonzero")
                        break
                if bad:
                    break
            if bad:
                break
        reports.append(bad or passed(f"constraints {name}", checked))
    return combine("quadratic constraints", reports)
