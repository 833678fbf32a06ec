"""3-Lie algebras given by sparse structure constants.

Constants are stored only on strictly increasing index triples; every other
ordering is recovered by the sign of the sorting permutation, so the bracket
is totally skew by construction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .kernel import (
    ZERO,
    DimensionError,
    LinearMap,
    scalar,
    sparse_axpy,
    to_dense,
    to_sparse,
)
from .report import Report, failed, passed


class SignConflictError(ValueError):
    """Two entries for the same unordered triple disagree after sign normalization."""


def sort_with_sign(idx: Sequence[int]) -> tuple:
    """Sort a triple and return (sorted, sign); sign is 0 on a repeated index."""
    a, b, c = idx
    if a == b or b == c or a == c:
        return (tuple(sorted(idx)), 0)
    sign = 1
    lst = [a, b, c]
    for i in range(3):
        for j in range(2 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return (tuple(lst), sign)


def _clean(coeffs: Mapping) -> dict:
    return {int(k): scalar(v) for k, v in coeffs.items() if scalar(v)}


class ThreeLieAlgebra:
    """Finite-dimensional algebra with a totally skew ternary bracket.

    ``constants`` maps sorted triples (a, b, c) to sparse images {k: coeff}.
    Nothing here asserts the fundamental identity; call
    ``check_fundamental_identity`` for that.
    """

    __slots__ = ("dim", "labels", "constants", "_ad_cache", "_int_view")

    def __init__(self, dim: int, constants: Mapping | None = None, labels: Sequence[str] | None = None):
        if dim < 0:
            raise DimensionError("dimension must be non-negative")
        self.dim = dim
        if labels is None:
            labels = [f"e{i + 1}" for i in range(dim)]
        if len(labels) != dim:
            raise DimensionError(f"{len(labels)} labels for dimension {dim}")
        self.labels = tuple(labels)
        table: dict = {}
        for key, coeffs in (constants or {}).items():
            _insert(table, dim, key, coeffs)
        self.constants = {k: table[k] for k in sorted(table) if table[k]}
        self._ad_cache: dict = {}
        self._int_view = None

    def integer_view(self) -> "IntegerView":
        if self._int_view is None:
            self._int_view = IntegerView(self)
        return self._int_view

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable, labels=None) -> "ThreeLieAlgebra":
        """Build from (triple, coeffs) pairs in any order, checking duplicates agree."""
        table: dict = {}
        for key, coeffs in entries:
            _insert(table, dim, key, coeffs)
        return cls(dim, table, labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, ThreeLieAlgebra) and self.dim == other.dim and self.constants == other.constants

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(sorted(v.items()))) for k, v in self.constants.items())))

    def __repr__(self) -> str:
        return f"ThreeLieAlgebra(dim={self.dim}, nonzero_triples={len(self.constants)})"

    def is_abelian(self) -> bool:
        return not self.constants

    def relabel(self, labels: Sequence[str]) -> "ThreeLieAlgebra":
        return ThreeLieAlgebra(self.dim, self.constants, labels)

    def structure_constant(self, k: int, a: int, b: int, c: int) -> Fraction:
        """Coefficient of e_k in [e_a, e_b, e_c], any argument order."""
        key, sign = sort_with_sign((a, b, c))
        if not sign:
            return ZERO
        return sign * self.constants.get(key, {}).get(k, ZERO)

    def bracket_basis(self, a: int, b: int, c: int) -> dict:
        key, sign = sort_with_sign((a, b, c))
        if not sign:
            return {}
        img = self.constants.get(key)
        if not img:
            return {}
        if sign == 1:
            return dict(img)
        return {k: -v for k, v in img.items()}

    def bracket_sparse(self, u: Mapping, v: Mapping, w: Mapping) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                if a == b:
                    continue
                cab = ca * cb
                for c, cc in w.items():
                    if c == a or c == b:
                        continue
                    img = self.bracket_basis(a, b, c)
                    if img:
                        sparse_axpy(out, cab * cc, img)
        return out

    def bracket(self, u: Sequence, v: Sequence, w: Sequence) -> tuple:
        """Trilinear skew bracket of dense vectors."""
        for x in (u, v, w):
            if len(x) != self.dim:
                raise DimensionError(f"vector of length {len(x)} in a {self.dim}-dimensional algebra")
        out: dict = {}
        for (a, b, c), img in self.constants.items():
            det = (
                u[a] * (v[b] * w[c] - v[c] * w[b])
                - u[b] * (v[a] * w[c] - v[c] * w[a])
                + u[c] * (v[a] * w[b] - v[b] * w[a])
            )
            if det:
                sparse_axpy(out, det, img)
        return to_dense(out, self.dim)

    def ad_sparse(self, a: int, b: int) -> dict:
        """Columns of ad(e_a, e_b) as {t: image of e_t}, zero columns omitted."""
        key = (a, b)
        hit = self._ad_cache.get(key)
        if hit is None:
            hit = {}
            for t in range(self.dim):
                img = self.bracket_basis(a, b, t)
                if img:
                    hit[t] = img
            self._ad_cache[key] = hit
        return hit

    def ad_matrix(self, a: int, b: int) -> LinearMap:
        cols = self.ad_sparse(a, b)
        return LinearMap.from_columns(
            [to_dense(cols.get(t, {}), self.dim) for t in range(self.dim)], rows=self.dim
        )

    def ad(self, u: Sequence, v: Sequence) -> LinearMap:
        """Matrix of w -> [u, v, w] for dense vectors u, v."""
        n = self.dim
        cols = []
        for t in range(n):
            e = [ZERO] * n
            e[t] = Fraction(1)
            cols.append(self.bracket(u, v, e))
        return LinearMap.from_columns(cols, rows=n)

    def table(self) -> list:
        """Sorted list of (triple, sparse image) with nonzero image."""
        return [(k, dict(v)) for k, v in self.constants.items()]

    def transform(self, p: LinearMap) -> "ThreeLieAlgebra":
        """Rewrite the algebra in the basis given by the columns of ``p``."""
        if p.shape != (self.dim, self.dim):
            raise DimensionError(f"change of basis must be {self.dim}x{self.dim}")
        pinv = p.inverse()
        cols = [to_sparse(p.column(j)) for j in range(self.dim)]
        table = {}
        for i, j, k in combinations(range(self.dim), 3):
            img = self.bracket_sparse(cols[i], cols[j], cols[k])
            if img:
                new = to_sparse(pinv.apply(to_dense(img, self.dim)))
                if new:
                    table[(i, j, k)] = new
        return ThreeLieAlgebra(self.dim, table)

    def permute(self, order: Sequence[int], labels=None) -> "ThreeLieAlgebra":
        """New algebra whose i-th basis vector is the old basis vector order[i]."""
        if sorted(order) != list(range(self.dim)):
            raise ValueError("order must be a permutation of the basis indices")
        pos = {old: new for new, old in enumerate(order)}
        table = {}
        for (a, b, c), img in self.constants.items():
            key, sign = sort_with_sign((pos[a], pos[b], pos[c]))
            table[key] = {pos[k]: sign * v for k, v in img.items()}
        if labels is None:
            labels = [self.labels[o] for o in order]
        return ThreeLieAlgebra(self.dim, table, labels)

    def perturbed(self, triple: Sequence[int], k: int, delta) -> "ThreeLieAlgebra":
        """Copy with Γ^k on ``triple`` shifted by ``delta`` (used by fuzz tests)."""
        key, sign = sort_with_sign(triple)
        if not sign:
            raise ValueError("triple has a repeated index")
        table = {kk: dict(v) for kk, v in self.constants.items()}
        img = table.setdefault(key, {})
        img[k] = img.get(k, ZERO) + sign * scalar(delta)
        if not img[k]:
            del img[k]
        return ThreeLieAlgebra(self.dim, table, self.labels)


def _insert(table: dict, dim: int, key, coeffs) -> None:
    if len(key) != 3:
        raise ValueError(f"bracket key must have three indices, got {key!r}")
    for i in key:
        if not 0 <= i < dim:
            raise DimensionError(f"index {i} outside dimension {dim}")
    coeffs = _clean(coeffs)
    for k in coeffs:
        if not 0 <= k < dim:
            raise DimensionError(f"output index {k} outside dimension {dim}")
    skey, sign = sort_with_sign(key)
    if not sign:
        if coeffs:
            raise SignConflictError(f"nonzero bracket with a repeated index {tuple(key)}")
        return
    norm = {k: sign * v for k, v in coeffs.items()}
    if skey in table and table[skey] != norm:
        raise SignConflictError(
            f"conflicting values for the bracket on {tuple(key)} after sign normalization"
        )
    table[skey] = norm


def abelian(n: int, labels=None) -> ThreeLieAlgebra:
    return ThreeLieAlgebra(n, {}, labels)


def direct_sum(*algebras: ThreeLieAlgebra) -> ThreeLieAlgebra:
    table = {}
    labels: list = []
    offset = 0
    for alg in algebras:
        for (a, b, c), img in alg.constants.items():
            table[(a + offset, b + offset, c + offset)] = {k + offset: v for k, v in img.items()}
        labels.extend(alg.labels)
        offset += alg.dim
    if len(set(labels)) != len(labels):
        labels = [f"e{i + 1}" for i in range(offset)]
    return ThreeLieAlgebra(offset, table, labels)


def common_denominator(values) -> int:
    den = 1
    for v in values:
        d = Fraction(v).denominator
        if den % d:
            den = den * d // gcd(den, d)
    return den


class IntegerView:
    """Structure constants scaled by a common denominator to plain ints.

    Every exhaustive check in the package is homogeneous in the constants,
    so vanishing is unaffected by the scale while arithmetic avoids Fraction
    normalization.  ``full`` holds every ordered triple with a nonzero image.
    """

    def __init__(self, alg: ThreeLieAlgebra, scale: int | None = None):
        self.dim = alg.dim
        if scale is None:
            scale = common_denominator(v for img in alg.constants.values() for v in img.values())
        self.scale = scale
        full: dict = {}
        for (a, b, c), img in alg.constants.items():
            pos = {k: int(v * scale) for k, v in img.items()}
            neg = {k: -v for k, v in pos.items()}
            for key, val in (((a, b, c), pos), ((b, c, a), pos), ((c, a, b), pos),
                             ((b, a, c), neg), ((a, c, b), neg), ((c, b, a), neg)):
                full[key] = val
        self.full = full
        ad: dict = {}
        for (a, b, t), img in full.items():
            ad.setdefault((a, b), {})[t] = img
        self.ad = ad

    def br(self, a: int, b: int, c: int) -> dict:
        return self.full.get((a, b, c), _EMPTY)


_EMPTY: dict = {}


def _iaxpy(acc: dict, c: int, d: dict) -> None:
    for k, v in d.items():
        t = acc.get(k, 0) + c * v
        if t:
            acc[k] = t
        else:
            del acc[k]


def fundamental_identity_residual(alg: ThreeLieAlgebra, a: int, b: int, c: int, d: int, e: int) -> dict:
    """[x_a,x_b,[x_c,x_d,x_e]] minus the three-term expansion, as a sparse vector."""
    view = alg.integer_view()
    res = _fi_residual_int(view, a, b, c, d, e)
    sq = view.scale * view.scale
    return {k: Fraction(v, sq) for k, v in res.items()}


def _fi_residual_int(view: IntegerView, a: int, b: int, c: int, d: int, e: int) -> dict:
    ad = view.ad.get((a, b), _EMPTY)
    out: dict = {}
    if not ad:
        return out
    br = view.br
    for k, v in br(c, d, e).items():
        img = ad.get(k)
        if img:
            _iaxpy(out, v, img)
    img = ad.get(c)
    if img:
        for k, v in img.items():
            _iaxpy(out, -v, br(k, d, e))
    img = ad.get(d)
    if img:
        for k, v in img.items():
            _iaxpy(out, -v, br(c, k, e))
    img = ad.get(e)
    if img:
        for k, v in img.items():
            _iaxpy(out, -v, br(c, d, k))
    return out


def _fi_candidates(view: IntegerView, support: set, n: int) -> list:
    """Sorted triples c<d<e whose residual against ad(x_a, x_b) can be nonzero.

    Every term of the residual either applies ad(x_a, x_b) to [x_c,x_d,x_e]
    or to one of x_c, x_d, x_e, so the triple must touch ``support`` (the
    indices ad(x_a, x_b) does not kill) or bracket into it.
    """
    cands = set()
    for t in support:
        for u, v in combinations([i for i in range(n) if i != t], 2):
            cands.add(tuple(sorted((t, u, v))))
    for (c, d, e), img in view.full.items():
        if c < d < e and support.intersection(img):
            cands.add((c, d, e))
    return sorted(cands)


def check_fundamental_identity(alg: ThreeLieAlgebra) -> Report:
    """Exhaustive check over a<b and c<d<e; reports the lowest violating tuple.

    Triples that cannot produce a nonzero residual are counted as checked
    without being evaluated.
    """
    n = alg.dim
    view = alg.integer_view()
    per_pair = n * (n - 1) * (n - 2) // 6
    checked = 0
    for a, b in combinations(range(n), 2):
        ad = view.ad.get((a, b))
        if not ad:
            # every term carries ad(x_a, x_b), so the identity holds trivially
            checked += per_pair
            continue
        for c, d, e in _fi_candidates(view, set(ad), n):
            res = _fi_residual_int(view, a, b, c, d, e)
            if res:
                sq = view.scale * view.scale
                return failed(
                    "fundamental identity",
                    (a, b, c, d, e),
                    to_dense({k: Fraction(v, sq) for k, v in res.items()}, n),
                    detail=f"nonzero residual at {(a + 1, b + 1, c + 1, d + 1, e + 1)} (1-based)",
                    checked=checked + 1,
                )
        checked += per_pair
    return passed("fundamental identity", checked)


def is_three_lie(alg: ThreeLieAlgebra) -> bool:
    return check_fundamental_identity(alg).ok


def check_homomorphism(f: LinearMap, src: ThreeLieAlgebra, dst: ThreeLieAlgebra) -> Report:
    """f[u,v,w] = [fu,fv,fw] on every sorted basis triple of ``src``."""
    if f.shape != (dst.dim, src.dim):
        raise DimensionError(f"map of shape {f.shape} cannot go from dim {src.dim} to dim {dst.dim}")
    cols = [f.sparse_column(j) for j in range(src.dim)]
    checked = 0
    for a, b, c in combinations(range(src.dim), 3):
        checked += 1
        lhs = f.apply_sparse(src.bracket_basis(a, b, c))
        rhs = dst.bracket_sparse(cols[a], cols[b], cols[c])
        diff = dict(lhs)
        sparse_axpy(diff, -1, rhs)
        if diff:
            return failed("homomorphism", (a, b, c), to_dense(diff, dst.dim), checked=checked)
    return passed("homomorphism", checked)


def bracket_of_subspaces(alg: ThreeLieAlgebra, u, v, w):
    """Span of [u_i, v_j, w_k] over the bases of three subspaces."""
    from .kernel import span

    vecs = []
    us = [to_sparse(x) for x in u.basis]
    vs = [to_sparse(x) for x in v.basis]
    ws = [to_sparse(x) for x in w.basis]
    seen = set()
    for i, x in enumerate(us):
        for j, y in enumerate(vs):
            for k, z in enumerate(ws):
                img = alg.bracket_sparse(x, y, z)
                if img:
                    key = tuple(sorted(img.items()))
                    if key not in seen:
                        seen.add(key)
                        vecs.append(to_dense(img, alg.dim))
    return span(vecs, alg.dim)
