"""Exact rational scalars, dense linear maps, row reduction and subspaces.

Everything here works over ``fractions.Fraction``; nothing is ever rounded.
Vectors are plain tuples of Fractions, matrices are ``LinearMap`` objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    pass


def scalar(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings of the form ``[+-]digits[/digits]``.
    Floats are refused since they would smuggle rounding into the engine.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not _RATIONAL.match(s):
            raise ValueError(f"not a rational literal: {x!r}")
        value = Fraction(s)
        return value
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not _RATIONAL.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in s and int(s.split("/")[1]) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vector(entries: Iterable) -> tuple:
    return tuple(scalar(e) for e in entries)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> tuple:
    if not 0 <= i < n:
        raise DimensionError(f"basis index {i} outside dimension {n}")
    return tuple(ONE if j == i else ZERO for j in range(n))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def add_vectors(u, v) -> tuple:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c, v) -> tuple:
    return tuple(c * a for a in v)


def to_sparse(v: Sequence[Fraction]) -> dict:
    return {i: c for i, c in enumerate(v) if c}


def to_dense(d: dict, n: int) -> tuple:
    out = [ZERO] * n
    for i, c in d.items():
        out[i] = out[i] + c
    return tuple(out)


def sparse_axpy(acc: dict, c, d: dict) -> None:
    """acc += c * d, in place, dropping entries that cancel."""
    if not c:
        return
    for k, v in d.items():
        t = acc.get(k, ZERO) + c * v
        if t:
            acc[k] = t
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class LinearMap:
    """Dense ``rows x cols`` matrix; column j is the image of basis vector j."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "LinearMap":
        rows = [tuple(scalar(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "LinearMap":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        cols = [tuple(scalar(x) for x in c) for c in columns]
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "LinearMap":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence) -> "LinearMap":
        d = [scalar(x) for x in diag]
        n = len(d)
        return cls(n, n, tuple(tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "LinearMap":
        """Map sending basis vector j to basis vector images[j]."""
        n = len(images)
        return cls.from_columns([unit_vector(n, images[j]) for j in range(n)], rows=n)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def sparse_column(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self.entries) if r[j]}

    def transpose(self) -> "LinearMap":
        return LinearMap(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    @property
    def T(self) -> "LinearMap":
        return self.transpose()

    def apply(self, v: Sequence[Fraction]) -> tuple:
        if len(v) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} map to a length-{len(v)} vector")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.entries)

    def apply_sparse(self, v: dict) -> dict:
        out: dict = {}
        for j, c in v.items():
            for i, r in enumerate(self.entries):
                if r[j]:
                    t = out.get(i, ZERO) + c * r[j]
                    if t:
                        out[i] = t
                    else:
                        out.pop(i, None)
        return out

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            if self.cols != other.rows:
                raise DimensionError(f"cannot compose {self.shape} with {other.shape}")
            ot = other.transpose().entries
            return LinearMap(
                self.rows,
                other.cols,
                tuple(
                    tuple(sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in ot)
                    for r in self.entries
                ),
            )
        return self.apply(other)

    def _zip(self, other: "LinearMap", op) -> "LinearMap":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return LinearMap(
            self.rows,
            self.cols,
            tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "LinearMap":
        return self.scaled(-1)

    def scaled(self, c) -> "LinearMap":
        c = scalar(c)
        return LinearMap(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == LinearMap.identity(self.rows)

    def commutator(self, other: "LinearMap") -> "LinearMap":
        return self @ other - other @ self

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "LinearMap":
        if self.rows != self.cols:
            raise DimensionError("only square maps can be inverted")
        n = self.rows
        aug = LinearMap(n, 2 * n, tuple(r + unit_vector(n, i) for i, r in enumerate(self.entries)))
        red, piv = rref(aug)
        if piv[:n] != list(range(n)) or len([p for p in piv if p < n]) != n:
            raise ZeroDivisionError("linear map is singular")
        return LinearMap(n, n, tuple(r[n:] for r in red.entries))

    def image(self) -> "Subspace":
        return span(self.columns(), self.rows)

    def kernel(self) -> "Subspace":
        return span(nullspace(self), self.cols)

    def tolist(self) -> list:
        return [list(r) for r in self.entries]


def rref(m) -> tuple:
    """Reduced row echelon form of ``m`` and its pivot columns.

    ``m`` may be a LinearMap or a sequence of rows.
    """
    if isinstance(m, LinearMap):
        rows = [list(r) for r in m.entries]
        ncols = m.cols
    else:
        rows = [[scalar(x) for x in r] for r in m]
        ncols = len(rows[0]) if rows else 0
    nrows = len(rows)
    pivots: list = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return LinearMap(nrows, ncols, tuple(tuple(x) for x in rows)), pivots


def nullspace(m: LinearMap) -> list:
    red, piv = rref(m)
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -red.entries[i][f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """Subspace of F^n stored by its rref basis, so equality is syntactic."""

    ambient_dim: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def pivots(self) -> list:
        return [next(i for i, x in enumerate(b) if x) for b in self.basis]

    def contains(self, v) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        if is_zero_vector(v):
            return True
        w = list(v)
        for b, p in zip(self.basis, self.pivots()):
            if w[p]:
                f = w[p]
                w = [x - f * y for x, y in zip(w, b)]
        return not any(w)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __lt__(self, other: "Subspace") -> bool:
        return self.issubspace(other) and self.dim < other.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimensions differ")
        return span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("ambient dimensions differ")
        if self.is_zero() or other.is_zero():
            return zero_subspace(self.ambient_dim)
        # solve sum a_i u_i = sum b_j w_j
        cols = list(self.basis) + [scale_vector(-1, w) for w in other.basis]
        m = LinearMap.from_columns(cols, rows=self.ambient_dim)
        vecs = []
        for sol in nullspace(m):
            v = zero_vector(self.ambient_dim)
            for c, u in zip(sol[: self.dim], self.basis):
                if c:
                    v = add_vectors(v, scale_vector(c, u))
            vecs.append(v)
        return span(vecs, self.ambient_dim)

    def coordinate_indices(self) -> list | None:
        """Indices i when the subspace is spanned by unit vectors e_i, else None."""
        idx = []
        for b in self.basis:
            nz = [i for i, x in enumerate(b) if x]
            if len(nz) != 1:
                return None
            idx.append(nz[0])
        return idx


def span(vectors: Iterable[Sequence], dim: int | None = None) -> Subspace:
    vecs = [tuple(scalar(x) for x in v) for v in vectors]
    if dim is None:
        if not vecs:
            raise DimensionError("span of no vectors needs an explicit ambient dimension")
        dim = len(vecs[0])
    for v in vecs:
        if len(v) != dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {dim}")
    if not vecs:
        return Subspace(dim, ())
    red, piv = rref(vecs)
    return Subspace(dim, tuple(red.entries[: len(piv)]))


subspace_span = span


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, ())


def whole_space(n: int) -> Subspace:
    return Subspace(n, tuple(unit_vector(n, i) for i in range(n)))


def coordinate_subspace(n: int, indices: Iterable[int]) -> Subspace:
    return span([unit_vector(n, i) for i in sorted(set(indices))], n)


# Sparse linear maps: {column j: {row i: value}}, zero columns omitted.
# Used where dense composition would dominate (representation axioms).


def sm_apply(m: dict, v: dict) -> dict:
    out: dict = {}
    for j, c in v.items():
        col = m.get(j)
        if col:
            sparse_axpy(out, c, col)
    return out


def sm_compose(a: dict, b: dict) -> dict:
    """Columns of a∘b."""
    out = {}
    for j, col in b.items():
        img = sm_apply(a, col)
        if img:
            out[j] = img
    return out


def sm_axpy(acc: dict, c, m: dict) -> None:
    """acc += c * m in place."""
    if not c:
        return
    for j, col in m.items():
        tgt = acc.setdefault(j, {})
        sparse_axpy(tgt, c, col)
        if not tgt:
            del acc[j]


def sm_transpose(m: dict) -> dict:
    out: dict = {}
    for j, col in m.items():
        for i, v in col.items():
            out.setdefault(i, {})[j] = v
    return out


def sm_to_map(m: dict, rows: int, cols: int | None = None) -> LinearMap:
    cols = rows if cols is None else cols
    return LinearMap.from_columns([to_dense(m.get(j, {}), rows) for j in range(cols)], rows=rows)


def sm_from_map(m: LinearMap) -> dict:
    out = {}
    for j in range(m.cols):
        col = m.sparse_column(j)
        if col:
            out[j] = col
    return out
