"""Built-in algebras: the 4-dimensional example and randomized graded families.

Every generator returns an algebra already written in an adapted basis
(+1 eigenvectors first) together with the signs of its involutive derivation.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .algebra import ThreeLieAlgebra, direct_sum
from .kernel import LinearMap

EXAMPLE_LABELS = ["x1", "x2", "x3", "x4"]


def example_algebra() -> ThreeLieAlgebra:
    """[x2,x3,x4] = x1 and [x1,x3,x4] = x2."""
    return ThreeLieAlgebra(4, {(1, 2, 3): {0: 1}, (0, 2, 3): {1: 1}}, EXAMPLE_LABELS)


def example_derivation() -> LinearMap:
    return LinearMap.diagonal([1, 1, 1, -1])


def simple_four() -> ThreeLieAlgebra:
    """[e_a, e_b, e_c] = sum_d eps_abcd e_d, the simple 4-dimensional 3-Lie algebra."""
    table = {}
    for a, b, c in combinations(range(4), 3):
        (d,) = set(range(4)) - {a, b, c}
        # (a, b, c) is sorted, so only the position of d matters
        table[(a, b, c)] = {d: 1 if (3 - d) % 2 == 0 else -1}
    return ThreeLieAlgebra(4, table)


def pair_extension(m_plus, m_minus) -> tuple:
    """V+ ⊕ <p> ⊕ V- ⊕ <q> with the single bracket [v, p, q] = M v.

    M = blockdiag(m_plus, m_minus) may be any pair of square matrices; the
    result is a 3-Lie algebra for every choice, and p, q carry grades +1, -1.
    """
    a = len(m_plus)
    b = len(m_minus)
    n = a + b + 2
    p, q = a, n - 1
    vplus = list(range(a))
    vminus = list(range(a + 1, a + 1 + b))
    table = {}
    for block, idx in ((m_plus, vplus), (m_minus, vminus)):
        for j, v in enumerate(idx):
            img = {idx[i]: Fraction(block[i][j]) for i in range(len(idx)) if block[i][j]}
            if img:
                key = tuple(sorted((v, p, q)))
                sign = 1 if (v < p) else -1  # (p, v, q) needs one swap
                table[key] = {k: sign * c for k, c in img.items()}
    signs = [1] * (a + 1) + [-1] * (b + 1)
    return ThreeLieAlgebra(n, table), signs


# Small Lie algebras (structure constants {(i, j): {k: c}} with i < j) and
# faithful modules given by one matrix per basis element.
LIE_MODULES = {
    # [h, e] = e acting on Q^2
    "aff1": ({(0, 1): {1: 1}}, [[[1, 0], [0, 0]], [[0, 1], [0, 0]]]),
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h on the standard module
    "sl2": ({(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},
            [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]),
    # Heisenberg [p, q] = z acting on Q^3 by strictly upper triangular matrices
    "heis": ({(0, 1): {2: 1}},
             [[[0, 1, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
              [[0, 0, 1], [0, 0, 0], [0, 0, 0]]]),
}


def lie_extension(lie: dict, rho: list, x0_grade: int = 1) -> tuple:
    """<x0> ⊕ (L ⋉ V) with [x0, y, z] = [y, z] and every other bracket zero.

    L acts on V through the matrices rho; V is an abelian ideal.  Grading
    x0 and V by ``x0_grade`` and L by its negative is a derivation grading.
    Adapted order is (x0, V, L) for grade +1 and (L, x0, V) for grade -1.
    """
    m = len(rho)
    d = len(rho[0]) if rho else 0
    n = 1 + m + d
    if x0_grade == 1:
        x0, vs, ls = 0, list(range(1, 1 + d)), list(range(1 + d, n))
        signs = [1] * (1 + d) + [-1] * m
    else:
        ls, x0, vs = list(range(m)), m, list(range(m + 1, n))
        signs = [1] * m + [-1] * (1 + d)
    lie_br = {}
    for (i, j), img in lie.items():
        lie_br[(ls[i], ls[j])] = {ls[k]: Fraction(c) for k, c in img.items()}
    for i in range(m):
        for j in range(d):
            img = {vs[r]: Fraction(rho[i][r][j]) for r in range(d) if rho[i][r][j]}
            if img:
                lie_br[(ls[i], vs[j])] = img
    table = {}
    for (y, z), img in lie_br.items():
        key = (x0, y, z)
        srt = tuple(sorted(key))
        # sign of the permutation sorting (x0, y, z) with y != z
        sign = 1
        perm = list(key)
        for p in range(3):
            for q in range(2 - p):
                if perm[q] > perm[q + 1]:
                    perm[q], perm[q + 1] = perm[q + 1], perm[q]
                    sign = -sign
        table[srt] = {k: sign * c for k, c in img.items()}
    return ThreeLieAlgebra(n, table), signs


def nilpotent_graded(plus_u: int, minus_u: int, plus_z: int, minus_z: int, rng: random.Random,
                     density: float = 0.6, spread: int = 3) -> tuple:
    """U ⊕ Z with [U,U,U] ⊆ Z and Z central, brackets respecting the grading.

    Adapted order: U+, Z+, U-, Z-.
    """
    n = plus_u + plus_z + minus_u + minus_z
    up = list(range(plus_u))
    zp = list(range(plus_u, plus_u + plus_z))
    um = list(range(plus_u + plus_z, plus_u + plus_z + minus_u))
    zm = list(range(plus_u + plus_z + minus_u, n))
    sign = {i: 1 for i in up + zp}
    sign.update({i: -1 for i in um + zm})
    us = up + um
    table = {}
    for a, b, c in combinations(sorted(us), 3):
        target = sign[a] + sign[b] + sign[c]
        pool = zp if target == 1 else zm if target == -1 else []
        img = {}
        for k in pool:
            if rng.random() < density:
                v = rng.randint(-spread, spread)
                if v:
                    img[k] = Fraction(v)
        if img:
            table[(a, b, c)] = img
    return ThreeLieAlgebra(n, table), [sign[i] for i in range(n)]


def graded_direct_sum(first: tuple, second: tuple) -> tuple:
    """Direct sum of two graded algebras, re-ordered so the +1 part comes first."""
    alg = direct_sum(first[0], second[0])
    signs = list(first[1]) + list(second[1])
    order = [i for i, e in enumerate(signs) if e == 1] + [i for i, e in enumerate(signs) if e == -1]
    return alg.permute(order, labels=[f"e{i + 1}" for i in range(alg.dim)]), [signs[i] for i in order]


def _random_invertible(k: int, rng: random.Random, spread: int = 2) -> LinearMap:
    # unipotent triangular factors keep the determinant at 1
    lower = [[1 if i == j else (rng.randint(-spread, spread) if i > j else 0) for j in range(k)] for i in range(k)]
    upper = [[1 if i == j else (rng.randint(-spread, spread) if i < j else 0) for j in range(k)] for i in range(k)]
    return LinearMap.from_rows(lower, k) @ LinearMap.from_rows(upper, k)


def graded_basis_change(alg: ThreeLieAlgebra, signs, rng: random.Random) -> ThreeLieAlgebra:
    """Random change of basis inside each eigenspace; the grading stays adapted."""
    s = sum(1 for e in signs if e == 1)
    n = alg.dim
    top = _random_invertible(s, rng) if s else None
    bot = _random_invertible(n - s, rng) if n - s else None
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < s and j < s:
                row.append(top[i, j])
            elif i >= s and j >= s:
                row.append(bot[i - s, j - s])
            else:
                row.append(0)
        rows.append(row)
    return alg.transform(LinearMap.from_rows(rows, n))


def _random_matrix(k: int, rng: random.Random, spread: int = 2) -> list:
    return [[rng.randint(-spread, spread) for _ in range(k)] for _ in range(k)]


def random_graded(rng: random.Random, max_dim: int = 5) -> tuple:
    """One random graded 3-Lie algebra (adapted basis) and its derivation signs."""
    kind = rng.choice(["pair", "pair", "lie", "lie", "nilpotent", "sum"])
    fitting = [name for name, (_, rho) in LIE_MODULES.items() if 1 + len(rho) + len(rho[0]) <= max_dim]
    if kind == "lie" and fitting:
        name = rng.choice(fitting)
        lie, rho = LIE_MODULES[name]
        alg, signs = lie_extension(lie, rho, rng.choice([1, -1]))
    elif kind in ("pair", "lie") or max_dim < 5:
        a = rng.randint(0, max(0, max_dim - 3))
        b = rng.randint(0, max(0, max_dim - 2 - a))
        alg, signs = pair_extension(_random_matrix(a, rng), _random_matrix(b, rng))
    elif kind == "nilpotent":
        while True:
            parts = [rng.randint(0, 2) for _ in range(4)]
            if 3 <= sum(parts) <= max_dim and parts[0] + parts[2] >= 3:
                break
        alg, signs = nilpotent_graded(*parts, rng=rng)
    else:
        # 3-dimensional summand plus whatever room is left
        first = pair_extension(_random_matrix(1, rng), [])
        rest = max_dim - 3
        if rest >= 3:
            second = pair_extension([], _random_matrix(rng.randint(0, rest - 3), rng))
        else:
            second = ThreeLieAlgebra(rest), [rng.choice([1, -1]) for _ in range(rest)]
        alg, signs = graded_direct_sum(first, second)
    if rng.random() < 0.7:
        alg = graded_basis_change(alg, signs, rng)
    return alg, signs


def random_graded_batch(seed: int, count: int, max_dim: int = 5) -> list:
    rng = random.Random(seed)
    return [random_graded(rng, max_dim) for _ in range(count)]
