"""Generative constructions: free-nilpotent, free-metabelian, derivation
extensions and the metabelian quotient pipeline.

Every constructor returns a :class:`GradedLieAlgebra` in the canonical
(weight-sorted) basis.  Jacobi is never assumed: tests and the acceptance
suite run :func:`validate` on constructed outputs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .algebra import (
    AlgebraError,
    GradedLieAlgebra,
    _add_into,
    ideal_generated,
    lie_generated,
    quotient,
    to_sparse,
    validate,
)
from .kaplan import OrderResult, SkewPencil, metivier_order
from .linalg import ONE, ZERO, Subspace, annihilator, as_matrix

DEFAULT_CAP = 512

SparseVec = dict[int, Fraction]


class DimensionCapError(ValueError):
    """A construction would exceed the configured dimension cap."""


class StepCollapseError(AlgebraError):
    """The ideal generated by W swallows the top layer, so the quotient loses a step."""


def _check_cap(dim: int, cap: int | None, what: str) -> None:
    if cap is not None and dim > cap:
        raise DimensionCapError(f"{what} has dimension {dim} > cap {cap}")


# ---------------------------------------------------------------------------
# free-nilpotent via a Hall basis


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_dim(m: int, n: int) -> int:
    """Necklace count: dimension of weight-n part of the free Lie algebra on m letters."""
    total = sum(_mobius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


@dataclass(frozen=True)
class HallBasis:
    """Hall words up to a weight bound.

    ``words[i]`` is either a generator number (int) or a pair ``(a, b)`` of
    smaller word indices.  Words are ordered by weight, then by ``(a, b)``.
    """

    rank: int
    step: int
    words: tuple
    weights: tuple[int, ...]
    index: dict = field(compare=False, repr=False)

    def label(self, i: int) -> str:
        w = self.words[i]
        if isinstance(w, int):
            return f"X{w + 1}"
        return f"[{self.label(w[0])},{self.label(w[1])}]"


def hall_basis(m: int, s: int, cap: int | None = DEFAULT_CAP) -> HallBasis:
    if m < 1 or s < 1:
        raise ValueError("free_nilpotent needs m >= 1 and s >= 1")
    _check_cap(sum(witt_dim(m, n) for n in range(1, s + 1)), cap, f"free_nilpotent({m},{s})")
    words: list = list(range(m))
    weights = [1] * m
    by_weight = {1: list(range(m))}
    for w in range(2, s + 1):
        new = []
        for wa in range(1, w):
            for a in by_weight[wa]:
                for b in by_weight[w - wa]:
                    if not a < b:
                        continue
                    wb = words[b]
                    if not isinstance(wb, int) and wb[0] > a:
                        continue
                    new.append((a, b))
        new.sort()
        by_weight[w] = []
        for pair in new:
            by_weight[w].append(len(words))
            words.append(pair)
            weights.append(w)
    index = {wd: i for i, wd in enumerate(words) if not isinstance(wd, int)}
    return HallBasis(m, s, tuple(words), tuple(weights), index)


def _hall_bracket_fn(hb: HallBasis):
    words, weights, s = hb.words, hb.weights, hb.step

    @lru_cache(maxsize=None)
    def br(x: int, y: int) -> tuple:
        if x == y:
            return ()
        if x > y:
            return tuple((k, -c) for k, c in br(y, x))
        if weights[x] + weights[y] > s:
            return ()
        wy = words[y]
        if isinstance(wy, int) or wy[0] <= x:
            return ((hb.index[(x, y)], ONE),)
        y1, y2 = wy
        acc: SparseVec = {}
        for k, c in br(x, y1):
            _add_into(acc, dict(br(k, y2)), c)
        for k, c in br(x, y2):
            _add_into(acc, dict(br(y1, k)), c)
        return tuple(sorted(acc.items()))

    return br


def free_nilpotent(m: int, s: int, cap: int | None = DEFAULT_CAP, name: str | None = None) -> GradedLieAlgebra:
    hb = hall_basis(m, s, cap)
    br = _hall_bracket_fn(hb)
    n = len(hb.words)
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            if hb.weights[i] + hb.weights[j] <= s:
                v = dict(br(i, j))
                if v:
                    table[(i, j)] = v
    return GradedLieAlgebra(name or f"free_nilpotent({m},{s})", hb.weights, table)


def hall_word_labels(m: int, s: int, cap: int | None = DEFAULT_CAP) -> list[str]:
    hb = hall_basis(m, s, cap)
    return [hb.label(i) for i in range(len(hb.words))]


# ---------------------------------------------------------------------------
# free-metabelian


def metabelian_dim(m: int, k: int) -> int:
    if k < 2:
        raise ValueError("metabelian_dim needs k >= 2")
    return (k - 1) * comb(m + k - 2, k)


def metabelian_words(m: int, s: int) -> list[tuple[int, ...]]:
    """Generators ``(i,)`` then words ``(i1, i2, ..., ik)`` with ``i1 > i2 <= ... <= ik`` (1-based)."""
    out = [(i,) for i in range(1, m + 1)]
    for k in range(2, s + 1):
        layer = []
        for i2 in range(1, m + 1):
            for i1 in range(i2 + 1, m + 1):
                for tail in _sorted_tails(i2, m, k - 2):
                    layer.append((i1, i2) + tail)
        out.extend(sorted(layer))
    return out


def _sorted_tails(lo: int, m: int, length: int):
    if length == 0:
        yield ()
        return
    for first in range(lo, m + 1):
        for rest in _sorted_tails(first, m, length - 1):
            yield (first,) + rest


def _insert_sorted(word: tuple[int, ...], j: int) -> tuple[int, ...]:
    # leftmost admissible position; ties give the same tuple
    tail = list(word[2:])
    pos = 0
    while pos < len(tail) and tail[pos] < j:
        pos += 1
    tail.insert(pos, j)
    return word[:2] + tuple(tail)


def metabelian_word_times_generator(word: tuple[int, ...], j: int) -> dict[tuple[int, ...], Fraction]:
    """``[word, X_j]`` for a word of length >= 2, without step truncation."""
    i1, i2 = word[0], word[1]
    if j >= i2:
        return {_insert_sorted(word, j): ONE}
    first = (i1, j) + word[1:]
    inner = (i2, j) + word[2:]
    second = _insert_sorted(inner, i1)
    out = {first: ONE}
    out[second] = out.get(second, ZERO) - ONE
    return {w: c for w, c in out.items() if c}


def free_metabelian(m: int, s: int, cap: int | None = DEFAULT_CAP, name: str | None = None) -> GradedLieAlgebra:
    if m < 2 or s < 2:
        raise ValueError("free_metabelian needs m >= 2 and s >= 2")
    _check_cap(m + sum(metabelian_dim(m, k) for k in range(2, s + 1)), cap, f"free_metabelian({m},{s})")
    words = metabelian_words(m, s)
    idx = {w: i for i, w in enumerate(words)}
    weights = tuple(len(w) for w in words)
    table: dict = {}

    def put(a: int, b: int, vec: dict) -> None:
        sign = ONE
        if a > b:
            a, b, sign = b, a, -ONE
        table[(a, b)] = {idx[w]: sign * c for w, c in vec.items()}

    for a in range(1, m + 1):
        for b in range(1, a):
            put(idx[(a,)], idx[(b,)], {(a, b): ONE})
    for w in words:
        if len(w) < 2 or len(w) >= s:
            continue
        for j in range(1, m + 1):
            put(idx[w], idx[(j,)], metabelian_word_times_generator(w, j))
    return GradedLieAlgebra(name or f"free_metabelian({m},{s})", weights, table)


def metabelian_word_labels(m: int, s: int) -> list[str]:
    return ["(" + ",".join(f"X{i}" for i in w) + ")" if len(w) > 1 else f"X{w[0]}" for w in metabelian_words(m, s)]


# ---------------------------------------------------------------------------
# derivations and semidirect sums


@dataclass(frozen=True)
class Derivation:
    algebra: GradedLieAlgebra
    images: tuple[tuple[tuple[int, Fraction], ...], ...]  # sparse image of each basis vector

    def image(self, i: int) -> dict[int, Fraction]:
        return dict(self.images[i])

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        acc: SparseVec = {}
        for i, c in to_sparse(v).items():
            _add_into(acc, self.image(i), c)
        return tuple(acc.get(i, ZERO) for i in range(self.algebra.dim))

    def matrix(self) -> list[list[Fraction]]:
        """Column ``i`` holds ``D(e_i)``."""
        n = self.algebra.dim
        cols = [self.image(i) for i in range(n)]
        return [[cols[j].get(i, ZERO) for j in range(n)] for i in range(n)]

    def leibniz_failures(self) -> list[tuple[int, int]]:
        g = self.algebra
        bad = []
        for a in range(g.dim):
            for b in range(a + 1, g.dim):
                lhs: SparseVec = {}
                for k, c in g.structure(a, b).items():
                    _add_into(lhs, self.image(k), c)
                rhs: SparseVec = {}
                for k, c in self.image(a).items():
                    _add_into(rhs, g.structure(k, b), c)
                for k, c in self.image(b).items():
                    _add_into(rhs, g.structure(a, k), c)
                if lhs != rhs:
                    bad.append((a, b))
        return bad

    def raises_weight_by_one(self) -> bool:
        w = self.algebra.weights
        return all(w[k] == w[i] + 1 for i in range(len(w)) for k in self.image(i))


def _sparse_bracket(g: GradedLieAlgebra, x: SparseVec, y: SparseVec) -> SparseVec:
    acc: SparseVec = {}
    for i, a in x.items():
        for j, b in y.items():
            _add_into(acc, g.structure(i, j), a * b)
    return acc


def extend_derivation(f: GradedLieAlgebra, phi: Sequence, hall: HallBasis | None = None) -> Derivation:
    """Extend ``phi: V1 -> V2`` of a free-nilpotent algebra to a derivation.

    ``phi[i]`` is the image of generator ``i``, as a dense vector or a sparse
    dict over the basis of ``f``.  Hall words are processed in basis order,
    so both children of a word have images before the word itself.
    """
    hb = hall or hall_basis(f.rank, f.step, cap=None)
    if len(hb.words) != f.dim or hb.weights != f.weights:
        raise ValueError("f does not match the Hall basis of free_nilpotent(rank, step)")
    if len(phi) != f.rank:
        raise ValueError(f"phi needs {f.rank} images, got {len(phi)}")
    images: list[SparseVec] = []
    for i, img in enumerate(phi):
        vec = {k: Fraction(c) for k, c in img.items() if c} if isinstance(img, dict) else to_sparse(img)
        if any(f.weights[k] != 2 for k in vec):
            raise ValueError(f"phi(X{i + 1}) is not in the second layer")
        images.append(vec)
    for i in range(f.rank, f.dim):
        a, b = hb.words[i]
        acc = _sparse_bracket(f, images[a], {b: ONE})
        _add_into(acc, _sparse_bracket(f, {a: ONE}, images[b]))
        images.append(acc)
    d = Derivation(f, tuple(tuple(sorted(v.items())) for v in images))
    bad = d.leibniz_failures()
    if bad:
        raise AlgebraError(f"extension is not a derivation on pairs {bad[:5]}")
    return d


def semidirect_sum(f: GradedLieAlgebra, d: Derivation, name: str | None = None) -> GradedLieAlgebra:
    """``f + R t`` with ``[t, Y] = D(Y)``; the new generator sits right after V1 of ``f``."""
    if d.algebra is not f and d.algebra != f:
        raise ValueError("derivation belongs to a different algebra")
    if not d.raises_weight_by_one():
        raise ValueError("derivation must raise weight by exactly one")
    r = f.rank
    t = r

    def new(i: int) -> int:
        return i if i < r else i + 1

    weights = f.weights[:r] + (1,) + f.weights[r:]
    entries = [(new(i), new(j), new(k), c) for i, j, k, c in f.entries()]
    for y in range(f.dim):
        entries.extend((t, new(y), new(k), c) for k, c in d.image(y).items())
    g = GradedLieAlgebra.from_table(name or f"{f.name}+D", weights, entries)
    report = validate(g)
    if not report.ok:
        raise AlgebraError(f"semidirect sum failed validation: {report.summary()}")
    return g


def quaternionic_phi(f: GradedLieAlgebra) -> list[SparseVec]:
    """X1 -> [X2,X3], X2 -> [X3,X1], X3 -> [X1,X2] on a rank-3 algebra."""
    if f.rank != 3:
        raise ValueError("the quaternionic map needs rank 3")
    return [f.structure(1, 2), f.structure(2, 0), f.structure(0, 1)]


def quaternionic_extension(s: int, cap: int | None = DEFAULT_CAP) -> GradedLieAlgebra:
    if s < 2:
        raise ValueError("quaternionic_extension needs s >= 2")
    _check_cap(1 + sum(witt_dim(3, n) for n in range(1, s + 1)), cap, f"quaternionic_extension({s})")
    hb = hall_basis(3, s, cap=None)
    f = free_nilpotent(3, s, cap=None)
    d = extend_derivation(f, quaternionic_phi(f), hb)
    return semidirect_sum(f, d, name=f"quaternionic({s})")


@dataclass(frozen=True)
class SubalgebraShape:
    rank: int
    step: int
    dim: int


def subalgebra_shape(g: GradedLieAlgebra, p: Subspace) -> SubalgebraShape:
    lie = lie_generated(g, p)
    layer_dims = [(lie & g.layer(h)).dim for h in range(1, g.step + 1)]
    step = max((h + 1 for h, n in enumerate(layer_dims) if n), default=0)
    return SubalgebraShape(layer_dims[0] if layer_dims else 0, step, lie.dim)


def codim1_subalgebra_dims(g: GradedLieAlgebra, trials: int = 5, seed: int = 0) -> list[SubalgebraShape]:
    rng = random.Random(seed)
    m = g.rank
    out = []
    while len(out) < trials:
        vecs = [[Fraction(rng.randint(-3, 3)) for _ in range(m)] for _ in range(m - 1)]
        s = Subspace.span(vecs, m)
        if s.dim != m - 1:
            continue
        pad = (ZERO,) * (g.dim - m)
        out.append(subalgebra_shape(g, Subspace(g.dim, tuple(tuple(r) + pad for r in s.basis))))
    return out


# ---------------------------------------------------------------------------
# the metabelian quotient pipeline


def feasible_rank(k: int, s: int) -> int:
    """Smallest m >= 2k+2 with ``s (2km - 2k^2 - k) < (m+s-2)(m-1)``."""
    if k < 1 or s < 2:
        raise ValueError("feasible_rank needs k >= 1 and s >= 2")
    m = 2 * k + 2
    while not s * (2 * k * m - 2 * k * k - k) < (m + s - 2) * (m - 1):
        m += 1
    return m


def ideal_growth_bound(m: int, k: int, dim_w: int) -> int:
    if k < 2:
        raise ValueError("ideal_growth_bound needs k >= 2")
    return dim_w * comb(m + k - 3, k - 2)


@dataclass(frozen=True)
class MetabelianQuotient:
    algebra: GradedLieAlgebra
    dim_w: int
    ideal_layer_dims: tuple[int, ...]
    order: OrderResult | None
    conditional: bool  # True when the rank hypothesis on S could not be certified


def metabelian_quotient(
    m: int, s: int, k: int, forms: Sequence[Sequence[Sequence]], cap: int | None = DEFAULT_CAP, height: int = 8
) -> MetabelianQuotient:
    forms = [as_matrix(f) for f in forms]
    if not forms:
        raise ValueError("S must be nonempty")
    pencil = SkewPencil(m, tuple(tuple(tuple(r) for r in f) for f in forms))
    if not pencil.is_independent():
        raise ValueError("forms in S are linearly dependent")
    order = metivier_order(pencil, height) if 2 * k + 2 <= m else None
    if order is None or (order.upper_bound < 2 * k + 2 and order.witness is not None):
        raise ValueError(f"span(S) contains a nonzero form of rank <= {2 * k}")
    conditional = order.lower_bound < 2 * k + 2

    g = free_metabelian(m, s, cap)
    words = metabelian_words(m, s)
    v2 = list(g.layer_range(2))
    # mu in V2*: the coordinate on word (a, b), a > b, is form[a][b] (1-based word letters)
    mus = [[f[words[t][0] - 1][words[t][1] - 1] for t in v2] for f in forms]
    w_in_v2 = annihilator(Subspace.span(mus, len(v2)))
    dim_w = w_in_v2.dim
    n_skew = m * (m - 1) // 2
    assert dim_w == n_skew - len(forms)
    if len(forms) == comb(m - 2 * k, 2):
        assert dim_w == 2 * k * m - 2 * k * k - k
    offset = v2[0]
    w = Subspace.span(
        [tuple(ZERO for _ in range(offset)) + tuple(row) + tuple(ZERO for _ in range(g.dim - offset - len(v2)))
         for row in w_in_v2.basis],
        g.dim,
    )
    ideal = ideal_generated(g, w)
    ideal_dims = tuple((ideal & g.layer(h)).dim for h in range(1, s + 1))
    if ideal_dims[-1] == g.layer_dims[-1]:
        raise StepCollapseError(f"I(W) contains the whole layer V{s}: the quotient has step < {s}")
    q = quotient(g, ideal, name=f"metabelian_quotient({m},{s},{k})")
    assert q.step == s
    return MetabelianQuotient(q, dim_w, ideal_dims, order, conditional)


def padded_forms(forms: Sequence[Sequence[Sequence]], m: int) -> list[list[Fraction]]:
    """Embed each form as the leading block of an ``m x m`` zero matrix."""
    out = []
    for f in forms:
        f = as_matrix(f)
        n = len(f)
        if n > m:
            raise ValueError("cannot pad to a smaller size")
        out.append([[f[i][j] if i < n and j < n else ZERO for j in range(m)] for i in range(m)])
    return out


def standard_symplectic(m: int) -> list[list[Fraction]]:
    a = [[ZERO] * m for _ in range(m)]
    for i in range(0, m - 1, 2):
        a[i][i + 1] = ONE
        a[i + 1][i] = -ONE
    return a
