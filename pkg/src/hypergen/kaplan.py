"""Kaplan pencils, Métivier order and the hypergenerated decision.

For a stratified algebra with first two layers ``V1`` and ``V2`` the Kaplan
operator sends ``mu`` in ``V2*`` to the skew form ``(v, w) -> mu([v, w])``
on ``V1``.  The algebra is hypergenerated of order ``k`` exactly when every
nonzero form in that pencil has rank greater than ``2k``, so deciding it is
a skew MinRank instance.  The procedures below are sound but not complete:
when no certificate is found the answer is ``Unknown`` together with the
Pfaffian system that would settle it.
"""
from __future__ import annotations

import enum
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .algebra import (
    AlgebraError,
    GradedLieAlgebra,
    derived_subalgebra,
    lie_generated,
    require_stratified,
    step2_quotient,
)
from .linalg import (
    ONE,
    ZERO,
    Definiteness,
    IdenticallyZeroSystem,
    Polynomial,
    Subspace,
    as_matrix,
    count_common_real_roots,
    is_skew,
    nullspace,
    pfaffian_minors,
    quadratic_definiteness,
    rank,
    rational_roots,
    to_fraction,
    upoly_gcd,
    upoly_monic,
)

log = logging.getLogger(__name__)

DEFAULT_HEIGHT = 8

Form = tuple[tuple[Fraction, ...], ...]


class Method(enum.Enum):
    SINGLE_FORM = "SingleForm"
    PENCIL_STURM = "PencilSturm"
    DEFINITE_MINOR = "DefiniteMinor"
    WITNESS_ONLY = "WitnessOnly"
    BLOCK_SPLIT = "BlockSplit"


class Certainty(enum.Enum):
    EXACT = "Exact"
    BOUNDS = "Bounds"


class Verdict(enum.Enum):
    HYPERGENERATED = "Hypergenerated"
    NOT_HYPERGENERATED = "NotHypergenerated"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SkewPencil:
    """A list of skew-symmetric ``m x m`` forms spanning a subspace of Skew(R^m)."""

    v1_dim: int
    forms: tuple[Form, ...]

    def __post_init__(self):
        forms = tuple(tuple(tuple(to_fraction(x) for x in row) for row in f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        for f in forms:
            if len(f) != self.v1_dim or not is_skew(f):
                raise ValueError(f"every form must be a skew {self.v1_dim}x{self.v1_dim} matrix")

    @property
    def d(self) -> int:
        return len(self.forms)

    def flattened(self) -> list[tuple[Fraction, ...]]:
        m = self.v1_dim
        return [tuple(f[i][j] for i in range(m) for j in range(i + 1, m)) for f in self.forms]

    def is_independent(self) -> bool:
        if not self.forms:
            return True
        return rank(self.flattened()) == self.d

    def polynomial_matrix(self) -> list[list[Polynomial]]:
        m, d = self.v1_dim, self.d
        return [
            [Polynomial.linear([f[i][j] for f in self.forms]) if d else Polynomial(0) for j in range(m)]
            for i in range(m)
        ]

    def sub_pencil(self, rows: Sequence[int], coords: Sequence[int]) -> SkewPencil:
        return SkewPencil(
            len(rows),
            tuple(tuple(tuple(self.forms[l][i][j] for j in rows) for i in rows) for l in coords),
        )

    def integer_forms(self, p: int = _kernels.PRIME) -> np.ndarray:
        """All forms scaled by one common denominator, reduced mod p."""
        dens = [x.denominator for f in self.forms for row in f for x in row]
        scale = lcm(*dens) if dens else 1
        out = np.zeros((self.d, self.v1_dim, self.v1_dim), dtype=np.int64)
        for l, f in enumerate(self.forms):
            for i, row in enumerate(f):
                for j, x in enumerate(row):
                    out[l, i, j] = int(x * scale) % p
        return out

    def to_minrank_json(self, k: int) -> dict:
        return {
            "m": self.v1_dim,
            "d": self.d,
            "k": k,
            "forms": [[[str(x) for x in row] for row in f] for f in self.forms],
        }

    @classmethod
    def from_minrank_json(cls, data: dict) -> tuple[SkewPencil, int]:
        m = int(data["m"])
        forms = tuple(tuple(tuple(Fraction(str(x)) for x in row) for row in f) for f in data["forms"])
        if "d" in data and int(data["d"]) != len(forms):
            raise ValueError("d does not match the number of forms")
        return cls(m, forms), int(data.get("k", 0))


@dataclass(frozen=True)
class OrderResult:
    lower_bound: int
    upper_bound: int
    certainty: Certainty
    method: Method
    witness: tuple[Fraction, ...] | None = None
    certificate: dict = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return self.certainty is Certainty.EXACT

    @property
    def value(self) -> int | None:
        return self.lower_bound if self.exact else None

    def describe(self) -> str:
        if self.exact:
            return f"order={self.lower_bound} ({self.certainty.value}, {self.method.value})"
        return (
            f"order in [{self.lower_bound}, {self.upper_bound}] "
            f"({self.certainty.value}, {self.method.value})"
        )

    def to_json(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "certainty": self.certainty.value,
            "method": self.method.value,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "certificate": _jsonable(self.certificate),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Polynomial):
        return obj.to_json()
    if isinstance(obj, OrderResult):
        return obj.to_json()
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


# ---------------------------------------------------------------------------
# pencils and forms


def kaplan_pencil(g: GradedLieAlgebra) -> SkewPencil:
    require_stratified(g, "kaplan_pencil")
    if g.step < 2:
        raise AlgebraError("the Kaplan pencil of an abelian algebra is empty")
    v1 = list(g.layer_range(1))
    v2 = list(g.layer_range(2))
    forms = []
    for t in v2:
        forms.append(tuple(tuple(g.structure(a, b).get(t, ZERO) for b in v1) for a in v1))
    pencil = SkewPencil(len(v1), tuple(forms))
    assert pencil.is_independent(), "Kaplan operator must be injective on a stratified algebra"
    return pencil


def form_at(p: SkewPencil, mu: Sequence) -> list[list[Fraction]]:
    if len(mu) != p.d:
        raise ValueError(f"mu has {len(mu)} entries, pencil has {p.d} forms")
    mu = [to_fraction(x) for x in mu]
    m = p.v1_dim
    return [[sum((c * f[i][j] for c, f in zip(mu, p.forms) if c), ZERO) for j in range(m)] for i in range(m)]


def rank_of_form(omega: Sequence[Sequence]) -> int:
    r = rank(omega)
    assert r % 2 == 0, "skew form of odd rank"
    return r


def isotropic_subspace(omega: Sequence[Sequence], k: int) -> Subspace:
    """A codimension-``k`` subspace on which ``omega`` vanishes.

    Kernel vectors come first, then one vector from each hyperbolic plane of
    a symplectic basis of a kernel complement; the list is cut to ``m - k``.
    """
    a = as_matrix(omega)
    m = len(a)
    if not is_skew(a):
        raise ValueError("omega must be skew-symmetric")
    r = rank_of_form(a)
    if r > 2 * k:
        raise ValueError(f"rank {r} > 2k = {2 * k}: no isotropic subspace of codimension {k}")
    if k > m:
        raise ValueError("codimension exceeds the dimension")

    def w(x, y):
        return sum((x[i] * a[i][j] * y[j] for i in range(m) if x[i] for j in range(m) if y[j]), ZERO)

    ker = Subspace.span(nullspace(a), m) if m else Subspace.zero(m)
    chosen = list(ker.basis)
    comp = []
    span = ker
    for i in range(m):
        e = tuple(ONE if c == i else ZERO for c in range(m))
        if not span.contains(e):
            comp.append(list(e))
            span = span + Subspace.span([e], m)
    reps = []
    while comp:
        u = comp.pop(0)
        idx = next(i for i, x in enumerate(comp) if w(u, x) != 0)
        v = comp.pop(idx)
        s = w(u, v)
        v = [x / s for x in v]
        reps.append(tuple(u))
        new = []
        for x in comp:
            a_xv, a_xu = w(x, v), w(x, u)
            new.append([xi - a_xv * ui + a_xu * vi for xi, ui, vi in zip(x, u, v)])
        comp = new
    chosen.extend(reps)
    p = Subspace.span(chosen[: m - k], m)
    assert p.dim == m - k
    assert all(w(x, y) == 0 for x in p.basis for y in p.basis), "constructed subspace is not isotropic"
    return p


def embed_general_matrix_space(mats: Sequence[Sequence[Sequence]]) -> SkewPencil:
    """Send each ``A`` to ``[[0, -A], [A^T, 0]]``; rank exactly doubles."""
    forms = []
    m = None
    for a in mats:
        a = as_matrix(a)
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("embed_general_matrix_space needs square matrices")
        if m is None:
            m = n
        elif n != m:
            raise ValueError("all matrices must have the same size")
        big = [[ZERO] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                big[i][n + j] = -a[i][j]
                big[n + j][i] = a[i][j]
        forms.append(tuple(tuple(r) for r in big))
    return SkewPencil(2 * (m or 0), tuple(forms))


def gs_from_skew(forms: Sequence[Sequence[Sequence]], name: str = "g_S") -> GradedLieAlgebra:
    """Step-two algebra whose Kaplan pencil is exactly ``forms``."""
    if not forms:
        raise ValueError("gs_from_skew needs at least one form")
    p = SkewPencil(len(forms[0]), tuple(tuple(tuple(r) for r in f) for f in forms))
    if not p.is_independent():
        raise ValueError("forms are linearly dependent")
    m = p.v1_dim
    table = {}
    for i in range(m):
        for j in range(i + 1, m):
            terms = {m + l: f[i][j] for l, f in enumerate(p.forms) if f[i][j]}
            if terms:
                table[(i, j)] = terms
    return GradedLieAlgebra(name, (1,) * m + (2,) * p.d, table)


# ---------------------------------------------------------------------------
# projective enumeration


def _rationals(height: int) -> list[Fraction]:
    vals = {Fraction(a, b) for b in range(1, height + 1) for a in range(-height, height + 1)}
    return sorted(vals, key=lambda x: (max(abs(x.numerator), x.denominator), x.denominator, abs(x.numerator), x < 0))


def _candidate_blocks(d: int, height: int) -> Iterator[tuple[int, list[Fraction], np.ndarray, np.ndarray]]:
    """Yield ``(lead, values, index_array, integer_mus)`` blocks in enumeration order.

    Points are normalised with their first nonzero coordinate equal to one;
    the lead position increases across blocks and tails run through the
    lexicographic product of the height-sorted rational list.
    """
    vals = _rationals(height)
    nums = np.array([v.numerator for v in vals], dtype=np.int64)
    dens = np.array([v.denominator for v in vals], dtype=np.int64)
    for lead in range(d):
        tail = d - 1 - lead
        if tail:
            grids = np.meshgrid(*([np.arange(len(vals))] * tail), indexing="ij")
            idx = np.stack([g.ravel() for g in grids], axis=1)
        else:
            idx = np.zeros((1, 0), dtype=np.int64)
        count = idx.shape[0]
        tail_den = dens[idx] if tail else np.ones((1, 0), dtype=np.int64)
        scale = np.lcm.reduce(tail_den, axis=1) if tail else np.ones(1, dtype=np.int64)
        mus = np.zeros((count, d), dtype=np.int64)
        mus[:, lead] = scale
        if tail:
            mus[:, lead + 1:] = nums[idx] * (scale[:, None] // tail_den)
        yield lead, vals, idx, mus


def _point(d: int, lead: int, vals: list[Fraction], row: np.ndarray) -> tuple[Fraction, ...]:
    return (ZERO,) * lead + (ONE,) + tuple(vals[int(i)] for i in row)


def _first_point_with_rank_at_most(p: SkewPencil, target: int, height: int) -> tuple[Fraction, ...] | None:
    forms = p.integer_forms()
    for lead, vals, idx, mus in _candidate_blocks(p.d, height):
        start = 0
        while True:
            hit = _kernels.first_rank_at_most(forms, mus, target, start)
            if hit < 0:
                break
            mu = _point(p.d, lead, vals, idx[hit])
            if rank_of_form(form_at(p, mu)) <= target:
                return mu
            start = hit + 1
    return None


def witness_search(p: SkewPencil, k: int, height: int = DEFAULT_HEIGHT) -> tuple[Fraction, ...] | None:
    """First projective rational ``mu`` of bounded height with ``rank(J_mu) <= 2k``.

    Deterministic; a None result proves nothing.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    if p.d == 0:
        return None
    return _first_point_with_rank_at_most(p, 2 * k, height)


# ---------------------------------------------------------------------------
# Métivier order


def _blocks(p: SkewPencil) -> list[tuple[list[int], list[int]]]:
    """Split into (rows, form indices) blocks when the pencil is block diagonal."""
    m = p.v1_dim
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in p.forms:
        support = [i for i in range(m) if any(f[i])]
        for i in support[1:]:
            parent[find(i)] = find(support[0])
    comps: dict[int, list[int]] = {}
    for i in range(m):
        comps.setdefault(find(i), []).append(i)
    owner = {}
    for l, f in enumerate(p.forms):
        roots = {find(i) for i in range(m) for j in range(m) if f[i][j]}
        if len(roots) != 1:
            return []
        owner[l] = roots.pop()
    blocks = []
    for root, rows in sorted(comps.items(), key=lambda kv: kv[1][0]):
        coords = [l for l, r in owner.items() if r == root]
        if coords:
            blocks.append((rows, coords))
    return blocks


def metivier_order(p: SkewPencil, height: int = DEFAULT_HEIGHT) -> OrderResult:
    """Minimum rank over nonzero forms of the pencil, with a certificate."""
    if p.d == 0:
        raise ValueError("empty pencil")
    if not p.is_independent():
        raise ValueError("pencil forms must be linearly independent")
    if p.d >= 2:
        blocks = _blocks(p)
        if len(blocks) > 1:
            return _order_by_blocks(p, blocks, height)
    if p.d == 1:
        r = rank_of_form(p.forms[0])
        return OrderResult(r, r, Certainty.EXACT, Method.SINGLE_FORM, (ONE,))
    if p.d == 2:
        return _order_pencil_sturm(p)
    return _order_by_bounds(p, height)


def _order_by_blocks(p: SkewPencil, blocks, height: int) -> OrderResult:
    subs = []
    for rows, coords in blocks:
        subs.append((coords, metivier_order(p.sub_pencil(rows, coords), height)))
    lower = min(r.lower_bound for _, r in subs)
    upper = min(r.upper_bound for _, r in subs)
    witness = None
    for coords, r in subs:
        if r.upper_bound == upper and r.witness is not None:
            mu = [ZERO] * p.d
            for c, v in zip(coords, r.witness):
                mu[c] = v
            witness = tuple(mu)
            break
    cert = {"blocks": [{"forms": coords, "order": r} for coords, r in subs]}
    certainty = Certainty.EXACT if lower == upper else Certainty.BOUNDS
    if witness is not None:
        assert rank_of_form(form_at(p, witness)) == upper
    return OrderResult(lower, upper, certainty, Method.BLOCK_SPLIT, witness, cert)


def _order_pencil_sturm(p: SkewPencil) -> OrderResult:
    m = p.v1_dim
    top = 2 * (m // 2)
    f_inf = form_at(p, (ZERO, ONE))
    rank_inf = rank_of_form(f_inf)
    mat = p.polynomial_matrix()
    for r in range(2, top + 1, 2):
        if r == top:
            mu = (ONE, ZERO)
            assert rank_of_form(form_at(p, mu)) == top
            return OrderResult(top, top, Certainty.EXACT, Method.PENCIL_STURM, mu, {"parity_cap": top})
        minors = [q for _, q in pfaffian_minors(mat, r + 2)]
        chart = [q.univariate(1, {0: ONE}) for q in minors]
        try:
            sample = count_common_real_roots(chart)
            zero_system = False
        except IdenticallyZeroSystem:
            sample, zero_system = None, True
        found = zero_system or sample is not None or rank_inf <= r
        if not found:
            continue
        witness = None
        if zero_system:
            witness = (ONE, ZERO)
        elif sample is not None:
            g = chart_gcd(chart)
            roots = ([sample.exact] if sample.exact is not None else []) + rational_roots(g)
            for t in roots:
                if rank_of_form(form_at(p, (ONE, t))) == r:
                    witness = (ONE, t)
                    break
        if witness is None and rank_inf <= r:
            witness = (ZERO, ONE)
        cert = {"minor_size": r + 2, "chart_root": None if sample is None else [str(sample.lo), str(sample.hi)]}
        if witness is not None:
            assert rank_of_form(form_at(p, witness)) == r
        return OrderResult(r, r, Certainty.EXACT, Method.PENCIL_STURM, witness, cert)
    raise AssertionError("unreachable: the parity cap always terminates the scan")


def chart_gcd(polys: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    g: list[Fraction] = []
    for q in polys:
        if any(q):
            g = upoly_gcd(g, q) if g else upoly_monic(q)
    return g


def definite_minor(p: SkewPencil) -> dict | None:
    """A principal 4x4 Pfaffian of the pencil that is a definite quadratic in ``mu``."""
    if p.v1_dim < 4:
        return None
    mat = p.polynomial_matrix()
    for idx, q in pfaffian_minors(mat, 4):
        if not q or q.total_degree() != 2:
            continue
        cls = quadratic_definiteness(q.quadratic_matrix())
        if cls in (Definiteness.POS_DEF, Definiteness.NEG_DEF):
            return {"minor": [i + 1 for i in idx], "pfaffian": q, "definiteness": cls.value}
    return None


def _order_by_bounds(p: SkewPencil, height: int) -> OrderResult:
    top = 2 * (p.v1_dim // 2)
    lower, method, cert = 2, Method.WITNESS_ONLY, {}
    dm = definite_minor(p)
    if dm is not None:
        lower, method, cert = 4, Method.DEFINITE_MINOR, dm
    upper, witness = top, None
    for r in range(lower, top + 1, 2):
        mu = _first_point_with_rank_at_most(p, r, height)
        if mu is not None:
            witness = mu
            upper = rank_of_form(form_at(p, mu))
            break
    certainty = Certainty.EXACT if lower == upper else Certainty.BOUNDS
    return OrderResult(lower, upper, certainty, method, witness, cert)


# ---------------------------------------------------------------------------
# decision


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    k: int
    reason: str
    order: OrderResult | None = None
    witness_mu: tuple[Fraction, ...] | None = None
    witness_subspace: Subspace | None = None
    exported_system: list[Polynomial] | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "k": self.k,
            "reason": self.reason,
            "order": None if self.order is None else self.order.to_json(),
            "witness_mu": None if self.witness_mu is None else [str(x) for x in self.witness_mu],
            "witness_subspace": None
            if self.witness_subspace is None
            else [[str(x) for x in row] for row in self.witness_subspace.basis],
            "exported_system": None
            if self.exported_system is None
            else [q.to_json() for q in self.exported_system],
        }


def _embed_v1(g: GradedLieAlgebra, p: Subspace) -> Subspace:
    """Lift a subspace of ``R^rank`` to the algebra's coordinates (V1 is the leading block)."""
    pad = (ZERO,) * (g.dim - g.rank)
    return Subspace(g.dim, tuple(tuple(row) + pad for row in p.basis))


def _not_hypergenerated(g, k, mu, pencil, reason, order=None) -> Decision:
    p = isotropic_subspace(form_at(pencil, mu), k)
    return Decision(Verdict.NOT_HYPERGENERATED, k, reason, order, tuple(mu), _embed_v1(g, p))


def is_hypergenerated(g: GradedLieAlgebra, k: int, height: int = DEFAULT_HEIGHT) -> Decision:
    require_stratified(g, "is_hypergenerated")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > g.rank:
        raise ValueError(f"k = {k} exceeds rank {g.rank}: no codimension-{k} subspace of V1")
    if k == 0:
        return Decision(Verdict.HYPERGENERATED, 0, "every stratified algebra is hypergenerated of order 0")
    if g.step == 1:
        return Decision(Verdict.HYPERGENERATED, k, "abelian: [g, g] = 0")
    q = step2_quotient(g)
    pencil = kaplan_pencil(q)
    if g.rank < 2 * (k + 1):
        mu = (ONE,) + (ZERO,) * (pencil.d - 1)
        return _not_hypergenerated(g, k, mu, pencil, f"rank {g.rank} < 2(k+1) = {2 * (k + 1)}")
    order = metivier_order(pencil, height)
    if order.lower_bound > 2 * k:
        return Decision(Verdict.HYPERGENERATED, k, f"order >= {order.lower_bound} > 2k", order)
    if order.witness is not None and order.upper_bound <= 2 * k:
        return _not_hypergenerated(g, k, order.witness, pencil, f"rank(J_mu) = {order.upper_bound} <= 2k", order)
    if order.exact and order.upper_bound <= 2 * k:
        # order known exactly but attained only at an irrational mu: no rational P to exhibit
        mu = witness_search(pencil, k, height)
        if mu is not None:
            return _not_hypergenerated(g, k, mu, pencil, "witness search", order)
        return Decision(
            Verdict.UNKNOWN, k, "order <= 2k certified, but no rational witness found", order,
            exported_system=export_system(pencil, k),
        )
    mu = witness_search(pencil, k, height)
    if mu is not None:
        return _not_hypergenerated(g, k, mu, pencil, "witness search", order)
    return Decision(Verdict.UNKNOWN, k, "no certificate either way", order, exported_system=export_system(pencil, k))


def export_system(p: SkewPencil, k: int) -> list[Polynomial]:
    """Principal ``(2k+2)``-Pfaffians; their common nonzero real zeros are the ``mu`` of rank <= 2k."""
    return [q for _, q in pfaffian_minors(p.polynomial_matrix(), 2 * k + 2) if q]


def abnormal_codim_bound(g: GradedLieAlgebra, k: int, height: int = DEFAULT_HEIGHT) -> int:
    dec = is_hypergenerated(g, k, height)
    if dec.verdict is not Verdict.HYPERGENERATED:
        raise ValueError(f"{g.name} is not certified hypergenerated of order {k}")
    return 2 * k + 3


# ---------------------------------------------------------------------------
# independent checks


def generates_layer_two(g: GradedLieAlgebra, p: Subspace) -> bool:
    """Whether ``Lie(P)`` contains ``V2`` (checked in ``g / g^3``)."""
    q = step2_quotient(g)
    pq = Subspace(q.dim, tuple(row[: q.dim] for row in p.basis))
    return lie_generated(q, pq).includes(q.layer(2))


def random_first_layer_subspace(g: GradedLieAlgebra, codim: int, rng: random.Random, spread: int = 3) -> Subspace:
    m = g.rank
    while True:
        vecs = [[Fraction(rng.randint(-spread, spread)) for _ in range(m)] for _ in range(m - codim)]
        s = Subspace.span(vecs, m)
        if s.dim == m - codim:
            return _embed_v1(g, s)


def sampled_generation_check(g: GradedLieAlgebra, k: int, samples: int = 20, seed: int = 0) -> bool:
    """Sampled check that random codim-``k`` subspaces of V1 Lie-generate ``[g, g]``."""
    rng = random.Random(seed)
    derived = derived_subalgebra(g)
    for _ in range(samples):
        p = random_first_layer_subspace(g, k, rng)
        if not lie_generated(g, p).includes(derived):
            return False
    return True


def iter_skew_minors(p: SkewPencil, size: int):
    return itertools.combinations(range(p.v1_dim), size)
