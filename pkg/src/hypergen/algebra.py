"""Graded Lie algebras given by structure constants.

A :class:`GradedLieAlgebra` stores ``[e_i, e_j] = sum_k c^k_ij e_k`` for
``i < j`` only; the other half follows from antisymmetry.  Basis vectors are
kept sorted by weight, so every layer ``V_h`` is a contiguous index range.
Subspaces of an algebra are plain :class:`~hypergen.linalg.Subspace`
objects in the algebra's coordinates.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import ONE, ZERO, Subspace, nullspace, to_fraction

SparseVec = dict[int, Fraction]

# Post-hoc invariant assertions (ideal closure etc.); tests switch this on.
CHECK_INVARIANTS = os.environ.get("HYPERGEN_CHECK", "") not in ("", "0")


class AlgebraError(ValueError):
    pass


class NotStratifiedError(AlgebraError):
    pass


class NotAnIdealError(AlgebraError):
    pass


def _add_into(acc: SparseVec, vec: Mapping[int, Fraction], scale: Fraction = ONE) -> None:
    for k, c in vec.items():
        v = acc.get(k, ZERO) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def to_sparse(v: Sequence) -> SparseVec:
    return {i: to_fraction(c) for i, c in enumerate(v) if c}


def to_dense(v: Mapping[int, Fraction], n: int) -> tuple[Fraction, ...]:
    return tuple(v.get(i, ZERO) for i in range(n))


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra:
    name: str
    weights: tuple[int, ...]
    table: Mapping[tuple[int, int], Mapping[int, Fraction]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 1 for x in w):
            raise AlgebraError("weights must be positive integers")
        if any(a > b for a, b in zip(w, w[1:])):
            raise AlgebraError("weights must be non-decreasing; use GradedLieAlgebra.from_table")
        n = len(w)
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), terms in self.table.items():
            if not (0 <= i < j < n):
                raise AlgebraError(f"bracket key ({i}, {j}) must satisfy 0 <= i < j < dim")
            row = {}
            for k, c in terms.items():
                if not 0 <= k < n:
                    raise AlgebraError(f"bracket [{i},{j}] has target index {k} out of range")
                c = to_fraction(c)
                if c:
                    row[int(k)] = c
            if row:
                clean[(int(i), int(j))] = row
        object.__setattr__(self, "table", clean)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_table(
        cls,
        name: str,
        weights: Sequence[int],
        entries: Iterable[tuple[int, int, int, object]],
    ) -> GradedLieAlgebra:
        """Build from ``(i, j, k, c)`` entries meaning ``[e_i, e_j] += c e_k``.

        Any index order is accepted: ``i > j`` entries are flipped with a sign
        and the basis is re-sorted by weight (stably).
        """
        n = len(weights)
        perm = sorted(range(n), key=lambda i: (weights[i], i))
        new_index = {old: new for new, old in enumerate(perm)}
        table: dict[tuple[int, int], SparseVec] = {}
        for i, j, k, c in entries:
            c = to_fraction(c)
            if i == j:
                if c:
                    raise AlgebraError(f"[e_{i}, e_{i}] must vanish")
                continue
            a, b = new_index[i], new_index[j]
            if a > b:
                a, b, c = b, a, -c
            _add_into(table.setdefault((a, b), {}), {new_index[k]: c})
        return cls(name, tuple(weights[i] for i in perm), table)

    def renamed(self, name: str) -> GradedLieAlgebra:
        return GradedLieAlgebra(name, self.weights, self.table)

    # -- basic data --------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def step(self) -> int:
        return self.weights[-1] if self.weights else 0

    @property
    def rank(self) -> int:
        return self.weights.count(1)

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return tuple(self.weights.count(h) for h in range(1, self.step + 1))

    def layer_range(self, h: int) -> range:
        start = sum(1 for w in self.weights if w < h)
        return range(start, start + self.weights.count(h))

    def layer(self, h: int) -> Subspace:
        return Subspace.coordinate(self.layer_range(h), self.dim)

    def entries(self) -> Iterable[tuple[int, int, int, Fraction]]:
        for (i, j), terms in sorted(self.table.items()):
            for k, c in sorted(terms.items()):
                yield i, j, k, c

    def structure(self, i: int, j: int) -> SparseVec:
        """``[e_i, e_j]`` as a sparse vector."""
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def sbracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> SparseVec:
        out: SparseVec = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                if i < j:
                    terms, s = self.table.get((i, j)), a * b
                else:
                    terms, s = self.table.get((j, i)), -a * b
                if terms:
                    _add_into(out, terms, s)
        return out

    def bracket(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        if len(x) != self.dim or len(y) != self.dim:
            raise AlgebraError("vector length does not match algebra dimension")
        return to_dense(self.sbracket(to_sparse(x), to_sparse(y)), self.dim)

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(ONE if c == i else ZERO for c in range(self.dim))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return self.weights == other.weights and self.table == other.table

    def __hash__(self):
        return hash((self.weights, tuple(self.entries())))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        brackets = []
        for (i, j), terms in sorted(self.table.items()):
            brackets.append(
                {
                    "i": i + 1,
                    "j": j + 1,
                    "terms": [{"k": k + 1, "c": str(c)} for k, c in sorted(terms.items())],
                }
            )
        return {"name": self.name, "dim": self.dim, "weights": list(self.weights), "brackets": brackets}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> GradedLieAlgebra:
        try:
            name = str(data["name"])
            dim = int(data["dim"])
            weights = [int(w) for w in data["weights"]]
            raw = data.get("brackets", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise AlgebraError(f"malformed algebra JSON: {exc}") from exc
        if len(weights) != dim:
            raise AlgebraError(f"dim={dim} but {len(weights)} weights given")
        entries = []
        for b in raw:
            i, j = int(b["i"]), int(b["j"])
            if not (1 <= i < j <= dim):
                raise AlgebraError(f"bracket indices must satisfy 1 <= i < j <= dim, got ({i}, {j})")
            for t in b["terms"]:
                k = int(t["k"])
                if not 1 <= k <= dim:
                    raise AlgebraError(f"term index {k} out of range")
                entries.append((i - 1, j - 1, k - 1, Fraction(str(t["c"]))))
        if any(a > b for a, b in zip(weights, weights[1:])):
            return cls.from_table(name, weights, entries)
        table: dict[tuple[int, int], SparseVec] = {}
        for i, j, k, c in entries:
            _add_into(table.setdefault((i, j), {}), {k: c})
        return cls(name, tuple(weights), table)

    @classmethod
    def loads(cls, text: str) -> GradedLieAlgebra:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"invalid JSON: {exc}") from exc
        return cls.from_json(data)


def abelian(n: int, name: str | None = None) -> GradedLieAlgebra:
    return GradedLieAlgebra(name or f"R{n}", (1,) * n, {})


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    checks: dict[str, bool]
    failures: dict[str, list[str]]
    step: int

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def summary(self) -> str:
        lines = [f"{name}: {'pass' if good else 'FAIL'}" for name, good in self.checks.items()]
        for name, msgs in self.failures.items():
            lines.extend(f"  {name}: {m}" for m in msgs[:5])
        return "\n".join(lines)


def validate(g: GradedLieAlgebra) -> ValidationReport:
    """Check antisymmetry, grading, Jacobi and stratification."""
    cached = g._cache.get("report")
    if cached is not None:
        return cached
    checks: dict[str, bool] = {}
    failures: dict[str, list[str]] = {}

    def record(name: str, msgs: list[str]) -> None:
        checks[name] = not msgs
        if msgs:
            failures[name] = msgs

    n = g.dim
    record("nonempty", [] if n else ["zero-dimensional algebra is not stratified"])
    # stored only for i < j, so antisymmetry holds by construction; re-check the key shape
    record("antisymmetry", [f"key {key}" for key in g.table if key[0] >= key[1]])

    graded_msgs = []
    for (i, j), terms in g.table.items():
        for k in terms:
            if g.weights[k] != g.weights[i] + g.weights[j]:
                graded_msgs.append(
                    f"[e{i + 1},e{j + 1}] has e{k + 1} of weight {g.weights[k]} != "
                    f"{g.weights[i]}+{g.weights[j]}"
                )
    record("grading", graded_msgs)

    top = g.step
    jac = []
    units = [{i: ONE} for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                if not graded_msgs and g.weights[i] + g.weights[j] + g.weights[l] > top:
                    continue
                acc: SparseVec = {}
                _add_into(acc, g.sbracket(units[i], g.structure(j, l)))
                _add_into(acc, g.sbracket(units[j], g.structure(l, i)))
                _add_into(acc, g.sbracket(units[l], g.structure(i, j)))
                if acc:
                    jac.append(f"Jacobi fails on (e{i + 1}, e{j + 1}, e{l + 1})")
                    if len(jac) >= 20:
                        break
            if len(jac) >= 20:
                break
        if len(jac) >= 20:
            break
    record("jacobi", jac)

    strat = []
    if n and not graded_msgs:
        v1 = list(g.layer_range(1))
        for h in range(2, top + 1):
            lay = g.layer_range(h)
            vecs = []
            for a in v1:
                for b in g.layer_range(h - 1):
                    s = g.structure(a, b)
                    if s:
                        vecs.append(to_dense(s, n))
            got = Subspace.span(vecs, n).dim
            if got != len(lay):
                strat.append(f"dim [V1, V{h - 1}] = {got} but dim V{h} = {len(lay)}")
    elif graded_msgs:
        strat.append("not graded")
    record("stratification", strat)

    central = []
    if n and not graded_msgs:
        for a in g.layer_range(1):
            for b in g.layer_range(top):
                if g.structure(a, b):
                    central.append(f"[e{a + 1}, e{b + 1}] != 0 with e{b + 1} in the top layer")
    record("top_layer_central", central)

    report = ValidationReport(checks, failures, top)
    g._cache["report"] = report
    return report


def is_stratified(g: GradedLieAlgebra) -> bool:
    return validate(g).ok


def require_stratified(g: GradedLieAlgebra, what: str) -> None:
    rep = validate(g)
    if not rep.ok:
        bad = ", ".join(k for k, v in rep.checks.items() if not v)
        raise NotStratifiedError(f"{what} requires a stratified algebra; {g.name} fails: {bad}")


# ---------------------------------------------------------------------------
# subspace operations


def _check_space(g: GradedLieAlgebra, s: Subspace) -> None:
    if s.ambient_dim != g.dim:
        raise AlgebraError(f"subspace lives in dimension {s.ambient_dim}, algebra has {g.dim}")


def bracket(g: GradedLieAlgebra, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
    return g.bracket(x, y)


def _brackets_of(g: GradedLieAlgebra, xs: Iterable[Sequence], ys: Iterable[Sequence]) -> list[tuple]:
    xs = [to_sparse(x) for x in xs]
    ys = [to_sparse(y) for y in ys]
    out = []
    for x in xs:
        for y in ys:
            v = g.sbracket(x, y)
            if v:
                out.append(to_dense(v, g.dim))
    return out


def bracket_spaces(g: GradedLieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    _check_space(g, a)
    _check_space(g, b)
    return Subspace.span(_brackets_of(g, a.basis, b.basis), g.dim)


def _closure(g: GradedLieAlgebra, start: Subspace, multipliers: Sequence[Sequence]) -> Subspace:
    """Smallest subspace containing ``start`` and closed under ad of ``multipliers``."""
    s = start
    new = list(start.basis)
    while new:
        cand = _brackets_of(g, multipliers, new)
        nxt = s + Subspace.span(cand, g.dim) if cand else s
        if nxt.dim == s.dim:
            break
        new = [v for v in nxt.basis if not s.contains(v)]
        s = nxt
    return s


def lie_generated(g: GradedLieAlgebra, p: Subspace) -> Subspace:
    """Smallest Lie subalgebra containing ``p``.

    Right-normed brackets of generators span the subalgebra, so closing
    under ``ad`` of the generators alone reaches the same fixpoint as
    ``S <- S + [S, S]``.
    """
    _check_space(g, p)
    return _closure(g, p, p.basis)


def ideal_generated(g: GradedLieAlgebra, w: Subspace) -> Subspace:
    _check_space(g, w)
    ideal = _closure(g, w, [g.basis_vector(i) for i in range(g.dim)])
    if CHECK_INVARIANTS:
        assert ideal.includes(bracket_spaces(g, ideal, Subspace.full(g.dim))), "ideal not closed"
        assert ideal.includes(w)
    return ideal


def lower_central_series(g: GradedLieAlgebra) -> list[Subspace]:
    full = Subspace.full(g.dim)
    series = [full]
    while series[-1].dim:
        nxt = bracket_spaces(g, full, series[-1])
        if nxt == series[-1]:
            break  # not nilpotent; stop rather than loop
        series.append(nxt)
    return series


def derived_subalgebra(g: GradedLieAlgebra) -> Subspace:
    series = lower_central_series(g)
    derived = series[1] if len(series) > 1 else series[0]
    if is_stratified(g):
        by_weight = Subspace.coordinate((i for i, w in enumerate(g.weights) if w >= 2), g.dim)
        assert derived == by_weight, "derived algebra differs from the weight >= 2 span"
    return derived


def center(g: GradedLieAlgebra) -> Subspace:
    n = g.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = [g.structure(i, j).get(k, ZERO) for i in range(n)]
            if any(row):
                rows.append(row)
    if not rows:
        return Subspace.full(n)
    return Subspace.span(nullspace(rows), n)


def step2_quotient(g: GradedLieAlgebra) -> GradedLieAlgebra:
    """``g / g^3``: drop every basis vector of weight greater than two."""
    require_stratified(g, "step2_quotient")
    if g.step <= 2:
        return g
    keep = [i for i, w in enumerate(g.weights) if w <= 2]
    table = {}
    for (i, j), terms in g.table.items():
        if g.weights[i] + g.weights[j] <= 2:
            table[(i, j)] = dict(terms)
    return GradedLieAlgebra(f"{g.name}/g3", tuple(g.weights[i] for i in keep), table)


def layer_components(g: GradedLieAlgebra, s: Subspace) -> list[Subspace]:
    """Projections of ``s`` onto each layer, in layer-local coordinates."""
    out = []
    for h in range(1, g.step + 1):
        r = g.layer_range(h)
        out.append(Subspace.span([v[r.start:r.stop] for v in s.basis], len(r)))
    return out


def is_homogeneous(g: GradedLieAlgebra, s: Subspace) -> bool:
    _check_space(g, s)
    return sum(c.dim for c in layer_components(g, s)) == s.dim


def is_ideal(g: GradedLieAlgebra, h: Subspace) -> bool:
    _check_space(g, h)
    return all(h.contains(v) for v in _brackets_of(g, h.basis, [g.basis_vector(i) for i in range(g.dim)]))


def is_homogeneous_ideal(g: GradedLieAlgebra, h: Subspace) -> bool:
    return is_homogeneous(g, h) and is_ideal(g, h)


class QuotientMap:
    """Projection ``g -> g/h`` onto layerwise complement coordinates."""

    def __init__(self, g: GradedLieAlgebra, h: Subspace):
        self.source = g
        self.comps = layer_components(g, h)
        self.keep: list[int] = []
        self._layers = []
        for hnum, comp in enumerate(self.comps, start=1):
            r = g.layer_range(hnum)
            piv = set(comp.pivots)
            kept_local = [c for c in range(len(r)) if c not in piv]
            self._layers.append((r, comp, kept_local))
            self.keep.extend(r.start + c for c in kept_local)

    def __call__(self, v: Sequence) -> tuple[Fraction, ...]:
        v = [to_fraction(x) for x in v]
        out = []
        for r, comp, kept in self._layers:
            res = comp.reduce(v[r.start:r.stop])
            out.extend(res[c] for c in kept)
        return tuple(out)


def quotient(g: GradedLieAlgebra, h: Subspace, name: str | None = None) -> GradedLieAlgebra:
    alg, _ = quotient_with_map(g, h, name)
    return alg


def quotient_with_map(
    g: GradedLieAlgebra, h: Subspace, name: str | None = None
) -> tuple[GradedLieAlgebra, QuotientMap]:
    _check_space(g, h)
    if not is_homogeneous(g, h):
        raise NotAnIdealError("subspace is not homogeneous")
    if not is_ideal(g, h):
        raise NotAnIdealError("subspace is not an ideal")
    if h.dim == 0:
        return g, QuotientMap(g, h)
    pi = QuotientMap(g, h)
    keep = pi.keep
    table = {}
    for a_pos, a in enumerate(keep):
        for b_pos in range(a_pos + 1, len(keep)):
            b = keep[b_pos]
            s = g.structure(a, b)
            if not s:
                continue
            image = pi(to_dense(s, g.dim))
            terms = {k: c for k, c in enumerate(image) if c}
            if terms:
                table[(a_pos, b_pos)] = terms
    q = GradedLieAlgebra(name or f"{g.name}/h", tuple(g.weights[i] for i in keep), table)
    return q, pi


def direct_product(a: GradedLieAlgebra, b: GradedLieAlgebra, name: str | None = None) -> GradedLieAlgebra:
    if b.dim == 0:
        return a
    if a.dim == 0:
        return b
    off = a.dim
    entries = list(a.entries()) + [(i + off, j + off, k + off, c) for i, j, k, c in b.entries()]
    return GradedLieAlgebra.from_table(name or f"{a.name}x{b.name}", a.weights + b.weights, entries)


def product_embedding(a: GradedLieAlgebra, b: GradedLieAlgebra) -> tuple[list[int], list[int]]:
    """Positions of the factors' basis vectors inside ``direct_product(a, b)``."""
    weights = a.weights + b.weights
    perm = sorted(range(len(weights)), key=lambda i: (weights[i], i))
    pos = {old: new for new, old in enumerate(perm)}
    return [pos[i] for i in range(a.dim)], [pos[a.dim + i] for i in range(b.dim)]


def is_carnot_subalgebra(g: GradedLieAlgebra, p: Subspace) -> bool:
    """Whether ``Lie(P) = P + [g, g]`` for ``P`` inside the first layer."""
    require_stratified(g, "is_carnot_subalgebra")
    _check_space(g, p)
    if not g.layer(1).includes(p):
        raise AlgebraError("P must lie in the first layer")
    return lie_generated(g, p) == p + derived_subalgebra(g)


def is_lie_isomorphism(a: GradedLieAlgebra, b: GradedLieAlgebra, images: Sequence[Sequence]) -> bool:
    """Check that ``e_i -> images[i]`` is a bijective bracket-preserving map ``a -> b``."""
    if a.dim != b.dim or len(images) != a.dim:
        return False
    imgs = [to_sparse(v) for v in images]
    if Subspace.span([to_dense(v, b.dim) for v in imgs], b.dim).dim != a.dim:
        return False
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            lhs: SparseVec = {}
            for k, c in a.structure(i, j).items():
                _add_into(lhs, imgs[k], c)
            if lhs != b.sbracket(imgs[i], imgs[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class Fingerprint:
    layer_dims: tuple[int, ...]
    step: int
    rank: int
    center_layer_dims: tuple[int, ...]
    metivier_order: int | None

    def to_json(self) -> dict:
        return {
            "layer_dims": list(self.layer_dims),
            "step": self.step,
            "rank": self.rank,
            "center_layer_dims": list(self.center_layer_dims),
            "metivier_order": self.metivier_order,
        }


def invariant_fingerprint(g: GradedLieAlgebra, height: int = 2) -> Fingerprint:
    """Isomorphism invariants; different fingerprints certify non-isomorphism.

    The order entry is the Métivier order of ``g/g^3`` when it is decided
    exactly, otherwise None.
    """
    from .kaplan import kaplan_pencil, metivier_order

    cached = g._cache.get(("fingerprint", height))
    if cached is not None:
        return cached
    z = center(g)
    zdims = tuple(c.dim for c in layer_components(g, z))
    order = None
    if g.step >= 2 and is_stratified(g):
        res = metivier_order(kaplan_pencil(step2_quotient(g)), height=height)
        if res.exact:
            order = res.lower_bound
    fp = Fingerprint(g.layer_dims, g.step, g.rank, zdims, order)
    g._cache[("fingerprint", height)] = fp
    return fp
