"""Exact rational linear algebra, Pfaffians, quadratic forms and Sturm sequences.

Everything here works over :class:`fractions.Fraction`.  Matrices are plain
row-major sequences of sequences; functions never mutate their inputs.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = Sequence[Sequence[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use an exact value")
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return str(x)


def as_matrix(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    return [[to_fraction(x) for x in row] for row in rows]


def zeros(rows: int, cols: int) -> list[list[Fraction]]:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> list[list[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> list[list[Fraction]]:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in bt] for row in a]


def is_skew(a: Matrix) -> bool:
    n = len(a)
    if any(len(row) != n for row in a):
        return False
    return all(a[i][j] == -a[j][i] for i in range(n) for j in range(i, n))


def rref(m: Matrix) -> tuple[list[list[Fraction]], int, list[int]]:
    """Reduced row-echelon form.

    Returns the RREF (same shape as the input, zero rows at the bottom), the
    rank and the pivot columns.
    """
    a = as_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        pr = [x * inv for x in a[r]]
        a[r] = pr
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(m: Matrix) -> int:
    """Rank by fraction-free elimination on a working copy."""
    a = as_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            if f != 0:
                a[i] = [x - f * y / p for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def nullspace(m: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    if not m:
        n = ncols or 0
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    red, r, pivots = rref(m)
    n = len(red[0])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(red[:r], pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def det(m: Matrix) -> Fraction:
    """Determinant by Gaussian elimination; independent of the Pfaffian code."""
    a = as_matrix(m)
    n = len(a)
    sign = ONE
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


# ---------------------------------------------------------------------------
# Subspaces


@dataclass(frozen=True)
class Subspace:
    """Row space in canonical reduced row-echelon form.

    Two subspaces are equal iff their ``basis`` tuples are identical.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        rows = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls(ambient_dim, ())
        red, r, _ = rref(rows)
        return cls(ambient_dim, tuple(tuple(row) for row in red[:r]))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, tuple(tuple(r) for r in identity(ambient_dim)))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int) -> Subspace:
        idx = sorted(set(indices))
        return cls(
            ambient_dim,
            tuple(tuple(ONE if c == i else ZERO for c in range(ambient_dim)) for i in idx),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [next(c for c, x in enumerate(row) if x != 0) for row in self.basis]

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Residual of ``v`` after eliminating the pivot columns."""
        out = [to_fraction(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = out[p]
            if f:
                out = [x - f * y for x, y in zip(out, row)]
        return out

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def includes(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return subspace_intersect(self, other)

    def coordinates(self, v: Sequence) -> list[Fraction]:
        """Coordinates of ``v`` in the canonical basis; ``v`` must lie in the span."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [to_fraction(v[p]) for p in self.pivots]


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.basis + b.basis, a.ambient_dim)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if not a.basis or not b.basis:
        return Subspace.zero(a.ambient_dim)
    # columns are the basis vectors of a and b; null vectors (x, y) give sum x_i a_i in a ∩ b
    cols = list(a.basis) + list(b.basis)
    m = transpose(cols)
    vecs = []
    for null in nullspace(m):
        x = null[: a.dim]
        vecs.append(
            tuple(sum((xi * row[c] for xi, row in zip(x, a.basis)), ZERO) for c in range(a.ambient_dim))
        )
    return Subspace.span(vecs, a.ambient_dim)


def annihilator(w: Subspace) -> Subspace:
    """``{phi : phi(w) = 0 for all w in W}`` in dual coordinates."""
    if not w.basis:
        return Subspace.full(w.ambient_dim)
    return Subspace.span(nullspace(w.basis), w.ambient_dim)


def complement_indices(s: Subspace) -> list[int]:
    """Standard basis indices spanning a complement of ``s`` (the non-pivot columns)."""
    piv = set(s.pivots)
    return [c for c in range(s.ambient_dim) if c not in piv]


# ---------------------------------------------------------------------------
# Pfaffians


def pfaffian(a: Sequence[Sequence], *, check: bool = True):
    """Pfaffian by first-row expansion.

    Works over any commutative ring whose elements support ``+``, ``-`` and
    ``*`` (Fractions, ints, :class:`Polynomial`).  Sub-Pfaffians are memoised
    on the set of remaining indices, so the cost is ``O(2^n n)``.
    """
    n = len(a)
    if check:
        if any(len(row) != n for row in a):
            raise ValueError("pfaffian needs a square matrix")
        if n % 2:
            raise ValueError("pfaffian of odd-sized matrix")
        for i in range(n):
            if a[i][i] != 0:
                raise ValueError("matrix is not skew-symmetric")
            for j in range(i + 1, n):
                if a[i][j] != -a[j][i]:
                    raise ValueError("matrix is not skew-symmetric")
    if n == 0:
        return _one_like(a)

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]):
        if len(idx) == 2:
            return a[idx[0]][idx[1]]
        first = idx[0]
        rest = idx[1:]
        total = None
        for pos, j in enumerate(rest):
            entry = a[first][j]
            if entry == 0:
                continue
            sub = pf(rest[:pos] + rest[pos + 1:])
            term = entry * sub
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else a[first][first]

    return pf(tuple(range(n)))


def _one_like(a):
    return ONE


def principal_submatrix(a: Matrix, idx: Sequence[int]) -> list[list]:
    return [[a[i][j] for j in idx] for i in idx]


def pfaffian_minors(a: Matrix, size: int) -> list[tuple[tuple[int, ...], object]]:
    """All principal Pfaffians of the given even size, keyed by index set."""
    n = len(a)
    return [
        (idx, pfaffian(principal_submatrix(a, idx), check=False))
        for idx in itertools.combinations(range(n), size)
    ]


# ---------------------------------------------------------------------------
# Quadratic forms


class Definiteness(enum.Enum):
    POS_DEF = "PosDef"
    NEG_DEF = "NegDef"
    POS_SEMI = "PosSemi"
    NEG_SEMI = "NegSemi"
    INDEFINITE = "Indefinite"
    ZERO = "Zero"


def _congruence_diagonalize(q: Matrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Return ``(d, t)`` with ``t q t^T = diag(d)``.

    Symmetric Gaussian elimination with full pivot search: a nonzero diagonal
    entry is used when one exists, otherwise a nonzero off-diagonal entry is
    folded onto the diagonal by a row/column addition.
    """
    a = as_matrix(q)
    n = len(a)
    if any(len(row) != n for row in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise ValueError("quadratic form matrix must be symmetric")
    t = identity(n)
    active = list(range(n))

    def add_row_col(i: int, j: int, f: Fraction) -> None:
        # row_i += f row_j ; col_i += f col_j  (congruence)
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        for r in range(n):
            a[r][i] += f * a[r][j]
        t[i] = [x + f * y for x, y in zip(t[i], t[j])]

    pairs: list[tuple[Fraction, list[Fraction]]] = []
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            add_row_col(i, j, ONE)  # a[i][i] becomes 2 a[i][j] since a[j][j] = 0
            p = i
        piv = a[p][p]
        for i in active:
            if i != p and a[i][p] != 0:
                add_row_col(i, p, -a[i][p] / piv)
        pairs.append((piv, t[p]))
        active.remove(p)
    pairs.extend((ZERO, t[i]) for i in active)
    return [d for d, _ in pairs], [row for _, row in pairs]


def quadratic_signature(q: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of the inertia of a symmetric matrix."""
    d, _ = _congruence_diagonalize(q)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0)


def quadratic_definiteness(q: Matrix) -> Definiteness:
    if not q:
        return Definiteness.ZERO
    pos, neg, _ = quadratic_signature(q)
    n = len(q)
    if pos == n:
        return Definiteness.POS_DEF
    if neg == n:
        return Definiteness.NEG_DEF
    if pos and neg:
        return Definiteness.INDEFINITE
    if pos:
        return Definiteness.POS_SEMI
    if neg:
        return Definiteness.NEG_SEMI
    return Definiteness.ZERO


def indefinite_witness(q: Matrix) -> tuple[Vector, Vector] | None:
    """Vectors ``(x, y)`` with ``x q x^T > 0 > y q y^T``, or None if not indefinite."""
    d, t = _congruence_diagonalize(q)
    pos = next((row for x, row in zip(d, t) if x > 0), None)
    neg = next((row for x, row in zip(d, t) if x < 0), None)
    if pos is None or neg is None:
        return None
    return tuple(pos), tuple(neg)


def quadratic_value(q: Matrix, x: Sequence[Fraction]) -> Fraction:
    return sum((x[i] * q[i][j] * x[j] for i in range(len(x)) for j in range(len(x))), ZERO)


# ---------------------------------------------------------------------------
# Polynomials


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fractions.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError("exponent vector length does not match variable count")
            c = to_fraction(c)
            if c:
                clean[exp] = clean.get(exp, ZERO) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> Polynomial:
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> Polynomial:
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other) -> Polynomial:
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Polynomial:
        return self._lift(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = to_fraction(other)
            return Polynomial(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._lift(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == Polynomial.constant(self.nvars, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"u{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else "") if c != 1 or not mono else mono)
        return " + ".join(parts)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __call__(self, point: Sequence) -> Fraction:
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= to_fraction(x) ** k
            total += v
        return total

    def univariate(self, var: int, fixed: dict[int, Fraction]) -> list[Fraction]:
        """Coefficient list (low degree first) in ``var`` after fixing every other variable."""
        if set(fixed) | {var} != set(range(self.nvars)):
            raise ValueError("all variables except one must be fixed")
        coeffs: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if i != var and k:
                    v *= to_fraction(fixed[i]) ** k
            coeffs[e[var]] = coeffs.get(e[var], ZERO) + v
        deg = max(coeffs, default=-1)
        return upoly_trim([coeffs.get(i, ZERO) for i in range(deg + 1)])

    def quadratic_matrix(self) -> list[list[Fraction]]:
        """Symmetric matrix of a homogeneous quadratic polynomial."""
        if self.terms and (self.total_degree() != 2 or not self.is_homogeneous()):
            raise ValueError("not a homogeneous quadratic")
        q = zeros(self.nvars, self.nvars)
        for e, c in self.terms.items():
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                q[i][i] += c
            else:
                q[i][j] += c / 2
                q[j][i] += c / 2
        return q

    def to_json(self) -> dict[str, str]:
        return {",".join(map(str, e)): str(c) for e, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, nvars: int, data: dict[str, str]) -> Polynomial:
        return cls(nvars, {tuple(int(x) for x in k.split(",")): Fraction(v) for k, v in data.items()})


# ---------------------------------------------------------------------------
# Univariate polynomials as coefficient lists, lowest degree first


def upoly_trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = [to_fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return upoly_trim([i * c for i, c in enumerate(p)][1:])


def upoly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_monic(p: Sequence[Fraction]) -> list[Fraction]:
    p = upoly_trim(p)
    return [c / p[-1] for c in p] if p else []


def upoly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    p = upoly_trim(p)
    seq = [p, upoly_derivative(p)]
    while seq[-1]:
        r = upoly_divmod(seq[-2], seq[-1])[1]
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _changes_at(seq, x: Fraction | None, at_plus_inf: bool = True) -> int:
    if x is None:
        # sign of the leading coefficient, adjusted for degree parity at -inf
        vals = []
        for s in seq:
            lead = s[-1]
            if not at_plus_inf and (len(s) - 1) % 2:
                lead = -lead
            vals.append(lead)
        return _sign_changes(vals)
    return _sign_changes(upoly_eval(s, x) for s in seq)


def sturm_count(p: Sequence[Fraction], lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; None means infinity."""
    seq = sturm_sequence(p)
    if not seq:
        raise ValueError("zero polynomial has infinitely many roots")
    v_lo = _changes_at(seq, lo, at_plus_inf=False)
    v_hi = _changes_at(seq, hi, at_plus_inf=True)
    return v_lo - v_hi


class IdenticallyZeroSystem(ValueError):
    """Every polynomial in the system is zero, so every point is a common root."""


@dataclass(frozen=True)
class RealRootSample:
    """A real root lies in ``(lo, hi]``; when ``lo == hi`` it is the exact rational root."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None


def _as_coeffs(p) -> list[Fraction]:
    if isinstance(p, Polynomial):
        if p.nvars != 1:
            raise ValueError("expected a univariate polynomial")
        return p.univariate(0, {})
    return upoly_trim(p)


def count_common_real_roots(polys: Sequence) -> RealRootSample | None:
    """Decide whether the univariate polynomials share a real root.

    Returns None if they do not, otherwise an isolating interval of one common
    root.  Raises :class:`IdenticallyZeroSystem` if all inputs vanish.
    """
    coeffs = [_as_coeffs(p) for p in polys]
    nonzero = [c for c in coeffs if c]
    if not nonzero:
        raise IdenticallyZeroSystem("all polynomials are zero")
    g = nonzero[0]
    for c in nonzero[1:]:
        g = upoly_gcd(g, c)
    g = upoly_monic(g)
    if len(g) <= 1:
        return None
    # square-free part keeps Sturm counting simple
    g = upoly_monic(upoly_divmod(g, upoly_gcd(g, upoly_derivative(g)))[0])
    if sturm_count(g) == 0:
        return None
    return _isolate_one(g)


def cauchy_bound(p: Sequence[Fraction]) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=ZERO)


def _isolate_one(g: list[Fraction]) -> RealRootSample:
    b = cauchy_bound(g)
    lo, hi = -b, b
    while True:
        if upoly_eval(g, hi) == 0:
            return RealRootSample(hi, hi)
        if sturm_count(g, lo, hi) == 1:
            return RealRootSample(lo, hi)
        mid = (lo + hi) / 2
        if sturm_count(g, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid


def rational_roots(p: Sequence[Fraction], limit: int = 10**6) -> list[Fraction]:
    """Rational roots via the rational root theorem (skipped when coefficients are huge)."""
    from math import lcm

    p = upoly_trim(p)
    if not p:
        return []
    roots = []
    while p and p[0] == 0:
        roots.append(ZERO)
        p = p[1:]
    if len(p) <= 1:
        return roots
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 > limit or an > limit:
        return roots
    for num in _divisors(a0):
        for d in _divisors(an):
            for s in (1, -1):
                x = Fraction(s * num, d)
                if x not in roots and upoly_eval(p, x) == 0:
                    roots.append(x)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def eval_matrix(entries: Matrix, f: Callable) -> list[list]:
    return [[f(x) for x in row] for row in entries]
