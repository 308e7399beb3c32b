from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from hypergen.kaplan import (
    SkewPencil,
    embed_general_matrix_space,
    form_at,
    gs_from_skew,
    isotropic_subspace,
    kaplan_pencil,
    rank_of_form,
)
from hypergen.linalg import Polynomial, Subspace, det, pfaffian, rank

small = st.integers(-3, 3).map(F)


@st.composite
def skew(draw, n=None):
    n = draw(st.integers(0, 7)) if n is None else n
    a = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = draw(small)
            a[j][i] = -a[i][j]
    return a


@st.composite
def even_skew(draw):
    return draw(skew(2 * draw(st.integers(0, 3))))


@settings(max_examples=60, deadline=None)
@given(skew())
def test_skew_rank_is_even(a):
    assert rank(a) % 2 == 0


@settings(max_examples=60, deadline=None)
@given(even_skew())
def test_pfaffian_squared_is_det(a):
    assert pfaffian(a) ** 2 == det(a)


@settings(max_examples=40, deadline=None)
@given(skew(), st.integers(0, 4))
def test_isotropic_subspace(a, extra):
    m = len(a)
    r = rank(a)
    k = min(m, r // 2 + extra)
    p = isotropic_subspace(a, k)
    assert p.dim == m - k
    for x in p.basis:
        for y in p.basis:
            assert sum(x[i] * a[i][j] * y[j] for i in range(m) for j in range(m)) == 0


@st.composite
def square(draw):
    n = draw(st.integers(1, 4))
    return [[draw(small) for _ in range(n)] for _ in range(n)]


@settings(max_examples=40, deadline=None)
@given(square())
def test_rank_doubling(a):
    p = embed_general_matrix_space([a])
    assert rank_of_form(p.forms[0]) == 2 * rank(a)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), max_size=4), st.lists(st.lists(small, min_size=4, max_size=4), max_size=4))
def test_dimension_formula(u, v):
    a, b = Subspace.span(u, 4), Subspace.span(v, 4)
    assert (a + b).dim + (a & b).dim == a.dim + b.dim
    assert a.includes(a & b) and (a + b).includes(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5).flatmap(lambda m: st.lists(skew(m), min_size=1, max_size=3)))
def test_gs_roundtrip(forms):
    p = SkewPencil(len(forms[0]), tuple(tuple(tuple(r) for r in f) for f in forms))
    if not p.is_independent():
        return
    g = gs_from_skew(forms)
    assert g.layer_dims == (p.v1_dim, p.d) or p.v1_dim == 0
    assert kaplan_pencil(g) == p


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2))
def test_polynomial_ring_laws(a, b, pt):
    x = Polynomial.linear(a)
    y = Polynomial.linear(b)
    assert (x + y) * (x - y) == x * x - y * y
    assert (x * y)(pt) == x(pt) * y(pt)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.lists(skew(2 * m), min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2))))
def test_form_at_is_linear(data):
    forms, mu = data
    p = SkewPencil(len(forms[0]), tuple(tuple(tuple(r) for r in f) for f in forms))
    got = form_at(p, mu)
    n = p.v1_dim
    assert got == [[mu[0] * forms[0][i][j] + mu[1] * forms[1][i][j] for j in range(n)] for i in range(n)]
