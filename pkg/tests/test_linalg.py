import random
from fractions import Fraction as F

import pytest

from hypergen.linalg import (
    Definiteness,
    IdenticallyZeroSystem,
    Polynomial,
    Subspace,
    annihilator,
    count_common_real_roots,
    det,
    nullspace,
    pfaffian,
    quadratic_definiteness,
    quadratic_signature,
    rank,
    rational_roots,
    rref,
    sturm_count,
    to_fraction,
)


def random_skew(n, rng, spread=3):
    a = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = F(rng.randint(-spread, spread))
            a[j][i] = -a[i][j]
    return a


def test_to_fraction_rejects_floats():
    assert to_fraction("3/4") == F(3, 4)
    assert to_fraction(2) == F(2)
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_rref_and_rank():
    m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    r, rk, piv = rref(m)
    assert rk == 2
    assert piv == [0, 1]
    assert rank([[0, 0], [0, 0]]) == 0


def test_nullspace_vectors_are_killed():
    m = [[1, 2, 3, 4], [0, 1, 1, 1]]
    ns = nullspace(m, 4)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(F(a) * b for a, b in zip(row, v)) == 0 for row in m)


def test_subspace_canonical_form():
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    b = Subspace.span([[1, 2, 1], [1, 0, -1]], 3)
    assert a == b
    assert a.dim == 2
    assert [1, 3, 2] in a
    assert [1, 0, 0] not in a


def test_sum_and_intersection_dimensions():
    a = Subspace.coordinate([0, 1], 4)
    b = Subspace.span([[0, 1, 1, 0], [0, 0, 0, 1]], 4)
    assert (a + b).dim == 4
    assert (a & b).dim == 0
    c = Subspace.span([[1, 1, 0, 0]], 4)
    assert (a & c) == c


def test_annihilator_involution(rng):
    for _ in range(10):
        n = rng.randint(1, 6)
        vecs = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(rng.randint(0, n))]
        w = Subspace.span(vecs, n)
        ann = annihilator(w)
        assert ann.dim == n - w.dim
        assert annihilator(ann) == w


def test_pfaffian_small_cases():
    assert pfaffian([]) == 1
    assert pfaffian([[0, 1], [-1, 0]]) == 1
    a = [[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]]
    assert pfaffian(a) == 1 * 6 - 2 * 5 + 3 * 4


def test_pfaffian_squared_is_det(rng):
    for n in (2, 4, 6):
        a = random_skew(n, rng)
        assert pfaffian(a) ** 2 == det(a)


def test_pfaffian_rejects_odd_and_non_skew():
    with pytest.raises(ValueError):
        pfaffian([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        pfaffian([[0, 1], [1, 0]])


def test_pfaffian_of_polynomial_matrix():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    z = Polynomial(2)
    a = [[z, x, y, z], [-x, z, z, y], [-y, z, z, -x], [z, -y, x, z]]
    pf = pfaffian(a, check=False)
    # Pf = a01 a23 - a02 a13 + a03 a12 = x*(-x) - y*y + 0
    assert pf == -(x * x) - y * y


def test_quadratic_definiteness():
    assert quadratic_definiteness([[1, 0], [0, 2]]) is Definiteness.POS_DEF
    assert quadratic_definiteness([[-1, 0], [0, -1]]) is Definiteness.NEG_DEF
    assert quadratic_definiteness([[0, 1], [1, 0]]) is Definiteness.INDEFINITE
    assert quadratic_definiteness([[1, 1], [1, 1]]) is Definiteness.POS_SEMI
    assert quadratic_definiteness([[0, 0], [0, 0]]) is Definiteness.ZERO
    assert quadratic_signature([[0, 1, 0], [1, 0, 0], [0, 0, 3]]) == (2, 1, 0)


def test_polynomial_arithmetic_and_json():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p([F(3), F(2)]) == 5
    assert p.total_degree() == 2 and p.is_homogeneous()
    assert Polynomial.from_json(2, p.to_json()) == p
    assert p.quadratic_matrix() == [[1, 0], [0, -1]]


def test_sturm_counts():
    p = [F(-2), F(0), F(1)]  # t^2 - 2
    assert sturm_count(p) == 2
    assert sturm_count(p, F(0), F(2)) == 1
    assert sturm_count([F(1), F(0), F(1)]) == 0


def test_common_real_roots():
    # (t - 1)(t + 3) and (t - 1)(t^2 + 1) share t = 1
    a = [F(-3), F(2), F(1)]
    b = [F(-1), F(1), F(-1), F(1)]
    s = count_common_real_roots([a, b])
    assert s is not None and s.lo < 1 <= s.hi
    assert count_common_real_roots([[F(1), F(0), F(1)]]) is None
    with pytest.raises(IdenticallyZeroSystem):
        count_common_real_roots([[], [F(0)]])


def test_irrational_common_root_is_isolated():
    s = count_common_real_roots([[F(-2), F(0), F(1)]])
    assert s is not None and s.exact is None
    assert s.lo ** 2 < 2 <= s.hi ** 2 or s.lo ** 2 > 2 >= s.hi ** 2


def test_rational_roots():
    assert rational_roots([F(-1, 2), F(1)]) == [F(1, 2)]
    assert rational_roots([F(0), F(-4), F(0), F(1)]) == [F(-2), F(0), F(2)]
