from fractions import Fraction as F

import pytest

from hypergen.algebra import (
    AlgebraError,
    GradedLieAlgebra,
    NotAnIdealError,
    NotStratifiedError,
    abelian,
    center,
    derived_subalgebra,
    direct_product,
    ideal_generated,
    invariant_fingerprint,
    is_carnot_subalgebra,
    is_homogeneous_ideal,
    is_stratified,
    lie_generated,
    lower_central_series,
    product_embedding,
    quotient,
    quotient_with_map,
    step2_quotient,
    validate,
)
from hypergen.catalog import catalog_get, heisenberg
from hypergen.linalg import Subspace


def h2():
    return catalog_get("heisenberg(2)").algebra


def test_heisenberg_layers():
    g = heisenberg(3)
    assert g.dim == 7 and g.rank == 6 and g.step == 2
    assert g.layer_dims == (6, 1)
    assert validate(g).ok


def test_json_roundtrip():
    g = catalog_get("A137_1").algebra
    assert GradedLieAlgebra.loads(g.dumps()) == g
    assert GradedLieAlgebra.loads(g.dumps()).dumps() == g.dumps()


def test_json_rejects_bad_indices():
    with pytest.raises(AlgebraError):
        GradedLieAlgebra.from_json({"name": "x", "dim": 2, "weights": [1, 1], "brackets": [{"i": 2, "j": 1, "terms": []}]})
    with pytest.raises(AlgebraError):
        GradedLieAlgebra.from_json({"name": "x", "dim": 3, "weights": [1, 1]})


def test_jacobi_failure_is_reported():
    # [X1,X2]=Y, [X1,Y]=Z, [X2,Y]=Z would be fine; break it with [X2,X3]=Z on a non-graded table
    bad = GradedLieAlgebra.from_table(
        "bad", [1, 1, 1, 2, 2], [(0, 1, 3, 1), (1, 2, 4, 1), (0, 2, 3, 1), (0, 3, 4, 1)]
    )
    rep = validate(bad)
    assert not rep.ok


def test_non_stratified_detected():
    # V2 not generated by V1: weight-2 element with no bracket landing on it
    g = GradedLieAlgebra.from_table("ns", [1, 1, 2, 2], [(0, 1, 2, 1)])
    assert not is_stratified(g)
    assert not validate(g).ok
    with pytest.raises(NotStratifiedError):
        step2_quotient(g)


def test_zero_dim_not_stratified():
    assert not is_stratified(abelian(0))


def test_lower_central_series_is_layer_suffix():
    g = catalog_get("A137_1").algebra
    series = lower_central_series(g)
    assert [s.dim for s in series] == [7, 3, 1, 0]
    for h, s in enumerate(series, start=1):
        assert s == Subspace.coordinate([i for i in range(g.dim) if g.weights[i] >= h], g.dim)


def test_derived_and_center():
    g = h2()
    assert derived_subalgebra(g) == g.layer(2)
    assert center(g) == g.layer(2)
    n6 = catalog_get("N6_4_4a").algebra
    assert center(n6).dim == 2


def test_lie_generated_by_lagrangian_misses_center():
    g = h2()
    p = Subspace.coordinate([0, 2], g.dim)  # span{X1, X3}: isotropic
    assert lie_generated(g, p) == p
    assert not is_carnot_subalgebra(g, p)
    p2 = Subspace.coordinate([0, 1, 2], g.dim)
    assert lie_generated(g, p2).dim == 4
    assert is_carnot_subalgebra(g, p2)


def test_ideal_generated_and_quotient():
    g = catalog_get("D37_1").algebra
    w = Subspace.coordinate([6], g.dim)
    assert ideal_generated(g, w) == w
    assert is_homogeneous_ideal(g, w)
    q = quotient(g, w)
    assert q.layer_dims == (4, 2)
    assert invariant_fingerprint(q) == invariant_fingerprint(catalog_get("N6_4_4a").algebra)


def test_quotient_rejects_non_ideal():
    g = h2()
    with pytest.raises(NotAnIdealError):
        quotient(g, Subspace.coordinate([0], g.dim))
    # homogeneous ideal fails: mixed-weight vector
    with pytest.raises(NotAnIdealError):
        quotient(g, Subspace.span([[1, 0, 0, 0, 1]], g.dim))


def test_quotient_map_projects_brackets():
    g = catalog_get("A137_1").algebra
    q, pi = quotient_with_map(g, g.layer(3))
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = pi(g.bracket(g.basis_vector(i), g.basis_vector(j)))
            rhs = q.bracket(pi(g.basis_vector(i)), pi(g.basis_vector(j)))
            assert lhs == rhs


def test_step2_quotient():
    g = catalog_get("A137_1").algebra
    q = step2_quotient(g)
    assert q.layer_dims == (4, 2)
    assert q == catalog_get("N6_4_4a").algebra


def test_direct_product():
    a = heisenberg(1)
    p = direct_product(a, a)
    assert p.layer_dims == (4, 2)
    assert validate(p).ok
    ia, ib = product_embedding(a, a)
    assert sorted(ia + ib) == list(range(6))
    assert direct_product(a, abelian(0)) is a


def test_fingerprint_separates_h2_from_h1_times_r2():
    # same dimension 5, rank 4 but different order and center
    h1r2 = direct_product(heisenberg(1), abelian(2))
    fa, fb = invariant_fingerprint(h2()), invariant_fingerprint(h1r2)
    assert fa != fb
    assert fb.layer_dims == (4, 1)
    assert fb.metivier_order == 2


def test_bracket_antisymmetry():
    g = catalog_get("B27").algebra
    for i in range(g.dim):
        for j in range(g.dim):
            x, y = g.basis_vector(i), g.basis_vector(j)
            assert g.bracket(x, y) == tuple(-c for c in g.bracket(y, x))
