import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loccov import linalg as la
from loccov.subobject_laws import LAWS, rand_matrix, rand_subspace, run_law
from loccov.subobjects import (DataSpace, LinearMorphism, MorphismError, Subspace, equalizer, factor_through,
                               intersect, is_trivial, subobject_iso, subobject_leq, union)


def e(n, *idx):
    return [[1 if j == i else 0 for j in range(n)] for i in idx]


def sym_rows(s):
    return sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in r] for r in s.basis]) \
        if s.dim else sympy.zeros(0, s.ambient.dim)


def sym_intersection_dim(a, b):
    # dim(A + B) = dim A + dim B - dim(A n B)
    n = a.ambient.dim
    stacked = sym_rows(a).col_join(sym_rows(b)) if a.dim + b.dim else sympy.zeros(0, n)
    return a.dim + b.dim - (stacked.rank() if a.dim + b.dim else 0)


def test_equalizer_examples():
    V = DataSpace.plain(2)
    I = LinearMorphism.identity(V)
    neg = LinearMorphism(V, V, la.freeze(la.scale(la.identity(2), -1)), check=False)
    assert equalizer(I, I) == V.full()
    assert is_trivial(equalizer(I, neg))


def test_equalizer_random_matches_sympy():
    rng = random.Random(3)
    V = DataSpace.plain(4)
    for _ in range(30):
        f = LinearMorphism(V, V, la.freeze(rand_matrix(rng, 4, 4)), check=False)
        g = LinearMorphism(V, V, la.freeze(rand_matrix(rng, 4, 4)), check=False)
        eq = equalizer(f, g)
        diff = sympy.Matrix(la.sub(f.matrix, g.matrix)).applyfunc(lambda v: sympy.Rational(str(v)))
        assert eq.dim == 4 - diff.rank()
        for v in eq.basis:
            assert f.apply(v) == g.apply(v)


def test_intersection_and_union_examples():
    V = DataSpace.plain(4)
    a, b = Subspace.span(V, e(4, 0, 1)), Subspace.span(V, e(4, 1, 2))
    assert intersect([a, b]) == Subspace.span(V, e(4, 1))
    assert intersect([a, V.full()]) == a
    assert intersect([], V) == V.full()
    assert union([Subspace.span(V, e(4, 0)), Subspace.span(V, e(4, 1))]) == a
    assert union([a, a]) == a
    assert union([], V) == V.null()
    with pytest.raises(ValueError):
        intersect([])


def test_order_examples():
    V = DataSpace.plain(3)
    a = Subspace.span(V, e(3, 0))
    assert subobject_leq(V.null(), a)
    assert subobject_leq(a, a) and subobject_iso(a, Subspace.span(V, [[2, 0, 0]]))
    assert is_trivial(V.null()) and not is_trivial(a)
    with pytest.raises(ValueError):
        subobject_leq(a, DataSpace.plain(2).full())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 7))
def test_meet_join_match_sympy(seed, n):
    rng = random.Random(seed)
    V = DataSpace.plain(n)
    a, b = rand_subspace(rng, V), rand_subspace(rng, V)
    m, j = intersect([a, b]), union([a, b])
    assert m.dim == sym_intersection_dim(a, b)
    assert j.dim == a.dim + b.dim - m.dim
    assert subobject_leq(m, a) and subobject_leq(m, b)
    assert subobject_leq(a, j) and subobject_leq(b, j)
    for v in m.basis:
        assert a.contains(v) and b.contains(v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_lattice_laws(seed, n):
    rng = random.Random(seed)
    V = DataSpace.plain(n)
    a, b, c = (rand_subspace(rng, V) for _ in range(3))
    assert intersect([a, intersect([b, c])]) == intersect([intersect([a, b]), c])
    assert union([a, union([b, c])]) == union([union([a, b]), c])
    assert intersect([a, union([a, b])]) == a
    assert union([a, intersect([a, b])]) == a
    assert subobject_leq(a, b) == (intersect([a, b]) == a)


def test_kernel_of_full_rank_map_is_trivial():
    rng = random.Random(0)
    V = DataSpace.plain(5)
    while True:
        m = rand_matrix(rng, 5, 5)
        if la.rank(m, 5) == 5:
            break
    f = LinearMorphism(V, V, la.freeze(m), check=False)
    z = LinearMorphism(V, V, la.freeze(la.zeros(5, 5)), check=False)
    assert is_trivial(equalizer(f, z))


def test_morphism_checks():
    W = DataSpace(2, ((0, 1), (-1, 0)))
    with pytest.raises(ValueError):
        DataSpace(2, ((0, 1), (1, 0)))
    with pytest.raises(MorphismError):
        LinearMorphism(W, W, ((2, 0), (0, 1)))
    with pytest.raises(MorphismError):
        LinearMorphism(DataSpace.plain(2), DataSpace.plain(2), ((1, 1), (1, 1)))
    with pytest.raises(MorphismError):
        LinearMorphism(W, W, ((1, 0),))
    swap = LinearMorphism(W.direct_sum(W), W.direct_sum(W),
                          la.freeze([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]))
    assert swap.is_iso()


def test_factor_through():
    V, U = DataSpace.plain(3), DataSpace.plain(2)
    n = LinearMorphism(U, V, la.freeze([[1, 0], [0, 1], [1, 1]]))
    f = LinearMorphism(DataSpace.plain(1), V, la.freeze([[2], [3], [5]]))
    g = factor_through(f, n)
    assert (n @ g).matrix == f.matrix
    bad = LinearMorphism(DataSpace.plain(1), V, la.freeze([[1], [0], [0]]))
    assert factor_through(bad, n) is None


def test_inclusion_restricts_form():
    W = DataSpace(4, la.freeze([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]))
    s = Subspace.span(W, e(4, 0, 1))
    m = s.inclusion()
    assert m.source.form == la.freeze([[0, 1], [-1, 0]])
    assert m.image() == s


@pytest.mark.parametrize("law", LAWS)
def test_randomized_laws_small(law):
    res = run_law(law, instances=60, max_dim=8, seed=11)
    assert res.ok, res.witness
