import itertools
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from loccov import linalg as la
from loccov.kg import (KGTheory, SolutionSpace, SupportError, TestFunction, advanced, apply_wave_operator,
                       causal_propagator, omega, omega_matrix, pairing, retarded)
from loccov.lattice import LatticeSpacetime, SpacetimeMorphism, diamond, slab
from loccov.subobjects import subobject_leq

import oracles


def grid(u):
    return [[Fraction(int(v.numerator), int(v.denominator)) for v in r] for r in u.grid]


def test_wave_operator_stencil():
    M0 = LatticeSpacetime.make(6, 8, 0)
    one = {p: 1 for p in M0.points()}
    assert not any(apply_wave_operator(M0, one).values())
    M2 = LatticeSpacetime.make(6, 8, mpq(9, 4))
    assert set(apply_wave_operator(M2, one).values()) == {mpq(9, 4)}
    delta = {p: (1 if tuple(p) == (3, 0) else 0) for p in M0.points()}
    out = {tuple(p): v for p, v in apply_wave_operator(M0, delta).items() if v}
    assert out == {(2, 0): 1, (4, 0): 1, (3, 1): -1, (3, 5): -1}


def test_retarded_fan_massless():
    M = LatticeSpacetime.make(7, 8, 0)
    u = retarded(M, {(2, 3): 1})
    assert u[(3, 3)] == 1 and u[(4, 2)] == 1 and u[(4, 4)] == 1 and u[(4, 3)] == 0
    assert not any(u[(t, x)] for t in range(3) for x in range(7))


def test_retarded_massive_term():
    M = LatticeSpacetime.make(7, 8, 1)
    assert retarded(M, {(2, 3): 1})[(4, 3)] == -1


def test_zero_source():
    M = LatticeSpacetime.make(6, 8, 1)
    assert not any(v for r in retarded(M, {}).grid for v in r)
    assert not any(v for r in causal_propagator(M, {}).grid for v in r)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_retarded_matches_fraction_leapfrog(seed):
    rng = random.Random(seed)
    N, T = rng.randint(4, 8), rng.randint(5, 9)
    mu = {(t, x): Fraction(rng.randint(0, 4), rng.randint(1, 3)) for t in range(T) for x in range(N)}
    M = LatticeSpacetime.make(N, T, mu)
    src = {(rng.randint(1, T - 2), rng.randrange(N)): Fraction(rng.randint(-3, 3), rng.randint(1, 2))
           for _ in range(rng.randint(1, 3))}
    want = oracles.leapfrog_retarded(N, T, lambda t, x: mu[(t, x)], src)
    assert grid(retarded(M, src)) == want
    u = retarded(M, src)
    P = apply_wave_operator(M, u)
    assert all(P[p] == src.get(tuple(p), 0) for p in P)


def test_advanced_vanishes_above_source():
    M = LatticeSpacetime.make(6, 10, 1)
    a = advanced(M, {(5, 2): 1})
    assert not any(a[(t, x)] for t in range(6, 10) for x in range(6))
    P = apply_wave_operator(M, a)
    assert all(v == (1 if tuple(p) == (5, 2) else 0) for p, v in P.items())
    assert a[(4, 2)] == 1


def test_propagator_kills_wave_operator_images():
    M = LatticeSpacetime.make(7, 12, 1)
    g = {(t, x): 0 for t in range(12) for x in range(7)}
    g[(5, 3)], g[(6, 2)] = 1, mpq(-1, 2)
    f = {tuple(p): v for p, v in apply_wave_operator(M, g).items() if v}
    E = causal_propagator(M, f)
    assert not any(v for r in E.grid for v in r)


def test_propagator_is_homogeneous_solution():
    M = LatticeSpacetime.make(6, 10, 1)
    S = SolutionSpace(M)
    assert S.is_solution(causal_propagator(M, {(4, 1): 1, (5, 3): 2}))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pairing_antisymmetric(seed):
    rng = random.Random(seed)
    M = LatticeSpacetime.make(6, 10, 1)
    f = {(rng.randint(1, 8), rng.randrange(6)): rng.randint(-2, 2) for _ in range(3)}
    g = {(rng.randint(1, 8), rng.randrange(6)): rng.randint(-2, 2) for _ in range(3)}
    assert pairing(M, f, g) == -pairing(M, g, f)
    assert pairing(M, f, f) == 0


def test_pairing_vanishes_on_causally_disjoint_supports():
    M = LatticeSpacetime.make(8, 12, 1)
    pts = [p for p in M.points() if 1 <= p.t <= 10]
    for p, q in itertools.combinations(pts, 2):
        if M.leq(p, q) or M.leq(q, p):
            continue
        assert pairing(M, {tuple(p): 1}, {tuple(q): 1}) == 0


def test_omega_conserved():
    M = LatticeSpacetime.make(6, 10, {(4, 2): 3, (6, 1): mpq(1, 2)})
    S = SolutionSpace(M)
    rng = random.Random(0)
    for _ in range(5):
        u = S.field([mpq(rng.randint(-3, 3)) for _ in range(12)])
        v = S.field([mpq(rng.randint(-3, 3)) for _ in range(12)])
        vals = {S.omega_at(u, v, t) for t in range(9)}
        assert len(vals) == 1
        assert vals.pop() == omega(6, list(u.grid[0]) + list(u.grid[1]), list(v.grid[0]) + list(v.grid[1]))


def test_support_errors():
    M = LatticeSpacetime.make(6, 10, 1)
    with pytest.raises(SupportError):
        retarded(M, {(0, 1): 1})
    with pytest.raises(SupportError):
        TestFunction.of(M, {(9, 1): 1})
    D = M.restrict(diamond(M, 5, [1, 2, 3]))
    with pytest.raises(SupportError):
        TestFunction.of(D, {(5, 5): 1})
    assert TestFunction.of(M, {(3, 1): 0}).support == []


# the theory functor -------------------------------------------------------------------

def test_object_of_full_lattice_is_all_data():
    A = KGTheory()
    M = LatticeSpacetime.make(6, 10, 1)
    assert A.obj(M).dim == 12
    assert A.obj(M).form == la.freeze(omega_matrix(6))


def test_kinematic_examples():
    A = KGTheory()
    M = LatticeSpacetime.make(6, 10, 1)
    assert A.kinematic(M, M.rows_mask([4, 5])).dim == 12
    k = A.kinematic(M, [(5, 2)])
    assert k.dim == 1 and k.contains(A.generator_coords(M, (5, 2)))
    with pytest.raises(ValueError):
        A.kinematic(M, [])
    a = A.kinematic(M, diamond(M, 5, [1, 2, 3]))
    b = A.kinematic(M, diamond(M, 5, [0, 1, 2, 3, 4]))
    assert subobject_leq(a, b) and a == A.kinematic_direct(M, diamond(M, 5, [1, 2, 3]))


def test_rotation_acts_by_permutation():
    A = KGTheory()
    M = LatticeSpacetime.make(6, 10, 1)
    R = A.mor(SpacetimeMorphism.uniform(M, M, 0, 2)).matrix
    for i in range(12):
        blk, x = divmod(i, 6)
        col = [R[j][i] for j in range(12)]
        assert col == [1 if j == blk * 6 + (x + 2) % 6 else 0 for j in range(12)]


def test_identity_and_cauchy_inclusions():
    A = KGTheory()
    M = LatticeSpacetime.make(6, 10, 1)
    assert A.check_identity(M)
    S = slab(M, 2, 8)
    assert A.mor(SpacetimeMorphism.uniform(S, M)).is_iso()
    D = M.restrict(diamond(M, 5, [1, 2, 3]))
    assert not A.mor(SpacetimeMorphism.uniform(D, M)).is_iso()


def test_coupling_parameter_changes_generator():
    M = LatticeSpacetime.make(6, 10, 1)
    a, b = KGTheory(xi=1), KGTheory(xi=2)
    assert a.generator_coords(M, (5, 2)) != b.generator_coords(M, (5, 2))
