import random

import pytest

from loccov.kg import KGTheory
from loccov.lattice import Interval, LatticeSpacetime, diamond, enumerate_Kb, multi_diamond
from loccov.nets import (Caps, additivity_check, base_interior, bullet_subspace, check_dynamical_locality,
                         check_extended_locality, dynamical_subspace, outer_regular_check, refined_union,
                         vanishing_oracle)
from loccov.subobjects import subobject_iso, subobject_leq
from loccov.theory import TrivialTheory

A = KGTheory()
M7 = LatticeSpacetime.make(7, 12, 1)


@pytest.mark.parametrize("w,kin,dyn", [(1, 1, 0), (2, 2, 0), (3, 4, 4), (4, 6, 6), (5, 8, 8)])
@pytest.mark.parametrize("row", [4, 5, 6])
def test_frozen_locality_dims(row, w, kin, dyn):
    v = check_dynamical_locality(A, M7, diamond(M7, row, Interval(row, 1, w)))
    assert (v.kinematic.dim, v.dynamical.dim, v.holds) == (kin, dyn, kin == dyn)
    assert v.holds or v.witness is not None


def test_bullet_agrees_with_vanishing_oracle():
    rng = random.Random(0)
    Ks = enumerate_Kb(M7, M7.carrier, max_width=3)
    for K in rng.sample(Ks, 40) + [M7.region([])]:
        assert subobject_iso(bullet_subspace(A, M7, K).value, vanishing_oracle(A, M7, K))


def test_bullet_of_cauchy_pair_is_everything():
    K = M7.rows_mask([5, 6])
    assert bullet_subspace(A, M7, K).dim == 14
    assert dynamical_subspace(A, M7, M7.rows_mask([4, 5, 6, 7])).dim == 14


def test_empty_region():
    assert bullet_subspace(A, M7, []).dim == 0
    assert dynamical_subspace(A, M7, []).dim == 0
    massless = LatticeSpacetime.make(7, 12, 0)
    assert dynamical_subspace(A, massless, []).value == vanishing_oracle(A, massless, [])
    with pytest.raises(ValueError):
        check_dynamical_locality(A, M7, [])


def test_trivial_theory_is_local():
    Z = TrivialTheory()
    assert check_dynamical_locality(Z, M7, diamond(M7, 6, [1, 2, 3])).holds


def test_bullet_depends_only_on_perpperp():
    K = M7.mask([(6, 2), (6, 4)])
    kk = M7.perp(M7.perp(K))
    assert bullet_subspace(A, M7, K).value == bullet_subspace(A, M7, kk).value


def test_dynamical_isotony():
    small = diamond(M7, 6, [1, 2, 3])
    big = diamond(M7, 6, [0, 1, 2, 3, 4])
    assert subobject_leq(dynamical_subspace(A, M7, small).value, dynamical_subspace(A, M7, big).value)


def test_refined_union_matches_dynamical():
    base = Interval(6, 0, 5).mask(M7)
    assert base_interior(M7, base) == Interval(6, 1, 3).mask(M7)
    O = diamond(M7, 6, Interval(6, 0, 5))
    assert subobject_iso(refined_union(A, M7, base), dynamical_subspace(A, M7, O).value)


def test_outer_regular_with_widened_diamonds():
    K = Interval(6, 2, 3).mask(M7)
    seq = [diamond(M7, 6, Interval(6, 0, 6)), diamond(M7, 6, Interval(6, 1, 5))]
    assert outer_regular_check(A, M7, K, seq)
    with pytest.raises(ValueError):
        outer_regular_check(A, M7, K, list(reversed(seq)))
    with pytest.raises(ValueError):
        outer_regular_check(A, M7, K, [diamond(M7, 6, Interval(6, 4, 2))])


def test_extended_locality():
    M = LatticeSpacetime.make(9, 12, 1)
    a, b = diamond(M, 6, [0, 1, 2]), diamond(M, 6, [4, 5, 6])
    r = check_extended_locality(A, M, a, b)
    assert r.meet_trivial and r.empty_bullet_trivial
    with pytest.raises(ValueError):
        check_extended_locality(A, M, a, a)


def test_additivity():
    M = LatticeSpacetime.make(6, 12, 1)
    caps = Caps(max_width=2, max_components=1)
    assert additivity_check(A, M, [M.carrier], caps)
    lo, hi = M.rows_mask(range(0, 8)), M.rows_mask(range(4, 12))
    assert additivity_check(A, M, [lo, hi], caps)
    with pytest.raises(ValueError):
        additivity_check(A, M, [M.rows_mask(range(0, 3))], caps)


def test_multi_diamond_locality_fails_with_small_component():
    M = LatticeSpacetime.make(9, 12, 1)
    O = multi_diamond(M, [Interval(6, 0, 1), Interval(6, 3, 3)])
    v = check_dynamical_locality(A, M, O)
    assert (v.kinematic.dim, v.dynamical.dim) == (5, 4) and not v.holds


def test_caps_serialise():
    assert Caps().to_json()["slack"] == 1
