import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from loccov import linalg as la
from loccov.kg import KGTheory
from loccov.lattice import LatticeSpacetime, SpacetimeMorphism, diamond, slab
from loccov.rce import (Perturbation, admissible_pairs, intertwine_check, omega_preserved, rce,
                        rce_covariance_check, rce_generator, rce_independence_check, relabeling_perturbation, tau)
from loccov.theory import NaturalTransformation, identity_natural, pad
from loccov.lattice import WedgeError

import oracles

A = KGTheory()


def host(N=6, T=10, mu=1):
    return LatticeSpacetime.make(N, T, mu)


def backward(N, T, mu, top0, top1, xi=1):
    """Homogeneous solution with rows ``T-2, T-1`` given, evolved downwards."""
    u = [None] * T
    u[T - 2], u[T - 1] = list(map(Fraction, top0)), list(map(Fraction, top1))
    for t in range(T - 2, 0, -1):
        u[t - 1] = [-u[t + 1][x] + u[t][(x - 1) % N] + u[t][(x + 1) % N] - Fraction(xi) * mu(t, x) * u[t][x]
                    for x in range(N)]
    return u


def rce_oracle(N, T, mu, delta, data):
    """Background solution, re-identified by the perturbed field agreeing with it at late times."""
    u = oracles.evolve(N, T, mu, data[:N], data[N:])
    pert = lambda t, x: mu(t, x) + Fraction(delta.get((t, x), 0))
    v = backward(N, T, pert, u[T - 2], u[T - 1])
    return v[0] + v[1]


def as_fractions(vec):
    return [Fraction(int(v.numerator), int(v.denominator)) for v in vec]


def test_zero_perturbation_is_identity():
    M = host()
    assert rce(M, {}, A).is_identity()
    assert tau(M, {}, +1, A, row=8).matrix == la.freeze(la.identity(12))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rce_matches_perturbed_recursion(seed):
    rng = random.Random(seed)
    N, T = rng.randint(4, 7), 10
    M = host(N, T)
    sites = A.perturbation_sites(M)
    delta = {tuple(p): Fraction(rng.randint(-2, 3) or 1, rng.randint(1, 3)) for p in rng.sample(sites, 2)}
    if not A.admissible(M, list(delta)):
        return
    R = rce(M, delta, A).matrix
    for i in range(2 * N):
        data = [1 if j == i else 0 for j in range(2 * N)]
        col = as_fractions([R[j][i] for j in range(2 * N)])
        assert col == rce_oracle(N, T, lambda t, x: Fraction(1), delta, data)


def test_closed_form_single_site():
    M = host(7, 12)
    for p in A.perturbation_sites(M)[::5]:
        assert la.freeze(A.site_rce_closed_form(M, p)) == la.freeze(A.site_rce(M, p))
        assert la.freeze(A.site_rce_closed_form(M, p, 3)) == la.freeze(A.rce_matrix(M, {tuple(p): 3}))


def test_site_fixes_fields_vanishing_there():
    M = host(6, 10)
    p = (5, 2)
    R = rce(M, {p: mpq(5, 2)}, A)
    ev = A.evaluation(M, p)
    for v in la.nullspace([ev], 12):
        assert R.fixes(v)


def test_independence_of_row_pairs():
    M = host(6, 14)
    h = {(6, 1): 1, (7, 3): mpq(-1, 2)}
    ups, downs = admissible_pairs(M, h, A)
    pairs = [(u, d) for u in ups[:2] for d in downs[:2]]
    assert len(pairs) >= 2 and rce_independence_check(M, h, pairs, A)
    assert rce_independence_check(M, {}, [(10, 1), (11, 0)], A)
    with pytest.raises(ValueError):
        rce_independence_check(M, h, [(6, 0)], A)


def test_locality_on_kinematic_generators():
    M = host(8, 12)
    O = diamond(M, 6, [2, 3, 4])
    perp = M.perp(O.mask)
    gens = [A.generator_coords(M, q) for q in M.points(O.mask) if (A.interior(M) >> M.index(q)) & 1]
    for p in A.perturbation_sites(M):
        if (perp >> M.index(p)) & 1:
            R = A.site_rce(M, p)
            assert all(la.matvec(R, g) == g for g in gens)


def test_covariance_under_probes():
    M = host(6, 12)
    S = slab(M, 1, 11)
    hM = {(6, 2): 1}
    assert rce_covariance_check(SpacetimeMorphism.identity(M), hM, A)
    assert rce_covariance_check(SpacetimeMorphism.uniform(M, M, 0, 3), {(5, 1): 2, (6, 4): -1}, A)
    assert rce_covariance_check(SpacetimeMorphism.uniform(S, M), {(6, 2): 1}, A)
    L = host(6, 14)
    assert rce_covariance_check(SpacetimeMorphism.uniform(M, L, 1, 0), hM, A)


def test_symplectic():
    M = host(6, 10)
    rng = random.Random(4)
    sites = A.perturbation_sites(M)
    for _ in range(10):
        d = {tuple(p): mpq(rng.randint(1, 4), rng.randint(1, 3)) for p in rng.sample(sites, 2)}
        if A.admissible(M, list(d)):
            assert omega_preserved(A.rce_matrix(M, d), 6)


def test_generator_is_affine_difference():
    M = host(6, 10)
    p = (5, 3)
    G = rce_generator(M, p, A)
    R = A.rce_matrix(M, {p: mpq(7, 3)})
    want = [[(1 if i == j else 0) + mpq(7, 3) * G[i][j] for j in range(12)] for i in range(12)]
    assert la.freeze(R) == la.freeze(want)


def test_generator_nonzero_at_interior_site():
    M = host(6, 10)
    assert not la.is_zero(rce_generator(M, (5, 3), A))


def test_relabeling_is_trivial():
    M = host(6, 10)
    psi = SpacetimeMorphism.uniform(M, M, 0, 1)
    h = relabeling_perturbation(M, psi, A.perturbation_sites(M))
    assert h == {} and rce(M, h, A).is_identity()
    with pytest.raises(ValueError):
        relabeling_perturbation(M, SpacetimeMorphism.uniform(slab(M, 1, 9), M), [])


def test_perturbation_validation():
    M = host(6, 10)
    with pytest.raises(WedgeError):
        Perturbation.site(M, (1, 2))
    h = Perturbation.site(M, (5, 2), mpq(1, 2))
    assert h.to_json() == [[5, 2, "1/2"]]
    assert h.pushforward(SpacetimeMorphism.uniform(M, M, 0, 1)).support == [(5, 3)]


def test_intertwining():
    M = host(6, 10)
    h = {(5, 2): 1}
    assert intertwine_check(identity_natural(A), M, h)
    assert intertwine_check(pad(A, 1, 2), M, h)


def test_coupling_variants_do_not_intertwine():
    M = host(6, 10, 0)
    B = KGTheory(xi=2)
    assert A.obj(M) == B.obj(M)
    z = NaturalTransformation(A, B, lambda X: identity_natural(A)(X), "obvious")
    assert not intertwine_check(z, M, {(5, 2): 1})
