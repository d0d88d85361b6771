import pytest

from loccov.kg import KGTheory
from loccov.lattice import Interval, LatticeSpacetime, SpacetimeMorphism, diamond, slab
from loccov.nets import Caps
from loccov.spass import (candidate_naturals, diagonal_dynamics_checks, expected_iso_pattern,
                          functor_failures, shift_demo, spass_counterexample, spass_meta_check,
                          timeslice_failures)
from loccov.theory import (DiagonalTheory, PowerTheory, TrivialTheory, classify, identity_natural,
                           label_constant, label_threshold, label_wrap, pad,
                           standard_probe_family)

A = KGTheory()


@pytest.fixture(scope="module")
def probes():
    return standard_probe_family(6, 12, 1)


@pytest.fixture(scope="module")
def hot_probes():
    return standard_probe_family(6, 12, 1, other_mu=2)


def test_power_one_is_base():
    M = LatticeSpacetime.make(6, 10, 1)
    P = PowerTheory(A, 1)
    assert P.obj(M) == A.obj(M)
    psi = SpacetimeMorphism.uniform(M, M, 0, 1)
    assert P.mor(psi).matrix == A.mor(psi).matrix
    with pytest.raises(ValueError):
        PowerTheory(A, 0)


def test_threshold_labels():
    lab = label_threshold(1)
    assert lab(LatticeSpacetime.make(6, 10, 0)) == 1
    hot = LatticeSpacetime.make(6, 10, {(5, 2): 2})
    assert lab(hot) == 2
    cold_part = hot.restrict(diamond(hot, 5, [4, 5, 0]))
    assert lab(cold_part) == 1
    assert lab(slab(hot, 3, 7)) == 2


def test_wrap_labels():
    lab = label_wrap(3)
    M = LatticeSpacetime.make(6, 10, 1)
    D = M.restrict(diamond(M, 5, [1, 2, 3]))
    assert lab(M) == 3 and lab(D) == 1
    assert not lab.check_monotone([SpacetimeMorphism.uniform(D, M)])
    assert label_wrap({6: 2, "default": 1})(M) == 2


def test_constant_label_diagonal_is_base(probes):
    D = DiagonalTheory(A, label_constant(1))
    for M in probes.objects:
        assert D.obj(M) == A.obj(M)
    for psi in probes.morphisms:
        assert D.mor(psi).matrix == A.mor(psi).matrix


def test_diagonal_composition_across_label_increase():
    M = LatticeSpacetime.make(6, 12, 1)
    D0 = M.restrict(diamond(M, 6, [1]))
    D1 = M.restrict(diamond(M, 6, [0, 1, 2]))
    f = SpacetimeMorphism.uniform(D1, M)
    g = SpacetimeMorphism.uniform(D0, D1)
    Dg = DiagonalTheory(A, label_wrap(2))
    assert Dg.mor(f @ g).matrix == (Dg.mor(f) @ Dg.mor(g)).matrix
    assert Dg.obj(M).dim == 2 * A.obj(M).dim


def test_classify_examples(probes):
    assert classify(identity_natural(A), probes.objects, probes.morphisms).kind == "iso"
    c = classify(pad(A, 1, 2), probes.objects, probes.morphisms)
    assert c.natural and c.kind == "neither"


def test_wrap_counterexample(probes):
    L = spass_counterexample(A, label_wrap(2), probes)
    wrapping = [i for i, M in enumerate(probes.objects) if M.full_rows]
    z1, z2, z21 = L.naturals
    assert all(r.classification.natural for r in L.naturals)
    assert sorted(z1.classification.iso_at) == [i for i in range(len(probes.objects)) if i not in wrapping]
    assert sorted(z2.classification.iso_at) == wrapping
    assert z1.classification.kind == z2.classification.kind == "partial-iso"
    assert L.composite_is_pad and not L.composite_iso_where_nontrivial
    assert L.violation and not L.diagonal_timeslice_failures and not L.diagonal_functor_failures
    assert all(expected_iso_pattern(L).values())


def test_threshold_counterexample_breaks_timeslice(hot_probes):
    L = spass_counterexample(A, label_threshold(1), hot_probes)
    assert L.violation and L.composite_is_pad
    assert L.diagonal_timeslice_failures
    bad = {hot_probes.tags.get(hot_probes.objects.index(hot_probes.morphisms[i].source))
           for i in L.diagonal_timeslice_failures}
    assert bad & {"chain-slab", "chain-slab2", "interpolant"}


def test_trivial_theory_has_no_violation(probes):
    L = spass_counterexample(TrivialTheory(), label_wrap(2), probes)
    assert not L.violation
    assert all(r.classification.kind == "iso" for r in L.naturals)


def test_constant_label_rejected(probes):
    with pytest.raises(ValueError):
        spass_counterexample(A, label_constant(2), probes)


def test_kg_functor_and_timeslice_on_probes(probes):
    assert not functor_failures(A, probes)
    assert not timeslice_failures(A, probes.morphisms)


def test_diagonal_dynamics_exhibits_proper_kinematic():
    M = LatticeSpacetime.make(6, 12, 1)
    regions = {0: [diamond(M, 6, Interval(6, 0, w)).mask for w in (3, 4)]}
    r = diagonal_dynamics_checks(A, label_wrap(2), [M], regions, caps=Caps())
    assert r.ok
    got = {(p["kin_dim"], p["dyn_dim"]) for p in r.proper_kinematic}
    assert got == {(4, 8), (6, 12)}


def test_constant_label_dynamics_trivial():
    M = LatticeSpacetime.make(6, 12, 1)
    r = diagonal_dynamics_checks(A, label_constant(1), [M], {0: [diamond(M, 6, [0, 1, 2]).mask]})
    assert r.ok and not r.proper_kinematic


def test_shift_demo(probes):
    a = shift_demo(A, 2, probes)
    assert a["natural"] == [True] and not a["injective_at"]
    t = shift_demo(TrivialTheory(), 2, probes)
    assert t["injective_at"] == list(range(len(probes.objects)))


def test_candidate_naturals():
    Z = TrivialTheory()
    assert [z.name for z in candidate_naturals(Z, A)] == ["0[" + A.name + "]"]
    assert len(candidate_naturals(A, A)) == 4
    assert candidate_naturals(A, Z) == []


def test_meta_check(probes):
    regions = {}
    for i, M in enumerate(probes.objects):
        if probes.tags.get(i) == "diamond":
            regions[i] = [M.carrier]
        if probes.tags.get(i) == "full":
            regions[i] = [diamond(M, 6, Interval(6, 0, w)).mask for w in (3, 4)]
    mc = spass_meta_check([TrivialTheory(), A], probes, regions)
    assert mc.locally_dynamical and mc.ok
    kinds = {c["name"]: c["kind"] for c in mc.classifications}
    assert kinds["0[" + A.name + "]"] == "neither"
    assert kinds["id[" + A.name + "]"] == "iso" and kinds["-1*id[" + A.name + "]"] == "iso"
    assert kinds["2*id[" + A.name + "]"] == "not-natural" and kinds["1/2*id[" + A.name + "]"] == "not-natural"


def test_probe_family_tags(probes, hot_probes):
    # with equal couplings at both ends the two chain slabs are the same object
    assert "chain-slab" not in probes.tags.values()
    assert set(hot_probes.tags.values()) == {"full", "slab", "diamond", "wide", "point", "interpolant",
                                             "chain-slab", "chain-slab2"}
    for i, M in enumerate(probes.objects):
        assert A.interior(M) & M.carrier, i
