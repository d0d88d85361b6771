import random

from loccov.causal_laws import (LAWS, LawTally, check_multi_diamonds, multi_diamond_family, new_tallies,
                                region_spacetimes, row_subsets, verify_all, verify_full_lattice)
from loccov.lattice import LatticeSpacetime, multi_diamond


def test_tally_records_witness():
    t = LawTally("x")
    t.record(True, a=1)
    t.record(False, a=2)
    t.record(False, a=3)
    assert t.checked == 3 and t.failures == 2 and not t.ok
    assert t.witness == {"a": 2}


def test_small_run_has_no_failures_and_covers_every_law():
    tallies = verify_all(range(4, 6), range(6, 8), seed=5, regions_per_lattice=1)
    assert set(tallies) == set(LAWS)
    for name, t in tallies.items():
        assert t.checked > 0, name
        assert t.ok, (name, t.witness)


def test_row_subsets_count():
    M = LatticeSpacetime.make(4, 3)
    assert len(list(row_subsets(M))) == 3 * (2 ** 4 - 1)


def test_multi_diamond_family_is_valid():
    M = LatticeSpacetime.make(9, 8)
    fam = list(multi_diamond_family(M, rng=random.Random(0), triples=10))
    assert any(len(ivs) == 3 for ivs, _ in fam)
    for ivs, mask in fam:
        assert multi_diamond(M, ivs).mask == mask
        assert len({iv.t for iv in ivs}) == 1


def test_region_spacetimes_are_convex():
    for R in region_spacetimes(7, 8, random.Random(2)):
        assert R.ambient().is_convex(R.carrier)


def test_exhaustion_on_one_lattice():
    tallies = new_tallies()
    check_multi_diamonds(LatticeSpacetime.make(8, 8), random.Random(1), tallies)
    assert tallies["exhaustion"].checked > 100 and tallies["exhaustion"].ok
    assert tallies["multi_diamond_complete"].ok


def test_single_lattice_seed_independent():
    a = verify_full_lattice(6, 7, seed=0)
    b = verify_full_lattice(6, 7, seed=0)
    assert {k: v.checked for k, v in a.items()} == {k: v.checked for k, v in b.items()}
