"""Exhaustive checks of the causal-complement, development and embedding lemmas on lattices."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .lattice import (Interval, LatticeSpacetime, SpacetimeMorphism, compose, enumerate_Kb,
                      is_cauchy_morphism, multi_diamond, NotAMultiDiamond, probe_morphisms, _bits)


@dataclass
class LawTally:
    law: str
    checked: int = 0
    failures: int = 0
    witness: Dict = field(default_factory=dict)

    def record(self, ok: bool, **witness) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if not self.witness:
                self.witness = witness

    @property
    def ok(self) -> bool:
        return self.failures == 0


def sample_sets(M: LatticeSpacetime, rng: random.Random, random_sets: int = 40) -> Iterator[int]:
    """Points, point pairs, row intervals and random subsets of the carrier."""
    pts = list(_bits(M.carrier))
    for i in pts:
        yield 1 << i
    for i, j in itertools.combinations(pts, 2):
        yield (1 << i) | (1 << j)
    for t in range(M.T):
        row = M.row(M.carrier, t)
        for a in range(M.N):
            for w in range(1, M.N + 1):
                m = 0
                for k in range(w):
                    m |= 1 << ((a + k) % M.N)
                if m & ~row == 0:
                    yield m << (t * M.N)
    for _ in range(random_sets):
        k = rng.randint(1, max(1, len(pts) // 3))
        m = 0
        for i in rng.sample(pts, min(k, len(pts))):
            m |= 1 << i
        yield m


def row_subsets(M: LatticeSpacetime) -> Iterator[int]:
    for t in M.full_rows:
        for bits in range(1, 1 << M.N):
            yield bits << (t * M.N)


def diamond_singles(M: LatticeSpacetime, max_width: int | None = None) -> List[Interval]:
    out = []
    top = M.N - 1 if max_width is None else min(max_width, M.N - 1)
    for t in M.full_rows:
        for w in range(1, top + 1):
            for a in range(M.N):
                out.append(Interval(t, a, w))
    return out


def multi_diamond_family(M: LatticeSpacetime, pair_width: int = 3, rng: random.Random | None = None,
                         triples: int = 50) -> Iterator[Tuple[Tuple[Interval, ...], int]]:
    """All single diamonds, all two-component multi-diamonds up to ``pair_width``, sampled triples."""
    singles = diamond_singles(M)
    for iv in singles:
        yield (iv,), multi_diamond(M, [iv]).mask
    small = [iv for iv in singles if iv.width <= pair_width]
    dev = {iv: M.dependence(iv.mask(M)) for iv in small}
    hull = {iv: M.hull(d) for iv, d in dev.items()}
    for a, b in itertools.combinations(small, 2):
        if a.t != b.t or hull[a] & dev[b]:
            continue
        d = dev[a] | dev[b]
        if M.dependence(a.mask(M) | b.mask(M)) != d:
            continue
        yield (a, b), d
    if rng is not None and len(small) >= 3:
        for _ in range(triples):
            t = rng.choice(M.full_rows)
            row = [iv for iv in small if iv.t == t]
            combo = tuple(rng.sample(row, 3))
            try:
                yield combo, multi_diamond(M, combo).mask
            except NotAMultiDiamond:
                continue


def check_complements(M: LatticeSpacetime, sets: Iterable[int], tallies: Dict[str, LawTally]) -> None:
    for S in sets:
        p1 = M.perp(S)
        p2 = M.perp(p1)
        p3 = M.perp(p2)
        tallies["perp_idempotent"].record(p3 == p1, set=M.points(S))
        tallies["contained_in_perpperp"].record(S & ~p2 == 0, set=M.points(S))
        tallies["perpperp_convex"].record(M.is_convex(p2), set=M.points(S))
        D = M.dependence(S)
        tallies["development_in_perpperp"].record(D & ~p2 == 0, set=M.points(S))


def check_row_equality(M: LatticeSpacetime, tallies: Dict[str, LawTally]) -> None:
    for S in row_subsets(M):
        tallies["development_equals_perpperp_on_rows"].record(
            M.dependence(S) == M.perp(M.perp(S)), set=M.points(S))


def check_multi_diamonds(M: LatticeSpacetime, rng: random.Random, tallies: Dict[str, LawTally],
                         pair_width: int = 3, exhaustion_samples: int = 4) -> None:
    for base, D in multi_diamond_family(M, pair_width, rng):
        tallies["multi_diamond_complete"].record(M.perp(M.perp(D)) == D, base=[vars(b) for b in base])
        B = 0
        for iv in base:
            B |= iv.mask(M)
        pts = list(_bits(D))
        probes = [1 << i for i in pts] if len(base) == 1 else []
        for _ in range(exhaustion_samples):
            k = rng.randint(1, len(pts))
            m = 0
            for i in rng.sample(pts, k):
                m |= 1 << i
            probes.append(m)
        for K in probes:
            Kt = B & M.hull(K)
            tallies["exhaustion"].record(Kt & ~B == 0 and K & ~M.perp(M.perp(Kt)) == 0,
                                         base=[vars(b) for b in base], K=M.points(K))


def check_nested(M: LatticeSpacetime, rng: random.Random, tallies: Dict[str, LawTally], chains: int = 20) -> None:
    pts = list(_bits(M.carrier))
    for _ in range(chains):
        kern = 0
        for i in rng.sample(pts, rng.randint(1, max(1, len(pts) // 8))):
            kern |= 1 << i
        chain = [kern]
        cur = kern
        for _ in range(rng.randint(1, 4)):
            extra = 0
            for i in rng.sample(pts, rng.randint(1, max(1, len(pts) // 6))):
                extra |= 1 << i
            cur |= extra
            chain.append(cur)
        chain.reverse()
        inter = chain[0]
        jint = M.carrier
        union_perp = 0
        for O in chain:
            inter &= O
            jint &= M.hull(O)
            union_perp |= M.perp(O)
        ok = inter == kern and jint == M.hull(kern) and union_perp == M.perp(kern)
        tallies["nested_complements"].record(ok, K=M.points(kern))


def check_morphisms(morphisms: Sequence[SpacetimeMorphism], tallies: Dict[str, LawTally], max_width: int = 2) -> None:
    for psi in morphisms:
        S, Tg = psi.source, psi.target
        for K in enumerate_Kb(S, S.carrier, max_width=max_width, max_components=2):
            lhs = psi.map_mask(S.perp(S.perp(K.mask)))
            img = psi.map_mask(K.mask)
            rhs = Tg.perp(Tg.perp(img))
            tallies["embedding_preserves_perpperp"].record(lhs == rhs, K=K.points, target=(Tg.N, Tg.T))
        if S.full_rows:
            tallies["full_row_source_is_cauchy"].record(is_cauchy_morphism(psi, "row"))
    for f, g in itertools.product(morphisms, repeat=2):
        if g.target == f.source and is_cauchy_morphism(f) and is_cauchy_morphism(g):
            tallies["cauchy_composition"].record(is_cauchy_morphism(compose(f, g)))


LAWS = ("perp_idempotent", "contained_in_perpperp", "perpperp_convex", "multi_diamond_complete",
        "development_in_perpperp", "development_equals_perpperp_on_rows", "exhaustion",
        "embedding_preserves_perpperp", "nested_complements", "full_row_source_is_cauchy", "cauchy_composition")


def new_tallies() -> Dict[str, LawTally]:
    return {name: LawTally(name) for name in LAWS}


def verify_full_lattice(N: int, T: int, seed: int = 0, tallies: Dict[str, LawTally] | None = None,
                        random_sets: int = 40) -> Dict[str, LawTally]:
    tallies = tallies if tallies is not None else new_tallies()
    rng = random.Random(f"full:{N}:{T}:{seed}")
    M = LatticeSpacetime.make(N, T)
    check_complements(M, sample_sets(M, rng, random_sets), tallies)
    check_row_equality(M, tallies)
    check_multi_diamonds(M, rng, tallies)
    check_nested(M, rng, tallies)
    return tallies


def region_spacetimes(N: int, T: int, rng: random.Random, count: int = 6) -> List[LatticeSpacetime]:
    """Diamonds, slabs, two-diamond carriers and wedge shapes inside the full ``N x T`` lattice."""
    M = LatticeSpacetime.make(N, T)
    out = []
    mid = T // 2
    for w in (3, min(N - 1, 5)):
        out.append(M.restrict(multi_diamond(M, [Interval(mid, 0, w)])))
    out.append(M.restrict(M.rows_mask(range(1, T - 1))))
    p = (mid, 0)
    out.append(M.restrict(M.carrier & ~M.future(M.mask([p]))))
    out.append(M.restrict(M.carrier & ~M.past(M.mask([p]))))
    singles = [iv for iv in diamond_singles(M, 3)]
    tries = 0
    while len(out) < count + 5 and tries < 200:
        tries += 1
        a = rng.choice(singles)
        b = rng.choice([iv for iv in singles if iv.t == a.t])
        try:
            out.append(M.restrict(multi_diamond(M, [a, b])))
        except NotAMultiDiamond:
            continue
    return out


def verify_region(R: LatticeSpacetime, rng: random.Random, tallies: Dict[str, LawTally]) -> None:
    check_complements(R, sample_sets(R, rng, 20), tallies)


def verify_all(N_range: Iterable[int] = range(4, 9), T_range: Iterable[int] = range(6, 11), seed: int = 0,
               regions_per_lattice: int = 2, probes: Sequence[SpacetimeMorphism] | None = None) -> Dict[str, LawTally]:
    """Run every law; ``probes=None`` uses :func:`probe_morphisms` on each lattice."""
    tallies = new_tallies()
    for N in N_range:
        for T in T_range:
            verify_full_lattice(N, T, seed, tallies)
            if probes is None:
                check_morphisms(probe_morphisms(N, T), tallies)
            rng = random.Random(f"regions:{N}:{T}:{seed}")
            regs = region_spacetimes(N, T, rng)
            for R in rng.sample(regs, min(regions_per_lattice, len(regs))):
                verify_region(R, rng, tallies)
    if probes is not None:
        check_morphisms(probes, tallies)
    return tallies
