"""Kinematic, rce-invariant and dynamical nets, and the locality checks built on them."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from gmpy2 import mpq

from . import linalg as la
from .kg import KGTheory
from .lattice import LatticeSpacetime, Region, enumerate_Kb
from .linalg import qstr
from .rce import random_perturbation
from .subobjects import Subspace, intersect, intersect_normals, is_trivial, subobject_iso, subobject_leq, union
from .theory import Theory


@dataclass(frozen=True)
class Caps:
    max_width: int = 3
    max_components: int = 2
    rows: Optional[tuple] = None
    audit_rounds: int = 2
    connected_only: bool = False
    slack: int = 1

    def to_json(self) -> dict:
        return {"max_width": self.max_width, "max_components": self.max_components,
                "rows": None if self.rows is None else list(self.rows),
                "audit_rounds": self.audit_rounds, "connected_only": self.connected_only, "slack": self.slack}


@dataclass
class NetValue:
    kind: str
    index: Region
    value: Subspace
    caps: Caps
    audit_rounds: int = 0
    flagged: bool = False

    @property
    def dim(self) -> int:
        return self.value.dim

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": [[p.t, p.x] for p in self.index.points], "dim": self.dim,
                "basis": [[qstr(v) for v in r] for r in self.value.basis], "caps": self.caps.to_json(),
                "audit_rounds": self.audit_rounds, "flagged": self.flagged}


class _Memo:
    """Per-(theory, spacetime) caches of site normals and bullet values."""

    def __init__(self):
        self.normals: Dict[tuple, la.Matrix] = {}
        self.bullets: Dict[tuple, Subspace] = {}
        self.sites: Dict[tuple, List] = {}


_MEMO: Dict[int, _Memo] = {}


def _memo(theory: Theory) -> _Memo:
    m = _MEMO.get(id(theory))
    if m is None:
        m = _MEMO[id(theory)] = _Memo()
        theory._memo_ref = m  # ties memo lifetime to the theory object
    return m


def perturbation_sites(theory: Theory, M: LatticeSpacetime) -> List:
    memo = _memo(theory)
    key = M.key()
    if key not in memo.sites:
        memo.sites[key] = theory.perturbation_sites(M)
    return memo.sites[key]


def _site_normals(theory: Theory, M: LatticeSpacetime, p) -> la.Matrix:
    memo = _memo(theory)
    key = (M.key(), tuple(p))
    rows = memo.normals.get(key)
    if rows is None:
        R = theory.site_rce(M, p)
        n = len(R)
        diff = [[R[i][j] - (la.ONE if i == j else la.ZERO) for j in range(n)] for i in range(n)]
        rows, _ = la.rref(diff, n)
        memo.normals[key] = rows
    return rows


def _sites_in(theory: Theory, M: LatticeSpacetime, mask: int) -> List:
    return [p for p in perturbation_sites(theory, M) if (mask >> M.index(p)) & 1]


def bullet_subspace(theory: Theory, M: LatticeSpacetime, K, caps: Caps = Caps(), seed: int = 0) -> NetValue:
    """Elements fixed by every sampled rce with support in the causal complement of ``K``.

    The intersection runs over all single-site unit perturbations; ``audit_rounds``
    random multi-site perturbations then test that nothing further is removed.
    """
    kmask = M.mask(K)
    perp = M.perp(kmask)
    sites = _sites_in(theory, M, perp)
    memo = _memo(theory)
    key = (M.key(), tuple(sites))
    value = memo.bullets.get(key)
    space = theory.obj(M)
    if value is None:
        normals = [r for p in sites for r in _site_normals(theory, M, p)]
        value = intersect_normals(normals, space) if space.dim else space.full()
        memo.bullets[key] = value
    flagged = False
    if caps.audit_rounds and sites and value.dim:
        rng = random.Random(f"audit:{seed}:{kmask}:{M.N}:{M.T}")
        for _ in range(caps.audit_rounds):
            h = random_perturbation(rng, M, sites, 3, theory)
            R = theory.rce_matrix(M, h)
            if any(la.matvec(R, list(b)) != list(b) for b in value.basis):
                flagged = True
    return NetValue("bullet", Region(M, kmask), value, caps, caps.audit_rounds, flagged)


def vanishing_oracle(theory: KGTheory, M: LatticeSpacetime, K) -> Subspace:
    """``{u in A(M) : u(q) = 0 for every perturbation site q in the causal complement of K}``."""
    perp = M.perp(M.mask(K))
    rows = [theory.evaluation(M, p) for p in _sites_in(theory, M, perp)]
    return intersect_normals(rows, theory.obj(M))


def dynamical_subspace(theory: Theory, M: LatticeSpacetime, O, caps: Caps = Caps(), seed: int = 0) -> NetValue:
    omask = M.mask(O)
    if not omask:
        b = bullet_subspace(theory, M, 0, caps, seed)
        return NetValue("dynamical", Region(M, 0), b.value, caps, b.audit_rounds, b.flagged)
    Ks = enumerate_Kb(M, omask, caps.max_width, caps.rows, caps.max_components, caps.connected_only, caps.slack)
    space = theory.obj(M)
    acc = space.null()
    flagged = False
    for K in Ks:
        b = bullet_subspace(theory, M, K, caps, seed)
        flagged = flagged or b.flagged
        if not subobject_leq(b.value, acc):
            acc = union([acc, b.value], space)
        if acc.dim == space.dim:
            break
    return NetValue("dynamical", Region(M, omask), acc, caps, caps.audit_rounds, flagged)


def kinematic_value(theory: Theory, M: LatticeSpacetime, O, caps: Caps = Caps()) -> NetValue:
    return NetValue("kinematic", M.region(O), theory.kinematic(M, O), caps)


@dataclass
class LocalityVerdict:
    holds: bool
    kinematic: NetValue
    dynamical: NetValue
    witness: Optional[list] = None
    flagged: bool = False

    def to_json(self) -> dict:
        return {"holds": self.holds, "kin_dim": self.kinematic.dim, "dyn_dim": self.dynamical.dim,
                "witness": self.witness, "flagged": self.flagged}


def _witness(a: Subspace, b: Subspace) -> Optional[list]:
    for v in a.basis:
        if not b.contains(v):
            return [qstr(x) for x in v]
    for v in b.basis:
        if not a.contains(v):
            return [qstr(x) for x in v]
    return None


def check_dynamical_locality(theory: Theory, M: LatticeSpacetime, O, caps: Caps = Caps(),
                             seed: int = 0) -> LocalityVerdict:
    if not M.mask(O):
        raise ValueError("dynamical locality is tested on nonempty regions")
    kin = kinematic_value(theory, M, O, caps)
    dyn = dynamical_subspace(theory, M, O, caps, seed)
    holds = subobject_iso(kin.value, dyn.value)
    return LocalityVerdict(holds, kin, dyn, None if holds else _witness(kin.value, dyn.value), dyn.flagged)


@dataclass
class ExtendedLocality:
    meet_trivial: bool
    empty_bullet_trivial: bool
    meet_dim: int
    empty_bullet_dim: int


def check_extended_locality(theory: Theory, M: LatticeSpacetime, O1, O2, caps: Caps = Caps()) -> ExtendedLocality:
    m1, m2 = M.mask(O1), M.mask(O2)
    if not m1 or not m2:
        raise ValueError("regions must be nonempty")
    if M.hull(m1) & m2:
        raise ValueError("regions must be causally disjoint")
    meet = intersect([theory.kinematic(M, m1), theory.kinematic(M, m2)], theory.obj(M))
    empty = bullet_subspace(theory, M, 0, caps).value
    return ExtendedLocality(is_trivial(meet), is_trivial(empty), meet.dim, empty.dim)


def outer_regular_check(theory: Theory, M: LatticeSpacetime, K, sequence: Sequence, caps: Caps = Caps()) -> bool:
    """``A.(M;K)`` against the meet of the dynamical subspaces of a nested sequence around ``K``.

    On a finite lattice a decreasing sequence is eventually constant, so the
    approximants are regions holding ``K`` with slack (for instance diamonds on
    widened bases) rather than regions shrinking onto ``K``.
    """
    kmask = M.mask(K)
    masks = [M.mask(O) for O in sequence]
    if not masks:
        raise ValueError("empty sequence")
    for a, b in zip(masks, masks[1:]):
        if b & ~a:
            raise ValueError("sequence is not nested")
    if any(kmask & ~m for m in masks):
        raise ValueError("sequence does not contain K")
    dyns = [dynamical_subspace(theory, M, m, caps).value for m in masks]
    return subobject_iso(bullet_subspace(theory, M, kmask, caps).value, intersect(dyns, theory.obj(M)))


def base_interior(M: LatticeSpacetime, base: int) -> int:
    """Sites of a one-row base whose two neighbours also lie in the base."""
    out = 0
    for i in range(M.N * M.T):
        if (base >> i) & 1:
            t, x = divmod(i, M.N)
            l, r = t * M.N + (x - 1) % M.N, t * M.N + (x + 1) % M.N
            if (base >> l) & 1 and (base >> r) & 1:
                out |= 1 << i
    return out


def refined_union(theory: Theory, M: LatticeSpacetime, base: int, caps: Caps = Caps()) -> Subspace:
    """Join of ``A.(M;K)`` over every subset ``K`` of the interior of ``base``."""
    inner = [i for i in range(M.N * M.T) if (base_interior(M, base) >> i) & 1]
    space = theory.obj(M)
    acc = bullet_subspace(theory, M, 0, caps).value
    for r in range(1, len(inner) + 1):
        for combo in itertools.combinations(inner, r):
            k = 0
            for i in combo:
                k |= 1 << i
            acc = union([acc, bullet_subspace(theory, M, k, caps).value], space)
    return acc


def additivity_check(theory: Theory, M: LatticeSpacetime, cover: Sequence, caps: Caps = Caps()) -> bool:
    masks = [M.mask(O) for O in cover]
    for K in enumerate_Kb(M, M.carrier, caps.max_width, caps.rows, caps.max_components, caps.connected_only,
                           caps.slack):
        if not any(K.mask & ~m == 0 for m in masks):
            raise ValueError(f"cover misses an admissible base {[tuple(p) for p in K.points]}")
    space = theory.obj(M)
    total = union([dynamical_subspace(theory, M, m, caps).value for m in masks], space)
    return total.dim == space.dim
