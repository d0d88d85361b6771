"""Randomized laws of the subobject lattice: meets, joins and their universal properties."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List

from gmpy2 import mpq

from . import linalg as la
from .subobjects import (DataSpace, LinearMorphism, Subspace, factor_through, intersect,
                         subobject_iso, subobject_leq, union)


@dataclass
class LawResult:
    law: str
    instances: int
    failures: int = 0
    witness: Dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def rand_q(rng: random.Random) -> mpq:
    return mpq(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))


def rand_matrix(rng: random.Random, rows: int, cols: int) -> la.Matrix:
    return [[rand_q(rng) for _ in range(cols)] for _ in range(rows)]


def rand_injective(rng: random.Random, rows: int, cols: int) -> la.Matrix:
    while True:
        m = rand_matrix(rng, rows, cols)
        if la.rank(la.transpose(m, rows), rows) == cols:
            return m


def rand_invertible(rng: random.Random, n: int) -> la.Matrix:
    return rand_injective(rng, n, n)


def rand_subspace(rng: random.Random, amb: DataSpace, max_dim: int | None = None) -> Subspace:
    d = rng.randint(0, max_dim if max_dim is not None else amb.dim)
    return Subspace.span(amb, rand_matrix(rng, d, amb.dim))


def rand_sub_of(rng: random.Random, s: Subspace) -> Subspace:
    k = rng.randint(0, s.dim)
    coeffs = rand_matrix(rng, k, s.dim)
    return Subspace.span(s.ambient, la.matmul(coeffs, s.basis) if k and s.dim else [])


def _mono(amb: DataSpace, cols: la.Matrix, d: int) -> LinearMorphism:
    return LinearMorphism(DataSpace.plain(d), amb, la.freeze(cols) if d else tuple(() for _ in range(amb.dim)),
                          check=False)


def law_fubini(rng: random.Random, n: int) -> tuple:
    amb = DataSpace.plain(n)
    ni, nj = rng.randint(1, 4), rng.randint(1, 4)
    js = {i: sorted(rng.sample(range(nj), rng.randint(1, nj))) for i in range(ni)}
    m = {(i, j): rand_subspace(rng, amb, 3) for i in range(ni) for j in js[i]}
    row_first = union([union([m[i, j] for j in js[i]], amb) for i in range(ni)], amb)
    flat = union(list(m.values()), amb)
    cols = sorted({j for i in js for j in js[i]})
    col_first = union([union([m[i, j] for i in range(ni) if j in js[i]], amb) for j in cols], amb)
    ok = subobject_iso(row_first, flat) and subobject_iso(flat, col_first)
    return ok, {"n": n, "index": {str(i): js[i] for i in js}}


def law_union_refine(rng: random.Random, n: int) -> tuple:
    amb = DataSpace.plain(n)
    nj = rng.randint(1, 4)
    ns = [rand_subspace(rng, amb, 4) for _ in range(nj)]
    # second clause: I contains J with m_j = n_j, and extra m_i refine some n_j
    extra = [rand_sub_of(rng, ns[rng.randrange(nj)]) for _ in range(rng.randint(0, 4))]
    ms = list(ns) + extra
    mu, nu = union(ms, amb), union(ns, amb)
    xi = factor_through(mu.inclusion(), nu.inclusion())
    first = subobject_leq(union(extra, amb), nu) and xi is not None
    second = subobject_iso(mu, nu) and xi is not None and xi.source.dim == xi.target.dim
    return first and second, {"n": n, "dims_m": [s.dim for s in ms], "dims_n": [s.dim for s in ns]}


def law_union_invariance(rng: random.Random, n: int) -> tuple:
    amb = DataSpace.plain(n)
    ms = [rand_subspace(rng, amb, 3) for _ in range(rng.randint(1, 4))]
    constraints = [list(b) for s in ms for b in s.basis]
    # each row r of h solves  <h_r, b> = b_r  for every generator b; pick a random solution
    red, piv = la.rref(constraints, n)
    kernel = la.nullspace(constraints, n)
    h = []
    for r in range(n):
        row = [la.ZERO] * n
        rhs = la.solve(constraints, [[b[r]] for b in constraints], n) if constraints else la.zeros(n, 1)
        for k in range(n):
            row[k] = rhs[k][0]
        for vec in kernel:
            c = rand_q(rng)
            row = [a + c * v for a, v in zip(row, vec)]
        h.append(row)
    fixes_each = all(la.matvec(h, list(b)) == list(b) for s in ms for b in s.basis)
    u = union(ms, amb)
    fixes_union = all(la.matvec(h, list(b)) == list(b) for b in u.basis)
    spans = Subspace.span(amb, [la.matvec(h, list(b)) for b in u.basis])
    return fixes_each and fixes_union and subobject_iso(spans, u), {"n": n, "dims": [s.dim for s in ms]}


def law_meet_reparam(rng: random.Random, n: int) -> tuple:
    """Meets are unchanged when each mono is precomposed with an isomorphism."""
    amb = DataSpace.plain(n)
    monos = []
    for _ in range(rng.randint(1, 4)):
        d = rng.randint(0, n)
        monos.append((d, rand_injective(rng, n, d) if d else []))
    before = intersect([Subspace.span(amb, la.transpose(c, n)) for d, c in monos if d] +
                       [amb.null() for d, _ in monos if not d], amb)
    reparam = []
    for d, c in monos:
        if d:
            v = rand_invertible(rng, d)
            reparam.append(Subspace.span(amb, la.transpose(la.matmul(c, v), n)))
        else:
            reparam.append(amb.null())
    after = intersect(reparam, amb)
    factors = all(factor_through(before.inclusion(), _mono(amb, c, d)) is not None for d, c in monos)
    return subobject_iso(before, after) and factors, {"n": n, "dims": [d for d, _ in monos]}


def law_meet_mono(rng: random.Random, n: int) -> tuple:
    """A mono k commutes with nonempty meets."""
    n2 = rng.randint(n, 12)
    amb, amb2 = DataSpace.plain(n), DataSpace.plain(n2)
    k = LinearMorphism(amb, amb2, la.freeze(rand_injective(rng, n2, n)), check=False)
    ms = [rand_subspace(rng, amb) for _ in range(rng.randint(1, 4))]
    lhs = k.image_of(intersect(ms, amb))
    rhs = intersect([k.image_of(s) for s in ms], amb2)
    return subobject_iso(lhs, rhs), {"n": n, "n2": n2, "dims": [s.dim for s in ms]}


def law_union_universal(rng: random.Random, n: int) -> tuple:
    n2 = rng.randint(n, 12)
    amb, amb2 = DataSpace.plain(n), DataSpace.plain(n2)
    ms = [rand_subspace(rng, amb, 3) for _ in range(rng.randint(1, 4))]
    f = LinearMorphism(amb, amb2, la.freeze(rand_injective(rng, n2, n)), check=False)
    target = union([f.image_of(s) for s in ms] + [rand_subspace(rng, amb2, 2)], amb2)
    nmono = target.inclusion()
    m = union(ms, amb).inclusion()
    ft = factor_through(f @ m, nmono)
    if ft is None:
        return False, {"n": n, "reason": "no factorization"}
    ok = True
    for s in ms:
        mt = factor_through(s.inclusion(), m)
        nt = factor_through(f @ s.inclusion(), nmono)
        ok = ok and mt is not None and nt is not None and (ft @ mt).matrix == nt.matrix
    unique = la.rank(la.transpose(nmono.matrix, n2), n2) == nmono.source.dim
    return ok and unique, {"n": n, "n2": n2}


LAWS: Dict[str, Callable] = {
    "fubini": law_fubini,
    "union_refine": law_union_refine,
    "union_invariance": law_union_invariance,
    "meet_reparametrization": law_meet_reparam,
    "meet_mono": law_meet_mono,
    "union_universal": law_union_universal,
}


def run_law(name: str, instances: int = 1000, max_dim: int = 12, seed: int = 0) -> LawResult:
    rng = random.Random(f"{name}:{seed}")
    law = LAWS[name]
    res = LawResult(name, instances)
    for i in range(instances):
        n = rng.randint(1, max_dim)
        ok, wit = law(rng, n)
        if not ok:
            res.failures += 1
            if not res.witness:
                res.witness = {"instance": i, **wit}
    return res


def run_all(instances: int = 1000, max_dim: int = 12, seed: int = 0) -> List[LawResult]:
    return [run_law(name, instances, max_dim, seed) for name in LAWS]
