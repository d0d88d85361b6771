"""Relative Cauchy evolution: perturbations, Cauchy wedges and the comparison automorphism."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg as la
from .kg import KGTheory, omega_matrix
from .lattice import LatticeSpacetime, Region, SpacetimeMorphism, WedgeError, wedge_regions
from .linalg import Q, qstr
from .subobjects import LinearMorphism
from .theory import NaturalTransformation, Theory


@dataclass(frozen=True)
class Perturbation:
    """A finitely supported change ``delta_mu`` of the site couplings."""

    host: LatticeSpacetime
    delta: Tuple[Tuple[Tuple[int, int], mpq], ...]

    @classmethod
    def of(cls, host: LatticeSpacetime, delta: Dict, margin: int = 2) -> "Perturbation":
        items = tuple(sorted(((int(t), int(x) % host.N), Q(v)) for (t, x), v in delta.items() if Q(v)))
        h = cls(host, items)
        if items:
            wedge_regions(host, [p for p, _ in items], margin)
        return h

    @classmethod
    def site(cls, host: LatticeSpacetime, p, amplitude=1, margin: int = 2) -> "Perturbation":
        return cls.of(host, {tuple(p): amplitude}, margin)

    def as_dict(self) -> Dict:
        return dict(self.delta)

    @property
    def support(self) -> List[Tuple[int, int]]:
        return [p for p, _ in self.delta]

    def pushforward(self, psi: SpacetimeMorphism) -> "Perturbation":
        return Perturbation(psi.target, tuple(sorted((tuple(psi(p)), v) for p, v in self.delta)))

    def perturbed(self) -> LatticeSpacetime:
        return self.host.perturbed(self.as_dict())

    def to_json(self) -> list:
        return [[t, x, qstr(v)] for (t, x), v in self.delta]


def _delta(h) -> Dict:
    return h.as_dict() if isinstance(h, Perturbation) else {tuple(p): Q(v) for p, v in h.items()}


@dataclass(frozen=True)
class RceMap:
    matrix: Tuple[Tuple[mpq, ...], ...]
    host: LatticeSpacetime
    perturbation: Perturbation

    def preserves_form(self, form) -> bool:
        m = [list(r) for r in self.matrix]
        return la.freeze(la.matmul(la.matmul(la.transpose(m, len(m)), form), m)) == la.freeze(form)

    def is_identity(self) -> bool:
        return self.matrix == la.freeze(la.identity(len(self.matrix)))

    def fixes(self, v: Sequence) -> bool:
        return la.matvec(self.matrix, v) == list(v)


def wedges(M: LatticeSpacetime, h, margin: int = 2) -> Tuple[Region, Region]:
    return wedge_regions(M, [p for p, v in _delta(h).items() if v], margin)


def tau(M: LatticeSpacetime, h, sign: int, theory: Theory | None = None, row: int | None = None) -> LinearMorphism:
    """``tau+`` (sign > 0) or ``tau-`` (sign < 0) from ``A(M)`` to ``A(M[h])``."""
    theory = theory or KGTheory()
    d = _delta(h)
    if row is not None and isinstance(theory, KGTheory):
        mat = theory.tau(M, d, sign, row)
        return LinearMorphism(theory.obj(M), theory.obj(M.perturbed(d)), la.freeze(mat), check=False)
    tp, tm, _ = theory.wedge_taus(M, d)
    return tp if sign > 0 else tm


def rce(M: LatticeSpacetime, h, theory: Theory | None = None, rows: Tuple[int, int] | None = None) -> RceMap:
    theory = theory or KGTheory()
    if not isinstance(h, Perturbation):
        h = Perturbation.of(M, h, theory.margin)
    if rows is not None:
        mat = theory.rce_matrix(M, h.as_dict(), rows)
    else:
        mat = theory.rce_matrix(M, h.as_dict())
    return RceMap(la.freeze(mat), M, h)


def admissible_pairs(M: LatticeSpacetime, h, theory: KGTheory) -> Tuple[List[int], List[int]]:
    """Row pairs strictly above and strictly below the support, inside the lattice."""
    supp = [p for p, v in _delta(h).items() if v]
    lo, hi = min(p[0] for p in supp), max(p[0] for p in supp)
    ups = [t for t in range(hi + 1, M.T - 1) if t in M.full_rows and t + 1 in M.full_rows]
    downs = [t for t in range(0, lo - 1) if t in M.full_rows and t + 1 in M.full_rows]
    return ups, downs


def rce_independence_check(M: LatticeSpacetime, h, pairs: Sequence[Tuple[int, int]],
                           theory: KGTheory | None = None) -> bool:
    """Recompute with each ``(future_row, past_row)`` choice; all results must agree exactly."""
    theory = theory or KGTheory()
    d = _delta(h)
    if not any(d.values()):
        return all(rce(M, d, theory, rows=pr).is_identity() for pr in pairs)
    ups, downs = admissible_pairs(M, d, theory)
    for up, down in pairs:
        if up not in ups or down not in downs:
            raise ValueError(f"row pair {(up, down)} straddles the perturbation")
    mats = {la.freeze(theory.rce_matrix(M, d, rows=pr)) for pr in pairs}
    return len(mats) == 1


def rce_covariance_check(psi: SpacetimeMorphism, h, theory: Theory | None = None) -> bool:
    """``rce_N[psi_* h] o A(psi) == A(psi) o rce_M[h]``."""
    theory = theory or KGTheory()
    if not isinstance(h, Perturbation):
        h = Perturbation.of(psi.source, h, theory.margin)
    hp = h.pushforward(psi)
    A = theory.mor(psi)
    lhs = la.matmul(theory.rce_matrix(psi.target, hp.as_dict()), A.matrix)
    rhs = la.matmul(A.matrix, theory.rce_matrix(psi.source, h.as_dict()))
    return la.freeze(lhs) == la.freeze(rhs)


def rce_generator(M: LatticeSpacetime, p, theory: KGTheory | None = None) -> la.Matrix:
    """Exact ``d/ds rce[s delta_p]`` at ``s = 0``.

    The perturbed evolution crosses the site once, so ``rce[s delta_p]`` is affine
    in ``s``; the derivative is recovered exactly from the values at ``s = 0, 1, 2``
    after confirming that the second difference vanishes.
    """
    theory = theory or KGTheory()
    r0 = la.identity(theory.obj(M).dim)
    r1 = theory.rce_matrix(M, {tuple(p): 1})
    r2 = theory.rce_matrix(M, {tuple(p): 2})
    second = [[a - 2 * b + c for a, b, c in zip(x, y, z)] for x, y, z in zip(r2, r1, r0)]
    if not la.is_zero(second):
        raise ArithmeticError("rce is not affine in the amplitude")
    return la.sub(r1, r0)


def intertwine_check(zeta: NaturalTransformation, M: LatticeSpacetime, h) -> bool:
    """``rce^B_M[h] o zeta_M == zeta_M o rce^A_M[h]``."""
    d = _delta(h)
    z = zeta(M)
    ra = zeta.source.rce_matrix(M, d)
    rb = zeta.target.rce_matrix(M, d)
    if not z.source.dim:
        return True
    if not z.target.dim:
        return True
    lhs = la.matmul(rb, z.matrix)
    rhs = la.matmul(z.matrix, ra)
    return la.freeze(lhs) == la.freeze(rhs)


def relabeling_perturbation(M: LatticeSpacetime, psi: SpacetimeMorphism, window: Iterable) -> Dict:
    """``psi^* mu - mu`` on ``window`` for an automorphism ``psi`` of ``M``.

    Automorphisms preserve the couplings, so the difference is identically zero;
    it is returned as an explicit (empty-support) perturbation.
    """
    if psi.source != M or psi.target != M:
        raise ValueError("relabeling needs an automorphism")
    out = {}
    for p in window:
        v = M.mu_at(psi(p)) - M.mu_at(p)
        if v:
            out[tuple(p)] = v
    return out


def random_perturbation(rng: random.Random, M: LatticeSpacetime, sites: Sequence, max_sites: int = 3,
                        theory: Theory | None = None) -> Dict:
    theory = theory or KGTheory()
    for _ in range(100):
        k = rng.randint(1, min(max_sites, len(sites)))
        pts = rng.sample(list(sites), k)
        d = {tuple(p): mpq(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 2, 3])) for p in pts}
        if theory.admissible(M, list(d)):
            return d
    raise ValueError("no admissible perturbation found")


def omega_preserved(R: la.Matrix, N: int) -> bool:
    om = omega_matrix(N)
    return la.freeze(la.matmul(la.matmul(la.transpose(R, 2 * N), om), R)) == la.freeze(om)
