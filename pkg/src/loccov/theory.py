"""Theories as functors into data spaces, natural transformations and the diagonal construction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg as la
from .lattice import (LatticeSpacetime, Region, SpacetimeMorphism, WedgeError, compose,
                      is_cauchy_morphism, wedge_regions)
from .subobjects import DataSpace, LinearMorphism, Subspace


class TimesliceError(ValueError):
    """A morphism expected to be mapped to an isomorphism was not."""


def _support_mask(M: LatticeSpacetime, delta: Dict) -> int:
    return M.mask([p for p, v in delta.items() if v])


class Theory:
    """A functor from lattice spacetimes to data spaces.

    Subclasses implement :meth:`obj` and :meth:`mor`.  Relative Cauchy evolution,
    kinematic subobjects and the perturbation family are derived generically.
    """

    name = "theory"
    margin = 2

    def obj(self, M: LatticeSpacetime) -> DataSpace:
        raise NotImplementedError

    def mor(self, psi: SpacetimeMorphism) -> LinearMorphism:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name

    # kinematic net --------------------------------------------------------------
    def inclusion(self, M: LatticeSpacetime, O) -> SpacetimeMorphism:
        sub = M.restrict(O)
        return SpacetimeMorphism.uniform(sub, M)

    def kinematic(self, M: LatticeSpacetime, O) -> Subspace:
        if not M.mask(O):
            raise ValueError("the kinematic net is indexed by nonempty regions")
        return self.mor(self.inclusion(M, O)).image()

    # perturbations --------------------------------------------------------------
    def admissible(self, M: LatticeSpacetime, support) -> bool:
        try:
            wedge_regions(M, support, self.margin)
        except WedgeError:
            return False
        return True

    def perturbation_sites(self, M: LatticeSpacetime) -> List:
        """Sites ``q`` for which the single-site perturbation at ``q`` has admissible wedges."""
        return [p for p in M.points() if self.admissible(M, [p])]

    def wedge_taus(self, M: LatticeSpacetime, delta: Dict) -> Tuple[LinearMorphism, LinearMorphism, LatticeSpacetime]:
        """``tau+`` and ``tau-`` built from the two Cauchy wedges of the perturbation."""
        Mh = M.perturbed(delta)
        plus, minus = wedge_regions(M, _support_mask(M, delta), self.margin)
        taus = []
        for w in (plus, minus):
            W = M.restrict(w)
            i = SpacetimeMorphism.uniform(W, M, check=False)
            j = SpacetimeMorphism.uniform(W, Mh, check=False)
            Ai, Aj = self.mor(i), self.mor(j)
            if not Ai.is_iso() or not Aj.is_iso():
                raise TimesliceError("a wedge inclusion is not mapped to an isomorphism")
            inv = la.inverse(Ai.matrix) if Ai.source.dim else []
            mat = la.matmul(Aj.matrix, inv) if inv else ()
            taus.append(LinearMorphism(self.obj(M), self.obj(Mh), la.freeze(mat), check=False))
        return taus[0], taus[1], Mh

    def wedge_rce(self, M: LatticeSpacetime, delta: Dict) -> la.Matrix:
        taup, taum, _ = self.wedge_taus(M, delta)
        if not taup.source.dim:
            return []
        return la.matmul(la.inverse(taum.matrix), taup.matrix)

    def rce_matrix(self, M: LatticeSpacetime, delta: Dict) -> la.Matrix:
        return self.wedge_rce(M, delta)

    def site_rce(self, M: LatticeSpacetime, p) -> la.Matrix:
        return self.rce_matrix(M, {tuple(p): 1})

    def check_functor(self, psi: SpacetimeMorphism, phi: SpacetimeMorphism) -> bool:
        """``A(psi o phi) == A(psi) o A(phi)`` for composable probes."""
        return self.mor(compose(psi, phi)).matrix == (self.mor(psi) @ self.mor(phi)).matrix

    def check_identity(self, M: LatticeSpacetime) -> bool:
        return self.mor(SpacetimeMorphism.identity(M)).matrix == la.freeze(la.identity(self.obj(M).dim))


class TrivialTheory(Theory):
    """The initial theory: every spacetime goes to the zero space."""

    name = "trivial"

    def obj(self, M):
        return DataSpace.zero()

    def mor(self, psi):
        return LinearMorphism.identity(DataSpace.zero())

    def rce_matrix(self, M, delta):
        return []


def _sum_space(space: DataSpace, k: int) -> DataSpace:
    out = DataSpace.zero()
    for _ in range(k):
        out = out.direct_sum(space)
    return out


def block_power(f: LinearMorphism, k: int) -> LinearMorphism:
    m = la.block_diag([f.matrix] * k, [(f.target.dim, f.source.dim)] * k)
    return LinearMorphism(_sum_space(f.source, k), _sum_space(f.target, k), la.freeze(m), check=False)


def pad_matrix(space: DataSpace, k: int, k2: int) -> LinearMorphism:
    """Embed ``space^k`` as the first ``k`` blocks of ``space^k2``."""
    if k > k2:
        raise ValueError("padding cannot shrink")
    d = space.dim
    m = la.zeros(d * k2, d * k)
    for i in range(d * k):
        m[i][i] = la.ONE
    return LinearMorphism(_sum_space(space, k), _sum_space(space, k2), la.freeze(m), check=False)


class PowerTheory(Theory):
    """``M -> A(M)^k`` with blockwise morphisms."""

    def __init__(self, base: Theory, k: int):
        if k < 1:
            raise ValueError("power must be positive")
        self.base, self.k = base, k
        self.margin = base.margin
        self.name = f"{base.name}^{k}"

    def obj(self, M):
        return _sum_space(self.base.obj(M), self.k)

    def mor(self, psi):
        return block_power(self.base.mor(psi), self.k)

    def rce_matrix(self, M, delta):
        r = self.base.rce_matrix(M, delta)
        d = self.base.obj(M).dim
        return la.block_diag([r] * self.k, [(d, d)] * self.k)


@dataclass(frozen=True)
class LabelFunctor:
    """Monotone assignment of a positive integer to every spacetime."""

    name: str
    label: Callable[[LatticeSpacetime], int]

    def __call__(self, M: LatticeSpacetime) -> int:
        return self.label(M)

    def check_monotone(self, morphisms: Iterable[SpacetimeMorphism]) -> List[SpacetimeMorphism]:
        return [psi for psi in morphisms if self(psi.source) > self(psi.target)]


def label_threshold(mu0) -> LabelFunctor:
    mu0 = la.Q(mu0)

    def lab(M):
        vals = [M.mu[i] for i in range(M.N * M.T) if (M.carrier >> i) & 1]
        return 2 if vals and max(vals) > mu0 else 1

    return LabelFunctor(f"threshold({la.qstr(mu0)})", lab)


def label_wrap(g: Callable[[int], int] | Dict[int, int] | int) -> LabelFunctor:
    """``g(N)`` on spacetimes whose carrier contains a full row, 1 otherwise."""
    if isinstance(g, int):
        gf = lambda N: g
    elif isinstance(g, dict):
        gf = lambda N: g.get(N, g.get("default", 1))
    else:
        gf = g

    def lab(M):
        return gf(M.N) if M.full_rows else 1

    return LabelFunctor("wrap", lab)


def label_constant(k: int = 1) -> LabelFunctor:
    return LabelFunctor(f"constant({k})", lambda M: k)


class DiagonalTheory(Theory):
    """``M -> A(M)^lambda(M)``; morphisms act blockwise and then pad with zero blocks."""

    def __init__(self, base: Theory, label: LabelFunctor):
        self.base, self.label = base, label
        self.margin = base.margin
        self.name = f"diag({base.name},{label.name})"

    def obj(self, M):
        return _sum_space(self.base.obj(M), self.label(M))

    def mor(self, psi):
        lm, ln = self.label(psi.source), self.label(psi.target)
        if lm > ln:
            raise ValueError("label functor is not monotone on this morphism")
        return pad_matrix(self.base.obj(psi.target), lm, ln) @ block_power(self.base.mor(psi), lm)


# natural transformations ---------------------------------------------------------------

class NaturalTransformation:
    def __init__(self, source: Theory, target: Theory, component: Callable[[LatticeSpacetime], LinearMorphism],
                 name: str = "zeta"):
        self.source, self.target = source, target
        self._component = component
        self.name = name

    def __call__(self, M: LatticeSpacetime) -> LinearMorphism:
        return self._component(M)

    def __repr__(self) -> str:
        return self.name

    def naturality_failures(self, morphisms: Iterable[SpacetimeMorphism]) -> List[SpacetimeMorphism]:
        bad = []
        for psi in morphisms:
            lhs = self.target.mor(psi) @ self(psi.source)
            rhs = self(psi.target) @ self.source.mor(psi)
            if lhs.matrix != rhs.matrix:
                bad.append(psi)
        return bad

    def form_failures(self, objects: Iterable[LatticeSpacetime]) -> List[LatticeSpacetime]:
        bad = []
        for M in objects:
            z = self(M)
            if z.pullback_form() != z.source.form or \
                    la.rank(la.transpose(z.matrix, z.target.dim), z.target.dim) != z.source.dim:
                bad.append(M)
        return bad

    def iso_objects(self, objects: Iterable[LatticeSpacetime]) -> List[LatticeSpacetime]:
        return [M for M in objects if self(M).is_iso()]


def identity_natural(A: Theory) -> NaturalTransformation:
    return NaturalTransformation(A, A, lambda M: LinearMorphism.identity(A.obj(M)), f"id[{A.name}]")


def scalar_natural(A: Theory, s) -> NaturalTransformation:
    s = la.Q(s)

    def comp(M):
        d = A.obj(M).dim
        return LinearMorphism(A.obj(M), A.obj(M), la.freeze(la.scale(la.identity(d), s)), check=False)

    return NaturalTransformation(A, A, comp, f"{la.qstr(s)}*id[{A.name}]")


def initial_natural(A: Theory, trivial: Theory | None = None) -> NaturalTransformation:
    return NaturalTransformation(trivial or TrivialTheory(), A, lambda M: LinearMorphism.initial(A.obj(M)),
                                 f"0[{A.name}]")


def pad(A: Theory, k: int, k2: int) -> NaturalTransformation:
    src = A if k == 1 else PowerTheory(A, k)
    tgt = A if k2 == 1 else PowerTheory(A, k2)
    return NaturalTransformation(src, tgt, lambda M: pad_matrix(A.obj(M), k, k2), f"pad({k},{k2})")


def into_diagonal(A: Theory, D: DiagonalTheory) -> NaturalTransformation:
    """``A -> diag``: the first block at every spacetime."""
    return NaturalTransformation(A, D, lambda M: pad_matrix(A.obj(M), 1, D.label(M)), "A->diag")


def diagonal_into_power(D: DiagonalTheory, ell: int) -> NaturalTransformation:
    P = PowerTheory(D.base, ell)

    def comp(M):
        return pad_matrix(D.base.obj(M), D.label(M), ell)

    return NaturalTransformation(D, P, comp, f"diag->{D.base.name}^{ell}")


def compose_naturals(z2: NaturalTransformation, z1: NaturalTransformation) -> NaturalTransformation:
    return NaturalTransformation(z1.source, z2.target, lambda M: z2(M) @ z1(M), f"{z2.name}o{z1.name}")


@dataclass
class Classification:
    natural: bool
    failures: List[str]
    iso_at: List[int]
    non_iso_at: List[int]

    @property
    def kind(self) -> str:
        if not self.natural:
            return "not-natural"
        if not self.non_iso_at:
            return "iso"
        if self.iso_at:
            return "partial-iso"
        return "neither"


def classify(zeta: NaturalTransformation, objects: Sequence[LatticeSpacetime],
             morphisms: Sequence[SpacetimeMorphism]) -> Classification:
    """Naturality on the probe morphisms and the list of objects with iso components (by index)."""
    bad = [f"{i}" for i, psi in enumerate(morphisms) if psi in zeta.naturality_failures([psi])]
    bad += [f"form@{i}" for i, M in enumerate(objects) if zeta.form_failures([M])]
    iso = [i for i, M in enumerate(objects) if zeta(M).is_iso()]
    non = [i for i in range(len(objects)) if i not in iso]
    return Classification(not bad, bad, iso, non)


# probe families ------------------------------------------------------------------------

@dataclass
class ProbeFamily:
    objects: List[LatticeSpacetime]
    morphisms: List[SpacetimeMorphism]
    tags: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for M in list(self.objects):
            ident = SpacetimeMorphism.identity(M)
            if ident not in self.morphisms:
                self.morphisms.append(ident)
        for psi in self.morphisms:
            for M in (psi.source, psi.target):
                if M not in self.objects:
                    self.objects.append(M)

    def composable_pairs(self) -> List[Tuple[SpacetimeMorphism, SpacetimeMorphism]]:
        return [(f, g) for f in self.morphisms for g in self.morphisms if g.target == f.source]

    def cauchy_morphisms(self) -> List[SpacetimeMorphism]:
        return [psi for psi in self.morphisms if is_cauchy_morphism(psi)]

    def index_of(self, M: LatticeSpacetime) -> int:
        return self.objects.index(M)


def standard_probe_family(N: int = 6, T: int = 12, mu=1, other_mu=None, margin: int = 2) -> ProbeFamily:
    """Full lattice, rotation, slab and diamond inclusions, a wider circle and an interpolation chain.

    ``other_mu`` sets the coupling of the far end of the chain (default ``mu``).
    Every region has a nonempty interior for ``margin``.
    """
    from .lattice import Interval, make_interpolating_chain, multi_diamond, slab

    M = LatticeSpacetime.make(N, T, mu)
    W = LatticeSpacetime.make(N + 2, T, mu)
    M2 = LatticeSpacetime.make(N, T, mu if other_mu is None else other_mu)
    mid = T // 2
    S = slab(M, margin, T - margin)
    D = M.restrict(multi_diamond(M, [Interval(mid, 0, 3)]))
    DS = M.restrict(multi_diamond(M, [Interval(mid, 1, 1)]))
    chain = make_interpolating_chain(M, M2, margin=margin)
    morphisms = [
        SpacetimeMorphism.uniform(M, M, 0, 1),
        SpacetimeMorphism.uniform(S, M),
        SpacetimeMorphism.uniform(D, M),
        SpacetimeMorphism.uniform(D, M, 0, 2),
        SpacetimeMorphism.uniform(D, W, 0, 1),
        SpacetimeMorphism.uniform(DS, S),
        SpacetimeMorphism.uniform(DS, D),
        *chain.morphisms,
    ]
    fam = ProbeFamily([M, S, D, W, M2, DS], morphisms, {})
    fam.tags = {fam.index_of(X): name for X, name in
                ((M, "full"), (S, "slab"), (D, "diamond"), (W, "wide"), (DS, "point"),
                 (chain.I, "interpolant"), (chain.F, "chain-slab"), (chain.P, "chain-slab2"))}
    return fam
