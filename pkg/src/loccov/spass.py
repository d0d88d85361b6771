"""Partial isomorphisms between theories: the diagonal counterexample chain and the meta-check."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from . import linalg as la
from .lattice import LatticeSpacetime, SpacetimeMorphism, is_cauchy_morphism, wedge_regions
from .nets import Caps, bullet_subspace, check_dynamical_locality, dynamical_subspace
from .subobjects import LinearMorphism, Subspace, subobject_iso, subobject_leq
from .theory import (Classification, DiagonalTheory, LabelFunctor, NaturalTransformation, PowerTheory,
                     ProbeFamily, Theory, classify, compose_naturals, diagonal_into_power,
                     identity_natural, initial_natural, into_diagonal, pad, scalar_natural)


def functor_failures(theory: Theory, probes: ProbeFamily) -> List[str]:
    """Identity and composition laws on every composable probe pair."""
    bad = [f"id@{i}" for i, M in enumerate(probes.objects) if not theory.check_identity(M)]
    for f, g in probes.composable_pairs():
        try:
            ok = theory.check_functor(f, g)
        except ValueError:
            ok = False
        if not ok:
            bad.append(f"{probes.morphisms.index(f)}o{probes.morphisms.index(g)}")
    return bad


def timeslice_failures(theory: Theory, morphisms: Sequence[SpacetimeMorphism]) -> List[int]:
    """Indices of Cauchy morphisms not sent to isomorphisms."""
    return [i for i, psi in enumerate(morphisms) if is_cauchy_morphism(psi) and not theory.mor(psi).is_iso()]


def cauchy_iso_transfer_failures(zeta: NaturalTransformation, morphisms: Sequence[SpacetimeMorphism]) -> List[int]:
    """Cauchy ``psi: M -> N`` with ``zeta_M`` iso but ``zeta_N`` not, or the reverse."""
    return [i for i, psi in enumerate(morphisms)
            if is_cauchy_morphism(psi) and zeta(psi.source).is_iso() != zeta(psi.target).is_iso()]


def block_subspace(space, sub: Subspace, k: int) -> Subspace:
    """``sub`` repeated in each of ``k`` blocks of ``space``."""
    d = sub.ambient.dim
    rows = []
    for blk in range(k):
        for v in sub.basis:
            r = [la.ZERO] * (d * k)
            r[blk * d:(blk + 1) * d] = v
            rows.append(r)
    return Subspace.span(space, rows)


@dataclass
class NaturalRecord:
    name: str
    classification: Classification
    cauchy_transfer_failures: List[int]

    def to_json(self) -> dict:
        c = self.classification
        return {"name": self.name, "kind": c.kind, "natural": c.natural, "failures": c.failures,
                "iso_at": c.iso_at, "non_iso_at": c.non_iso_at,
                "cauchy_transfer_failures": self.cauchy_transfer_failures}


@dataclass
class SpassLedger:
    theory: str
    label: str
    ell: int
    labels: List[int]
    dims: List[int]
    diagonal_functor_failures: List[str]
    diagonal_timeslice_failures: List[int]
    naturals: List[NaturalRecord]
    composite_is_pad: bool
    composite_iso_where_nontrivial: List[int]
    violation: bool
    witnesses: Dict[str, List[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"theory": self.theory, "label": self.label, "ell": self.ell, "labels": self.labels,
                "dims": self.dims, "diagonal_functor_failures": self.diagonal_functor_failures,
                "diagonal_timeslice_failures": self.diagonal_timeslice_failures,
                "naturals": [n.to_json() for n in self.naturals], "composite_is_pad": self.composite_is_pad,
                "composite_iso_where_nontrivial": self.composite_iso_where_nontrivial,
                "violation": self.violation, "witnesses": self.witnesses}


def _record(zeta: NaturalTransformation, probes: ProbeFamily) -> NaturalRecord:
    return NaturalRecord(zeta.name, classify(zeta, probes.objects, probes.morphisms),
                         cauchy_iso_transfer_failures(zeta, probes.morphisms))


def spass_counterexample(A: Theory, label: LabelFunctor, probes: ProbeFamily) -> SpassLedger:
    """Build ``A -> diag(A, label) -> A^ell`` and classify each leg on the probes."""
    if label.check_monotone(probes.morphisms):
        raise ValueError("label functor is not monotone on the probe family")
    labels = [label(M) for M in probes.objects]
    if len(set(labels)) < 2:
        raise ValueError("label functor is constant on the probe family")
    ell = max(labels)
    D = DiagonalTheory(A, label)
    z1 = into_diagonal(A, D)
    z2 = diagonal_into_power(D, ell)
    z21 = compose_naturals(z2, z1)
    recs = [_record(z, probes) for z in (z1, z2, z21)]
    padded = pad(A, 1, ell)
    composite_is_pad = all(z21(M).matrix == padded(M).matrix for M in probes.objects)
    dims = [A.obj(M).dim for M in probes.objects]
    comp_iso = [i for i, M in enumerate(probes.objects) if dims[i] and z21(M).is_iso()]
    violation = any(r.classification.kind == "partial-iso" for r in recs)
    witnesses = {r.name: r.classification.iso_at for r in recs if r.classification.kind == "partial-iso"}
    return SpassLedger(A.name, label.name, ell, labels, dims, functor_failures(D, probes),
                       timeslice_failures(D, probes.morphisms), recs, composite_is_pad, comp_iso,
                       violation, witnesses)


def expected_iso_pattern(ledger: SpassLedger) -> Dict[str, bool]:
    """The first leg is iso exactly at label 1, the second exactly at label ``ell`` (nontrivial ``A``)."""
    z1, z2, _ = ledger.naturals
    out = {}
    for rec, want in ((z1, 1), (z2, ledger.ell)):
        exp = [i for i, lab in enumerate(ledger.labels) if lab == want or not ledger.dims[i]]
        out[rec.name] = sorted(rec.classification.iso_at) == exp
    return out


# diagonal dynamics -------------------------------------------------------------------------

@dataclass
class DiagonalDynamics:
    ordinary: bool
    rce_mismatches: List[dict]
    bullet_mismatches: List[dict]
    dynamical_mismatches: List[dict]
    restriction_failures: List[dict]
    proper_kinematic: List[dict]
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.ordinary and not (self.rce_mismatches or self.bullet_mismatches or
                                      self.dynamical_mismatches or self.restriction_failures)

    def to_json(self) -> dict:
        return {"ordinary": self.ordinary, "rce_mismatches": self.rce_mismatches,
                "bullet_mismatches": self.bullet_mismatches, "dynamical_mismatches": self.dynamical_mismatches,
                "restriction_failures": self.restriction_failures, "proper_kinematic": self.proper_kinematic,
                "checked": self.checked}


def wedge_labels_constant(label: LabelFunctor, M: LatticeSpacetime, delta: Dict, margin: int) -> bool:
    sup = M.mask([p for p, v in delta.items() if v])
    plus, minus = wedge_regions(M, sup, margin)
    return label(M.restrict(plus)) == label(M) == label(M.restrict(minus))


def diagonal_dynamics_checks(A: Theory, label: LabelFunctor, spacetimes: Sequence[LatticeSpacetime],
                             regions: Dict[int, Sequence], sites_per_spacetime: int = 4,
                             caps: Caps = Caps()) -> DiagonalDynamics:
    """rce, bullet and dynamical subspaces of the diagonal against ``label(M)`` copies of ``A``'s.

    ``regions`` maps an index into ``spacetimes`` to the regions ``O`` probed there.
    Regions where the diagonal's kinematic subspace is strictly below its dynamical
    one are collected in ``proper_kinematic``.
    """
    D = DiagonalTheory(A, label)
    z1 = into_diagonal(A, D)
    out = DiagonalDynamics(True, [], [], [], [], [])
    for idx, M in enumerate(spacetimes):
        k = label(M)
        sites = A.perturbation_sites(M)
        step = max(1, len(sites) // sites_per_spacetime)
        for p in sites[::step][:sites_per_spacetime]:
            delta = {tuple(p): 1}
            if not wedge_labels_constant(label, M, delta, A.margin):
                out.ordinary = False
                continue
            rd = D.rce_matrix(M, delta)
            ra = A.rce_matrix(M, delta)
            d = A.obj(M).dim
            out.checked += 1
            if la.freeze(rd) != la.freeze(la.block_diag([ra] * k, [(d, d)] * k)):
                out.rce_mismatches.append({"spacetime": idx, "site": list(p)})
        for O in regions.get(idx, ()):
            omask = M.mask(O)
            bd = bullet_subspace(D, M, omask, caps).value
            ba = bullet_subspace(A, M, omask, caps).value
            out.checked += 1
            if not subobject_iso(bd, block_subspace(D.obj(M), ba, k)):
                out.bullet_mismatches.append({"spacetime": idx, "region": M.points(omask)})
            if not subobject_leq(z1(M).image_of(ba), bd):
                out.restriction_failures.append({"spacetime": idx, "region": M.points(omask)})
            dd = dynamical_subspace(D, M, omask, caps).value
            da = dynamical_subspace(A, M, omask, caps).value
            if not subobject_iso(dd, block_subspace(D.obj(M), da, k)):
                out.dynamical_mismatches.append({"spacetime": idx, "region": M.points(omask)})
            kd = D.kinematic(M, omask)
            if subobject_leq(kd, dd) and kd.dim < dd.dim:
                out.proper_kinematic.append({"spacetime": idx, "region": M.points(omask),
                                             "kin_dim": kd.dim, "dyn_dim": dd.dim})
    return out


def shift_natural(A: Theory, k: int) -> NaturalTransformation:
    """The block shift ``(a1..ak) -> (0, a1..a(k-1))`` on ``A^k``.

    A finite stand-in for the infinite right shift: it is natural, but a legal
    (injective) component only where ``A(M)`` is zero.
    """
    P = PowerTheory(A, k)

    def comp(M):
        d = A.obj(M).dim
        m = la.zeros(d * k, d * k)
        for i in range(d * (k - 1)):
            m[d + i][i] = la.ONE
        return LinearMorphism(P.obj(M), P.obj(M), la.freeze(m), check=False)

    return NaturalTransformation(P, P, comp, f"shift^{k}")


def shift_demo(A: Theory, k: int, probes: ProbeFamily) -> Dict[str, list]:
    z = shift_natural(A, k)
    nat = not z.naturality_failures(probes.morphisms)
    injective = [i for i, M in enumerate(probes.objects)
                 if la.rank(la.transpose(z(M).matrix, z(M).target.dim), z(M).target.dim) == z(M).source.dim]
    return {"natural": [nat], "injective_at": injective,
            "trivial_at": [i for i, M in enumerate(probes.objects) if not A.obj(M).dim]}


# meta-check -----------------------------------------------------------------------------

def candidate_naturals(A: Theory, B: Theory, trivial_names: Sequence[str] = ("trivial",)) -> List[NaturalTransformation]:
    """Zero maps out of trivial theories and scalar multiples of identities.

    Scalars other than ``1`` and ``-1`` do not preserve a nonzero form; they stay
    in the list so that the classifier visibly discards them.
    """
    out = []
    if A.name in trivial_names:
        out.append(initial_natural(B, A))
    if A is B:
        out.append(identity_natural(A))
        if A.name not in trivial_names:
            out.extend(scalar_natural(A, s) for s in (-1, 2, "1/2"))
    return out


@dataclass
class MetaCheck:
    theories: List[str]
    locality: Dict[str, List[dict]]
    classifications: List[dict]
    violations: List[str]

    @property
    def locally_dynamical(self) -> bool:
        return all(v["holds"] for recs in self.locality.values() for v in recs)

    @property
    def ok(self) -> bool:
        return self.locally_dynamical and not self.violations

    def to_json(self) -> dict:
        return {"theories": self.theories, "locality": self.locality, "classifications": self.classifications,
                "violations": self.violations, "locally_dynamical": self.locally_dynamical}


def spass_meta_check(theories: Sequence[Theory], probes: ProbeFamily, regions: Dict[int, Sequence],
                     caps: Caps = Caps()) -> MetaCheck:
    """Every partial isomorphism between dynamically local theories must be an isomorphism."""
    locality = {}
    for th in theories:
        recs = []
        for idx, Os in regions.items():
            M = probes.objects[idx]
            for O in Os:
                v = check_dynamical_locality(th, M, O, caps)
                recs.append({"object": idx, "region": M.points(M.mask(O)), "holds": v.holds,
                             "kin_dim": v.kinematic.dim, "dyn_dim": v.dynamical.dim})
        locality[th.name] = recs
    cls, viol = [], []
    for A, B in itertools.product(theories, repeat=2):
        for z in candidate_naturals(A, B):
            c = classify(z, probes.objects, probes.morphisms)
            cls.append({"name": z.name, "source": A.name, "target": B.name, "kind": c.kind,
                        "iso_at": c.iso_at, "non_iso_at": c.non_iso_at})
            if c.kind == "partial-iso":
                viol.append(z.name)
    return MetaCheck([t.name for t in theories], locality, cls, viol)
