"""Named verification suites assembled from the library checks."""
from __future__ import annotations

import itertools
import json
import os
import random
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import linalg as la
from .causal_laws import LAWS as CAUSAL_LAWS
from .causal_laws import (check_complements, check_morphisms, check_multi_diamonds, check_nested,
                          check_row_equality, new_tallies, region_spacetimes, sample_sets, verify_region)
from .kg import KGTheory, causal_propagator, data_of, omega, pairing
from .lattice import (Interval, LatticeSpacetime, SpacetimeMorphism, diamond_bases, enumerate_Kb,
                      is_cauchy_morphism, multi_diamond, probe_morphisms, spacetime_from_dict, NotAMultiDiamond)
from .nets import (Caps, additivity_check, base_interior, bullet_subspace, check_dynamical_locality,
                   check_extended_locality, dynamical_subspace, outer_regular_check, refined_union,
                   vanishing_oracle)
from .rce import (admissible_pairs, intertwine_check, omega_preserved, random_perturbation, rce_covariance_check,
                  rce_generator, relabeling_perturbation)
from .report import CheckRecord, Report
from .spass import (diagonal_dynamics_checks, expected_iso_pattern, functor_failures, shift_demo,
                    spass_counterexample, spass_meta_check, timeslice_failures)
from .subobject_laws import LAWS as SUBOBJECT_LAWS
from .subobject_laws import run_law
from .subobjects import intersect, subobject_iso, subobject_leq, union
from .theory import (PowerTheory, TrivialTheory, identity_natural, label_constant, label_threshold, label_wrap,
                     pad, scalar_natural, standard_probe_family, NaturalTransformation)

SUITE_NAMES = ("causal-appendix", "subobject-laws", "kg-functor", "rce-laws", "nets", "dynlocal", "spass-demo")


class ConfigError(ValueError):
    pass


DEFAULTS: Dict[str, Any] = {
    "seed": 0,
    "theory": {"kind": "kg", "xi": "1", "margin": 2},
    "caps": {"max_width": 3, "max_components": 2, "rows": None, "audit_rounds": 2, "connected_only": False,
             "slack": 1},
    "causal": {"N": [4, 8], "T": [6, 10], "random_sets": 40, "regions_per_lattice": 2},
    "laws": {"instances": 1000, "max_dim": 12},
    "probes": {"N": 6, "T": 12, "mu": "1", "other_mu": "2"},
    "kg": {"sigma_N": 8, "sigma_T": 12, "sample_pairs": 60},
    "rce": {"N": 8, "T": 12, "mu": "1", "perturbations": 50, "max_width": 3},
    "nets": {"N": 7, "T": 12, "mu": "1"},
    "dynlocal": {"N": [5, 6, 7], "T": 12, "mu": "1", "max_width": 3, "multi": True, "rows": "perturbation",
                 "compare_N": [8]},
    "massless": {"N": [5, 6, 7], "T": 12, "mu": "0", "max_width": 3, "rows": "perturbation"},
    "spass": {"N": 6, "T": 12, "mu": "1", "g": 2, "threshold": "1", "hot_mu": "2"},
}


def _merge(base: dict, over: dict) -> dict:
    out = json.loads(json.dumps(base))
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _float_path(obj, path: str = "config") -> Optional[str]:
    if isinstance(obj, float):
        return path
    if isinstance(obj, dict):
        items = obj.items()
    elif isinstance(obj, list):
        items = enumerate(obj)
    else:
        return None
    for k, v in items:
        hit = _float_path(v, f"{path}.{k}")
        if hit:
            return hit
    return None


@dataclass
class ExperimentConfig:
    raw: Dict[str, Any]
    base_dir: str = "."
    spacetimes: List[LatticeSpacetime] = field(default_factory=list)

    @classmethod
    def from_dict(cls, d: dict, base_dir: str = ".") -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(d) - set(DEFAULTS) - {"spacetime", "spacetimes", "suite"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        raw = _merge(DEFAULTS, d)
        caps = raw["caps"]
        for k in ("max_width", "max_components"):
            if not isinstance(caps[k], int) or caps[k] < 1:
                raise ConfigError(f"caps.{k} must be a positive integer")
        if not isinstance(caps["slack"], int) or caps["slack"] < 0:
            raise ConfigError("caps.slack must be a nonnegative integer")
        if not isinstance(caps["audit_rounds"], int) or caps["audit_rounds"] < 0:
            raise ConfigError("caps.audit_rounds must be a nonnegative integer")
        if not isinstance(raw["seed"], int):
            raise ConfigError("seed must be an integer")
        if raw["theory"].get("kind") not in ("kg", "trivial"):
            raise ConfigError("theory.kind must be 'kg' or 'trivial'")
        bad = _float_path(d)
        if bad:
            raise ConfigError(f"floating point literal at {bad}; use rational strings such as \"1/2\"")
        cfg = cls(raw, base_dir)
        specs = list(d.get("spacetimes", []))
        if "spacetime" in d:
            specs.insert(0, d["spacetime"])
        for s in specs:
            if isinstance(s, str):
                path = s if os.path.isabs(s) else os.path.join(base_dir, s)
                if not os.path.exists(path):
                    raise ConfigError(f"referenced file {s} does not exist")
                with open(path) as fh:
                    s = json.load(fh)
            try:
                cfg.spacetimes.append(spacetime_from_dict(s))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"malformed spacetime: {exc}") from exc
        return cfg

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(d, os.path.dirname(os.path.abspath(path)))

    def with_seed(self, seed: Optional[int]) -> "ExperimentConfig":
        if seed is None:
            return self
        raw = dict(self.raw, seed=seed)
        return ExperimentConfig(raw, self.base_dir, self.spacetimes)

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def caps(self) -> Caps:
        c = self.raw["caps"]
        return Caps(c["max_width"], c["max_components"], None if c["rows"] is None else tuple(c["rows"]),
                    c["audit_rounds"], c["connected_only"], c["slack"])

    def theory(self, xi=None):
        t = self.raw["theory"]
        if t["kind"] == "trivial":
            return TrivialTheory()
        return KGTheory(t["xi"] if xi is None else xi, t["margin"])


@dataclass
class Outcome:
    ok: bool
    witness: Any = None
    data: Dict[str, Any] = field(default_factory=dict)
    dims: List[Dict[str, Any]] = field(default_factory=list)
    flagged: bool = False


@dataclass
class CheckSpec:
    id: str
    anchor: str
    fn: Callable[[], Outcome]


def _run(spec: CheckSpec) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        out = spec.fn()
    except Exception as exc:  # a crashing check is a failing check
        out = Outcome(False, {"error": f"{type(exc).__name__}: {exc}"})
    dt = time.perf_counter() - t0
    status = "flagged" if out.flagged else ("pass" if out.ok else "fail")
    witness = out.witness
    if status == "fail" and witness is None:
        witness = {"data": out.data} if out.data else {"reason": "check returned false"}
    return CheckRecord(spec.id, spec.anchor, status, witness, dt, out.data, out.dims)


def _tag(M: LatticeSpacetime) -> str:
    return f"N{M.N}T{M.T}mu{la.qstr(max(M.mu))}" if M.is_full else f"N{M.N}T{M.T}region{M.carrier:x}"


def _pts(M: LatticeSpacetime, mask: int) -> list:
    return [[p.t, p.x] for p in M.points(mask)]


# causal-appendix -----------------------------------------------------------------------

def _causal_lattices(cfg: ExperimentConfig) -> List[tuple]:
    c = cfg.raw["causal"]
    return [(N, T) for N in range(c["N"][0], c["N"][1] + 1) for T in range(c["T"][0], c["T"][1] + 1)]


def _causal_tallies(cfg: ExperimentConfig) -> dict:
    c = cfg.raw["causal"]
    tallies = new_tallies()
    for N, T in _causal_lattices(cfg):
        rng = random.Random(f"full:{N}:{T}:{cfg.seed}")
        M = LatticeSpacetime.make(N, T)
        check_complements(M, sample_sets(M, rng, c["random_sets"]), tallies)
        check_row_equality(M, tallies)
        check_multi_diamonds(M, rng, tallies)
        check_nested(M, rng, tallies)
        check_morphisms(probe_morphisms(N, T), tallies)
        rrng = random.Random(f"regions:{N}:{T}:{cfg.seed}")
        regs = region_spacetimes(N, T, rrng)
        for R in rrng.sample(regs, min(c["regions_per_lattice"], len(regs))):
            verify_region(R, rrng, tallies)
    for S in cfg.spacetimes:
        rng = random.Random(f"config:{S.key()}:{cfg.seed}")
        check_complements(S, sample_sets(S, rng, c["random_sets"]), tallies)
    return tallies


CAUSAL_ANCHORS = {
    "perp_idempotent": "lem:perp_of_compacts",
    "contained_in_perpperp": "lem:Jofopenisopen",
    "perpperp_convex": "lem:perp+prime",
    "multi_diamond_complete": "lem:causal_completeness",
    "development_in_perpperp": "lem:domain_of_dependence_and_perpperp",
    "development_equals_perpperp_on_rows": "lem:domain_of_dependence_and_perpperp",
    "exhaustion": "lem:exhaustion",
    "embedding_preserves_perpperp": "lem:psi_perpperp",
    "nested_complements": "lem:perp_of_reg_int",
    "full_row_source_is_cauchy": "prop:Cauchy",
    "cauchy_composition": "lem:Cauchy_comp",
}


def causal_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    cache: Dict[str, Any] = {}

    def tallies():
        if "t" not in cache:
            t0 = time.perf_counter()
            cache["t"] = _causal_tallies(cfg)
            cache["seconds"] = time.perf_counter() - t0
        return cache["t"]

    def law(name):
        def fn():
            t = tallies()[name]
            return Outcome(t.ok and t.checked > 0, t.witness or None,
                           {"checked": t.checked, "failures": t.failures})
        return fn

    specs = [CheckSpec(f"causal.{name}", CAUSAL_ANCHORS[name], law(name)) for name in CAUSAL_LAWS]

    def chain():
        from .lattice import make_interpolating_chain
        ok, wit = True, []
        for N in (5, 6):
            M = LatticeSpacetime.make(N, 10, 1)
            M2 = LatticeSpacetime.make(N, 8, lambda t, x: 1 + (x % 2))
            ch = make_interpolating_chain(M, M2)
            for i, psi in enumerate(ch.morphisms):
                if not is_cauchy_morphism(psi):
                    ok = False
                    wit.append({"N": N, "morphism": i})
        return Outcome(ok, wit or None, {"chains": 2})

    specs.append(CheckSpec("causal.interpolation_chain", "prop:Cauchy_chain", chain))
    return specs


# subobject-laws ------------------------------------------------------------------------

LAW_ANCHORS = {"fubini": "eq:Fubini", "union_refine": "lem:union_refine", "union_invariance": "lem:union_invariance",
               "meet_reparametrization": "lem:intersections", "meet_mono": "lem:intersections",
               "union_universal": "lem:union_refine"}


def subobject_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    c = cfg.raw["laws"]

    def law(name):
        def fn():
            r = run_law(name, instances=c["instances"], max_dim=c["max_dim"], seed=cfg.seed)
            return Outcome(r.ok, r.witness, {"instances": r.instances, "failures": r.failures})
        return fn

    return [CheckSpec(f"subobject.{name}", LAW_ANCHORS.get(name, "lem:intersections"), law(name))
            for name in SUBOBJECT_LAWS]


# kg-functor ----------------------------------------------------------------------------

def _probes(cfg: ExperimentConfig, mu=None, other=None):
    p = cfg.raw["probes"]
    return standard_probe_family(p["N"], p["T"], p["mu"] if mu is None else mu,
                                 p["other_mu"] if other is None else other, cfg.raw["theory"]["margin"])


def _region_family(M: LatticeSpacetime, max_width: int = 3) -> List[int]:
    """Diamonds on every full row and width up to ``max_width``, plus slabs."""
    out = []
    for iv in diamond_bases(M, max_width, M.full_rows):
        out.append(multi_diamond(M, [iv]).mask)
    for lo in range(0, M.T - 2, 3):
        out.append(M.rows_mask(range(lo, lo + 3)))
    return out


def kg_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    A = cfg.theory()
    c = cfg.raw["kg"]

    def functor():
        fam = _probes(cfg)
        bad = functor_failures(A, fam)
        return Outcome(not bad, bad or None, {"objects": len(fam.objects), "pairs": len(fam.composable_pairs())})

    def timeslice():
        fam = _probes(cfg)
        bad, n = [], 0
        for i, psi in enumerate(fam.morphisms):
            if is_cauchy_morphism(psi):
                n += 1
                f = A.mor(psi)
                full = isinstance(A, KGTheory) and bool(psi.target.cauchy_pairs())
                if not f.is_iso() or (full and f.target.dim != 2 * psi.target.N):
                    bad.append(i)
        return Outcome(not bad and n > 0, bad or None, {"cauchy_morphisms": n})

    def isotony():
        fam = _probes(cfg)
        M = fam.objects[0]
        bad, n = [], 0
        for t in M.full_rows:
            for a in range(M.N):
                chain = [Interval(t, a, w) for w in range(1, M.N)]
                masks = [multi_diamond(M, [iv]).mask for iv in chain]
                kins = [A.kinematic(M, m) for m in masks]
                for (m1, k1), (m2, k2) in zip(zip(masks, kins), zip(masks[1:], kins[1:])):
                    n += 1
                    if not subobject_leq(k1, k2):
                        bad.append(_pts(M, m1))
        return Outcome(not bad, bad[:3] or None, {"pairs": n})

    def kin_routes():
        fam = _probes(cfg)
        M = fam.objects[0]
        bad = [_pts(M, m) for m in _region_family(M) if not subobject_iso(A.kinematic(M, m), A.kinematic_direct(M, m))]
        return Outcome(not bad, bad[:3] or None, {"regions": len(_region_family(M))})

    def covariance():
        fam = _probes(cfg)
        bad, n = [], 0
        for i, psi in enumerate(fam.morphisms):
            S, Tg = psi.source, psi.target
            f = A.mor(psi)
            regions = [S.carrier] + [m for m in _region_family(S.ambient(), 2) if m & ~S.carrier == 0]
            for m in regions:
                if not m or not S.is_convex(m):
                    continue
                n += 1
                lhs = f.image_of(A.kinematic(S, m))
                rhs = A.kinematic(Tg, psi.map_mask(m))
                if not subobject_iso(lhs, rhs):
                    bad.append({"morphism": i, "region": _pts(S, m)})
        return Outcome(not bad, bad[:3] or None, {"instances": n})

    def sigma_disjoint():
        N, T = c["sigma_N"], c["sigma_T"]
        M = LatticeSpacetime.make(N, T, cfg.raw["probes"]["mu"])
        xi = A.xi if isinstance(A, KGTheory) else 1
        pts = [p for p in M.points() if 1 <= p.t <= T - 2]
        props = {q: causal_propagator(M, {q: 1}, xi) for q in pts}
        bad, n = [], 0
        for p, q in itertools.permutations(pts, 2):
            if (M.hull(1 << M.index(q)) >> M.index(p)) & 1:
                continue
            n += 1
            if props[q][p]:
                bad.append([list(p), list(q)])
        rng = random.Random(f"sigma:{cfg.seed}")
        m = 0
        while m < c["sample_pairs"]:
            a = rng.sample(pts, 2)
            amask = M.mask(a)
            rest = [q for q in pts if not (M.hull(amask) >> M.index(q)) & 1]
            if len(rest) < 2:
                continue
            b = rng.sample(rest, 2)
            f = {p: la.Q(rng.randint(-3, 3) or 1) for p in a}
            g = {q: la.Q(f"{rng.randint(-3, 3) or 1}/{rng.randint(1, 3)}") for q in b}
            m += 1
            if pairing(M, f, g, xi):
                bad.append({"f": [list(p) for p in a], "g": [list(q) for q in b]})
        return Outcome(not bad, bad[:3] or None, {"point_pairs": n, "sampled_supports": m})

    def propagator_routes():
        fam = _probes(cfg)
        M = fam.objects[0]
        dyn = A.dyn(M)
        bad = []
        for p in M.points():
            if not 1 <= p.t <= M.T - 2:
                continue
            u = causal_propagator(M, {p: 1}, A.xi)
            if data_of(u, 0) != dyn.generator(p):
                bad.append(list(p))
        return Outcome(not bad, bad[:3] or None)

    def sigma_omega():
        fam = _probes(cfg)
        M = fam.objects[0]
        rng = random.Random(f"sigma-omega:{cfg.seed}")
        pts = [p for p in M.points() if 1 <= p.t <= M.T - 2]
        bad = []
        for _ in range(c["sample_pairs"]):
            f = {p: la.Q(rng.randint(-2, 2) or 1) for p in rng.sample(pts, 3)}
            g = {p: la.Q(f"{rng.randint(-2, 2) or 1}/{rng.randint(1, 2)}") for p in rng.sample(pts, 3)}
            s = pairing(M, f, g, A.xi)
            ef = data_of(causal_propagator(M, f, A.xi))
            eg = data_of(causal_propagator(M, g, A.xi))
            if s != omega(M.N, ef, eg) or s != -pairing(M, g, f, A.xi):
                bad.append({"f": [list(p) for p in f], "g": [list(p) for p in g]})
        return Outcome(not bad, bad[:3] or None, {"samples": c["sample_pairs"]})

    specs = [
        CheckSpec("kg.functor_laws", "sect:LCT", functor),
        CheckSpec("kg.timeslice", "prop:Cauchy", timeslice),
        CheckSpec("kg.kinematic_isotony", "eq:isotony", isotony),
        CheckSpec("kg.kinematic_covariance", "eq:kinematic_covariance", covariance),
    ]
    if isinstance(A, KGTheory):
        specs += [
            CheckSpec("kg.kinematic_routes", "eq:isotony", kin_routes),
            CheckSpec("kg.sigma_causal_disjoint", "sect:LCT", sigma_disjoint),
            CheckSpec("kg.propagator_routes", "sect:LCT", propagator_routes),
            CheckSpec("kg.sigma_symplectic", "sect:LCT", sigma_omega),
        ]
    return specs


# rce-laws ------------------------------------------------------------------------------

def _rce_host(cfg: ExperimentConfig) -> LatticeSpacetime:
    r = cfg.raw["rce"]
    return LatticeSpacetime.make(r["N"], r["T"], r["mu"])


def rce_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    A = cfg.theory()
    r = cfg.raw["rce"]
    if not isinstance(A, KGTheory):
        return []

    def independence():
        M = _rce_host(cfg)
        sites = A.perturbation_sites(M)
        rng = random.Random(f"independence:{cfg.seed}")
        bad, n, om = [], 0, 0
        while n < r["perturbations"]:
            h = random_perturbation(rng, M, sites, 3, A)
            ups, downs = admissible_pairs(M, h, A)
            if len(ups) < 2 and len(downs) < 2:
                continue
            pairs = [(ups[-1], downs[0]), (ups[0], downs[-1])]
            mats = [la.freeze(A.rce_matrix(M, h, rows=pr)) for pr in pairs]
            wedge = la.freeze(A.wedge_rce(M, h)) if n < 10 else mats[0]
            n += 1
            om += sum(omega_preserved(m, M.N) for m in mats)
            if len(set(mats)) != 1 or wedge != mats[0]:
                bad.append({"h": [[list(p), la.qstr(v)] for p, v in h.items()], "pairs": pairs})
        return Outcome(not bad and om == 2 * n, bad[:3] or None, {"perturbations": n, "omega_checked": om})

    def locality():
        M = _rce_host(cfg)
        sites = A.perturbation_sites(M)
        cache: Dict[tuple, la.Matrix] = {}

        def R(hs):
            if hs not in cache:
                cache[hs] = A.rce_matrix(M, {p: 1 for p in hs})
            return cache[hs]

        bad, n, om = [], 0, 0
        diamonds = [multi_diamond(M, [iv]).mask for iv in diamond_bases(M, r["max_width"], M.full_rows)]
        for D in diamonds:
            kin = A.kinematic(M, D)
            if not kin.dim:
                continue
            perp = M.perp(D)
            inside = [tuple(p) for p in sites if (perp >> M.index(p)) & 1]
            supports = [(p,) for p in inside] + list(itertools.combinations(inside, 2))
            for hs in supports:
                if not A.admissible(M, list(hs)):
                    continue
                n += 1
                mat = R(hs)
                if any(la.matvec(mat, list(v)) != list(v) for v in kin.basis):
                    bad.append({"diamond": _pts(M, D), "h": [list(p) for p in hs]})
        om = sum(omega_preserved(m, M.N) for m in cache.values())
        return Outcome(not bad and om == len(cache), bad[:3] or None,
                       {"diamonds": len(diamonds), "instances": n, "rce_computed": len(cache), "omega_checked": om})

    def covariance():
        p = cfg.raw["probes"]
        morphisms = list(_probes(cfg).morphisms) + probe_morphisms(p["N"], p["T"], p["mu"])
        rng = random.Random(f"covariance:{cfg.seed}")
        bad, n, kinds = [], 0, set()
        for i, psi in enumerate(morphisms):
            S, Tg = psi.source, psi.target
            try:
                A.mor(psi)
            except ValueError:
                continue
            sites = [q for q in A.perturbation_sites(S) if A.admissible(Tg, [psi(q)])]
            if not sites:
                continue
            for _ in range(3):
                h = random_perturbation(rng, S, sites, 2, A)
                if not A.admissible(Tg, [psi(q) for q in h]):
                    continue
                n += 1
                kinds.add("rotation" if S == Tg else ("embedding" if S.is_full else "inclusion"))
                if not rce_covariance_check(psi, h, A):
                    bad.append({"morphism": i, "h": [[list(q), la.qstr(v)] for q, v in h.items()]})
        return Outcome(not bad and n > 0, bad[:3] or None, {"instances": n, "kinds": sorted(kinds)})

    def symplectic():
        M = _rce_host(cfg)
        sites = A.perturbation_sites(M)
        bad = [list(q) for q in sites if not omega_preserved(A.site_rce(M, q), M.N)]
        rng = random.Random(f"symplectic:{cfg.seed}")
        for _ in range(r["perturbations"]):
            h = random_perturbation(rng, M, sites, 3, A)
            if not omega_preserved(A.rce_matrix(M, h), M.N):
                bad.append([[list(q), la.qstr(v)] for q, v in h.items()])
        return Outcome(not bad, bad[:3] or None, {"sites": len(sites), "random": r["perturbations"]})

    def relabeling():
        bad, n = [], 0
        M0 = _rce_host(cfg)
        hosts = [M0, LatticeSpacetime.make(M0.N, M0.T, lambda t, x: 1 + (x % 2))]
        for M in hosts:
            window = A.perturbation_sites(M)
            for b in range(M.N):
                psi = SpacetimeMorphism.uniform(M, M, 0, b, check=False)
                try:
                    psi.validate()
                except ValueError:
                    continue
                h = relabeling_perturbation(M, psi, window)
                n += 1
                if not la.freeze(A.rce_matrix(M, h)) == la.freeze(la.identity(A.obj(M).dim)):
                    bad.append({"rotation": b})
        return Outcome(not bad and n > 0, bad or None, {"automorphisms": n})

    def generator():
        M = _rce_host(cfg)
        bad = []
        sites = A.perturbation_sites(M)
        for q in sites:
            g = la.freeze(rce_generator(M, q, A))
            closed = la.sub(A.site_rce_closed_form(M, q), la.identity(2 * M.N))
            if g != la.freeze(closed) or la.freeze(A.site_rce(M, q)) != la.freeze(A.site_rce_closed_form(M, q)):
                bad.append(list(q))
        return Outcome(not bad, bad[:3] or None, {"sites": len(sites)})

    def intertwine():
        M = _rce_host(cfg)
        sites = A.perturbation_sites(M)
        rng = random.Random(f"intertwine:{cfg.seed}")
        bad = []
        for z in (identity_natural(A), scalar_natural(A, -1)):
            for _ in range(5):
                h = random_perturbation(rng, M, sites, 2, A)
                if not intertwine_check(z, M, h):
                    bad.append(z.name)
        return Outcome(not bad, bad or None)

    def coupling_demo():
        fam = _probes(cfg, mu=0, other=0)
        t = cfg.raw["theory"]
        A1, A2 = KGTheory(1, t["margin"]), KGTheory(2, t["margin"])
        z = NaturalTransformation(A1, A2, lambda M: identity_natural(A1)(M), "id:KG(1)->KG(2)")
        natural = not z.naturality_failures(fam.morphisms)
        M = fam.objects[0]
        q = A1.perturbation_sites(M)[0]
        intertwines = intertwine_check(z, M, {tuple(q): 1})
        return Outcome(natural and not intertwines, None if natural and not intertwines else
                       {"natural": natural, "intertwines": intertwines},
                       {"natural": natural, "intertwines": intertwines, "site": list(q)})

    return [
        CheckSpec("rce.independence", "prop:BFV_contact", independence),
        CheckSpec("rce.locality", "prop:rce_locality", locality),
        CheckSpec("rce.covariance", "prop:rce_covariance", covariance),
        CheckSpec("rce.symplectic", "eq:T_intertwine", symplectic),
        CheckSpec("rce.relabeling_identity", "prop:rce_covariance", relabeling),
        CheckSpec("rce.generator_closed_form", "lem:geom1", generator),
        CheckSpec("rce.intertwine", "prop:rce_intertwine", intertwine),
        CheckSpec("rce.coupling_demo", "eq:intertwine_hypothesis", coupling_demo),
    ]


# nets ----------------------------------------------------------------------------------

def _nets_host(cfg: ExperimentConfig) -> LatticeSpacetime:
    n = cfg.raw["nets"]
    return LatticeSpacetime.make(n["N"], n["T"], n["mu"])


def _mid_diamonds(M: LatticeSpacetime, widths: Sequence[int], rows: Sequence[int] | None = None) -> List[Interval]:
    rows = rows if rows is not None else [M.T // 2 - 1, M.T // 2]
    return [Interval(t, a, w) for t in rows for w in widths if w < M.N for a in range(M.N)]


def nets_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    A = cfg.theory()
    caps = cfg.caps
    if not isinstance(A, KGTheory):
        return []

    def oracle():
        M = _nets_host(cfg)
        Ks = enumerate_Kb(M, M.carrier, caps.max_width, caps.rows, caps.max_components, slack=caps.slack)
        bad = [K.points[:3] for K in Ks
               if not subobject_iso(bullet_subspace(A, M, K, caps, cfg.seed).value, vanishing_oracle(A, M, K))]
        flagged = any(bullet_subspace(A, M, K, caps, cfg.seed).flagged for K in Ks)
        return Outcome(not bad, bad[:3] or None, {"bases": len(Ks)}, flagged=flagged)

    def perpperp():
        M = _nets_host(cfg)
        bad, n = [], 0
        for iv in _mid_diamonds(M, (1, 2, 3)):
            for k in (iv.mask(M), 1 << M.index((iv.t, iv.start))):
                n += 1
                if not subobject_iso(bullet_subspace(A, M, k, caps).value,
                                     bullet_subspace(A, M, M.perp(M.perp(k)), caps).value):
                    bad.append(_pts(M, k))
        return Outcome(not bad, bad[:3] or None, {"instances": n})

    def refined():
        M = _nets_host(cfg)
        bad, n = [], 0
        for iv in _mid_diamonds(M, (1, 2, 3, 4)):
            D = multi_diamond(M, [iv]).mask
            n += 1
            if not subobject_iso(dynamical_subspace(A, M, D, caps).value, refined_union(A, M, iv.mask(M), caps)):
                bad.append(_pts(M, iv.mask(M)))
        return Outcome(not bad, bad[:3] or None, {"diamonds": n})

    def isotony():
        M = _nets_host(cfg)
        space = A.obj(M)
        empty = bullet_subspace(A, M, 0, caps).value
        bad, n = [], 0
        ivs = _mid_diamonds(M, (1, 2, 3), rows=[M.T // 2])
        for iv in ivs:
            for other in ivs:
                m1, m2 = multi_diamond(M, [iv]).mask, multi_diamond(M, [other]).mask
                d1, d2 = dynamical_subspace(A, M, m1, caps).value, dynamical_subspace(A, M, m2, caps).value
                n += 1
                if m1 & ~m2 == 0 and not subobject_leq(d1, d2):
                    bad.append({"sub": _pts(M, m1), "sup": _pts(M, m2)})
                if M.is_convex(m1 | m2):
                    du = dynamical_subspace(A, M, m1 | m2, caps).value
                    if not subobject_leq(union([d1, d2], space), du):
                        bad.append({"join": [_pts(M, m1), _pts(M, m2)]})
                if m1 & m2 and M.is_convex(m1 & m2):
                    di = dynamical_subspace(A, M, m1 & m2, caps).value
                    if not subobject_leq(di, intersect([d1, d2], space)):
                        bad.append({"meet": [_pts(M, m1), _pts(M, m2)]})
            if not subobject_leq(empty, dynamical_subspace(A, M, multi_diamond(M, [iv]).mask, caps).value):
                bad.append({"empty": _pts(M, iv.mask(M))})
        return Outcome(not bad, bad[:3] or None, {"pairs": n})

    def automorphism():
        M = _nets_host(cfg)
        bad, n = [], 0
        for b in (1, 2):
            psi = SpacetimeMorphism.uniform(M, M, 0, b)
            f = A.mor(psi)
            for iv in _mid_diamonds(M, (2, 3, 4), rows=[M.T // 2]):
                m = multi_diamond(M, [iv]).mask
                n += 1
                if not subobject_iso(f.image_of(dynamical_subspace(A, M, m, caps).value),
                                     dynamical_subspace(A, M, psi.map_mask(m), caps).value):
                    bad.append({"rotation": b, "region": _pts(M, m)})
        return Outcome(not bad, bad[:3] or None, {"instances": n})

    def hull():
        M = _nets_host(cfg)
        bad = []
        for iv in _mid_diamonds(M, (1, 2, 3, 4), rows=[M.T // 2]):
            B = iv.mask(M)
            D = multi_diamond(M, [iv]).mask
            if not subobject_iso(dynamical_subspace(A, M, B, caps).value, dynamical_subspace(A, M, D, caps).value):
                bad.append(_pts(M, B))
        return Outcome(not bad, bad[:3] or None)

    def rce_fixes_dyn():
        M = _nets_host(cfg)
        sites = A.perturbation_sites(M)
        rng = random.Random(f"fixes:{cfg.seed}")
        bad, n = [], 0
        for iv in _mid_diamonds(M, (3, 4), rows=[M.T // 2]):
            D = multi_diamond(M, [iv]).mask
            dyn = dynamical_subspace(A, M, D, caps).value
            perp = M.perp(D)
            inside = [p for p in sites if (perp >> M.index(p)) & 1]
            if not inside:
                continue
            for _ in range(3):
                h = random_perturbation(rng, M, inside, 2, A)
                R = A.rce_matrix(M, h)
                n += 1
                if any(la.matvec(R, list(v)) != list(v) for v in dyn.basis):
                    bad.append({"region": _pts(M, D)})
        return Outcome(not bad and n > 0, bad[:3] or None, {"instances": n})

    def dyn_in_bullet():
        M = _nets_host(cfg)
        bad = []
        for iv in _mid_diamonds(M, (1, 2, 3, 4), rows=[M.T // 2]):
            D = multi_diamond(M, [iv]).mask
            if not subobject_leq(dynamical_subspace(A, M, D, caps).value, bullet_subspace(A, M, D, caps).value):
                bad.append(_pts(M, D))
        return Outcome(not bad, bad[:3] or None)

    def outer():
        M = _nets_host(cfg)
        bad, n = [], 0
        for iv in _mid_diamonds(M, (1, 2, 3), rows=[M.T // 2]):
            seq = []
            w = iv
            while w.widened(1).width < M.N:
                w = w.widened(1)
                seq.append(multi_diamond(M, [w]).mask)
            if not seq:
                continue
            seq.reverse()
            n += 1
            if not outer_regular_check(A, M, iv.mask(M), seq, caps):
                bad.append(_pts(M, iv.mask(M)))
        return Outcome(not bad and n > 0, bad[:3] or None, {"instances": n})

    def int_ext():
        M = _nets_host(cfg)
        bad = []
        for iv in _mid_diamonds(M, (1, 2, 3), rows=[M.T // 2]):
            wide = iv.widened(1)
            if wide.width >= M.N:
                continue
            K = iv.mask(M)
            kin = A.kinematic(M, K)
            b = bullet_subspace(A, M, K, caps).value
            d = dynamical_subspace(A, M, multi_diamond(M, [wide]).mask, caps).value
            if not (subobject_leq(kin, b) and subobject_leq(b, d)):
                bad.append(_pts(M, K))
        return Outcome(not bad, bad[:3] or None)

    def extended():
        M = _nets_host(cfg)
        t = M.T // 2
        out, bad = [], []
        for w1, w2 in ((1, 1), (2, 2), (3, 1)):
            if w1 + w2 + 2 > M.N:
                continue
            O1 = multi_diamond(M, [Interval(t, 0, w1)]).mask
            O2 = multi_diamond(M, [Interval(t, w1 + 1, w2)]).mask
            if M.hull(O1) & O2:
                continue
            e = check_extended_locality(A, M, O1, O2, caps)
            out.append({"widths": [w1, w2], "meet_dim": e.meet_dim, "empty_bullet_dim": e.empty_bullet_dim})
            if e.meet_trivial != e.empty_bullet_trivial:
                bad.append(out[-1])
        return Outcome(not bad and bool(out), bad or None, {"pairs": out})

    def additivity():
        M = _nets_host(cfg)
        cover = [multi_diamond(M, [Interval(t, a, min(caps.max_width + 2, M.N - 1))]).mask
                 for t in M.full_rows for a in range(M.N)]
        ok = additivity_check(A, M, cover, caps)
        return Outcome(ok, None if ok else {"cover": len(cover)}, {"cover": len(cover)})

    def dl_covariance():
        M = _nets_host(cfg)
        L = LatticeSpacetime.make(M.N, M.T + 2, cfg.raw["nets"]["mu"])
        psi = SpacetimeMorphism.uniform(M, L, 1, 0)
        f = A.mor(psi)
        bad, n = [], 0
        for iv in _mid_diamonds(M, (3, 4), rows=[M.T // 2]):
            D = multi_diamond(M, [iv]).mask
            if not check_dynamical_locality(A, M, D, caps).holds:
                continue
            n += 1
            if not subobject_iso(f.image_of(dynamical_subspace(A, M, D, caps).value),
                                 dynamical_subspace(A, L, psi.map_mask(D), caps).value):
                bad.append(_pts(M, D))
        return Outcome(not bad and n > 0, bad[:3] or None, {"instances": n})

    return [
        CheckSpec("nets.bullet_vs_oracle", "thm:A_bullet_MK", oracle),
        CheckSpec("nets.bullet_perpperp", "thm:A_bullet_MK", perpperp),
        CheckSpec("nets.refined_union", "lem:refined_dyn", refined),
        CheckSpec("nets.dynamical_isotony", "thm:A_int_MO", isotony),
        CheckSpec("nets.automorphism_covariance", "thm:A_int_MO", automorphism),
        CheckSpec("nets.base_vs_hull", "thm:A_int_MO", hull),
        CheckSpec("nets.rce_fixes_dynamical", "thm:A_bullet_and_A_int", rce_fixes_dyn),
        CheckSpec("nets.dynamical_in_bullet", "thm:A_bullet_and_A_int", dyn_in_bullet),
        CheckSpec("nets.outer_regular", "eq:intersections", outer),
        CheckSpec("nets.int_ext", "prop:int_ext", int_ext),
        CheckSpec("nets.extended_locality", "thm:extended_locality", extended),
        CheckSpec("nets.additivity", "thm:additivity", additivity),
        CheckSpec("nets.dl_covariance", "thm:dl_covariance", dl_covariance),
    ]


# dynlocal ------------------------------------------------------------------------------

def locality_regions(M: LatticeSpacetime, max_width: int, multi: bool, rows: Sequence[int] | None = None) -> List[tuple]:
    """Every diamond with base width up to ``max_width`` and every two-component multi-diamond on ``rows``."""
    rows = list(M.full_rows if rows is None else rows)
    singles = [iv for iv in diamond_bases(M, max_width, rows)]
    out = [((iv,), multi_diamond(M, [iv]).mask) for iv in singles]
    if multi:
        for a, b in itertools.combinations(singles, 2):
            if a.t != b.t:
                continue
            try:
                out.append(((a, b), multi_diamond(M, [a, b]).mask))
            except NotAMultiDiamond:
                continue
    return out


def _verdicts(A, M: LatticeSpacetime, regions, caps: Caps, seed: int) -> tuple:
    records, dims, oracle_bad, flagged = [], [], [], False
    tag = _tag(M)
    for base, mask in regions:
        v = check_dynamical_locality(A, M, mask, caps, seed)
        flagged = flagged or v.flagged
        rec = {"base": [[iv.t, iv.start, iv.width] for iv in base], "holds": v.holds,
               "kin_dim": v.kinematic.dim, "dyn_dim": v.dynamical.dim}
        records.append(rec)
        region = _pts(M, mask)
        dims.append({"spacetime": tag, "region": region, "kind": "kinematic", "dim": v.kinematic.dim})
        dims.append({"spacetime": tag, "region": region, "kind": "dynamical", "dim": v.dynamical.dim})
        for iv in base if isinstance(A, KGTheory) else ():
            K = iv.mask(M)
            if not subobject_iso(bullet_subspace(A, M, K, caps, seed).value, vanishing_oracle(A, M, K)):
                oracle_bad.append({"base": [iv.t, iv.start, iv.width]})
    return records, dims, oracle_bad, flagged


def base_rows(A, M: LatticeSpacetime, spec) -> Optional[List[int]]:
    """``"perturbation"``: rows carrying single-site perturbations; ``None``: every row; else a list."""
    if spec == "perturbation":
        return sorted({p.t for p in A.perturbation_sites(M)})
    return None if spec is None else list(spec)


def dynlocal_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    caps = cfg.caps
    d, z = cfg.raw["dynlocal"], cfg.raw["massless"]
    specs = []

    def massive(N):
        def fn():
            A = cfg.theory()
            M = LatticeSpacetime.make(N, d["T"], d["mu"])
            rows = base_rows(A, M, d["rows"])
            regions = locality_regions(M, d["max_width"], d["multi"], rows)
            recs, dims, oracle_bad, flagged = _verdicts(A, M, regions, caps, cfg.seed)
            failing = [r for r in recs if not r["holds"]]
            by_width: Dict[str, List[int]] = {}
            for r in recs:
                key = "+".join(str(b[2]) for b in r["base"])
                pas = by_width.setdefault(key, [0, 0])
                pas[0 if r["holds"] else 1] += 1
            return Outcome(not failing and not oracle_bad, {"failing": failing[:5], "failing_count": len(failing),
                                                             "oracle_mismatches": oracle_bad[:5]} if failing or oracle_bad else None,
                           {"regions": len(recs), "base_rows": rows, "holds_fails_by_widths": by_width,
                            "oracle_mismatches": len(oracle_bad)}, dims, flagged)
        return fn

    def oracle(N):
        def fn():
            A = cfg.theory()
            M = LatticeSpacetime.make(N, d["T"], d["mu"])
            regions = locality_regions(M, d["max_width"], d["multi"], base_rows(A, M, d["rows"]))
            bad, n = [], 0
            for base, mask in regions:
                for K in [iv.mask(M) for iv in base] + [mask]:
                    n += 1
                    if not subobject_iso(bullet_subspace(A, M, K, caps, cfg.seed).value, vanishing_oracle(A, M, K)):
                        bad.append(_pts(M, K))
            return Outcome(not bad, bad[:3] or None, {"instances": n})
        return fn

    def massless():
        out, dims, agree, flagged = {}, [], True, False
        for N in z["N"]:
            M = LatticeSpacetime.make(N, z["T"], z["mu"])
            regions = locality_regions(M, z["max_width"], False, base_rows(cfg.theory(), M, z["rows"]))
            runs = []
            for _ in range(2):
                A = cfg.theory()
                recs, ds, oracle_bad, fl = _verdicts(A, M, regions, caps, cfg.seed)
                empty = bullet_subspace(A, M, 0, caps, cfg.seed).value
                runs.append(json.dumps({"recs": recs, "empty": [[la.qstr(x) for x in r] for r in empty.basis]},
                                       sort_keys=True))
                if isinstance(A, KGTheory):
                    agree = agree and not oracle_bad and subobject_iso(empty, vanishing_oracle(A, M, 0))
                flagged = flagged or fl
            dims += ds
            res = json.loads(runs[0])
            out[f"N{N}"] = {"empty_bullet_dim": len(res["empty"]),
                            "holds": sum(r["holds"] for r in res["recs"]),
                            "fails": sum(not r["holds"] for r in res["recs"]),
                            "reproducible": runs[0] == runs[1],
                            "failing_widths": sorted({r["base"][0][2] for r in res["recs"] if not r["holds"]})}
        reproducible = all(v["reproducible"] for v in out.values())
        locality_fails = any(v["fails"] for v in out.values())
        data = {"per_N": out, "oracle_agrees": agree,
                "locality_fails_somewhere": locality_fails,
                "all_failures_are_small_width": all(set(v["failing_widths"]) <= {1, 2} for v in out.values()),
                "empty_bullet_trivial": all(v["empty_bullet_dim"] == 0 for v in out.values())}
        ok = reproducible and agree
        return Outcome(ok, None if ok else data, data, dims, flagged)

    def connected_vs_all():
        # recorded, not resolved: does dropping two-component K change the dynamical net?
        A, seen, disagree = cfg.theory(), 0, []
        narrow = replace(caps, connected_only=True)
        for N in d["compare_N"]:
            M = LatticeSpacetime.make(N, d["T"], d["mu"])
            for base, mask in locality_regions(M, d["max_width"], True, base_rows(A, M, d["rows"])):
                if len(base) < 2:
                    continue
                seen += 1
                a = dynamical_subspace(A, M, mask, caps, cfg.seed)
                b = dynamical_subspace(A, M, mask, narrow, cfg.seed)
                if not subobject_iso(a.value, b.value):
                    disagree.append({"N": N, "base": [[iv.t, iv.start, iv.width] for iv in base],
                                     "all_dim": a.dim, "connected_dim": b.dim})
        return Outcome(True, None, {"multi_diamonds": seen, "disagreements": len(disagree),
                                    "examples": disagree[:5]}, flagged=bool(disagree))

    for N in d["N"]:
        specs.append(CheckSpec(f"dynlocal.massive.N{N}", "sect:dynamical_locality", massive(N)))
        if isinstance(cfg.theory(), KGTheory):
            specs.append(CheckSpec(f"dynlocal.oracle.N{N}", "thm:A_bullet_MK", oracle(N)))
    specs.append(CheckSpec("dynlocal.massless", "sect:dynamical_locality", massless))
    if d["compare_N"]:
        specs.append(CheckSpec("dynlocal.connected_vs_all", "eq:dyndef1", connected_vs_all))
    return specs


# spass-demo ----------------------------------------------------------------------------

def spass_suite(cfg: ExperimentConfig) -> List[CheckSpec]:
    s = cfg.raw["spass"]
    caps = cfg.caps
    margin = cfg.raw["theory"]["margin"]

    def A():
        return KGTheory(cfg.raw["theory"]["xi"], margin)

    def fam(other=None):
        return standard_probe_family(s["N"], s["T"], s["mu"], s["mu"] if other is None else other, margin)

    def wrap():
        probes = fam()
        L = spass_counterexample(A(), label_wrap(s["g"]), probes)
        pattern = expected_iso_pattern(L)
        wrapping = [i for i, M in enumerate(probes.objects) if M.full_rows]
        nonwrap = [i for i in range(len(probes.objects)) if i not in wrapping]
        z1, z2, z21 = L.naturals
        ok = (all(r.classification.natural for r in L.naturals) and not L.diagonal_functor_failures
              and not L.diagonal_timeslice_failures and sorted(z1.classification.iso_at) == nonwrap
              and sorted(z2.classification.iso_at) == wrapping and L.composite_is_pad
              and not L.composite_iso_where_nontrivial and L.violation and all(pattern.values()))
        return Outcome(ok, None if ok else L.to_json(), L.to_json())

    def threshold():
        probes = fam(s["hot_mu"])
        L = spass_counterexample(A(), label_threshold(s["threshold"]), probes)
        ok = (all(r.classification.natural for r in L.naturals) and L.composite_is_pad and L.violation
              and bool(L.diagonal_timeslice_failures))
        return Outcome(ok, None if ok else L.to_json(), L.to_json())

    def trivial():
        probes = fam()
        L = spass_counterexample(TrivialTheory(), label_wrap(s["g"]), probes)
        ok = not L.violation and all(r.classification.kind == "iso" for r in L.naturals)
        return Outcome(ok, None if ok else L.to_json(), L.to_json())

    def diagonal():
        probes = fam()
        M = probes.objects[0]
        regions = {0: [multi_diamond(M, [Interval(M.T // 2, 0, w)]).mask for w in (1, 2, 3, 4)]}
        r = diagonal_dynamics_checks(A(), label_wrap(s["g"]), [M], regions, caps=caps)
        ok = r.ok and bool(r.proper_kinematic)
        return Outcome(ok, None if ok else r.to_json(), r.to_json())

    def constant_label():
        probes = fam()
        M = probes.objects[0]
        regions = {0: [multi_diamond(M, [Interval(M.T // 2, 0, 3)]).mask]}
        r = diagonal_dynamics_checks(A(), label_constant(1), [M], regions, caps=caps)
        ok = r.ok and not r.proper_kinematic
        return Outcome(ok, None if ok else r.to_json(), r.to_json())

    def powers():
        probes = fam()
        B = A()
        bad = []
        for M in probes.objects:
            for k in (1, 2, 3):
                if pad(B, k, k)(M).matrix != identity_natural(PowerTheory(B, k))(M).matrix:
                    bad.append(f"pad({k},{k})")
                for k2 in range(k, 4):
                    for k3 in range(k2, 4):
                        lhs = pad(B, k2, k3)(M) @ pad(B, k, k2)(M)
                        if lhs.matrix != pad(B, k, k3)(M).matrix:
                            bad.append(f"pad({k},{k2},{k3})")
            if PowerTheory(B, 3).obj(M).dim != 3 * B.obj(M).dim:
                bad.append("dim")
        nat = [z.name for z in (pad(B, 1, 2), pad(B, 2, 3)) if z.naturality_failures(probes.morphisms)]
        ok = not bad and not nat and not functor_failures(PowerTheory(B, 2), probes)
        return Outcome(ok, (bad + nat)[:5] or None)

    def monotone():
        probes = fam(s["hot_mu"])
        bad = {lab.name: len(lab.check_monotone(probes.morphisms))
               for lab in (label_wrap(s["g"]), label_threshold(s["threshold"]), label_constant(1))}
        ok = not any(bad.values())
        return Outcome(ok, None if ok else bad, bad)

    def meta():
        probes = fam()
        regions = {}
        for i, M in enumerate(probes.objects):
            if A().interior(M) & M.carrier == 0:
                raise ValueError("meta-check probes need nonempty interiors")
            tag = probes.tags.get(i)
            if tag in ("full", "diamond"):
                ivs = [Interval(M.T // 2, 0, 3)] + ([Interval(M.T // 2, 0, 4)] if tag == "full" else [])
                regions[i] = [multi_diamond(M.ambient(), [iv]).mask & M.carrier for iv in ivs]
        mc = spass_meta_check([TrivialTheory(), A()], probes, regions, caps)
        return Outcome(mc.ok, None if mc.ok else mc.to_json(), mc.to_json())

    def shift():
        probes = fam()
        a = shift_demo(A(), 2, probes)
        t = shift_demo(TrivialTheory(), 2, probes)
        ok = a["natural"][0] and not a["injective_at"] and t["injective_at"] == list(range(len(probes.objects)))
        return Outcome(ok, None if ok else {"kg": a, "trivial": t}, {"kg": a, "trivial": t,
                                                                      "note": "finite illustration only"})

    def restrictions():
        from .theory import DiagonalTheory, into_diagonal
        probes = fam()
        B = A()
        D = DiagonalTheory(B, label_wrap(s["g"]))
        z = into_diagonal(B, D)
        M = probes.objects[0]
        bad = []
        for iv in (Interval(M.T // 2, 0, 1), Interval(M.T // 2, 0, 3)):
            K = iv.mask(M)
            if not subobject_leq(z(M).image_of(bullet_subspace(B, M, K, caps).value), bullet_subspace(D, M, K, caps).value):
                bad.append(_pts(M, K))
        return Outcome(not bad, bad or None)

    def transfer():
        probes = fam(s["hot_mu"])
        L = spass_counterexample(A(), label_wrap(s["g"]), probes)
        bad = {r.name: r.cauchy_transfer_failures for r in L.naturals if r.cauchy_transfer_failures}
        return Outcome(not bad, bad or None)

    return [
        CheckSpec("spass.wrap_ledger", "eq:diagonal_comp", wrap),
        CheckSpec("spass.threshold_ledger", "eq:poisoned_spacetimes", threshold),
        CheckSpec("spass.trivial_no_violation", "thm:SPASs", trivial),
        CheckSpec("spass.diagonal_dynamics", "thm:diagonal_int_net", diagonal),
        CheckSpec("spass.constant_label_diagonal", "prop:rce_diagonal", constant_label),
        CheckSpec("spass.power_pads", "eq:beta_comp", powers),
        CheckSpec("spass.label_monotone", "lem:factor_construction", monotone),
        CheckSpec("spass.meta_check", "thm:SPASs", meta),
        CheckSpec("spass.shift_demo", "sect:pathologies", shift),
        CheckSpec("spass.zeta_restrictions", "lem:zeta_restrictions", restrictions),
        CheckSpec("spass.cauchy_iso_transfer", "prop:Cauchy_iso_transfer", transfer),
    ]


BUILDERS: Dict[str, Callable[[ExperimentConfig], List[CheckSpec]]] = {
    "causal-appendix": causal_suite,
    "subobject-laws": subobject_suite,
    "kg-functor": kg_suite,
    "rce-laws": rce_suite,
    "nets": nets_suite,
    "dynlocal": dynlocal_suite,
    "spass-demo": spass_suite,
}


def suite_specs(name: str, cfg: ExperimentConfig) -> List[CheckSpec]:
    if name == "all":
        return [s for n in SUITE_NAMES for s in BUILDERS[n](cfg)]
    if name not in BUILDERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES + ('all',))}")
    return BUILDERS[name](cfg)


_WORKER: Dict[str, Any] = {}


def _worker_run(args) -> dict:
    name, raw, base_dir, idx = args
    key = (name, json.dumps(raw, sort_keys=True))
    if _WORKER.get("key") != key:
        _WORKER["key"] = key
        _WORKER["specs"] = suite_specs(name, ExperimentConfig.from_dict(_strip(raw), base_dir))
    rec = _run(_WORKER["specs"][idx])
    return {"rec": rec.to_json(), "dims": rec.dims}


def _strip(raw: dict) -> dict:
    return {k: v for k, v in raw.items() if k in DEFAULTS}


def run_suite(name: str, cfg: ExperimentConfig, jobs: int = 1) -> Report:
    """Run every check of ``name``; records keep the canonical check order whatever ``jobs`` is."""
    specs = suite_specs(name, cfg)
    report = Report(name, cfg.raw, cfg.seed, cfg.caps.to_json())
    if jobs > 1 and len(specs) > 1 and not cfg.spacetimes:
        import multiprocessing as mp
        ctx = mp.get_context("fork")
        with ctx.Pool(min(jobs, len(specs))) as pool:
            results = pool.map(_worker_run, [(name, cfg.raw, cfg.base_dir, i) for i in range(len(specs))])
        for res in results:
            j = res["rec"]
            report.add(CheckRecord(j["id"], j["anchor"], j["status"], j["witness"], j["timing"], j["data"],
                                   res["dims"]))
    else:
        for spec in specs:
            report.add(_run(spec))
    return report
