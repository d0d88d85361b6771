"""Check records, versioned JSON reports and flat CSV tables."""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA = "1"

# Anchor strings a check record may cite.
ANCHORS = frozenset({
    "lem:Jofopenisopen", "lem:causal_completeness", "lem:perp_of_compacts", "lem:perp_of_reg_int",
    "lem:perp+prime", "lem:domain_of_dependence_and_perpperp", "lem:exhaustion", "lem:psi_perpperp",
    "lem:Cauchy_comp", "prop:Cauchy", "prop:Cauchy_chain", "eq:Fubini", "lem:union_refine",
    "lem:union_invariance", "lem:intersections", "eq:intersections", "sect:LCT", "eq:isotony",
    "eq:kinematic_covariance", "lem:geom1", "prop:BFV_contact", "prop:rce_locality", "lem:geom3",
    "prop:rce_covariance", "prop:rce_intertwine", "eq:intertwine_hypothesis", "eq:T_intertwine",
    "prop:diagonal_construction", "lem:factor_construction", "prop:rce_diagonal", "eq:poisoned_spacetimes",
    "eq:beta_comp", "eq:diagonal_comp", "eq:dyndef1", "thm:A_bullet_MK", "lem:refined_dyn", "thm:A_int_MO",
    "thm:A_bullet_and_A_int", "thm:diagonal_int_net", "prop:int_ext", "sect:dynamical_locality",
    "thm:additivity", "thm:dl_covariance", "thm:extended_locality", "thm:SPASs", "prop:Cauchy_iso_transfer",
    "lem:zeta_restrictions", "sect:pathologies",
})

STATUSES = ("pass", "fail", "flagged")


@dataclass
class CheckRecord:
    id: str
    anchor: str
    status: str
    witness: Any = None
    timing: float = 0.0
    data: Dict[str, Any] = field(default_factory=dict)
    dims: List[Dict[str, Any]] = field(default_factory=list)

    def __post_init__(self):
        if self.anchor not in ANCHORS:
            raise ValueError(f"unknown anchor {self.anchor!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            self.witness = {"reason": "check returned false"}

    def to_json(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "status": self.status, "witness": self.witness,
                "timing": round(self.timing, 3), "data": self.data}


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Report:
    suite: str
    config: dict
    seed: int
    caps: dict
    checks: List[CheckRecord] = field(default_factory=list)

    def add(self, rec: CheckRecord) -> None:
        if any(c.id == rec.id for c in self.checks):
            raise ValueError(f"duplicate check id {rec.id}")
        self.checks.append(rec)

    @property
    def failed(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self) -> dict:
        dims = [dict(d, check=c.id) for c in self.checks for d in c.dims]
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "metadata": {"config_hash": config_hash(self.config), "seed": self.seed, "caps": self.caps,
                         "config": self.config},
            "summary": {s: sum(c.status == s for c in self.checks) for s in STATUSES},
            "checks": [c.to_json() for c in self.checks],
            "dims": dims,
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    def write(self, out_dir: str, name: Optional[str] = None) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name or f"report-{self.suite}.json")
        with open(path, "w") as fh:
            fh.write(self.dumps())
        return path


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n"


def _default(o):
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    return str(o)


def strip_timing(report: dict) -> dict:
    """Copy of a report dict with timing fields zeroed, for determinism comparisons."""
    out = json.loads(json.dumps(report))
    for c in out.get("checks", []):
        c["timing"] = 0
    return out


CHECK_COLUMNS = ("id", "anchor", "status", "timing", "witness")
DIM_COLUMNS = ("check", "spacetime", "region", "kind", "dim")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple)) and all(isinstance(p, (list, tuple)) and len(p) == 2 for p in v):
        return ";".join(f"{a}:{b}" for a, b in v)
    return json.dumps(v, sort_keys=True, default=str)


def emit_tables(report: dict, out_dir: str) -> List[str]:
    """``checks.csv`` (one row per check) and ``dims.csv`` (one row per recorded subspace dimension)."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, cols, rows in (("checks.csv", CHECK_COLUMNS, report.get("checks", [])),
                             ("dims.csv", DIM_COLUMNS, report.get("dims", []))):
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in rows:
                w.writerow([_cell(r.get(c)) for c in cols])
        paths.append(path)
    return paths


def load(path: str) -> dict:
    with open(path) as fh:
        rep = json.load(fh)
    if rep.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {rep.get('schema')!r}")
    return rep
