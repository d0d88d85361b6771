"""Discrete Klein-Gordon field on circle lattices.

The wave operator is

    (P u)(t, x) = u(t+1, x) + u(t-1, x) - u(t, x-1) - u(t, x+1) + xi * mu(t, x) * u(t, x)

on rows ``1..T-2``.  Solutions are fixed by their values on two adjacent rows;
the reference pair is rows ``(0, 1)`` of the full lattice, so solution data live
in ``Q^{2N}`` as ``(u(0, .), u(1, .))``.  The conserved form is

    omega(u, v) = sum_x u(t+1, x) v(t, x) - u(t, x) v(t+1, x).

For a region spacetime every propagator is computed on its canonical full
ambient (same ``N``, ``T`` and couplings, zero coupling off the carrier).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from gmpy2 import mpq

from . import linalg as la
from .lattice import LatticeSpacetime, Point, Region, SpacetimeMorphism, DomainError
from .linalg import Q
from .subobjects import DataSpace, LinearMorphism, Subspace
from .theory import Theory


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class TestFunction:
    host: LatticeSpacetime
    values: Tuple[Tuple[Tuple[int, int], mpq], ...]

    __test__ = False  # not a pytest class

    @classmethod
    def of(cls, host: LatticeSpacetime, values: Mapping, margin: int = 1) -> "TestFunction":
        items = []
        for p, v in sorted(values.items()):
            t, x = p
            v = Q(v)
            if not v:
                continue
            if not (margin <= t <= host.T - 1 - margin):
                raise SupportError(f"support point {p} too close to the temporal boundary")
            if not (host.carrier >> host.index(p)) & 1:
                raise SupportError(f"support point {p} outside the carrier")
            items.append(((t, x % host.N), v))
        return cls(host, tuple(items))

    def as_dict(self) -> Dict[Tuple[int, int], mpq]:
        return dict(self.values)

    @property
    def support(self) -> List[Tuple[int, int]]:
        return [p for p, _ in self.values]


@dataclass(frozen=True)
class FieldConfiguration:
    host: LatticeSpacetime
    grid: Tuple[Tuple[mpq, ...], ...]

    def __getitem__(self, p) -> mpq:
        t, x = p
        return self.grid[t][x % self.host.N]

    def support(self) -> List[Point]:
        return [Point(t, x) for t, row in enumerate(self.grid) for x, v in enumerate(row)
                if v and (self.host.carrier >> (t * self.host.N + x)) & 1]

    def restricted(self) -> Dict[Point, mpq]:
        return {p: self[p] for p in self.host.points()}


def _as_dict(f) -> Dict:
    if isinstance(f, TestFunction):
        return f.as_dict()
    return {(int(t), int(x)): Q(v) for (t, x), v in f.items()}


def omega_matrix(N: int) -> la.Matrix:
    """Gram matrix of the two-row form on data ``(u0, u1)``."""
    om = la.zeros(2 * N, 2 * N)
    for x in range(N):
        om[x][N + x] = mpq(-1)
        om[N + x][x] = mpq(1)
    return om


def omega(N: int, u: Sequence, v: Sequence) -> mpq:
    return sum((u[N + x] * v[x] - u[x] * v[N + x] for x in range(N)), la.ZERO)


def omega_rows(N: int, ugrid, vgrid, t: int) -> mpq:
    return sum((ugrid[t + 1][x] * vgrid[t][x] - ugrid[t][x] * vgrid[t + 1][x] for x in range(N)), la.ZERO)


class Dynamics:
    """Propagation on a full lattice with couplings ``xi * mu``."""

    def __init__(self, L: LatticeSpacetime, xi: mpq):
        self.N, self.T = L.N, L.T
        self.c = [[xi * L.mu[t * L.N + x] for x in range(L.N)] for t in range(L.T)]
        self._ev = None
        self._tinv: Dict[int, la.Matrix] = {}

    def forward(self, u0: Sequence, u1: Sequence, f: Dict | None = None, start: int = 1) -> List[List[mpq]]:
        N, T, c = self.N, self.T, self.c
        grid = [[la.ZERO] * N for _ in range(T)]
        grid[start - 1], grid[start] = list(u0), list(u1)
        for t in range(start, T - 1):
            a, b, ct = grid[t - 1], grid[t], c[t]
            row = [b[x - 1] + b[(x + 1) % N] - a[x] - ct[x] * b[x] for x in range(N)]
            if f:
                for x in range(N):
                    v = f.get((t, x))
                    if v:
                        row[x] += v
            grid[t + 1] = row
        return grid

    def backward(self, grid: List[List[mpq]], end: int, f: Dict | None = None) -> List[List[mpq]]:
        """Fill rows below ``end - 1`` from rows ``end - 1, end``."""
        N, c = self.N, self.c
        for t in range(end - 1, 0, -1):
            a, b, ct = grid[t + 1], grid[t], c[t]
            row = [b[x - 1] + b[(x + 1) % N] - a[x] - ct[x] * b[x] for x in range(N)]
            if f:
                for x in range(N):
                    v = f.get((t, x))
                    if v:
                        row[x] += v
            grid[t - 1] = row
        return grid

    def basis_grids(self) -> List[List[List[mpq]]]:
        N = self.N
        out = []
        for i in range(2 * N):
            d = [la.ONE if j == i else la.ZERO for j in range(2 * N)]
            out.append(self.forward(d[:N], d[N:]))
        return out

    @property
    def ev(self) -> List[List[List[mpq]]]:
        """``ev[t][x]`` is the functional taking reference data to ``u(t, x)``."""
        if self._ev is None:
            grids = self.basis_grids()
            self._ev = [[[g[t][x] for g in grids] for x in range(self.N)] for t in range(self.T)]
        return self._ev

    def transfer(self, t: int) -> la.Matrix:
        """Reference data -> data on rows ``(t, t+1)``."""
        return [list(r) for r in self.ev[t]] + [list(r) for r in self.ev[t + 1]]

    def transfer_inverse(self, t: int) -> la.Matrix:
        if t not in self._tinv:
            self._tinv[t] = la.inverse(self.transfer(t))
        return self._tinv[t]

    def solution_grid(self, data: Sequence) -> List[List[mpq]]:
        return self.forward(list(data[:self.N]), list(data[self.N:]))

    def data_from_pair(self, t: int, lower: Sequence, upper: Sequence) -> List[mpq]:
        """Reference data of the solution with ``u(t) = lower`` and ``u(t+1) = upper``."""
        return la.matvec(self.transfer_inverse(t), list(lower) + list(upper))

    def generator(self, p) -> List[mpq]:
        """Reference data of ``E delta_p``: zero on row ``t``, ``delta_x`` on row ``t + 1``."""
        t, x = p
        inv = self.transfer_inverse(t)
        return [inv[i][self.N + x] for i in range(2 * self.N)]


_DYN: Dict[tuple, Dynamics] = {}


def dynamics(M: LatticeSpacetime, xi=1) -> Dynamics:
    xi = Q(xi)
    key = (M.N, M.T, M.mu, xi)
    d = _DYN.get(key)
    if d is None:
        if len(_DYN) > 512:
            _DYN.clear()
        d = _DYN[key] = Dynamics(M.ambient(), xi)
    return d


# direct propagators ----------------------------------------------------------------------

def apply_wave_operator(M: LatticeSpacetime, phi, xi=1) -> Dict[Point, mpq]:
    """``P phi`` at every interior carrier point whose stencil lies in the carrier."""
    xi = Q(xi)
    get = phi.__getitem__ if isinstance(phi, FieldConfiguration) else (lambda p: Q(phi[p]))
    out = {}
    for p in M.points():
        t, x = p
        if not (1 <= t <= M.T - 2):
            continue
        stencil = [(t + 1, x), (t - 1, x), (t, (x - 1) % M.N), (t, (x + 1) % M.N)]
        if any(not (M.carrier >> M.index(q)) & 1 for q in stencil):
            continue
        a, b, c, d = (get(q) for q in stencil)
        out[Point(t, x)] = a + b - c - d + xi * M.mu_at(p) * get((t, x))
    return out


def _check_support(M: LatticeSpacetime, f: Dict) -> None:
    for (t, x), v in f.items():
        if v and not (1 <= t <= M.T - 2):
            raise SupportError(f"source at {(t, x)} outside interior rows")
        if v and not (M.carrier >> M.index((t, x))) & 1:
            raise SupportError(f"source at {(t, x)} outside the carrier")


def retarded(M: LatticeSpacetime, f, xi=1) -> FieldConfiguration:
    f = _as_dict(f)
    _check_support(M, f)
    dyn = dynamics(M, xi)
    N = M.N
    if not any(f.values()):
        return FieldConfiguration(M, la.freeze(la.zeros(M.T, N)))
    lo = min(t for (t, _), v in f.items() if v)
    fx = {(t, x % N): v for (t, x), v in f.items()}
    grid = dyn.forward([la.ZERO] * N, [la.ZERO] * N, fx, start=lo)
    return FieldConfiguration(M, la.freeze(grid))


def advanced(M: LatticeSpacetime, f, xi=1) -> FieldConfiguration:
    f = _as_dict(f)
    _check_support(M, f)
    dyn = dynamics(M, xi)
    N, T = M.N, M.T
    grid = [[la.ZERO] * N for _ in range(T)]
    if any(f.values()):
        hi = max(t for (t, _), v in f.items() if v)
        fx = {(t, x % N): v for (t, x), v in f.items()}
        dyn.backward(grid, hi + 1, fx)
    return FieldConfiguration(M, la.freeze(grid))


def causal_propagator(M: LatticeSpacetime, f, xi=1) -> FieldConfiguration:
    r, a = retarded(M, f, xi), advanced(M, f, xi)
    return FieldConfiguration(M, la.freeze(la.sub(r.grid, a.grid)))


def pairing(M: LatticeSpacetime, f, g, xi=1) -> mpq:
    eg = causal_propagator(M, g, xi)
    return sum((v * eg[p] for p, v in _as_dict(f).items()), la.ZERO)


def data_of(u: FieldConfiguration, t: int = 0) -> List[mpq]:
    return list(u.grid[t]) + list(u.grid[t + 1])


@dataclass(frozen=True)
class SolutionSpace:
    """Solutions of the full ambient identified with reference data on rows ``(0, 1)``."""

    host: LatticeSpacetime
    xi: mpq = mpq(1)

    @property
    def dim(self) -> int:
        return 2 * self.host.N

    def space(self) -> DataSpace:
        return DataSpace(self.dim, la.freeze(omega_matrix(self.host.N)))

    def field(self, data: Sequence) -> FieldConfiguration:
        return FieldConfiguration(self.host, la.freeze(dynamics(self.host, self.xi).solution_grid(data)))

    def is_solution(self, u: FieldConfiguration) -> bool:
        P = apply_wave_operator(self.host.ambient(), u, self.xi)
        return not any(P.values())

    def omega_at(self, u: FieldConfiguration, v: FieldConfiguration, t: int) -> mpq:
        return omega_rows(self.host.N, u.grid, v.grid, t)


# the theory functor ----------------------------------------------------------------------

@dataclass
class _ObjectData:
    points: List[Point]
    gens: List[List[mpq]]
    basis: la.Matrix
    pivots: List[int]
    space: DataSpace
    chosen: List[int]
    chosen_inv: la.Matrix


class KGTheory(Theory):
    """``A(M) = span{E delta_p : p in int(M)}`` inside solution data of the ambient.

    ``int(M)`` keeps ``margin`` rows away from each temporal boundary.  Objects
    are coordinatized by the echelon basis of that span, which for full
    lattices is the reference data itself.
    """

    def __init__(self, xi=1, margin: int = 2, name: str | None = None):
        self.xi = Q(xi)
        self.margin = margin
        self.name = name or f"KG(xi={la.qstr(self.xi)})"
        self._objs: Dict[tuple, _ObjectData] = {}
        self._mors: Dict[tuple, LinearMorphism] = {}
        self._site_rce: Dict[tuple, la.Matrix] = {}

    def interior(self, M: LatticeSpacetime) -> int:
        return M.rows_mask(range(self.margin, M.T - self.margin))

    def dyn(self, M: LatticeSpacetime) -> Dynamics:
        return dynamics(M, self.xi)

    def _data(self, M: LatticeSpacetime) -> _ObjectData:
        key = M.key()
        od = self._objs.get(key)
        if od is not None:
            return od
        dyn = self.dyn(M)
        pts = M.points(self.interior(M))
        gens = [dyn.generator(p) for p in pts]
        n = 2 * M.N
        basis, piv = la.rref(gens, n)
        d = len(basis)
        om = omega_matrix(M.N)
        form = la.matmul(la.matmul(basis, om), la.transpose(basis, n)) if d else []
        space = DataSpace(d, la.freeze(form))
        coords = [[g[p] for p in piv] for g in gens]
        # pick generators forming a basis of the span
        _, chosen = la.rref(la.transpose(coords, d), len(gens)) if d else ([], [])
        cmat = la.transpose([coords[i] for i in chosen], d) if d else []
        od = _ObjectData(pts, gens, basis, piv, space, chosen, la.inverse(cmat) if d else [])
        self._objs[key] = od
        return od

    def obj(self, M):
        return self._data(M).space

    def coordinates(self, M: LatticeSpacetime, data: Sequence) -> List[mpq]:
        od = self._data(M)
        c = [data[p] for p in od.pivots]
        recon = [sum((ci * r[j] for ci, r in zip(c, od.basis)), la.ZERO) for j in range(2 * M.N)]
        if recon != list(data):
            raise ValueError("solution data do not lie in the theory object")
        return c

    def embed(self, M: LatticeSpacetime, coords: Sequence) -> List[mpq]:
        """Reference data of the element with the given coordinates."""
        od = self._data(M)
        return [sum((ci * r[j] for ci, r in zip(coords, od.basis)), la.ZERO) for j in range(2 * M.N)]

    def generator_coords(self, M: LatticeSpacetime, p) -> List[mpq]:
        return self.coordinates(M, self.dyn(M).generator(p))

    def mor(self, psi: SpacetimeMorphism) -> LinearMorphism:
        key = (psi.source.key(), psi.target.key(), psi.component_maps)
        hit = self._mors.get(key)
        if hit is not None:
            return hit
        S, Tg = psi.source, psi.target
        src, tgt = self._data(S), self._data(Tg)
        tint = self.interior(Tg)
        dynT = self.dyn(Tg)
        images = []
        for p in src.points:
            q = psi(p)
            if not (tint >> Tg.index(q)) & 1:
                raise DomainError(f"interior point {p} maps outside the target interior")
            images.append(self.coordinates(Tg, dynT.generator(q)))
        d = src.space.dim
        if d:
            img_sel = la.transpose([images[i] for i in src.chosen], tgt.space.dim)
            mat = la.matmul(img_sel, src.chosen_inv)
            for p, g, im in zip(src.points, src.gens, images):
                c = [g[k] for k in src.pivots]
                if la.matvec(mat, c) != im:
                    raise DomainError(f"generator relations are not preserved at {p}")
        else:
            mat = la.zeros(tgt.space.dim, 0)
        out = LinearMorphism(src.space, tgt.space, la.freeze(mat))
        self._mors[key] = out
        return out

    # direct (non-functorial) routes used as cross-checks --------------------------------
    def kinematic_direct(self, M: LatticeSpacetime, O) -> Subspace:
        om = M.mask(O) & self.interior(M)
        dyn = self.dyn(M)
        return Subspace.span(self.obj(M), [self.coordinates(M, dyn.generator(p)) for p in M.points(om)])

    def evaluation(self, M: LatticeSpacetime, p) -> List[mpq]:
        """Functional giving ``u(p)`` in object coordinates."""
        t, x = p
        ev = self.dyn(M).ev[t][x % M.N]
        od = self._data(M)
        return la.matvec(od.basis, ev) if od.basis else []

    # relative Cauchy evolution by re-identification of Cauchy data -----------------------
    def _full_object(self, M: LatticeSpacetime) -> None:
        if self.obj(M).dim != 2 * M.N:
            raise ValueError("relative Cauchy evolution needs a spacetime whose object is all solution data")

    def tau(self, M: LatticeSpacetime, delta: Dict, sign: int, row: int) -> la.Matrix:
        """Background data -> perturbed data agreeing on rows ``(row, row+1)``."""
        self._full_object(M)
        Mh = M.perturbed(delta)
        supp = [p for p, v in delta.items() if v]
        if supp:
            lo, hi = min(p[0] for p in supp), max(p[0] for p in supp)
            if sign > 0 and row <= hi:
                raise ValueError("future pair must lie above the perturbation")
            if sign < 0 and row + 1 >= lo:
                raise ValueError("past pair must lie below the perturbation")
        if not (0 <= row and row + 1 <= M.T - 1):
            raise ValueError("row pair outside the lattice")
        d0, d1 = self.dyn(M), self.dyn(Mh)
        return la.matmul(d1.transfer_inverse(row), d0.transfer(row))

    def default_rows(self, M: LatticeSpacetime, delta: Dict) -> Tuple[int, int]:
        return M.T - 2, 0

    def rce_matrix(self, M: LatticeSpacetime, delta: Dict, rows: Tuple[int, int] | None = None) -> la.Matrix:
        delta = {tuple(p): Q(v) for p, v in delta.items() if Q(v)}
        if not delta:
            return la.identity(self.obj(M).dim)
        if not self.admissible(M, list(delta)):
            raise ValueError("perturbation support is not admissible")
        up, down = rows if rows is not None else self.default_rows(M, delta)
        tp = self.tau(M, delta, +1, up)
        tm = self.tau(M, delta, -1, down)
        return la.matmul(la.inverse(tm), tp)

    def site_rce(self, M: LatticeSpacetime, p) -> la.Matrix:
        key = (M.key(), tuple(p))
        r = self._site_rce.get(key)
        if r is None:
            r = self._site_rce[key] = self.rce_matrix(M, {tuple(p): 1})
        return r

    def site_rce_closed_form(self, M: LatticeSpacetime, p, s=1) -> la.Matrix:
        """``I - s xi w_q ev_q`` with ``w_q`` the background solution with data ``(delta_x, 0)`` on rows ``(t-1, t)``."""
        t, x = p
        dyn = self.dyn(M)
        N = M.N
        w = dyn.data_from_pair(t - 1, [la.ONE if y == x % N else la.ZERO for y in range(N)], [la.ZERO] * N)
        ev = dyn.ev[t][x % N]
        s = Q(s) * self.xi
        return [[(la.ONE if i == j else la.ZERO) - s * w[i] * ev[j] for j in range(2 * N)] for i in range(2 * N)]
