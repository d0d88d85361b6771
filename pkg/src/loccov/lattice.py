"""Circle-lattice spacetimes, their causal order, regions and morphisms.

Points are ``(t, x)`` with ``0 <= t < T`` and ``x`` taken mod ``N``.  A causal step
goes from ``(t, x)`` to ``(t + 1, x - 1 | x | x + 1)``.  Sets of points are stored
as Python ints with bit ``t * N + x``; every order-theoretic operation is a short
row-by-row sweep over these masks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from gmpy2 import mpq

from .linalg import Q, qstr


class Point(NamedTuple):
    t: int
    x: int


class DomainError(ValueError):
    """A point or set does not lie in the spacetime it is used with."""


class InvalidMorphism(ValueError):
    pass


class NotAMultiDiamond(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class LatticeSpacetime:
    """``Z_N x {0..T-1}`` with site couplings ``mu`` and a causally convex carrier.

    ``mu`` is stored as a flat tuple indexed by ``t * N + x`` and is zero off the
    carrier, so the full lattice with the same ``mu`` is a canonical ambient.
    """

    N: int
    T: int
    mu: Tuple[mpq, ...]
    carrier: int
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.N < 3 or self.T < 2:
            raise ValueError("need N >= 3 and T >= 2")
        full = (1 << (self.N * self.T)) - 1
        if self.carrier & ~full:
            raise DomainError("carrier has points outside the lattice")
        if len(self.mu) != self.N * self.T:
            raise ValueError("mu has the wrong length")
        mu = tuple(Q(v) if (self.carrier >> i) & 1 else mpq(0) for i, v in enumerate(self.mu))
        object.__setattr__(self, "mu", mu)
        if self.check and self.carrier != full:
            amb = self.ambient()
            if not amb.is_convex(self.carrier):
                raise DomainError("carrier is not causally convex")
            comps = amb.components(self.carrier)
            for a, b in itertools.combinations(comps, 2):
                if amb.hull(a) & b:
                    raise DomainError("carrier components are causally related")

    # construction -----------------------------------------------------------------
    @classmethod
    def make(cls, N: int, T: int, mu=0, carrier: Optional[Iterable] = None) -> "LatticeSpacetime":
        """``mu`` is a scalar, a dict ``{(t, x): value}`` (default 0), or a callable ``(t, x) -> value``."""
        if callable(mu):
            vals = tuple(Q(mu(t, x)) for t in range(T) for x in range(N))
        elif isinstance(mu, dict):
            vals = tuple(Q(mu.get((t, x), 0)) for t in range(T) for x in range(N))
        else:
            vals = (Q(mu),) * (N * T)
        if carrier is None:
            cmask = (1 << (N * T)) - 1
        elif isinstance(carrier, int):
            cmask = carrier
        else:
            cmask = 0
            for t, x in carrier:
                if not (0 <= t < T):
                    raise DomainError(f"row {t} outside 0..{T - 1}")
                cmask |= 1 << (t * N + x % N)
        return cls(N, T, vals, cmask)

    def ambient(self) -> "LatticeSpacetime":
        return LatticeSpacetime(self.N, self.T, self.mu, self.full_mask, check=False)

    def restrict(self, region) -> "LatticeSpacetime":
        """The region spacetime carried by a convex subset of this carrier."""
        mask = self.mask(region)
        if not self.is_convex(mask):
            raise DomainError("region is not causally convex")
        return LatticeSpacetime(self.N, self.T, self.mu, mask)

    def perturbed(self, delta: Dict) -> "LatticeSpacetime":
        mu = list(self.mu)
        for (t, x), v in delta.items():
            i = self.index((t, x))
            if not (self.carrier >> i) & 1:
                raise DomainError(f"perturbation at {(t, x)} outside carrier")
            mu[i] = mu[i] + Q(v)
        return LatticeSpacetime(self.N, self.T, tuple(mu), self.carrier, check=False)

    # indexing ---------------------------------------------------------------------
    @cached_property
    def full_mask(self) -> int:
        return (1 << (self.N * self.T)) - 1

    @cached_property
    def row_full(self) -> int:
        return (1 << self.N) - 1

    def index(self, p) -> int:
        t, x = p
        if not (0 <= t < self.T):
            raise DomainError(f"row {t} outside 0..{self.T - 1}")
        return t * self.N + x % self.N

    def point(self, i: int) -> Point:
        return Point(*divmod(i, self.N))

    def points(self, mask: int | None = None) -> List[Point]:
        return [self.point(i) for i in _bits(self.carrier if mask is None else mask)]

    def rows_mask(self, rows: Iterable[int]) -> int:
        m = 0
        for t in rows:
            if 0 <= t < self.T:
                m |= self.row_full << (t * self.N)
        return m & self.carrier

    def mask(self, obj) -> int:
        """Coerce a Region, mask or iterable of points to a mask inside the carrier."""
        if isinstance(obj, Region):
            m = obj.mask
        elif isinstance(obj, int):
            m = obj
        else:
            m = 0
            for p in obj:
                m |= 1 << self.index(p)
        if m & ~self.carrier:
            raise DomainError("set is not contained in the carrier")
        return m

    def region(self, obj=()) -> "Region":
        return Region(self, self.mask(obj))

    def mu_at(self, p) -> mpq:
        return self.mu[self.index(p)]

    @property
    def is_full(self) -> bool:
        return self.carrier == self.full_mask

    def row(self, mask: int, t: int) -> int:
        return (mask >> (t * self.N)) & self.row_full

    # causal order -----------------------------------------------------------------
    def _spread(self, r: int) -> int:
        n, full = self.N, self.row_full
        return (r | ((r << 1) & full) | (r >> (n - 1)) | (r >> 1) | ((r & 1) << (n - 1))) & full

    def future(self, mask: int) -> int:
        out, prev, n, c = 0, 0, self.N, self.carrier
        for t in range(self.T):
            r = (self.row(mask, t) | self._spread(prev)) & self.row(c, t)
            out |= r << (t * n)
            prev = r
        return out

    def past(self, mask: int) -> int:
        out, prev, n, c = 0, 0, self.N, self.carrier
        for t in range(self.T - 1, -1, -1):
            r = (self.row(mask, t) | self._spread(prev)) & self.row(c, t)
            out |= r << (t * n)
            prev = r
        return out

    def hull(self, mask: int) -> int:
        """``J(S) = J+(S) | J-(S)``."""
        return self.future(mask) | self.past(mask)

    def perp(self, mask: int) -> int:
        return self.carrier & ~self.hull(mask)

    def _free(self, mask: int, order: Sequence[int]) -> int:
        # points from which some inextendible half-path avoids ``mask`` (sweep in ``order``)
        out, prev, prevc, n, c = 0, 0, 0, self.N, self.carrier
        for t in order:
            crow = self.row(c, t)
            start = crow & ~self._spread(prevc)
            r = crow & ~self.row(mask, t) & (start | self._spread(prev))
            out |= r << (t * n)
            prev, prevc = r, crow
        return out

    def dependence(self, mask: int) -> int:
        past_free = self._free(mask, range(self.T))
        future_free = self._free(mask, range(self.T - 1, -1, -1))
        return self.carrier & ~(past_free & future_free)

    def is_convex(self, mask: int) -> bool:
        return self.future(mask) & self.past(mask) == mask

    @cached_property
    def point_future(self) -> Tuple[int, ...]:
        return tuple(self.future(1 << i) if (self.carrier >> i) & 1 else 0 for i in range(self.N * self.T))

    @cached_property
    def point_past(self) -> Tuple[int, ...]:
        return tuple(self.past(1 << i) if (self.carrier >> i) & 1 else 0 for i in range(self.N * self.T))

    def leq(self, p, q) -> bool:
        return bool((self.point_future[self.index(p)] >> self.index(q)) & 1)

    # structure ----------------------------------------------------------------------
    def components(self, mask: int | None = None) -> List[int]:
        """King-move connected components, ordered by lowest point."""
        rest = self.carrier if mask is None else mask
        comps = []
        while rest:
            seed = rest & -rest
            comp, frontier = seed, seed
            while frontier:
                grow = 0
                for i in _bits(frontier):
                    t, x = divmod(i, self.N)
                    for dt in (-1, 0, 1):
                        s = t + dt
                        if 0 <= s < self.T:
                            for dx in (-1, 0, 1):
                                grow |= 1 << (s * self.N + (x + dx) % self.N)
                frontier = grow & rest & ~comp
                comp |= frontier
            comps.append(comp)
            rest &= ~comp
        return comps

    def projection(self, mask: int) -> int:
        out = 0
        for t in range(self.T):
            out |= self.row(mask, t)
        return out

    def wraps(self, mask: int) -> bool:
        return self.projection(mask) == self.row_full

    def arc_start(self, mask: int) -> int:
        """First site of the circular arc covered by a non-wrapping connected set."""
        proj = self.projection(mask)
        for x in range(self.N):
            if (proj >> x) & 1 and not (proj >> ((x - 1) % self.N)) & 1:
                return x
        raise DomainError("set wraps the circle")

    @cached_property
    def full_rows(self) -> Tuple[int, ...]:
        return tuple(t for t in range(self.T) if self.row(self.carrier, t) == self.row_full)

    def cauchy_pairs(self, lo: int = 0, hi: int | None = None) -> Tuple[int, ...]:
        """Rows ``t`` with ``t, t + 1`` full and ``lo <= t < t + 1 <= hi``."""
        hi = self.T - 1 if hi is None else hi
        rows = set(self.full_rows)
        return tuple(t for t in range(max(lo, 0), hi) if t in rows and t + 1 in rows)

    def key(self) -> tuple:
        return (self.N, self.T, self.mu, self.carrier)

    def describe(self) -> dict:
        out = {"N": self.N, "T": self.T,
               "mu": [[p.t, p.x, qstr(self.mu_at(p))] for p in self.points() if self.mu_at(p)]}
        if not self.is_full:
            out["carrier"] = [[p.t, p.x] for p in self.points()]
        return out


@dataclass(frozen=True)
class Region:
    host: LatticeSpacetime
    mask: int

    @property
    def points(self) -> List[Point]:
        return self.host.points(self.mask)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, p) -> bool:
        return bool((self.mask >> self.host.index(p)) & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def _other(self, other) -> int:
        return other.mask if isinstance(other, Region) else self.host.mask(other)

    def __or__(self, other) -> "Region":
        return Region(self.host, self.mask | self._other(other))

    def __and__(self, other) -> "Region":
        return Region(self.host, self.mask & self._other(other))

    def __sub__(self, other) -> "Region":
        return Region(self.host, self.mask & ~self._other(other))

    def issubset(self, other) -> bool:
        return self.mask & ~self._other(other) == 0

    def rows(self) -> List[int]:
        return sorted({p.t for p in self.points})


def _mask(M: LatticeSpacetime, S) -> int:
    return M.mask(S)


def causal_future(M: LatticeSpacetime, S) -> Region:
    return Region(M, M.future(_mask(M, S)))


def causal_past(M: LatticeSpacetime, S) -> Region:
    return Region(M, M.past(_mask(M, S)))


def causal_hull(M: LatticeSpacetime, S) -> Region:
    return Region(M, M.hull(_mask(M, S)))


def causal_complement(M: LatticeSpacetime, S) -> Region:
    return Region(M, M.perp(_mask(M, S)))


def domain_of_dependence(M: LatticeSpacetime, S) -> Region:
    return Region(M, M.dependence(_mask(M, S)))


def is_causally_convex(M: LatticeSpacetime, O) -> bool:
    return M.is_convex(_mask(M, O))


# diamonds -----------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Interval:
    """Sites ``start, ..., start + width - 1`` (mod N) on row ``t``."""
    t: int
    start: int
    width: int

    def mask(self, M: LatticeSpacetime) -> int:
        m = 0
        for k in range(self.width):
            m |= 1 << M.index((self.t, self.start + k))
        return m

    def widened(self, by: int = 1) -> "Interval":
        return Interval(self.t, self.start - by, self.width + 2 * by)


def _interval_from_sites(M: LatticeSpacetime, t0: int, sites: Iterable[int]) -> Interval:
    xs = sorted({x % M.N for x in sites})
    if not xs:
        raise ValueError("empty base")
    if len(xs) >= M.N:
        raise ValueError("a diamond base must leave part of the row uncovered")
    row = 0
    for x in xs:
        row |= 1 << x
    starts = [x for x in xs if not (row >> ((x - 1) % M.N)) & 1]
    if len(starts) != 1:
        raise ValueError("base sites are not consecutive")
    return Interval(t0, starts[0], len(xs))


def diamond(M: LatticeSpacetime, t0: int, B: Iterable[int]) -> Region:
    iv = B if isinstance(B, Interval) else _interval_from_sites(M, t0, B)
    if iv.width >= M.N:
        raise ValueError("a diamond base must leave part of the row uncovered")
    return Region(M, M.dependence(M.mask(iv.mask(M))))


def multi_diamond(M: LatticeSpacetime, bases: Sequence) -> Region:
    """Union of diamonds over interval bases; rejects related or merging components.

    ``bases`` holds :class:`Interval` values or ``(t0, sites)`` pairs.
    """
    ivs = [b if isinstance(b, Interval) else _interval_from_sites(M, b[0], b[1]) for b in bases]
    if len({iv.t for iv in ivs}) > 1:
        raise NotAMultiDiamond("bases must share one row")
    if any(iv.width >= M.N or iv.width < 1 for iv in ivs):
        raise NotAMultiDiamond("a base must be a proper nonempty arc of its row")
    masks = [M.mask(iv.mask(M)) for iv in ivs]
    ds = [M.dependence(m) for m in masks]
    for (i, a), (j, b) in itertools.combinations(enumerate(ds), 2):
        if M.hull(a) & b:
            raise NotAMultiDiamond(f"components {i} and {j} are causally related")
    total = 0
    for d in ds:
        total |= d
    base = 0
    for m in masks:
        base |= m
    if M.dependence(base) != total:
        raise NotAMultiDiamond("components merge into a larger development")
    return Region(M, total)


def is_multi_diamond_base(M: LatticeSpacetime, ivs: Sequence[Interval]) -> bool:
    try:
        for iv in ivs:
            if iv.width >= M.N or iv.width < 1 or not (0 <= iv.t < M.T):
                return False
            if iv.mask(M) & ~M.carrier:
                return False
        multi_diamond(M, ivs)
    except (NotAMultiDiamond, DomainError, ValueError):
        return False
    return True


def base_mask(M: LatticeSpacetime, ivs: Sequence[Interval]) -> int:
    m = 0
    for iv in ivs:
        m |= iv.mask(M)
    return m


def enumerate_Kb(M: LatticeSpacetime, O, max_width: int = 3, rows: Optional[Iterable[int]] = None,
                 max_components: int = 2, connected_only: bool = False, slack: int = 1) -> List[Region]:
    """Multi-interval base sets ``K`` admissible as local regions of ``O``.

    ``K`` qualifies when widening each of its intervals by ``slack`` sites on either
    side yields a multi-diamond base that lies inside ``O``.  ``slack=1`` keeps
    ``K`` compactly inside an open base; ``slack=0`` admits every sub-interval of
    a base in ``O``.  For ``O`` empty the result is ``[empty]``.
    """
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    omask = _mask(M, O)
    if not omask:
        return [Region(M, 0)]
    allowed = set(range(M.T) if rows is None else rows)
    singles = []
    for t in sorted(allowed):
        if not (0 <= t < M.T):
            continue
        for w in range(1, max_width + 1):
            if w + 2 * slack >= M.N:
                break
            for a in range(M.N):
                wide = Interval(t, a - slack, w + 2 * slack)
                wm = wide.mask(M)
                if wm & ~omask:
                    continue
                singles.append((Interval(t, a, w), wide, M.dependence(wm)))
    out = [Region(M, s[0].mask(M)) for s in singles]
    seen = {r.mask for r in out}
    if connected_only or max_components < 2:
        return out
    hulls = [M.hull(d) for _, _, d in singles]
    for k in range(2, max_components + 1):
        for combo in itertools.combinations(range(len(singles)), k):
            if len({singles[i][0].t for i in combo}) > 1:
                continue
            if any(hulls[i] & singles[j][2] for i, j in itertools.combinations(combo, 2)):
                continue
            union_d = 0
            for i in combo:
                union_d |= singles[i][2]
            if M.dependence(base_mask(M, [singles[i][1] for i in combo])) != union_d:
                continue
            km = base_mask(M, [singles[i][0] for i in combo])
            if km not in seen:
                seen.add(km)
                out.append(Region(M, km))
    return out


def diamond_bases(M: LatticeSpacetime, max_width: int, rows: Iterable[int]) -> List[Interval]:
    out = []
    for t in rows:
        for w in range(1, min(max_width, M.N - 1) + 1):
            for a in range(M.N):
                iv = Interval(t, a, w)
                if not iv.mask(M) & ~M.carrier:
                    out.append(iv)
    return out


def diamond_height(width: int) -> int:
    """Rows above (and below) the base row covered by the diamond over ``width`` sites."""
    return max((width - 1) // 2, 0)


# morphisms ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SpacetimeMorphism:
    """Embedding acting on each source component by ``(t, x) -> (t + a, x + b)``.

    Non-wrapping components are lifted to an arc of integers before the shift,
    so they may be placed in a lattice of a different circumference.
    """

    source: LatticeSpacetime
    target: LatticeSpacetime
    component_maps: Tuple[Tuple[int, int], ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        comps = self.source.components()
        if len(comps) != len(self.component_maps):
            raise InvalidMorphism("one (a, b) pair is needed per source component")
        object.__setattr__(self, "component_maps", tuple((int(a), int(b) % self.target.N)
                                                         for a, b in self.component_maps))
        if self.check:
            self.validate()

    @cached_property
    def _table(self) -> Dict[int, int]:
        S, Tg = self.source, self.target
        table = {}
        for comp, (a, b) in zip(S.components(), self.component_maps):
            wrap = S.wraps(comp)
            if wrap and S.N != Tg.N:
                raise InvalidMorphism("a wrapping component needs equal circumference")
            s = 0 if wrap else S.arc_start(comp)
            for i in _bits(comp):
                t, x = divmod(i, S.N)
                lx = x if wrap else s + (x - s) % S.N
                tt = t + a
                if not (0 <= tt < Tg.T):
                    raise InvalidMorphism(f"image row {tt} outside target")
                table[i] = tt * Tg.N + (lx + b) % Tg.N
        return table

    def __call__(self, p) -> Point:
        return self.target.point(self._table[self.source.index(p)])

    def map_mask(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= 1 << self._table[i]
        return out

    def map_region(self, R) -> Region:
        return Region(self.target, self.map_mask(self.source.mask(R)))

    @cached_property
    def image_mask(self) -> int:
        return self.map_mask(self.source.carrier)

    def image(self) -> Region:
        return Region(self.target, self.image_mask)

    def validate(self) -> None:
        S, Tg, table = self.source, self.target, self._table
        if len(set(table.values())) != len(table):
            raise InvalidMorphism("map is not injective")
        img = self.image_mask
        if img & ~Tg.carrier:
            raise InvalidMorphism("image leaves the target carrier")
        for i, j in table.items():
            if S.mu[i] != Tg.mu[j]:
                raise InvalidMorphism(f"coupling not preserved at {S.point(i)}")
        if not Tg.is_convex(img):
            raise InvalidMorphism("image is not causally convex")
        cimgs = [self.map_mask(c) for c in S.components()]
        for a, b in itertools.combinations(cimgs, 2):
            if Tg.hull(a) & b:
                raise InvalidMorphism("component images are causally related")
        for i, j in table.items():
            if self.map_mask(S.point_future[i]) != Tg.point_future[j] & img:
                raise InvalidMorphism(f"causal order not preserved at {S.point(i)}")

    def __matmul__(self, other: "SpacetimeMorphism") -> "SpacetimeMorphism":
        return compose(self, other)

    def pushforward(self, data: Dict) -> Dict:
        """Transport a point-indexed mapping to the target."""
        return {tuple(self(p)): v for p, v in data.items()}

    @classmethod
    def identity(cls, M: LatticeSpacetime) -> "SpacetimeMorphism":
        return cls(M, M, tuple((0, 0) for _ in M.components()))

    @classmethod
    def uniform(cls, source: LatticeSpacetime, target: LatticeSpacetime, a: int = 0, b: int = 0,
                check: bool = True) -> "SpacetimeMorphism":
        """Same ``(a, b)`` on every component (inclusions are ``a = b = 0``)."""
        return cls(source, target, tuple((a, b) for _ in source.components()), check=check)


def compose(f: SpacetimeMorphism, g: SpacetimeMorphism) -> SpacetimeMorphism:
    """``f o g``."""
    if g.target != f.source:
        raise InvalidMorphism("morphisms are not composable")
    S, Tg = g.source, f.target
    maps = []
    for comp in S.components():
        i0 = comp & -comp
        i0 = i0.bit_length() - 1
        t0, x0 = divmod(i0, S.N)
        j = f._table[g._table[i0]]
        t1, x1 = divmod(j, Tg.N)
        lx = x0 if S.wraps(comp) else S.arc_start(comp) + (x0 - S.arc_start(comp)) % S.N
        maps.append((t1 - t0, (x1 - lx) % Tg.N))
    h = SpacetimeMorphism(S, Tg, tuple(maps), check=False)
    for i in _bits(S.carrier):
        if h._table[i] != f._table[g._table[i]]:
            raise InvalidMorphism("composite is not of translation form")
    return h


# Cauchy structure -----------------------------------------------------------------------

def _path_live(M: LatticeSpacetime, img: int, consecutive: bool) -> bool:
    """Whether some inextendible path avoids ``img`` (or avoids two consecutive image points)."""
    n, c = M.N, M.carrier
    prev_live_in, prev_live_out, prevc = 0, 0, 0
    for t in range(M.T):
        crow = M.row(c, t)
        irow = M.row(img, t)
        start = crow & ~M._spread(prevc)
        if consecutive:
            from_out = M._spread(prev_live_out)
            from_in = M._spread(prev_live_in)
            reach = start | from_out | (from_in & ~irow)
            live_in = crow & irow & reach
            live_out = crow & ~irow & (start | from_out | from_in)
        else:
            live_in = 0
            live_out = crow & ~irow & (start | M._spread(prev_live_out))
        # a live point with no successor ends an avoiding inextendible path
        if t + 1 < M.T:
            nxt = M.row(c, t + 1)
            ends = crow & ~M._spread(nxt)
        else:
            ends = crow
        if (live_in | live_out) & ends:
            return True
        prev_live_in, prev_live_out, prevc = live_in, live_out, crow
    return False


def is_cauchy_set(M: LatticeSpacetime, S) -> bool:
    """Every inextendible causal path in ``M`` meets ``S``."""
    return not _path_live(M, _mask(M, S), consecutive=False)


def contains_cauchy_pair(M: LatticeSpacetime, S) -> bool:
    """Every inextendible causal path meets ``S`` in two consecutive points."""
    m = _mask(M, S)
    return m == M.carrier or not _path_live(M, m, consecutive=True)


def is_cauchy_morphism(psi: SpacetimeMorphism, kind: str = "pair") -> bool:
    if kind == "pair":
        return contains_cauchy_pair(psi.target, psi.image_mask)
    if kind == "row":
        return is_cauchy_set(psi.target, psi.image_mask)
    raise ValueError(f"unknown Cauchy kind {kind!r}")


class WedgeError(ValueError):
    pass


def wedge_regions(M: LatticeSpacetime, support, margin: int = 0) -> Tuple[Region, Region]:
    """``(M+, M-)`` with ``M+ = carrier - J-(supp)`` and ``M- = carrier - J+(supp)``.

    Each wedge must contain two adjacent full rows inside ``[margin, T - 1 - margin]``.
    """
    smask = _mask(M, support)
    if any(p.t < 1 or p.t > M.T - 2 for p in M.points(smask)):
        raise WedgeError("perturbation touches the temporal boundary")
    plus = M.carrier & ~M.past(smask)
    minus = M.carrier & ~M.future(smask)
    for w in (plus, minus):
        if not M.is_convex(w):
            raise WedgeError("wedge is not convex")
        sub = LatticeSpacetime(M.N, M.T, M.mu, w, check=False)
        if not sub.cauchy_pairs(margin, M.T - 1 - margin):
            raise WedgeError("wedge has no Cauchy pair inside the margin")
    return Region(M, plus), Region(M, minus)


# interpolation --------------------------------------------------------------------------

@dataclass(frozen=True)
class InterpolatingChain:
    M: LatticeSpacetime
    F: LatticeSpacetime
    I: LatticeSpacetime
    P: LatticeSpacetime
    M2: LatticeSpacetime
    F_to_M: SpacetimeMorphism
    F_to_I: SpacetimeMorphism
    P_to_I: SpacetimeMorphism
    P_to_M2: SpacetimeMorphism

    @property
    def morphisms(self) -> Tuple[SpacetimeMorphism, ...]:
        return (self.F_to_M, self.F_to_I, self.P_to_I, self.P_to_M2)


def slab(M: LatticeSpacetime, lo: int, hi: int) -> LatticeSpacetime:
    """Region spacetime of the full rows ``lo <= t < hi``."""
    return M.restrict(M.rows_mask(range(lo, hi)))


def make_interpolating_chain(M: LatticeSpacetime, M2: LatticeSpacetime, margin: int = 2,
                             slab_rows: int = 2, zone: int = 2) -> InterpolatingChain:
    """``M <- F -> I <- P -> M2`` with ``F`` a slab of ``M`` and ``P`` a slab of ``M2``.

    ``I`` copies ``M2`` on its early rows and (a translate of) ``M`` on its late
    rows, with a rational ramp in between.
    """
    if M.N != M2.N:
        raise ValueError("spacetimes with different circumference are not Cauchy-chain connected")
    if not (M.is_full and M2.is_full):
        raise ValueError("interpolation needs full-circle spacetimes")
    m, k = margin, slab_rows
    if M.T < 2 * m + k or M2.T < m + k:
        raise ValueError("spacetimes are too short for the requested slabs")
    TI = 2 * m + 2 * k + zone
    shift = TI - 2 * m - k
    N = M.N

    def mu(t, x):
        if t < m + k:
            return M2.mu_at((t, x))
        if t >= TI - m - k:
            return M.mu_at((t - shift, x))
        chi = mpq(t - (m + k) + 1, zone + 1)
        return chi * M.mu_at((m, x)) + (1 - chi) * M2.mu_at((m + k - 1, x))

    I = LatticeSpacetime.make(N, TI, mu)
    F = slab(M, m, m + k)
    P = slab(M2, m, m + k)
    return InterpolatingChain(
        M, F, I, P, M2,
        SpacetimeMorphism.uniform(F, M),
        SpacetimeMorphism.uniform(F, I, a=shift),
        SpacetimeMorphism.uniform(P, I),
        SpacetimeMorphism.uniform(P, M2),
    )


# probes -------------------------------------------------------------------------------

def probe_morphisms(N: int, T: int, mu=0) -> List[SpacetimeMorphism]:
    """A small family of valid morphisms around the full ``N x T`` lattice.

    Identity, rotation, two slab inclusions, a time-shifted embedding into a
    longer lattice, diamond and two-diamond inclusions, and a diamond carried
    into a wider circle.  Contains composable pairs.
    """
    M = LatticeSpacetime.make(N, T, mu)
    L = LatticeSpacetime.make(N, T + 2, mu)
    W = LatticeSpacetime.make(N + 2, T, mu)
    mid = T // 2
    S = slab(M, 1, T - 1)
    D = M.restrict(multi_diamond(M, [Interval(mid, 0, min(3, N - 1))]))
    out = [
        SpacetimeMorphism.identity(M),
        SpacetimeMorphism.uniform(M, M, 0, 1),
        SpacetimeMorphism.uniform(S, M),
        SpacetimeMorphism.uniform(S, M, 0, N - 1),
        SpacetimeMorphism.uniform(M, L, 1, 0),
        SpacetimeMorphism.uniform(D, M),
        SpacetimeMorphism.uniform(D, M, 0, 1),
        SpacetimeMorphism.uniform(D, W, 0, 1),
    ]
    if N >= 6:
        DD = M.restrict(multi_diamond(M, [Interval(mid, 0, 1), Interval(mid, 3, 1)]))
        out.append(SpacetimeMorphism.uniform(DD, M))
        out.append(SpacetimeMorphism(DD, M, ((0, 0), (0, 1)), check=True))
    return out


# external format ------------------------------------------------------------------------

def spacetime_from_dict(d: dict) -> LatticeSpacetime:
    N, T = int(d["N"]), int(d["T"])
    raw = d.get("mu", "0")
    default = "0"
    overrides = {}
    if isinstance(raw, (str, int)):
        default = raw
    elif isinstance(raw, dict):
        default = raw.get("default", "0")
        raw = raw.get("overrides", [])
    if isinstance(raw, list):
        for t, x, v in raw:
            overrides[(int(t), int(x) % N)] = Q(v)
    base = Q(default)
    carrier = d.get("carrier")
    return LatticeSpacetime.make(N, T, lambda t, x: overrides.get((t, x), base),
                                 None if carrier is None else [tuple(p) for p in carrier])
