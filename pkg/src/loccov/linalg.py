"""Exact rational matrix kernels.

Matrices are row-major lists of lists of ``gmpy2.mpq``.  Nothing here ever
touches floating point; every routine returns exact results.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from gmpy2 import mpq

Matrix = List[List[mpq]]
Vector = List[mpq]

ZERO = mpq(0)
ONE = mpq(1)


def Q(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"rational literal must be 'p/q', got {value!r}")
        return mpq(text)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def qstr(value: mpq) -> str:
    """Canonical ``"p/q"`` rendering (integers render without a slash)."""
    value = mpq(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = ONE
    return out


def copy(a: Sequence[Sequence[mpq]]) -> Matrix:
    return [list(r) for r in a]


def transpose(a: Sequence[Sequence[mpq]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[mpq]], b: Sequence[Sequence[mpq]], inner: int | None = None) -> Matrix:
    """Product ``a @ b``; ``inner`` disambiguates empty operands."""
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, v) for k, v in enumerate(row) if v]
        out.append([sum((v * col[k] for k, v in nz), ZERO) for col in bt])
    return out


def matvec(a: Sequence[Sequence[mpq]], v: Sequence[mpq]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x), ZERO) for row in a]


def sub(a: Sequence[Sequence[mpq]], b: Sequence[Sequence[mpq]]) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Sequence[Sequence[mpq]], s) -> Matrix:
    s = Q(s)
    return [[s * x for x in r] for r in a]


def block_diag(blocks: Sequence[Sequence[Sequence[mpq]]], shapes: Sequence[Tuple[int, int]]) -> Matrix:
    """Block diagonal matrix; ``shapes`` gives (rows, cols) so empty blocks are placed correctly."""
    rows = sum(r for r, _ in shapes)
    cols = sum(c for _, c in shapes)
    out = zeros(rows, cols)
    r0 = c0 = 0
    for blk, (r, c) in zip(blocks, shapes):
        for i in range(r):
            out[r0 + i][c0:c0 + c] = list(blk[i])
        r0 += r
        c0 += c
    return out


def rref(rows: Iterable[Sequence[mpq]], ncols: int) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form.  Returns the nonzero rows and their pivot columns."""
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivrow = m[r]
        inv = ONE / pivrow[c]
        if inv != ONE:
            pivrow = [v * inv for v in pivrow]
            m[r] = pivrow
        nz = [(k, v) for k, v in enumerate(pivrow) if v]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for k, v in nz:
                        row[k] = row[k] - f * v
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Iterable[Sequence[mpq]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[mpq]], ncols: int) -> Matrix:
    """Basis (as rows) of ``{v : rows @ v = 0}``."""
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, c in enumerate(piv):
            v[c] = -red[i][f]
        out.append(v)
    return out


def inverse(a: Sequence[Sequence[mpq]]) -> Matrix:
    n = len(a)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in red[:n]]


def solve(a: Sequence[Sequence[mpq]], b: Sequence[Sequence[mpq]], ncols: int) -> Matrix | None:
    """Solve ``a @ x = b`` for ``x`` (``a`` has ``ncols`` columns).  Returns None if inconsistent.

    Free variables are set to zero, so the solution is unique iff ``a`` has full column rank.
    """
    nb = len(b[0]) if b else 0
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    red, piv = rref(aug, ncols + nb)
    if any(c >= ncols for c in piv):
        return None
    x = zeros(ncols, nb)
    for i, c in enumerate(piv):
        x[c] = red[i][ncols:]
    return x


def is_zero(a: Sequence[Sequence[mpq]]) -> bool:
    return all(not v for r in a for v in r)


def freeze(a: Sequence[Sequence[mpq]]) -> Tuple[Tuple[mpq, ...], ...]:
    return tuple(tuple(r) for r in a)
