"""Exact linear algebra over Q, Z and GF(p).

Everything in here is exact: Fraction entries, arbitrary-precision integer
rows, or ints reduced mod a prime. No floating point. Sparse vectors are
dicts keyed by column index; dense matrices are lists of row lists.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Sequence, Tuple

Row = Dict[int, int]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def clear_denominators(vec: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to a primitive integer vector on the same line."""
    den = 1
    for v in vec:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


class RowSpaceGF:
    """Incremental row space over GF(p); rows are sparse dicts, pivot value 1."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: Dict[int, Row] = {}

    def _reduce(self, vec: Row) -> Row:
        p = self.p
        vec = {c: v % p for c, v in vec.items() if v % p}
        while vec:
            c = min(vec)
            piv = self.pivots.get(c)
            if piv is None:
                return vec
            f = vec[c]
            for cc, vv in piv.items():
                nv = (vec.get(cc, 0) - f * vv) % p
                if nv:
                    vec[cc] = nv
                else:
                    vec.pop(cc, None)
        return vec

    def insert(self, vec: Row) -> bool:
        """Add a vector; True if it enlarged the space."""
        red = self._reduce(dict(vec))
        if not red:
            return False
        c = min(red)
        inv = pow(red[c], -1, self.p)
        self.pivots[c] = {cc: (vv * inv) % self.p for cc, vv in red.items()}
        return True

    def contains(self, vec: Row) -> bool:
        return not self._reduce(dict(vec))

    @property
    def rank(self) -> int:
        return len(self.pivots)


class RowSpaceQQ:
    """Incremental row space over Q, kept fraction-free.

    Rows are stored as primitive integer vectors; a rational vector spans the
    same line as its cleared-denominator integer vector, so rank and
    membership agree with the Q-span. Reduction is by cross-multiplication
    (a*vec - b*piv), with a gcd strip after each step to control growth.
    """

    def __init__(self) -> None:
        self.pivots: Dict[int, Row] = {}

    @staticmethod
    def _primitive(vec: Row) -> Row:
        g = 0
        for v in vec.values():
            g = gcd(g, v)
        if g > 1:
            return {c: v // g for c, v in vec.items()}
        return vec

    def _reduce(self, vec: Row) -> Row:
        vec = {c: v for c, v in vec.items() if v}
        while vec:
            c = min(vec)
            piv = self.pivots.get(c)
            if piv is None:
                return self._primitive(vec)
            a, b = piv[c], vec[c]
            new: Row = {}
            for cc in set(vec) | set(piv):
                v = a * vec.get(cc, 0) - b * piv.get(cc, 0)
                if v:
                    new[cc] = v
            vec = self._primitive(new)
        return vec

    def insert(self, vec: Row) -> bool:
        red = self._reduce(dict(vec))
        if not red:
            return False
        c = min(red)
        if red[c] < 0:
            red = {cc: -vv for cc, vv in red.items()}
        self.pivots[c] = red
        return True

    def contains(self, vec: Row) -> bool:
        return not self._reduce(dict(vec))

    @property
    def rank(self) -> int:
        return len(self.pivots)


def row_space(p: int | None):
    """Rank/membership engine for the given scalar field (None means Q)."""
    return RowSpaceQQ() if p is None else RowSpaceGF(p)


def solve_dense(mat: Sequence[Sequence], rhs_cols: Sequence[Sequence]) -> List[List[Fraction]]:
    """Solve mat @ X = rhs for square exact mat; rhs given column-wise.

    Returns the solution column-wise. Raises ValueError('singular matrix')
    when mat is not invertible.
    """
    n = len(mat)
    a = [[Fraction(mat[r][c]) for c in range(n)] for r in range(n)]
    m = len(rhs_cols)
    b = [[Fraction(col[r]) for col in rhs_cols] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        pv = a[col][col]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col] / pv
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
            for c in range(m):
                b[r][c] -= f * b[col][c]
    return [[b[r][c] / a[r][r] for r in range(n)] for c in range(m)]


def solve_mod_p(mat: Sequence[Sequence[int]], rhs_cols: Sequence[Sequence[int]],
                p: int) -> List[List[int]]:
    """Solve mat @ X = rhs over GF(p) for square invertible mat; rhs column-wise.

    Returns the solution column-wise with entries in [0, p). Raises
    ValueError('singular matrix') when mat is not invertible mod p.
    """
    n = len(mat)
    a = [[mat[r][c] % p for c in range(n)] for r in range(n)]
    m = len(rhs_cols)
    b = [[col[r] % p for col in rhs_cols] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        inv = pow(a[col][col], -1, p)
        a[col] = [(v * inv) % p for v in a[col]]
        b[col] = [(v * inv) % p for v in b[col]]
        for r in range(n):
            if r == col or not a[r][col]:
                continue
            f = a[r][col]
            for c in range(col, n):
                a[r][c] = (a[r][c] - f * a[col][c]) % p
            for c in range(m):
                b[r][c] = (b[r][c] - f * b[col][c]) % p
    return [[b[r][c] for r in range(n)] for c in range(m)]


def invert_dense(mat: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(mat)
    eye = [[Fraction(int(r == c)) for r in range(n)] for c in range(n)]
    cols = solve_dense(mat, eye)
    # cols[c][r] is entry (r, c) of the inverse; return row-major.
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def rank_dense(mat: Sequence[Sequence]) -> Tuple[int, List[int]]:
    """Exact rank and pivot-column list of a rectangular Fraction/int matrix."""
    if not mat:
        return 0, []
    rows = [[Fraction(v) for v in r] for r in mat]
    ncols = len(rows[0])
    pivots: List[int] = []
    r0 = 0
    for col in range(ncols):
        piv = next((r for r in range(r0, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        pv = rows[r0][col]
        for r in range(len(rows)):
            if r != r0 and rows[r][col] != 0:
                f = rows[r][col] / pv
                for c in range(col, ncols):
                    rows[r][c] -= f * rows[r0][c]
        pivots.append(col)
        r0 += 1
        if r0 == len(rows):
            break
    return len(pivots), pivots


def hnf_rows(rows: Iterable[Sequence[int]], width: int) -> List[Tuple[int, ...]]:
    """Row-style Hermite normal form of the integer row span.

    Pivots positive, entries above each pivot reduced into [0, pivot), rows
    ordered by pivot column. The result is the canonical basis of the span.
    """
    piv: Dict[int, List[int]] = {}
    for raw in rows:
        vec = list(raw)
        while True:
            c = next((i for i in range(width) if vec[i]), None)
            if c is None:
                break
            if c not in piv:
                if vec[c] < 0:
                    vec = [-v for v in vec]
                piv[c] = vec
                break
            base = piv[c]
            g, x, y = xgcd(base[c], vec[c])
            fb, fv = base[c] // g, vec[c] // g
            comb = [x * base[i] + y * vec[i] for i in range(width)]
            vec = [fb * vec[i] - fv * base[i] for i in range(width)]
            piv[c] = comb
    cols = sorted(piv)
    basis = [piv[c] for c in cols]
    # Reduce entries above each pivot to the canonical range.
    for j, c in enumerate(cols):
        pv = basis[j][c]
        for i in range(j):
            q = basis[i][c] // pv
            if q:
                basis[i] = [basis[i][k] - q * basis[j][k] for k in range(width)]
    return [tuple(r) for r in basis]


class ScaledLattice:
    """Z-lattice inside Q^width accumulated from rational generators.

    Internally den * L is kept as an integer echelon; finalize() returns
    (den, HNF rows of den * L) with the common content removed.
    """

    def __init__(self, width: int):
        self.width = width
        self.den = 1
        self._rows: List[List[int]] = []

    def insert(self, vec: Sequence[Fraction]) -> None:
        d = 1
        for v in vec:
            d = lcm(d, Fraction(v).denominator)
        if self.den % d:
            factor = lcm(self.den, d) // self.den
            self._rows = [[v * factor for v in r] for r in self._rows]
            self.den *= factor
        self._rows.append([int(v * self.den) for v in vec])

    def finalize(self) -> Tuple[int, List[Tuple[int, ...]]]:
        rows = hnf_rows(self._rows, self.width)
        if not rows:
            return 1, []
        g = self.den
        for r in rows:
            for v in r:
                g = gcd(g, v)
        if g > 1:
            rows = [tuple(v // g for v in r) for r in rows]
            return self.den // g, rows
        return self.den, rows
