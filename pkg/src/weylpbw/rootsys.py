"""Finite root systems with a pinned Chevalley sign convention.

Cartan matrices use the convention A[i][j] = <alpha_j, alpha_i^vee>, so row i
is the i-th simple coroot paired against the simple roots. Roots are stored
as integer coordinate tuples over the simple roots; weights as integer
tuples of fundamental-weight coordinates.

Positive roots are listed in strictly height-decreasing order, ties broken
reverse-lexicographically on the coordinate tuple (larger last coordinate
first). For G2 this reproduces the order 3a1+2a2, 3a1+a2, 2a1+a2, a1+a2,
a2, a1 that the rest of the package is pinned to.

Structure constants N[a,b] with [E_a, E_b] = N[a,b] E_{a+b} are fixed by the
extraspecial-pair convention: positive roots are scanned in increasing
(height, lex) order, and for each non-simple positive root the special pair
with the least first member gets the positive sign N = p+1. All other
constants are forced from those by the Jacobi identity and the standard
reflection rules, with every division asserted exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

Coords = Tuple[int, ...]
Weight = Tuple[int, ...]

RANK_CAP_DEFAULT = 4
_HEIGHT_CAP = 64  # safety stop for the closure loop; finite type never nears it


class CartanMatrixError(ValueError):
    """Raised when an input matrix violates a Cartan-matrix axiom."""


class ResourceCapError(RuntimeError):
    """Raised when a requested computation exceeds a configured cap."""


_LABEL_MATRICES: Dict[str, Tuple[Tuple[int, ...], ...]] = {
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -3), (-1, 2)),
    "F4": ((2, -1, 0, 0), (-1, 2, -1, 0), (0, -2, 2, -1), (0, 0, -1, 2)),
}


def _series_matrix(series: str, rank: int) -> Tuple[Tuple[int, ...], ...]:
    if series == "A":
        rows = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            rows[i][i] = 2
            if i + 1 < rank:
                rows[i][i + 1] = -1
                rows[i + 1][i] = -1
        return tuple(tuple(r) for r in rows)
    if series in ("B", "C") and rank >= 2:
        rows = [list(r) for r in _series_matrix("A", rank)]
        if series == "B":
            rows[rank - 1][rank - 2] = -2
        else:
            rows[rank - 2][rank - 1] = -2
        return tuple(tuple(r) for r in rows)
    if series == "D" and rank >= 4:
        rows = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            rows[i][i] = 2
        for i in range(rank - 2):
            rows[i][i + 1] = rows[i + 1][i] = -1
        rows[rank - 3][rank - 1] = rows[rank - 1][rank - 3] = -1
        return tuple(tuple(r) for r in rows)
    raise CartanMatrixError(f"unsupported type label {series}{rank}")


@dataclass(frozen=True)
class CartanData:
    """A validated finite-type Cartan matrix plus an optional label."""

    matrix: Tuple[Tuple[int, ...], ...]
    label: Optional[str] = None

    @staticmethod
    def from_label(label: str) -> "CartanData":
        label = label.strip().upper()
        if label in _LABEL_MATRICES:
            return CartanData(_LABEL_MATRICES[label], label)
        if len(label) >= 2 and label[0] in "ABCDG" and label[1:].isdigit():
            series, rank = label[0], int(label[1:])
            if series == "G":
                if rank != 2:
                    raise CartanMatrixError("type G exists only in rank 2")
                return CartanData(_LABEL_MATRICES["G2"], "G2")
            mat = _series_matrix(series, rank)
            cd = CartanData(mat, label)
            _validate_cartan(cd.matrix)
            return cd
        raise CartanMatrixError(f"unknown type label {label!r}")

    @staticmethod
    def from_matrix(rows: Sequence[Sequence[int]], label: Optional[str] = None) -> "CartanData":
        mat = tuple(tuple(int(v) for v in r) for r in rows)
        _validate_cartan(mat)
        return CartanData(mat, label)


def _validate_cartan(mat: Tuple[Tuple[int, ...], ...]) -> None:
    n = len(mat)
    if n == 0 or any(len(r) != n for r in mat):
        raise CartanMatrixError("axiom 'square': matrix must be square and nonempty")
    for i in range(n):
        if mat[i][i] != 2:
            raise CartanMatrixError(f"axiom 'diagonal=2': entry ({i},{i}) is {mat[i][i]}")
        for j in range(n):
            if i != j and mat[i][j] > 0:
                raise CartanMatrixError(f"axiom 'offdiag<=0': entry ({i},{j}) is {mat[i][j]}")
            if i != j and (mat[i][j] == 0) != (mat[j][i] == 0):
                raise CartanMatrixError(f"axiom 'zero-symmetry': entries ({i},{j}),({j},{i})")
    d = _symmetrizer(mat)  # raises on non-symmetrizable
    sym = [[Fraction(d[i] * mat[i][j]) for j in range(n)] for i in range(n)]
    # Finite type == symmetrization positive definite (leading minors > 0).
    work = [row[:] for row in sym]
    for k in range(n):
        minor_ok = work[k][k] > 0
        if not minor_ok:
            raise CartanMatrixError("axiom 'finite-type': symmetrization not positive definite")
        for r in range(k + 1, n):
            f = work[r][k] / work[k][k]
            for c in range(k, n):
                work[r][c] -= f * work[k][c]


def _symmetrizer(mat: Tuple[Tuple[int, ...], ...]) -> Tuple[int, ...]:
    """Positive integers d with d_i * a_ij symmetric; minimal on each component."""
    n = len(mat)
    d: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or mat[i][j] == 0:
                    continue
                val = d[i] * Fraction(mat[i][j], mat[j][i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise CartanMatrixError("axiom 'symmetrizable': inconsistent ratios")
    den = 1
    for v in d:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in d]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


def _height(c: Coords) -> int:
    return sum(c)


def _add(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Coords, b: Coords) -> Coords:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Coords) -> Coords:
    return tuple(-x for x in a)


class RootSystem:
    """Positive roots, Chevalley constants, and weight utilities for one type."""

    def __init__(self, cartan: CartanData, rank_cap: int = RANK_CAP_DEFAULT):
        _validate_cartan(cartan.matrix)
        self.cartan = cartan
        self.A = cartan.matrix
        self.rank = len(self.A)
        if self.rank > rank_cap:
            raise ResourceCapError(f"rank {self.rank} exceeds cap {rank_cap}")
        self.d = _symmetrizer(self.A)
        self._close_roots()
        self.positive_roots: Tuple[Coords, ...] = self._descending_height_order()
        self.n_pos = len(self.positive_roots)
        self.pos_index = {b: k for k, b in enumerate(self.positive_roots)}
        if cartan.label == "G2":
            expected = ((3, 2), (3, 1), (2, 1), (1, 1), (0, 1), (1, 0))
            assert self.positive_roots == expected, "G2 root order convention broken"
        self._build_structure_constants()
        self._nfull_cache: Dict[Tuple[Coords, Coords], int] = {}

    # -- root enumeration ---------------------------------------------------

    def _close_roots(self) -> None:
        simples = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        found = set(simples)
        frontier = list(simples)
        height = 1
        while frontier:
            height += 1
            if height > _HEIGHT_CAP:
                raise CartanMatrixError("axiom 'finite-type': closure did not terminate")
            nxt = []
            for beta in frontier:
                for i, alpha in enumerate(simples):
                    p = 0
                    while _sub(beta, tuple(v * (p + 1) for v in alpha)) in found:
                        p += 1
                    if p - self.root_pairing(beta, alpha) > 0:
                        cand = _add(beta, alpha)
                        if cand not in found:
                            found.add(cand)
                            nxt.append(cand)
            frontier = nxt
        self._pos_set = found
        self._all_roots = found | {_neg(b) for b in found}

    def root_pairing(self, beta: Coords, alpha_or_root: Coords) -> int:
        """<beta, gamma^vee> for roots beta, gamma (both in root coordinates)."""
        cor = self.coroot_coords(alpha_or_root)
        wt = self.root_weight_coords(beta)
        return sum(c * w for c, w in zip(cor, wt))

    def _descending_height_order(self) -> Tuple[Coords, ...]:
        def key(b: Coords):
            return (-_height(b), tuple(-c for c in reversed(b)))

        return tuple(sorted(self._pos_set, key=key))

    # -- bilinear form ------------------------------------------------------

    def bilinear(self, a: Coords, b: Coords) -> int:
        total = 0
        for i in range(self.rank):
            if a[i]:
                for j in range(self.rank):
                    if b[j]:
                        total += a[i] * b[j] * self.d[i] * self.A[i][j]
        return total

    def norm(self, b: Coords) -> int:
        return self.bilinear(b, b)

    def coroot_coords(self, b: Coords) -> Coords:
        nn = self.norm(b)
        out = []
        for i in range(self.rank):
            num = 2 * self.d[i] * b[i]
            assert num % nn == 0, "coroot coordinates must be integral"
            out.append(num // nn)
        return tuple(out)

    def root_weight_coords(self, b: Coords) -> Weight:
        return tuple(sum(self.A[i][j] * b[j] for j in range(self.rank)) for i in range(self.rank))

    def is_root(self, c: Coords) -> bool:
        return c in self._all_roots

    def is_positive_root(self, c: Coords) -> bool:
        return c in self._pos_set

    def height(self, b: Coords) -> int:
        return _height(b)

    # -- structure constants ------------------------------------------------

    def _p_value(self, a: Coords, b: Coords) -> int:
        p = 0
        cur = _sub(b, a)
        while cur in self._all_roots:
            p += 1
            cur = _sub(cur, a)
        return p

    def _build_structure_constants(self) -> None:
        carter = sorted(self._pos_set, key=lambda b: (_height(b), b))
        ckey = {b: i for i, b in enumerate(carter)}
        table: Dict[Tuple[Coords, Coords], int] = {}
        self._npos = table

        def nfull(a: Coords, b: Coords) -> int:
            return self._resolve_constant(a, b)

        for zeta in carter:
            if _height(zeta) < 2:
                continue
            pairs = []
            for a in carter:
                b = _sub(zeta, a)
                if b in self._pos_set and ckey[a] < ckey[b]:
                    pairs.append((a, b))
            pairs.sort(key=lambda ab: ckey[ab[0]])
            a0, b0 = pairs[0]
            n0 = self._p_value(a0, b0) + 1
            table[(a0, b0)] = n0
            table[(b0, a0)] = -n0
            for xi, eta in pairs[1:]:
                t1 = t2 = 0
                if _sub(xi, a0) in self._all_roots:
                    t1 = nfull(_neg(a0), xi) * nfull(_sub(xi, a0), eta)
                if _sub(eta, a0) in self._all_roots:
                    t2 = nfull(eta, _neg(a0)) * nfull(_sub(eta, a0), xi)
                dnm = nfull(zeta, _neg(a0))
                val = Fraction(-(t1 + t2), dnm)
                assert val.denominator == 1, "Jacobi propagation must stay integral"
                n = int(val)
                assert abs(n) == self._p_value(xi, eta) + 1, "|N| must equal p+1"
                table[(xi, eta)] = n
                table[(eta, xi)] = -n

    def _resolve_constant(self, a: Coords, b: Coords) -> int:
        c = _add(a, b)
        if c not in self._all_roots:
            return 0
        apos = a in self._pos_set
        bpos = b in self._pos_set
        if apos and bpos:
            return self._npos[(a, b)]
        if not apos and not bpos:
            return -self._npos[(_neg(a), _neg(b))]
        if not apos:
            return -self._resolve_constant(b, a)
        # a positive, b negative; use the zero-sum triple (a, b, -c).
        if c in self._pos_set:
            val = Fraction(-self.norm(c) * self._npos[(_neg(b), c)], self.norm(a))
        else:
            val = Fraction(self.norm(c) * self._npos[(_neg(c), a)], self.norm(b))
        assert val.denominator == 1, "mixed-sign constant must be integral"
        return int(val)

    def structure_constant(self, a: Coords, b: Coords) -> int:
        """N with [E_a, E_b] = N * E_{a+b}; 0 when a+b is not a root."""
        key = (a, b)
        hit = self._nfull_cache.get(key)
        if hit is None:
            hit = self._resolve_constant(a, b)
            self._nfull_cache[key] = hit
        return hit

    def extraspecial_pair(self, gamma: Coords) -> Tuple[Coords, Coords]:
        """The sign-defining decomposition of a non-simple positive root."""
        assert gamma in self._pos_set and _height(gamma) >= 2
        best = None
        for a in self._pos_set:
            b = _sub(gamma, a)
            if b in self._pos_set and (_height(a), a) < (_height(b), b):
                if best is None or (_height(a), a) < (_height(best[0]), best[0]):
                    best = (a, b)
        assert best is not None
        return best

    # -- adjoint representation ----------------------------------------------

    @property
    def adjoint_dim(self) -> int:
        return 2 * self.n_pos + self.rank

    def basis_element(self, idx: int):
        """('E', root) | ('H', i) | ('F', root) for the adjoint basis order."""
        if idx < self.n_pos:
            return ("E", self.positive_roots[idx])
        if idx < self.n_pos + self.rank:
            return ("H", idx - self.n_pos)
        return ("F", self.positive_roots[idx - self.n_pos - self.rank])

    def _elem_index(self, kind: str, val) -> int:
        if kind == "E":
            return self.pos_index[val]
        if kind == "H":
            return self.n_pos + val
        return self.n_pos + self.rank + self.pos_index[val]

    def bracket_basis(self, i: int, j: int) -> Dict[int, int]:
        """[x_i, x_j] expanded over the adjoint basis, as a sparse vector."""
        ki, vi = self.basis_element(i)
        kj, vj = self.basis_element(j)
        if ki == "H" and kj == "H":
            return {}
        if ki == "H" or kj == "H":
            sign = 1 if ki == "H" else -1
            hidx = vi if ki == "H" else vj
            kind, root = (kj, vj) if ki == "H" else (ki, vi)
            signed = root if kind == "E" else _neg(root)
            coef = sum(self.A[hidx][t] * signed[t] for t in range(self.rank))
            tgt = self._elem_index(kind, root)
            return {tgt: sign * coef} if coef else {}
        ra = vi if ki == "E" else _neg(vi)
        rb = vj if kj == "E" else _neg(vj)
        s = _add(ra, rb)
        if all(v == 0 for v in s):
            pos = ra if ki == "E" else rb
            sgn = 1 if ki == "E" else -1
            out: Dict[int, int] = {}
            for t, c in enumerate(self.coroot_coords(pos)):
                if c:
                    out[self._elem_index("H", t)] = sgn * c
            return out
        n = self.structure_constant(ra, rb)
        if n == 0:
            return {}
        if s in self._pos_set:
            return {self._elem_index("E", s): n}
        return {self._elem_index("F", _neg(s)): n}

    def ad_matrix(self, idx: int) -> List[List[int]]:
        """Integer matrix of ad(x_idx) on the adjoint basis (columns = inputs)."""
        n = self.adjoint_dim
        mat = [[0] * n for _ in range(n)]
        for j in range(n):
            for r, v in self.bracket_basis(idx, j).items():
                mat[r][j] = v
        return mat

    def ad_divided(self, idx: int, k: int) -> List[List[int]]:
        """ad(x_idx)^k / k! — integer-valued on the Chevalley basis (asserted)."""
        n = self.adjoint_dim
        cur = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        base = self.ad_matrix(idx)
        for step in range(1, k + 1):
            nxt = [[Fraction(0)] * n for _ in range(n)]
            for r in range(n):
                for t in range(n):
                    if base[r][t]:
                        br = base[r][t]
                        row = cur[t]
                        for c in range(n):
                            if row[c]:
                                nxt[r][c] += br * row[c]
            cur = [[v / step for v in row] for row in nxt]
        out = []
        for row in cur:
            irow = []
            for v in row:
                assert v.denominator == 1, "divided adjoint power must be integral"
                irow.append(int(v))
            out.append(irow)
        return out

    # -- weights --------------------------------------------------------------

    @property
    def rho(self) -> Weight:
        return tuple([1] * self.rank)

    def fundamental_weight(self, i: int) -> Weight:
        return tuple(int(i == j) for j in range(self.rank))

    def pairing(self, lam: Weight, beta: Coords) -> int:
        """<lam, beta^vee> for a weight lam and a root beta."""
        cor = self.coroot_coords(beta)
        return sum(c * m for c, m in zip(cor, lam))

    def is_dominant(self, lam: Weight) -> bool:
        return all(m >= 0 for m in lam)

    def dominates(self, mu: Weight, nu: Weight) -> bool:
        """nu ⪯ mu in the dominance order used here: mu - nu dominant."""
        return all(a - b >= 0 for a, b in zip(mu, nu))

    def star(self, lam: Weight) -> Weight:
        """-w0(lam): the highest weight of the dual of V(lam)."""
        cur = list(lam)
        while True:
            i = next((t for t in range(self.rank) if cur[t] > 0), None)
            if i is None:
                break
            ci = cur[i]
            for j in range(self.rank):
                cur[j] -= ci * self.A[j][i]
        return tuple(-v for v in cur)

    def root_coords_of(self, lam: Weight) -> Tuple[Fraction, ...]:
        """Coordinates of a weight over the simple roots (may be fractional)."""
        from .linalg import solve_dense

        cols = solve_dense(self.A, [list(lam)])
        return tuple(cols[0])

    def depth_vector(self, lam: Weight) -> Coords:
        """Root coordinates of lam - w0(lam): the weight-box extent of V(lam)."""
        span = tuple(a + b for a, b in zip(lam, self.star(lam)))
        coords = self.root_coords_of(span)
        out = []
        for v in coords:
            assert v.denominator == 1, "lam - w0(lam) must lie in the root lattice"
            out.append(int(v))
        return tuple(out)

    def monomial_depth(self, s: Sequence[int]) -> Coords:
        """Root coordinates of sum_beta s_beta * beta for a multi-index s."""
        if len(s) != self.n_pos:
            raise ValueError("multi-index length does not match the root count")
        out = [0] * self.rank
        for e, b in zip(s, self.positive_roots):
            for i in range(self.rank):
                out[i] += e * b[i]
        return tuple(out)

    def weyl_dimension(self, lam: Weight) -> int:
        if not self.is_dominant(lam):
            raise ValueError(f"weight {lam} is not dominant")
        num = den = 1
        rho = self.rho
        for b in self.positive_roots:
            lp = self.pairing(tuple(l + r for l, r in zip(lam, rho)), b)
            rp = self.pairing(rho, b)
            num *= lp
            den *= rp
        assert num % den == 0
        return num // den

    def root_name(self, b: Coords) -> str:
        """Digit-string name of a positive root, e.g. (2,1) -> '112'."""
        assert b in self._pos_set
        return "".join(str(i + 1) * b[i] for i in range(self.rank))


@lru_cache(maxsize=None)
def _cached_system(matrix: Tuple[Tuple[int, ...], ...], label: Optional[str], rank_cap: int) -> RootSystem:
    return RootSystem(CartanData(matrix, label), rank_cap=rank_cap)


def build_root_system(spec, rank_cap: int = RANK_CAP_DEFAULT) -> RootSystem:
    """Build (and memoize) a root system from a label or an explicit matrix."""
    if isinstance(spec, RootSystem):
        return spec
    if isinstance(spec, CartanData):
        cd = spec
    elif isinstance(spec, str):
        cd = CartanData.from_label(spec)
    else:
        cd = CartanData.from_matrix(spec)
    return _cached_system(cd.matrix, cd.label, rank_cap)
