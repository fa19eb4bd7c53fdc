"""PBW-degree filtrations, essential monomials, and polynomial symbols.

The lowering operators F_beta, taken in the fixed root order, give every
highest-weight module a spanning family F^s v indexed by multi-indices s.
Filtering by total degree of s yields the PBW filtration. The *essential*
multi-indices are selected by a greedy sweep inside each weight block: the
block's monomials are visited by degree, within a degree from the largest
monomial downward, and a monomial is kept exactly when its vector is
independent of the ones already kept. Everything here is exact rank
arithmetic over Q or GF(p); the kept vectors of degree <= n are always a
basis of filtration level n.

Functionals on a Weyl module (sections of the induced module) get polynomial
symbols: the degree-n symbol of xi reads off its values on the degree-n
monomial vectors. Products of sections are computed through the coproduct
and re-expanded in the essential dual basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .charzero import DIM_CAP_DEFAULT
from .linalg import row_space, solve_dense, solve_mod_p
from .rootsys import RootSystem
from .weylmod import (DualModuleP, HyperMonomial, Vector, WeylModuleP,
                      tensor_act, tensor_of)

MultiIndex = Tuple[int, ...]


# --------------------------------------------------------------------------
# total order on multi-indices
# --------------------------------------------------------------------------

def order_key(s: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for the total order: degree first, then the exponents read
    from the last root backwards (so ties break at the largest root index,
    where the smaller exponent means the smaller monomial)."""
    return (sum(s), tuple(reversed(s)))


def order_compare(s: Sequence[int], t: Sequence[int]) -> int:
    """-1, 0, or 1 as s <, =, > t in the monomial total order."""
    if len(s) != len(t):
        raise ValueError("multi-indices of different lengths are incomparable")
    ks, kt = order_key(s), order_key(t)
    return (ks > kt) - (ks < kt)


# --------------------------------------------------------------------------
# multi-index enumeration
# --------------------------------------------------------------------------

def monomials_with_depth(system: RootSystem, depth: Sequence[int],
                         degree: Optional[int] = None) -> List[MultiIndex]:
    """All s with sum_beta s_beta * beta equal to ``depth`` (root coordinates),
    optionally restricted to total degree ``degree``."""
    roots = system.positive_roots
    n = len(roots)
    out: List[MultiIndex] = []
    cur = [0] * n

    def rec(pos: int, rem: Tuple[int, ...], deg_left: Optional[int]) -> None:
        if pos == n:
            if all(v == 0 for v in rem) and (deg_left is None or deg_left == 0):
                out.append(tuple(cur))
            return
        beta = roots[pos]
        cap = min(rem[i] // beta[i] for i in range(len(rem)) if beta[i])
        if deg_left is not None:
            cap = min(cap, deg_left)
        for k in range(cap + 1):
            cur[pos] = k
            rec(pos + 1, tuple(r - k * b for r, b in zip(rem, beta)),
                None if deg_left is None else deg_left - k)
        cur[pos] = 0

    rec(0, tuple(depth), degree)
    return out


def monomials_of_degree(system: RootSystem, box: Sequence[int],
                        degree: int) -> Iterator[MultiIndex]:
    """All s of total degree ``degree`` whose depth fits inside ``box``."""
    roots = system.positive_roots
    n = len(roots)
    cur = [0] * n

    def rec(pos: int, room: Tuple[int, ...], deg_left: int) -> Iterator[MultiIndex]:
        if pos == n:
            if deg_left == 0:
                yield tuple(cur)
            return
        beta = roots[pos]
        cap = min(room[i] // beta[i] for i in range(len(room)) if beta[i])
        cap = min(cap, deg_left)
        for k in range(cap + 1):
            cur[pos] = k
            yield from rec(pos + 1, tuple(r - k * b for r, b in zip(room, beta)),
                           deg_left - k)
        cur[pos] = 0

    yield from rec(0, tuple(box), degree)


# --------------------------------------------------------------------------
# essential sets
# --------------------------------------------------------------------------

def sweep_key(s: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for the essential sweep: by degree, and within a degree from
    the largest monomial downward. The within-degree direction matters: the
    monomial kept in a tied block is the largest one, which is what makes the
    greedy sweep reproduce the G2 inequality table."""
    return (sum(s), tuple(-v for v in reversed(s)))


@dataclass
class BlockSweep:
    """The greedy sweep of one weight block: all multi-indices of the block's
    depth in sweep order, which of them are essential, and their vectors."""
    depth: Tuple[int, ...]
    all_indices: List[MultiIndex]          # sweep order
    essential: List[MultiIndex]            # ascending total order
    vectors: Dict[MultiIndex, List[int]]   # essential index -> block coords


@dataclass
class EssentialSet:
    """All essential multi-indices of a module, block by block."""
    module: WeylModuleP
    by_block: Dict[Tuple[int, ...], BlockSweep]
    up_to_degree: Optional[int] = None
    _functionals: Dict[MultiIndex, Vector] = field(default_factory=dict, repr=False)

    @property
    def indices(self) -> List[MultiIndex]:
        out = [s for sweep in self.by_block.values() for s in sweep.essential]
        if self.up_to_degree is not None:
            out = [s for s in out if sum(s) <= self.up_to_degree]
        return sorted(out, key=order_key)

    def __contains__(self, s: Sequence[int]) -> bool:
        s = tuple(s)
        depth = self.module.system.monomial_depth(s)
        sweep = self.by_block.get(depth)
        return sweep is not None and s in sweep.vectors

    def degree_histogram(self) -> List[int]:
        degs = [sum(s) for s in self.indices]
        out = [0] * (max(degs) + 1 if degs else 1)
        for d in degs:
            out[d] += 1
        return out

    def dual_functional(self, s: Sequence[int]) -> Vector:
        """The functional taking value 1 on F^s v and 0 on the other
        essential monomial vectors (the essential dual basis)."""
        s = tuple(s)
        hit = self._functionals.get(s)
        if hit is not None:
            return {t: list(c) for t, c in hit.items()}
        depth = self.module.system.monomial_depth(s)
        sweep = self.by_block.get(depth)
        if sweep is None or s not in sweep.vectors:
            raise ValueError(f"{s} is not an essential multi-index of this module")
        ess = sweep.essential
        mat = [sweep.vectors[t] for t in ess]
        unit = [1 if t == s else 0 for t in ess]
        if self.module.p is None:
            coords = list(solve_dense(mat, [[Fraction(u) for u in unit]])[0])
        else:
            coords = solve_mod_p(mat, [unit], self.module.p)[0]
        xi = {depth: coords}
        self._functionals[s] = {t: list(c) for t, c in xi.items()}
        return xi


def _sweep_block(m: WeylModuleP, depth: Tuple[int, ...]) -> BlockSweep:
    indices = sorted(monomials_with_depth(m.system, depth), key=sweep_key)
    space = row_space(m.p)
    essential: List[MultiIndex] = []
    vectors: Dict[MultiIndex, List[int]] = {}
    for s in indices:
        vec = m.act(HyperMonomial("F", s), m.highest_vector())
        coords = vec.get(depth)
        if coords is None or not any(coords):
            continue
        if space.insert({i: v for i, v in enumerate(coords) if v}):
            essential.append(s)
            vectors[s] = list(coords)
    assert space.rank == m.dims.get(depth, 0), (
        f"monomial vectors fail to span the block at depth {depth}")
    essential.sort(key=order_key)
    return BlockSweep(depth, indices, essential, vectors)


def essential_set(m: WeylModuleP, up_to_degree: Optional[int] = None) -> EssentialSet:
    """Sweep every weight block of the module for essential multi-indices.

    The sweep in a block is always complete (all degrees compete);
    ``up_to_degree`` only filters the reported set.
    """
    by_block = {t: _sweep_block(m, t) for t in m.block_order if m.dims[t]}
    return EssentialSet(m, by_block, up_to_degree)


@dataclass
class FiltrationTable:
    """Dimensions of the PBW filtration levels of one module."""
    highest_weight: Tuple[int, ...]
    p: Optional[int]
    level_dims: List[int]            # dim V_n for n = 0..top
    graded_dims: List[int]           # dim V_n - dim V_{n-1}

    @property
    def top_dim(self) -> int:
        return self.level_dims[-1] if self.level_dims else 0


def pbw_filtration(m: WeylModuleP, n: int) -> FiltrationTable:
    """Ranks of the spans of the monomial vectors of degree <= 0, 1, ..., n.

    Computed directly from rank sweeps (blockwise, since distinct weights are
    independent), not from the essential-set combinatorics, so the two can be
    cross-checked against each other.
    """
    box = m.system.depth_vector(m.highest_weight)
    spaces: Dict[Tuple[int, ...], object] = {}
    level_dims: List[int] = []
    rank_total = 0
    for deg in range(n + 1):
        for s in monomials_of_degree(m.system, box, deg):
            depth = m.system.monomial_depth(s)
            if depth not in m.dims:
                continue
            vec = m.act(HyperMonomial("F", s), m.highest_vector())
            coords = vec.get(depth)
            if coords is None or not any(coords):
                continue
            space = spaces.get(depth)
            if space is None:
                space = spaces[depth] = row_space(m.p)
            if space.insert({i: v for i, v in enumerate(coords) if v}):
                rank_total += 1
        level_dims.append(rank_total)
    graded = [level_dims[0]] + [level_dims[i] - level_dims[i - 1]
                                for i in range(1, len(level_dims))]
    return FiltrationTable(m.highest_weight, m.p, level_dims, graded)


# --------------------------------------------------------------------------
# the G2 essential table (inequality description)
# --------------------------------------------------------------------------

def g2_essential_member(k: int, l: int, s: Sequence[int]) -> bool:
    """Whether s satisfies the inequality description of the essential set
    of the G2 Weyl module with highest weight k*w1 + l*w2."""
    if len(s) != 6 or any(v < 0 for v in s):
        return False
    s1, s2, s3, s4, s5, s6 = s
    return (s5 <= l and s6 <= k
            and s2 + s3 + s6 <= k + l
            and s3 + s4 + s6 <= k + l
            and s4 + s5 + s6 <= k + l
            and s1 + s2 + s3 + s4 + s5 <= k + 2 * l
            and s2 + s3 + s4 + s5 + s6 <= k + 2 * l)


def g2_essential_table(k: int, l: int) -> List[MultiIndex]:
    """All solutions of the G2 essential-set inequalities for k*w1 + l*w2,
    sorted in the monomial total order."""
    if k < 0 or l < 0:
        raise ValueError("the weight coordinates must be dominant (nonnegative)")
    out: List[MultiIndex] = []
    kl, k2l = k + l, k + 2 * l
    for s1 in range(k2l + 1):
        for s2 in range(min(kl, k2l - s1) + 1):
            for s3 in range(min(kl - s2, k2l - s1 - s2) + 1):
                for s4 in range(min(kl - s3, k2l - s1 - s2 - s3) + 1):
                    for s5 in range(min(l, k2l - s1 - s2 - s3 - s4, kl - s4) + 1):
                        for s6 in range(min(k, kl - s2 - s3, kl - s3 - s4,
                                            kl - s4 - s5,
                                            k2l - s2 - s3 - s4 - s5) + 1):
                            out.append((s1, s2, s3, s4, s5, s6))
    out.sort(key=order_key)
    return out


# --------------------------------------------------------------------------
# polynomials (symbols on the nilradical)
# --------------------------------------------------------------------------

class Polynomial:
    """A polynomial in one variable per positive root, exact coefficients.

    Coefficients are ints (or Fractions over Q); zero coefficients are never
    stored. Multiplication is the honest product x^s * x^t = x^(s+t).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[MultiIndex, object]] = None):
        self.coeffs = {tuple(s): c for s, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, s: Sequence[int], c=1) -> "Polynomial":
        return cls({tuple(s): c})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: Dict[MultiIndex, object] = {}
        for s, a in self.coeffs.items():
            for t, b in other.coeffs.items():
                key = tuple(x + y for x, y in zip(s, t))
                out[key] = out.get(key, 0) + a * b
        return Polynomial(out)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if n == 0:
            if not self.coeffs:
                raise ValueError("0^0 of the zero polynomial")
            width = len(next(iter(self.coeffs)))
            return Polynomial({tuple([0] * width): 1})
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        return Polynomial({s: c * v for s, v in self.coeffs.items()})

    def reduce(self, p: Optional[int]) -> "Polynomial":
        if p is None:
            return self
        return Polynomial({s: c % p for s, c in self.coeffs.items()})

    def coefficient(self, s: Sequence[int]):
        return self.coeffs.get(tuple(s), 0)

    def support(self) -> List[MultiIndex]:
        return sorted(self.coeffs, key=order_key)

    def leading_index(self) -> Optional[MultiIndex]:
        return max(self.coeffs, key=order_key) if self.coeffs else None

    def degrees(self) -> List[int]:
        return sorted({sum(s) for s in self.coeffs})

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for s in self.support():
            c = self.coeffs[s]
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                            for i, e in enumerate(s) if e) or "1"
            bits.append(f"{c}*{mono}" if c != 1 or mono == "1" else mono)
        return " + ".join(bits)


# --------------------------------------------------------------------------
# sections of induced modules and their symbols
# --------------------------------------------------------------------------

class InducedSections:
    """The induced module H0(lam) realised as functionals on V(lam*), with
    its essential dual basis and the symbol maps."""

    def __init__(self, system: RootSystem, highest_weight: Sequence[int],
                 p: Optional[int], dim_cap: int = DIM_CAP_DEFAULT):
        self.system = system
        self.weight = tuple(highest_weight)
        self.p = p
        star = system.star(self.weight)
        self.module = WeylModuleP.build(system, star, p, dim_cap)  # V(lam*)
        self.dual = DualModuleP(self.module)                       # H0(lam)
        self.essentials = essential_set(self.module)

    def xi(self, s: Sequence[int]) -> Vector:
        return self.essentials.dual_functional(s)

    def pair(self, xi: Vector, vec: Vector):
        return self.dual.pair(xi, vec)

    def monomial_vector(self, t: Sequence[int]) -> Vector:
        return self.module.act(HyperMonomial("F", t), self.module.highest_vector())

    def act(self, mono: HyperMonomial, xi: Vector) -> Vector:
        return self.dual.act(mono, xi)

    def functional_weight(self, xi: Vector):
        """The weight of a homogeneous functional (None for zero or mixed)."""
        seen = None
        for blk, coords in xi.items():
            if not any(coords):
                continue
            w = self.dual.functional_weight(blk)
            if seen is None:
                seen = w
            elif seen != w:
                return None
        return seen


def dual_basis_element(sections: InducedSections, s: Sequence[int]) -> Vector:
    """The essential dual-basis functional xi_lam(s), s in es(lam*)."""
    return sections.xi(s)


def j_map(sections: InducedSections, xi: Vector, n: int) -> Polynomial:
    """The degree-n polynomial symbol of a functional in filtration level n.

    The functional is expanded in the essential dual basis (the coefficient
    at s is xi(F^s v)); components of degree > n die in the degree-n graded
    piece, components of degree < n mean xi is not in level n and are
    rejected. Each surviving basis component xi(s) contributes its values on
    the monomial vectors F^t v over deg t = deg s, t >= s only — that support
    restriction is what makes the symbol of a dual-basis element a monomial
    whenever nothing larger of its degree shares its weight.
    """
    out = Polynomial()
    for blk, coords in xi.items():
        if not any(coords):
            continue
        sweep = sections.essentials.by_block[blk]
        for s in sweep.essential:
            c = sections.pair(xi, {blk: sweep.vectors[s]})
            if not c:
                continue
            if sum(s) < n:
                raise ValueError(
                    f"functional has a component at essential degree {sum(s)}"
                    f" < {n}, so it does not lie in filtration level {n}")
            if sum(s) > n:
                continue
            xi_s = sections.essentials.dual_functional(s)
            term: Dict[MultiIndex, object] = {}
            for t in monomials_with_depth(sections.system, blk, degree=n):
                if order_compare(t, s) < 0:
                    continue
                val = sections.pair(xi_s, sections.monomial_vector(t))
                if val:
                    term[t] = c * val if sections.p is None else (c * val) % sections.p
            out = out + Polynomial(term)
    return out.reduce(sections.p)


def section_product(a: InducedSections, b: InducedSections,
                    target: InducedSections, xi: Vector, eta: Vector) -> Vector:
    """The product of sections H0(lam) x H0(mu) -> H0(lam + mu).

    The value of xi*eta on F^s v_{(lam+mu)*} is (xi (x) eta) applied to the
    coproduct of F^s acting on the tensor of highest vectors; the result is
    re-expanded through the essential basis of each block of V((lam+mu)*).
    """
    if not (a.p == b.p == target.p):
        raise ValueError("section product requires a common characteristic")
    if tuple(x + y for x, y in zip(a.weight, b.weight)) != target.weight:
        raise ValueError("target weight must be the sum of the factor weights")
    va = a.module.highest_vector()
    vb = b.module.highest_vector()
    start = tensor_of((va, vb))
    mods = (a.module, b.module)
    out: Vector = {}
    for blk, sweep in target.essentials.by_block.items():
        ess = sweep.essential
        vals = []
        for s in ess:
            tv = tensor_act(mods, HyperMonomial("F", s), start)
            total = 0
            for (ta, tb), entries in tv.items():
                row_a = xi.get(ta)
                row_b = eta.get(tb)
                if row_a is None or row_b is None:
                    continue
                for (ra, rb), val in entries.items():
                    total += val * row_a[ra] * row_b[rb]
            vals.append(total if target.p is None else total % target.p)
        if not any(vals):
            continue
        mat = [sweep.vectors[s] for s in ess]
        if target.p is None:
            coords = list(solve_dense(mat, [[Fraction(v) for v in vals]])[0])
        else:
            coords = solve_mod_p(mat, [vals], target.p)[0]
        out[blk] = coords
    return out


# --------------------------------------------------------------------------
# the divided action of raising operators on symbols
# --------------------------------------------------------------------------

def _chain_constants(system: RootSystem, beta_pos: int,
                     gamma_pos: int) -> List[int]:
    """c_0 = 1, and c_r = the coefficient of E_{gamma + r*beta} in
    (ad E_beta)^r / r! applied to E_gamma, for as long as gamma + r*beta
    stays a positive root."""
    beta = system.positive_roots[beta_pos]
    out = [1]
    run = 1
    cur = system.positive_roots[gamma_pos]
    r = 1
    while True:
        nxt = tuple(g + b for g, b in zip(cur, beta))
        if not system.is_positive_root(nxt):
            break
        run *= system.structure_constant(beta, cur)
        val = Fraction(run, math.factorial(r))
        assert val.denominator == 1, "divided chain coefficient not integral"
        out.append(int(val))
        cur = nxt
        r += 1
    return out


def sn_divided_action(system: RootSystem, beta_pos: int, k: int,
                      poly: Polynomial, p: Optional[int] = None) -> Polynomial:
    """Apply the divided operator E_beta^(k) to a symbol polynomial.

    E_beta acts on the variables by the adjoint action, x_gamma climbing the
    chain gamma, gamma+beta, gamma+2beta, ... with the divided adjoint chain
    coefficients; E^(k) distributes a total climb of k over all the factors
    of each monomial (the divided Leibniz rule), so no factorials appear.
    """
    n = system.n_pos
    if beta_pos < 0 or beta_pos >= n:
        raise ValueError("beta_pos is out of range")
    if k < 0:
        raise ValueError("the divided power must be nonnegative")
    beta = system.positive_roots[beta_pos]
    chains = [_chain_constants(system, beta_pos, g) for g in range(n)]
    climb_to: Dict[Tuple[int, int], int] = {}
    for g in range(n):
        gamma = system.positive_roots[g]
        for lv in range(1, len(chains[g])):
            tgt = tuple(a + lv * b for a, b in zip(gamma, beta))
            climb_to[(g, lv)] = system.pos_index[tgt]

    result: Dict[MultiIndex, object] = {}
    for s, coeff in poly.coeffs.items():
        positions = [g for g in range(n) if s[g]]
        start = [0 if g in positions else s[g] for g in range(n)]

        def distribute(idx: int, budget: int, exp: List[int], mult) -> None:
            if idx == len(positions):
                if budget == 0 and mult:
                    key = tuple(exp)
                    result[key] = result.get(key, 0) + mult * coeff
                return
            g = positions[idx]
            chain = chains[g]
            top = len(chain) - 1

            def split(lv: int, left: int, spent: int, factor, delta: List[int]) -> None:
                if lv == 0:
                    delta[g] += left
                    distribute(idx + 1, budget - spent,
                               [a + b for a, b in zip(exp, delta)], factor)
                    delta[g] -= left
                    return
                for cnt in range(left + 1):
                    cost = spent + cnt * lv
                    if cost > budget:
                        break
                    f2 = factor * (chain[lv] ** cnt) * math.comb(left, cnt)
                    tgt = climb_to[(g, lv)]
                    delta[tgt] += cnt
                    split(lv - 1, left - cnt, cost, f2, delta)
                    delta[tgt] -= cnt

            split(top, s[g], 0, mult, [0] * n)

        distribute(0, k, list(start), 1)

    return Polynomial(result).reduce(p)
