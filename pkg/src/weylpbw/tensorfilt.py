"""The induced PBW filtration on tensor products of Weyl modules.

For the highest-weight vectors v in V(lam) and w in V(mu), level n of the
induced filtration is

    VV_n = span{ (F^s (x) 1) . Delta(F^t) . (v (x) w) : deg s <= n },

with t running over all lowering monomials (truncated by the weight depth of
the tensor module, beyond which every monomial acts as zero). Spanning sets
use lowering monomials only — the cyclic vector is highest-weight — and the
raising/lowering stability of the levels is then *checked*, not presupposed.

Every spanning vector is a weight vector, so ranks are swept one total
weight at a time with exact elimination (no probabilistic shortcuts). The
module also verifies the structural facts used downstream: the two product
orders span the same levels, the comparison map from the single-factor
filtration is filtration-preserving (with its graded kernel measured, since
it is not injective in general), and the norm-form identity
(F0 (x) 1) . Delta(F0) = F0 (x) F0 holds on the cyclic vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import SIGN_CONVENTION_TAG, __version__
from .cache import stable_hash
from .charzero import DIM_CAP_DEFAULT
from .linalg import row_space
from .pbw import monomials_of_degree, pbw_filtration
from .rootsys import ResourceCapError, RootSystem
from .weylmod import (HyperMonomial, TensorVector, WeylModuleP, f_zero,
                      tensor_act, tensor_leg_act, tensor_of)

Weight = Tuple[int, ...]


def _total_depth(tvec: TensorVector) -> Optional[Weight]:
    """The common total weight depth of a tensor vector's components, or
    None for the zero vector. Raises on an inhomogeneous vector."""
    group: Optional[Weight] = None
    for (ta, tb), entries in tvec.items():
        if not any(entries.values()):
            continue
        here = tuple(a + b for a, b in zip(ta, tb))
        if group is None:
            group = here
        elif group != here:
            raise ValueError("tensor vector is not weight-homogeneous")
    return group


class _WeightSpan:
    """Row spaces of weight-homogeneous tensor vectors, one per total weight."""

    def __init__(self, p: Optional[int]):
        self.p = p
        self._spaces: Dict[Weight, object] = {}
        self._cols: Dict[Weight, Dict[tuple, int]] = {}

    def _flatten(self, group: Weight, tvec: TensorVector) -> Dict[int, int]:
        cols = self._cols.setdefault(group, {})
        row: Dict[int, int] = {}
        for key, entries in tvec.items():
            for ij, val in entries.items():
                if not val:
                    continue
                c = cols.get((key, ij))
                if c is None:
                    c = cols[(key, ij)] = len(cols)
                row[c] = val
        return row

    def insert(self, tvec: TensorVector) -> bool:
        group = _total_depth(tvec)
        if group is None:
            return False
        space = self._spaces.get(group)
        if space is None:
            space = self._spaces[group] = row_space(self.p)
        return space.insert(self._flatten(group, tvec))

    def contains(self, tvec: TensorVector) -> bool:
        group = _total_depth(tvec)
        if group is None:
            return True
        space = self._spaces.get(group)
        if space is None:
            return False
        return space.contains(self._flatten(group, tvec))

    @property
    def rank(self) -> int:
        return sum(space.rank for space in self._spaces.values())


@dataclass(frozen=True)
class SmashOperator:
    """A pair (A, X) of lowering/arbitrary monomials acting as (A (x) 1) after
    the coproduct of X — the module-level shadow of the smash product A # X."""
    outer: HyperMonomial
    inner: HyperMonomial

    def __post_init__(self):
        if self.outer.side != "F":
            raise ValueError("the outer factor acts on the first leg and must lower")

    def apply(self, mods: Tuple[WeylModuleP, WeylModuleP],
              tvec: TensorVector) -> TensorVector:
        return tensor_leg_act(mods, 0, self.outer, tensor_act(mods, self.inner, tvec))


def f0_smash_f0(n_pos: int, p: int) -> SmashOperator:
    """The operator (F0 (x) 1) . Delta(F0), F0 the all-(p-1) lowering monomial."""
    f0 = f_zero(n_pos, p)
    return SmashOperator(f0, f0)


@dataclass
class InducedFiltrationTable:
    """Level dimensions of the induced filtration on V(lam) (x) V(mu)."""
    lam: Weight
    mu: Weight
    p: Optional[int]
    level_dims: List[int]
    graded_dims: List[int]
    tensor_dim: int
    weight_group: Optional[Weight]
    input_hash: str

    @property
    def top_dim(self) -> int:
        return self.level_dims[-1] if self.level_dims else 0

    def to_payload(self) -> dict:
        return {
            "highest_weights": [list(self.lam), list(self.mu)],
            "p": self.p,
            "levels": [{"n": i, "dim": d} for i, d in enumerate(self.level_dims)],
            "graded": list(self.graded_dims),
            "tensor_dim": self.tensor_dim,
            "weight_group": None if self.weight_group is None else list(self.weight_group),
            "input_hash": self.input_hash,
        }


def _input_hash(system: RootSystem, lam: Weight, mu: Weight,
                p: Optional[int]) -> str:
    return stable_hash({
        "cartan": [list(r) for r in system.cartan.matrix],
        "weights": [list(lam), list(mu)],
        "p": p,
        "sign_convention": SIGN_CONVENTION_TAG,
        "version": __version__,
    })


class InducedFiltration:
    """The filtration computation: modules, spanning sweep, kept vectors.

    ``weight_group`` restricts everything to one total weight space (given as
    the root-coordinate depth below lam + mu), which is exact because the
    spanning vectors are weight vectors; it makes single-vector membership
    tests cheap on modules whose full tensor square would be expensive.
    """

    def __init__(self, system: RootSystem, lam: Sequence[int], mu: Sequence[int],
                 p: Optional[int], up_to: Optional[int] = None,
                 dim_cap: int = DIM_CAP_DEFAULT,
                 weight_group: Optional[Sequence[int]] = None):
        self.system = system
        self.lam: Weight = tuple(lam)
        self.mu: Weight = tuple(mu)
        self.p = p
        self.weight_group = None if weight_group is None else tuple(weight_group)
        a = WeylModuleP.build(system, self.lam, p, dim_cap)
        b = WeylModuleP.build(system, self.mu, p, dim_cap)
        self.mods = (a, b)
        dim_a = sum(a.dims.values())
        dim_b = sum(b.dims.values())
        if dim_a * dim_b > dim_cap:
            raise ResourceCapError(
                f"tensor dimension {dim_a * dim_b} exceeds the cap {dim_cap}")
        self.tensor_dim = dim_a * dim_b
        self.start = tensor_of((a.highest_vector(), b.highest_vector()),
                               reduce=a.reduce)
        total = tuple(x + y for x, y in zip(self.lam, self.mu))
        self.s_box = system.depth_vector(self.lam)
        self.t_box = system.depth_vector(total)
        self.s_max = sum(self.s_box)
        self.requested = self.s_max if up_to is None else up_to
        self._tpairs = self._delta_orbit()
        self.span = _WeightSpan(p)
        self.kept: List[Tuple[int, TensorVector]] = []
        self.level_dims: List[int] = []
        self._sweep(min(self.requested, self.s_max))

    def _delta_orbit(self) -> List[Tuple[Weight, TensorVector]]:
        out: List[Tuple[Weight, TensorVector]] = []
        w = self.weight_group
        for d in range(sum(self.t_box) + 1):
            for t in monomials_of_degree(self.system, self.t_box, d):
                dt = self.system.monomial_depth(t)
                if w is not None and any(x > y for x, y in zip(dt, w)):
                    continue
                vec = tensor_act(self.mods, HyperMonomial("F", t), self.start)
                if vec:
                    out.append((dt, vec))
        return out

    def _sweep(self, top: int) -> None:
        for n in range(top + 1):
            if self.span.rank < self._group_cap():
                for s in monomials_of_degree(self.system, self.s_box, n):
                    ds = self.system.monomial_depth(s)
                    if self.weight_group is not None:
                        rem = tuple(x - y for x, y in zip(self.weight_group, ds))
                        if any(v < 0 for v in rem):
                            continue
                    mono = HyperMonomial("F", s)
                    for dt, base in self._tpairs:
                        if self.weight_group is not None and dt != rem:
                            continue
                        vec = tensor_leg_act(self.mods, 0, mono, base)
                        if vec and self.span.insert(vec):
                            self.kept.append((n, vec))
            self.level_dims.append(self.span.rank)

    def _group_cap(self) -> int:
        # the sweep can stop early once the reachable dimension is hit;
        # restricted runs have no cheap a-priori bound, so never stop early
        return self.tensor_dim if self.weight_group is None else self.tensor_dim + 1

    def level(self, n: int) -> int:
        if n < 0:
            return 0
        if n < len(self.level_dims):
            return self.level_dims[n]
        return self.level_dims[-1]

    def contains(self, tvec: TensorVector) -> bool:
        """Membership of a weight-homogeneous vector in the top computed level."""
        return self.span.contains(tvec)

    def contains_at(self, tvec: TensorVector, n: int) -> bool:
        """Membership in VV_n for any computed level n, re-swept from the
        kept vectors of degree <= n."""
        if n >= len(self.level_dims) - 1:
            return self.contains(tvec)
        span = _WeightSpan(self.p)
        for d, vec in self.kept:
            if d <= n:
                span.insert(vec)
        return span.contains(tvec)

    def table(self) -> InducedFiltrationTable:
        levels = [self.level(n) for n in range(self.requested + 1)]
        graded = [levels[0]] + [levels[i] - levels[i - 1]
                                for i in range(1, len(levels))]
        return InducedFiltrationTable(
            self.lam, self.mu, self.p, levels, graded, self.tensor_dim,
            self.weight_group, _input_hash(self.system, self.lam, self.mu, self.p))


def induced_filtration(system: RootSystem, lam: Sequence[int], mu: Sequence[int],
                       p: Optional[int], up_to: Optional[int] = None,
                       dim_cap: int = DIM_CAP_DEFAULT) -> InducedFiltrationTable:
    """Level dimensions of the induced filtration, swept to stabilization
    (or to ``up_to`` when given)."""
    return InducedFiltration(system, lam, mu, p, up_to, dim_cap).table()


def vv_level_contains(system: RootSystem, lam: Sequence[int], mu: Sequence[int],
                      p: Optional[int], tvec: TensorVector, level: int,
                      dim_cap: int = DIM_CAP_DEFAULT) -> bool:
    """Whether a weight-homogeneous tensor vector lies in VV_level, computed
    on that vector's weight space only."""
    group = _total_depth(tvec)
    if group is None:
        return True
    filt = InducedFiltration(system, lam, mu, p, up_to=level, dim_cap=dim_cap,
                             weight_group=group)
    return filt.contains(tvec)


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------

@dataclass
class ProductOrderReport:
    """Per-level comparison of span{(F^s (x) 1) . Delta(F^t) . vv} against
    span{Delta(F^t) . (F^s (x) 1) . vv}."""
    lam: Weight
    mu: Weight
    p: Optional[int]
    smash_dims: List[int]
    reversed_dims: List[int]
    union_dims: List[int]

    @property
    def equal(self) -> bool:
        return self.smash_dims == self.reversed_dims == self.union_dims

    def equal_at(self, n: int) -> bool:
        return self.smash_dims[n] == self.reversed_dims[n] == self.union_dims[n]


def product_order_equality(system: RootSystem, lam: Sequence[int],
                           mu: Sequence[int], p: Optional[int],
                           up_to: Optional[int] = None,
                           dim_cap: int = DIM_CAP_DEFAULT) -> ProductOrderReport:
    """Check that applying the leg monomial before or after the coproduct
    monomial spans the same filtration level, degree by degree."""
    filt = InducedFiltration(system, lam, mu, p, up_to, dim_cap)
    top = min(filt.requested, filt.s_max)
    span_rev = _WeightSpan(p)
    span_union = _WeightSpan(p)
    smash_dims: List[int] = []
    reversed_dims: List[int] = []
    union_dims: List[int] = []
    kept_iter = iter(filt.kept + [(top + 1, None)])
    pending = next(kept_iter)
    for n in range(top + 1):
        # the smash-order vectors were kept by the main sweep; feed them in
        while pending[0] <= n:
            span_union.insert(pending[1])
            pending = next(kept_iter)
        for s in monomials_of_degree(system, filt.s_box, n):
            base = tensor_leg_act(filt.mods, 0, HyperMonomial("F", s), filt.start)
            if not base:
                continue
            for d in range(sum(filt.t_box) + 1):
                for t in monomials_of_degree(system, filt.t_box, d):
                    vec = tensor_act(filt.mods, HyperMonomial("F", t), base)
                    if vec:
                        if span_rev.insert(vec):
                            span_union.insert(vec)
        smash_dims.append(filt.level_dims[n])
        reversed_dims.append(span_rev.rank)
        union_dims.append(span_union.rank)
    return ProductOrderReport(filt.lam, filt.mu, p, smash_dims, reversed_dims,
                              union_dims)


@dataclass
class ComparisonReport:
    """The filtration-preserving map V(lam) -> V(lam) (x) v_mu, graded."""
    lam: Weight
    mu: Weight
    p: Optional[int]
    inclusion_ok: bool
    module_graded_dims: List[int]
    image_dims: List[int]
    kernel_dims: List[int]

    @property
    def injective(self) -> bool:
        return self.inclusion_ok and not any(self.kernel_dims)


def comparison_map_check(system: RootSystem, lam: Sequence[int],
                         mu: Sequence[int], p: Optional[int],
                         dim_cap: int = DIM_CAP_DEFAULT) -> ComparisonReport:
    """Verify V_n(lam) (x) v_mu lies in VV_n at every level and measure the
    kernel of the induced map on graded pieces, degree by degree."""
    filt = InducedFiltration(system, lam, mu, p, dim_cap=dim_cap)
    top = filt.s_max
    table = pbw_filtration(filt.mods[0], top)
    sweep = _WeightSpan(p)
    inclusion_ok = True
    image_dims: List[int] = []
    kernel_dims: List[int] = []
    kept_iter = iter(filt.kept + [(top + 1, None)])
    pending = next(kept_iter)
    for n in range(top + 1):
        # entering this iteration the sweep holds exactly VV_{n-1}
        new = 0
        for s in monomials_of_degree(system, filt.s_box, n):
            vec = tensor_leg_act(filt.mods, 0, HyperMonomial("F", s), filt.start)
            if vec and sweep.insert(vec):
                new += 1
        while pending[0] <= n:
            sweep.insert(pending[1])
            pending = next(kept_iter)
        if sweep.rank != filt.level_dims[n]:
            # a comparison vector escaped VV_n: the inclusion fails
            inclusion_ok = False
        grn = table.graded_dims[n] if n < len(table.graded_dims) else 0
        image_dims.append(new)
        kernel_dims.append(grn - new)
    return ComparisonReport(filt.lam, filt.mu, p, inclusion_ok,
                            list(table.graded_dims), image_dims, kernel_dims)


def dual_filtration_dims(system: RootSystem, lam: Sequence[int],
                         mu: Sequence[int], p: Optional[int], n: int,
                         dim_cap: int = DIM_CAP_DEFAULT) -> int:
    """Level n of the filtration dual to the induced one: functionals on
    V(lam*) (x) V(mu*) vanishing on VV_{n-1}(lam*, mu*)."""
    lam_star = system.star(tuple(lam))
    mu_star = system.star(tuple(mu))
    if n <= 0:
        a = WeylModuleP.build(system, lam_star, p, dim_cap)
        b = WeylModuleP.build(system, mu_star, p, dim_cap)
        return sum(a.dims.values()) * sum(b.dims.values())
    filt = InducedFiltration(system, lam_star, mu_star, p, up_to=n - 1,
                             dim_cap=dim_cap)
    return filt.tensor_dim - filt.level(n - 1)


@dataclass
class StabilityReport:
    """Whether each filtration level is stable under the comonomial action
    of every divided power Delta(E^(k)), Delta(F^(k)) up to a cap."""
    lam: Weight
    mu: Weight
    p: Optional[int]
    k_cap: int
    checked_levels: int
    violations: List[Tuple[int, str, int, int]]  # (level, side, root pos, k)

    @property
    def stable(self) -> bool:
        return not self.violations


def delta_stability_check(system: RootSystem, lam: Sequence[int],
                          mu: Sequence[int], p: Optional[int],
                          up_to: Optional[int] = None, k_cap: int = 2,
                          dim_cap: int = DIM_CAP_DEFAULT) -> StabilityReport:
    """Apply Delta(X^(k)) to a basis of each level and test membership; a
    violation is recorded rather than raised, so reports stay comparable."""
    filt = InducedFiltration(system, lam, mu, p, up_to, dim_cap)
    top = min(filt.requested, filt.s_max)
    sweep = _WeightSpan(p)
    violations: List[Tuple[int, str, int, int]] = []
    basis: List[TensorVector] = []
    kept_iter = iter(filt.kept + [(top + 1, None)])
    pending = next(kept_iter)
    zero = [0] * system.n_pos
    for n in range(top + 1):
        while pending[0] <= n:
            sweep.insert(pending[1])
            basis.append(pending[1])
            pending = next(kept_iter)
        for w in basis:
            for side in ("F", "E"):
                for pos in range(system.n_pos):
                    for k in range(1, k_cap + 1):
                        expo = list(zero)
                        expo[pos] = k
                        u = tensor_act(filt.mods, HyperMonomial(side, tuple(expo)), w)
                        if u and not sweep.contains(u):
                            violations.append((n, side, pos, k))
    return StabilityReport(filt.lam, filt.mu, p, k_cap, top, violations)


@dataclass
class NormFormReport:
    """The norm-form identity on the cyclic vector and its filtration
    consequence: F0.v (x) F0.w lands in level (p-1)N."""
    lam: Weight
    mu: Weight
    p: int
    identity_ok: bool
    vector_nonzero: bool
    membership_level: int
    membership_ok: Optional[bool]  # None when the vector is zero

    @property
    def ok(self) -> bool:
        return self.identity_ok and (self.membership_ok is not False)


def norm_form_identity_check(system: RootSystem, lam: Sequence[int],
                             mu: Sequence[int], p: int,
                             dim_cap: int = DIM_CAP_DEFAULT) -> NormFormReport:
    """Check (F0 (x) 1) . Delta(F0) . (v (x) w) = F0.v (x) F0.w and, when the
    right side is nonzero, its membership in VV_{(p-1)N}."""
    if p is None:
        raise ValueError("the norm form lives in positive characteristic")
    a = WeylModuleP.build(system, tuple(lam), p, dim_cap)
    b = WeylModuleP.build(system, tuple(mu), p, dim_cap)
    f0 = f_zero(system.n_pos, p)
    start = tensor_of((a.highest_vector(), b.highest_vector()), reduce=a.reduce)
    lhs = tensor_leg_act((a, b), 0, f0, tensor_act((a, b), f0, start))
    rhs = tensor_of((a.act(f0, a.highest_vector()), b.act(f0, b.highest_vector())),
                    reduce=a.reduce)
    identity_ok = lhs == rhs
    level = (p - 1) * system.n_pos
    nonzero = bool(rhs)
    membership: Optional[bool] = None
    if nonzero:
        membership = vv_level_contains(system, lam, mu, p, rhs, level, dim_cap)
    return NormFormReport(tuple(lam), tuple(mu), p, identity_ok, nonzero,
                          level, membership)
