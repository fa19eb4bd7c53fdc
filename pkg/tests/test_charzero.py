"""Highest-weight modules over Q and their minimal integral forms."""

from fractions import Fraction

import pytest

from weylpbw import AdmissibleLattice, HWModuleQ, ResourceCapError, build_root_system
from weylpbw.cache import stable_dumps


@pytest.fixture(scope="module")
def g2():
    return build_root_system("G2")


def test_dimensions_match_weyl_formula(g2):
    for weight, dim in [((1, 0), 7), ((0, 1), 14), ((1, 1), 64)]:
        module = HWModuleQ(g2, weight)
        assert sum(blk.dim for blk in module.blocks.values()) == dim
        assert dim == g2.weyl_dimension(weight)


def test_dimensions_small_rank():
    a1 = build_root_system("A1")
    for n in range(6):
        module = HWModuleQ(a1, (n,))
        assert sum(blk.dim for blk in module.blocks.values()) == n + 1
    a2 = build_root_system("A2")
    module = HWModuleQ(a2, (1, 1))
    assert sum(blk.dim for blk in module.blocks.values()) == 8


def test_block_structure_g2_fundamental(g2):
    module = HWModuleQ(g2, (1, 0))
    # 7 = 1 + 1 + ... with a 1-dimensional zero-weight block at depth (2, 1)
    dims = {t: blk.dim for t, blk in module.blocks.items()}
    assert dims[(0, 0)] == 1
    assert dims[(2, 1)] == 1
    assert sum(dims.values()) == 7
    assert module.blocks[(2, 1)].weight == (0, 0)


def test_gram_contravariance(g2):
    """The invariant form is symmetric and nondegenerate per block over Q."""
    from weylpbw.linalg import rank_dense

    module = HWModuleQ(g2, (0, 1))
    for t, blk in module.blocks.items():
        gram = module.gram(t)
        assert len(gram) == blk.dim
        for i in range(blk.dim):
            for j in range(blk.dim):
                assert gram[i][j] == gram[j][i]
        rank, _ = rank_dense(gram)
        assert rank == blk.dim, t


def test_monomial_vector_highest(g2):
    module = HWModuleQ(g2, (1, 0))
    t, coords = module.monomial_vector((0, 0, 0, 0, 0, 0))
    assert t == (0, 0)
    assert coords == [Fraction(1)]
    t, coords = module.monomial_vector((1, 0, 0, 0, 0, 0))
    assert t == (3, 2)   # depth of the highest positive root


def test_dim_cap_enforced(g2):
    with pytest.raises(ResourceCapError):
        HWModuleQ(g2, (4, 4), dim_cap=100)
    with pytest.raises(ResourceCapError):
        AdmissibleLattice.build(g2, (4, 4), dim_cap=100)


def test_lattice_dims_and_blocks(g2):
    lattice = AdmissibleLattice.build(g2, (0, 1))
    assert lattice.dim == 14
    assert lattice.highest_weight == (0, 1)
    assert set(lattice.dims) == set(lattice.weights)
    assert lattice.dims[(0, 0)] == 1
    # the adjoint representation has a 2-dimensional zero-weight space
    assert lattice.dims[(3, 2)] == 2
    assert lattice.weights[(3, 2)] == (0, 0)


def test_lattice_operators_are_integral(g2):
    lattice = AdmissibleLattice.build(g2, (1, 0))
    for mat in list(lattice.e_gen.values()) + list(lattice.f_gen.values()):
        for row in mat:
            for entry in row:
                assert isinstance(entry, int)


def test_lattice_payload_round_trip(g2):
    lattice = AdmissibleLattice.build(g2, (1, 0))
    payload = lattice.to_payload()
    rebuilt = AdmissibleLattice.from_payload(payload)
    assert rebuilt.dims == lattice.dims
    assert rebuilt.weights == lattice.weights
    assert rebuilt.e_gen == lattice.e_gen
    assert rebuilt.f_gen == lattice.f_gen
    # serialize -> deserialize -> serialize is byte-identical
    assert stable_dumps(rebuilt.to_payload()) == stable_dumps(payload)


def test_lattice_payload_cartan_preserved():
    a2 = build_root_system("A2")
    payload = AdmissibleLattice.build(a2, (1, 1)).to_payload()
    assert payload["cartan"] == [[2, -1], [-1, 2]]
    assert payload["highest_weight"] == [1, 1]
    assert sum(b["dim"] for b in payload["blocks"]) == 8
