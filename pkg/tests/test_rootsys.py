"""Root systems, Chevalley constants, and weight bookkeeping."""

from fractions import Fraction

import pytest

from weylpbw import CartanMatrixError, build_root_system

G2_ROOTS = ((3, 2), (3, 1), (2, 1), (1, 1), (0, 1), (1, 0))


@pytest.fixture(scope="module")
def g2():
    return build_root_system("G2")


@pytest.fixture(scope="module")
def a2():
    return build_root_system("A2")


def test_g2_positive_roots_fixed_order(g2):
    assert g2.positive_roots == G2_ROOTS
    assert g2.n_pos == 6
    assert [g2.root_name(b) for b in g2.positive_roots] == [
        "11122", "1112", "112", "12", "2", "1"]
    assert [g2.height(b) for b in g2.positive_roots] == [5, 4, 3, 2, 1, 1]


def test_g2_cartan_matrix(g2):
    # alpha1 short: <alpha2, alpha1 v> = -3
    assert g2.cartan.matrix == ((2, -3), (-1, 2))
    assert g2.cartan.label == "G2"


def test_label_and_matrix_agree():
    from_label = build_root_system("G2")
    from_matrix = build_root_system([[2, -3], [-1, 2]])
    assert from_matrix.positive_roots == from_label.positive_roots
    assert from_matrix.cartan.label is None


def test_root_counts_by_type():
    for label, count in [("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4),
                         ("C3", 9), ("D4", 12), ("F4", 24), ("G2", 6)]:
        assert len(build_root_system(label).positive_roots) == count


def test_a2_and_b2_orders(a2):
    assert a2.positive_roots == ((1, 1), (0, 1), (1, 0))
    b2 = build_root_system("B2")
    assert b2.positive_roots == ((1, 2), (1, 1), (0, 1), (1, 0))


def test_bad_cartan_rejected():
    with pytest.raises(CartanMatrixError):
        build_root_system([[2, -2], [-2, 2]])          # affine, not finite type
    with pytest.raises(CartanMatrixError):
        build_root_system([[2, -1], [0, 2]])           # zero pattern asymmetric
    with pytest.raises(CartanMatrixError):
        build_root_system([[2, 1], [1, 2]])            # positive off-diagonal
    with pytest.raises(CartanMatrixError):
        build_root_system([[1]])                       # diagonal must be 2
    with pytest.raises(CartanMatrixError):
        build_root_system("E6")                        # label not supported
    with pytest.raises(CartanMatrixError):
        build_root_system("G3")


def test_g2_structure_constants_pinned(g2):
    # every nonzero N(a, b) on positive pairs, under the extraspecial-pair
    # convention this package fixes
    expected = {
        ((3, 1), (0, 1)): -1,
        ((2, 1), (1, 1)): -3,
        ((2, 1), (1, 0)): -3,
        ((1, 1), (2, 1)): 3,
        ((1, 1), (1, 0)): -2,
        ((0, 1), (3, 1)): 1,
        ((0, 1), (1, 0)): 1,
        ((1, 0), (2, 1)): 3,
        ((1, 0), (1, 1)): 2,
        ((1, 0), (0, 1)): -1,
    }
    seen = {}
    for a in g2.positive_roots:
        for b in g2.positive_roots:
            s = tuple(x + y for x, y in zip(a, b))
            if g2.is_positive_root(s):
                seen[(a, b)] = g2.structure_constant(a, b)
    assert seen == expected


def test_structure_constant_antisymmetry(g2):
    for a in g2.positive_roots:
        for b in g2.positive_roots:
            s = tuple(x + y for x, y in zip(a, b))
            if g2.is_positive_root(s):
                assert g2.structure_constant(a, b) == -g2.structure_constant(b, a)


def test_g2_extraspecial_pairs(g2):
    assert g2.extraspecial_pair((1, 1)) == ((0, 1), (1, 0))
    assert g2.extraspecial_pair((2, 1)) == ((1, 0), (1, 1))
    assert g2.extraspecial_pair((3, 1)) == ((1, 0), (2, 1))
    assert g2.extraspecial_pair((3, 2)) == ((0, 1), (3, 1))


def _bracket_dicts(system, x, y):
    """[x, y] for sparse basis-coefficient dictionaries."""
    out = {}
    for i, ci in x.items():
        for j, cj in y.items():
            for k, ck in system.bracket_basis(i, j).items():
                out[k] = out.get(k, 0) + ci * cj * ck
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_jacobi_identity_exhaustive(label):
    system = build_root_system(label)
    dim = system.adjoint_dim
    basis = [{i: 1} for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                lhs = _bracket_dicts(system, basis[i],
                                     _bracket_dicts(system, basis[j], basis[k]))
                rhs1 = _bracket_dicts(system,
                                      _bracket_dicts(system, basis[i], basis[j]),
                                      basis[k])
                rhs2 = _bracket_dicts(system, basis[j],
                                      _bracket_dicts(system, basis[i], basis[k]))
                total = dict(rhs1)
                for key, v in rhs2.items():
                    total[key] = total.get(key, 0) + v
                total = {key: v for key, v in total.items() if v}
                assert lhs == total, (i, j, k)


def test_weyl_dimension(g2, a2):
    assert g2.weyl_dimension((0, 0)) == 1
    assert g2.weyl_dimension((1, 0)) == 7
    assert g2.weyl_dimension((0, 1)) == 14
    assert g2.weyl_dimension((1, 1)) == 64
    assert g2.weyl_dimension((2, 0)) == 27
    assert g2.weyl_dimension((0, 2)) == 77
    assert g2.weyl_dimension((16, 0)) == 35853
    assert a2.weyl_dimension((1, 1)) == 8
    a1 = build_root_system("A1")
    for n in range(8):
        assert a1.weyl_dimension((n,)) == n + 1


def test_depth_vector_and_monomial_depth(g2):
    # depth_vector is lam - w0(lam) in root coordinates; w0 = -1 for G2,
    # so the box extent is twice the alpha-coordinates of lam
    assert g2.depth_vector((1, 0)) == (4, 2)      # 2 * (2a1 + a2)
    assert g2.depth_vector((0, 1)) == (6, 4)      # 2 * (3a1 + 2a2)
    assert g2.depth_vector((1, 1)) == (10, 6)
    assert g2.monomial_depth((1, 0, 0, 0, 0, 0)) == (3, 2)
    assert g2.monomial_depth((0, 0, 0, 0, 1, 1)) == (1, 1)
    assert g2.root_coords_of((0, 1)) == (Fraction(3), Fraction(2))


def test_pairing_and_dominance(g2):
    # <w_i, alpha_j v> = delta_ij
    assert g2.pairing((1, 0), (1, 0)) == 1
    assert g2.pairing((1, 0), (0, 1)) == 0
    assert g2.pairing((0, 1), (0, 1)) == 1
    assert g2.pairing((3, 1), (1, 0)) == 3        # <3w1 + w2, alpha1 v>
    assert g2.pairing((2, 2), (3, 2)) == 6        # highest long root: coroot (1, 2)
    assert g2.pairing((2, 2), (2, 1)) == 10       # highest short root: coroot (2, 3)
    assert g2.coroot_coords((3, 2)) == (1, 2)
    assert g2.is_dominant((2, 5))
    assert not g2.is_dominant((-1, 0))
    assert g2.dominates((2, 2), (2, 2))


def test_star_is_identity_outside_type_a(g2, a2):
    assert a2.star((1, 0)) == (0, 1)
    assert a2.star((2, 1)) == (1, 2)
    assert g2.star((1, 0)) == (1, 0)
    b2 = build_root_system("B2")
    assert b2.star((0, 1)) == (0, 1)
    a1 = build_root_system("A1")
    assert a1.star((3,)) == (3,)


def test_rho_and_fundamental(g2):
    assert g2.rho == (1, 1)
    assert g2.fundamental_weight(0) == (1, 0)
    assert g2.fundamental_weight(1) == (0, 1)
