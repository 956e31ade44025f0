import dataclasses

import numpy as np
import pytest

from hopfcert.builders import (BadParameters, MatchedPair, abelian_extension, build_script_A, build_taft,
                               cyclic_group, direct_product, dual_group_algebra, group_algebra, metacyclic_group,
                               script_A_data, validate_matched_pair, verify_script_A_dual)
from hopfcert.hopf_core import (antipode_power, dual_hopf, is_identity_map, same_structure, verify_hopf_axioms)
from hopfcert.scalars import CycNumber, zeta


def test_metacyclic_7_3_2():
    G = metacyclic_group(7, 3, 2)
    assert G.order == 21
    a, b = G.index("a^1"), G.index("b^1")
    assert G.mul(G.mul(b, a), G.inverse[b]) == G.index("a^2")


def test_metacyclic_degenerate_is_cyclic():
    G = metacyclic_group(5, 1, 1)
    C = cyclic_group(5, "a")
    assert G.labels == C.labels
    assert np.array_equal(G.table, C.table)


def test_metacyclic_bad_congruence():
    with pytest.raises(BadParameters):
        metacyclic_group(7, 3, 3)


def test_group_algebra_kz2():
    H = group_algebra(cyclic_group(2))
    g = H.basis(1)
    assert g.apply_comult(0).equals(g.tensor(g))
    assert g.apply_linear(0, H.antipode).equals(g)


def test_dual_group_algebra_kz2():
    H = dual_group_algebra(cyclic_group(2))
    assert (H.basis(0) + H.basis(1)).equals(H.one())
    assert H.counit == [CycNumber(1), CycNumber(0)]


@pytest.mark.parametrize("G", [cyclic_group(4), metacyclic_group(7, 3, 2),
                               direct_product(cyclic_group(2), cyclic_group(2))], ids=["Z4", "G21", "Z2xZ2"])
def test_dual_group_algebra_is_dual_of_group_algebra(G):
    assert same_structure(dual_group_algebra(G), dual_hopf(group_algebra(G)))


def test_matched_pair_a0_and_a1():
    assert validate_matched_pair(script_A_data(7, 3, 2, 0)).passed
    assert validate_matched_pair(script_A_data(7, 3, 2, 1)).passed


def test_perturbed_sigma_fails_with_witness():
    P = script_A_data(7, 3, 2, 1)
    base = P.sigma
    bump = (4, 1, 1)

    def sigma(g, f, f2):
        v = base(g, f, f2)
        return v * zeta(3) if (g, f, f2) == bump else v

    rep = validate_matched_pair(dataclasses.replace(P, sigma=sigma))
    bad = rep.get("sigma_cocycle")
    assert bad is not None and bad.passed is False
    assert bad.witnesses


def test_trivial_extension_is_tensor_product():
    G, F = cyclic_group(2), cyclic_group(3, "x")
    one = lambda *a: CycNumber(1)
    P = MatchedPair(G, F, np.tile(np.arange(2)[:, None], (1, 3)), np.tile(np.arange(3), (2, 1)), one, one)
    H = abelian_extension(P)
    assert H.dim == 6
    # commutative and cocommutative: k^Z2 (x) kZ3
    for i in range(6):
        for j in range(6):
            assert H.basis(i).mul(H.basis(j)).equals(H.basis(j).mul(H.basis(i)))
        d = H.basis(i).apply_comult(0)
        assert d.equals(d.permute((1, 0)))


def test_script_a0(a0):
    assert a0.dim == 63
    assert a0.certified.passed
    G = a0.metadata["matched_pair"].G
    for g in range(G.order):
        for f in range(3):
            assert a0.counit[g * 3 + f] == (1 if g == G.identity else 0)


def test_script_a1_sigma_value():
    P = script_A_data(7, 3, 2, 1)
    ab = P.G.index("a^1*b^1")
    assert P.sigma(ab, 2, 2) == zeta(3)
    H = build_script_A(7, 3, 2, 1)
    assert H.dim == 63 and H.certified.passed


@pytest.mark.parametrize("args", [(5, 3, 2, 0), (7, 3, 1, 0), (7, 3, 3, 0), (7, 3, 2, 3), (9, 3, 2, 0)])
def test_script_a_bad_parameters(args):
    with pytest.raises(BadParameters):
        build_script_A(*args)


def test_taft3(taft3):
    assert taft3.dim == 9
    x = taft3.basis(taft3.index("x^1"))
    s2x = x.apply_linear(0, antipode_power(taft3, 2))
    assert s2x.equals(x.scale(zeta(3) ** -1))
    assert taft3.metadata["q"] == zeta(3)


def test_sweedler():
    H = build_taft(2, CycNumber(-1))
    assert H.dim == 4 and verify_hopf_axioms(H).passed
    assert not is_identity_map(antipode_power(H, 2))
    assert is_identity_map(antipode_power(H, 4))


def test_taft_requires_primitive_root():
    with pytest.raises(BadParameters):
        build_taft(4, CycNumber(-1))
    with pytest.raises(BadParameters):
        build_taft(1)


def test_dual_identities_a0(a0):
    rep = verify_script_A_dual(a0)
    assert rep.passed, [c.name for c in rep.failed()]
    names = " | ".join(c.name for c in rep.checks)
    assert "chi Y = Y^t chi" in names
