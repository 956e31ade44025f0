import pytest

from hopfcert.builders import (cyclic_group, direct_product, dual_group_algebra, group_algebra, metacyclic_group)
from hopfcert.hopf_core import (Mode, antipode, antipode_power, check_antipode_properties, counit, delta, dual_hopf,
                                find_group_likes, group_like_closure, is_central, is_group_like, is_identity_map,
                                mul, same_structure, solve_antipode, verify_hopf_axioms)
from hopfcert.scalars import CycNumber
from hopfcert.serialization import hopf_from_dict, hopf_to_dict


def kz(n):
    return group_algebra(cyclic_group(n))


def test_kz2_exact_pass():
    rep = verify_hopf_axioms(kz(2), "exact")
    assert rep.passed
    assert {c.name for c in rep.checks} >= {"associativity", "coassociativity", "antipode"}


def test_zero_antipode_is_caught_at_generator():
    doc = hopf_to_dict(kz(2))
    doc["antipode"] = []
    rep = verify_hopf_axioms(hopf_from_dict(doc), "exact")
    assert [c.name for c in rep.failed()] == ["antipode"]
    assert (1,) in rep.get("antipode").witnesses


@pytest.mark.parametrize("mode", ["modular", "sampled(50,3)"])
def test_other_modes_pass(taft3, mode):
    rep = verify_hopf_axioms(taft3, mode)
    assert rep.passed
    assert rep.mode.startswith(Mode.parse(mode).kind)


def test_a0_exact(a0):
    assert a0.dim == 63
    assert verify_hopf_axioms(a0, "exact").passed


def test_element_operations(taft3):
    H = kz(3)
    g = H.basis(1)
    assert mul(H.one(), g).equals(g)
    assert delta(g).equals(g.tensor(g))
    assert antipode(g).equals(H.basis(2))
    assert counit(g) == CycNumber(1)
    x = taft3.basis(taft3.index("x^1"))
    assert mul(taft3.one(), x).equals(x)


def test_grouplike_and_central(taft3):
    one = taft3.one()
    assert is_group_like(taft3, one) and is_central(taft3, one)
    x = taft3.basis(taft3.index("x^1"))
    assert not is_group_like(taft3, x)
    assert not is_central(taft3, x)


@pytest.mark.parametrize("build", [lambda: kz(2), lambda: kz(6), lambda: dual_group_algebra(cyclic_group(3)),
                                   lambda: group_algebra(metacyclic_group(7, 3, 2))])
def test_dual_involution(build):
    H = build()
    assert same_structure(H, dual_hopf(dual_hopf(H)))


def test_dual_involution_taft_and_a0(taft3, a0):
    assert same_structure(taft3, dual_hopf(dual_hopf(taft3)))
    assert same_structure(a0, dual_hopf(dual_hopf(a0)))


def test_dual_variants(taft3):
    op = dual_hopf(taft3, "op")
    cop = dual_hopf(taft3, "cop")
    assert verify_hopf_axioms(op, "exact").passed
    assert verify_hopf_axioms(cop, "exact").passed
    with pytest.raises(ValueError):
        dual_hopf(taft3, "bogus")


def test_solve_antipode_group_algebra():
    H = group_algebra(metacyclic_group(7, 3, 2))
    S = solve_antipode(H)
    assert S.same_as(H.antipode)
    G = metacyclic_group(7, 3, 2)
    for i in range(G.order):
        img = H.basis(i).apply_linear(0, S)
        assert img.equals(H.basis(G.inverse[i]))


def test_solve_antipode_matches_closed_form(a0, taft3):
    assert solve_antipode(a0).same_as(a0.antipode)
    assert solve_antipode(taft3).same_as(taft3.antipode)


def test_solve_antipode_on_group_double():
    from hopfcert.doubles import drinfeld_double
    Dd = drinfeld_double(kz(2))
    doc = hopf_to_dict(Dd.algebra)
    doc["antipode"] = None
    bare = hopf_from_dict(doc)
    S = solve_antipode(bare)
    assert S.same_as(Dd.algebra.antipode)
    assert is_identity_map(antipode_power(Dd.algebra, 2))


@pytest.mark.parametrize("build", [lambda: kz(4), lambda: dual_group_algebra(metacyclic_group(7, 3, 2))])
def test_antipode_properties(build):
    assert check_antipode_properties(build()).passed


def test_antipode_properties_taft_a0(taft3, a0):
    assert check_antipode_properties(taft3).passed
    assert check_antipode_properties(a0).passed


def test_closure_of_unit(taft3):
    assert group_like_closure(taft3, [taft3.one()]).order == 1


def test_closure_taft_double_central_grouplike(taft3_double):
    from hopfcert.pipelines import taft_character
    Dd = taft3_double
    cg = Dd.pure(taft_character(Dd, 3), Dd.H.basis(1))
    grp = group_like_closure(Dd.algebra, [cg])
    assert grp.order == 3


@pytest.mark.parametrize("H", [dual_group_algebra(cyclic_group(3)), kz(3)], ids=["k^Z3", "kZ3"])
def test_find_grouplikes_small(H):
    res = find_group_likes(H)
    assert res.complete
    assert len(res.elements) == 3
    for g in res.elements:
        assert is_group_like(H, g)
        assert is_group_like(H, g.apply_linear(0, H.antipode))
        for h in res.elements:
            assert any(g.mul(h).equals(k) for k in res.elements)


def test_find_grouplikes_taft(taft3):
    res = find_group_likes(taft3)
    assert res.complete and len(res.elements) == 3


def test_direct_product_group_algebra():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    H = group_algebra(G)
    assert H.dim == 6 and verify_hopf_axioms(H).passed
