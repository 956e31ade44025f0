import pytest

from hopfcert.builders import cyclic_group, group_algebra
from hopfcert.doubles import drinfeld_double, quotient_by_central_grouplikes, verify_double_relations
from hopfcert.hopf_core import antipode_power, central_failures, find_group_likes, is_group_like, is_identity_map, verify_hopf_axioms
from hopfcert.pipelines import taft_character, taft_dual_generator
from hopfcert.presented import parse_presentation, realize_presentation
from hopfcert.quasitri import (central_pairing_matrix, drinfeld_element, is_factorizable, kr_ribbon_search,
                               monodromy_matrix, s4_conjugation_failures, trivial_r, verify_quasitriangular,
                               verify_ribbon)
from hopfcert.scalars import CycNumber, zeta

SWEEDLER_SQUARED = """algebra SweedlerSquared()
conductor 2
gens x1, x2, g1, g2
relations:
  x2*x1 = x1*x2
  g1*x1 = -x1*g1
  g1*x2 = x2*g1
  g2*x1 = x1*g2
  g2*x2 = -x2*g2
  g2*g1 = g1*g2
  x1^2 = 0
  x2^2 = 0
  g1^2 = 1
  g2^2 = 1
basis: x1^[0..2) * x2^[0..2) * g1^[0..2) * g2^[0..2)
coalgebra:
  delta x1 = x1 (x) 1 + g1 (x) x1
  delta x2 = x2 (x) 1 + g2 (x) x2
  delta g1 = g1 (x) g1
  delta g2 = g2 (x) g2
  eps x1 = 0
  eps x2 = 0
  eps g1 = 1
  eps g2 = 1
antipode:
  S x1 = -g1*x1
  S x2 = -g2*x2
  S g1 = g1
  S g2 = g2
"""


@pytest.fixture(scope="module")
def kz2_double():
    return drinfeld_double(group_algebra(cyclic_group(2)))


@pytest.fixture(scope="module")
def taft_quotient(taft3_double):
    Dd = taft3_double
    cg = Dd.pure(taft_character(Dd, 3), Dd.H.basis(1))
    return quotient_by_central_grouplikes(Dd.algebra, [("chibar*g", cg)], Dd.rmatrix)


def check_drinfeld_invariants(rm):
    cert = drinfeld_element(rm)
    H = rm.H
    assert not central_failures(H, cert.c)
    assert is_group_like(H, cert.g)
    assert s4_conjugation_failures(H, cert.g) == []
    return cert


# -- quasitriangular structures


def test_trivial_r_on_cocommutative():
    H = group_algebra(cyclic_group(3))
    rm = verify_quasitriangular(H, trivial_r(H))
    assert rm.verified
    cert = check_drinfeld_invariants(rm)
    for el in (cert.u, cert.c, cert.g):
        assert el.equals(H.one())
    mono = monodromy_matrix(rm)
    assert {k: v for k, v in mono.items() if v} == {(0, 0): CycNumber(1)}
    fr = is_factorizable(rm, "exact")
    assert not fr.factorizable and fr.rank == 1


def test_kz2_double(kz2_double):
    Dd = kz2_double
    A = Dd.algebra
    assert Dd.dim == 4 and Dd.rmatrix.verified
    for i in range(4):
        for j in range(4):
            assert A.basis(i).mul(A.basis(j)).equals(A.basis(j).mul(A.basis(i)))
    cert = check_drinfeld_invariants(Dd.rmatrix)
    assert cert.g.equals(A.one())
    assert is_identity_map(antipode_power(A, 2))
    assert verify_ribbon(Dd.rmatrix, cert.u, cert).passed
    fr = is_factorizable(Dd.rmatrix, "exact")
    assert fr.factorizable and fr.rank == 4


def test_kz2_double_ribbon_search(kz2_double):
    rm = kz2_double.rmatrix
    H = rm.H
    found = find_group_likes(H)
    assert found.complete and len(found.elements) == 4
    gl = [(str(i), g) for i, g in enumerate(found.elements)]
    cert = kr_ribbon_search(rm, gl, complete=True)
    # commutative with S^2 = id: every involutive group-like is admissible, the unit among them
    assert len(cert.admissible) == 4 and not cert.unique
    unit = [v for (_, l), (_, v) in zip(cert.admissible, cert.ribbons) if l.equals(H.one())]
    assert len(unit) == 1 and unit[0].equals(cert.u)
    for _, v in cert.ribbons:
        assert verify_ribbon(rm, v, cert).passed
    assert len({str(v) for _, v in cert.ribbons}) == 4


def test_zero_is_not_a_ribbon(kz2_double):
    rep = verify_ribbon(kz2_double.rmatrix, kz2_double.algebra.zero())
    assert rep.get("counit_one").passed is False


def test_r_axiom_failure_detected(kz2_double):
    # a non-R: a single term of the standard R
    A = kz2_double.algebra
    k, c = next(iter(kz2_double.R.items()))
    bad = A.element({k: c}, degree=2)
    rm = verify_quasitriangular(A, bad, "exact")
    assert not rm.verified


def test_taft_double(taft3_double):
    Dd = taft3_double
    assert Dd.dim == 81
    assert Dd.report.passed and Dd.rmatrix.verified
    assert verify_hopf_axioms(Dd.algebra, "exact").passed
    check_drinfeld_invariants(Dd.rmatrix)
    fr = is_factorizable(Dd.rmatrix, "exact")
    assert fr.factorizable and fr.rank == 81


def test_taft_double_modular_agrees(taft3_double):
    assert is_factorizable(taft3_double.rmatrix, "modular").factorizable


def test_identity_quotient(taft3):
    qm = quotient_by_central_grouplikes(taft3, [("1", taft3.one())])
    assert qm.quotient.dim == taft3.dim


def test_taft_double_quotient(taft3_double, taft_quotient):
    K = taft_quotient.quotient
    assert K.dim * 3 == taft3_double.dim == 81
    rm = verify_quasitriangular(K, taft_quotient.rmatrix.R, "exact")
    assert rm.verified
    check_drinfeld_invariants(rm)
    fr = is_factorizable(rm, "exact")
    assert fr.factorizable and fr.rank == 27
    assert is_factorizable(rm, "modular").factorizable == fr.factorizable


def test_quotient_projection_is_bialgebra_map(taft3_double, taft_quotient):
    A, qm = taft3_double.algebra, taft_quotient
    K, pi = qm.quotient, qm.project
    for i in range(0, A.dim, 7):
        bi = A.basis(i)
        assert pi(bi).apply_comult(0).equals(pi(bi.apply_comult(0)))
        for j in range(0, A.dim, 11):
            bj = A.basis(j)
            assert pi(bi.mul(bj)).equals(pi(bi).mul(pi(bj)))


def test_double_relation_taft(taft3_double):
    Dd = taft3_double
    x = Dd.embed_hopf(Dd.H.basis(3))
    y = Dd.embed_dual(taft_dual_generator(Dd, 3))
    chi = Dd.embed_dual(taft_character(Dd, 3))
    g = Dd.embed_hopf(Dd.H.basis(1))
    assert verify_double_relations(Dd, [(x, y, chi, g)]).passed
    assert not verify_double_relations(Dd, [(x, y.scale(2), chi, g)]).passed


def test_double_relations_rank_two_toy():
    H = realize_presentation(parse_presentation(SWEEDLER_SQUARED))
    Dd = drinfeld_double(H)
    assert Dd.dim == 256 and Dd.report.passed
    idx = lambda a, b, c, d: a * 8 + b * 4 + c * 2 + d
    pairs = []
    for i in range(2):
        e = [0, 0]
        e[i] = 1
        y = Dd.dual.element({idx(e[0], e[1], c, d): 1 for c in range(2) for d in range(2)})
        chi = Dd.dual.element({idx(0, 0, c, d): (-1) ** (c if i == 0 else d) for c in range(2) for d in range(2)})
        pairs.append((Dd.embed_hopf(H.basis(idx(e[0], e[1], 0, 0))), Dd.embed_dual(y), Dd.embed_dual(chi),
                      Dd.embed_hopf(H.basis(idx(0, 0, 1 - i, i)))))
    rep = verify_double_relations(Dd, pairs)
    assert rep.passed and len(rep.checks) == 4


# -- central pairing


def test_pairing_of_trivial_group(kz2_double):
    mat, nondeg = central_pairing_matrix(kz2_double.rmatrix, [("1", kz2_double.algebra.one())])
    assert mat == [[CycNumber(1)]] and nondeg


def test_pairing_solve_matches_closed_form(taft3_double):
    Dd = taft3_double
    T = Dd.H
    chi = taft_character(Dd, 3)
    g = T.basis(1)
    powers = []
    c, h = Dd.dual.one(), T.one()
    for _ in range(3):
        powers.append((c, h))
        c, h = c.mul(chi), h.mul(g)
    G = [(f"(chi g)^{i}", Dd.pure(a, b)) for i, (a, b) in enumerate(powers)]
    solved, nd1 = central_pairing_matrix(Dd.rmatrix, G)
    pairs = [({k[0]: v for k, v in a.items()}, {k[0]: v for k, v in b.items()}) for a, b in powers]
    closed, nd2 = central_pairing_matrix(None, None, "closed_form", pairs)
    assert solved == closed
    # quotient-vs-pairing equivalence: the quotient by <chi g> is factorizable
    assert nd1 and nd2
    assert closed[1][1] == zeta(3, 2)
