import random

import pytest

from hopfcert.builders import build_taft, cyclic_group, group_algebra
from hopfcert.hopf_core import AxiomFailure, same_structure, verify_hopf_axioms
from hopfcert.presented import (DSLSyntaxError, NotConfluent, RewriteSystem, check_confluence, corpus_path,
                                load_corpus, normal_form, parse_presentation, realize_presentation,
                                taft_presentation)
from hopfcert.scalars import CycNumber, zeta

CYCLIC = """algebra Z{n}()
conductor 1
gens g
relations:
  g^{n} = 1
basis: g^[0..{n})
coalgebra:
  delta g = g (x) g
  eps g = 1
antipode:
  S g = g^{m}
"""

X, G = 0, 1  # generator indices in the Taft corpus file


def cyclic_source(n):
    return CYCLIC.format(n=n, m=n - 1)


def taft_rules():
    return taft_presentation(3).rewrite_system()


def test_parse_taft():
    P = taft_presentation(3)
    assert P.gens == ["x", "g"]
    assert len(P.rules) == 3
    assert P.dim == 9
    assert P.basis == [(X, 3), (G, 3)]


def test_malformed_rule():
    src = "algebra A()\nconductor 1\ngens g, x\nrelations:\n  g*x =\n"
    with pytest.raises(SyntaxError):
        parse_presentation(src)
    with pytest.raises(DSLSyntaxError):
        parse_presentation(src)


def test_normal_forms_taft():
    R = taft_rules()
    assert normal_form(R, (G, X)) == {(X, G): zeta(3)}
    assert normal_form(R, (X, X, X)) == {}
    assert normal_form(R, (X, G)) == {(X, G): CycNumber(1)}


def test_taft_confluent():
    rep = check_confluence(taft_rules())
    assert rep.passed and rep.info["unresolved"] == 0
    assert rep.info["overlaps"] > 0


def test_inverse_pair_confluent():
    R = RewriteSystem({(0, 1): {(): CycNumber(1)}, (1, 0): {(): CycNumber(1)}}, 2)
    rep = check_confluence(R)
    assert rep.passed
    assert normal_form(R, (0, 1, 0)) == {(0,): CycNumber(1)}


def corrupted_taft(coefficient):
    text = corpus_path("taft.halg").read_text().replace("g*x = q*x*g", f"g*x = {coefficient}*x*g")
    return parse_presentation(text)


def test_corrupted_q_squared_reports_unresolved_overlap():
    # q -> q^2 in the commutation rule; q^2 is again a primitive cube root, so the
    # system describes Taft(3, q^2) and every overlap still resolves
    P = corrupted_taft("q^2")
    rep = check_confluence(P.rewrite_system(), P.word_label)
    assert not rep.passed, "expected an unresolved overlap"


def test_corrupted_minus_q_squared_reports_unresolved_overlap():
    P = corrupted_taft("-q^2")
    rep = check_confluence(P.rewrite_system(), P.word_label)
    assert not rep.passed
    bad = rep.failed()
    assert len(bad) == 1 and "g^3*x^1" in bad[0].name
    with pytest.raises(NotConfluent):
        realize_presentation(P)


def test_realized_taft_equals_direct_builder():
    for n in (2, 3, 4):
        A = realize_presentation(taft_presentation(n))
        assert same_structure(A, build_taft(n), check_labels=True)


def test_taft5_realized_and_certified():
    A = realize_presentation(taft_presentation(5))
    assert A.dim == 25
    assert verify_hopf_axioms(A, "exact").passed


@pytest.mark.parametrize("n", [2, 6])
def test_cyclic_presentation(n):
    H = realize_presentation(parse_presentation(cyclic_source(n)))
    assert same_structure(H, group_algebra(cyclic_group(n)))


def test_realization_dim_is_product_of_ranges():
    for P in (taft_presentation(4), load_corpus("u_rank1"), parse_presentation(cyclic_source(5))):
        expected = 1
        for _, r in P.basis:
            expected *= r
        assert realize_presentation(P).dim == expected == P.dim


def test_rank_one_lifting_corpus():
    H = realize_presentation(load_corpus("u_rank1"))
    assert H.dim == 8
    assert verify_hopf_axioms(H, "exact").passed


def test_strategy_independence_on_random_taft_expressions():
    R = taft_rules()
    rng = random.Random(2024)
    for _ in range(100):
        expr = {}
        for _ in range(rng.randint(1, 4)):
            w = tuple(rng.choice((X, G)) for _ in range(rng.randint(0, 8)))
            expr[w] = expr.get(w, CycNumber(0)) + zeta(3, rng.randrange(3)) * rng.randint(-3, 3)
        leftmost = {w: c for w, c in normal_form(R, expr).items() if c}
        rand = {w: c for w, c in R.reduce_random(expr, random.Random(rng.random())).items() if c}
        assert leftmost == rand


@pytest.mark.slow
def test_drin_corpus_relations_break_comultiplicativity():
    # the printed relations are confluent, yet Delta is not multiplicative on them
    P = load_corpus("drin_kstar_n1")
    assert check_confluence(P.rewrite_system(), P.word_label).passed
    assert P.dim == 256
    with pytest.raises(AxiomFailure, match="comult_multiplicative"):
        realize_presentation(P)
