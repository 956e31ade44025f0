"""Randomized invariants across modules."""
import math
import random

from hypothesis import given, settings, strategies as st

from hopfcert.builders import build_taft, cyclic_group, dual_group_algebra, group_algebra, metacyclic_group
from hopfcert.datum import ZModSystem, count_solutions_bruteforce, count_solutions_elimination
from hopfcert.doubles import drinfeld_double
from hopfcert.hopf_core import dual_hopf, find_group_likes, is_group_like, same_structure
from hopfcert.presented import normal_form, taft_presentation
from hopfcert.quasitri import drinfeld_element, s4_conjugation_failures
from hopfcert.scalars import CycNumber, zeta
from hopfcert.serialization import dumps_hopf, loads_hopf

METACYCLIC = [(3, 1, 1), (5, 1, 1), (7, 3, 2), (7, 3, 4), (13, 3, 3), (5, 2, 4)]

small_algebras = st.one_of(
    st.integers(2, 12).map(lambda n: group_algebra(cyclic_group(n))),
    st.integers(2, 8).map(lambda n: dual_group_algebra(cyclic_group(n))),
    st.sampled_from(METACYCLIC).map(lambda a: group_algebra(metacyclic_group(*a))),
    st.tuples(st.integers(2, 5), st.integers(1, 4)).filter(lambda t: math.gcd(*t) == 1)
      .map(lambda t: build_taft(t[0], zeta(t[0], t[1]))),
)


@settings(max_examples=25, deadline=None)
@given(H=small_algebras)
def test_dual_is_involution(H):
    assert same_structure(H, dual_hopf(dual_hopf(H)))


@settings(max_examples=25, deadline=None)
@given(H=small_algebras)
def test_serialization_round_trip(H):
    text = dumps_hopf(H)
    assert dumps_hopf(loads_hopf(text)) == text


@settings(max_examples=10, deadline=None)
@given(H=st.one_of(st.integers(2, 5).map(lambda n: group_algebra(cyclic_group(n))),
                   st.sampled_from([2, 3]).map(build_taft)))
def test_double_drinfeld_invariants(H):
    Dd = drinfeld_double(H)
    assert Dd.dim == H.dim ** 2
    cert = drinfeld_element(Dd.rmatrix)
    assert is_group_like(Dd.algebra, cert.g)
    assert s4_conjugation_failures(Dd.algebra, cert.g) == []


@settings(max_examples=15, deadline=None)
@given(H=small_algebras)
def test_grouplikes_closed(H):
    res = find_group_likes(H)
    els = res.elements
    for g in els:
        assert is_group_like(H, g)
        assert any(g.apply_linear(0, H.antipode).equals(h) for h in els)
    if res.complete:
        for g in els[:4]:
            for h in els[:4]:
                assert any(g.mul(h).equals(k) for k in els)


words = st.lists(st.sampled_from([0, 1]), max_size=9).map(tuple)
expressions = st.dictionaries(words, st.integers(-3, 3).filter(bool).map(CycNumber), min_size=1, max_size=4)


@settings(max_examples=100, deadline=None)
@given(expr=expressions, seed=st.integers(0, 2 ** 16))
def test_rewriting_strategy_independent(expr, seed):
    R = taft_presentation(3).rewrite_system()
    left = {w: c for w, c in normal_form(R, expr).items() if c}
    rand = {w: c for w, c in R.reduce_random(expr, random.Random(seed)).items() if c}
    assert left == rand


@st.composite
def systems(draw):
    m = draw(st.integers(1, 4))
    moduli = draw(st.lists(st.integers(1, 10), min_size=m, max_size=m).filter(lambda ns: math.prod(ns) <= 10 ** 4))
    M = [[(moduli[j] // math.gcd(moduli[i], moduli[j])) * draw(st.integers(0, 20)) for j in range(m)]
         for i in range(m)]
    return M, moduli


@settings(max_examples=200, deadline=None)
@given(sys_=systems())
def test_solver_backends_agree(sys_):
    S = ZModSystem(*sys_)
    assert count_solutions_elimination(S) == count_solutions_bruteforce(S)
