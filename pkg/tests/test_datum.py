import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from hopfcert.datum import (CartanDatum, IllPosedSystem, Overflow, ReducedDatum, ZModSystem, analyze,
                            check_cartan_datum, count_solutions_bruteforce, count_solutions_elimination,
                            datum_from_dict, datum_to_dict, h_omega_cartan_datum, h_omega_datum,
                            h_omega_f_closed_form, identity, int_det, k_alpha_datum, matmul, matrix_connected,
                            smith_normal_form, subgroup_index_data, taft_cartan_datum, taft_reduced_datum,
                            thm42_hypotheses, thm45_conditions, thm46_conditions, thm46_holds, unique_solution_check)


def oracle_count(M, moduli):
    """Plain enumeration of x in prod Z_{n_i} with sum_i x_i M_ij = 0 mod n_j."""
    m = len(moduli)
    return sum(all(sum(x[i] * M[i][j] for i in range(m)) % moduli[j] == 0 for j in range(m))
               for x in itertools.product(*(range(n) for n in moduli)))


def is_unimodular(U):
    return abs(int_det(U)) == 1


# -- Smith normal form


def test_snf_diag_2_3():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == [1, 6]


def test_snf_h_omega():
    s = smith_normal_form([[-3, 1], [2, -3]])
    assert s.diagonal == [1, 7]
    assert s.determinant() == 7


def test_snf_zero():
    s = smith_normal_form([[0, 0], [0, 0]])
    assert s.diagonal == [0, 0]
    assert s.U == identity(2) and s.V == identity(2)


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=300, deadline=None)
@given(M=matrices)
def test_snf_invariants(M):
    s = smith_normal_form(M)
    assert matmul(matmul(s.U, M), s.V) == s.D
    assert is_unimodular(s.U) and is_unimodular(s.V)
    diag = s.diagonal
    for i, row in enumerate(s.D):
        for j, v in enumerate(row):
            assert i == j or v == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    if len(M) == len(M[0]):
        assert abs(int_det(M)) == math.prod(diag)


# -- the unique-solution solver


@pytest.mark.parametrize("M,moduli,count", [
    ([[2]], [3], 1),
    ([[2, 0], [0, 2]], [6, 6], 4),
    ([[1, 1], [1, 1]], [2, 2], 2),
])
def test_solver_examples(M, moduli, count):
    res = unique_solution_check(M, moduli)
    assert res.count == count == oracle_count(M, moduli)
    assert res.unique == (count == 1)
    assert res.agree


def test_ill_posed_system():
    # column modulus 4 does not divide n_i m_ij = 2 for row modulus 2
    with pytest.raises(IllPosedSystem):
        ZModSystem([[1, 1], [1, 1]], [2, 4])


def test_overflow_when_no_backend_applies():
    big = 10 ** 19 + 1
    with pytest.raises(Overflow):
        unique_solution_check([[1]], [big])


def random_system(rng):
    m = rng.randint(1, 4)
    while True:
        moduli = [rng.randint(1, 12) for _ in range(m)]
        if math.prod(moduli) <= 10 ** 4:
            break
    M = []
    for i in range(m):
        row = []
        for j in range(m):
            # well-posed: n_j | n_i m_ij, i.e. m_ij is a multiple of n_j / gcd(n_i, n_j)
            step = moduli[j] // math.gcd(moduli[i], moduli[j])
            row.append(step * rng.randrange(moduli[j]))
        M.append(row)
    return M, moduli


def test_random_systems_agree_with_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        M, moduli = random_system(rng)
        S = ZModSystem(M, moduli)
        assert count_solutions_elimination(S) == count_solutions_bruteforce(S) == oracle_count(M, moduli)


# -- Cartan data and the theorem checks


def test_taft_cartan_datum():
    rep = check_cartan_datum(taft_cartan_datum(3))
    assert rep.passed
    assert rep.info["N_J"] == {"1": 3}


def test_h_omega_cartan_relation():
    D = h_omega_cartan_datum(5)
    assert D.cartan == [[2, -1], [-1, 2]]
    assert check_cartan_datum(D).get("q_ij q_ji = q_ii^a_ij").passed


def test_perturbed_chi_breaks_cartan_relation():
    D = taft_cartan_datum(3)
    bad = CartanDatum(2, [[2, -1], [-1, 2]], [9, 9], [[1, 0], [0, 1]], [[3, 1], [0, 3]])
    rep = check_cartan_datum(bad)
    chk = rep.get("q_ij q_ji = q_ii^a_ij")
    assert chk.passed is False and chk.witnesses
    assert check_cartan_datum(D).passed


def test_thm42_taft():
    rep = thm42_hypotheses(taft_cartan_datum(3))
    assert rep.passed
    assert rep.info["det A"] == 2
    assert rep.info["ord(chi_i g_i)"] == [3]
    assert rep.info["chibar"] == [[1]]


def test_thm42_h_omega_dual_characters():
    rep = thm42_hypotheses(h_omega_cartan_datum(5))
    assert rep.get("dual characters chibar_i exist").passed
    assert rep.get("chibar_i(g_j) = chi_j(g_i)").passed


def test_thm42_even_order_fails_gcd():
    # q = -1 (order 2) against det A = 2
    D = CartanDatum(1, [[2]], [2], [[1]], [[1]])
    assert thm42_hypotheses(D).get("gcd(ord(chi_i g_i), det A) = 1").passed is False


def test_thm45_k_alpha_5():
    rep = thm45_conditions(k_alpha_datum(5))
    assert rep.passed
    M, n = rep.info["M"], rep.info["n_i = ord(chi_i f_i)"]
    assert oracle_count(M, n) == 1
    assert rep.get("(i) Nichols algebra finite dimensional").passed is None


def test_thm45_trivial_braiding_not_unique():
    # q = -1 with f = g of order 4: chi(g)^2 = 1, so M = (0) and every residue solves
    D = ReducedDatum(1, [4], [[1]], [[1]], [[2]])
    rep = thm45_conditions(D)
    assert rep.info["M"] == [[0]]
    assert rep.get("(iii) xM = 0 has a unique solution").passed is False
    assert rep.info["solution counts"]["elimination"] == 4


def test_thm45_taft_datum():
    rep = thm45_conditions(taft_reduced_datum(3))
    assert rep.passed and rep.info["M"] == [[2]]


def test_thm46_h_omega_5_and_21():
    assert thm46_holds(thm46_conditions(h_omega_datum(5)))
    rep = thm46_conditions(h_omega_datum(21))
    assert rep.get("(iv) gcd(det M, n) = 1").passed is False
    assert rep.get("(iv) gcd(det(M+M^t), n) = 1").passed is False


def test_thm46_h_omega_7_fails():
    rep = thm46_conditions(h_omega_datum(7))
    assert rep.get("(iv) gcd(det M, n) = 1").passed is False


@pytest.mark.parametrize("n", [3, 4, 5, 6, 9])
def test_thm46_identity_matrix(n):
    D = ReducedDatum(2, [n, n], [[1, 0], [0, 1]], None, [[1, 0], [0, 1]], n=n)
    rep = thm46_conditions(D, n)
    assert rep.get("(iv) gcd(det M, n) = 1").passed
    assert rep.get("(iv) gcd(det(M+M^t), n) = 1").passed == (n % 2 == 1)


def test_h_omega_f_closed_form():
    for n in (2, 4, 5, 10, 11):
        assert h_omega_datum(n).f == h_omega_f_closed_form(n)


@pytest.mark.parametrize("M,conn", [([[2, 1], [1, 2]], True), ([[2, 0], [0, 2]], False),
                                    ([[-3, 1], [2, -3]], True), ([[2, 0, 1], [0, 2, 0], [1, 0, 2]], False)])
def test_matrix_connected(M, conn):
    assert matrix_connected(M) == conn


def test_subgroup_index_data():
    assert subgroup_index_data([[1, 0], [0, 1]], [4, 6]) == (24, 1)
    assert subgroup_index_data([[2, 0]], [4, 6]) == (2, 12)


def test_datum_dict_round_trip():
    D = h_omega_datum(5)
    cd, rd = datum_from_dict(datum_to_dict(D))
    assert rd == D


def test_analyze_states_assumed_hypothesis():
    reps = analyze(None, k_alpha_datum(5))
    text = " ".join(" ".join(r.notes) for r in reps).lower()
    assert "assumed" in text
