"""End-to-end acceptance checks, one criterion per group of tests.

All algebraic comparisons are exact (zero tolerance); the only numeric tolerances are wall-clock
budgets: 5 s for the A_0(7,3) build and certification, 10 min for the D(A_0) stage, 60 s for D(kG_{7,3}).
A per-criterion PASS/FAIL line is printed in the terminal summary.
"""
import math
import random
import time

import pytest

from hopfcert.builders import (build_script_A, build_taft, cyclic_group, dual_group_algebra, group_algebra,
                               metacyclic_group, script_A_character, script_A_data, validate_matched_pair,
                               verify_Apq_presentation, verify_script_A_dual)
from hopfcert.datum import (ZModSystem, count_solutions_bruteforce, count_solutions_elimination, h_omega_datum,
                            k_alpha_datum, thm45_conditions, thm46_conditions, thm46_holds)
from hopfcert.doubles import drinfeld_double, quotient_by_central_grouplikes
from hopfcert.hopf_core import dual_hopf, group_like_closure, same_structure, verify_hopf_axioms
from hopfcert.pipelines import _power, group_double_pipeline, ribbon_analysis
from hopfcert.presented import load_corpus, normal_form, realize_presentation, taft_presentation
from hopfcert.quasitri import (central_pairing_matrix, drinfeld_element, is_factorizable, s4_conjugation_failures,
                               verify_ribbon)
from hopfcert.scalars import CycNumber, zeta
from hopfcert.serialization import hopf_to_dict

A0_BUDGET_S = 5.0
DOUBLE_BUDGET_S = 600.0
GROUP_DOUBLE_BUDGET_S = 60.0

crit = pytest.mark.criterion


# ---------------------------------------------------------------------------
# 1. A_0(7,3)


@crit(1)
def test_c1_a0_exact_certification_within_budget():
    t0 = time.perf_counter()
    H = build_script_A(7, 3, 2, 0, certify_mode=None)
    rep = verify_hopf_axioms(H, "exact")
    elapsed = time.perf_counter() - t0
    assert H.dim == 63
    assert rep.passed and rep.mode == "exact"
    assert elapsed < A0_BUDGET_S, f"{elapsed:.2f}s"


@crit(1)
def test_c1_matched_pair_identities_pointwise():
    rep = validate_matched_pair(script_A_data(7, 3, 2, 0))
    assert rep.passed
    assert all(c.method == "all tuples" for c in rep.checks)


# ---------------------------------------------------------------------------
# 2. dual identities


@crit(2)
def test_c2_dual_identities_exact(a0):
    rep = verify_script_A_dual(a0)
    assert rep.passed, [c.name for c in rep.failed()]
    assert len(rep.checks) == 17


# ---------------------------------------------------------------------------
# 3. D(A_0)


@pytest.mark.slow
@crit(3)
def test_c3_double_quasitriangular(apq):
    Dd = apq.double
    assert Dd.dim == 3969
    rep = Dd.report
    assert rep.passed, [c.name for c in rep.failed()]
    r_checks = {c.name: c for c in rep.checks if c.name.startswith("r.")}
    assert {"r.delta_left", "r.delta_right", "r.commutation", "r.invertible"} <= set(r_checks)
    sampled = r_checks["r.commutation_sampled_exact"]
    assert sampled.passed and int(sampled.method.split()[0]) >= 200


@pytest.mark.slow
@crit(3)
def test_c3_monodromy_full_rank_within_budget(apq):
    t0 = time.perf_counter()
    fr = is_factorizable(apq.double.rmatrix, "modular")
    total = apq.report.timings["fixture wall"] + time.perf_counter() - t0
    assert fr.factorizable and fr.rank == fr.dim == 3969
    assert total < DOUBLE_BUDGET_S, f"{total:.1f}s"


# ---------------------------------------------------------------------------
# 4. A(7,3)


PRINTED_RBAR = "Rbar formula omega^(jk) x^j equals projected R"
CORRECTED_RBAR = "Rbar formula omega^(-jk) x^(-j) equals projected R"


@pytest.fixture(scope="module")
def presentation(apq):
    return verify_Apq_presentation(apq)


@pytest.mark.slow
@crit(4)
def test_c4_dimension(apq):
    assert apq.algebra.dim == 1323 == 7 ** 2 * 3 ** 3


@pytest.mark.slow
@crit(4)
def test_c4_relations_coproducts_counits_antipodes(presentation):
    items = [c for c in presentation.checks if not c.name.startswith("Rbar")]
    assert len(items) >= 20
    assert all(c.passed for c in items), [c.name for c in items if not c.passed]


@pytest.mark.slow
@crit(4)
def test_c4_printed_rbar_identity(presentation):
    assert presentation.get(PRINTED_RBAR).passed


@pytest.mark.slow
@crit(4)
def test_c4_rbar_with_inverted_signs(presentation):
    assert presentation.get(CORRECTED_RBAR).passed


@pytest.mark.slow
@crit(4)
def test_c4_grouplike_closure_order_27(apq):
    A = apq.algebra
    grp = group_like_closure(A, [A.grouplike(l) for l in ("g", "h", "k")])
    assert grp.order == 27


@pytest.mark.slow
@crit(4)
def test_c4_central_pairing_nondegenerate(apq):
    Dd = apq.double
    H, Hd = Dd.H, Dd.dual
    chi = Hd.element(script_A_character(H))
    x = H.element({g * 3 + 1: 1 for g in range(21)})
    pairs = []
    c, h = Hd.one(), H.one()
    for _ in range(3):
        pairs.append(({k[0]: v for k, v in c.items()}, {k[0]: v for k, v in h.items()}))
        c, h = c.mul(chi), h.mul(x)
    mat, nondeg = central_pairing_matrix(None, None, "closed_form", pairs)
    assert mat == [[zeta(3, 2 * i * j) for j in range(3)] for i in range(3)]
    assert nondeg
    # chi x is central in the double, as the quotient requires
    assert apq.quotient_map.report.passed


@pytest.fixture(scope="module")
def apq_ribbon(apq):
    el = apq.elements
    gens = [("x", el["x"]), ("y", el["y"])] + [(f"z{i}", z) for i, z in enumerate(el["z"])] \
        + [(f"e{i}", e) for i, e in enumerate(el["e"])]
    return ribbon_analysis(apq.rmatrix, 0, factor_backend="modular", generators=gens)


@pytest.mark.slow
@crit(4)
def test_c4_ribbon_search(apq, apq_ribbon):
    cert = apq_ribbon.cert
    assert len(cert.ribbons) >= 1
    for _, v in cert.ribbons:
        rep = verify_ribbon(apq.rmatrix, v, cert)
        assert rep.passed and rep.mode == "exact"
        assert {c.name for c in rep.checks} == {"central", "square_is_c", "antipode_fixed", "counit_one",
                                                 "coproduct"}


# ---------------------------------------------------------------------------
# 5. Taft pipeline


@crit(5)
def test_c5_dimensions(taft_run):
    assert (taft_run.taft.dim, taft_run.double.dim, taft_run.quotient.quotient.dim) == (9, 81, 27)


@crit(5)
def test_c5_quotient_factorizable_exact(taft_run):
    fr = taft_run.ribbon.factorizable
    assert fr.factorizable and fr.rank == 27 and fr.certificate.startswith("exact")


@crit(5)
def test_c5_unique_ribbon_g_minus_2_u(taft_run):
    cert = taft_run.ribbon.cert
    K = taft_run.quotient.quotient
    assert len(cert.admissible) == 1 and cert.unique
    assert cert.ribbons[0][1].equals(_power(K, cert.g, -2).mul(cert.u))
    assert taft_run.ribbon.templates.info["3.rf r"] == 2


@crit(5)
def test_c5_skew_primitive_relation(taft_run):
    el = taft_run.elements
    assert (el["x"].mul(el["y"]) - el["y"].mul(el["x"])).equals(el["chi"] - el["g"])


# ---------------------------------------------------------------------------
# 6. datum analyzer


@crit(6)
def test_c6_h_omega_predicate_over_range():
    mismatches = []
    for n in range(2, 101):
        rep = thm46_conditions(h_omega_datum(n))
        assert rep.info["det M"] == 7 and rep.info["det(M+M^t)"] == 27
        assert rep.get("cross-check: xM = 0 unique iff gcd(det M, n) = 1").passed
        assert rep.get("cross-check: x(M+M^t) = 0 unique iff gcd(det(M+M^t), n) = 1").passed
        if thm46_holds(rep) != (math.gcd(n, 21) == 1):
            mismatches.append(n)
    assert mismatches == []


@crit(6)
@pytest.mark.parametrize("n", [5, 7, 11])
def test_c6_k_alpha_unique_solution(n):
    rep = thm45_conditions(k_alpha_datum(n))
    counts = rep.info["solution counts"]
    assert counts["elimination"] == counts["bruteforce"]
    assert rep.passed, [(c.name, rep.info) for c in rep.failed()]


# ---------------------------------------------------------------------------
# 7. solver agreement


@crit(7)
def test_c7_thousand_random_systems():
    rng = random.Random(20240601)
    disagreements = 0
    done = 0
    while done < 1000:
        m = rng.randint(1, 4)
        moduli = [rng.randint(1, 16) for _ in range(m)]
        if math.prod(moduli) > 10 ** 4:
            continue
        M = [[(moduli[j] // math.gcd(moduli[i], moduli[j])) * rng.randrange(moduli[j] + 1) for j in range(m)]
             for i in range(m)]
        S = ZModSystem(M, moduli)
        disagreements += count_solutions_elimination(S) != count_solutions_bruteforce(S)
        done += 1
    assert disagreements == 0


# ---------------------------------------------------------------------------
# 8. property suites


def _builders():
    return [group_algebra(cyclic_group(2)), group_algebra(metacyclic_group(7, 3, 2)),
            dual_group_algebra(cyclic_group(3)), dual_group_algebra(metacyclic_group(7, 3, 2)),
            build_taft(2, CycNumber(-1)), build_taft(3), build_taft(5), build_script_A(7, 3, 2, 0),
            build_script_A(7, 3, 2, 1), realize_presentation(load_corpus("u_rank1"))]


@crit(8)
def test_c8_dual_involution_all_builders():
    for H in _builders():
        assert same_structure(H, dual_hopf(dual_hopf(H))), H.name


@pytest.mark.slow
@crit(8)
def test_c8_dual_involution_large(apq, taft_run):
    for H in (taft_run.quotient.quotient, apq.algebra):
        assert same_structure(H, dual_hopf(dual_hopf(H)))


@crit(8)
def test_c8_s4_small_pairs(taft_run, taft3_double):
    pairs = [drinfeld_double(group_algebra(cyclic_group(2))).rmatrix, taft3_double.rmatrix,
             taft_run.ribbon.rmatrix]
    for rm in pairs:
        g = drinfeld_element(rm).g
        assert s4_conjugation_failures(rm.H, g) == [], rm.H.name


@pytest.mark.slow
@crit(8)
def test_c8_s4_a73(apq, apq_ribbon):
    assert s4_conjugation_failures(apq.algebra, apq_ribbon.cert.g) == []


@crit(8)
def test_c8_dimension_multiplicativity(taft_run, taft3):
    qm = taft_run.quotient
    assert qm.source.dim == qm.quotient.dim * qm.group.order
    ident = quotient_by_central_grouplikes(taft3, [taft3.one()])
    assert ident.quotient.dim == taft3.dim


@pytest.mark.slow
@crit(8)
def test_c8_dimension_multiplicativity_a73(apq):
    qm = apq.quotient_map
    assert qm.source.dim == qm.quotient.dim * qm.group.order == 3969


@crit(8)
def test_c8_rewriting_strategy_independent():
    R = taft_presentation(3).rewrite_system()
    rng = random.Random(99)
    for _ in range(100):
        expr = {}
        for _ in range(rng.randint(1, 5)):
            w = tuple(rng.randrange(2) for _ in range(rng.randint(0, 10)))
            expr[w] = expr.get(w, CycNumber(0)) + zeta(3, rng.randrange(3)) * rng.randint(1, 4)
        a = {w: c for w, c in normal_form(R, expr).items() if c}
        b = {w: c for w, c in R.reduce_random(expr, random.Random(rng.random())).items() if c}
        assert a == b


@crit(8)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_c8_presented_taft_matches_direct(n):
    keys = ("dim", "conductor", "labels", "unit", "mult", "comult", "counit", "antipode")
    a = hopf_to_dict(realize_presentation(taft_presentation(n)))
    b = hopf_to_dict(build_taft(n))
    assert {k: a[k] for k in keys} == {k: b[k] for k in keys}


# ---------------------------------------------------------------------------
# 9. D(kG_{7,3})


@pytest.mark.slow
@crit(9)
def test_c9_group_double():
    t0 = time.perf_counter()
    run = group_double_pipeline(7, 3, 2)
    elapsed = time.perf_counter() - t0
    assert run.double.dim == 441
    assert run.double.report.passed and run.double.report.mode == "exact"
    fr = run.ribbon.factorizable
    assert fr.factorizable and fr.rank == 441 and fr.certificate.startswith("exact")
    assert run.report.get("v = u is a ribbon element").passed
    assert elapsed < GROUP_DOUBLE_BUDGET_S, f"{elapsed:.1f}s"
