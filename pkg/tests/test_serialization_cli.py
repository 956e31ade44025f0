import json

import pytest
from click.testing import CliRunner

from hopfcert.builders import build_script_A, build_taft, cyclic_group, dual_group_algebra, group_algebra
from hopfcert.cli import main
from hopfcert.doubles import drinfeld_double
from hopfcert.hopf_core import GroupLikeSearch, same_structure
from hopfcert.presented import load_corpus, realize_presentation
from hopfcert.serialization import (ParseFailure, dumps_hopf, dumps_rmat, hopf_to_dict, load_rmat, loads_hopf,
                                    save_hopf, save_rmat)

BUILDERS = {
    "kZ2": lambda: group_algebra(cyclic_group(2)),
    "k^Z4": lambda: dual_group_algebra(cyclic_group(4)),
    "Taft3": lambda: build_taft(3),
    "Taft4": lambda: build_taft(4),
    "A_0(7,3)": lambda: build_script_A(7, 3, 2, 0),
    "A_1(7,3)": lambda: build_script_A(7, 3, 2, 1),
    "URank1": lambda: realize_presentation(load_corpus("u_rank1")),
    "D(kZ2)": lambda: drinfeld_double(group_algebra(cyclic_group(2))).algebra,
}


@pytest.mark.parametrize("name", list(BUILDERS))
def test_round_trip_byte_identical(name):
    H = BUILDERS[name]()
    text = dumps_hopf(H)
    back = loads_hopf(text)
    assert dumps_hopf(back) == text
    assert same_structure(H, back, check_labels=True)


def test_rmat_round_trip(tmp_path):
    Dd = drinfeld_double(group_algebra(cyclic_group(2)))
    save_hopf(Dd.algebra, tmp_path / "d.hopf")
    save_rmat(Dd.R, Dd.algebra, tmp_path / "d.rmat", "d.hopf")
    H, R = load_rmat(tmp_path / "d.rmat")
    assert dumps_rmat(R, H.conductor, "d.hopf") == (tmp_path / "d.rmat").read_text()
    assert sorted(R.items()) == sorted(Dd.R.items())


@pytest.mark.parametrize("text", ["{", "[]", '{"dim": 2}', '{"dim": 1, "conductor": 1, "labels": ["1"], '
                                  '"mult": [[0, 0, 5, "1"]], "comult": [], "counit": ["1"]}'])
def test_parse_failures(text):
    with pytest.raises(ParseFailure):
        loads_hopf(text)


def test_bad_literal_is_parse_failure():
    doc = hopf_to_dict(group_algebra(cyclic_group(2)))
    doc["counit"][0] = "1+*z"
    with pytest.raises(ParseFailure):
        loads_hopf(json.dumps(doc))


# -- command line


@pytest.fixture()
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return go


def test_build_taft(run, tmp_path):
    r = run("build", "--preset", "taft", "--n", 3, "-o", "t3.hopf")
    assert r.exit_code == 0, r.output
    H = loads_hopf((tmp_path / "t3.hopf").read_text())
    assert H.dim == 9


def test_build_taft_q_exponent(run, tmp_path):
    assert run("build", "--preset", "taft", "--n", 3, "--q-exp", 2, "-o", "t.hopf").exit_code == 0
    assert run("build", "--preset", "taft", "--n", 4, "--q-exp", 2, "-o", "bad.hopf").exit_code == 2


def test_build_bad_parameters(run):
    assert run("build", "--preset", "A_l", "--p", 5, "--q", 3, "--t", 2, "--l", 0, "-o", "x.hopf").exit_code == 2
    assert run("build", "--preset", "group", "--m", 7, "--n", 3, "--l", 3, "-o", "x.hopf").exit_code == 2


def test_verify_corrupted_axioms(run, tmp_path):
    doc = hopf_to_dict(group_algebra(cyclic_group(2)))
    doc["antipode"] = []
    (tmp_path / "bad.hopf").write_text(json.dumps(doc))
    r = run("--json", "verify", "bad.hopf", "--axioms")
    assert r.exit_code == 3
    out = json.loads(r.output)
    failed = [c for rep in out["reports"] for c in rep["checks"] if c["status"] == "fail"]
    assert failed and failed[0]["name"] == "antipode" and failed[0]["witnesses"]


def test_parse_failure_exit(run, tmp_path):
    (tmp_path / "junk.hopf").write_text("{not json")
    assert run("verify", "junk.hopf").exit_code == 4


def test_double_verify_and_ribbon(run, tmp_path):
    assert run("build", "--preset", "group", "--n", 2, "-o", "k2.hopf").exit_code == 0
    assert run("double", "k2.hopf", "-o", "d.hopf").exit_code == 0
    assert (tmp_path / "d.rmat").exists()
    r = run("verify", "d.hopf", "--all")
    assert r.exit_code == 0, r.output
    r = run("--mode", "modular", "verify", "d.hopf", "--factorizable")
    assert r.exit_code == 0 and "modular certificate" in r.output
    r = run("--json", "ribbon", "d.hopf", "d.rmat")
    assert r.exit_code == 0, r.output
    info = json.loads(r.output)["reports"][1]["info"]
    assert "u" in info and "g" in info and any(k.startswith("v = u*") for k in info)


def test_ribbon_exit_when_grouplikes_unavailable(run, tmp_path, monkeypatch):
    import hopfcert.pipelines as pl
    run("build", "--preset", "group", "--n", 2, "-o", "k2.hopf")
    run("double", "k2.hopf", "-o", "d.hopf")
    doc = json.loads((tmp_path / "d.hopf").read_text())
    doc["grouplikes"] = []
    (tmp_path / "d.hopf").write_text(json.dumps(doc))
    monkeypatch.setattr(pl, "find_group_likes", lambda H, seed=0: GroupLikeSearch([], False))
    assert run("ribbon", "d.hopf", "d.rmat").exit_code == 5


def test_taft_double_quotient_ribbon(run, tmp_path):
    assert run("build", "--preset", "taft", "--n", 3, "-o", "t3.hopf").exit_code == 0
    assert run("double", "t3.hopf", "-o", "dt.hopf").exit_code == 0
    # chibar (x) g: chibar(g^j) = zeta^j on the dual coordinates 0, 1, 2, times g (index 1)
    elem = json.dumps([[1, "1"], [10, "z^1"], [19, "z^2"]])
    r = run("quotient", "dt.hopf", "--rmat", "dt.rmat", "--element", elem, "-o", "k.hopf")
    assert r.exit_code == 0, r.output
    assert loads_hopf((tmp_path / "k.hopf").read_text()).dim == 27
    r = run("--json", "ribbon", "k.hopf", "k.rmat")
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)["reports"][1]
    assert rep["info"]["templates satisfied"] == ["3.r1", "3.r2", "3.rf", "3.4"]
    assert rep["info"]["unique"] is True


def write_datum(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p.name


def test_analyze_datums(run, tmp_path):
    from hopfcert.datum import datum_to_dict, h_omega_datum, k_alpha_datum
    assert run("analyze", write_datum(tmp_path, "h5.datum", datum_to_dict(h_omega_datum(5)))).exit_code == 0
    assert run("analyze", write_datum(tmp_path, "h21.datum", datum_to_dict(h_omega_datum(21)))).exit_code == 3
    assert run("analyze", write_datum(tmp_path, "k5.datum", datum_to_dict(k_alpha_datum(5)))).exit_code == 0
    (tmp_path / "bad.datum").write_text("[1, 2")
    assert run("analyze", "bad.datum").exit_code == 4


def test_json_reports_are_deterministic(run, tmp_path):
    run("build", "--preset", "taft", "--n", 2, "-o", "s.hopf")

    def strip(text):
        doc = json.loads(text)
        for rep in doc["reports"]:
            rep.pop("timings", None)
        return doc
    a = strip(run("--json", "--seed", 3, "verify", "s.hopf", "--axioms").output)
    b = strip(run("--json", "--seed", 3, "verify", "s.hopf", "--axioms").output)
    assert a == b and a["meta"]["seed"] == 3


def test_exact_mode_refuses_large_without_force(run, tmp_path):
    save_hopf(build_script_A(7, 3, 2, 0), tmp_path / "a0.hopf")
    r = run("--mode", "exact", "double", "a0.hopf", "-o", "d.hopf")
    assert r.exit_code == 2
