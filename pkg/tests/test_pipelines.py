from hopfcert.pipelines import _power, group_double_pipeline, grouplikes_of


def test_taft_pipeline_passes(taft_run):
    assert taft_run.report.passed, [c.name for c in taft_run.report.failed()]
    assert taft_run.relations.passed


def test_taft_pipeline_dimensions(taft_run):
    assert taft_run.taft.dim == 9
    assert taft_run.double.dim == 81
    assert taft_run.quotient.quotient.dim == 27


def test_taft_pipeline_unique_ribbon(taft_run):
    cert = taft_run.ribbon.cert
    K = taft_run.quotient.quotient
    assert cert.unique and len(cert.ribbons) == 1
    expected = _power(K, cert.g, -2).mul(cert.u)
    assert cert.ribbons[0][1].equals(expected)
    l = cert.admissible[0][1]
    assert l.equals(_power(K, cert.g, -2))
    # g = (g^r)^2 with r = 2 for g of order 3
    assert _power(K, cert.g, 4).equals(cert.g)


def test_taft_pipeline_templates(taft_run):
    tp = taft_run.ribbon.templates
    assert tp.passed
    assert tp.info["templates satisfied"] == ["3.r1", "3.r2", "3.rf", "3.4"]
    assert tp.info["3.rf r"] == 2
    assert tp.info["3.r1 m"] == 2


def test_small_group_double_pipeline():
    run = group_double_pipeline(3, 1, 1)
    assert run.report.passed
    assert run.double.dim == 9
    tp = run.ribbon.templates
    # abelian: every group-like is central, so G(H) cap Z(H) = {1} fails
    assert tp.info["templates satisfied"] == []
    assert tp.info["hypotheses"]["3.r1"]["G(H) cap Z(H) = {1}"] is False


def test_grouplikes_of_prefers_metadata(taft3):
    gl, complete = grouplikes_of(taft3)
    assert complete and len(gl) == 3
