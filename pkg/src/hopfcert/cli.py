"""Command-line front end."""
from __future__ import annotations

import hashlib
import json
import sys
import time
from pathlib import Path

import click

from . import __version__
from .builders import BadParameters, build_A_pq, build_script_A, build_taft, cyclic_group, dual_group_algebra, \
    group_algebra, metacyclic_group
from .datum import DatumError, analyze, load_datum
from .doubles import drinfeld_double, quotient_by_central_grouplikes
from .hopf_core import AxiomFailure, HopfAlgebra, Mode, certify, default_mode, verify_hopf_axioms
from .pipelines import MissingGroupLikes, group_double_pipeline, grouplikes_of, ribbon_analysis, taft_pipeline
from .presented import PresentationError, load_corpus, parse_presentation, realize_presentation
from .quasitri import RMatrix, drinfeld_element, is_factorizable, verify_quasitriangular, verify_ribbon
from .report import Report
from .scalars import ScalarSyntaxError, parse_literal, zeta
from .serialization import ParseFailure, load_hopf, load_rmat, save_hopf, save_rmat

EXIT_OK, EXIT_BAD_PARAMS, EXIT_CERT, EXIT_PARSE, EXIT_INCOMPLETE = 0, 2, 3, 4, 5
EXACT_LIMIT, MODULAR_LIMIT = 200, 5000


class Ctx:
    def __init__(self, mode, seed, threads, as_json):
        self.mode_text = mode
        self.seed = seed
        self.threads = threads
        self.json = as_json
        self.inputs: dict[str, str] = {}

    def mode_for(self, dim: int, force: bool = False) -> Mode:
        if self.mode_text is None:
            if dim > MODULAR_LIMIT and not force:
                raise click.UsageError(f"dimension {dim} exceeds {MODULAR_LIMIT}; pass --force to proceed")
            return Mode(default_mode(dim).kind, seed=self.seed)
        m = Mode.parse(self.mode_text, self.seed)
        if m.kind == "exact" and dim > EXACT_LIMIT and not force:
            raise click.UsageError(f"exact mode on dimension {dim} > {EXACT_LIMIT} needs --force "
                                   "(use --mode modular for the randomized certificate)")
        return m

    def digest(self, path) -> None:
        p = Path(path)
        if p.exists():
            self.inputs[str(path)] = hashlib.sha256(p.read_bytes()).hexdigest()[:16]

    def emit(self, reports: list[Report], stage: str) -> bool:
        ok = all(r.passed for r in reports)
        meta = {"stage": stage, "tool": f"hopfcert {__version__}", "seed": self.seed,
                "mode": self.mode_text or "default", "threads": self.threads, "inputs": self.inputs,
                "passed": ok}
        if self.json:
            click.echo(json.dumps({"meta": meta, "reports": [r.to_dict() for r in reports]}, indent=2,
                                  sort_keys=True))
        else:
            for r in reports:
                click.echo(r.render())
            click.echo(f"[{stage}] {'PASS' if ok else 'FAIL'} (seed {self.seed}, tool {__version__})")
        return ok


def _fail(code: int, msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _load(ctx: Ctx, path) -> HopfAlgebra:
    ctx.digest(path)
    try:
        return load_hopf(path)
    except ParseFailure as e:
        _fail(EXIT_PARSE, f"cannot parse {path}: {e}")


def _load_r(ctx: Ctx, path, H: HopfAlgebra):
    ctx.digest(path)
    try:
        return load_rmat(path, H)[1]
    except ParseFailure as e:
        _fail(EXIT_PARSE, f"cannot parse {path}: {e}")


def _rmat_path(out: str) -> str:
    return str(Path(out).with_suffix(".rmat"))


@click.group()
@click.option("--mode", default=None, help="exact | modular[(prime)] | sampled[(k,seed)]; default by dimension")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--threads", default=1, show_default=True, type=int, help="worker cap (work runs in one process)")
@click.option("--json", "as_json", is_flag=True, help="machine-readable report")
@click.version_option(__version__)
@click.pass_context
def main(cctx, mode, seed, threads, as_json):
    """Build, certify and analyze finite-dimensional Hopf algebras."""
    if mode is not None:
        try:
            Mode.parse(mode)
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint="--mode")
    cctx.obj = Ctx(mode, seed, threads, as_json)


PRESETS = ["taft", "Apq", "A_l", "group", "dual-group", "halg", "corpus"]


@main.command()
@click.option("--preset", required=True, type=click.Choice(PRESETS))
@click.option("--n", type=int)
@click.option("--m", type=int)
@click.option("--p", type=int)
@click.option("--q", type=int)
@click.option("--t", type=int)
@click.option("--l", type=int)
@click.option("--q-exp", "q_exp", type=int, default=1, show_default=True, help="taft: q = zeta_n^q_exp")
@click.option("--file", "src", type=click.Path(), help="DSL file for --preset halg, corpus name for --preset corpus")
@click.option("--param", multiple=True, help="NAME=VALUE override for presentation parameters")
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--force", is_flag=True)
@click.pass_obj
def build(ctx: Ctx, preset, n, m, p, q, t, l, q_exp, src, param, out, force):
    """Build a preset algebra and write it as .hopf (plus .rmat when the preset has an R-matrix)."""
    rm = None
    reports = []
    try:
        if preset == "taft":
            H = build_taft(n or 3, zeta(n or 3, q_exp), certify_mode=None)
        elif preset in ("A_l", "Apq"):
            if None in (p, q, t):
                raise BadParameters("--p, --q and --t are required")
            if preset == "A_l":
                H = build_script_A(p, q, t, l or 0, certify_mode=None)
            else:
                res = build_A_pq(p, q, t, ctx.mode_text or "modular", seed=ctx.seed)
                reports.append(res.report)
                H, rm = res.algebra, res.rmatrix
        elif preset in ("group", "dual-group"):
            if n is None:
                raise BadParameters("--n is required")
            G = metacyclic_group(m, n, l if l is not None else 1) if m else cyclic_group(n)
            H = group_algebra(G, certify_mode=None) if preset == "group" else dual_group_algebra(G, certify_mode=None)
        else:
            overrides = {}
            for item in param:
                k, _, v = item.partition("=")
                overrides[k.strip()] = v.strip()
            if preset == "halg":
                ctx.digest(src)
                text = Path(src).read_text(encoding="utf-8")
                for k, v in overrides.items():
                    text = _override_header(text, k, v)
                P = parse_presentation(text)
            else:
                P = load_corpus(src, **overrides)
            H = realize_presentation(P, certify_mode=None)
    except BadParameters as e:
        _fail(EXIT_BAD_PARAMS, str(e))
    except (PresentationError, OSError, ScalarSyntaxError) as e:
        _fail(EXIT_PARSE, str(e))
    if H.certified is None:
        cr = certify(H, ctx.mode_for(H.dim, force), raise_on_failure=False)
        reports.append(cr)
        if not cr.passed:
            ctx.emit(reports, "build")
            sys.exit(EXIT_CERT)
    save_hopf(H, out)
    if rm is not None:
        save_rmat(rm.R, H, _rmat_path(out), Path(out).name)
    summary = Report(f"build {preset}", H.certified.mode if H.certified else "")
    summary.info.update({"dim": H.dim, "conductor": H.conductor, "out": out})
    ctx.emit(reports + [summary], "build")


def _override_header(text: str, key: str, value: str) -> str:
    import re
    return re.sub(rf"(\b{re.escape(key)}\s*=\s*)[^,)\s]+", rf"\g<1>{value}", text, count=1)


@main.command()
@click.argument("src", type=click.Path())
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--force", is_flag=True)
@click.pass_obj
def double(ctx: Ctx, src, out, force):
    """Drinfeld double with its standard R-matrix (written next to OUT as .rmat)."""
    H = _load(ctx, src)
    mode = ctx.mode_for(H.dim ** 2, force)
    Dd = drinfeld_double(H, mode, r_exact_samples=200 if H.dim ** 2 > EXACT_LIMIT else 0, seed=ctx.seed)
    ok = ctx.emit([Dd.report], "double")
    if not ok:
        sys.exit(EXIT_CERT)
    save_hopf(Dd.algebra, out)
    save_rmat(Dd.R, Dd.algebra, _rmat_path(out), Path(out).name)


@main.command()
@click.argument("src", type=click.Path())
@click.option("--rmat", type=click.Path(), help="R-matrix of SRC, pushed to the quotient")
@click.option("--by", "labels", multiple=True, help="group-like label from the file's metadata")
@click.option("--element", "elements", multiple=True,
              help='explicit sparse element as JSON, e.g. [[0,"1"],[5,"z^1"]]')
@click.option("-o", "--out", required=True, type=click.Path())
@click.option("--force", is_flag=True)
@click.pass_obj
def quotient(ctx: Ctx, src, rmat, labels, elements, out, force):
    """Quotient by the Hopf ideal generated by central group-likes."""
    H = _load(ctx, src)
    gens = []
    try:
        for lab in labels:
            gens.append((lab, H.grouplike(lab)))
        for k, text in enumerate(elements):
            terms = json.loads(text)
            gens.append((f"element{k}", H.element({int(i): parse_literal(str(c), H.conductor) for i, c in terms})))
    except KeyError as e:
        _fail(EXIT_INCOMPLETE, str(e))
    except (ValueError, TypeError, ScalarSyntaxError) as e:
        _fail(EXIT_PARSE, f"bad --element: {e}")
    if not gens:
        _fail(EXIT_BAD_PARAMS, "give at least one --by or --element")
    rm = RMatrix(H, _load_r(ctx, rmat, H)) if rmat else None
    try:
        qm = quotient_by_central_grouplikes(H, gens, rm, None, certify_result=False)
    except (ValueError, AssertionError) as e:
        _fail(EXIT_CERT, str(e))
    Q = qm.quotient
    Q.name = f"{H.name}/<{','.join(l for l, _ in gens)}>"
    cr = certify(Q, ctx.mode_for(Q.dim, force), raise_on_failure=False)
    qm.report.extend(cr, "hopf.")
    reports = [qm.report]
    if qm.rmatrix is not None:
        rv = verify_quasitriangular(Q, qm.rmatrix.R, ctx.mode_for(Q.dim, force), seed=ctx.seed)
        reports.append(rv.report)
    ok = ctx.emit(reports, "quotient")
    if not ok:
        sys.exit(EXIT_CERT)
    save_hopf(Q, out)
    if qm.rmatrix is not None:
        save_rmat(qm.rmatrix.R, Q, _rmat_path(out), Path(out).name)


@main.command()
@click.argument("src", type=click.Path())
@click.option("--rmat", type=click.Path(), help="R-matrix file; default SRC with .rmat suffix when present")
@click.option("--all", "all_", is_flag=True)
@click.option("--axioms", is_flag=True)
@click.option("--quasitriangular", is_flag=True)
@click.option("--ribbon", is_flag=True)
@click.option("--factorizable", is_flag=True)
@click.option("--force", is_flag=True)
@click.pass_obj
def verify(ctx: Ctx, src, rmat, all_, axioms, quasitriangular, ribbon, factorizable, force):
    """Run the selected check suites; exit 0 iff every selected check passes."""
    H = _load(ctx, src)
    if not (axioms or quasitriangular or ribbon or factorizable):
        all_ = True
    if all_:
        axioms = quasitriangular = ribbon = factorizable = True
    mode = ctx.mode_for(H.dim, force)
    reports = []
    if axioms:
        reports.append(verify_hopf_axioms(H, mode, seed=ctx.seed))
        if mode.kind == "modular":
            reports.append(verify_hopf_axioms(H, Mode("sampled", k=200, seed=ctx.seed)))
    rpath = rmat or (str(Path(src).with_suffix(".rmat")) if Path(src).with_suffix(".rmat").exists() else None)
    if quasitriangular or ribbon or factorizable:
        if rpath is None:
            _fail(EXIT_PARSE, "an R-matrix is required (--rmat)")
        R = _load_r(ctx, rpath, H)
        rm = verify_quasitriangular(H, R, mode, seed=ctx.seed, exact_samples=200 if mode.kind != "exact" else 0)
        if quasitriangular:
            reports.append(rm.report)
        if factorizable:
            fr = is_factorizable(rm, "modular" if mode.kind == "modular" else "exact", seed=ctx.seed)
            r = Report(f"factorizability of {H.name}", mode.describe())
            r.add("factorizable", fr.factorizable, method=fr.certificate, detail=f"rank {fr.rank} / {fr.dim}")
            if mode.kind == "modular" and fr.factorizable:
                r.notes.append("modular certificate: full rank over a prime specialization implies full rank")
            reports.append(r)
        if ribbon:
            cert = drinfeld_element(rm)
            reports.append(cert.report)
            gl, complete = grouplikes_of(H, ctx.seed)
            r = Report(f"ribbon elements of {H.name}", "exact")
            from .quasitri import kr_ribbon_search
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                kr_ribbon_search(rm, gl, complete, cert)
            r.add("ribbon element exists", bool(cert.ribbons), detail=f"{len(cert.ribbons)} found")
            for lab, v in cert.ribbons:
                r.extend(verify_ribbon(rm, v, cert), f"v = u*{lab}: ")
            reports.append(r)
    ok = ctx.emit(reports, "verify")
    sys.exit(EXIT_OK if ok else EXIT_CERT)


@main.command("ribbon")
@click.argument("src", type=click.Path())
@click.argument("rmat", type=click.Path())
@click.pass_obj
def ribbon_cmd(ctx: Ctx, src, rmat):
    """List u, g, every admissible l and ribbon element v = ul, and the satisfied templates."""
    H = _load(ctx, src)
    R = _load_r(ctx, rmat, H)
    rm = verify_quasitriangular(H, R, ctx.mode_for(H.dim, True), seed=ctx.seed)
    if not rm.verified:
        ctx.emit([rm.report], "ribbon")
        sys.exit(EXIT_CERT)
    gl, complete = grouplikes_of(H, ctx.seed)
    if not H.grouplikes and not complete:
        _fail(EXIT_INCOMPLETE, "no group-like metadata and the group-like enumeration is incomplete")
    try:
        rr = ribbon_analysis(rm, ctx.seed, require_grouplikes=True)
    except MissingGroupLikes as e:
        _fail(EXIT_INCOMPLETE, str(e))
    c = rr.cert
    rr.report.info["u"] = _show(c.u)
    rr.report.info["g"] = _show(c.g)
    for lab, l in c.admissible:
        rr.report.info[f"l = {lab}"] = _show(l)
    for lab, v in c.ribbons:
        rr.report.info[f"v = u*{lab}"] = _show(v)
    ok = ctx.emit([rm.report, rr.report], "ribbon")
    sys.exit(EXIT_OK if ok else EXIT_CERT)


def _show(x, limit: int = 12) -> str:
    H = x.H
    items = sorted(x.items())
    parts = [f"({c})*{H.labels[k[0]]}" for k, c in items[:limit]]
    more = f" + ... ({len(items)} terms)" if len(items) > limit else ""
    return " + ".join(parts) + more if parts else "0"


@main.command("analyze")
@click.argument("src", type=click.Path())
@click.pass_obj
def analyze_cmd(ctx: Ctx, src):
    """Datum-level checks for the ribbon/factorizability theorems, chosen by the file's fields."""
    ctx.digest(src)
    try:
        cd, rd = load_datum(src)
    except (DatumError, OSError) as e:
        _fail(EXIT_PARSE, str(e))
    reports = analyze(cd, rd)
    ok = ctx.emit(reports, "analyze")
    sys.exit(EXIT_OK if ok else EXIT_CERT)


@main.command()
@click.argument("pipeline", type=click.Choice(["taft", "group-double", "apq"]))
@click.option("--n", type=int, default=3)
@click.option("--m", type=int, default=7)
@click.option("--l", type=int, default=2)
@click.option("--p", type=int, default=7)
@click.option("--q", type=int, default=3)
@click.option("--t", type=int, default=2)
@click.pass_obj
def report(ctx: Ctx, pipeline, n, m, l, p, q, t):
    """Run a full pipeline and print its certification report."""
    t0 = time.perf_counter()
    try:
        if pipeline == "taft":
            reps = [taft_pipeline(n, ctx.seed).report]
        elif pipeline == "group-double":
            reps = [group_double_pipeline(m, n, l, ctx.seed).report]
        else:
            from .builders import verify_Apq_presentation
            res = build_A_pq(p, q, t, ctx.mode_text or "modular", seed=ctx.seed)
            el = res.elements
            gens = [("x", el["x"]), ("y", el["y"])] + [(f"z{i}", z) for i, z in enumerate(el["z"])] \
                + [(f"e{i}", e) for i, e in enumerate(el["e"])]
            rr = ribbon_analysis(res.rmatrix, ctx.seed, factor_backend="modular", generators=gens)
            reps = [res.report, verify_Apq_presentation(res), rr.report]
    except BadParameters as e:
        _fail(EXIT_BAD_PARAMS, str(e))
    except AxiomFailure as e:
        ctx.emit([e.report], "report")
        sys.exit(EXIT_CERT)
    reps[0].timings["wall"] = time.perf_counter() - t0
    ok = ctx.emit(reps, "report")
    sys.exit(EXIT_OK if ok else EXIT_CERT)


if __name__ == "__main__":
    main()
