"""Reading and writing `.hopf` and `.rmat` files."""
from __future__ import annotations

import json
from pathlib import Path

from .hopf_core import HopfAlgebra
from .report import Report
from .scalars import CycNumber, ScalarSyntaxError, format_literal, parse_literal
from .tensors import TensorArray


class ParseFailure(ValueError):
    pass


def _lit(c, N: int) -> str:
    c = c if isinstance(c, CycNumber) else CycNumber(c)
    return format_literal(CycNumber(c, N))


def _element_terms(x: TensorArray, N: int) -> list:
    return [[*k, _lit(c, N)] for k, c in sorted(x.items())]


def hopf_to_dict(H: HopfAlgebra) -> dict:
    N = H.conductor
    d = H.dim
    mult = [[k // d, k % d, o, _lit(c, N)] for k, o, c in H.mult.entries()]
    comult = [[k, o // d, o % d, _lit(c, N)] for k, o, c in H.comult.entries()]
    out = {
        "name": H.name,
        "dim": d,
        "conductor": N,
        "labels": list(H.labels),
        "unit": [[i, _lit(c, N)] for i, c in sorted(H.unit.items())],
        "mult": sorted(mult, key=lambda e: e[:3]),
        "comult": sorted(comult, key=lambda e: e[:3]),
        "counit": [_lit(c, N) for c in H.counit],
        "antipode": sorted(([k, o, _lit(c, N)] for k, o, c in H.antipode.entries()), key=lambda e: e[:2])
        if H.antipode is not None else None,
        "grouplikes": [{"label": lab, "terms": _element_terms(x, N)} for lab, x in H.grouplikes],
    }
    if H.certified is not None:
        out["certified"] = {"mode": H.certified.mode, "passed": H.certified.passed}
    elif "declared_certification" in H.metadata:
        out["certified"] = H.metadata["declared_certification"]
    return out


def dumps_hopf(H: HopfAlgebra) -> str:
    return json.dumps(hopf_to_dict(H), separators=(",", ":"), ensure_ascii=False) + "\n"


def save_hopf(H: HopfAlgebra, path) -> None:
    Path(path).write_text(dumps_hopf(H), encoding="utf-8")


def _need(doc: dict, key: str):
    if key not in doc:
        raise ParseFailure(f"missing field {key!r}")
    return doc[key]


def hopf_from_dict(doc: dict) -> HopfAlgebra:
    try:
        d = int(_need(doc, "dim"))
        N = int(_need(doc, "conductor"))
        labels = _need(doc, "labels")
        P = lambda s: parse_literal(str(s), N)
        for key, width in (("mult", 4), ("comult", 4)):
            for e in _need(doc, key):
                if len(e) != width or not all(0 <= int(i) < d for i in e[:-1]):
                    raise ParseFailure(f"bad {key} entry {e!r}")
        mult = [(int(i), int(j), int(k), P(c)) for i, j, k, c in doc["mult"]]
        comult = [(int(i), int(j), int(k), P(c)) for i, j, k, c in doc["comult"]]
        counit = [P(c) for c in _need(doc, "counit")]
        if len(counit) != d:
            raise ParseFailure("counit length differs from dim")
        anti = doc.get("antipode")
        anti = None if anti is None else [(int(i), int(k), P(c)) for i, k, c in anti]
        if "unit" in doc:
            unit = {int(i): P(c) for i, c in doc["unit"]}
        else:
            unit = {labels.index("1"): CycNumber(1)}
        H = HopfAlgebra.from_entries(d, N, labels, mult, unit, comult, counit, anti, name=doc.get("name", ""))
        for g in doc.get("grouplikes") or []:
            if isinstance(g, dict):
                lab, terms = g.get("label", ""), g["terms"]
            else:
                lab, terms = "", g
            H.add_grouplike(lab, H.element({int(t[0]): P(t[1]) for t in terms}))
    except ParseFailure:
        raise
    except (ScalarSyntaxError, KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseFailure(f"malformed .hopf document: {e}") from None
    cert = doc.get("certified")
    if cert is not None:
        H.metadata["declared_certification"] = cert
    return H


def loads_hopf(text: str) -> HopfAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseFailure(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseFailure("top level must be an object")
    return hopf_from_dict(doc)


def load_hopf(path) -> HopfAlgebra:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseFailure(str(e)) from None
    H = loads_hopf(text)
    H.metadata["source"] = str(path)
    return H


def declared_certificate(H: HopfAlgebra) -> Report | None:
    """Restore the stored certification flag (only as a note; nothing is re-verified)."""
    cert = H.metadata.get("declared_certification")
    if cert is None:
        return None
    r = Report(H.name or "loaded", cert.get("mode", "exact"))
    r.notes.append("certification status read from file, not re-verified")
    return r


# -- R-matrices


def rmat_to_dict(R: TensorArray, N: int, ambient: str) -> dict:
    return {"ambient": ambient, "terms": _element_terms(R, N)}


def dumps_rmat(R: TensorArray, N: int, ambient: str) -> str:
    return json.dumps(rmat_to_dict(R, N, ambient), separators=(",", ":")) + "\n"


def save_rmat(R: TensorArray, H: HopfAlgebra, path, ambient: str) -> None:
    Path(path).write_text(dumps_rmat(R, H.conductor, ambient), encoding="utf-8")


def load_rmat(path, H: HopfAlgebra | None = None) -> tuple[HopfAlgebra, TensorArray]:
    """Read an R-matrix; the ambient algebra is loaded relative to the file when H is not given."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        if H is None:
            amb = Path(doc["ambient"])
            H = load_hopf(amb if amb.is_absolute() else path.parent / amb)
        N = H.conductor
        terms = {}
        for i, j, c in doc["terms"]:
            if not (0 <= int(i) < H.dim and 0 <= int(j) < H.dim):
                raise ParseFailure(f"index out of range in term {[i, j, c]!r}")
            terms[(int(i), int(j))] = parse_literal(str(c), N)
    except ParseFailure:
        raise
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, ScalarSyntaxError) as e:
        raise ParseFailure(f"malformed .rmat: {e}") from None
    return H, H.element(terms, degree=2)
