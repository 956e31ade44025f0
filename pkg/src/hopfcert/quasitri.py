"""Quasitriangular structures: R-matrix axioms, Drinfeld element, ribbon elements, factorizability."""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .hopf_core import (AmbientMismatch, AxiomFailure, HopfAlgebra, Mode, NotCentral, NotGroupLike,
                        antipode_power, central_failures, is_group_like, make_specialization)
from .linalg import SparseEchelon, exact_rank, rank_mod
from .report import Report
from .scalars import BadDenominator, CycNumber
from .tensors import Batch, CHUNK, ModRing, TensorArray, batch_difference, concat_batches, sum_rows

Element = TensorArray


class ConventionFailure(Exception):
    pass


class SingularMonodromy(ArithmeticError):
    pass


class IncompleteInput(UserWarning):
    pass


@dataclass
class RMatrix:
    H: HopfAlgebra
    R: Element
    inverse: Element | None = None
    monodromy: Element | None = None
    report: Report | None = None
    convention: str = "standard"

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.passed

    def terms(self):
        return self.R.items()


@dataclass
class RibbonCertificate:
    u: Element
    u_inv: Element
    c: Element
    g: Element
    convention: str
    admissible: list = field(default_factory=list)      # (label, l)
    ribbons: list = field(default_factory=list)         # (label, v)
    unique: bool = False
    report: Report | None = None


def r_from_terms(H: HopfAlgebra, terms) -> Element:
    """R from [(i, j, scalar)]."""
    return H.element({(H.index(i), H.index(j)): c for i, j, c in terms}, degree=2)


def trivial_r(H: HopfAlgebra) -> Element:
    return H.one().tensor(H.one())


# ---------------------------------------------------------------------------
# tensor contractions built on batches


def _rows(T: TensorArray, ring):
    T = T.with_ring(ring) if T.ring != ring else T
    return T.legs(), T.vals, T.den


def _pair_contract(A: TensorArray, B: TensorArray, ring, plan, out_degree: int) -> TensorArray:
    """Sum over term pairs (s, t) of A (x) B of a product pattern.

    The 4 input legs are (A0, A1, B0, B1); plan is a list of (x, y) leg pairs to be multiplied or single legs,
    listed in output order.
    """
    H = A.H
    la, va, da = _rows(A, ring)
    lb, vb, db = _rows(B, ring)
    na, nb = len(la), len(lb)
    pieces = []
    step = max(1, CHUNK // max(1, nb))
    for s in range(0, na, step):
        e = min(na, s + step)
        ia = np.repeat(np.arange(s, e), nb)
        ib = np.tile(np.arange(nb), e - s)
        legs = np.concatenate([la[ia], lb[ib]], axis=1)
        vals, den = ring.mul(va[ia], da, vb[ib], db)
        bt = Batch(H, ring, np.zeros(len(ia), dtype=np.int64), legs, vals, den)
        bt = _apply_plan(bt, plan)
        cols, v, dd = bt.combined()
        pieces.append(Batch(H, ring, cols[0], np.stack(cols[1:], axis=1), v, dd))
    tot = concat_batches(pieces, H, ring, out_degree)
    cols, v, dd = tot.combined()
    legs = np.stack(cols[1:], axis=1) if len(cols) > 1 else np.zeros((len(v), 0), dtype=np.int64)
    return TensorArray.from_legs(H, legs, v, dd, ring)


def _apply_plan(bt: Batch, plan) -> Batch:
    # multiply listed pairs; positions shift as legs are consumed, so track them
    pos = list(range(bt.degree))
    order = []
    for item in plan:
        if isinstance(item, tuple):
            x, y = item
            a, b = pos.index(x), pos.index(y)
            bt = bt.mul_legs(a, b)
            pos.pop(b)
            order.append(x)
        else:
            order.append(item)
    perm = [pos.index(x) for x in order]
    return bt.permute(perm)


def r13_r23(R: TensorArray, ring) -> TensorArray:
    # sum r1_s (x) r1_t (x) r2_s r2_t
    return _pair_contract(R, R, ring, [0, 2, (1, 3)], 3)


def r13_r12(R: TensorArray, ring) -> TensorArray:
    # R13 R12 = sum r1_s r1_t (x) r2_t (x) r2_s
    return _pair_contract(R, R, ring, [(0, 2), 3, 1], 3)


def r21_r(R: TensorArray, ring) -> TensorArray:
    # sum r2_s r1_t (x) r1_s r2_t
    return _pair_contract(R, R, ring, [(1, 2), (0, 3)], 2)


def _eq(a: TensorArray, b: TensorArray) -> bool:
    return a.equals(b)


def _witness_keys(a: TensorArray, b: TensorArray, limit=3):
    diff = a - b
    return [k for k, _ in diff.items()[:limit]]


def _ring_for(H: HopfAlgebra, mode: Mode, skip: int = 0):
    if mode.kind == "exact":
        return H.ring
    return ModRing(make_specialization(H.conductor, mode, skip))


def _commutation_failures(H, R: TensorArray, ring, hs: list[TensorArray], labels) -> list:
    """Delta^op(h) R == R Delta(h) for each given element h."""
    bad = []
    Rr = R.with_ring(ring) if R.ring != ring else R
    for lab, h in zip(labels, hs):
        h = h.with_ring(ring) if h.ring != ring else h
        dh = h.apply_comult(0)
        left = _pair_contract(dh.permute([1, 0]), Rr, ring, [(0, 2), (1, 3)], 2)
        right = _pair_contract(Rr, dh, ring, [(0, 2), (1, 3)], 2)
        if not left.equals(right):
            bad.append(lab)
    return bad


def _commutation_basis(H, R: TensorArray, ring, idx: np.ndarray) -> list[int]:
    d = H.dim
    Rr = R.with_ring(ring) if R.ring != ring else R
    bad = []
    # size chunks by the number of produced rows
    cnt = np.diff(H.comult.ptr)[idx] * max(1, Rr.nnz)
    start = 0
    while start < len(idx):
        acc, end = 0, start
        while end < len(idx) and (acc == 0 or acc + cnt[end] <= CHUNK):
            acc += cnt[end]
            end += 1
        sub = idx[start:end]
        B = Batch.basis(H, ring, sub, sub.reshape(-1, 1))
        left = B.comult_leg(0, cop=True).mul_const(Rr, left=False)
        right = B.comult_leg(0).mul_const(Rr, left=True)
        bad.extend(batch_difference(left, right).tolist())
        start = end
    return sorted(bad)


def verify_quasitriangular(H: HopfAlgebra, R: TensorArray, mode="exact", *, generators=None,
                           exact_samples: int = 0, seed: int = 0, raise_on_failure: bool = False) -> RMatrix:
    """Check (Delta(x)id)R = R13R23, (id(x)Delta)R = R13R12, Delta^op(h)R = RDelta(h), invertibility.

    With `generators` the commutation axiom is checked on an algebra generating set only, which suffices
    because Delta and Delta^op are algebra maps.
    """
    if R.H is not H:
        raise AmbientMismatch("R lives in another algebra")
    if R.degree != 2:
        from .hopf_core import DegreeMismatch
        raise DegreeMismatch("R must have degree 2")
    mode = mode if isinstance(mode, Mode) else Mode.parse(mode, seed)
    ring = _ring_for(H, mode)
    rep = Report(f"R-matrix on {H.name}", mode.describe())
    t0 = time.perf_counter()
    Rr = R.with_ring(ring)
    lhs = Rr.apply_comult(0)
    rhs = r13_r23(Rr, ring)
    rep.add("delta_left", _eq(lhs, rhs), [] if _eq(lhs, rhs) else _witness_keys(lhs, rhs), "direct")
    lhs = Rr.apply_comult(1)
    rhs = r13_r12(Rr, ring)
    rep.add("delta_right", _eq(lhs, rhs), [] if _eq(lhs, rhs) else _witness_keys(lhs, rhs), "direct")
    rep.timings["coproduct_axioms"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    if generators is None:
        bad = _commutation_basis(H, R, ring, np.arange(H.dim))
        rep.add("commutation", not bad, bad, "all basis elements")
    else:
        labels = [g[0] if isinstance(g, tuple) else f"gen{i}" for i, g in enumerate(generators)]
        elems = [g[1] if isinstance(g, tuple) else g for i, g in enumerate(generators)]
        bad = _commutation_failures(H, R, ring, elems, labels)
        rep.add("commutation", not bad, bad, f"{len(elems)} algebra generators")
    if exact_samples:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(H.dim, size=min(exact_samples, H.dim), replace=False))
        bad = _commutation_basis(H, R, H.ring, idx)
        rep.add("commutation_sampled_exact", not bad, bad, f"{len(idx)} random basis elements, exact")
    rep.timings["commutation"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    inv = R.apply_linear(0, H.antipode)
    one2 = H.one().tensor(H.one())
    invr = inv.with_ring(ring)
    ok1 = Rr.mul(invr).equals(one2.with_ring(ring))
    ok2 = invr.mul(Rr).equals(one2.with_ring(ring))
    method = "(S(x)id)R"
    if not (ok1 and ok2):
        solved = _solve_r_inverse(H, R)
        if solved is not None:
            inv, ok1, ok2, method = solved, True, True, "linear solve"
    rep.add("invertible", ok1 and ok2, [], method)
    rep.timings["inverse"] = time.perf_counter() - t0
    rm = RMatrix(H, R, inv if (ok1 and ok2) else None, None, rep)
    if raise_on_failure and not rep.passed:
        raise AxiomFailure(rep)
    return rm


def _solve_r_inverse(H: HopfAlgebra, R: TensorArray) -> TensorArray | None:
    """Solve R X = 1(x)1 in H(x)H by left multiplication (exact, small dimensions only)."""
    d = H.dim
    if d * d > 2500:
        return None
    n = d * d
    cols: list[dict] = [dict() for _ in range(n)]
    for k in range(n):
        e = H.element({(k // d, k % d): 1}, degree=2)
        for key, c in R.mul(e).items():
            cols[k][key[0] * d + key[1]] = c
    rows: dict[int, dict] = {}
    for k, col in enumerate(cols):
        for r, c in col.items():
            rows.setdefault(r, {})[k] = c
    target = H.one().tensor(H.one()).to_dict()
    ech = SparseEchelon()
    for r in range(n):
        row = dict(rows.get(r, {}))
        t = target.get(((r // d), r % d))
        if t:
            row[n] = t
        ech.add(row)
    red = ech.rref()
    if n in red:
        return None
    sol = {p: r.get(n, CycNumber(0)) for p, r in red.items() if r.get(n)}
    return H.element({(k // d, k % d): c for k, c in sol.items()}, degree=2)


# ---------------------------------------------------------------------------
# Drinfeld element


def _u_candidates(H: HopfAlgebra, R: TensorArray):
    S = H.antipode
    # u = sum S(r2) r1
    yield "S(R2)R1", _leg_product(R.apply_linear(1, S), first=1)
    # the other leg naming: u = sum S(r1) r2
    yield "S(R1)R2", _leg_product(R.apply_linear(0, S), first=0)


def _leg_product(T: TensorArray, first: int) -> TensorArray:
    """Multiply the two legs of a degree-2 tensor in the given order."""
    H = T.H
    ring = T.ring
    bt = Batch(H, ring, np.zeros(T.nnz, dtype=np.int64), T.legs(), T.vals, T.den)
    if first == 1:
        bt = bt.permute([1, 0])
    bt = bt.mul_legs(0, 1)
    cols, v, dd = bt.combined()
    return TensorArray.from_legs(H, np.stack(cols[1:], axis=1), v, dd, ring)


def inverse_element(H: HopfAlgebra, x: TensorArray) -> TensorArray | None:
    """Exact two-sided inverse by solving x w = 1 (left-multiplication matrix)."""
    d = H.dim
    B = Batch.basis(H, H.ring, np.arange(d), np.arange(d).reshape(-1, 1))
    prod = B.mul_const(x, left=True)   # x * b_k, per bid k
    cols, vals, den = prod.combined()
    cyc = H.ring.to_cyc(vals, den)
    rows: dict[int, dict] = {}
    for k, i, c in zip(cols[0].tolist(), cols[1].tolist(), cyc):
        rows.setdefault(i, {})[k] = c
    ech = SparseEchelon()
    for i in range(d):
        row = dict(rows.get(i, {}))
        t = H.unit.get(i)
        if t:
            row[d] = t
        ech.add(row)
    red = ech.rref()
    if d in red or len(red) < d:
        return None
    w = H.element({p: r[d] for p, r in red.items() if r.get(d)})
    if not w.mul(x).equals(H.one()):
        return None
    return w


def drinfeld_element(rm: RMatrix) -> RibbonCertificate:
    H, R = rm.H, rm.R
    tried = []
    for conv, u in _u_candidates(H, R):
        rep = Report(f"Drinfeld element ({conv})", "exact")
        # closed-form candidate u^-1 = sum r2 S^2(r1), certified by multiplication, else linear solve
        S2 = antipode_power(H, 2)
        if conv == "S(R2)R1":
            cand = _leg_product(R.apply_linear(0, S2), first=1)
        else:
            cand = _leg_product(R.apply_linear(1, S2), first=0)
        one = H.one()
        if u.mul(cand).equals(one) and cand.mul(u).equals(one):
            u_inv, how = cand, "closed form"
        else:
            u_inv, how = inverse_element(H, u), "linear solve"
        if u_inv is None:
            tried.append((conv, "u not invertible"))
            continue
        rep.add("u_invertible", True, method=how)
        Su = u.apply_linear(0, H.antipode)
        c = u.mul(Su)
        g = u.mul(u_inv.apply_linear(0, H.antipode))
        cf = central_failures(H, c)
        rep.add("c_central", not cf, cf)
        rep.add("g_grouplike", is_group_like(H, g))
        bad = s4_conjugation_failures(H, g)
        rep.add("S4_conjugation", not bad, bad, "all basis elements")
        if rep.passed:
            return RibbonCertificate(u, u_inv, c, g, conv, report=rep)
        tried.append((conv, [ch.name for ch in rep.failed()]))
    raise ConventionFailure(f"no leg convention satisfies the Drinfeld element checks: {tried}")


def s4_conjugation_failures(H: HopfAlgebra, g: TensorArray) -> list[int]:
    """Basis indices i with S^4(b_i) g != g b_i."""
    d = H.dim
    ring = H.ring
    idx = np.arange(d)
    B = Batch.basis(H, ring, idx, idx.reshape(-1, 1))
    left = B.map_leg(0, antipode_power(H, 4)).mul_const(g, left=False)
    right = B.mul_const(g, left=True)
    return batch_difference(left, right).tolist()


# ---------------------------------------------------------------------------
# ribbon elements


def verify_ribbon(rm: RMatrix, v: TensorArray, cert: RibbonCertificate | None = None) -> Report:
    H = rm.H
    cert = cert or drinfeld_element(rm)
    rep = Report(f"ribbon check on {H.name}", "exact")
    cf = central_failures(H, v)
    rep.add("central", not cf, cf)
    rep.add("square_is_c", v.mul(v).equals(cert.c))
    rep.add("antipode_fixed", v.apply_linear(0, H.antipode).equals(v))
    eps = v.apply_counit(0).scalar_value() if v.nnz else CycNumber(0)
    rep.add("counit_one", eps == 1, [] if eps == 1 else [str(eps)])
    mono = monodromy(rm)
    dv = v.apply_comult(0)
    rep.add("coproduct", dv.mul(mono).equals(v.tensor(v)), method="Delta(v) R21R = v(x)v")
    return rep


def monodromy(rm: RMatrix, ring=None) -> TensorArray:
    ring = ring or rm.H.ring
    if ring == rm.H.ring:
        if rm.monodromy is None:
            rm.monodromy = r21_r(rm.R, ring)
        return rm.monodromy
    return r21_r(rm.R.with_ring(ring), ring)


def kr_ribbon_search(rm: RMatrix, grouplikes, complete: bool = False,
                     cert: RibbonCertificate | None = None) -> RibbonCertificate:
    """Ribbon elements v = u l for group-likes l with l^2 = g^-1 and S^2(h) = l^-1 h l."""
    H = rm.H
    cert = cert or drinfeld_element(rm)
    if not complete:
        warnings.warn("group-like list not flagged complete; uniqueness cannot be certified", IncompleteInput)
    d = H.dim
    S2 = antipode_power(H, 2)
    idx = np.arange(d)
    B = Batch.basis(H, H.ring, idx, idx.reshape(-1, 1))
    s2b = B.map_leg(0, S2)
    one = H.one()
    adm, ribbons = [], []
    for item in grouplikes:
        lab, l = item if isinstance(item, tuple) else (str(item), item)
        if not l.mul(l).mul(cert.g).equals(one):
            continue
        if len(batch_difference(s2b.mul_const(l, left=True), B.mul_const(l, left=False))):
            continue
        v = cert.u.mul(l)
        r = verify_ribbon(rm, v, cert)
        if not r.passed:
            raise AssertionError(f"admissible {lab} gave a non-ribbon element: {[c.name for c in r.failed()]}")
        adm.append((lab, l))
        ribbons.append((lab, v))
    cert.admissible = adm
    cert.ribbons = ribbons
    cert.unique = complete and len(adm) == 1
    return cert


# ---------------------------------------------------------------------------
# factorizability


def monodromy_matrix(rm: RMatrix, ring=None):
    """Coefficients m_ij of R21R = sum m_ij b_i (x) b_j: dict for exact rings, dense array mod p."""
    H = rm.H
    ring = ring or H.ring
    M = monodromy(rm, ring)
    legs = M.legs()
    if ring.kind == "exact":
        return {(int(i), int(j)): c for (i, j), c in zip(legs.tolist(), ring.to_cyc(M.vals, M.den))}
    out = np.zeros((H.dim, H.dim), dtype=np.int64)
    out[legs[:, 0], legs[:, 1]] = M.vals
    return out


@dataclass
class FactorizabilityResult:
    factorizable: bool
    rank: int
    dim: int
    certificate: str


def is_factorizable(rm: RMatrix, backend: str = "exact", seed: int = 0) -> FactorizabilityResult:
    H = rm.H
    d = H.dim
    if backend == "modular":
        for attempt in range(5):
            try:
                spec = make_specialization(H.conductor, Mode("modular", seed=seed), skip=attempt)
                ring = ModRing(spec)
                M = monodromy_matrix(rm, ring)
            except BadDenominator:
                continue
            r = rank_mod(M, spec.prime)
            if r == d:
                return FactorizabilityResult(True, r, d, f"full rank mod {spec.prime}")
            res = is_factorizable(rm, "exact")
            res.certificate += f" (modular rank {r} mod {spec.prime} confirmed exactly)"
            return res
        raise BadDenominator("five primes hit denominators of the monodromy matrix")
    entries = monodromy_matrix(rm)
    r = exact_rank(entries, d, d)
    return FactorizabilityResult(r == d, r, d, "exact elimination")


def _dual_coords_solve(rm: RMatrix, target: TensorArray) -> dict[int, CycNumber]:
    """Coordinates a of Phi^-1(target): sum_i a_i m_ij = target_j."""
    d = rm.H.dim
    entries = monodromy_matrix(rm)
    rows: dict[int, dict] = {}
    for (i, j), c in entries.items():
        rows.setdefault(j, {})[i] = c
    tv = {k[0]: c for k, c in target.items()}
    ech = SparseEchelon()
    for j in range(d):
        row = dict(rows.get(j, {}))
        if tv.get(j):
            row[d] = tv[j]
        ech.add(row)
    red = ech.rref()
    if d in red or len(red) < d:
        raise SingularMonodromy("monodromy matrix is not invertible")
    return {p: r[d] for p, r in red.items() if r.get(d)}


def central_pairing_matrix(rm: RMatrix | None, G, method: str = "solve", pairs=None):
    """Matrix [(Phi^-1(g))(h)] over G and its nondegeneracy.

    solve: G is a list of (label, element) central group-likes of rm.H.
    closed_form: pairs is a list of (chi_values, g_values) with chi_i(g_j) computed as
    sum_k chi_i[k] g_j[k]; entry (i, j) = chi_i(g_j) chi_j(g_i).
    """
    if method == "closed_form":
        n = len(pairs)

        def ev(chi, g):
            return sum((chi.get(k, CycNumber(0)) * c for k, c in g.items()), CycNumber(0))

        mat = [[ev(pairs[i][0], pairs[j][1]) * ev(pairs[j][0], pairs[i][1]) for j in range(n)] for i in range(n)]
    else:
        H = rm.H
        items = [g if isinstance(g, tuple) else (f"g{i}", g) for i, g in enumerate(G)]
        for lab, g in items:
            if not is_group_like(H, g):
                raise NotGroupLike(f"{lab} is not group-like")
            if central_failures(H, g):
                raise NotCentral(f"{lab} is not central")
        coords = [_dual_coords_solve(rm, g) for _, g in items]
        mat = []
        for a in coords:
            row = []
            for _, h in items:
                hv = {k[0]: c for k, c in h.items()}
                row.append(sum((a[i] * c for i, c in hv.items() if i in a), CycNumber(0)))
            mat.append(row)
    n = len(mat)
    entries = {(i, j): mat[i][j] for i in range(n) for j in range(n) if mat[i][j]}
    nondeg = exact_rank(entries, n, n) == n
    return mat, nondeg
