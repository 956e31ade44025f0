"""Drinfeld doubles with their standard R-matrix, and quotients by central group-likes."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .hopf_core import (HopfAlgebra, Mode, NotCentral, NotGroupLike, antipode_power, central_failures, certify,
                        default_mode, dual_hopf, group_like_closure, is_group_like, solve_antipode)
from .linalg import SparseEchelon
from .quasitri import RMatrix, verify_quasitriangular
from .report import Report
from .scalars import CycNumber
from .tensors import CHUNK, StructureTensor, TensorArray, sum_rows

Element = TensorArray


class UnexpectedDimension(AssertionError):
    pass


@dataclass
class DoubleAlgebra:
    """D(H) on the basis E^i (x) b_j (index i*d + j) with its standard R."""
    algebra: HopfAlgebra
    H: HopfAlgebra
    dual: HopfAlgebra
    rmatrix: RMatrix | None = None
    convention: str = "R = sum (eps(x)b_i) (x) (E^i(x)1)"
    report: Report | None = None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def R(self) -> Element:
        return self.rmatrix.R

    def embed_dual(self, f: Element) -> Element:
        """f (x) 1_H for f in H*."""
        return _embed(self, f, self.H.one(), self.dual)

    def embed_hopf(self, h: Element) -> Element:
        """eps (x) h for h in H."""
        return _embed(self, self.dual.one(), h, self.dual)

    def pure(self, f: Element, h: Element) -> Element:
        return _embed(self, f, h, self.dual)

    def generators(self) -> list:
        """Algebra generators: images of generators of H and of H*."""
        out = [(f"1(x){self.H.labels[i]}", self.embed_hopf(self.H.basis(i))) for i in algebra_generators(self.H)]
        out += [(f"{self.dual.labels[i]}(x)1", self.embed_dual(self.dual.basis(i))) for i in algebra_generators(self.dual)]
        return out


def _embed(Dd: DoubleAlgebra, f: Element, h: Element, dual: HopfAlgebra) -> Element:
    d = Dd.H.dim
    items = {}
    for (i,), a in f.items():
        for (j,), b in h.items():
            items[i * d + j] = a * b
    return Dd.algebra.element(items, degree=1) if items else Dd.algebra.zero()


def algebra_generators(H: HopfAlgebra) -> list[int]:
    """Greedy basis subset generating H as an algebra (exact span closure)."""
    d = H.dim
    ech = SparseEchelon()
    span: list[TensorArray] = []

    def add(x: TensorArray) -> bool:
        row = {k[0]: c for k, c in x.items()}
        if not row or ech.add(row) is None:
            return False
        span.append(x)
        return True

    add(H.one())
    gens = []
    for i in range(d):
        if ech.rank == d:
            break
        b = H.basis(i)
        if not add(b):
            continue
        gens.append(i)
        # close under multiplication by everything found so far
        queue = [b]
        while queue and ech.rank < d:
            x = queue.pop()
            for y in list(span):
                for z in (x.mul(y), y.mul(x)):
                    if add(z):
                        queue.append(z)
    return gens


# ---------------------------------------------------------------------------
# structure constants of the double


def _double_mult(H: HopfAlgebra, Hd: HopfAlgebra, ring, table) -> StructureTensor:
    """(E^a(x)b_j)(E^c(x)b_l) = E^a [b_j(1) -> E^c <- S^-1(b_j(3))] (x) b_j(2) b_l."""
    d = H.dim
    D = d * d
    tv, td = table.ring_values(ring)
    Sinv = antipode_power(H, -1)
    # second iterated coproduct: rows (j, h1, h2, h3)
    cj = H.comult.keys_per_entry()
    cu, cw = H.comult.idx // d, H.comult.idx % d
    cval = tv[H.comult.sid]
    rep, out2, sid2 = H.comult.expand(cu)
    j3, h1, h2, h3 = cj[rep], out2 // d, out2 % d, cw[rep]
    v3, den3 = ring.mul(cval[rep], td, tv[sid2], td)

    # cross table X: (eps(x)b_j)(E^c(x)1) = sum X[j,c][y,m] E^y (x) b_m with
    # coefficient of E^y equal to E^c(S^-1(h3) b_y h1)
    xs_j, xs_c, xs_y, xs_m, xs_v = [], [], [], [], []
    xden = 1
    per = max(1, CHUNK // max(1, d * 4))
    for s in range(0, len(j3), per):
        sl = slice(s, s + per)
        n = len(j3[sl])
        rr = np.repeat(np.arange(n), d)
        yy = np.tile(np.arange(d), n)
        rep1, w, sw = Sinv.expand(h3[sl][rr])
        rr, yy = rr[rep1], yy[rep1]
        rep2, r, sr = H.mult.expand(w * d + yy)
        rr, yy, sw = rr[rep2], yy[rep2], sw[rep2]
        rep3, c, sc = H.mult.expand(r * d + h1[sl][rr])
        rr, yy, sw, sr = rr[rep3], yy[rep3], sw[rep3], sr[rep3]
        vals, den = ring.mul(v3[sl][rr], den3, tv[sw], td)
        vals, den = ring.mul(vals, den, tv[sr], td)
        vals, den = ring.mul(vals, den, tv[sc], td)
        cols, vals, den = sum_rows(ring, [j3[sl][rr], c, yy, h2[sl][rr]], vals, den)
        xs_j.append(cols[0]); xs_c.append(cols[1]); xs_y.append(cols[2]); xs_m.append(cols[3])
        xs_v.append((vals, den))
    cols, xv, xden = _concat_sum(ring, [np.concatenate(xs_j), np.concatenate(xs_c), np.concatenate(xs_y),
                                        np.concatenate(xs_m)], xs_v)
    xj, xc, xy, xm = cols

    keys_all, outs_all, sids_all = [], [], []
    order = np.argsort(xj, kind="stable")
    xj, xc, xy, xm, xv = xj[order], xc[order], xy[order], xm[order], xv[order]
    bounds = np.searchsorted(xj, np.arange(d + 1))
    dm = Hd.mult
    for j in range(d):
        lo, hi = bounds[j], bounds[j + 1]
        if lo == hi:
            continue
        # split rows of this j further if the expansion would be large
        est = (hi - lo) * d * d
        step = max(1, int((hi - lo) * CHUNK / max(1, est)))
        for s in range(lo, hi, step):
            e = min(hi, s + step)
            n = e - s
            rr = np.repeat(np.arange(s, e), d)
            aa = np.tile(np.arange(d), n)
            rep1, z, sz = dm.expand(aa * d + xy[rr])
            rr, aa = rr[rep1], aa[rep1]
            k = len(rr)
            rr2 = np.repeat(np.arange(k), d)
            ll = np.tile(np.arange(d), k)
            rep2, nn, sn = H.mult.expand(xm[rr[rr2]] * d + ll)
            t = rr2[rep2]
            ll = ll[rep2]
            vals, den = ring.mul(xv[rr[t]], xden, tv[sz[t]], td)
            vals, den = ring.mul(vals, den, tv[sn], td)
            key = (aa[t] * d + j) * D + xc[rr[t]] * d + ll
            out = z[t] * d + nn
            (key, out), vals, den = sum_rows(ring, [key, out], vals, den)
            keys_all.append(key)
            outs_all.append(out)
            sids_all.append(table.intern_arrays(ring, vals, den))
    return StructureTensor.from_sid_arrays(D * D, np.concatenate(keys_all), np.concatenate(outs_all),
                                           np.concatenate(sids_all), table)


def _concat_sum(ring, cols, parts):
    den = 1
    for _, dd in parts:
        den = np.lcm(den, dd)
    den = int(den)
    vs = [ring.rescale(v, dd, den) for v, dd in parts]
    if any(v.dtype == object for v in vs):
        vs = [v.astype(object) for v in vs]
    return sum_rows(ring, cols, np.concatenate(vs), den)


def _double_comult(H: HopfAlgebra, Hd: HopfAlgebra, table) -> StructureTensor:
    """(H*)^cop (x) H: Delta(E^a(x)b_j) = sum (E^a(2)(x)b_j(1)) (x) (E^a(1)(x)b_j(2))."""
    d = H.dim
    D = d * d
    ring = H.ring
    tv, td = table.ring_values(ring)
    ak = Hd.comult.keys_per_entry()
    au, av = Hd.comult.idx // d, Hd.comult.idx % d
    asid = Hd.comult.sid
    jk = H.comult.keys_per_entry()
    j1, j2 = H.comult.idx // d, H.comult.idx % d
    jsid = H.comult.sid
    na, nj = len(ak), len(jk)
    ia = np.repeat(np.arange(na), nj)
    ib = np.tile(np.arange(nj), na)
    key = ak[ia] * d + jk[ib]
    out = (av[ia] * d + j1[ib]) * D + au[ia] * d + j2[ib]
    vals, den = ring.mul(tv[asid[ia]], td, tv[jsid[ib]], td)
    return StructureTensor.from_arrays(D, key, out, ring, vals, den, table)


def _double_antipode(Dalg: HopfAlgebra, H: HopfAlgebra, table) -> StructureTensor:
    """S(f(x)h) = (eps(x)S(h)) (S*^-1(f)(x)1), computed with the double's product."""
    d = H.dim
    D = d * d
    ring = H.ring
    tv, td = table.ring_values(ring)
    Sinv = antipode_power(H, -1)
    # S*^-1(E^a) = sum_c [coeff of b_a in S^-1(b_c)] E^c
    ic = Sinv.keys_per_entry()
    ia_out = Sinv.idx
    sinv_rows = {}
    for c, a, s in zip(ic.tolist(), ia_out.tolist(), Sinv.sid.tolist()):
        sinv_rows.setdefault(a, []).append((c, s))
    S = H.antipode
    eps_terms = [(i, c) for i, c in enumerate(H.counit) if c]
    unit_terms = sorted(H.unit.items())
    bid, left, right, lv = [], [], [], []
    vals_list = []
    for a in range(d):
        fa = sinv_rows.get(a, [])
        for j in range(d):
            sj = S.row(j)
            for w, sw in sj:
                for e, ce in eps_terms:
                    for c, sc in fa:
                        for k, uk in unit_terms:
                            bid.append(a * d + j)
                            left.append(e * d + w)
                            right.append(c * d + k)
                            vals_list.append(sw * ce * table.values[sc] * uk)
    bid = np.array(bid, dtype=np.int64)
    from .tensors import Batch
    vals, den = ring.from_cyc(vals_list)
    legs = np.stack([np.array(left, dtype=np.int64), np.array(right, dtype=np.int64)], axis=1)
    bt = Batch(Dalg, ring, bid, legs, vals, den).mul_legs(0, 1)
    cols, v, dd = bt.combined()
    return StructureTensor.from_arrays(D, cols[0], cols[1], ring, v, dd, table)


def drinfeld_double(H: HopfAlgebra, mode=None, *, certify_result: bool = True, verify_r: bool = True,
                    r_exact_samples: int = 0, seed: int = 0, cross_check_antipode: bool | None = None) -> DoubleAlgebra:
    t_start = time.perf_counter()
    d = H.dim
    D = d * d
    Hd = dual_hopf(H)
    ring = H.ring
    table = H.table
    timings = {}
    t0 = time.perf_counter()
    mult = _double_mult(H, Hd, ring, table)
    timings["multiplication"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    comult = _double_comult(H, Hd, table)
    counit = [H.unit.get(a, CycNumber(0)) * H.counit[j] for a in range(d) for j in range(d)]
    unit = {}
    for a, ea in enumerate(H.counit):
        if ea:
            for k, uk in H.unit.items():
                unit[a * d + k] = ea * uk
    labels = [f"{Hd.labels[a]}|{H.labels[j]}" for a in range(d) for j in range(d)]
    Dalg = HopfAlgebra(D, H.conductor, labels, mult, unit, comult, counit, None, name=f"D({H.name})",
                       metadata={"double_of": H.name})
    Dalg.antipode = _double_antipode(Dalg, H, table)
    timings["coalgebra_antipode"] = time.perf_counter() - t0
    if cross_check_antipode is None:
        cross_check_antipode = D <= 100
    if cross_check_antipode:
        if not solve_antipode(Dalg).same_as(Dalg.antipode):
            raise AssertionError("double antipode disagrees with the solved antipode")
        Dalg.metadata["antipode_cross_check"] = "solved antipode equals closed form"
    Dd = DoubleAlgebra(Dalg, H, Hd)
    rep = Report(f"double of {H.name}", "")
    mode = Mode.parse(mode, seed) if mode is not None else default_mode(D)
    if certify_result:
        t0 = time.perf_counter()
        cr = certify(Dalg, mode)
        rep.extend(cr, "hopf.")
        rep.mode = cr.mode
        timings["certify"] = time.perf_counter() - t0
    # standard R and its flip
    t0 = time.perf_counter()
    candidates = [("R = sum (eps(x)b_i) (x) (E^i(x)1)", False), ("R = sum (E^i(x)1) (x) (eps(x)b_i)", True)]
    chosen = None
    for conv, flip in candidates:
        R = standard_r(Dd, flip)
        if not verify_r:
            chosen = RMatrix(Dalg, R, None, None, None, conv)
            break
        gens = Dd.generators() if D > 200 else None
        rm = verify_quasitriangular(Dalg, R, mode, generators=gens, exact_samples=r_exact_samples, seed=seed)
        rm.convention = conv
        if rm.verified:
            chosen = rm
            break
        rep.notes.append(f"{conv} failed: {[c.name for c in rm.report.failed()]}")
    if chosen is None:
        rep.add("standard_r", False)
    else:
        Dd.rmatrix = chosen
        Dd.convention = chosen.convention
        if chosen.report is not None:
            rep.extend(chosen.report, "r.")
        rep.info["r_convention"] = chosen.convention
    timings["r_matrix"] = time.perf_counter() - t0
    timings["total"] = time.perf_counter() - t_start
    rep.timings.update(timings)
    Dd.report = rep
    Dalg.metadata["double"] = Dd
    return Dd


def standard_r(Dd: DoubleAlgebra, flip: bool = False) -> Element:
    H = Dd.H
    d = H.dim
    items = {}
    eps_terms = [(a, c) for a, c in enumerate(H.counit) if c]
    for i in range(d):
        for a, ea in eps_terms:
            for k, uk in H.unit.items():
                left, right = a * d + i, i * d + k
                key = (right, left) if flip else (left, right)
                items[key] = items.get(key, CycNumber(0)) + ea * uk
    return Dd.algebra.element(items, degree=2)


# ---------------------------------------------------------------------------
# quotients


@dataclass
class QuotientMap:
    source: HopfAlgebra
    ideal_basis: dict              # pivot column -> row (exact rref)
    representatives: list[int]     # source basis indices kept
    projection: StructureTensor    # source index -> quotient index
    quotient: HopfAlgebra
    rmatrix: RMatrix | None = None
    group: object = None
    report: Report | None = None

    def project(self, x: Element) -> Element:
        return _proj_apply(x, self.projection, self.quotient)


def _proj_apply(x: Element, P: StructureTensor, Q: HopfAlgebra) -> Element:
    legs = x.legs()
    vals, den = x.vals, x.den
    ring = x.ring
    tv, td = P.table.ring_values(ring)
    rows = np.arange(len(legs))
    cur = legs
    for leg in range(x.degree):
        rep, outs, sids = P.expand(cur[:, leg])
        cur = cur[rep].copy()
        cur[:, leg] = outs
        vals, den = ring.mul(vals[rep], den, tv[sids], td)
    return TensorArray.from_legs(Q, cur, vals, den, ring)


def quotient_by_central_grouplikes(H: HopfAlgebra, G, rmatrix: RMatrix | None = None, mode=None,
                                   certify_result: bool = True, seed: int = 0) -> QuotientMap:
    """H / H(kG)^+ for central group-likes G (the ideal spanned by b_i (g - 1))."""
    items = [g if isinstance(g, tuple) else (f"g{i}", g) for i, g in enumerate(G)]
    for lab, g in items:
        if not is_group_like(H, g):
            raise NotGroupLike(f"{lab} is not group-like")
        bad = central_failures(H, g)
        if bad:
            raise NotCentral(f"{lab} is not central (fails against basis {bad[:5]})")
    rep = Report(f"quotient of {H.name}", "exact")
    grp = group_like_closure(H, items) if items else None
    order = grp.order if grp else 1
    d = H.dim
    ring = H.ring
    one = H.one()
    # rows b_i (g - 1) for generators g, reduced mod p first to find the pivots cheaply
    ech = SparseEchelon()
    from .tensors import Batch
    for lab, g in items:
        x = g - one
        B = Batch.basis(H, ring, np.arange(d), np.arange(d).reshape(-1, 1)).mul_const(x, left=False)
        cols, vals, den = B.combined()
        cyc = ring.to_cyc(vals, den)
        rows: dict[int, dict] = {}
        for b, k, c in zip(cols[0].tolist(), cols[1].tolist(), cyc):
            rows.setdefault(b, {})[k] = c
        for b in range(d):
            if b in rows:
                ech.add(rows[b])
    ideal = ech.rref()
    pivots = sorted(ideal)
    reps = [i for i in range(d) if i not in ideal]
    qd = len(reps)
    if qd * order != d:
        raise UnexpectedDimension(f"quotient dimension {qd} times |G| = {order} differs from {d}")
    pos = {b: t for t, b in enumerate(reps)}
    # projection: non-pivot b -> itself; pivot p -> -(row without pivot) expressed in reps
    proj_entries = [(b, pos[b], 1) for b in reps]
    for p, row in ideal.items():
        for col, c in row.items():
            if col != p:
                proj_entries.append((p, pos[col], -c))
    P = StructureTensor.from_entries(d, proj_entries, H.table)
    # quotient structure: project products/coproducts of representatives
    Q = _quotient_algebra(H, reps, P, qd)
    rep.info["dimension"] = f"{d} / {order} = {qd}"
    # ideal stability: eps(I) = 0, Delta(I) in I(x)H + H(x)I, S(I) in I (checked on the spanning rows)
    rows_el = [H.element({c: v for c, v in row.items()}) for row in ideal.values()]
    eps_ok = all(x.apply_counit(0).scalar_value() == 0 for x in rows_el)
    rep.add("ideal_counit", eps_ok)
    delta_ok = all(_proj_apply(x.apply_comult(0), P, Q).is_zero() for x in rows_el)
    rep.add("ideal_coideal", delta_ok, method="(pi(x)pi)Delta(I) = 0")
    s_ok = all(_proj_apply(x.apply_linear(0, H.antipode), P, Q).is_zero() for x in rows_el)
    rep.add("ideal_antipode", s_ok)
    # projection is a bialgebra map on all basis elements
    rep.add("projection_multiplicative", _check_proj_mult(H, Q, P))
    rep.add("projection_comultiplicative", _check_proj_comult(H, Q, P))
    qm = QuotientMap(H, ideal, reps, P, Q, None, grp, rep)
    if certify_result:
        cmode = Mode.parse(mode, seed) if mode is not None else default_mode(qd)
        cr = certify(Q, cmode)
        rep.extend(cr, "hopf.")
    if rmatrix is not None:
        Rb = _proj_apply(rmatrix.R, P, Q)
        qm.rmatrix = RMatrix(Q, Rb, None, None, None, rmatrix.convention)
    return qm


def _quotient_algebra(H: HopfAlgebra, reps: list[int], P: StructureTensor, qd: int) -> HopfAlgebra:
    d = H.dim
    ring = H.ring
    table = H.table
    tv, td = table.ring_values(ring)
    r = np.array(reps, dtype=np.int64)
    # products of representatives
    ia = np.repeat(r, qd)
    ib = np.tile(r, qd)
    qa = np.repeat(np.arange(qd), qd)
    qb = np.tile(np.arange(qd), qd)
    rep, out, sid = H.mult.expand(ia * d + ib)
    rep2, out2, sid2 = P.expand(out)
    vals, den = ring.mul(tv[sid[rep2]], td, tv[sid2], td)
    key = qa[rep[rep2]] * qd + qb[rep[rep2]]
    mult = StructureTensor.from_arrays(qd * qd, key, out2, ring, vals, den, table)
    # coproducts
    rep, out, sid = H.comult.expand(r)
    j, k = out // d, out % d
    r1, pj, s1 = P.expand(j)
    k, rep, sid = k[r1], rep[r1], sid[r1]
    r2, pk, s2 = P.expand(k)
    vals, den = ring.mul(tv[sid[r2]], td, tv[s1[r2]], td)
    vals, den = ring.mul(vals, den, tv[s2], td)
    comult = StructureTensor.from_arrays(qd, rep[r2], pj[r2] * qd + pk, ring, vals, den, table)
    # antipode
    rep, out, sid = H.antipode.expand(r)
    r1, po, s1 = P.expand(out)
    vals, den = ring.mul(tv[sid[r1]], td, tv[s1], td)
    anti = StructureTensor.from_arrays(qd, rep[r1], po, ring, vals, den, table)
    # unit and counit
    unit = {}
    for i, c in H.unit.items():
        for o, pc in P.row(i):
            unit[o] = unit.get(o, CycNumber(0)) + c * pc
    counit = [H.counit[b] for b in reps]
    labels = [f"[{H.labels[b]}]" for b in reps]
    return HopfAlgebra(qd, H.conductor, labels, mult, unit, comult, counit, anti, name=f"{H.name}/I",
                       metadata={"quotient_of": H.name})


def _check_proj_mult(H, Q, P) -> bool:
    from .tensors import Batch
    d = H.dim
    ring = H.ring
    # pi(b_i b_j) == pi(b_i) pi(b_j) for all pairs, in chunks
    idx = np.arange(d)
    per = max(1, CHUNK // max(1, d * 4))
    for s in range(0, d, per):
        a = idx[s:s + per]
        ia = np.repeat(a, d)
        ib = np.tile(idx, len(a))
        bid = ia * d + ib
        B = Batch.basis(H, ring, bid, np.stack([ia, ib], axis=1))
        left = B.mul_legs(0, 1).map_leg(0, P)
        right = B.map_leg(0, P).map_leg(1, P)
        right = Batch(Q, ring, right.bid, right.legs, right.vals, right.den).mul_legs(0, 1)
        from .tensors import batch_difference, Batch as BB
        left = BB(Q, ring, left.bid, left.legs, left.vals, left.den)
        if len(batch_difference(left, right)):
            return False
    return True


def _check_proj_comult(H, Q, P) -> bool:
    from .tensors import Batch, batch_difference
    d = H.dim
    ring = H.ring
    idx = np.arange(d)
    B = Batch.basis(H, ring, idx, idx.reshape(-1, 1))
    left = B.comult_leg(0).map_leg(0, P).map_leg(1, P)
    left = Batch(Q, ring, left.bid, left.legs, left.vals, left.den)
    right = B.map_leg(0, P)
    right = Batch(Q, ring, right.bid, right.legs, right.vals, right.den).comult_leg(0)
    return len(batch_difference(left, right)) == 0


# ---------------------------------------------------------------------------


def verify_double_relations(Dd: DoubleAlgebra, pairs) -> Report:
    """x_i y_j - y_j x_i - delta_ij (chi_i - g_i) == 0 for tuples (x_i, y_i, chi_i, g_i)."""
    rep = Report(f"double relations in {Dd.algebra.name}", "exact")
    for i, (xi, _, chi, g) in enumerate(pairs):
        for j, (_, yj, _, _) in enumerate(pairs):
            val = xi.mul(yj) - yj.mul(xi)
            if i == j:
                val = val - (chi - g)
            rep.add(f"relation_{i}_{j}", val.is_zero(), [] if val.is_zero() else [str(val)[:200]])
    return rep
