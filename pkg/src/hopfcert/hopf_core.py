"""Finite-dimensional Hopf algebras given by sparse structure constants.

Basis elements are b_0..b_{d-1}.  Conventions:
  mult     key i*d+j -> entries (k, c):   b_i b_j = sum c b_k
  comult   key i     -> entries (j*d+k, c): Delta(b_i) = sum c b_j (x) b_k
  antipode key i     -> entries (k, c):   S(b_i) = sum c b_k
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .linalg import ModEchelon, SparseEchelon, nullspace_mod, rank_mod, rref_mod
from .report import Report
from .scalars import CycNumber, PrimeSpecialization, _lcm
from .tensors import (Batch, ExactRing, ModRing, ScalarTable, StructureTensor, TensorArray,
                      batch_difference, compose_maps, concat_batches, sum_rows)

Element = TensorArray


class DegreeMismatch(ValueError):
    pass


class AmbientMismatch(ValueError):
    pass


class NoAntipode(ArithmeticError):
    pass


class NotGroupLike(ValueError):
    pass


class NotCentral(ValueError):
    pass


class AxiomFailure(Exception):
    def __init__(self, report: Report):
        super().__init__(f"{report.subject}: failed " + ", ".join(c.name for c in report.failed()))
        self.report = report


# ---------------------------------------------------------------------------
# verification modes


@dataclass(frozen=True)
class Mode:
    kind: str = "exact"  # exact | modular | sampled
    prime: int | None = None
    k: int = 200
    seed: int = 0

    @classmethod
    def parse(cls, spec, seed: int = 0) -> Mode:
        if isinstance(spec, Mode):
            return spec
        text = str(spec).strip().replace(" ", "")
        m = re.fullmatch(r"(exact|modular|sampled)(?:\(([\d,]*)\))?", text)
        if not m:
            raise ValueError(f"unknown mode {spec!r}")
        kind, args = m.group(1), [int(a) for a in (m.group(2) or "").split(",") if a]
        if kind == "modular":
            return cls("modular", prime=args[0] if args else None, seed=seed)
        if kind == "sampled":
            k = args[0] if args else 200
            return cls("sampled", k=k, seed=args[1] if len(args) > 1 else seed)
        return cls("exact", seed=seed)

    def describe(self) -> str:
        if self.kind == "modular":
            return f"modular({self.prime})" if self.prime else "modular"
        if self.kind == "sampled":
            return f"sampled({self.k},{self.seed})"
        return "exact"


def default_mode(dim: int) -> Mode:
    return Mode("exact") if dim <= 200 else Mode("modular")


def make_specialization(conductor: int, mode: Mode, skip: int = 0) -> PrimeSpecialization:
    if mode.prime:
        return PrimeSpecialization.for_prime(mode.prime, conductor)
    return PrimeSpecialization.choose(conductor, seed=mode.seed, skip=skip)


# ---------------------------------------------------------------------------
# the algebra


class HopfAlgebra:
    def __init__(self, dim: int, conductor: int, labels, mult: StructureTensor, unit, comult: StructureTensor,
                 counit, antipode: StructureTensor | None = None, *, name: str = "", metadata: dict | None = None):
        self.dim = dim
        self.conductor = conductor
        self.labels = list(labels)
        if len(self.labels) != dim:
            raise ValueError("label count differs from dimension")
        self.mult = mult
        self.comult = comult
        self.antipode = antipode
        self.table = mult.table
        self.unit = {int(i): (c if isinstance(c, CycNumber) else CycNumber(c)) for i, c in dict(unit).items() if c}
        self.counit = [c if isinstance(c, CycNumber) else CycNumber(c) for c in counit]
        self.name = name
        self.metadata = dict(metadata or {})
        self.metadata.setdefault("grouplikes", [])
        self.certified: Report | None = None
        self.ring = ExactRing(conductor)
        self._index = {l: i for i, l in enumerate(self.labels)}
        self._cache: dict = {}

    @classmethod
    def from_entries(cls, dim, conductor, labels, mult_entries, unit, comult_entries, counit,
                     antipode_entries=None, **kw) -> HopfAlgebra:
        """mult (i,j,k,c); comult (i,j,k,c); antipode (i,k,c) meaning S(b_i) has c at b_k."""
        table = ScalarTable(conductor)
        mult = StructureTensor.from_entries(dim * dim, ((i * dim + j, k, c) for i, j, k, c in mult_entries), table)
        comult = StructureTensor.from_entries(dim, ((i, j * dim + k, c) for i, j, k, c in comult_entries), table)
        anti = None
        if antipode_entries is not None:
            anti = StructureTensor.from_entries(dim, antipode_entries, table)
        return cls(dim, conductor, labels, mult, unit, comult, counit, anti, **kw)

    def __repr__(self) -> str:
        return f"HopfAlgebra({self.name or '?'}, dim={self.dim}, conductor={self.conductor})"

    # -- rings and cached views -------------------------------------------
    def mod_ring(self, spec: PrimeSpecialization) -> ModRing:
        return ModRing(spec)

    def counit_values(self, ring):
        key = ("counit", ring.key)
        hit = self._cache.get(key)
        if hit is None:
            hit = ring.from_cyc(self.counit)
            self._cache[key] = hit
        return hit

    def unit_element(self, ring=None) -> TensorArray:
        ring = ring or self.ring
        key = ("unit", ring.key)
        hit = self._cache.get(key)
        if hit is None:
            hit = TensorArray.from_items(self, 1, sorted(self.unit.items()), ring)
            self._cache[key] = hit
        return hit

    # -- elements ---------------------------------------------------------
    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.dim:
                raise IndexError(f"basis index {label} out of range")
            return int(label)
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"no basis element labelled {label!r}") from None

    def element(self, coeffs, degree: int | None = None) -> TensorArray:
        """Element from {index-or-label or tuple: scalar}."""
        items = []
        for k, c in dict(coeffs).items():
            key = tuple(self.index(x) for x in k) if isinstance(k, tuple) else (self.index(k),)
            items.append((key, c if isinstance(c, CycNumber) else CycNumber(c)))
        deg = degree or (len(items[0][0]) if items else 1)
        if any(len(k) != deg for k, _ in items):
            raise DegreeMismatch("mixed degrees in element data")
        return TensorArray.from_items(self, deg, items, self.ring)

    def basis(self, i) -> TensorArray:
        return self.element({self.index(i): 1})

    def one(self) -> TensorArray:
        return self.unit_element()

    def zero(self, degree: int = 1) -> TensorArray:
        return TensorArray.zero(self, degree, self.ring)

    # -- metadata ---------------------------------------------------------
    @property
    def grouplikes(self) -> list[tuple[str, TensorArray]]:
        return self.metadata["grouplikes"]

    def add_grouplike(self, label: str, x: TensorArray) -> None:
        self.metadata["grouplikes"].append((label, x))

    def grouplike(self, label: str) -> TensorArray:
        for l, x in self.grouplikes:
            if l == label:
                return x
        raise KeyError(f"no group-like labelled {label!r}")

    def mult_dense_dict(self) -> dict:
        return self.mult.to_dense_dict()


# ---------------------------------------------------------------------------
# element operations


def _need_degree(x: TensorArray, deg: int):
    if x.degree != deg:
        raise DegreeMismatch(f"expected degree {deg}, got {x.degree}")


def mul(x: TensorArray, y: TensorArray) -> TensorArray:
    return x.mul(y)


def delta(x: TensorArray, cop: bool = False) -> TensorArray:
    _need_degree(x, 1)
    return x.apply_comult(0, cop=cop)


def antipode(x: TensorArray, power: int = 1) -> TensorArray:
    """S^power applied on every leg (power may be negative)."""
    H = x.H
    S = antipode_power(H, power)
    out = x
    for leg in range(x.degree):
        out = out.apply_linear(leg, S)
    return out


def counit(x: TensorArray):
    _need_degree(x, 1)
    return x.apply_counit(0).scalar_value()


def tensor(x: TensorArray, y: TensorArray) -> TensorArray:
    return x.tensor(y)


def element_algebra(x: TensorArray, y: TensorArray | None = None, op: str = "mul"):
    if op == "mul":
        return mul(x, y)
    if op == "delta":
        return delta(x)
    if op == "antipode":
        return antipode(x)
    if op == "counit":
        return counit(x)
    if op == "tensor":
        return tensor(x, y)
    raise ValueError(f"unknown operation {op!r}")


def identity_map(H: HopfAlgebra) -> StructureTensor:
    d = H.dim
    return StructureTensor.from_sid_arrays(d, np.arange(d), np.arange(d), np.zeros(d, dtype=np.int64), H.table)


def is_identity_map(T: StructureTensor) -> bool:
    d = T.nkeys
    return (T.nnz == d and np.array_equal(T.idx, np.arange(d)) and np.array_equal(T.ptr, np.arange(d + 1))
            and bool(np.all(T.sid == 0)))


def antipode_power(H: HopfAlgebra, power: int) -> StructureTensor:
    """S^power as a structure tensor; negative powers use the finite order of S when small."""
    if H.antipode is None:
        raise NoAntipode("algebra has no antipode")
    key = ("Spow", power)
    hit = H._cache.get(key)
    if hit is not None:
        return hit
    if power == 0:
        res = identity_map(H)
    elif power == 1:
        res = H.antipode
    elif power > 1:
        res = compose_maps(antipode_power(H, power - 1), H.antipode, H.ring, H.table)
    else:
        res = _antipode_inverse_power(H, -power)
    H._cache[key] = res
    return res


def _antipode_inverse_power(H: HopfAlgebra, k: int) -> StructureTensor:
    order = antipode_order(H)
    if order is not None:
        return antipode_power(H, (-k) % order)
    inv = _invert_map(H, H.antipode)
    res = inv
    for _ in range(k - 1):
        res = compose_maps(res, inv, H.ring, H.table)
    return res


def antipode_order(H: HopfAlgebra, bound: int = 64) -> int | None:
    if "Sorder" in H._cache:
        return H._cache["Sorder"]
    cur = H.antipode
    found = None
    for m in range(1, bound + 1):
        if is_identity_map(cur):
            found = m
            break
        cur = compose_maps(cur, H.antipode, H.ring, H.table)
        H._cache[("Spow", m + 1)] = cur
    H._cache["Sorder"] = found
    return found


def _invert_map(H: HopfAlgebra, T: StructureTensor) -> StructureTensor:
    """Exact inverse of a linear map given as a structure tensor (transpose solve per column)."""
    d = H.dim
    # rows of the matrix M with M[k, i] = coefficient of b_k in T(b_i); solve M X = I
    rows = [dict() for _ in range(d)]
    for i, k, c in T.entries():
        rows[k][i] = c
    ech = SparseEchelon()
    for k in range(d):
        row = dict(rows[k])
        row[d + k] = CycNumber(1)
        ech.add(row)
    red = ech.rref()
    if any(p >= d for p in red) or len([p for p in red if p < d]) < d:
        raise NoAntipode("map is not invertible")
    entries = []
    for p, r in red.items():
        for col, v in r.items():
            if col >= d:
                entries.append((col - d, p, v))
    return StructureTensor.from_entries(d, entries, H.table)


# ---------------------------------------------------------------------------
# axiom verification


_CHUNK_TUPLES = 150_000
_ROW_BUDGET = 2_000_000


def _iter_tuples(d: int, arity: int, mode: Mode, rng, chunk: int = _CHUNK_TUPLES):
    if mode.kind == "sampled":
        k = mode.k
        if k >= d ** arity:
            yield from _iter_tuples(d, arity, Mode("exact"), rng)
            return
        yield rng.integers(0, d, size=(k, arity), dtype=np.int64)
        return
    total = d ** arity
    for s in range(0, total, chunk):
        flat = np.arange(s, min(total, s + chunk), dtype=np.int64)
        cols = []
        for _ in range(arity):
            cols.append(flat % d)
            flat = flat // d
        yield np.stack(cols[::-1], axis=1)


def _bid(T):
    return np.arange(len(T), dtype=np.int64)


def _fail_assoc(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T)
    L = B.mul_legs(0, 1).mul_legs(0, 1)
    R = B.mul_legs(1, 2).mul_legs(0, 1)
    return T[batch_difference(L, R)]


def _fail_unit(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T)
    one = H.unit_element(ring)
    bad = set(batch_difference(B.insert(0, one).mul_legs(0, 1), B).tolist())
    bad |= set(batch_difference(B.insert(1, one).mul_legs(0, 1), B).tolist())
    return T[sorted(bad)]


def _fail_coassoc(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T).comult_leg(0)
    return T[batch_difference(B.comult_leg(0), B.comult_leg(1))]


def _fail_counit(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T)
    C = B.comult_leg(0)
    bad = set(batch_difference(C.counit_leg(0), B).tolist()) | set(batch_difference(C.counit_leg(1), B).tolist())
    return T[sorted(bad)]


def _fail_comult_mult(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T)
    L = B.mul_legs(0, 1).comult_leg(0)
    R = B.comult_leg(0).comult_leg(2).mul_legs(0, 2).mul_legs(1, 2)
    return T[batch_difference(L, R)]


def _fail_counit_mult(H, ring, T):
    B = Batch.basis(H, ring, _bid(T), T)
    return T[batch_difference(B.mul_legs(0, 1).counit_leg(0), B.counit_leg(0).counit_leg(0))]


def _fail_antipode(H, ring, T, S=None):
    S = S if S is not None else H.antipode
    B = Batch.basis(H, ring, _bid(T), T)
    C = B.comult_leg(0)
    target = B.counit_leg(0).insert(0, H.unit_element(ring))
    bad = set(batch_difference(C.map_leg(0, S).mul_legs(0, 1), target).tolist())
    bad |= set(batch_difference(C.map_leg(1, S).mul_legs(0, 1), target).tolist())
    return T[sorted(bad)]


def _unit_checks(H, ring):
    """Delta(1) = 1(x)1 and eps(1) = 1."""
    one = H.unit_element(ring)
    ok_delta = one.apply_comult(0).equals(one.tensor(one))
    e = one.apply_counit(0)
    val = e.scalar_value()
    ok_eps = (val == 1) if ring.kind == "exact" else (int(val) % ring.p == 1)
    return ok_delta, ok_eps


def _estimate(H, arity_mult: str) -> float:
    d = H.dim
    m = max(1.0, H.mult.nnz / max(1, d * d))
    c = max(1.0, H.comult.nnz / max(1, d))
    if arity_mult == "assoc":
        return d ** 3 * m * m
    return d * d * m * c * c * (1 + m * m)


# randomized identity tests for the cubic-cost identities in modular mode


def _mult_arrays(H, ring):
    key = ("multarr", ring.key)
    hit = H._cache.get(key)
    if hit is None:
        keys = H.mult.keys_per_entry()
        tv, _ = H.mult.table.ring_values(ring)
        hit = (keys // H.dim, keys % H.dim, H.mult.idx, tv[H.mult.sid])
        H._cache[key] = hit
    return hit


def _comult_arrays(H, ring):
    key = ("comultarr", ring.key)
    hit = H._cache.get(key)
    if hit is None:
        keys = H.comult.keys_per_entry()
        tv, _ = H.comult.table.ring_values(ring)
        hit = (keys, H.comult.idx // H.dim, H.comult.idx % H.dim, tv[H.comult.sid])
        H._cache[key] = hit
    return hit


def _bincount_mod(idx, w, n, p):
    out = np.zeros(n, dtype=np.int64)
    step = 1 << 22  # keeps float64 sums exact
    for s in range(0, len(idx), step):
        part = np.bincount(idx[s:s + step], weights=w[s:s + step].astype(np.float64), minlength=n)
        out = (out + np.rint(part).astype(np.int64) % p) % p
    return out


def dense_product_mod(H, ring, x, y):
    i, j, k, c = _mult_arrays(H, ring)
    p = ring.p
    w = x[i] * y[j] % p * c % p
    return _bincount_mod(k, w, H.dim, p)


def _random_assoc(H, ring, rng, trials=3) -> bool:
    d, p = H.dim, ring.p
    for _ in range(trials):
        x, y, z = (rng.integers(0, p, d, dtype=np.int64) for _ in range(3))
        lhs = dense_product_mod(H, ring, dense_product_mod(H, ring, x, y), z)
        rhs = dense_product_mod(H, ring, x, dense_product_mod(H, ring, y, z))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _random_comult_mult(H, ring, rng, trials=2) -> bool:
    """(f(x)g)(Delta(xy) - Delta(x)Delta(y)) = 0 for random x, y, f, g."""
    import scipy.sparse as sp

    d, p = H.dim, ring.p
    mi, mj, mk, mc = _mult_arrays(H, ring)
    ci, cj, ck, cc = _comult_arrays(H, ring)

    def pairing_matrix(f):
        w = mc * f[mk] % p
        M = sp.coo_matrix((w.astype(np.float64), (mi, mj)), shape=(d, d)).toarray()
        return np.rint(M).astype(np.int64) % p if len(mi) < (1 << 27) else None

    def comult_matrix(x):
        w = cc * x[ci] % p
        return sp.csr_matrix((w, (cj, ck)), shape=(d, d), dtype=np.int64)

    for _ in range(trials):
        x, y, f, g = (rng.integers(0, p, d, dtype=np.int64) for _ in range(4))
        xy = dense_product_mod(H, ring, x, y)
        wk = _bincount_mod(ci, cc * f[cj] % p * g[ck] % p, d, p)
        lhs = int((xy * wk % p).sum() % p)
        Mf, Mg = pairing_matrix(f), pairing_matrix(g)
        X, Y = comult_matrix(x), comult_matrix(y)
        X.sum_duplicates()
        Y.sum_duplicates()
        X.data %= p
        Y.data %= p
        T = np.asarray(X @ Mg) % p           # T[a,e] = sum_b X[a,b] Mg[b,e]
        U = np.asarray(Y @ T.T) % p          # U[c,a] = sum_e Y[c,e] T[a,e]
        rhs = int((Mf * U.T % p).sum() % p)  # sum_{a,c} Mf[a,c] U[c,a]
        if lhs != rhs:
            return False
    return True


def verify_hopf_axioms(H: HopfAlgebra, mode="exact", *, budget: float = 3e7, seed: int | None = None) -> Report:
    """Check the Hopf axioms; failures are report entries with witness indices."""
    mode = Mode.parse(mode, seed=seed or 0)
    if seed is not None:
        mode = Mode(mode.kind, mode.prime, mode.k, seed)
    report = Report(f"Hopf axioms of {H.name or 'H'} (dim {H.dim})", mode.describe())
    if mode.kind == "modular":
        spec = make_specialization(H.conductor, mode)
        ring = ModRing(spec)
        report.info["prime"] = spec.prime
        report.info["root_image"] = spec.image
    else:
        ring = H.ring
    rng = np.random.default_rng(mode.seed)
    d = H.dim
    method = {"exact": "full exact", "modular": "full modular", "sampled": f"exact on {mode.k} samples"}[mode.kind]

    m = max(1.0, H.mult.nnz / max(1, d * d))
    c = max(1.0, H.comult.nnz / max(1, d))
    u = max(1.0, len(H.unit))
    rows_per_tuple = {"associativity": m * m, "unit": u * m, "coassociativity": c * c, "counit": c,
                      "comult_multiplicative": m * c + c * c * m * m, "counit_multiplicative": m,
                      "antipode": c * m * u}

    def run(name, fn, arity, randomized=None, cost=None):
        t0 = time.perf_counter()
        if mode.kind == "modular" and randomized is not None and cost is not None and cost > budget:
            ok = randomized(H, ring, rng)
            report.add(name, ok, [], "randomized modular identity test",
                       "random vectors and functionals; false pass probability below 8/p per trial")
        else:
            bad = []
            chunk = int(max(1, min(_CHUNK_TUPLES, _ROW_BUDGET // rows_per_tuple[name])))
            for T in _iter_tuples(d, arity, mode, rng, chunk):
                f = fn(H, ring, T)
                bad.extend(tuple(int(v) for v in row) for row in f[:10])
                if len(bad) >= 10:
                    break
            report.add(name, not bad, bad, method)
        report.timings[name] = time.perf_counter() - t0

    run("associativity", _fail_assoc, 3, _random_assoc, _estimate(H, "assoc"))
    run("unit", _fail_unit, 1)
    run("coassociativity", _fail_coassoc, 1)
    run("counit", _fail_counit, 1)
    ok_d1, ok_e1 = _unit_checks(H, ring)
    run("comult_multiplicative", _fail_comult_mult, 2, _random_comult_mult, _estimate(H, "comult"))
    report.add("comult_unital", ok_d1, [], method)
    run("counit_multiplicative", _fail_counit_mult, 2)
    report.add("counit_unital", ok_e1, [], method)
    if H.antipode is None:
        report.add("antipode", False, [], method, "no antipode supplied")
    else:
        run("antipode", _fail_antipode, 1)
    return report


def certify(H: HopfAlgebra, mode=None, *, raise_on_failure: bool = True, **kw) -> Report:
    mode = Mode.parse(mode) if mode is not None else default_mode(H.dim)
    report = verify_hopf_axioms(H, mode, **kw)
    if mode.kind == "modular" and report.passed:
        extra = verify_hopf_axioms(H, Mode("sampled", k=kw.get("samples", 200), seed=mode.seed))
        report.extend(extra, prefix="sampled exact: ")
    if report.passed:
        H.certified = report
    elif raise_on_failure:
        raise AxiomFailure(report)
    return report


def check_antipode_properties(H: HopfAlgebra) -> Report:
    """eps o S = eps, Delta o S = (S (x) S) o Delta^op, S invertible; all basis elements, exact."""
    ring = H.ring
    d = H.dim
    rep = Report(f"antipode properties of {H.name or 'H'}", "exact")
    T = np.arange(d, dtype=np.int64).reshape(-1, 1)
    B = Batch.basis(H, ring, _bid(T), T)
    bad = batch_difference(B.map_leg(0, H.antipode).counit_leg(0), B.counit_leg(0))
    rep.add("counit_of_antipode", len(bad) == 0, T[bad][:, 0].tolist())
    L = B.map_leg(0, H.antipode).comult_leg(0)
    R = B.comult_leg(0, cop=True).map_leg(0, H.antipode).map_leg(1, H.antipode)
    bad = batch_difference(L, R)
    rep.add("comult_of_antipode", len(bad) == 0, T[bad][:, 0].tolist())
    order = antipode_order(H)
    if order is not None:
        rep.add("antipode_invertible", True, detail=f"S has order {order}")
    else:
        try:
            _invert_map(H, H.antipode)
            rep.add("antipode_invertible", True, detail="exact inverse computed")
        except NoAntipode:
            rep.add("antipode_invertible", False)
    return rep


# ---------------------------------------------------------------------------
# duals


def dual_hopf(H: HopfAlgebra, variant: str = "plain") -> HopfAlgebra:
    """H* in the dual basis E^i; `op` reverses the product, `cop` the coproduct."""
    if variant not in ("plain", "op", "cop"):
        raise ValueError(f"unknown variant {variant!r}")
    if H.antipode is None:
        raise NoAntipode("dual needs an antipode")
    d = H.dim
    tab = H.table
    ckeys = H.comult.keys_per_entry()
    cj, ck = H.comult.idx // d, H.comult.idx % d
    mkey = (ck * d + cj) if variant == "op" else (cj * d + ck)
    mult = StructureTensor.from_sid_arrays(d * d, mkey, ckeys, H.comult.sid, tab)
    mkeys = H.mult.keys_per_entry()
    mi, mj = mkeys // d, mkeys % d
    ckey = (mj * d + mi) if variant == "cop" else (mi * d + mj)
    comult = StructureTensor.from_sid_arrays(d, H.mult.idx, ckey, H.mult.sid, tab)
    S = H.antipode if variant == "plain" else antipode_power(H, -1)
    skeys = S.keys_per_entry()
    anti = StructureTensor.from_sid_arrays(d, S.idx, skeys, S.sid, tab)
    unit = {i: c for i, c in enumerate(H.counit) if c}
    counit = [H.unit.get(i, CycNumber(0)) for i in range(d)]
    labels = [f"E[{l}]" for l in H.labels]
    name = f"{H.name or 'H'}*" + ("" if variant == "plain" else f"^{variant}")
    return HopfAlgebra(d, H.conductor, labels, mult, unit, comult, counit, anti, name=name,
                       metadata={"dual_of": H.name, "variant": variant})


def same_structure(A: HopfAlgebra, B: HopfAlgebra, check_labels: bool = False) -> bool:
    """Exact equality of all structure constants (labels optional)."""
    if A.dim != B.dim or (check_labels and A.labels != B.labels):
        return False
    if not (A.mult.same_as(B.mult) and A.comult.same_as(B.comult)):
        return False
    if A.unit != B.unit or A.counit != B.counit:
        return False
    if (A.antipode is None) != (B.antipode is None):
        return False
    return A.antipode is None or A.antipode.same_as(B.antipode)


# ---------------------------------------------------------------------------
# antipode solver


def solve_antipode(H: HopfAlgebra) -> StructureTensor:
    """Solve sum S(b_(1)) b_(2) = eps(b) 1 exactly (d^2 unknowns), then verify the right-handed identity."""
    d = H.dim
    ring = H.ring
    ci, cj, ck, _ = _comult_arrays(H, ring)
    cv, cden = H.comult.values(ring)
    E = len(ci)
    e_rep = np.repeat(np.arange(E, dtype=np.int64), d)
    m = np.tile(np.arange(d, dtype=np.int64), E)
    rep, n_out, sids = H.mult.expand(m * d + ck[e_rep])
    e_rep, m = e_rep[rep], m[rep]
    tv, td = H.table.ring_values(ring)
    vals, den = ring.mul(cv[e_rep], cden, tv[sids], td)
    row = ci[e_rep] * d + n_out
    col = cj[e_rep] * d + m
    (row, col), vals, den = sum_rows(ring, [row, col], vals, den)
    cyc = ring.to_cyc(vals, den)
    rows: dict[int, dict] = {}
    for r, c, v in zip(row.tolist(), col.tolist(), cyc):
        rows.setdefault(r, {})[c] = v
    aug = d * d
    for i, e in enumerate(H.counit):
        if e:
            for n, u in H.unit.items():
                rows.setdefault(i * d + n, {})[aug] = e * u
    ech = SparseEchelon()
    for r in sorted(rows.values(), key=len):
        ech.add(r)
    if aug in ech.rows:
        raise NoAntipode("antipode system is inconsistent")
    if ech.rank < d * d:
        raise AssertionError("antipode system has a non-unique solution; bialgebra data is inconsistent")
    red = ech.rref()
    entries = []
    for var, r in red.items():
        v = r.get(aug)
        if v:
            entries.append((var // d, var % d, v))
    S = StructureTensor.from_entries(d, entries, H.table)
    T = np.arange(d, dtype=np.int64).reshape(-1, 1)
    bad = _fail_antipode(H, ring, T, S)
    if len(bad):
        raise NoAntipode(f"solution fails the right-handed identity at {bad[:5, 0].tolist()}")
    return S


# ---------------------------------------------------------------------------
# group-likes


def is_group_like(H: HopfAlgebra, x: TensorArray) -> bool:
    _need_degree(x, 1)
    if x.H is not H:
        raise AmbientMismatch("element from another algebra")
    if x.is_zero():
        return False
    e = counit(x)
    if e != 1:
        return False
    return x.apply_comult(0).equals(x.tensor(x))


def is_central(H: HopfAlgebra, x: TensorArray) -> bool:
    _need_degree(x, 1)
    if x.H is not H:
        raise AmbientMismatch("element from another algebra")
    return not central_failures(H, x)


def central_failures(H: HopfAlgebra, x: TensorArray, ring=None) -> list[int]:
    ring = ring or H.ring
    d = H.dim
    T = np.arange(d, dtype=np.int64).reshape(-1, 1)
    B = Batch.basis(H, ring, _bid(T), T)
    xx = x.with_ring(ring)
    bad = batch_difference(B.insert(0, xx).mul_legs(0, 1), B.insert(1, xx).mul_legs(0, 1))
    return T[bad][:, 0].tolist()


def _element_key(x: TensorArray):
    return tuple((k, c) for k, c in x.items())


@dataclass
class GroupTable:
    elements: list
    table: list[list[int]]
    inverses: list[int]
    lower_bound: bool = True
    labels: list[str] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.table[cur][i]
            k += 1
        return k


def group_like_closure(H: HopfAlgebra, gens, enumeration=None, limit: int = 20000) -> GroupTable:
    """Close verified group-likes under products; table[i][j] = index of e_i e_j."""
    gens = list(gens)
    labels_in = []
    for t, g in enumerate(gens):
        if isinstance(g, tuple):
            labels_in.append(g[0])
            g = g[1]
            gens[t] = g
        else:
            labels_in.append(f"gen{t}")
        if not is_group_like(H, g):
            raise NotGroupLike(f"generator {labels_in[t]} is not group-like")
    one = H.one()
    elems = [one]
    words = ["1"]
    index = {_element_key(one): 0}
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for gi, g in enumerate(gens):
                y = elems[e].mul(g)
                key = _element_key(y)
                if key not in index:
                    index[key] = len(elems)
                    elems.append(y)
                    words.append(labels_in[gi] if words[e] == "1" else f"{words[e]}*{labels_in[gi]}")
                    nxt.append(index[key])
                    if len(elems) > limit:
                        raise OverflowError("group-like closure exceeded limit")
        frontier = nxt
    n = len(elems)
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            table[i][j] = index[_element_key(elems[i].mul(elems[j]))]
    inverses = []
    for i in range(n):
        s = antipode(elems[i])
        j = index.get(_element_key(s))
        if j is None or table[i][j] != 0:
            raise AssertionError("antipode of a group-like is not its inverse")
        inverses.append(j)
    lower = True
    if enumeration is not None and getattr(enumeration, "complete", False) and len(enumeration.elements) == n:
        lower = False
    return GroupTable(elems, table, inverses, lower, words)


@dataclass
class GroupLikeSearch:
    elements: list
    complete: bool
    details: dict = field(default_factory=dict)


def find_group_likes(H: HopfAlgebra, seed: int = 0, patience: int = 20) -> GroupLikeSearch:
    """Characters of H*, found mod p on the abelianization and verified exactly in H."""
    d = H.dim
    N = H.conductor
    M = _lcm(2, N)
    spec = PrimeSpecialization.choose(M, seed=seed)
    ring = ModRing(spec)
    p = spec.prime
    rng = np.random.default_rng(seed)
    # product in H*: (E^j E^k) = sum_i c^{(i)}_{jk} E^i
    ci, cj, ck, cc = _comult_arrays(H, ring)

    def dprod(u, v):
        return _bincount_mod(ci, cc * u[cj] % p * v[ck] % p, d, p)

    ech = ModEchelon(d, p)
    misses = 0
    while misses < patience and ech.rank < d:
        u, v, w = (rng.integers(0, p, d, dtype=np.int64) for _ in range(3))
        comm = (dprod(u, v) - dprod(v, u)) % p
        if ech.add(dprod(w, comm)) or ech.add(comm):
            misses = 0
        else:
            misses += 1
    piv = list(ech.pivots)
    pset = set(piv)
    free = [k for k in range(d) if k not in pset]
    c = len(free)
    if c == 0:
        return GroupLikeSearch([], True, {"quotient_dim": 0, "prime": p})
    # projection of E^k to quotient coordinates
    P = np.zeros((d, c), dtype=np.int64)
    P[free, np.arange(c)] = 1
    if piv:
        P[piv] = (-ech.rows[:, free]) % p
    # multiplication operators L_i on the quotient, in quotient coordinates
    dual_mult = StructureTensor.from_sid_arrays(d * d, cj * d + ck, ci, H.comult.sid, H.comult.table)
    tv, _ = H.comult.table.ring_values(ring)
    ii = np.repeat(np.arange(d, dtype=np.int64), c)
    ss = np.tile(np.arange(c, dtype=np.int64), d)
    rep, outs, sids = dual_mult.expand(ii * d + np.array(free, dtype=np.int64)[ss])
    import scipy.sparse as sp
    A = sp.csr_matrix((tv[sids], (rep, outs)), shape=(d * c, d), dtype=np.int64)
    A.sum_duplicates()
    A.data %= p
    Lall = np.asarray(A @ P) % p  # row i*c+s = L_i applied to free basis vector s

    values = [(0, CycNumber(0))]
    for j in range(N):
        z = CycNumber.root(N, j) if N > 1 else CycNumber(1)
        r = spec.map(z)
        values.append((r, z))
        values.append(((-r) % p, -z))
    lift = {}
    for r, z in values:
        lift.setdefault(r, z)
    cands = sorted(lift)

    blocks = [list(range(c))]  # indices into the current basis matrix columns
    basis = np.eye(c, dtype=np.int64)
    eig: list[list[int]] = [[]]
    bad = [False]
    incomplete = False
    inv = basis.copy()
    for i in range(d):
        Li = Lall[i * c:(i + 1) * c].T % p  # column s = image of basis vector s
        Q = _matmul_mod(inv, _matmul_mod(Li, basis, p), p)
        new_blocks, new_eig, new_bad, new_cols = [], [], [], []
        for bi, blk in enumerate(blocks):
            if bad[bi]:
                new_blocks.append(blk)
                new_eig.append(eig[bi])
                new_bad.append(True)
                continue
            Mb = Q[np.ix_(blk, blk)]
            b = len(blk)
            if b == 1:
                lam = int(Mb[0, 0])
                if lam in lift:
                    new_blocks.append(blk)
                    new_eig.append(eig[bi] + [lam])
                    new_bad.append(False)
                else:
                    new_blocks.append(blk)
                    new_eig.append(eig[bi])
                    new_bad.append(True)
                    incomplete = True
                continue
            parts = []
            covered = 0
            for lam in cands:
                Ms = (Mb - lam * np.eye(b, dtype=np.int64)) % p
                if rank_mod(Ms, p) == b:
                    continue
                K = nullspace_mod(_matpow_mod(Ms, b, p), p)  # rows span the generalized eigenspace
                parts.append((lam, K))
                covered += len(K)
            if len(parts) == 1 and covered == b:
                new_blocks.append(blk)
                new_eig.append(eig[bi] + [parts[0][0]])
                new_bad.append(False)
                continue
            sub = basis[:, blk]
            for lam, K in parts:
                new_cols.append((sub @ K.T) % p)
                new_eig.append(eig[bi] + [lam])
                new_bad.append(False)
                new_blocks.append(None)
            if covered < b:
                incomplete = True
                prod_m = np.eye(b, dtype=np.int64)
                for lam, _ in parts:
                    Ms = (Mb - lam * np.eye(b, dtype=np.int64)) % p
                    prod_m = _matmul_mod(prod_m, _matpow_mod(Ms, b, p), p)
                R, pivs = rref_mod(prod_m.T, p)
                new_cols.append((sub @ R.T) % p)
                new_eig.append(eig[bi])
                new_bad.append(True)
                new_blocks.append(None)
        if new_cols or any(b_ is None for b_ in new_blocks):
            cols, blocks2, pos = [], [], 0
            nc_iter = iter(new_cols)
            for blk in new_blocks:
                block_cols = basis[:, blk] if blk is not None else next(nc_iter)
                cols.append(block_cols)
                blocks2.append(list(range(pos, pos + block_cols.shape[1])))
                pos += block_cols.shape[1]
            basis = np.concatenate(cols, axis=1) % p
            inv = _inverse_mod(basis, p)
            blocks = blocks2
        else:
            blocks = new_blocks
        eig, bad = new_eig, new_bad

    found = []
    verified_all = True
    for bi, blk in enumerate(blocks):
        if bad[bi]:
            continue
        coeffs = {k: lift[lam] for k, lam in enumerate(eig[bi]) if lam != 0}
        y = H.element(coeffs) if coeffs else None
        if y is not None and is_group_like(H, y):
            found.append(y)
        else:
            verified_all = False
    complete = not incomplete and verified_all
    return GroupLikeSearch(found, complete, {"quotient_dim": c, "prime": p, "blocks": len(blocks)})


def _matmul_mod(a, b, p):
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    n = a.shape[1]
    step = max(1, (2**62) // (p * p) - 1)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        acc = (acc + a[:, s:s + step] @ b[s:s + step]) % p
    return acc


def _matpow_mod(a, e, p):
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            result = _matmul_mod(result, base, p)
        base = _matmul_mod(base, base, p)
        e >>= 1
    return result


def _inverse_mod(a, p):
    n = a.shape[0]
    R, piv = rref_mod(np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise ArithmeticError("singular basis matrix")
    return R[:, n:]
