"""Vectorized sparse tensors over Q(zeta_N) and F_p.

Scalars inside bulk computations are arrays: for the exact ring an integer
matrix of power-basis numerators (one row per entry) with one shared
denominator; for the modular ring a vector of residues.  Structure tensors are
CSR arrays whose entries point into an interning table of CycNumbers.
"""
from __future__ import annotations

from functools import reduce
from math import gcd

import numpy as np

from .scalars import (CycNumber, PrimeSpecialization, _reduction_rows, euler_phi, specialize)

_INT_LIMIT = 2**62
_SAFE = 2**40
CHUNK = 1 << 22


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class ConductorMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# rings


class ExactRing:
    kind = "exact"

    def __init__(self, conductor: int):
        self.n = conductor
        self.phi = euler_phi(conductor)
        rows = _reduction_rows(conductor)
        red = np.zeros((max(0, self.phi - 1), self.phi), dtype=np.int64)
        for k, row in enumerate(rows):
            for t, w in row:
                red[k, t] = w
        self.red = red
        self.red_norm = int(np.abs(red).sum(axis=1).max()) + 1 if len(rows) else 1
        self.key = ("exact", conductor)

    def __eq__(self, other):
        return isinstance(other, ExactRing) and other.n == self.n

    def __hash__(self):
        return hash(self.key)

    def zeros(self, m: int) -> np.ndarray:
        return np.zeros((m, self.phi), dtype=np.int64)

    def ones(self, m: int) -> np.ndarray:
        v = np.zeros((m, self.phi), dtype=np.int64)
        v[:, 0] = 1
        return v

    def from_cyc(self, xs) -> tuple[np.ndarray, int]:
        xs = [x if isinstance(x, CycNumber) else CycNumber(x) for x in xs]
        den = 1
        lifted = []
        for x in xs:
            if self.n % x.conductor:
                raise ConductorMismatch(f"scalar of conductor {x.conductor} in field of conductor {self.n}")
            y = x.embed(self.n)
            lifted.append(y)
            den = _lcm(den, y.denominator)
        big = False
        rows = []
        for y in lifted:
            f = den // y.denominator
            r = [v * f for v in y.numerators]
            if any(abs(v) > _SAFE for v in r):
                big = True
            rows.append(r)
        arr = np.array(rows, dtype=object if big else np.int64).reshape(len(rows), self.phi)
        return arr, den

    def to_cyc(self, vals: np.ndarray, den: int) -> list[CycNumber]:
        n = self.n
        out = []
        for row in vals.tolist():
            out.append(CycNumber._normal(n, tuple(int(v) for v in row), den))
        return out

    @staticmethod
    def _maxabs(a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return int(np.abs(a).max())

    def _promote(self, a: np.ndarray) -> np.ndarray:
        return a if a.dtype == object else a.astype(object)

    def mul(self, a: np.ndarray, ad: int, b: np.ndarray, bd: int) -> tuple[np.ndarray, int]:
        phi = self.phi
        if a.dtype != object or b.dtype != object:
            bound = self._maxabs(a) * self._maxabs(b) * phi * self.red_norm
            if bound > _INT_LIMIT:
                a, b = self._promote(a), self._promote(b)
        if phi == 1:
            return a * b, ad * bd
        obj = a.dtype == object or b.dtype == object
        prod = np.zeros((max(len(a), len(b)), 2 * phi - 1), dtype=object if obj else np.int64)
        for i in range(phi):
            ai = a[:, i]
            for j in range(phi):
                prod[:, i + j] += ai * b[:, j]
        out = prod[:, :phi].copy()
        for k in range(phi, 2 * phi - 1):
            out += np.outer(prod[:, k], self.red[k - phi]) if not obj else prod[:, k:k + 1] * self.red[k - phi].astype(object)
        return out, ad * bd

    def add(self, a, ad, b, bd):
        if ad == bd:
            if a.dtype != object and self._maxabs(a) + self._maxabs(b) > _INT_LIMIT:
                a = self._promote(a)
            return a + b, ad
        g = _lcm(ad, bd)
        fa, fb = g // ad, g // bd
        if a.dtype != object and (self._maxabs(a) * fa + self._maxabs(b) * fb) > _INT_LIMIT:
            a, b = self._promote(a), self._promote(b)
        return a * fa + b * fb, g

    def rescale(self, a: np.ndarray, ad: int, target: int) -> np.ndarray:
        f = target // ad
        if f == 1:
            return a
        if a.dtype != object and self._maxabs(a) * f > _INT_LIMIT:
            a = self._promote(a)
        return a * f

    def neg(self, a):
        return -a

    def nonzero(self, a: np.ndarray) -> np.ndarray:
        if a.dtype == object:
            return np.array([any(r) for r in a.tolist()], dtype=bool)
        return a.any(axis=1)

    def sum_sorted(self, vals: np.ndarray, starts: np.ndarray) -> np.ndarray:
        if vals.dtype != object and len(vals) and self._maxabs(vals) * len(vals) > _INT_LIMIT:
            vals = self._promote(vals)
        return np.add.reduceat(vals, starts, axis=0)

    def normalize(self, vals: np.ndarray, den: int) -> tuple[np.ndarray, int]:
        if den == 1 or vals.size == 0:
            return vals, (1 if vals.size == 0 else den)
        if vals.dtype == object:
            g = reduce(gcd, (int(v) for v in vals.ravel()), den)
        else:
            g = int(np.gcd.reduce(np.abs(vals).ravel()))
            g = gcd(g, den)
        if g > 1:
            vals = vals // g
            den //= g
        if vals.dtype == object and (vals.size == 0 or self._maxabs(vals) < _SAFE):
            vals = vals.astype(np.int64)
        return vals, den

    def scalar(self, c: CycNumber) -> tuple[np.ndarray, int]:
        return self.from_cyc([c])

    def equal_rows(self, a, ad, b, bd) -> np.ndarray:
        g = _lcm(ad, bd)
        return np.all(self.rescale(a, ad, g) == self.rescale(b, bd, g), axis=1)


class ModRing:
    kind = "modular"

    def __init__(self, spec: PrimeSpecialization):
        self.spec = spec
        self.p = spec.prime
        self.n = spec.conductor
        self.key = ("mod", spec.prime, spec.conductor, spec.image)

    def __eq__(self, other):
        return isinstance(other, ModRing) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def zeros(self, m):
        return np.zeros(m, dtype=np.int64)

    def ones(self, m):
        return np.ones(m, dtype=np.int64)

    def from_cyc(self, xs):
        return np.array([specialize(x if isinstance(x, CycNumber) else CycNumber(x), self.spec)
                         for x in xs], dtype=np.int64), 1

    def mul(self, a, ad, b, bd):
        return a * b % self.p, 1

    def add(self, a, ad, b, bd):
        return (a + b) % self.p, 1

    def rescale(self, a, ad, target):
        return a

    def neg(self, a):
        return (-a) % self.p

    def nonzero(self, a):
        return a != 0

    def sum_sorted(self, vals, starts):
        return np.add.reduceat(vals, starts) % self.p

    def normalize(self, vals, den):
        return vals, 1

    def scalar(self, c):
        return self.from_cyc([c])

    def equal_rows(self, a, ad, b, bd):
        return a == b


def ring_take(vals: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return vals[idx]


def sum_by_key(ring, keys: np.ndarray, vals: np.ndarray, den: int):
    """Combine duplicate keys and drop zeros; keys come back sorted."""
    if len(keys) == 0:
        return keys.astype(np.int64), vals, den
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    vs = vals[order]
    starts = np.concatenate(([0], np.flatnonzero(ks[1:] != ks[:-1]) + 1))
    if len(starts) == len(ks):
        uk, uv = ks, vs
    else:
        uk = ks[starts]
        uv = ring.sum_sorted(vs, starts)
    nz = ring.nonzero(uv)
    if not nz.all():
        uk, uv = uk[nz], uv[nz]
    uv, den = ring.normalize(uv, den)
    return uk, uv, den


# ---------------------------------------------------------------------------
# scalar interning


class ScalarTable:
    """Interned scalars at a fixed conductor; tensors refer to them by index."""

    def __init__(self, conductor: int):
        self.conductor = conductor
        self.values: list[CycNumber] = []
        self._index: dict[tuple, int] = {}
        self._cache: dict = {}
        self.intern(CycNumber(1, conductor))

    def intern(self, x) -> int:
        if not isinstance(x, CycNumber):
            x = CycNumber(x)
        if self.conductor % x.conductor:
            raise ConductorMismatch(f"scalar {x} needs conductor {x.conductor}, table has {self.conductor}")
        y = x.embed(self.conductor)
        key = (y.numerators, y.denominator)
        i = self._index.get(key)
        if i is None:
            i = len(self.values)
            self.values.append(y)
            self._index[key] = i
        return i

    def intern_arrays(self, ring: ExactRing, vals: np.ndarray, den: int) -> np.ndarray:
        if len(vals) == 0:
            return np.zeros(0, dtype=np.int64)
        if vals.dtype == object:
            keys = [tuple(int(v) for v in r) for r in vals.tolist()]
            uniq = {}
            ids = np.empty(len(keys), dtype=np.int64)
            for t, k in enumerate(keys):
                j = uniq.get(k)
                if j is None:
                    j = self.intern(CycNumber._normal(ring.n, k, den))
                    uniq[k] = j
                ids[t] = j
            return ids
        uniq, inv = np.unique(vals, axis=0, return_inverse=True)
        cyc = ring.to_cyc(uniq, den)
        ids = np.array([self.intern(c) for c in cyc], dtype=np.int64)
        return ids[inv.reshape(-1)]

    def ring_values(self, ring):
        key = (ring.key, len(self.values))
        hit = self._cache.get(key)
        if hit is None:
            if isinstance(ring, ExactRing) and ring.n != self.conductor:
                raise ConductorMismatch("ring conductor differs from table conductor")
            hit = ring.from_cyc(self.values)
            self._cache = {k: v for k, v in self._cache.items() if k[0] != ring.key}
            self._cache[key] = hit
        return hit

    def all_one(self, sids: np.ndarray) -> bool:
        return bool(len(sids) == 0 or np.all(sids == 0))


# ---------------------------------------------------------------------------
# CSR structure tensors


class StructureTensor:
    """Sparse linear map from a key space of size nkeys to an output index space."""

    __slots__ = ("nkeys", "ptr", "idx", "sid", "table", "_rows")

    def __init__(self, nkeys: int, ptr: np.ndarray, idx: np.ndarray, sid: np.ndarray, table: ScalarTable):
        self.nkeys = nkeys
        self.ptr = ptr
        self.idx = idx
        self.sid = sid
        self.table = table
        self._rows = None

    @classmethod
    def from_sid_arrays(cls, nkeys, keys, outs, sids, table) -> StructureTensor:
        keys = np.asarray(keys, dtype=np.int64)
        outs = np.asarray(outs, dtype=np.int64)
        sids = np.asarray(sids, dtype=np.int64)
        order = np.lexsort((outs, keys))
        keys, outs, sids = keys[order], outs[order], sids[order]
        counts = np.bincount(keys, minlength=nkeys) if len(keys) else np.zeros(nkeys, dtype=np.int64)
        ptr = np.zeros(nkeys + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        return cls(nkeys, ptr, outs, sids.astype(np.int32), table)

    @classmethod
    def from_entries(cls, nkeys: int, entries, table: ScalarTable) -> StructureTensor:
        """entries: iterable of (key, out, scalar); duplicates are summed."""
        acc: dict[tuple[int, int], CycNumber] = {}
        for k, o, c in entries:
            c = c if isinstance(c, CycNumber) else CycNumber(c)
            prev = acc.get((k, o))
            acc[(k, o)] = c if prev is None else prev + c
        keys, outs, sids = [], [], []
        for (k, o), c in acc.items():
            if c:
                keys.append(k)
                outs.append(o)
                sids.append(table.intern(c))
        return cls.from_sid_arrays(nkeys, keys, outs, sids, table)

    @classmethod
    def from_arrays(cls, nkeys, keys, outs, ring: ExactRing, vals, den, table) -> StructureTensor:
        """Exact ring arrays; duplicates (key, out) are summed."""
        keys = np.asarray(keys, dtype=np.int64)
        outs = np.asarray(outs, dtype=np.int64)
        width = int(outs.max()) + 1 if len(outs) else 1
        if nkeys * width >= 2**62:
            raise OverflowError("combined key too large")
        ck, cv, cd = sum_by_key(ring, keys * width + outs, vals, den)
        sids = table.intern_arrays(ring, cv, cd)
        return cls.from_sid_arrays(nkeys, ck // width, ck % width, sids, table)

    @property
    def nnz(self) -> int:
        return len(self.idx)

    def keys_per_entry(self) -> np.ndarray:
        return np.repeat(np.arange(self.nkeys, dtype=np.int64), np.diff(self.ptr))

    def _row_cache(self):
        if self._rows is None:
            vals = self.table.values
            ptr = self.ptr.tolist()
            idx = self.idx.tolist()
            sid = self.sid.tolist()
            self._rows = [[(idx[t], vals[sid[t]]) for t in range(ptr[k], ptr[k + 1])]
                          for k in range(self.nkeys)]
        return self._rows

    def row(self, key: int) -> list[tuple[int, CycNumber]]:
        if self.nkeys <= 200_000:
            return self._row_cache()[key]
        s, e = int(self.ptr[key]), int(self.ptr[key + 1])
        vals = self.table.values
        return [(o, vals[i]) for o, i in zip(self.idx[s:e].tolist(), self.sid[s:e].tolist())]

    def entries(self):
        vals = self.table.values
        keys = self.keys_per_entry().tolist()
        for k, o, i in zip(keys, self.idx.tolist(), self.sid.tolist()):
            yield k, o, vals[i]

    def values(self, ring):
        tv, td = self.table.ring_values(ring)
        return tv[self.sid], td

    def expand(self, p: np.ndarray):
        """For each requested key p[t], list its entries: (rep, out, sid)."""
        p = np.asarray(p, dtype=np.int64)
        start = self.ptr[p]
        cnt = self.ptr[p + 1] - start
        total = int(cnt.sum())
        rep = np.repeat(np.arange(len(p), dtype=np.int64), cnt)
        if total == 0:
            return rep, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        pos = np.repeat(start, cnt) + offs
        return rep, self.idx[pos], self.sid[pos].astype(np.int64)

    def same_as(self, other: StructureTensor) -> bool:
        if self.nkeys != other.nkeys or not np.array_equal(self.ptr, other.ptr):
            return False
        if not np.array_equal(self.idx, other.idx):
            return False
        a = [self.table.values[i] for i in self.sid.tolist()]
        b = [other.table.values[i] for i in other.sid.tolist()]
        return a == b

    def to_dense_dict(self) -> dict[tuple[int, int], CycNumber]:
        return {(k, o): c for k, o, c in self.entries()}


def compose_maps(first: StructureTensor, second: StructureTensor, ring: ExactRing, table: ScalarTable) -> StructureTensor:
    """Linear map composition second o first (both key -> out, same index space)."""
    keys = first.keys_per_entry()
    v1, d1 = first.values(ring)
    rep, outs, sids = second.expand(first.idx)
    tv, td = table.ring_values(ring) if table is second.table else second.table.ring_values(ring)
    vals, den = ring.mul(v1[rep], d1, tv[sids], td)
    return StructureTensor.from_arrays(first.nkeys, keys[rep], outs, ring, vals, den, table)


# ---------------------------------------------------------------------------
# tensors in H^{(x) t}


def encode(legs: np.ndarray, d: int) -> np.ndarray:
    key = legs[:, 0].astype(np.int64)
    for j in range(1, legs.shape[1]):
        key = key * d + legs[:, j]
    return key


def decode(keys: np.ndarray, d: int, t: int) -> np.ndarray:
    out = np.empty((len(keys), t), dtype=np.int64)
    k = keys.astype(np.int64)
    for j in range(t - 1, -1, -1):
        out[:, j] = k % d
        k = k // d
    return out


class TensorArray:
    """Element of H^{(x) t} (t = degree) as sorted unique keys with nonzero values."""

    __slots__ = ("H", "degree", "keys", "vals", "den", "ring")

    def __init__(self, H, degree: int, keys, vals, den, ring, normalized: bool = True):
        self.H = H
        self.degree = degree
        self.ring = ring
        if normalized:
            self.keys, self.vals, self.den = keys, vals, den
        else:
            self.keys, self.vals, self.den = sum_by_key(ring, np.asarray(keys, dtype=np.int64), vals, den)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, H, degree, ring):
        return cls(H, degree, np.zeros(0, dtype=np.int64), ring.zeros(0), 1, ring)

    @classmethod
    def from_items(cls, H, degree, items, ring):
        items = [(k if isinstance(k, tuple) else (k,), c) for k, c in items]
        if not items:
            return cls.zero(H, degree, ring)
        legs = np.array([k for k, _ in items], dtype=np.int64).reshape(len(items), degree)
        vals, den = ring.from_cyc([c for _, c in items])
        return cls(H, degree, encode(legs, H.dim), vals, den, ring, normalized=False)

    @classmethod
    def from_legs(cls, H, legs, vals, den, ring):
        return cls(H, legs.shape[1], encode(legs, H.dim), vals, den, ring, normalized=False)

    # -- views ------------------------------------------------------------
    @property
    def nnz(self) -> int:
        return len(self.keys)

    def legs(self) -> np.ndarray:
        return decode(self.keys, self.H.dim, self.degree)

    def items(self):
        legs = self.legs().tolist()
        if self.ring.kind == "exact":
            cs = self.ring.to_cyc(self.vals, self.den)
        else:
            cs = self.vals.tolist()
        return [(tuple(l), c) for l, c in zip(legs, cs)]

    def to_dict(self) -> dict:
        return dict(self.items())

    def is_zero(self) -> bool:
        return len(self.keys) == 0

    def _check(self, other: TensorArray):
        if other.H is not self.H:
            from .hopf_core import AmbientMismatch
            raise AmbientMismatch("elements live in different algebras")
        if other.degree != self.degree:
            from .hopf_core import DegreeMismatch
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")

    def with_ring(self, ring) -> TensorArray:
        if ring == self.ring:
            return self
        if self.ring.kind != "exact":
            raise ValueError("cannot lift modular values")
        vals, den = ring.from_cyc(self.ring.to_cyc(self.vals, self.den))
        return TensorArray(self.H, self.degree, self.keys, vals, den, ring)

    # -- linear structure -------------------------------------------------
    def __add__(self, other: TensorArray) -> TensorArray:
        self._check(other)
        r = self.ring
        den = _lcm(self.den, other.den) if r.kind == "exact" else 1
        a = r.rescale(self.vals, self.den, den)
        b = r.rescale(other.vals, other.den, den)
        if a.dtype != b.dtype:
            a, b = a.astype(object), b.astype(object)
        vals = np.concatenate([a, b])
        return TensorArray(self.H, self.degree, np.concatenate([self.keys, other.keys]), vals, den, r, normalized=False)

    def __neg__(self) -> TensorArray:
        return TensorArray(self.H, self.degree, self.keys, self.ring.neg(self.vals), self.den, self.ring)

    def __sub__(self, other: TensorArray) -> TensorArray:
        return self + (-other)

    def scale(self, c) -> TensorArray:
        sv, sd = self.ring.scalar(c if isinstance(c, CycNumber) else CycNumber(c))
        vals, den = self.ring.mul(self.vals, self.den, np.repeat(sv, len(self.vals), axis=0), sd)
        return TensorArray(self.H, self.degree, self.keys, vals, den, self.ring, normalized=False)

    def equals(self, other: TensorArray) -> bool:
        if other.degree != self.degree or len(self.keys) != len(other.keys):
            return False
        if not np.array_equal(self.keys, other.keys):
            return False
        return bool(np.all(self.ring.equal_rows(self.vals, self.den, other.vals, other.den)))

    def coefficient(self, key: tuple) -> object:
        k = int(encode(np.array([key], dtype=np.int64), self.H.dim)[0])
        pos = np.searchsorted(self.keys, k)
        if pos < len(self.keys) and self.keys[pos] == k:
            if self.ring.kind == "exact":
                return self.ring.to_cyc(self.vals[pos:pos + 1], self.den)[0]
            return int(self.vals[pos])
        return CycNumber(0) if self.ring.kind == "exact" else 0

    # -- algebra ----------------------------------------------------------
    def mul(self, other: TensorArray) -> TensorArray:
        self._check(other)
        return tensor_product_mul(self, other)

    def tensor(self, other: TensorArray) -> TensorArray:
        if other.H is not self.H:
            from .hopf_core import AmbientMismatch
            raise AmbientMismatch("elements live in different algebras")
        r = self.ring
        na, nb = len(self.keys), len(other.keys)
        ia = np.repeat(np.arange(na), nb)
        ib = np.tile(np.arange(nb), na)
        shift = self.H.dim ** other.degree
        keys = self.keys[ia] * shift + other.keys[ib]
        vals, den = r.mul(self.vals[ia], self.den, other.vals[ib], other.den)
        return TensorArray(self.H, self.degree + other.degree, keys, vals, den, r, normalized=False)

    def permute(self, perm) -> TensorArray:
        """Leg j of the result is leg perm[j] of self."""
        legs = self.legs()[:, list(perm)]
        return TensorArray.from_legs(self.H, legs, self.vals, self.den, self.ring)

    def apply_linear(self, leg: int, tensor: StructureTensor) -> TensorArray:
        """Apply a basis map b_i -> sum c b_k (CSR key i) on one leg."""
        legs = self.legs()
        rep, outs, sids = tensor.expand(legs[:, leg])
        new = legs[rep].copy()
        new[:, leg] = outs
        tv, td = tensor.table.ring_values(self.ring)
        vals, den = self.ring.mul(self.vals[rep], self.den, tv[sids], td)
        return TensorArray.from_legs(self.H, new, vals, den, self.ring)

    def apply_comult(self, leg: int, cop: bool = False) -> TensorArray:
        H = self.H
        d = H.dim
        legs = self.legs()
        rep, outs, sids = H.comult.expand(legs[:, leg])
        j, k = outs // d, outs % d
        if cop:
            j, k = k, j
        base = legs[rep]
        new = np.concatenate([base[:, :leg], j[:, None], k[:, None], base[:, leg + 1:]], axis=1)
        tv, td = H.comult.table.ring_values(self.ring)
        vals, den = self.ring.mul(self.vals[rep], self.den, tv[sids], td)
        return TensorArray.from_legs(H, new, vals, den, self.ring)

    def apply_counit(self, leg: int) -> TensorArray:
        H = self.H
        legs = self.legs()
        cv, cd = H.counit_values(self.ring)
        vals, den = self.ring.mul(self.vals, self.den, cv[legs[:, leg]], cd)
        rest = np.delete(legs, leg, axis=1)
        if rest.shape[1] == 0:
            total = TensorArray(H, 0, np.zeros(len(vals), dtype=np.int64), vals, den, self.ring, normalized=False)
            return total
        return TensorArray.from_legs(H, rest, vals, den, self.ring)

    def insert_leg(self, pos: int, elem: TensorArray) -> TensorArray:
        """Insert the degree-1 element `elem` as a new leg at position pos."""
        legs = self.legs()
        el = elem.legs()[:, 0]
        na, nb = len(legs), len(el)
        ia = np.repeat(np.arange(na), nb)
        ib = np.tile(np.arange(nb), na)
        new = np.concatenate([legs[ia, :pos], el[ib][:, None], legs[ia, pos:]], axis=1)
        vals, den = self.ring.mul(self.vals[ia], self.den, elem.vals[ib], elem.den)
        return TensorArray.from_legs(self.H, new, vals, den, self.ring)

    def scalar_value(self):
        """Value of a degree-0 tensor."""
        if self.degree != 0:
            raise ValueError("not a scalar")
        if len(self.keys) == 0:
            return CycNumber(0) if self.ring.kind == "exact" else 0
        if self.ring.kind == "exact":
            return self.ring.to_cyc(self.vals[:1], self.den)[0]
        return int(self.vals[0])

    @property
    def ambient(self):
        return self.H

    @property
    def coeffs(self) -> dict:
        """Sparse coefficients keyed by multi-index tuples."""
        return self.to_dict()

    def __mul__(self, other):
        if isinstance(other, TensorArray):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorArray):
            return NotImplemented
        return other.H is self.H and self.equals(other)

    __hash__ = None

    def __repr__(self) -> str:
        if self.ring.kind == "exact" and self.nnz <= 12 and self.degree >= 1:
            labels = self.H.labels
            terms = []
            for idx, c in self.items():
                name = "(x)".join(labels[i] for i in idx)
                terms.append(f"({c})*{name}")
            return " + ".join(terms) if terms else "0"
        return f"TensorArray(deg={self.degree}, nnz={self.nnz}, ring={self.ring.key})"


def tensor_product_mul(A: TensorArray, B: TensorArray) -> TensorArray:
    """Componentwise product in H^{(x) t}."""
    H = A.H
    d = H.dim
    t = A.degree
    ring = A.ring
    if t == 0:
        vals, den = ring.mul(A.vals, A.den, B.vals, B.den)
        return TensorArray(H, 0, A.keys[:len(vals)], vals, den, ring, normalized=False)
    la, lb = A.legs(), B.legs()
    na, nb = len(la), len(lb)
    if na == 0 or nb == 0:
        return TensorArray.zero(H, t, ring)
    mult = H.mult
    tv, td = mult.table.ring_values(ring)
    trivial = bool(np.all(mult.sid == 0))
    pieces_k, pieces_v = [], []
    den_out = None
    step = max(1, CHUNK // nb)
    for s in range(0, na, step):
        ia = np.repeat(np.arange(s, min(na, s + step)), nb)
        ib = np.tile(np.arange(nb), min(na, s + step) - s)
        outs = []
        sid_list = []
        for leg in range(t):
            rep, o, sid = mult.expand(la[ia, leg] * d + lb[ib, leg])
            ia, ib = ia[rep], ib[rep]
            outs = [x[rep] for x in outs] + [o]
            sid_list = [x[rep] for x in sid_list] + [sid]
            if len(ia) == 0:
                break
        if len(ia) == 0:
            continue
        vals, den = ring.mul(A.vals[ia], A.den, B.vals[ib], B.den)
        if not trivial:
            for sid in sid_list:
                vals, den = ring.mul(vals, den, tv[sid], td)
        key = outs[0]
        for o in outs[1:]:
            key = key * d + o
        k2, v2, d2 = sum_by_key(ring, key, vals, den)
        pieces_k.append(k2)
        pieces_v.append((v2, d2))
    if not pieces_k:
        return TensorArray.zero(H, t, ring)
    if len(pieces_k) == 1:
        v, dd = pieces_v[0]
        return TensorArray(H, t, pieces_k[0], v, dd, ring)
    den_out = 1
    for _, dd in pieces_v:
        den_out = _lcm(den_out, dd)
    vs = [ring.rescale(v, dd, den_out) for v, dd in pieces_v]
    if any(v.dtype == object for v in vs):
        vs = [v.astype(object) for v in vs]
    return TensorArray(H, t, np.concatenate(pieces_k), np.concatenate(vs), den_out, ring, normalized=False)


# ---------------------------------------------------------------------------
# batched tensor families (one tensor per batch id), used by identity checks


def sum_rows(ring, cols: list[np.ndarray], vals: np.ndarray, den: int):
    """Combine rows with identical column tuples (lexsort, no key overflow)."""
    n = len(vals)
    if n == 0:
        return [c[:0] for c in cols], vals, den
    order = np.lexsort(cols[::-1])
    cs = [c[order] for c in cols]
    vs = vals[order]
    change = np.zeros(n, dtype=bool)
    change[0] = True
    for c in cs:
        change[1:] |= c[1:] != c[:-1]
    starts = np.flatnonzero(change)
    if len(starts) < n:
        cs = [c[starts] for c in cs]
        vs = ring.sum_sorted(vs, starts)
    nz = ring.nonzero(vs)
    if not nz.all():
        cs = [c[nz] for c in cs]
        vs = vs[nz]
    if ring.kind == "exact" and den != 1:
        vs, den = ring.normalize(vs, den)
    return cs, vs, den


class Batch:
    """Rows (bid, leg_0..leg_{t-1}) with values: the family T_b = sum over rows with bid b."""

    __slots__ = ("H", "ring", "bid", "legs", "vals", "den")

    def __init__(self, H, ring, bid, legs, vals, den):
        self.H, self.ring = H, ring
        self.bid = bid
        self.legs = legs
        self.vals = vals
        self.den = den

    @classmethod
    def basis(cls, H, ring, bid, legs):
        bid = np.asarray(bid, dtype=np.int64)
        legs = np.asarray(legs, dtype=np.int64).reshape(len(bid), -1)
        return cls(H, ring, bid, legs, ring.ones(len(bid)), 1)

    @property
    def degree(self) -> int:
        return self.legs.shape[1]

    def _take(self, rep, legs, extra_vals=None, extra_den=1):
        vals, den = self.vals[rep], self.den
        if extra_vals is not None:
            vals, den = self.ring.mul(vals, den, extra_vals, extra_den)
        return Batch(self.H, self.ring, self.bid[rep], legs, vals, den)

    def _table(self, tensor, sids):
        if len(sids) == 0 or np.all(sids == 0):
            return None, 1
        tv, td = tensor.table.ring_values(self.ring)
        return tv[sids], td

    def mul_legs(self, a: int, b: int, mult=None) -> Batch:
        """Replace leg a by (leg a)(leg b) and drop leg b."""
        mult = mult if mult is not None else self.H.mult
        d = self.H.dim
        rep, outs, sids = mult.expand(self.legs[:, a] * d + self.legs[:, b])
        legs = self.legs[rep].copy()
        legs[:, a] = outs
        legs = np.delete(legs, b, axis=1)
        ev, ed = self._table(mult, sids)
        return self._take(rep, legs, ev, ed)

    def comult_leg(self, a: int, cop: bool = False) -> Batch:
        d = self.H.dim
        comult = self.H.comult
        rep, outs, sids = comult.expand(self.legs[:, a])
        j, k = outs // d, outs % d
        if cop:
            j, k = k, j
        base = self.legs[rep]
        legs = np.concatenate([base[:, :a], j[:, None], k[:, None], base[:, a + 1:]], axis=1)
        ev, ed = self._table(comult, sids)
        return self._take(rep, legs, ev, ed)

    def map_leg(self, a: int, tensor) -> Batch:
        rep, outs, sids = tensor.expand(self.legs[:, a])
        legs = self.legs[rep].copy()
        legs[:, a] = outs
        ev, ed = self._table(tensor, sids)
        return self._take(rep, legs, ev, ed)

    def counit_leg(self, a: int) -> Batch:
        cv, cd = self.H.counit_values(self.ring)
        vals, den = self.ring.mul(self.vals, self.den, cv[self.legs[:, a]], cd)
        keep = self.ring.nonzero(vals)
        return Batch(self.H, self.ring, self.bid[keep], np.delete(self.legs[keep], a, axis=1), vals[keep], den)

    def insert(self, pos: int, elem: TensorArray) -> Batch:
        """Tensor a fixed degree-1 element in as a new leg at position pos."""
        el = elem.legs()[:, 0]
        n, m = len(self.bid), len(el)
        ia = np.repeat(np.arange(n), m)
        ib = np.tile(np.arange(m), n)
        legs = np.concatenate([self.legs[ia, :pos], el[ib][:, None], self.legs[ia, pos:]], axis=1)
        return self._take(ia, legs, elem.vals[ib], elem.den)

    def mul_const(self, T: TensorArray, left: bool) -> Batch:
        """Componentwise product T * (row) if left else (row) * T."""
        tl = T.legs()
        n, m = len(self.bid), len(tl)
        out = None
        step = max(1, CHUNK // max(1, m))
        parts = []
        for s in range(0, n, step):
            ia = np.repeat(np.arange(s, min(n, s + step)), m)
            ib = np.tile(np.arange(m), min(n, s + step) - s)
            cur = Batch(self.H, self.ring, self.bid[ia], None, None, 1)
            legs = []
            rep_all = np.arange(len(ia))
            sid_list = []
            d = self.H.dim
            for leg in range(self.degree):
                x, y = (tl[ib, leg], self.legs[ia, leg]) if left else (self.legs[ia, leg], tl[ib, leg])
                rep, o, sid = self.H.mult.expand(x * d + y)
                ia, ib, rep_all = ia[rep], ib[rep], rep_all[rep]
                legs = [l[rep] for l in legs] + [o]
                sid_list = [q[rep] for q in sid_list] + [sid]
            vals, den = self.ring.mul(self.vals[ia], self.den, T.vals[ib], T.den)
            for sid in sid_list:
                ev, ed = self._table(self.H.mult, sid)
                if ev is not None:
                    vals, den = self.ring.mul(vals, den, ev, ed)
            cur.bid = self.bid[ia]
            cur.legs = np.stack(legs, axis=1) if legs else np.zeros((len(ia), 0), dtype=np.int64)
            cur.vals, cur.den = vals, den
            parts.append(cur)
        out = concat_batches(parts, self.H, self.ring, self.degree)
        return out

    def permute(self, perm) -> Batch:
        return Batch(self.H, self.ring, self.bid, self.legs[:, list(perm)], self.vals, self.den)

    def scale_rows(self, vals, den) -> Batch:
        v, dd = self.ring.mul(self.vals, self.den, vals, den)
        return Batch(self.H, self.ring, self.bid, self.legs, v, dd)

    def negate(self) -> Batch:
        return Batch(self.H, self.ring, self.bid, self.legs, self.ring.neg(self.vals), self.den)

    def combined(self):
        cols = [self.bid] + [self.legs[:, j] for j in range(self.degree)]
        return sum_rows(self.ring, cols, self.vals, self.den)


def concat_batches(parts: list[Batch], H, ring, degree: int) -> Batch:
    parts = [p for p in parts if len(p.bid)]
    if not parts:
        return Batch(H, ring, np.zeros(0, dtype=np.int64), np.zeros((0, degree), dtype=np.int64), ring.zeros(0), 1)
    if len(parts) == 1:
        return parts[0]
    den = 1
    if ring.kind == "exact":
        for p in parts:
            den = _lcm(den, p.den)
    vs = [ring.rescale(p.vals, p.den, den) for p in parts]
    if any(v.dtype == object for v in vs):
        vs = [v.astype(object) for v in vs]
    return Batch(H, ring, np.concatenate([p.bid for p in parts]), np.concatenate([p.legs for p in parts]),
                 np.concatenate(vs), den)


def batch_difference(A: Batch, B: Batch) -> np.ndarray:
    """Batch ids where the two families differ."""
    diff = concat_batches([A, B.negate()], A.H, A.ring, A.degree)
    cols, vals, _ = diff.combined()
    return np.unique(cols[0])
