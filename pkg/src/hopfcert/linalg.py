"""Linear algebra over Q(zeta_N) (exact, sparse or fraction-free) and over F_p (numpy)."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .scalars import CycNumber

Row = dict  # column -> CycNumber, zeros never stored


# ---------------------------------------------------------------------------
# exact sparse elimination


def _axpy(target: Row, coef: CycNumber, source: Row) -> None:
    """target -= coef * source, dropping zeros."""
    for col, v in source.items():
        w = target.get(col)
        nv = -(coef * v) if w is None else w - coef * v
        if nv:
            target[col] = nv
        elif w is not None:
            del target[col]


class SparseEchelon:
    """Incremental row echelon form with leftmost pivots, pivot entries 1."""

    def __init__(self):
        self.rows: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        row = dict(row)
        done: set[int] = set()
        while True:
            cols = [c for c in row if c in self.rows and c not in done]
            if not cols:
                return row
            c = min(cols)
            coef = row[c]
            _axpy(row, coef, self.rows[c])
            done.add(c)

    def add(self, row: Row) -> int | None:
        """Insert a row; returns its new pivot column or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        piv = min(r)
        inv = r[piv].inverse()
        if not r[piv].is_one():
            r = {c: v * inv for c, v in r.items()}
        self.rows[piv] = r
        return piv

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def rref(self) -> dict[int, Row]:
        """Fully reduced rows keyed by pivot column."""
        piv = sorted(self.rows)
        rows = {p: dict(self.rows[p]) for p in piv}
        for p in reversed(piv):
            rp = rows[p]
            for q in piv:
                if q >= p:
                    break
                rq = rows[q]
                v = rq.get(p)
                if v:
                    _axpy(rq, v, rp)
        return rows


def rank_exact(rows: Iterable[Row]) -> int:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def solve_exact(rows: Sequence[Row], rhs: Sequence[CycNumber], ncols: int) -> Row | None:
    """One solution x of A x = b (A given by sparse rows), or None if inconsistent."""
    aug = ncols
    ech = SparseEchelon()
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[aug] = b
        piv = ech.add(row)
        if piv == aug:
            return None
    if aug in ech.rows:
        return None
    red = ech.rref()
    sol: Row = {}
    for p, r in red.items():
        v = r.get(aug)
        if v:
            sol[p] = v
    return sol


def kernel_exact(rows: Sequence[Row], ncols: int) -> list[Row]:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    red = ech.rref()
    free = [c for c in range(ncols) if c not in red]
    basis = []
    for f in free:
        vec: Row = {f: CycNumber(1)}
        for p, r in red.items():
            v = r.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def bareiss_rank(matrix: Sequence[Sequence[CycNumber]]) -> int:
    """Rank by fraction-free (Bareiss) elimination on a dense matrix."""
    a = [list(r) for r in matrix]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    prev = CycNumber(1)
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = next((i for i in range(rank, m) if a[i][col]), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, m):
            ai = a[i]
            f = ai[col]
            row = a[rank]
            for j in range(col + 1, n):
                v = p * ai[j] - f * row[j]
                ai[j] = v / prev if v else v
            ai[col] = CycNumber(0)
        prev = p
        rank += 1
        col += 1
    return rank


def exact_rank(entries: dict[tuple[int, int], CycNumber], nrows: int, ncols: int,
               method: str = "auto") -> int:
    """Rank of a sparse exact matrix; `method` in {auto, sparse, bareiss}."""
    if method == "auto":
        density = len(entries) / max(1, nrows * ncols)
        method = "bareiss" if (density > 0.3 and nrows <= 120) else "sparse"
    if method == "bareiss":
        zero = CycNumber(0)
        dense = [[zero] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            dense[i][j] = v
        return bareiss_rank(dense)
    rows: list[Row] = [dict() for _ in range(nrows)]
    for (i, j), v in entries.items():
        if v:
            rows[i][j] = v
    rows.sort(key=len)
    return rank_exact(rows)


# ---------------------------------------------------------------------------
# modular dense linear algebra (entries reduced to [0, p), p < 2^31)


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(mat, dtype=np.int64) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    """Rank over F_p; only rows touching the pivot column are updated."""
    a = np.array(mat, dtype=np.int64) % p
    m, n = a.shape
    alive = np.ones(m, dtype=bool)
    rank = 0
    for c in range(n):
        col = a[:, c]
        cand = np.flatnonzero((col != 0) & alive)
        if cand.size == 0:
            continue
        # pivot on the sparsest candidate row to limit fill
        counts = np.count_nonzero(a[cand, c:], axis=1)
        k = int(cand[int(np.argmin(counts))])
        alive[k] = False
        rank += 1
        others = cand[cand != k]
        if others.size:
            inv = pow(int(a[k, c]), -1, p)
            factors = a[others, c] * inv % p
            prow = a[k, c:]
            nzp = np.flatnonzero(prow)
            sub = a[np.ix_(others, c + nzp)]
            a[np.ix_(others, c + nzp)] = (sub - np.outer(factors, prow[nzp]) % p) % p
        if rank == m:
            break
    return rank


def nullspace_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : mat @ x = 0} over F_p, as rows."""
    mat = np.asarray(mat, dtype=np.int64)
    n = mat.shape[1]
    r, piv = rref_mod(mat, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, pc in enumerate(piv):
            out[t, pc] = (-r[i, f]) % p
    return out


def solve_mod(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    mat = np.asarray(mat, dtype=np.int64)
    n = mat.shape[1]
    aug = np.concatenate([mat, np.asarray(rhs, dtype=np.int64).reshape(-1, 1)], axis=1)
    r, piv = rref_mod(aug, p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n]
    return x


class ModEchelon:
    """Incrementally maintained reduced row echelon basis over F_p."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        return self.reduce_many(np.asarray(v).reshape(1, -1))[0]

    def reduce_many(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64) % self.p
        if self.pivots:
            coef = vs[:, self.pivots]
            # chunked products keep intermediate sums below 2^63
            acc = np.zeros_like(vs)
            step = max(1, (2**62) // (self.p * self.p) - 1)
            for s in range(0, len(self.pivots), step):
                acc = (acc + coef[:, s:s + step] @ self.rows[s:s + step]) % self.p
            vs = (vs - acc) % self.p
        return vs

    def add(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, self.p) % self.p
        if self.pivots:
            col = self.rows[:, c].copy()
            if col.any():
                self.rows = (self.rows - np.outer(col, v) % self.p) % self.p
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(c)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)
