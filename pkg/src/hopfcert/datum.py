"""Integer data behind the ribbon/factorizability criteria: Smith normal form, unique-solution
systems over products of cyclic groups, and hypothesis checks for Cartan and reduced data."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np
from sympy import factorint

from .report import Report

Matrix = list[list[int]]


class DatumError(ValueError):
    pass


class IllPosedSystem(DatumError):
    pass


class Overflow(ArithmeticError):
    pass


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def lcm_all(xs) -> int:
    return reduce(_lcm, xs, 1)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]) if B else 0)]
            for i in range(len(A))]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def int_det(A: Matrix) -> int:
    """Fraction-free Bareiss determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNF:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    def determinant(self) -> int:
        """det of the original square matrix: det(D) / (det U det V)."""
        d = 1
        for x in self.diagonal:
            d *= x
        return d * int_det(self.U) * int_det(self.V)  # det U, det V are +-1, so dividing equals multiplying


def smith_normal_form(M: Sequence[Sequence[int]]) -> SNF:
    """U M V = D with D diagonal, d_1 | d_2 | ..., U and V unimodular."""
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for r in R:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row dst += k * row src
        for R in (A, U):
            R[dst] = [a + k * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, k):
        for R in (A, V):
            for r in R:
                r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return SNF(U, A, V)


# ---------------------------------------------------------------------------
# groups given by exponent vectors


def element_order(v: Sequence[int], orders: Sequence[int]) -> int:
    return lcm_all(N // gcd(x % N, N) if x % N else 1 for x, N in zip(v, orders))


def subgroup_index_data(gens: Sequence[Sequence[int]], orders: Sequence[int]) -> tuple[int, int]:
    """(order of the subgroup generated by gens, order of the quotient) inside prod Z_{orders}."""
    m = len(orders)
    rows = [list(map(int, g)) for g in gens] + [[orders[k] if k == j else 0 for k in range(m)] for j in range(m)]
    diag = smith_normal_form(rows).diagonal
    quotient = 1
    for d in diag:
        quotient *= d
    total = 1
    for N in orders:
        total *= N
    return total // quotient, quotient


def solve_congruences(A: Sequence[Sequence[int]], b: Sequence[int], L: int) -> list[int] | None:
    """Some integer x with A x = b (mod L), or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    snf = smith_normal_form(A)
    Ub = [sum(snf.U[i][k] * b[k] for k in range(rows)) % L for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = snf.D[i][i] if i < cols else 0
        g = gcd(d, L)
        if Ub[i] % g:
            return None
        if d % L:
            dg, Lg = d // g, L // g
            y[i] = (Ub[i] // g) * pow(dg % Lg, -1, Lg) % Lg if Lg > 1 else 0
    return [sum(snf.V[k][i] * y[i] for i in range(cols)) for k in range(cols)]


# ---------------------------------------------------------------------------
# unique-solution systems


@dataclass
class ZModSystem:
    """Solutions of sum_i x_i m_ij = 0 (mod n_j) with x_i in Z_{n_i}."""
    M: Matrix
    moduli: list[int]

    def __post_init__(self):
        m = len(self.moduli)
        if any(n < 1 for n in self.moduli):
            raise DatumError("moduli must be positive")
        if len(self.M) != m or any(len(r) != m for r in self.M):
            raise DatumError("matrix must be square of size len(moduli)")
        self.M = [[int(self.M[i][j]) % self.moduli[j] for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(m):
                if (self.moduli[i] * self.M[i][j]) % self.moduli[j]:
                    raise IllPosedSystem(f"x_{i} m_{i}{j} is not well defined: n_{j} does not divide n_{i} m_{i}{j}")


@dataclass
class SolutionCount:
    count: int
    unique: bool
    methods: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return len(set(self.methods.values())) <= 1


def _local_kernel_exponent(M: Matrix, moduli: Sequence[int], p: int) -> int:
    """log_p of the kernel size of the p-primary part."""
    a = [_vp(n, p) for n in moduli]
    e = max(a)
    if e == 0:
        return 0
    mod = p ** e
    m = len(moduli)
    # column j lives mod p^{b_j}; scale it into Z_{p^e}
    A = [[(M[i][j] * p ** (e - a[j])) % mod for j in range(m)] for i in range(m)]
    # x_i ranges over Z_{p^e}; the true variable lives in Z_{p^{a_i}}, i.e. p^{a_i} Z_{p^e} e_i is in the kernel
    rows = list(range(m))
    cols = list(range(m))
    image_exp = 0
    while rows and cols:
        best = None
        for i in rows:
            for j in cols:
                if A[i][j]:
                    v = _vp(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        image_exp += e - v
        unit = A[pi][pj] // p ** v
        inv = pow(unit, -1, mod)
        for i in rows:
            if i != pi and A[i][pj]:
                f = (A[i][pj] // p ** v) * inv % mod
                A[i] = [(x - f * y) % mod for x, y in zip(A[i], A[pi])]
        for j in cols:
            if j != pj and A[pi][j]:
                f = (A[pi][j] // p ** v) * inv % mod
                for i in rows:
                    A[i][j] = (A[i][j] - f * A[i][pj]) % mod
        rows.remove(pi)
        cols.remove(pj)
    kernel_exp = e * m - image_exp
    return kernel_exp - sum(e - ai for ai in a)


def _vp(x: int, p: int) -> int:
    if x == 0:
        return 10 ** 9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def count_solutions_elimination(S: ZModSystem) -> int:
    if max(S.moduli) > 10 ** 18:
        raise Overflow("moduli too large to factor")
    primes = set()
    for n in S.moduli:
        primes.update(factorint(n))
    total = 1
    for p in sorted(primes):
        total *= p ** _local_kernel_exponent(S.M, S.moduli, p)
    return total


def count_solutions_bruteforce(S: ZModSystem, limit: int = 10 ** 7) -> int:
    size = 1
    for n in S.moduli:
        size *= n
    if size > limit:
        raise Overflow(f"{size} tuples exceed the brute-force limit")
    grids = np.meshgrid(*[np.arange(n, dtype=np.int64) for n in S.moduli], indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1)
    ok = np.ones(X.shape[0], dtype=bool)
    for j, nj in enumerate(S.moduli):
        col = np.array([S.M[i][j] for i in range(len(S.moduli))], dtype=object)
        vals = (X.astype(object) @ col) % nj if nj > 2 ** 20 else (X @ col.astype(np.int64)) % nj
        ok &= np.asarray(vals == 0, dtype=bool)
    return int(ok.sum())


def unique_solution_check(M, moduli, brute_limit: int = 10 ** 7) -> SolutionCount:
    """Count solutions two ways (local elimination per prime, brute force when small enough)."""
    S = M if isinstance(M, ZModSystem) else ZModSystem([list(r) for r in M], list(moduli))
    methods = {"elimination": count_solutions_elimination(S)}
    size = 1
    for n in S.moduli:
        size *= n
    if size <= brute_limit:
        methods["bruteforce"] = count_solutions_bruteforce(S, brute_limit)
    res = SolutionCount(methods["elimination"], methods["elimination"] == 1, methods)
    if not res.agree:
        raise AssertionError(f"solution counts disagree: {methods}")
    return res


# ---------------------------------------------------------------------------
# data


@dataclass
class AbelianGroupData:
    orders: list[int]

    @property
    def exponent(self) -> int:
        return lcm_all(self.orders)

    def pair(self, chi: Sequence[int], g: Sequence[int]) -> int:
        """Exponent e with chi(g) = zeta_L^e, L the group exponent."""
        L = self.exponent
        return sum(c * x * (L // N) for c, x, N in zip(chi, g, self.orders)) % L

    def order(self, v) -> int:
        return element_order(v, self.orders)


@dataclass
class CartanDatum:
    theta: int
    cartan: Matrix
    group_orders: list[int]
    g: Matrix
    chi: Matrix

    def group(self) -> AbelianGroupData:
        return AbelianGroupData(list(self.group_orders))

    def q(self, i: int, j: int) -> int:
        """q_ij = chi_j(g_i) as an exponent of zeta_L."""
        return self.group().pair(self.chi[j], self.g[i])


@dataclass
class ReducedDatum:
    theta: int
    group_orders: list[int]
    g: Matrix
    f: Matrix | None
    chi: Matrix
    n: int | None = None

    def group(self) -> AbelianGroupData:
        return AbelianGroupData(list(self.group_orders))

    def q(self, i: int, j: int) -> int:
        return self.group().pair(self.chi[j], self.g[i])


def _root_order(e: int, L: int) -> int:
    return L // gcd(e % L, L)


def _components(theta: int, adj) -> list[list[int]]:
    seen, comps = set(), []
    for s in range(theta):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(theta):
                if j not in seen and adj(i, j):
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def matrix_connected(M: Sequence[Sequence[int]]) -> bool:
    """Connectivity of the graph with an edge i-j whenever m_ij or m_ji is nonzero."""
    n = len(M)
    if n == 0:
        return True
    return len(_components(n, lambda i, j: i != j and (M[i][j] != 0 or M[j][i] != 0))) == 1


def is_finite_type(A: Matrix) -> bool:
    """Generalized Cartan matrix with all principal minors positive."""
    n = len(A)
    if any(A[i][i] != 2 for i in range(n)):
        return False
    for i in range(n):
        for j in range(n):
            if i != j and (A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0)):
                return False
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if int_det([[A[i][j] for j in idx] for i in idx]) <= 0:
            return False
    return True


def check_cartan_datum(D: CartanDatum) -> Report:
    rep = Report("Cartan datum")
    G = D.group()
    L = G.exponent
    th = D.theta
    A = D.cartan
    rep.add("Cartan matrix of finite type", is_finite_type(A), method="principal minors")
    bad = [(i + 1, j + 1) for i in range(th) for j in range(th)
           if (D.q(i, j) + D.q(j, i) - A[i][j] * D.q(i, i)) % L]
    rep.add("q_ij q_ji = q_ii^a_ij", not bad, witnesses=bad)
    trivial = [i + 1 for i in range(th) if D.q(i, i) % L == 0]
    rep.add("q_ii != 1", not trivial, witnesses=trivial)
    orders = [_root_order(D.q(i, i), L) for i in range(th)]
    even = [i + 1 for i in range(th) if orders[i] % 2 == 0]
    rep.add("order of q_ii odd", not even, witnesses=even)
    comps = _components(th, lambda i, j: i != j and A[i][j] != 0)
    g2 = [c for c in comps if len(c) == 2 and A[c[0]][c[1]] * A[c[1]][c[0]] == 3]
    bad3 = [i + 1 for c in g2 for i in c if orders[i] % 3 == 0]
    rep.add("order of q_ii prime to 3 on G2 components", not bad3, witnesses=bad3)
    nonconst = [[i + 1 for i in c] for c in comps if len({orders[i] for i in c}) > 1]
    rep.add("order of q_ii constant on components", not nonconst, witnesses=nonconst)
    rep.info["N_J"] = {"+".join(str(i + 1) for i in c): orders[c[0]] for c in comps}
    return rep


def solve_dual_characters(D) -> list[list[int]] | None:
    """chibar_i in G^ with chibar_i(g_j) = chi_j(g_i) for all j, or None if some i has no solution."""
    G = D.group()
    L = G.exponent
    th = D.theta
    out = []
    for i in range(th):
        A = [[D.g[j][k] * (L // G.orders[k]) for k in range(len(G.orders))] for j in range(th)]
        b = [D.q(i, j) for j in range(th)]
        x = solve_congruences(A, b, L)
        if x is None:
            return None
        out.append([c % N for c, N in zip(x, G.orders)])
    return out


def thm42_hypotheses(D: CartanDatum) -> Report:
    rep = Report("dual-character hypotheses")
    base = check_cartan_datum(D)
    rep.extend(base, prefix="datum: ")
    G = D.group()
    detA = int_det(D.cartan)
    rep.info["det A"] = detA
    ords = []
    for i in range(D.theta):
        o = _lcm(G.order(D.chi[i]), G.order(D.g[i]))
        ords.append(o)
    rep.info["ord(chi_i g_i)"] = ords
    bad = [i + 1 for i, o in enumerate(ords) if gcd(o, detA) != 1]
    rep.add("gcd(ord(chi_i g_i), det A) = 1", not bad, witnesses=bad)
    chibar = solve_dual_characters(D)
    rep.add("dual characters chibar_i exist", chibar is not None, method="congruence solve via Smith form")
    if chibar is not None:
        rep.info["chibar"] = chibar
        ok = all((G.pair(chibar[i], D.g[j]) - D.q(i, j)) % G.exponent == 0
                 for i in range(D.theta) for j in range(D.theta))
        rep.add("chibar_i(g_j) = chi_j(g_i)", ok, method="substitution")
        rep.add("G^ generated by chibar_i", subgroup_index_data(chibar, G.orders)[1] == 1,
                method="subgroup order via Smith form")
    rep.add("G^ generated by chi_i", subgroup_index_data(D.chi, G.orders)[1] == 1,
            method="subgroup order via Smith form")
    return rep


def _validate_reduced(D: ReducedDatum, rep: Report) -> bool:
    G = D.group()
    L = G.exponent
    if D.f is None:
        rep.add("f_i given", False, detail="no f_i supplied or solvable")
        return False
    bad = [(i + 1, j + 1) for i in range(D.theta) for j in range(D.theta)
           if (G.pair(D.chi[j], D.g[i]) - G.pair(D.chi[i], D.f[j])) % L]
    rep.add("chi_j(g_i) = chi_i(f_j)", not bad, witnesses=bad)
    triv = [i + 1 for i in range(D.theta)
            if all((a + b) % N == 0 for a, b, N in zip(D.f[i], D.g[i], G.orders))]
    rep.add("f_i g_i != 1", not triv, witnesses=triv)
    return not bad and not triv


def solve_f(D: ReducedDatum) -> Matrix | None:
    """f_j in G with chi_i(f_j) = chi_j(g_i) for all i."""
    G = D.group()
    L = G.exponent
    out = []
    for j in range(D.theta):
        A = [[D.chi[i][k] * (L // G.orders[k]) for k in range(len(G.orders))] for i in range(D.theta)]
        b = [G.pair(D.chi[j], D.g[i]) for i in range(D.theta)]
        x = solve_congruences(A, b, L)
        if x is None:
            return None
        out.append([c % N for c, N in zip(x, G.orders)])
    return out


def pairing_matrix_45(D: ReducedDatum) -> tuple[Matrix, list[int]] | None:
    """(M, n) with chi_i(g_j) chi_j(g_i) = zeta_{n_j}^{m_ij}, n_i = ord(chi_i f_i); None if a value
    has order not dividing n_j."""
    G = D.group()
    L = G.exponent
    n = [_lcm(G.order(D.chi[i]), G.order(D.f[i])) for i in range(D.theta)]
    M = []
    for i in range(D.theta):
        row = []
        for j in range(D.theta):
            e = (G.pair(D.chi[i], D.g[j]) + G.pair(D.chi[j], D.g[i])) % L
            if (e * n[j]) % L:
                return None
            row.append(e * n[j] // L % n[j])
        M.append(row)
    return M, n


def thm45_conditions(D: ReducedDatum) -> Report:
    rep = Report("unique-solution conditions")
    if not _validate_reduced(D, rep):
        return rep
    G = D.group()
    rep.add("(i) Nichols algebra finite dimensional", None, detail="assumed (not decided by this tool)")
    gen = subgroup_index_data(D.chi, G.orders)[1] == 1
    rep.add("(ii) G^ generated by chi_i", gen, method="subgroup order via Smith form")
    pm = pairing_matrix_45(D)
    if pm is None:
        rep.add("pairing values are n_j-th roots", False)
        return rep
    M, n = pm
    rep.info["n_i = ord(chi_i f_i)"] = n
    rep.info["M"] = M
    both = [list(c) + list(f) for c, f in zip(D.chi, D.f)]
    sub_order, _ = subgroup_index_data(both, list(G.orders) + list(G.orders))
    prod = 1
    for x in n:
        prod *= x
    rep.add("<chi_i f_i> is Z_n1 x ... x Z_ntheta", sub_order == prod,
            detail=f"subgroup order {sub_order}, expected {prod}")
    res = unique_solution_check(M, n)
    rep.add("(iii) xM = 0 has a unique solution", res.unique, method=" + ".join(res.methods),
            detail=f"{res.count} solutions")
    rep.info["solution counts"] = res.methods
    return rep


def thm46_conditions(D: ReducedDatum, n: int | None = None) -> Report:
    n = n or D.n
    rep = Report(f"cyclic determinant conditions (n={n})")
    if n is None:
        rep.add("modulus n given", False)
        return rep
    th = D.theta
    if D.f is None:
        D = ReducedDatum(D.theta, D.group_orders, D.g, solve_f(D), D.chi, n)
    _validate_reduced(D, rep)
    rep.add("(i) Nichols algebra finite dimensional", None, detail="assumed (not decided by this tool)")
    shape = list(D.group_orders) == [n] * th
    rep.add("(ii) G = Z_n^theta with basis g_i", shape and gcd(int_det(D.g), n) == 1 if shape else False,
            detail=f"orders {D.group_orders}, det(g) = {int_det(D.g) if shape else 'n/a'}")
    rep.add("(iii) G^ = Z_n^theta with basis chi_i", shape and gcd(int_det(D.chi), n) == 1 if shape else False,
            detail=f"det(chi) = {int_det(D.chi) if shape else 'n/a'}")
    if not shape:
        return rep
    # chi_j(g_i) = omega^{m_ij}: integer representatives read directly from the exponent data
    M = [[sum(D.chi[j][k] * D.g[i][k] for k in range(th)) for j in range(th)] for i in range(th)]
    MM = [[M[i][j] + M[j][i] for j in range(th)] for i in range(th)]
    d1 = smith_normal_form(M).determinant()
    d2 = smith_normal_form(MM).determinant()
    rep.info["M"] = M
    rep.info["det M"] = d1
    rep.info["det(M+M^t)"] = d2
    rep.add("(iv) gcd(det M, n) = 1", gcd(d1, n) == 1, method="Smith form determinant")
    rep.add("(iv) gcd(det(M+M^t), n) = 1", gcd(d2, n) == 1, method="Smith form determinant")
    u1 = unique_solution_check(M, [n] * th)
    u2 = unique_solution_check(MM, [n] * th)
    rep.add("cross-check: xM = 0 unique iff gcd(det M, n) = 1", u1.unique == (gcd(d1, n) == 1),
            method=" + ".join(u1.methods))
    rep.add("cross-check: x(M+M^t) = 0 unique iff gcd(det(M+M^t), n) = 1", u2.unique == (gcd(d2, n) == 1),
            method=" + ".join(u2.methods))
    return rep


def thm46_holds(rep: Report) -> bool:
    return rep.passed and all(c.passed is not False for c in rep.checks)


# ---------------------------------------------------------------------------
# the worked examples


def h_omega_datum(n: int) -> ReducedDatum:
    """G = Z_2n^2, chi_1 = (-3, 2), chi_2 = (1, -3); f solved from chi_i(f_j) = chi_j(g_i)."""
    N = 2 * n
    D = ReducedDatum(2, [N, N], [[1, 0], [0, 1]], None, [[-3, 2], [1, -3]], N)
    D.f = solve_f(D)
    return D


def h_omega_f_closed_form(n: int) -> Matrix:
    """f_1 = g_1^{5 n0} g_2^{-3 n0}, f_2 = g_1^{3 n0} g_2^{8 n0} with 7 n0 = 1 mod 2n."""
    N = 2 * n
    n0 = pow(7, -1, N)
    return [[5 * n0 % N, -3 * n0 % N], [3 * n0 % N, 8 * n0 % N]]


def h_omega_cartan_datum(n: int) -> CartanDatum:
    N = 2 * n
    return CartanDatum(2, [[2, -1], [-1, 2]], [N, N], [[1, 0], [0, 1]], [[-3, 2], [1, -3]])


def k_alpha_datum(n: int) -> ReducedDatum:
    """G = Z_3n^2, chi_1 = (-2, 1), chi_2 = (1, n), f_i = g_i."""
    N = 3 * n
    g = [[1, 0], [0, 1]]
    return ReducedDatum(2, [N, N], g, [list(r) for r in g], [[-2, 1], [1, n]])


def taft_cartan_datum(n: int = 3) -> CartanDatum:
    return CartanDatum(1, [[2]], [n], [[1]], [[1]])


def taft_reduced_datum(n: int = 3) -> ReducedDatum:
    return ReducedDatum(1, [n], [[1]], [[1]], [[1]])


# ---------------------------------------------------------------------------
# files


def datum_from_dict(d: dict):
    try:
        theta = int(d["theta"])
        orders = [int(x) for x in d["group_orders"]]
        g = [[int(x) for x in r] for r in d["g"]]
        chi = [[int(x) for x in r] for r in d["chi"]]
    except (KeyError, TypeError, ValueError) as e:
        raise DatumError(f"malformed datum: {e}") from None
    m = len(orders)
    if len(g) != theta or len(chi) != theta or any(len(r) != m for r in g + chi):
        raise DatumError("g and chi must be theta x len(group_orders)")
    if "cartan" in d and d["cartan"] is not None:
        A = [[int(x) for x in r] for r in d["cartan"]]
        if len(A) != theta or any(len(r) != theta for r in A):
            raise DatumError("cartan must be theta x theta")
        cd = CartanDatum(theta, A, orders, g, chi)
    else:
        cd = None
    rd = None
    if "f" in d or "n" in d:
        f = [[int(x) for x in r] for r in d["f"]] if d.get("f") is not None else None
        if f is not None and (len(f) != theta or any(len(r) != m for r in f)):
            raise DatumError("f must be theta x len(group_orders)")
        rd = ReducedDatum(theta, orders, g, f, chi, int(d["n"]) if d.get("n") is not None else None)
    if cd is None and rd is None:
        raise DatumError("datum needs 'cartan', 'f' or 'n'")
    return cd, rd


def load_datum(path):
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise DatumError(f"not valid JSON: {e}") from None
    return datum_from_dict(d)


def datum_to_dict(D) -> dict:
    out = {"theta": D.theta, "group_orders": list(D.group_orders), "g": D.g, "chi": D.chi}
    if isinstance(D, CartanDatum):
        out["cartan"] = D.cartan
    else:
        if D.f is not None:
            out["f"] = D.f
        if D.n is not None:
            out["n"] = D.n
    return out


def analyze(cd: CartanDatum | None, rd: ReducedDatum | None) -> list[Report]:
    reps = []
    if cd is not None:
        reps.append(thm42_hypotheses(cd))
    if rd is not None:
        if rd.f is not None:
            reps.append(thm45_conditions(rd))
        if rd.n is not None:
            reps.append(thm46_conditions(rd))
    for r in reps:
        r.notes.append("hypothesis (i), finite dimensionality of the Nichols algebra, is assumed from the input")
    return reps
