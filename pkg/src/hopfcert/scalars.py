"""Exact arithmetic in cyclotomic fields Q(zeta_N) and reduction to prime fields.

Elements are stored in the power basis of Q[x]/(Phi_N) as a tuple of integer
numerators over one positive common denominator.  Values with different
conductors are lifted to the lcm of the two conductors before combining.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

MAX_CONDUCTOR = 10**6


class DivisionByZero(ZeroDivisionError):
    pass


class ConductorOverflow(ArithmeticError):
    pass


class NotDivisible(ValueError):
    pass


class BadDenominator(ArithmeticError):
    pass


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)


def _poly_divmod_monic(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            quot[k - dn] = c
            for t in range(dn + 1):
                num[k - dn + t] -= c * den[t]
    rem = num[:dn] or [0]
    return quot, rem


def divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _moebius(n: int) -> int:
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic_poly needs n >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            num, rem = _poly_divmod_monic(num, cyclotomic_poly(d))
            if any(rem):
                raise AssertionError("x^n - 1 not divisible by a cyclotomic factor")
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse rows of x^k mod Phi_n for phi(n) <= k <= 2 phi(n) - 2."""
    phi_poly = cyclotomic_poly(n)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    # x^deg = -(lower terms of Phi_n)
    cur = [-c for c in phi_poly[:deg]]
    for _ in range(deg, 2 * deg - 1):
        rows.append(tuple((t, v) for t, v in enumerate(cur) if v))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for t in range(deg):
                cur[t] -= top * phi_poly[t]
    return tuple(rows)


@lru_cache(maxsize=None)
def _root_powers(n: int) -> tuple[tuple[int, ...], ...]:
    """zeta_n^e in the power basis, for 0 <= e < n."""
    deg = euler_phi(n)
    phi_poly = cyclotomic_poly(n)
    out = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(n):
        out.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for t in range(deg):
                cur[t] -= top * phi_poly[t]
    return tuple(out)


@lru_cache(maxsize=None)
def _trace_vector(n: int) -> tuple[int, ...]:
    # Tr(zeta^k) is the Ramanujan sum c_n(k)
    deg = euler_phi(n)
    vec = []
    for k in range(deg):
        m = n // gcd(n, k)
        vec.append(_moebius(m) * deg // euler_phi(m))
    return tuple(vec)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------


class CycNumber:
    """Exact element of Q(zeta_N)."""

    __slots__ = ("_n", "_c", "_d", "_h")

    def __init__(self, value: int | Fraction | CycNumber = 0, conductor: int = 1):
        if isinstance(value, CycNumber):
            other = value.embed(conductor) if conductor % value._n == 0 and conductor != value._n else value
            self._n, self._c, self._d, self._h = other._n, other._c, other._d, None
            return
        if conductor < 1:
            raise ValueError("conductor must be positive")
        if conductor > MAX_CONDUCTOR:
            raise ConductorOverflow(conductor)
        q = Fraction(value)
        deg = euler_phi(conductor)
        self._n = conductor
        self._c = (q.numerator,) + (0,) * (deg - 1)
        self._d = q.denominator
        self._h = None

    @classmethod
    def _raw(cls, n: int, c: tuple[int, ...], d: int) -> CycNumber:
        obj = object.__new__(cls)
        obj._n, obj._c, obj._d, obj._h = n, c, d, None
        return obj

    @classmethod
    def _normal(cls, n: int, c: Sequence[int], d: int) -> CycNumber:
        if d != 1:
            g = gcd(d, *c)
            if g != 1:
                c = tuple(v // g for v in c)
                d //= g
        return cls._raw(n, tuple(c), d)

    @classmethod
    def root(cls, n: int, k: int = 1) -> CycNumber:
        """zeta_n^k."""
        if n > MAX_CONDUCTOR:
            raise ConductorOverflow(n)
        return cls._raw(n, _root_powers(n)[k % n], 1)

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Iterable[int | Fraction]) -> CycNumber:
        """Build from power-basis coordinates (any length; reduced mod Phi_n)."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for f in fr:
            den = _lcm(den, f.denominator)
        ints = [int(f * den) for f in fr]
        deg = euler_phi(n)
        powers = _root_powers(n)
        out = [0] * deg
        for k, v in enumerate(ints):
            if v:
                for t, w in enumerate(powers[k % n]):
                    if w:
                        out[t] += v * w
        return cls._normal(n, out, den)

    # -- accessors --------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._d) for v in self._c)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._c

    @property
    def denominator(self) -> int:
        return self._d

    def is_zero(self) -> bool:
        return not any(self._c)

    def __bool__(self) -> bool:
        return any(self._c)

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._c[0], self._d)

    def is_one(self) -> bool:
        return self._d == 1 and self._c[0] == 1 and not any(self._c[1:])

    # -- conductor handling ----------------------------------------------
    def embed(self, m: int) -> CycNumber:
        """Image under zeta_N -> zeta_m^(m/N)."""
        n = self._n
        if m % n:
            raise NotDivisible(f"conductor {n} does not divide {m}")
        if m == n:
            return self
        if m > MAX_CONDUCTOR:
            raise ConductorOverflow(m)
        step = m // n
        deg = euler_phi(m)
        if not any(self._c[1:]):
            return CycNumber._raw(m, (self._c[0],) + (0,) * (deg - 1), self._d)
        powers = _root_powers(m)
        out = [0] * deg
        for k, v in enumerate(self._c):
            if v:
                for t, w in enumerate(powers[k * step]):
                    if w:
                        out[t] += v * w
        return CycNumber._raw(m, tuple(out), self._d)

    def _unify(self, other: CycNumber) -> tuple[CycNumber, CycNumber]:
        if self._n == other._n:
            return self, other
        m = _lcm(self._n, other._n)
        if m > MAX_CONDUCTOR:
            raise ConductorOverflow(f"lcm({self._n}, {other._n}) = {m}")
        return self.embed(m), other.embed(m)

    @staticmethod
    def _coerce(x) -> CycNumber | None:
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNumber(x)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        if a._d == b._d:
            c = tuple(x + y for x, y in zip(a._c, b._c))
            return CycNumber._normal(a._n, c, a._d) if a._d != 1 else CycNumber._raw(a._n, c, 1)
        c = tuple(x * b._d + y * a._d for x, y in zip(a._c, b._c))
        return CycNumber._normal(a._n, c, a._d * b._d)

    __radd__ = __add__

    def __neg__(self) -> CycNumber:
        return CycNumber._raw(self._n, tuple(-x for x in self._c), self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        ac, bc = a._c, b._c
        deg = len(ac)
        if deg == 1:
            c = (ac[0] * bc[0],)
        else:
            a_rat = not any(ac[1:])
            b_rat = not any(bc[1:])
            if a_rat:
                s = ac[0]
                c = tuple(s * y for y in bc)
            elif b_rat:
                s = bc[0]
                c = tuple(s * x for x in ac)
            else:
                prod = [0] * (2 * deg - 1)
                for i, x in enumerate(ac):
                    if x:
                        for j, y in enumerate(bc):
                            if y:
                                prod[i + j] += x * y
                low = prod[:deg]
                rows = _reduction_rows(a._n)
                for k in range(deg, 2 * deg - 1):
                    v = prod[k]
                    if v:
                        for t, w in rows[k - deg]:
                            low[t] += v * w
                c = tuple(low)
        d = a._d * b._d
        if d == 1:
            return CycNumber._raw(a._n, c, 1)
        return CycNumber._normal(a._n, c, d)

    __rmul__ = __mul__

    def inverse(self) -> CycNumber:
        if not any(self._c):
            raise DivisionByZero("inverse of zero")
        return _inverse(self._n, self._c, self._d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> CycNumber:
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNumber(1, self._n)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._n == o._n:
            return self._d == o._d and self._c == o._c
        a, b = self._unify(o)
        return a._d == b._d and a._c == b._c

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        # normalized trace is invariant under change of conductor
        if self._h is None:
            if not any(self._c[1:]):
                self._h = hash(Fraction(self._c[0], self._d))
            else:
                tv = _trace_vector(self._n)
                s = sum(v * t for v, t in zip(self._c, tv))
                self._h = hash((Fraction(s, self._d * len(tv)), "cyc"))
        return self._h

    def __repr__(self) -> str:
        return f"CycNumber({format_literal(self)!r}, N={self._n})"

    def __str__(self) -> str:
        return format_literal(self)


@lru_cache(maxsize=65536)
def _inverse(n: int, c: tuple[int, ...], d: int) -> CycNumber:
    deg = len(c)
    if deg == 1:
        return CycNumber._normal(n, (d if c[0] > 0 else -d,), abs(c[0]))
    # extended Euclid over Q[x] on (b, Phi_n)
    b = [Fraction(v) for v in c]
    while b and b[-1] == 0:
        b.pop()
    m = [Fraction(v) for v in cyclotomic_poly(n)]
    r0, r1 = m, b
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, r = _fpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fpoly_sub(s0, _fpoly_mul(q, s1))
    if len(r1) != 1:
        raise AssertionError("Phi_n is irreducible, gcd must be a unit")
    inv_lead = 1 / r1[0]
    return CycNumber.from_coeffs(n, [v * inv_lead * d for v in s1])


def _fpoly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _fpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], _fpoly_trim(a)
    q = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for k in range(len(a) - 1, db - 1, -1):
        coef = a[k] / lead
        if coef:
            q[k - db] = coef
            for t in range(db + 1):
                a[k - db + t] -= coef * b[t]
    return q, _fpoly_trim(a[:db])


def _fpoly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _fpoly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _fpoly_trim([Fraction(v) for v in out]) or [Fraction(0)]


def cyc_embed(a: CycNumber, m: int) -> CycNumber:
    return a.embed(m)


def zeta(n: int, k: int = 1) -> CycNumber:
    return CycNumber.root(n, k)


def as_cyc(x, conductor: int = 1) -> CycNumber:
    if isinstance(x, CycNumber):
        if conductor % x.conductor == 0:
            return x.embed(conductor)
        return x
    return CycNumber(x, conductor)


def multiplicative_order_of_root(x: CycNumber) -> int | None:
    """Order of x if x is a root of unity of order dividing 2N, else None."""
    n = x.conductor
    m = _lcm(2, n)
    y = x.embed(m)
    for k in range(m):
        if y == CycNumber.root(m, k):
            return m // gcd(m, k) if k else 1
    return None


# ---------------------------------------------------------------------------
# scalar literal grammar


def format_literal(x: CycNumber) -> str:
    parts = []
    for k, v in enumerate(x.numerators):
        if not v:
            continue
        q = Fraction(v, x.denominator)
        num = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        parts.append(num if k == 0 else f"{num}*z^{k}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def parse_literal(text: str, conductor: int) -> CycNumber:
    """Parse `term {(+|-) term}` with term = int[/posint][*z^exp]."""
    s = text
    pos = 0
    n = len(s)

    def skip():
        nonlocal pos
        while pos < n and s[pos].isspace():
            pos += 1

    def read_int(signed: bool) -> int:
        nonlocal pos
        skip()
        start = pos
        if signed and pos < n and s[pos] in "+-":
            pos += 1
        digits = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == digits:
            raise ScalarSyntaxError(f"expected integer in {text!r}", start + 1)
        return int(s[start:pos])

    coeffs = [Fraction(0)] * conductor

    def term(sign: int):
        nonlocal pos
        skip()
        if pos < n and s[pos] == "z":
            value = Fraction(1)
        else:
            num = read_int(True)
            skip()
            den = 1
            if pos < n and s[pos] == "/":
                pos += 1
                den = read_int(False)
                if den == 0:
                    raise ScalarSyntaxError("zero denominator", pos)
            value = Fraction(num, den)
            skip()
            if not (pos < n and s[pos] == "*"):
                coeffs[0] += sign * value
                return
            pos += 1
            skip()
        if not (pos < n and s[pos] == "z"):
            raise ScalarSyntaxError(f"expected 'z^' in {text!r}", pos + 1)
        pos += 1
        skip()
        if not (pos < n and s[pos] == "^"):
            raise ScalarSyntaxError(f"expected '^' in {text!r}", pos + 1)
        pos += 1
        e = read_int(True)
        coeffs[e % conductor] += sign * value

    skip()
    if pos == n:
        raise ScalarSyntaxError("empty scalar literal", 1)
    term(1)
    while True:
        skip()
        if pos == n:
            break
        if s[pos] not in "+-":
            raise ScalarSyntaxError(f"unexpected {s[pos]!r} in {text!r}", pos + 1)
        sign = 1 if s[pos] == "+" else -1
        pos += 1
        term(sign)
    return CycNumber.from_coeffs(conductor, coeffs)


# ---------------------------------------------------------------------------
# prime specialization


@dataclass(frozen=True)
class PrimeSpecialization:
    """A prime l = 1 mod N together with an element of order N in F_l."""

    prime: int
    conductor: int
    image: int
    _powers: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        from sympy import factorint

        l, n, r = self.prime, self.conductor, self.image
        if (l - 1) % n:
            raise ValueError(f"{n} does not divide {l} - 1")
        if pow(r, n, l) != 1 or any(pow(r, n // p, l) == 1 for p in factorint(n)):
            raise ValueError(f"{r} does not have order {n} mod {l}")
        object.__setattr__(self, "_powers", tuple(pow(r, e, l) for e in range(n)))

    @classmethod
    def choose(cls, conductor: int, seed: int = 0, skip: int = 0, bits: int = 25) -> PrimeSpecialization:
        """Draw a prime = 1 mod N from a seeded generator; `skip` selects later draws.

        The default size keeps p^2 times a few thousand below 2^63 so numpy
        int64 dot products stay exact.
        """
        from sympy import isprime, primitive_root

        rng = random.Random(f"prime-specialization:{conductor}:{seed}")
        lo, hi = 2 ** (bits - 1), 2**bits - 1
        found = -1
        while True:
            k = rng.randrange(lo // conductor + 1, hi // conductor)
            ell = k * conductor + 1
            if isprime(ell):
                found += 1
                if found == skip:
                    break
        g = primitive_root(ell)
        return cls(ell, conductor, pow(g, (ell - 1) // conductor, ell))

    @classmethod
    def for_prime(cls, prime: int, conductor: int) -> PrimeSpecialization:
        """Use a caller-supplied prime; the image is the first primitive-root power."""
        from sympy import isprime, primitive_root

        if not isprime(prime):
            raise ValueError(f"{prime} is not prime")
        if (prime - 1) % conductor:
            raise ValueError(f"{conductor} does not divide {prime} - 1")
        g = primitive_root(prime)
        return cls(prime, conductor, pow(g, (prime - 1) // conductor, prime))

    def root_power(self, n: int, e: int) -> int:
        """Image of zeta_n^e; n must divide the conductor."""
        if self.conductor % n:
            raise NotDivisible(f"conductor {n} does not divide {self.conductor}")
        return self._powers[(e * (self.conductor // n)) % self.conductor]

    def map(self, a: CycNumber) -> int:
        return specialize(a, self)


def specialize(a: CycNumber, s: PrimeSpecialization) -> int:
    l = s.prime
    d = a.denominator
    if d % l == 0:
        raise BadDenominator(f"denominator {d} divisible by {l}")
    n = a.conductor
    total = 0
    for k, v in enumerate(a.numerators):
        if v:
            total += v * s.root_power(n, k)
    return total * pow(d, -1, l) % l if d != 1 else total % l
