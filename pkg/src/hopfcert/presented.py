"""Presented Hopf algebras: a small DSL, string rewriting and realization as structure constants."""
from __future__ import annotations

import random
import re
import warnings
from dataclasses import dataclass, field

from .hopf_core import HopfAlgebra, certify, solve_antipode
from .report import Report
from .scalars import CycNumber, zeta
from .tensors import StructureTensor

Word = tuple  # tuple of generator indices
Lin = dict    # Word -> CycNumber


class PresentationError(ValueError):
    pass


class DSLSyntaxError(PresentationError, SyntaxError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownSymbol(PresentationError):
    pass


class ConductorMismatch(PresentationError):
    pass


class OrderViolation(PresentationError):
    pass


class StepBoundExceeded(RuntimeError):
    pass


class EscapesBasis(PresentationError):
    pass


class NotConfluent(PresentationError):
    def __init__(self, report: Report):
        self.report = report
        super().__init__(f"{len(report.failed())} unresolved overlaps")


# ---------------------------------------------------------------------------
# expression values: linear combinations keyed by tuples of words (one word per tensor leg)


@dataclass
class _Val:
    degree: int  # 0 = scalar
    terms: dict

    @classmethod
    def scalar(cls, c) -> _Val:
        return cls(0, {(): c} if c else {})

    def promote(self, degree: int) -> _Val:
        if self.degree == degree:
            return self
        if self.degree != 0:
            raise PresentationError(f"cannot combine tensor degree {self.degree} with degree {degree}")
        c = self.terms.get((), 0)
        return _Val(degree, {((),) * degree: c} if c else {})

    def add(self, other: _Val, sign: int = 1) -> _Val:
        deg = max(self.degree, other.degree)
        a, b = self.promote(deg), other.promote(deg)
        out = dict(a.terms)
        for k, c in b.terms.items():
            v = out.get(k, 0) + c * sign
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return _Val(deg, out)

    def mul(self, other: _Val) -> _Val:
        deg = max(self.degree, other.degree)
        a, b = self.promote(deg), other.promote(deg)
        out: dict = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return _Val(deg, out)

    def tensor(self, other: _Val) -> _Val:
        a = self.promote(max(self.degree, 1))
        b = other.promote(max(other.degree, 1))
        out = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                out[ka + kb] = out.get(ka + kb, 0) + ca * cb
        return _Val(a.degree + b.degree, {k: v for k, v in out.items() if v})


_TOKEN = re.compile(r"\s*(?:(\(x\))|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _ExprParser:
    """Recursive descent over: sum := ['+'|'-'] tprod {('+'|'-') tprod}; tprod := prod {'(x)' prod};
    prod := power {('*'|'/') power}; power := atom ['^' exponent]; atom := int | name | '(' sum ')'."""

    def __init__(self, text: str, env: _Env, line: int, offset: int):
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.end() == pos or not text[pos:].strip():
                break
            kind = ("tensor", "int", "name", "op")[next(i for i in range(4) if m.group(i + 1) is not None)]
            self.toks.append((kind, m.group(m.lastindex), offset + m.start(m.lastindex) + 1))
            pos = m.end()
        self.i = 0
        self.env, self.line, self.text = env, line, text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text) + 1)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise DSLSyntaxError(msg, self.line, tok[2])

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            self.error(f"expected {value!r}", t)

    def parse(self) -> _Val:
        if not self.toks:
            self.error("empty expression")
        v = self.sum()
        if self.peek()[0] is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def sum(self) -> _Val:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        v = _Val.scalar(0).add(self.tprod(), sign)
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            v = v.add(self.tprod(), sign)
        return v

    def tprod(self) -> _Val:
        v = self.prod()
        while self.peek()[0] == "tensor":
            self.take()
            v = v.tensor(self.prod())
        return v

    def prod(self) -> _Val:
        v = self.power()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op[1] == "/":
                if rhs.degree != 0 or not rhs.terms:
                    self.error("division by a non-scalar or zero", op)
                rhs = _Val.scalar(1 / rhs.terms[()])
            v = v.mul(rhs)
        return v

    def power(self) -> _Val:
        v = self.atom()
        if self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] == "int":
                e = int(t[1])
            elif t[0] == "name":
                e = self.env.integer(t[1], self.line, t[2])
            elif t[1] == "(":
                inner = self.sum()
                self.expect(")")
                c = inner.terms.get((), CycNumber(0)) if inner.degree == 0 else None
                if c is None or not c.is_rational() or c.to_fraction().denominator != 1:
                    self.error("exponent must be an integer", t)
                e = int(c.to_fraction())
            else:
                self.error("exponent must be a non-negative integer", t)
            if e < 0:
                self.error("negative exponents are not supported", t)
            out = _Val.scalar(1)
            for _ in range(e):
                out = out.mul(v)
            v = out
        return v

    def atom(self) -> _Val:
        t = self.take()
        kind, val, col = t
        if kind == "int":
            return _Val.scalar(CycNumber(int(val)))
        if kind == "name":
            return self.env.lookup(val, self.line, col)
        if val == "(":
            v = self.sum()
            self.expect(")")
            return v
        self.error("expected a number, symbol or '('" if kind else "unexpected end of expression", t)


@dataclass
class _Env:
    conductor: int
    params: dict
    gens: list

    def lookup(self, name: str, line: int, col: int) -> _Val:
        if name in self.gens:
            return _Val(1, {((self.gens.index(name),),): CycNumber(1)})
        if name in self.params:
            v = self.params[name]
            return _Val.scalar(v if isinstance(v, CycNumber) else CycNumber(v))
        if name == "z":
            return _Val.scalar(zeta(self.conductor))
        m = re.fullmatch(r"zeta_(\d+)", name)
        if m:
            M = int(m.group(1))
            if M == 0 or self.conductor % M:
                raise ConductorMismatch(f"line {line}: zeta_{M} is not available at conductor {self.conductor}")
            return _Val.scalar(zeta(M).embed(self.conductor))
        raise UnknownSymbol(f"line {line}, column {col}: unknown symbol {name!r}")

    def integer(self, name: str, line: int, col: int) -> int:
        v = self.params.get(name)
        if isinstance(v, int):
            return v
        if isinstance(v, CycNumber) and v.is_rational() and v.to_fraction().denominator == 1:
            return int(v.to_fraction())
        raise UnknownSymbol(f"line {line}, column {col}: {name!r} is not an integer parameter")


# ---------------------------------------------------------------------------
# presentation


@dataclass
class Presentation:
    name: str
    conductor: int
    gens: list[str]
    params: dict
    rules: dict            # lhs word -> Lin
    basis: list[tuple[int, int]]  # (generator index, exponent bound) in declared order
    delta: dict = field(default_factory=dict)     # gen index -> {(w1, w2): c}
    eps: dict = field(default_factory=dict)       # gen index -> CycNumber
    antipode: dict = field(default_factory=dict)  # gen index -> Lin
    source_lines: dict = field(default_factory=dict)

    def rewrite_system(self, step_bound: int = 10 ** 6) -> RewriteSystem:
        return RewriteSystem(self.rules, len(self.gens), step_bound)

    def word_label(self, w: Word) -> str:
        return _word_label(self, w)

    @property
    def dim(self) -> int:
        d = 1
        for _, r in self.basis:
            d *= r
        return d


def _word_label(P: Presentation, w: Word) -> str:
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(f"{P.gens[w[i]]}^{j - i}")
        i = j
    return "*".join(parts) or "1"


def deglex_less(a: Word, b: Word) -> bool:
    return (len(a), a) < (len(b), b)


_SECTIONS = ("relations", "coalgebra", "antipode")


def parse_presentation(text: str) -> Presentation:
    """Parse the presentation DSL (see the README for the grammar)."""
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            lines.append((n, body))
    name, conductor, gens, param_src, basis_src = None, None, None, [], None
    section = None
    blocks = {s: [] for s in _SECTIONS}
    for n, body in lines:
        s = body.strip()
        head = s.split(None, 1)[0].rstrip(":")
        if head == "algebra":
            m = re.fullmatch(r"algebra\s+([A-Za-z_][\w]*)\s*(?:\((.*)\))?", s)
            if not m:
                raise DSLSyntaxError("malformed algebra header", n, 1)
            name = m.group(1)
            if m.group(2):
                col = body.index("(") + 2
                for part in _split_top(m.group(2)):
                    if "=" not in part:
                        raise DSLSyntaxError("parameter needs the form name=value", n, col)
                    k, v = part.split("=", 1)
                    param_src.append((k.strip(), v, n, col + len(k) + 1))
                    col += len(part) + 1
            section = None
        elif head == "conductor":
            m = re.fullmatch(r"conductor\s+(\d+)", s)
            if not m or int(m.group(1)) < 1:
                raise DSLSyntaxError("conductor must be a positive integer", n, 1)
            conductor = int(m.group(1))
            section = None
        elif head == "gens":
            names = [g.strip() for g in s[4:].split(",")]
            if not all(re.fullmatch(r"[A-Za-z_]\w*", g) for g in names):
                raise DSLSyntaxError("generators must be identifiers separated by commas", n, 5)
            if len(set(names)) != len(names):
                raise DSLSyntaxError("repeated generator", n, 5)
            gens = names
            section = None
        elif head == "basis":
            basis_src = (n, body)
            section = None
        elif head in _SECTIONS and s.startswith(head + ":"):
            section = head
            rest = s[len(head) + 1:].strip()
            if rest:
                blocks[section].append((n, body[body.index(":") + 1:]))
        elif section is not None:
            blocks[section].append((n, body))
        else:
            raise DSLSyntaxError(f"unexpected line {s!r}", n, 1)
    if name is None:
        raise DSLSyntaxError("missing 'algebra NAME(...)' header", 1, 1)
    if gens is None:
        raise DSLSyntaxError("missing 'gens' line", 1, 1)
    conductor = conductor or 1
    env = _Env(conductor, {}, [])
    for k, v, n, col in param_src:
        if not re.fullmatch(r"[A-Za-z_]\w*", k) or k in gens or k == "z":
            raise DSLSyntaxError(f"bad parameter name {k!r}", n, col)
        val = _ExprParser(v, env, n, col).parse()
        if val.degree != 0:
            raise DSLSyntaxError(f"parameter {k} must be a scalar", n, col)
        c = val.terms.get((), CycNumber(0))
        if c.is_rational() and c.to_fraction().denominator == 1:
            env.params[k] = int(c.to_fraction())
        else:
            env.params[k] = c
    env.gens = list(gens)
    P = Presentation(name, conductor, list(gens), dict(env.params), {}, [])

    def expr(n, body, start=0):
        return _ExprParser(body, env, n, start)

    for n, body in blocks["relations"]:
        if "=" not in body:
            raise DSLSyntaxError("relation needs 'word = expression'", n, len(body) + 1)
        lhs_s, rhs_s = body.split("=", 1)
        if not rhs_s.strip():
            raise DSLSyntaxError("missing right-hand side", n, len(body) + 1)
        lhs = expr(n, lhs_s).parse()
        rhs = expr(n, rhs_s, len(lhs_s) + 1).parse()
        if lhs.degree != 1 or len(lhs.terms) != 1:
            raise DSLSyntaxError("left-hand side must be a single word", n, 1)
        (key, c), = lhs.terms.items()
        w = key[0]
        if not w or c != 1:
            raise DSLSyntaxError("left-hand side must be a nonempty word with coefficient 1", n, 1)
        out = {k[0]: v for k, v in rhs.promote(1).terms.items()} if rhs.degree <= 1 else None
        if out is None:
            raise DSLSyntaxError("right-hand side must not contain (x)", n, len(lhs_s) + 2)
        if w in P.rules:
            raise DSLSyntaxError("duplicate rule left-hand side", n, 1)
        bad = [u for u in out if not deglex_less(u, w)]
        if bad:
            raise OrderViolation(f"line {n}: rule {_word_label(P, w)} -> ... does not decrease the "
                                 f"degree-lexicographic order (offending word {_word_label(P, bad[0])})")
        P.rules[w] = out
        P.source_lines[w] = n
    if basis_src is None:
        raise DSLSyntaxError("missing 'basis:' line", 1, 1)
    n, body = basis_src
    rest = body[body.index(":") + 1:]
    col = body.index(":") + 2
    for part in rest.split("*"):
        m = re.fullmatch(r"\s*([A-Za-z_]\w*)\^\[(\w+)\.\.(\w+)\)\s*", part)
        if not m:
            raise DSLSyntaxError("basis factor must look like g^[0..n)", n, col)
        g = m.group(1)
        if g not in gens:
            raise UnknownSymbol(f"line {n}, column {col}: unknown generator {g!r}")
        lo = int(m.group(2)) if m.group(2).isdigit() else env.integer(m.group(2), n, col)
        hi = int(m.group(3)) if m.group(3).isdigit() else env.integer(m.group(3), n, col)
        if lo != 0 or hi < 1:
            raise DSLSyntaxError("exponent ranges must have the form [0..r) with r >= 1", n, col)
        P.basis.append((gens.index(g), hi))
        col += len(part) + 1
    if len({g for g, _ in P.basis}) != len(P.basis):
        raise DSLSyntaxError("generator repeated in basis", n, 1)
    for n, body in blocks["coalgebra"]:
        m = re.fullmatch(r"\s*(delta|eps)\s+([A-Za-z_]\w*)\s*=(.*)", body)
        if not m:
            raise DSLSyntaxError("expected 'delta g = ...' or 'eps g = ...'", n, 1)
        kind, g, src = m.groups()
        if g not in gens:
            raise UnknownSymbol(f"line {n}: unknown generator {g!r}")
        v = expr(n, src, m.start(3)).parse()
        if kind == "delta":
            if v.degree not in (0, 2):
                raise DSLSyntaxError("delta must be a tensor expression using (x)", n, m.start(3) + 1)
            P.delta[gens.index(g)] = v.promote(2).terms
        else:
            if v.degree != 0:
                raise DSLSyntaxError("eps must be a scalar", n, m.start(3) + 1)
            P.eps[gens.index(g)] = v.terms.get((), CycNumber(0))
    for n, body in blocks["antipode"]:
        m = re.fullmatch(r"\s*S\s+([A-Za-z_]\w*)\s*=(.*)", body)
        if not m:
            raise DSLSyntaxError("expected 'S g = ...'", n, 1)
        g, src = m.groups()
        if g not in gens:
            raise UnknownSymbol(f"line {n}: unknown generator {g!r}")
        v = expr(n, src, m.start(2)).parse()
        if v.degree > 1:
            raise DSLSyntaxError("antipode image must not contain (x)", n, m.start(2) + 1)
        P.antipode[gens.index(g)] = {k[0]: c for k, c in v.promote(1).terms.items()}
    return P


def _split_top(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    if cur.strip():
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# rewriting


def _lin_add(target: dict, w, c) -> None:
    v = target.get(w, 0) + c
    if v:
        target[w] = v
    else:
        target.pop(w, None)


class RewriteSystem:
    def __init__(self, rules: dict, ngens: int, step_bound: int = 10 ** 6):
        self.rules = {tuple(k): dict(v) for k, v in rules.items()}
        self.ngens = ngens
        self.step_bound = step_bound
        self.lengths = sorted({len(k) for k in self.rules})
        self._cache: dict = {}

    def redexes(self, w: Word):
        for p in range(len(w)):
            for L in self.lengths:
                if p + L <= len(w) and w[p:p + L] in self.rules:
                    yield p, w[p:p + L]

    def first_redex(self, w: Word):
        return next(self.redexes(w), None)

    def apply(self, w: Word, p: int, lhs: Word) -> dict:
        pre, post = w[:p], w[p + len(lhs):]
        return {pre + u + post: c for u, c in self.rules[lhs].items()}

    def is_normal(self, w: Word) -> bool:
        return self.first_redex(w) is None

    def normal_word(self, w: Word) -> dict:
        """Leftmost reduction of a single word, memoized on words."""
        cache = self._cache
        if w in cache:
            return cache[w]
        stack = [w]
        steps = 0
        while stack:
            top = stack[-1]
            if top in cache:
                stack.pop()
                continue
            red = self.first_redex(top)
            if red is None:
                cache[top] = {top: CycNumber(1)}
                stack.pop()
                continue
            succ = self.apply(top, *red)
            missing = [s for s in succ if s not in cache]
            if missing:
                steps += 1
                if steps > self.step_bound or len(stack) > self.step_bound:
                    raise StepBoundExceeded(f"more than {self.step_bound} reductions")
                stack.extend(missing)
                continue
            out: dict = {}
            for s, c in succ.items():
                for u, d in cache[s].items():
                    _lin_add(out, u, c * d)
            cache[top] = out
            stack.pop()
        return cache[w]

    def normal_form(self, expr: dict) -> dict:
        out: dict = {}
        for w, c in expr.items():
            for u, d in self.normal_word(tuple(w)).items():
                _lin_add(out, u, c * d)
        return out

    def reduce_random(self, expr: dict, rng: random.Random) -> dict:
        """Reduce by choosing a random word and a random redex at every step (no memoization)."""
        cur = {tuple(w): c for w, c in expr.items() if c}
        steps = 0
        while True:
            reducible = sorted(w for w in cur if not self.is_normal(w))
            if not reducible:
                return cur
            steps += 1
            if steps > self.step_bound:
                raise StepBoundExceeded(f"more than {self.step_bound} reductions")
            w = rng.choice(reducible)
            p, lhs = rng.choice(list(self.redexes(w)))
            c = cur.pop(w)
            for u, d in self.apply(w, p, lhs).items():
                _lin_add(cur, u, c * d)


def normal_form(R: RewriteSystem, expr) -> dict:
    if isinstance(expr, tuple):
        expr = {expr: CycNumber(1)}
    return R.normal_form(expr)


@dataclass
class Overlap:
    word: Word
    rule_a: Word
    rule_b: Word
    form_a: dict
    form_b: dict

    @property
    def resolved(self) -> bool:
        return self.form_a == self.form_b


def overlaps(R: RewriteSystem):
    """All ambiguities (word, (pos_a, lhs_a), (pos_b, lhs_b)) between rule left-hand sides."""
    lhss = sorted(R.rules, key=lambda w: (len(w), w))
    for a in lhss:
        for b in lhss:
            # proper overlap: suffix of a equals prefix of b
            for k in range(1, min(len(a), len(b))):
                if a[len(a) - k:] == b[:k]:
                    yield a + b[k:], (0, a), (len(a) - k, b)
            # inclusion: b inside a
            if a != b and len(b) <= len(a):
                for p in range(len(a) - len(b) + 1):
                    if a[p:p + len(b)] == b:
                        yield a, (0, a), (p, b)


def check_confluence(R: RewriteSystem, labeler=None) -> Report:
    """Reduce every overlap both ways; a failed check records the two distinct normal forms."""
    rep = Report("confluence")
    lab = labeler or (lambda w: "*".join(map(str, w)) or "1")
    total = 0
    for word, (pa, a), (pb, b) in overlaps(R):
        total += 1
        fa = R.normal_form(R.apply(word, pa, a))
        fb = R.normal_form(R.apply(word, pb, b))
        if fa != fb:
            rep.add(f"overlap {lab(word)} ({lab(a)} vs {lab(b)})", False,
                    witnesses=[_lin_str(fa, lab), _lin_str(fb, lab)], method="reduce both ways")
    rep.info["overlaps"] = total
    rep.info["unresolved"] = len(rep.failed())
    if not rep.failed():
        rep.add("all overlaps resolve", True, method=f"{total} overlaps reduced both ways")
    return rep


def _lin_str(x: dict, lab) -> str:
    if not x:
        return "0"
    return " + ".join(f"({c})*{lab(w)}" for w, c in sorted(x.items(), key=lambda t: (len(t[0]), t[0])))


# ---------------------------------------------------------------------------
# realization


def basis_words(P: Presentation) -> list[Word]:
    words = [()]
    for g, r in P.basis:
        words = [w + (g,) * e for w in words for e in range(r)]
    return words


def realize_presentation(P: Presentation, certify_mode="exact", step_bound: int = 10 ** 6) -> HopfAlgebra:
    R = P.rewrite_system(step_bound)
    conf = check_confluence(R, P.word_label)
    if not conf.passed:
        raise NotConfluent(conf)
    words = basis_words(P)
    d = len(words)
    if d > 5000:
        raise PresentationError(f"declared basis has {d} elements; realizations are limited to 5000")
    index = {w: i for i, w in enumerate(words)}
    for w in words:
        if not R.is_normal(w):
            raise EscapesBasis(f"declared basis word {P.word_label(w)} is reducible")

    def coords(lin: dict) -> dict:
        out = {}
        for w, c in R.normal_form(lin).items():
            if w not in index:
                raise EscapesBasis(f"normal word {P.word_label(w)} is outside the declared basis")
            out[index[w]] = c
        return out

    # right multiplication by each generator on the basis, then products by walking the letters
    right = [[coords({w + (g,): CycNumber(1)}) for w in words] for g in range(len(P.gens))]
    mult = []
    for i in range(d):
        for j, wj in enumerate(words):
            vec = {i: CycNumber(1)}
            for g in wj:
                nxt: dict = {}
                for k, c in vec.items():
                    for l, e in right[g][k].items():
                        _lin_add(nxt, l, c * e)
                vec = nxt
            mult.extend((i, j, k, c) for k, c in sorted(vec.items()))
    mtab: dict = {}
    for i, j, k, c in mult:
        mtab.setdefault((i, j), []).append((k, c))

    def mul_vec(x: dict, y: dict) -> dict:
        out: dict = {}
        for a, c in x.items():
            for b, e in y.items():
                for k, f in mtab.get((a, b), ()):
                    _lin_add(out, k, c * e * f)
        return out

    def mul_vec2(x: dict, y: dict) -> dict:
        out: dict = {}
        for (a1, a2), c in x.items():
            for (b1, b2), e in y.items():
                for k1, f1 in mtab.get((a1, b1), ()):
                    for k2, f2 in mtab.get((a2, b2), ()):
                        _lin_add(out, (k1, k2), c * e * f1 * f2)
        return out

    gens_used = {g for w in words for g in w}
    missing = [P.gens[g] for g in sorted(gens_used) if g not in P.delta or g not in P.eps]
    if missing:
        raise PresentationError(f"coalgebra data missing for generators {missing}")
    gdelta = {}
    for g, terms in P.delta.items():
        acc: dict = {}
        for (w1, w2), c in terms.items():
            l1, l2 = coords({w1: CycNumber(1)}), coords({w2: CycNumber(1)})
            for a, x in l1.items():
                for b, y in l2.items():
                    _lin_add(acc, (a, b), c * x * y)
        gdelta[g] = acc
    comult = []
    counit = []
    dcache = {(): {(0, 0): CycNumber(1)}} if words[0] == () else {}
    if () not in dcache:
        raise EscapesBasis("the empty word must be the first basis element")
    for i, w in enumerate(words):
        if w not in dcache:
            dcache[w] = mul_vec2(dcache[w[:-1]] if w[:-1] in dcache else _delta_word(w[:-1], gdelta, mul_vec2),
                                 gdelta[w[-1]])
        comult.extend((i, a, b, c) for (a, b), c in sorted(dcache[w].items()))
        e = CycNumber(1)
        for g in w:
            e = e * P.eps[g]
        counit.append(e)
    labels = [P.word_label(w) for w in words]
    H = HopfAlgebra.from_entries(d, P.conductor, labels, mult, {0: 1}, comult, counit, None, name=P.name)
    anti_entries = None
    if all(g in P.antipode for g in gens_used):
        simg = {g: coords(lin) for g, lin in P.antipode.items()}
        anti_entries = []
        for i, w in enumerate(words):
            vec = {0: CycNumber(1)}
            for g in w:  # S(g1...gk) = S(gk)...S(g1)
                vec = mul_vec(simg[g], vec)
            anti_entries.extend((i, k, c) for k, c in sorted(vec.items()))
        H.antipode = StructureTensor.from_entries(d, anti_entries, H.table)
    if anti_entries is None or d <= 100:
        solved = solve_antipode(H)
        if anti_entries is None:
            H.antipode = solved
        elif not solved.same_as(H.antipode):
            warnings.warn("declared antipode disagrees with the solved one; using the solved antipode")
            H.antipode = solved
    for i, w in enumerate(words):
        if w and all(P.delta.get(g) == {((g,), (g,)): 1} for g in w) and counit[i] == 1:
            H.add_grouplike(labels[i], H.basis(i))
    H.metadata.update({"presentation": P.name, "params": dict(P.params), "confluence": conf,
                       "generators": [labels[index[(g,)]] for g in range(len(P.gens)) if (g,) in index]})
    if certify_mode:
        certify(H, certify_mode)
    return H


def _delta_word(w, gdelta, mul2):
    acc = {(0, 0): CycNumber(1)}
    for g in w:
        acc = mul2(acc, gdelta[g])
    return acc


# ---------------------------------------------------------------------------
# corpus


def corpus_path(name: str):
    from importlib.resources import files
    return files("hopfcert") / "corpus" / name


def load_corpus(name: str, **overrides) -> Presentation:
    """Parse a shipped presentation; keyword overrides replace header parameter values textually."""
    text = corpus_path(name if name.endswith(".halg") else name + ".halg").read_text()
    if overrides:
        text = _override_params(text, overrides)
    return parse_presentation(text)


def _override_params(text: str, overrides: dict) -> str:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("algebra") and "(" in s:
            head, inner = s.split("(", 1)
            inner = inner.rsplit(")", 1)[0]
            parts = []
            for part in _split_top(inner):
                k, v = part.split("=", 1)
                k = k.strip()
                parts.append(f"{k}={overrides.get(k, v.strip())}")
            line = f"{head}({', '.join(parts)})"
        elif s.startswith("conductor") and "conductor" in overrides:
            line = f"conductor {overrides['conductor']}"
        out.append(line)
    return "\n".join(out) + "\n"


def taft_presentation(n: int, q_power: int = 1) -> Presentation:
    """Taft(n) from the shipped corpus with q = zeta_n^q_power."""
    return load_corpus("taft", n=n, q=f"z^{q_power}", conductor=n)
