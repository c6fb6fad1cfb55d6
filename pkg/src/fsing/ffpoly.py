"""Prime fields and sparse multivariate polynomials over them.

A :class:`Polynomial` is a dictionary from exponent tuples to coefficients in
``[1, p)``; zero coefficients are never stored.  Values are treated as
immutable once built, so they can be shared freely.
"""

from __future__ import annotations

import dataclasses
import re
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...], one exponent per ring variable

EXPONENT_LIMIT = 2**31


class ExponentOverflow(ArithmeticError):
    """An exponent left the 32-bit range during a Frobenius/bracket power."""


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Syntax error in polynomial or script text, with a character offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.reason = message
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError("characteristic must be an int")
    if not 2 <= p < 2**31:
        raise ValueError(f"characteristic {p} out of range [2, 2^31)")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


@dataclasses.dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, or an elimination order eliminating the first ``block`` variables.

    ``rank(m)`` maps a monomial to a flat int tuple with the order reversed:
    the larger monomial gets the smaller rank, so ``min(..., key=rank)`` is
    the leading monomial and a heap of ranks pops the largest term first.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs block >= 1")

    @property
    def rank(self):
        if self.kind == "grevlex":
            return _grevlex_rank
        if self.kind == "lex":
            return _lex_rank
        k = self.block

        def elim_rank(m):
            head, tail = m[:k], m[k:]
            return (-sum(head),) + head[::-1] + (-sum(tail),) + tail[::-1]
        return elim_rank

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.rank(a) < self.rank(b)

    def __str__(self) -> str:
        return f"elim({self.block})" if self.kind == "elim" else self.kind


def _grevlex_rank(m):
    return (-sum(m),) + m[::-1]


def _lex_rank(m):
    return tuple([-a for a in m])


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_elimination(k: int) -> MonomialOrder:
    return MonomialOrder("elim", k)


@dataclasses.dataclass(frozen=True)
class Ring:
    """The ambient polynomial ring F_p[names], with a default monomial order."""

    p: int
    names: tuple
    order: MonomialOrder = dataclasses.field(default=GREVLEX, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise ValueError(f"bad variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.p, self.names, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Sequence[int], c: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ValueError(f"bad exponent vector {exps}")
        c %= self.p
        return Polynomial(self, {exps: c} if c else {})

    def var(self, name) -> "Polynomial":
        i = name if isinstance(name, int) else self.names.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text: str) -> "Polynomial":
        return _PolyParser(self, text).parse()

    def __call__(self, obj) -> "Polynomial":
        if isinstance(obj, Polynomial):
            if obj.ring != self:
                raise RingMismatch("polynomial from another ring")
            return obj
        if isinstance(obj, int):
            return self.const(obj)
        if isinstance(obj, str):
            return self.parse(obj)
        raise TypeError(f"cannot convert {type(obj).__name__} to a polynomial")

    def __str__(self) -> str:
        return f"F_{self.p}[{','.join(self.names)}]"


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, int]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: Ring, terms: Iterable) -> "Polynomial":
        """Build from (monomial, coefficient) pairs, summing duplicates mod p."""
        p = ring.p
        out: dict = {}
        for m, c in terms:
            m = tuple(m)
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return cls(ring, out)

    # -- basic predicates -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(m, default=0) for m in self.terms), default=0)

    def lead(self, order: MonomialOrder | None = None):
        """(monomial, coefficient) of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = min(self.terms, key=(order or self.ring.order).rank)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.lead(order)
        if c == 1:
            return self
        return self * pow(c, -1, self.ring.p)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.ring.p
            c = other % p
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _mul_terms(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def mul_monomial(self, mono: Monomial, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {
            tuple(a + b for a, b in zip(m, mono)): v * c % p
            for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative int")
        # f^n = prod_i (f^{d_i})^{p^i} for the base-p digits d_i of n
        p = self.ring.p
        result = self.ring.one()
        i = 0
        while n:
            n, d = divmod(n, p)
            if d:
                result = result * _plain_pow(self, d).frobenius(i)
            i += 1
        return result

    def frobenius(self, e: int) -> "Polynomial":
        """``f^(p^e)``: scale every exponent by p^e; F_p coefficients are fixed."""
        if e < 0:
            raise ValueError("e must be >= 0")
        if e == 0:
            return self
        q = self.ring.p ** e
        if self.terms and self.max_exponent() * q >= EXPONENT_LIMIT:
            raise ExponentOverflow(f"exponent overflow in Frobenius power p^{e}")
        return Polynomial(self.ring, {tuple(a * q for a in m): c for m, c in self.terms.items()})

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing ---------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        rank = (order or self.ring.order).rank
        return sorted(self.terms.items(), key=lambda mc: rank(mc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, a in zip(names, m):
                if a == 1:
                    factors.append(name)
                elif a:
                    factors.append(f"{name}^{a}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self}, {self.ring})"


def _mul_terms(a: Mapping, b: Mapping, p: int) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = tuple([x + y for x, y in zip(ma, mb)])
            out[m] = (get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _plain_pow(f: Polynomial, n: int) -> Polynomial:
    result = f.ring.one()
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    return f * g


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    return f.frobenius(e)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


class _PolyParser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                 len(text) - len(text[pos:].lstrip()), text)
            start = mt.start(mt.lastindex)
            if mt.group(1):
                self.tokens.append(("num", int(mt.group(1)), start))
            elif mt.group(2):
                self.tokens.append(("id", mt.group(2), start))
            else:
                op = "^" if mt.group(3) == "**" else mt.group(3)
                self.tokens.append(("op", op, start))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial", 0, self.text)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return f

    def expr(self) -> Polynomial:
        f = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                f = f * self.factor()
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                f = f * self.factor()
            else:
                return f

    def factor(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, n, npos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", npos, self.text)
            base = base ** n
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            return self.identifier(val, pos)
        if kind == "op" and val == "(":
            f = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", p2, self.text)
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)

    def identifier(self, name: str, pos: int) -> Polynomial:
        names = self.ring.names
        if name in names:
            return self.ring.var(name)
        # juxtaposed variables such as "xy"
        out = self.ring.one()
        rest = name
        while rest:
            for cand in sorted(names, key=len, reverse=True):
                if rest.startswith(cand):
                    out = out * self.ring.var(cand)
                    rest = rest[len(cand):]
                    break
            else:
                raise ParseError(f"unknown variable {name!r}", pos, self.text)
        return out
