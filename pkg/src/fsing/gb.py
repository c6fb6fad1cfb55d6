"""Buchberger's algorithm and the ideal operations built on it.

Ideals of a quotient ring S/I are handled as ideals of S that contain I, so
one engine serves every caller.  Internally polynomials are plain
``{monomial: coeff}`` dicts; :class:`Ideal` wraps them for the public API.
"""

from __future__ import annotations

import heapq
import itertools
from typing import Iterable, Sequence

from . import config
from .ffpoly import (MonomialOrder, Polynomial, Ring, RingMismatch,
                     block_elimination)


class GroebnerBudgetExceeded(RuntimeError):
    """The S-pair budget ran out before the basis was complete."""


# -- dict-level kernel ---------------------------------------------------------

def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _disjoint(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _lead(f: dict, rank):
    return min(f, key=rank)


def _monic(f: dict, lm, p: int) -> dict:
    c = f[lm]
    if c == 1:
        return f
    inv = pow(c, -1, p)
    return {m: v * inv % p for m, v in f.items()}


def _normal_form(f: dict, basis: Sequence, rank, p: int) -> dict:
    """Fully reduce ``f`` by a list of monic (lead, tail) pairs."""
    if not f or not basis:
        return dict(f)
    f = dict(f)
    heap = [(rank(m), m) for m in f]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    rem = {}
    while heap:
        m = pop(heap)[1]
        c = f.pop(m, None)
        if c is None:
            continue
        for lm, tail in basis:
            for a, b in zip(m, lm):
                if a < b:
                    break
            else:
                q = [a - b for a, b in zip(m, lm)]
                for tm, tc in tail:
                    nm = tuple([x + y for x, y in zip(tm, q)])
                    old = f.get(nm)
                    if old is None:
                        f[nm] = (-c * tc) % p
                        push(heap, (rank(nm), nm))
                    else:
                        v = (old - c * tc) % p
                        if v:
                            f[nm] = v
                        else:
                            del f[nm]
                break
        else:
            rem[m] = c
    return rem


def _spoly(lm1, t1, lm2, t2, lcm, p: int) -> dict:
    q1 = [a - b for a, b in zip(lcm, lm1)]
    q2 = [a - b for a, b in zip(lcm, lm2)]
    out: dict = {}
    for m, c in t1:
        out[tuple([x + y for x, y in zip(m, q1)])] = c
    for m, c in t2:
        nm = tuple([x + y for x, y in zip(m, q2)])
        v = (out.get(nm, 0) - c) % p
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return out


def buchberger(polys: Iterable[dict], order: MonomialOrder, p: int,
               budget: int | None = None) -> list:
    """Reduced Groebner basis (monic dicts, leading terms descending).

    Pairs are pruned with the Gebauer-Moeller criteria (product and chain)
    and processed smallest-lcm first.
    """
    rank = order.rank
    if budget is None:
        budget = config.current().spair_budget
    leads: list = []
    tails: list = []
    active: list = []          # indices of the current (lead-minimal) basis
    pairs: list = []           # heap of (neg-rank of lcm, serial, i, j, lcm)
    serial = itertools.count()

    def basis():
        return [(leads[i], tails[i]) for i in active]

    def neg(m):
        return tuple([-x for x in rank(m)])

    def update(h: int):
        nonlocal pairs, active
        lh = leads[h]
        cand = [(i, _lcm(lh, leads[i])) for i in active]
        kept = []
        for k, (i, L) in enumerate(cand):
            if _disjoint(lh, leads[i]):
                kept.append((i, L))
                continue
            others = itertools.chain(cand[k + 1:], kept)
            if not any(_divides(L2, L) for _, L2 in others):
                kept.append((i, L))
        new_pairs = [(i, L) for i, L in kept if not _disjoint(lh, leads[i])]
        survivors = []
        for entry in pairs:
            _, _, i, j, L = entry
            if (_divides(lh, L) and _lcm(leads[i], lh) != L
                    and _lcm(lh, leads[j]) != L):
                continue
            survivors.append(entry)
        for i, L in new_pairs:
            survivors.append((neg(L), next(serial), i, h, L))
        heapq.heapify(survivors)
        pairs = survivors
        active = [i for i in active if not _divides(lh, leads[i])] + [h]

    def add(f: dict):
        lm = _lead(f, rank)
        f = _monic(f, lm, p)
        leads.append(lm)
        tails.append([(m, c) for m, c in f.items() if m != lm])
        update(len(leads) - 1)

    for f in polys:
        if not f:
            continue
        h = _normal_form(f, basis(), rank, p)
        if h:
            add(h)

    used = 0
    while pairs:
        _, _, i, j, L = heapq.heappop(pairs)
        used += 1
        if used > budget:
            raise GroebnerBudgetExceeded(
                f"S-pair budget of {budget} exhausted ({len(pairs)} pairs pending)")
        s = _spoly(leads[i], tails[i], leads[j], tails[j], L, p)
        h = _normal_form(s, basis(), rank, p)
        if h:
            add(h)

    # interreduce the lead-minimal basis
    out = []
    idx = list(active)
    for k, i in enumerate(idx):
        others = [(leads[j], tails[j]) for j in idx if j != i]
        tail = _normal_form(dict(tails[i]), others, rank, p)
        g = {leads[i]: 1}
        g.update(tail)
        out.append(g)
    out.sort(key=lambda g: rank(_lead(g, rank)))
    return out


def _divide(f: dict, g: dict, rank, p: int):
    """Division of ``f`` by a single polynomial: returns (quotient, remainder)."""
    lg = _lead(g, rank)
    inv = pow(g[lg], -1, p)
    gt = [(m, c) for m, c in g.items() if m != lg]
    f = dict(f)
    quo: dict = {}
    rem: dict = {}
    heap = [(rank(m), m) for m in f]
    heapq.heapify(heap)
    while heap:
        m = heapq.heappop(heap)[1]
        c = f.pop(m, None)
        if c is None:
            continue
        if not _divides(lg, m):
            rem[m] = c
            continue
        q = tuple([a - b for a, b in zip(m, lg)])
        cq = c * inv % p
        quo[q] = (quo.get(q, 0) + cq) % p
        for tm, tc in gt:
            nm = tuple([x + y for x, y in zip(tm, q)])
            old = f.get(nm)
            if old is None:
                f[nm] = (-cq * tc) % p
                heapq.heappush(heap, (rank(nm), nm))
            else:
                v = (old - cq * tc) % p
                if v:
                    f[nm] = v
                else:
                    del f[nm]
    return {m: c for m, c in quo.items() if c}, rem


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    """``f / g`` when g divides f in S; ValueError otherwise."""
    if f.ring != g.ring:
        raise RingMismatch("division across rings")
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = _divide(f.terms, g.terms, f.ring.order.rank, f.ring.p)
    if r:
        raise ValueError(f"{g} does not divide {f}")
    return Polynomial(f.ring, q)


# -- ideals ----------------------------------------------------------------------

class Ideal:
    """A finitely generated ideal of the ambient polynomial ring.

    The generator list is fixed at construction.  Reduced Groebner bases are
    cached per monomial order; a cache fill computes the whole basis before
    publishing it, so concurrent readers only ever see a complete basis.
    """

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, ring: Ring, generators: Iterable = ()):
        self.ring = ring
        gens = []
        seen = set()
        for g in generators:
            g = ring(g)
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = tuple(gens)
        self._gb: dict = {}

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    # -- Groebner data ------------------------------------------------------
    def groebner(self, order: MonomialOrder | None = None) -> list:
        return list(self._cached(order)[0])

    def _cached(self, order: MonomialOrder | None = None):
        order = order or self.ring.order
        entry = self._gb.get(order)
        if entry is None:
            dicts = buchberger((g.terms for g in self.generators), order, self.ring.p)
            entry = self._publish(order, [Polynomial(self.ring, d) for d in dicts])
        return entry

    def _publish(self, order: MonomialOrder, gb: list):
        rank = order.rank
        basis = []
        for g in gb:
            lm = min(g.terms, key=rank)
            basis.append((lm, [(m, c) for m, c in g.terms.items() if m != lm]))
        entry = (tuple(gb), basis)
        self._gb[order] = entry
        return entry

    def _basis(self, order: MonomialOrder | None = None):
        return self._cached(order)[1]

    def reduce(self, f, order: MonomialOrder | None = None) -> Polynomial:
        """Normal form of ``f`` modulo this ideal."""
        f = self.ring(f)
        order = order or self.ring.order
        return Polynomial(self.ring, _normal_form(f.terms, self._basis(order),
                                                  order.rank, self.ring.p))

    def __contains__(self, f) -> bool:
        return not self.reduce(f)

    def contains(self, other: "Ideal") -> bool:
        """``other ⊆ self``."""
        _same_ring(self, other)
        if self.is_unit():
            return True
        basis = self._basis()
        rank = self.ring.order.rank
        return all(not _normal_form(g.terms, basis, rank, self.ring.p)
                   for g in other.generators)

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __le__(self, other: "Ideal") -> bool:
        return other.contains(self)

    def __ge__(self, other: "Ideal") -> bool:
        return self.contains(other)

    def interreduced(self) -> "Ideal":
        """The same ideal generated by its reduced Groebner basis."""
        out = Ideal(self.ring, self.groebner())
        out._publish(self.ring.order, list(out.generators))
        return out

    def __str__(self) -> str:
        gens = self.groebner()
        if not gens:
            return "(0)"
        return "(" + ", ".join(str(g) for g in gens) + ")"

    def __repr__(self) -> str:
        return f"Ideal{tuple(str(g) for g in self.generators)}"


def _same_ring(I: Ideal, J: Ideal) -> None:
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


def groebner(I: Ideal, order: MonomialOrder | None = None) -> list:
    return I.groebner(order)


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    return f in I


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return I.contains(J) and J.contains(I)


def ideal_sum(*ideals: Ideal) -> Ideal:
    ring = ideals[0].ring
    for J in ideals[1:]:
        _same_ring(ideals[0], J)
    return Ideal(ring, itertools.chain.from_iterable(J.generators for J in ideals))


def _prune(ring: Ring, gens: list) -> list:
    """Drop duplicates (up to scalars) and, for monomials, redundant multiples."""
    seen = {}
    for g in gens:
        if g:
            seen.setdefault(g.monic(), None)
    gens = list(seen)
    monos = [g for g in gens if g.is_monomial()]
    if len(monos) > 1:
        exps = [next(iter(g.terms)) for g in monos]
        keep = set()
        for k, e in enumerate(exps):
            if not any(j != k and _divides(f, e) and (f != e or j < k)
                       for j, f in enumerate(exps)):
                keep.add(monos[k])
        gens = [g for g in gens if not g.is_monomial() or g in keep]
    return gens


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, _prune(I.ring, [f * g for f in I.generators for g in J.generators]))


def ideal_power(I: Ideal, n: int) -> Ideal:
    """``I^n`` by repeated products (n >= 0)."""
    if n < 0:
        raise ValueError("negative ideal power")
    result = Ideal.unit(I.ring)
    base = I
    while n:
        if n & 1:
            result = ideal_product(result, base)
        n >>= 1
        if n:
            base = ideal_product(base, base)
    return result


def _extend(f: Polynomial, ring: Ring, shift: int = 1, prefix=()) -> Polynomial:
    pre = tuple(prefix) or (0,) * shift
    return Polynomial(ring, {pre + m: c for m, c in f.terms.items()})


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating t from t·I + (1 - t)·J."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    if all(g.is_monomial() for g in I.generators + J.generators):
        return Ideal(ring, _prune(ring, [_monomial_lcm(f, g) for f in I.generators
                                         for g in J.generators]))
    t = "_t"
    while t in ring.names:
        t += "_"
    order = block_elimination(1)
    big = Ring(ring.p, (t,) + ring.names, order)
    tvar = big.var(0)
    gens = [tvar * _extend(f, big) for f in I.generators]
    gens += [(big.one() - tvar) * _extend(g, big) for g in J.generators]
    gb = buchberger((g.terms for g in gens), order, ring.p)
    kept = [Polynomial(ring, {m[1:]: c for m, c in g.items()})
            for g in gb if all(m[0] == 0 for m in g)]
    return Ideal(ring, kept)


def _monomial_lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    (a,), (b,) = f.terms, g.terms
    return f.ring.monomial(_lcm(a, b))


def ideal_colon(I: Ideal, J: Ideal | Polynomial) -> Ideal:
    """``I : J = {f : f·J ⊆ I}``, intersecting the colons by J's generators."""
    if isinstance(J, Polynomial):
        return _colon_poly(I, J)
    _same_ring(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    result = None
    for g in J.generators:
        K = _colon_poly(I, g)
        result = K if result is None else ideal_intersect(result, K)
        if result.is_zero():
            break
    return result


def _colon_poly(I: Ideal, g: Polynomial) -> Ideal:
    ring = I.ring
    if g.ring != ring:
        raise RingMismatch("colon across rings")
    if not g:
        raise ValueError("colon by zero")
    if g in I:
        return Ideal.unit(ring)
    if I.is_zero():
        return Ideal(ring)
    if g.is_constant():
        return I
    if g.is_monomial() and all(h.is_monomial() for h in I.generators):
        (b,) = g.terms
        return Ideal(ring, _prune(ring, [
            ring.monomial([max(x - y, 0) for x, y in zip(a, b)])
            for h in I.generators for a in h.terms]))
    inter = ideal_intersect(I, Ideal(ring, [g]))
    return Ideal(ring, [divide_exact(h, g) for h in inter.generators])


def bracket_power(I: Ideal, e: int) -> Ideal:
    """``I^[p^e]``: the ideal generated by p^e-th powers of I's generators.

    The Frobenius image of a reduced Groebner basis is again one, so the
    bracket power inherits a basis instead of recomputing it.
    """
    if e < 1:
        raise ValueError("bracket power needs e >= 1")
    out = Ideal(I.ring, [g.frobenius(e) for g in I.generators])
    I.groebner()
    for order, (gb, _) in list(I._gb.items()):
        out._publish(order, [g.frobenius(e) for g in gb])
    return out
