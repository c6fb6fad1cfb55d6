"""Frobenius machinery for quotients R = S/I of S = F_p[x_1..x_n].

S is free over S^{p^e} on the monomials with all exponents below p^e; the
trace ``Tr^e`` used throughout sends the top basis monomial
``x^(p^e - 1, ..., p^e - 1)`` to 1 and every other basis monomial to 0.  A
polynomial ``u`` with ``u·I ⊆ I^[p^e]`` then represents the R-linear map
``F^e_* R -> R``, ``r ↦ Tr^e(u·r)``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from . import config
from .ffpoly import Polynomial, Ring
from .gb import Ideal, bracket_power, ideal_colon


class FrobeniusDegreeCap(ValueError):
    """A Frobenius degree beyond the configured ``max_frobenius_degree``."""


class MinimalPrimesUnavailable(ValueError):
    """R° cannot be decided: ring is not a domain and no minimal primes were given."""


FLAGS = frozenset({"reduced", "domain", "normal"})


class RingPresentation:
    """R = F_p[names] / I together with the user's (unchecked) assertions.

    ``flags`` is a subset of {"reduced", "domain", "normal"}; ``minimal_primes``
    optionally lists the minimal primes of R as ideals of S.  The polynomial
    ring itself (I = 0) is treated as a normal domain.
    """

    def __init__(self, p: int, names: Sequence[str], relations: Iterable = (),
                 flags: Iterable[str] = (), minimal_primes: Iterable | None = None):
        self.S = Ring(p, tuple(names))
        self.I = Ideal(self.S, relations)
        flags = frozenset(flags)
        unknown = flags - FLAGS
        if unknown:
            raise ValueError(f"unknown ring flags {sorted(unknown)}")
        self.flags = flags
        if self.I.is_unit():
            raise ValueError("the defining ideal is the unit ideal")
        self.minimal_primes = None
        if minimal_primes is not None:
            primes = []
            for P in minimal_primes:
                P = P if isinstance(P, Ideal) else Ideal(self.S, P)
                primes.append(P)
            self.minimal_primes = tuple(primes)
        self._cache: dict = {}

    @classmethod
    def polynomial_ring(cls, p: int, names: Sequence[str]) -> "RingPresentation":
        return cls(p, names)

    @property
    def p(self) -> int:
        return self.S.p

    @property
    def names(self) -> tuple:
        return self.S.names

    @property
    def is_polynomial_ring(self) -> bool:
        return self.I.is_zero()

    @property
    def is_domain(self) -> bool:
        return self.is_polynomial_ring or "domain" in self.flags

    @property
    def is_normal_domain(self) -> bool:
        return self.is_polynomial_ring or {"domain", "normal"} <= self.flags

    def poly(self, obj) -> Polynomial:
        return self.S(obj)

    def ideal(self, gens: Iterable = ()) -> Ideal:
        """The lift J + I of the ideal of R generated by ``gens``."""
        return Ideal(self.S, itertools.chain(self.I.generators, (self.S(g) for g in gens)))

    def lift(self, J: Ideal) -> Ideal:
        return self.ideal(J.generators)

    def unit_ideal(self) -> Ideal:
        return Ideal.unit(self.S)

    def reduce(self, f) -> Polynomial:
        return self.I.reduce(f)

    def is_zero(self, f) -> bool:
        return f in self.I

    def bracket(self, e: int) -> Ideal:
        """``I^[p^e]`` (``I`` itself for e = 0), cached."""
        if e == 0:
            return self.I
        key = ("bracket", e)
        if key not in self._cache:
            self._cache[key] = bracket_power(self.I, e)
        return self._cache[key]

    def in_R_circ(self, f) -> bool:
        """Whether f avoids every minimal prime of R."""
        f = self.S(f)
        if self.is_domain:
            return f not in self.I
        if self.minimal_primes is None:
            raise MinimalPrimesUnavailable(
                "ring is not flagged as a domain and no minimal primes were supplied")
        return all(f not in P for P in self.minimal_primes)

    def dimension(self) -> int:
        """Krull dimension of R from the lead-term ideal of I."""
        if "dim" not in self._cache:
            n = self.S.nvars
            leads = [g.lead()[0] for g in self.I.groebner()]
            supports = [frozenset(i for i, a in enumerate(m) if a) for m in leads]
            best = 0
            for r in range(n, -1, -1):
                for U in itertools.combinations(range(n), r):
                    U = frozenset(U)
                    if not any(s <= U for s in supports):
                        best = r
                        break
                else:
                    continue
                break
            self._cache["dim"] = best
        return self._cache["dim"]

    def codimension(self) -> int:
        return self.S.nvars - self.dimension()

    def jacobian_minors(self) -> Iterable[Polynomial]:
        """h×h minors of the Jacobian of I's generators, h = codim I (lazy)."""
        h = self.codimension()
        if h == 0:
            yield self.S.one()
            return
        gens = list(self.I.generators)
        jac = [[partial(g, j) for j in range(self.S.nvars)] for g in gens]
        for rows in itertools.combinations(range(len(gens)), h):
            for cols in itertools.combinations(range(self.S.nvars), h):
                d = determinant([[jac[r][c] for c in cols] for r in rows], self.S)
                if d:
                    yield d

    def __repr__(self) -> str:
        rel = ", ".join(str(g) for g in self.I.generators)
        flags = f" flags={','.join(sorted(self.flags))}" if self.flags else ""
        return f"RingPresentation({self.S} / ({rel}){flags})"


def partial(f: Polynomial, i: int) -> Polynomial:
    p = f.ring.p
    out = {}
    for m, c in f.terms.items():
        a = m[i]
        v = c * a % p
        if v:
            out[m[:i] + (a - 1,) + m[i + 1:]] = v
    return Polynomial(f.ring, out)


def determinant(rows: list, ring: Ring) -> Polynomial:
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * determinant(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


# -- p^e-basis decomposition and roots ----------------------------------------

class PeDecomposition(dict):
    """``{basis monomial r: g_r}`` with ``f = Σ_r g_r^(p^e) · x^r``."""

    def __init__(self, ring: Ring, e: int, components=()):
        super().__init__(components)
        self.ring = ring
        self.e = e

    def reconstruct(self) -> Polynomial:
        total = self.ring.zero()
        for r, g in self.items():
            total = total + g.frobenius(self.e).mul_monomial(r)
        return total


def pe_decompose(f: Polynomial, e: int) -> PeDecomposition:
    if e < 1:
        raise ValueError("pe_decompose needs e >= 1")
    q = f.ring.p ** e
    comps: dict = {}
    for m, c in f.terms.items():
        r = tuple(a % q for a in m)
        comps.setdefault(r, {})[tuple(a // q for a in m)] = c
    return PeDecomposition(f.ring, e, {r: Polynomial(f.ring, d) for r, d in comps.items()})


def root_components(f: Polynomial, e: int) -> list:
    return list(pe_decompose(f, e).values())


def frobenius_root(J: Ideal, e: int) -> Ideal:
    """``J^[1/p^e]``: the smallest K with J ⊆ K^[p^e]."""
    if e == 0:
        return J
    gens = []
    for g in J.generators:
        gens.extend(root_components(g, e))
    return Ideal(J.ring, gens)


def trace(f: Polynomial, e: int) -> Polynomial:
    """``Tr^e(f)``: the component of f at the top basis monomial."""
    q = f.ring.p ** e
    top = (q - 1,) * f.ring.nvars
    return pe_decompose(f, e).get(top, f.ring.zero())


# -- Fedder and Hom ----------------------------------------------------------

def check_frobenius_degree(e: int) -> None:
    cap = config.current().max_frobenius_degree
    if e > cap:
        raise FrobeniusDegreeCap(f"Frobenius degree {e} exceeds the cap {cap}")


def hom_colon(R: RingPresentation, e: int) -> Ideal:
    """``(I^[p^e] : I)`` in S, cached on the ring."""
    key = ("colon", e)
    if key not in R._cache:
        check_frobenius_degree(e)
        S, q = R.S, R.p ** e
        gb = R.I.groebner()
        if not gb:
            colon = Ideal.unit(S)
        elif len(gb) == 1:
            f = gb[0]
            colon = Ideal(S, [f ** (q - 1)])
        else:
            colon = ideal_colon(R.bracket(e), R.I)
        R._cache[key] = colon
    return R._cache[key]


def fedder_is_fpure(R: RingPresentation, at) -> bool:
    """Fedder's criterion at a maximal ideal: (I^[p] : I) ⊄ m^[p]."""
    m = at if isinstance(at, Ideal) else Ideal(R.S, at)
    if not m.contains(R.I):
        raise ValueError("the defining ideal is not contained in the given maximal ideal")
    mp = bracket_power(m, 1)
    return not mp.contains(hom_colon(R, 1))


def hom_module_generators(R: RingPresentation, e: int) -> list:
    """Polynomials u whose maps u·Tr^e generate Hom_R(F^e_* R, R).

    The list is interreduced modulo I^[p^e] and greedily thinned (an element
    already in the submodule spanned by the earlier ones is dropped), but it
    need not be a minimal generating set.
    """
    if e < 1:
        raise ValueError("hom_module_generators needs e >= 1")
    key = ("hom", e)
    if key in R._cache:
        return list(R._cache[key])
    colon = hom_colon(R, e)
    Iq = R.bracket(e)
    cands = []
    for g in colon.groebner():
        u = Iq.reduce(g)
        if u:
            cands.append(u.monic())
    cands.sort(key=lambda u: (u.degree(), R.S.order.rank(u.lead()[0])))
    kept: list = []
    if len(cands) <= 1:
        kept = cands
    else:
        for u in cands:
            if not kept or u not in Ideal(R.S, list(Iq.generators) + kept):
                kept.append(u)
    R._cache[key] = tuple(kept)
    return list(kept)
