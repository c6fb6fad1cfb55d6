"""The Cartier algebra C(R) = ⊕_e Hom_R(F^e_* R, R) and its action on ideals.

A homogeneous element of degree e is stored as ``u`` with ``u·I ⊆ I^[p^e]``,
meaning ``r ↦ Tr^e(u·r)``.  Degree 0 elements are multiplications by ``u``.
The product ``φ·ψ = φ ∘ F^d_* ψ`` of maps of degrees d and e is represented by
``u_φ^(p^e) · u_ψ`` in degree d + e.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import Iterator, Sequence

from . import config
from .ffpoly import Polynomial
from .frob import (MinimalPrimesUnavailable, RingPresentation, frobenius_root,
                   hom_module_generators, root_components)
from .gb import Ideal, ideal_colon, ideal_intersect, ideal_power


class NotACartierMap(ValueError):
    pass


class ExponentCapExceeded(ArithmeticError):
    pass


@dataclasses.dataclass(frozen=True, eq=False)
class CartierMap:
    ring: RingPresentation
    e: int
    u: Polynomial

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("degree must be non-negative")

    @classmethod
    def make(cls, ring: RingPresentation, e: int, u, check: bool = True) -> "CartierMap":
        """Normal-form ``u`` modulo I^[p^e]; optionally verify u·I ⊆ I^[p^e]."""
        u = ring.S(u)
        Iq = ring.bracket(e)
        if check and e > 0 and not ring.is_polynomial_ring:
            if not Iq.contains(Ideal(ring.S, [u * g for g in ring.I.generators])):
                raise NotACartierMap(f"{u} does not satisfy u·I ⊆ I^[p^{e}]")
        return cls(ring, e, Iq.reduce(u) if not ring.is_polynomial_ring else u)

    @property
    def q(self) -> int:
        return self.ring.p ** self.e

    def __eq__(self, other):
        if not isinstance(other, CartierMap):
            return NotImplemented
        return self.ring is other.ring and self.e == other.e and self.u == other.u

    def __hash__(self):
        return hash((id(self.ring), self.e, self.u))

    def __mul__(self, other: "CartierMap") -> "CartierMap":
        return compose(self, other)

    def __call__(self, f) -> Polynomial:
        """Evaluate on a single element: ``Tr^e(u·f)`` reduced modulo I."""
        from .frob import trace
        f = self.ring.S(f)
        val = self.u * f if self.e == 0 else trace(self.u * f, self.e)
        return self.ring.reduce(val)

    def to_json(self) -> dict:
        return {"e": self.e, "u": str(self.u)}

    def __str__(self) -> str:
        return f"map(e={self.e}, u={self.u})"

    __repr__ = __str__


def compose(phi: CartierMap, psi: CartierMap) -> CartierMap:
    """``φ·ψ = φ ∘ F^d_* ψ``, degree d + e, u = u_φ^(p^e)·u_ψ."""
    if phi.ring is not psi.ring:
        raise ValueError("maps over different rings")
    u = phi.u.frobenius(psi.e) * psi.u
    return CartierMap.make(phi.ring, phi.e + psi.e, u, check=False)


def power(phi: CartierMap, n: int) -> CartierMap:
    if n < 1:
        raise ValueError("power needs n >= 1")
    out = phi
    for _ in range(n - 1):
        out = compose(out, phi)
    return out


@dataclasses.dataclass(frozen=True)
class CoefficientPair:
    """The 𝔞^t of a triple; t is an exact positive rational."""

    a: Ideal
    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        object.__setattr__(self, "t", t)
        if t <= 0:
            raise ValueError("t must be positive")
        if self.a.is_zero():
            raise ValueError("coefficient ideal must be nonzero")
        object.__setattr__(self, "_powers", {})

    @classmethod
    def trivial(cls, ring: RingPresentation) -> "CoefficientPair":
        return cls(Ideal.unit(ring.S), Fraction(1))

    @property
    def is_trivial(self) -> bool:
        return self.a.is_unit()

    def exponent(self, e: int, p: int) -> int:
        """⌈t(p^e - 1)⌉."""
        n = math.ceil(self.t * (p ** e - 1))
        cap = config.current().exponent_cap
        if n > cap:
            raise ExponentCapExceeded(f"coefficient exponent {n} exceeds cap {cap}")
        return n

    def power(self, n: int) -> Ideal:
        if self.is_trivial or n == 0:
            return Ideal.unit(self.a.ring)
        cache = self._powers
        if n not in cache:
            cache[n] = ideal_power(self.a, n)
        return cache[n]

    def twist(self, e: int, p: int) -> Ideal:
        return self.power(self.exponent(e, p))


# -- algebras -------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Full:
    """All of C(R), truncated at a degree bound (None: use the session bound)."""

    bound: int | None = None


@dataclasses.dataclass(frozen=True)
class Generated:
    """The subalgebra generated by R and finitely many homogeneous maps."""

    maps: tuple

    def __post_init__(self):
        maps = tuple(self.maps)
        object.__setattr__(self, "maps", maps)
        if not maps:
            raise ValueError("Generated algebra needs at least one map")
        ring = maps[0].ring
        if any(m.ring is not ring for m in maps):
            raise ValueError("generators live over different rings")
        if any(m.e < 1 for m in maps):
            raise ValueError("generators must have positive degree")


CartierAlgebraSpec = Full | Generated


def words(maps: Sequence[CartierMap], max_degree: int, min_degree: int = 1) -> Iterator:
    """(index tuple, product map) for words of total degree in [min, max]."""
    def grow(word, phi, deg):
        if deg >= min_degree:
            yield word, phi
        for i, g in enumerate(maps):
            if deg + g.e <= max_degree:
                yield from grow(word + (i,), compose(phi, g), deg + g.e)

    for i, g in enumerate(maps):
        if g.e <= max_degree:
            yield from grow((i,), g, g.e)


def algebra_maps(R: RingPresentation, T, E: int) -> list:
    """Module generators of T_e for 1 <= e <= E, as (label, map) sorted by degree.

    For ``Full`` the label is ``("hom", e, j)``; for ``Generated`` it is the
    word (tuple of generator indices) whose product is the map.
    """
    out = []
    if isinstance(T, Full):
        for e in range(1, E + 1):
            for j, u in enumerate(hom_module_generators(R, e)):
                out.append((("hom", e, j), CartierMap(R, e, u)))
    else:
        out = sorted(words(T.maps, E), key=lambda wm: (wm[1].e, len(wm[0]), wm[0]))
    return out


# -- images ---------------------------------------------------------------

def _reduced_gens(R: RingPresentation, J: Ideal) -> list:
    out = []
    for g in J.generators:
        g = R.reduce(g)
        if g:
            out.append(g)
    return out


def apply_image(phi: CartierMap, J: Ideal) -> Ideal:
    """φ(F^e_* J) as an ideal of R (returned as a lift containing I)."""
    R = phi.ring
    products = [phi.u * g for g in _reduced_gens(R, J)]
    if phi.e == 0:
        return R.ideal(products)
    return R.ideal(frobenius_root(Ideal(R.S, products), phi.e).generators)


def image_components(phi: CartierMap, g: Polynomial, coeff: CoefficientPair | None) -> list:
    """Generators of φ(F^e_* 𝔞^{⌈t(p^e-1)⌉} g) modulo I."""
    R = phi.ring
    base = phi.u * g
    if coeff is None or coeff.is_trivial:
        mults = [base]
    else:
        mults = [base * h for h in coeff.twist(phi.e, R.p).generators]
    if phi.e == 0:
        return mults
    out = []
    for f in mults:
        out.extend(root_components(f, phi.e))
    return out


def twisted_image(phi: CartierMap, J: Ideal, coeff: CoefficientPair) -> Ideal:
    """φ(F^e_* 𝔞^{⌈t(p^e - 1)⌉} J), as a lift containing I."""
    R = phi.ring
    gens = []
    for g in _reduced_gens(R, J):
        gens.extend(image_components(phi, g, coeff))
    return R.ideal(gens)


def is_compatible(phi: CartierMap, J: Ideal, coeff: CoefficientPair) -> bool:
    """φ(F^e_* 𝔞^{⌈t(p^e-1)⌉} J) ⊆ J, with J a lift containing I."""
    R = phi.ring
    Jl = J if J.contains(R.I) else R.lift(J)
    for g in _reduced_gens(R, Jl):
        for h in image_components(phi, g, coeff):
            if h not in Jl:
                return False
    return True


# -- loci and tests -------------------------------------------------------

def degeneracy_locus(phi: CartierMap) -> Ideal:
    """An ideal whose zero set is where φ fails to generate the Hom module.

    It is the annihilator of (I^[q] : I) / (u·S + I^[q]); only its radical is
    meaningful.
    """
    R = phi.ring
    if phi.e == 0:
        raise ValueError("degeneracy locus needs a map of positive degree")
    Iq = R.bracket(phi.e)
    base = Ideal(R.S, [phi.u, *Iq.generators])
    result = None
    for v in hom_module_generators(R, phi.e):
        K = ideal_colon(base, v)
        result = K if result is None else ideal_intersect(result, K)
    return R.lift(result)


def is_nondegenerate(phi: CartierMap) -> bool:
    """φ is nonzero at every minimal prime P of R.

    Since R_P is a field, φ is nonzero there exactly when its image ideal
    φ(F^e_* R) is not contained in P.
    """
    R = phi.ring
    if phi.e == 0:
        return R.in_R_circ(phi.u)
    image = apply_image(phi, R.unit_ideal())
    if R.is_domain:
        return not R.I.contains(image)
    if R.minimal_primes is None:
        raise MinimalPrimesUnavailable(
            "ring is not flagged as a domain and no minimal primes were supplied")
    return not any(P.contains(image) for P in R.minimal_primes)


def is_sharply_fpure(R: RingPresentation, T, coeff: CoefficientPair | None = None,
                     E: int | None = None) -> bool:
    """Some T_e (e <= E) maps F^e_* 𝔞^{⌈t(p^e-1)⌉} onto R."""
    if coeff is None:
        coeff = CoefficientPair.trivial(R)
    E = _bound(T, E)
    image = R.ideal()
    for _, phi in algebra_maps(R, T, E):
        image = image + twisted_image(phi, R.unit_ideal(), coeff)
        if image.is_unit():
            return True
    return False


def _bound(T, E: int | None) -> int:
    if E is not None:
        return E
    if isinstance(T, Full) and T.bound is not None:
        return T.bound
    return config.current().degree_bound
