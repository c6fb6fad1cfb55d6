"""Decomposing a big test ideal into test ideals of singly generated algebras.

Given a triple (R, 𝒯, 𝔞^t) the selection loop picks finitely many
non-degenerate maps φ_1..φ_n whose generated algebra already has the same
test ideal.  With one uniform HDBS element c for all of them, every generator
of τ is an image of c under some product φ_w, so τ is the sum of the test
ideals τ(R; R⟨φ_w⟩, 𝔞^t).  Each φ_w carries the Q-divisor
Δ = div(u)/(p^e - 1) when the Hom module is free.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

from . import config
from .cartier import (CartierMap, CoefficientPair, Generated, algebra_maps,
                      compose, is_compatible, is_nondegenerate, _bound)
from .ffpoly import Polynomial
from .frob import (FrobeniusDegreeCap, MinimalPrimesUnavailable, RingPresentation,
                   hom_module_generators)
from .gb import Ideal, divide_exact
from .testideal import (IterationCapExceeded, TestElement, TestIdealResult,
                        tau_algebra, tau_principal, uniform_hdbs)


class DivisorUnavailable(ValueError):
    pass


class NoNondegenerateGenerator(ValueError):
    pass


class VerificationFailed(AssertionError):
    """The pieces do not add up to the full test ideal."""

    def __init__(self, message: str, transcript: dict):
        super().__init__(message)
        self.transcript = transcript


@dataclasses.dataclass(frozen=True)
class DivisorDatum:
    """Δ = coefficient · div_R(u) for a map of degree e, kept symbolic.

    (p^e - 1)(K_R + Δ) is then Cartier; K_R itself is never computed.
    """

    e: int
    u: Polynomial
    coefficient: Fraction

    @property
    def is_zero(self) -> bool:
        return self.u.is_constant()

    @property
    def note(self) -> str:
        if self.is_zero:
            return "Δ = 0"
        return f"Δ = ({self.coefficient})·div({self.u})"

    def to_json(self) -> dict:
        return {"coeff": str(self.coefficient), "of": str(self.u)}


def divisor_of(phi: CartierMap) -> DivisorDatum:
    """The divisor attached to φ = u·Tr^e.

    Over a polynomial ring Tr^e generates the Hom module and Δ = div(u)/(p^e-1).
    Over a normal domain whose Hom module is free on u_0·Tr^e, the cofactor
    g = u/u_0 is used; it must divide exactly after reduction mod I^[p^e].
    """
    R = phi.ring
    if phi.e < 1:
        raise DivisorUnavailable("degree 0 maps carry no divisor")
    coeff = Fraction(1, R.p ** phi.e - 1)
    if R.is_polynomial_ring:
        if not phi.u:
            raise DivisorUnavailable("the zero map carries no divisor")
        return DivisorDatum(phi.e, phi.u.monic(), coeff)
    if not R.is_normal_domain:
        raise DivisorUnavailable("ring is not flagged as a normal domain")
    try:
        gens = hom_module_generators(R, phi.e)
    except FrobeniusDegreeCap as exc:
        raise DivisorUnavailable(str(exc)) from None
    if len(gens) != 1:
        raise DivisorUnavailable(
            f"Hom module in degree {phi.e} needs {len(gens)} generators; not free")
    u0 = gens[0]
    try:
        g = divide_exact(phi.u, u0)
    except ValueError:
        raise DivisorUnavailable(f"{phi.u} is not a multiple of the generator {u0}") from None
    g = R.reduce(g)
    if not g:
        raise DivisorUnavailable("the cofactor vanishes in R")
    return DivisorDatum(phi.e, g.monic(), coeff)


@dataclasses.dataclass
class Piece:
    word: tuple
    map: CartierMap
    tau: TestIdealResult
    divisor: DivisorDatum | None
    divisor_note: str = ""

    def to_json(self) -> dict:
        return {"word": list(self.word), "e": self.map.e, "u": str(self.map.u),
                "divisor": None if self.divisor is None else self.divisor.to_json(),
                "tau": self.tau.to_json()}


@dataclasses.dataclass
class DecompositionResult:
    full_tau: TestIdealResult
    generators: list
    test_element: TestElement
    pieces: list
    verified: bool

    def piece_sum(self) -> Ideal:
        R = self.generators[0].ring
        total = R.ideal()
        for pc in self.pieces:
            total = total + pc.tau.ideal
        return total

    def to_json(self) -> dict:
        return {"full_tau": self.full_tau.to_json(),
                "pieces": [pc.to_json() for pc in self.pieces],
                "verified": self.verified}


def _first_nondegenerate(cands: Sequence) -> CartierMap:
    for _, phi in cands:
        if is_nondegenerate(phi):
            return phi
    raise NoNondegenerateGenerator("no non-degenerate generator: every candidate "
                                   "vanishes on a minimal prime")


def select_generators(R: RingPresentation, T, coeff: CoefficientPair | None = None,
                      E: int | None = None) -> list:
    """Greedy finite set of maps whose generated algebra has the same τ as T.

    Candidates are the module generators of T_e, e <= E, in increasing degree;
    a candidate is added when its twisted image escapes the current τ.
    """
    coeff = coeff or CoefficientPair.trivial(R)
    E = _bound(T, E)
    cands = algebra_maps(R, T, E)
    if isinstance(T, Generated):
        for phi in T.maps:
            if not is_nondegenerate(phi):
                raise NoNondegenerateGenerator(f"{phi} vanishes on a minimal prime")
    selected = [_first_nondegenerate(cands)]
    cap = config.current().iteration_cap
    current = tau_algebra(R, Generated(selected), coeff, E=E).ideal
    for _ in range(cap):
        if current.is_unit():
            return selected
        for _, phi in cands:
            if any(phi == s for s in selected):
                continue
            if not is_nondegenerate(phi):
                continue
            if not is_compatible(phi, current, coeff):
                selected.append(phi)
                current = tau_algebra(R, Generated(selected), coeff, E=E).ideal
                break
        else:
            return selected
    raise IterationCapExceeded(f"generator selection did not stop within {cap} steps")


def _word_map(gens: Sequence[CartierMap], word: tuple) -> CartierMap:
    phi = gens[word[0]]
    for i in word[1:]:
        phi = compose(phi, gens[i])
    return phi


def decompose_tau(R: RingPresentation, T, coeff: CoefficientPair | None = None,
                  E: int | None = None) -> DecompositionResult:
    """τ_b(R; T, 𝔞^t) = Σ_w τ_b(R; R⟨φ_w⟩, 𝔞^t), verified by ideal equality."""
    coeff = coeff or CoefficientPair.trivial(R)
    E = _bound(T, E)
    full = tau_algebra(R, T, coeff, E=E)
    gens = select_generators(R, T, coeff, E)
    c = uniform_hdbs(gens, coeff)
    tracked = tau_algebra(R, Generated(gens), coeff, c=c, E=E)

    # contributing words, in the order their images first appeared
    order: list = []
    by_word: dict = {}
    for g, w in tracked.contributions:
        if not w:
            continue
        if w not in by_word:
            by_word[w] = []
            order.append(w)
        by_word[w].append(g)
    if not order:
        order = [(0,)]
        by_word[(0,)] = []

    pieces = []
    total = R.ideal()
    for w in order:
        if pieces and total.contains(R.ideal(by_word[w] + [c.c])):
            continue
        phi = _word_map(gens, w)
        tp = tau_principal(phi, coeff, c, E=max(E, phi.e))
        try:
            div, note = divisor_of(phi), ""
        except (DivisorUnavailable, MinimalPrimesUnavailable) as exc:
            div, note = None, str(exc)
        pieces.append(Piece(w, phi, tp, div, note))
        total = total + tp.ideal
        if total == full.ideal:
            break

    verified = total == full.ideal
    if not verified:
        transcript = {"full_tau": full.to_json(), "tracked_tau": tracked.to_json(),
                      "generators": [str(g) for g in gens],
                      "pieces": [pc.to_json() for pc in pieces],
                      "sum": str(total.interreduced())}
        raise VerificationFailed("sum of the pieces differs from the full test ideal",
                                 transcript)
    return DecompositionResult(full, gens, c, pieces, verified)
