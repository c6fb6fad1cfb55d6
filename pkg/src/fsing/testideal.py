"""Test elements, big test ideals, strong F-regularity and F-pure thresholds.

Every τ here is computed as the smallest ideal containing a test element c
that is closed under the twisted images of a finite list of maps: an
ascending chain that stops when a full sweep adds nothing.  The degree bound
E used for the list of maps is recorded in every result, together with
whether the closure could be certified beyond E.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from . import config
from .cartier import (CartierMap, CoefficientPair, ExponentCapExceeded, Full,
                      Generated, algebra_maps, compose, degeneracy_locus,
                      image_components, is_compatible, is_nondegenerate, power,
                      twisted_image, words, _bound)
from .ffpoly import ExponentOverflow, Polynomial
from .frob import (FrobeniusDegreeCap, RingPresentation, hom_module_generators)
from .gb import Ideal, bracket_power


class NoCertifiedElement(RuntimeError):
    pass


class BootstrapFailed(RuntimeError):
    pass


class IterationCapExceeded(RuntimeError):
    pass


class DegenerateAlgebra(ValueError):
    pass


@dataclasses.dataclass
class TestElement:
    """A HDBS test element ``c`` plus how it was obtained.

    ``d_element`` is the element c_i with c_i ∈ φ(F^e_* (c_i) 𝔞^{⌈t(p^e-1)⌉}),
    the input to the uniform construction; ``c`` is what the closure seeds on.
    """

    __test__ = False

    c: Polynomial
    d_element: Polynomial | None = None
    provenance: dict = dataclasses.field(default_factory=dict)

    def __str__(self) -> str:
        return str(self.c)


@dataclasses.dataclass
class TestIdealResult:
    __test__ = False

    ideal: Ideal
    degree_bound: int
    test_element: TestElement
    iterations: int
    certified: bool
    note: str = ""
    checks: list = dataclasses.field(default_factory=list)
    contributions: list = dataclasses.field(default_factory=list)

    @property
    def generators(self) -> list:
        return self.ideal.groebner()

    def is_unit(self) -> bool:
        return self.ideal.is_unit()

    def to_json(self) -> dict:
        return {
            "generators": [str(g) for g in self.generators],
            "degree_bound": self.degree_bound,
            "test_element": str(self.test_element.c),
            "iterations": self.iterations,
            "certified": self.certified,
        }


# -- picking elements of R° ------------------------------------------------

def _pick_in_R_circ(R: RingPresentation, gens: Iterable[Polynomial]) -> Polynomial | None:
    cands = []
    for g in gens:
        g = R.reduce(g)
        if g:
            cands.append(g.monic())
    for g in cands:
        if R.in_R_circ(g):
            return g
    for g, h in itertools.combinations(cands, 2):
        if R.in_R_circ(g + h):
            return g + h
    if len(cands) > 2:
        total = sum(cands[1:], cands[0])
        if total and R.in_R_circ(total):
            return total
    return None


def _jacobian_element(R: RingPresentation) -> Polynomial | None:
    key = "jacobian_element"
    if key not in R._cache:
        batch = []
        found = None
        for d in R.jacobian_minors():
            batch.append(d)
            found = _pick_in_R_circ(R, [d])
            if found is not None:
                break
        if found is None and batch:
            found = _pick_in_R_circ(R, batch)
        R._cache[key] = found
    return R._cache[key]


def _initial_parts(R: RingPresentation, phi: CartierMap, coeff: CoefficientPair) -> dict:
    jac = _jacobian_element(R)
    if jac is None:
        raise NoCertifiedElement(
            "the Jacobian ideal lies in a minimal prime; the ring is probably not reduced")
    D = degeneracy_locus(phi)
    if D.is_unit():
        deg = R.S.one()
    else:
        deg = _pick_in_R_circ(R, D.groebner())
        if deg is None:
            raise NoCertifiedElement(f"degeneracy locus of {phi} contains a component of Spec R")
    if coeff.is_trivial:
        aelt = R.S.one()
    else:
        aelt = _pick_in_R_circ(R, coeff.a.generators)
        if aelt is None:
            raise NoCertifiedElement("no generator of the coefficient ideal lies in R°")
    return {"jacobian": jac, "degeneracy": deg, "coefficient": aelt,
            "c": R.reduce(jac * deg * aelt)}


def find_initial_c(R: RingPresentation, phi: CartierMap,
                   coeff: CoefficientPair | None = None) -> Polynomial:
    """c ∈ 𝔞 ∩ R° with R_c regular and the degeneracy locus of φ inside V(c).

    c is a product of a Jacobian minor, a generator of the degeneracy ideal
    and a generator of 𝔞, each chosen in R°.
    """
    coeff = coeff or CoefficientPair.trivial(R)
    return _initial_parts(R, phi, coeff)["c"]


def hdbs_bootstrap(phi: CartierMap, c_prime: Polynomial,
                   coeff: CoefficientPair | None = None) -> TestElement:
    """Turn c' into a test element for R⟨φ⟩.

    Finds the least m with c'^m ∈ φ(F^e_* (c') 𝔞^{⌈t(p^e-1)⌉}); then
    c_d = c'^(2m) lies in φ(F^e_* (c_d) 𝔞^{⌈t(p^e-1)⌉}) and c = c_d² is a
    test element for R⟨φ⟩.
    """
    R = phi.ring
    coeff = coeff or CoefficientPair.trivial(R)
    cap = config.current().iteration_cap
    image = twisted_image(phi, R.ideal([c_prime]), coeff)
    cp = R.reduce(c_prime)
    acc = R.S.one()
    for m in range(1, cap + 1):
        acc = image.reduce(acc * cp)
        if not acc:
            d_elt = R.reduce(cp ** (2 * m))
            c = R.reduce(d_elt * d_elt)
            return TestElement(c, d_elt, {"map": str(phi), "c_prime": str(cp), "m": m})
    raise BootstrapFailed(f"no m <= {cap} with c'^m in the image of {phi}")


def uniform_hdbs(phis: Sequence[CartierMap], coeff: CoefficientPair | None = None,
                 c_primes: Sequence[Polynomial] | None = None) -> TestElement:
    """One test element for every algebra R⟨φ_w⟩, φ_w a product of the φ_i.

    c = (∏ c_i)² where c_i = c_i'^(2 m_i) are the bootstrap elements.
    """
    if not phis:
        raise ValueError("uniform_hdbs needs at least one map")
    R = phis[0].ring
    coeff = coeff or CoefficientPair.trivial(R)
    prod = R.S.one()
    per_map = []
    for k, phi in enumerate(phis):
        if not is_nondegenerate(phi):
            raise DegenerateAlgebra(f"{phi} vanishes on a minimal prime")
        if c_primes is not None:
            parts = {"c": R.reduce(c_primes[k])}
        else:
            parts = _initial_parts(R, phi, coeff)
        te = hdbs_bootstrap(phi, parts["c"], coeff)
        prod = R.reduce(prod * te.d_element)
        info = dict(te.provenance)
        for name in ("jacobian", "degeneracy", "coefficient"):
            if name in parts:
                info[name] = str(parts[name])
        per_map.append(info)
    c = R.reduce(prod * prod)
    return TestElement(c, prod, {"per_map": per_map})


# -- closure ---------------------------------------------------------------

def _closure(R: RingPresentation, maps: Sequence, coeff: CoefficientPair,
             seed: Sequence[Polynomial], stop_at_unit: bool = False):
    """Smallest ideal containing ``seed`` + I closed under every map in ``maps``.

    Returns (contributions, ideal, sweeps); each contribution is a pair
    (generator, word) where the word records which composite map produced it
    from the seed (first producer wins).
    """
    cap = config.current().iteration_cap
    contributions = [(R.reduce(g), ()) for g in seed]
    contributions = [(g, w) for g, w in contributions if g]
    J = R.ideal(g for g, _ in contributions)
    done = [0] * len(maps)
    sweeps = 0
    while True:
        if stop_at_unit and J.is_unit():
            break
        changed = False
        for k, (label, phi) in enumerate(maps):
            pending = contributions[done[k]:]
            done[k] = len(contributions)
            for g, w in pending:
                fresh = []
                for h in image_components(phi, g, coeff):
                    h = J.reduce(h)
                    if h and all(h != f for f in fresh):
                        fresh.append(h)
                if fresh:
                    word = label + w if all(isinstance(x, int) for x in label) else (label,) + w
                    contributions.extend((h, word) for h in fresh)
                    J = Ideal(R.S, J.groebner() + fresh)
                    changed = True
                    if stop_at_unit and J.is_unit():
                        break
            if stop_at_unit and J.is_unit():
                break
        sweeps += 1
        if not changed or (stop_at_unit and J.is_unit()):
            break
        if sweeps >= cap:
            raise IterationCapExceeded(f"closure did not stabilize in {cap} sweeps")
    return contributions, J, sweeps


def _lookahead(R, J, maps, coeff) -> bool | None:
    """Compatibility of J with extra maps; None if they could not be formed."""
    try:
        return all(is_compatible(phi, J, coeff) for _, phi in maps)
    except (ExponentCapExceeded, ExponentOverflow, FrobeniusDegreeCap):
        return None


def _as_test_element(c) -> TestElement:
    return c if isinstance(c, TestElement) else TestElement(c)


def tau_principal(phi: CartierMap, coeff: CoefficientPair | None = None,
                  c: TestElement | Polynomial | None = None,
                  E: int | None = None) -> TestIdealResult:
    """τ_b(R; R⟨φ⟩, 𝔞^t): the smallest φ-compatible ideal containing c.

    With a trivial coefficient one map suffices (images of powers are
    iterated images).  Otherwise the powers φ^n of degree <= max(E, deg φ)
    are swept as well, and the next power is checked as a lookahead.
    """
    R = phi.ring
    coeff = coeff or CoefficientPair.trivial(R)
    if c is None:
        c = uniform_hdbs([phi], coeff)
    te = _as_test_element(c)
    E = config.current().degree_bound if E is None else E
    if coeff.is_trivial:
        maps = [((0,), phi)]
    else:
        top = max(1, max(E, phi.e) // phi.e)
        maps = [((0,) * n, power(phi, n)) for n in range(1, top + 1)]
    contributions, J, sweeps = _closure(R, maps, coeff, [te.c])
    bound = maps[-1][1].e
    if J.is_unit():
        certified, note = True, "unit ideal"
    elif coeff.is_trivial:
        certified, note = True, "trivial coefficient: closure under φ is closure under R⟨φ⟩"
    else:
        nxt = compose(maps[-1][1], phi)
        ok = _lookahead(R, J, [((0,) * (len(maps) + 1), nxt)], coeff)
        certified = bool(ok)
        note = ("closed under the next power" if ok else
                "next power not formed" if ok is None else
                f"lower bound: not closed under φ^{len(maps) + 1}")
    checks = [{"map": str(m), "e": m.e, "compatible": True} for _, m in maps]
    return TestIdealResult(J.interreduced(), bound, te, sweeps, certified, note,
                           checks, contributions)


def _default_test_element(R, T, coeff, E) -> TestElement:
    if isinstance(T, Generated):
        return uniform_hdbs(list(T.maps), coeff)
    # a test element for any non-degenerate single-map subalgebra serves T
    for e in range(1, E + 1):
        for u in hom_module_generators(R, e):
            phi = CartierMap(R, e, u)
            if is_nondegenerate(phi):
                return uniform_hdbs([phi], coeff)
    raise DegenerateAlgebra("no non-degenerate map of degree <= E")


def _certify(R, T, coeff, J, E) -> tuple:
    if J.is_unit():
        return True, "unit ideal"
    if isinstance(T, Generated):
        if coeff.is_trivial and all(g.e <= E for g in T.maps):
            return True, "trivial coefficient and every generator has degree <= E"
        nxt = [wm for wm in words(T.maps, E + max(g.e for g in T.maps), E + 1)]
        if not nxt:
            return False, "no words above degree E"
        d = min(m.e for _, m in nxt)
        extra = [wm for wm in nxt if wm[1].e == d]
    else:
        gb = R.I.groebner()
        if coeff.is_trivial and len(gb) <= 1:
            return True, "hypersurface: C(R) is generated in degree 1"
        try:
            extra = algebra_maps(R, T, E + 1)
        except FrobeniusDegreeCap:
            return False, f"degree {E + 1} beyond the Frobenius cap; lower bound"
        extra = [wm for wm in extra if wm[1].e == E + 1]
        d = E + 1
    ok = _lookahead(R, J, extra, coeff)
    if ok:
        return True, f"closed under degree {d} as well"
    if ok is None:
        return False, f"degree {d} maps could not be formed; lower bound"
    return False, f"not closed under the degree {d} maps"


def tau_algebra(R: RingPresentation, T, coeff: CoefficientPair | None = None,
                c: TestElement | Polynomial | None = None, E: int | None = None,
                stop_at_unit: bool = False) -> TestIdealResult:
    """τ_b(R; T, 𝔞^t) from the module generators of T_e, 1 <= e <= E."""
    coeff = coeff or CoefficientPair.trivial(R)
    E = _bound(T, E)
    if c is None:
        c = _default_test_element(R, T, coeff, E)
    te = _as_test_element(c)
    maps = algebra_maps(R, T, E)
    contributions, J, sweeps = _closure(R, maps, coeff, [te.c], stop_at_unit)
    if stop_at_unit and J.is_unit():
        certified, note = True, "unit ideal"
    else:
        certified, note = _certify(R, T, coeff, J, E)
    checks = [{"map": str(m), "label": list(lbl) if isinstance(lbl, tuple) else lbl,
               "e": m.e, "compatible": True} for lbl, m in maps]
    return TestIdealResult(J.interreduced(), E, te, sweeps, certified, note,
                           checks, contributions)


def is_strongly_fregular(R: RingPresentation, T, coeff: CoefficientPair | None = None,
                         E: int | None = None) -> bool:
    return tau_algebra(R, T, coeff, E=E, stop_at_unit=True).is_unit()


# -- F-pure thresholds -------------------------------------------------------

def nu_sequence(f: Polynomial, e_max: int, m: Ideal | None = None) -> list:
    """ν_e = max{r : f^r ∉ m^[p^e]} for e = 1..e_max (m defaults to the variables)."""
    S = f.ring
    m = m if m is not None else Ideal(S, S.gens())
    if f.is_zero() or f not in m:
        raise ValueError("f must be a nonzero element of m")
    p = S.p
    out = []
    prev = 0
    for e in range(1, e_max + 1):
        mq = bracket_power(m, e)
        r = p * prev
        acc = mq.reduce(f ** r)
        if not acc:
            raise ValueError("ν sequence is not monotone; is m maximal?")
        while True:
            nxt = mq.reduce(acc * f)
            if not nxt:
                break
            acc = nxt
            r += 1
        out.append(r)
        prev = r
    return out


@dataclasses.dataclass
class FptResult:
    threshold: Fraction
    below: Fraction | None
    denominator_bound: int
    degree_bound: int
    nu: list
    convention: str = "smallest t in the Farey search window with τ(f^t) ≠ R"

    def nu_bounds(self, p: int) -> list:
        return [(Fraction(v, p ** (i + 1)), Fraction(v + 1, p ** (i + 1)))
                for i, v in enumerate(self.nu)]

    def to_json(self) -> dict:
        return {"fpt": f"{self.threshold.numerator}/{self.threshold.denominator}",
                "below": None if self.below is None else str(self.below),
                "D": self.denominator_bound, "E": self.degree_bound,
                "nu": self.nu, "convention": self.convention}


def farey(D: int) -> list:
    """Reduced fractions in (0, 1] with denominator <= D, increasing."""
    return sorted({Fraction(a, b) for b in range(1, D + 1) for a in range(1, b + 1)})


def fpt_search(R: RingPresentation, f, D: int, E: int | None = None,
               nu_depth: int = 2) -> FptResult:
    """F-pure threshold of f over a polynomial ring, to denominators <= D.

    Binary search over the Farey fractions for the smallest t with
    τ(f^t) ≠ R; the fraction just below it has τ = R.  The result is checked
    against ν_e/p^e <= fpt <= (ν_e + 1)/p^e.
    """
    if not R.is_polynomial_ring:
        raise ValueError("fpt_search works over a polynomial ring")
    f = R.S(f)
    E = config.current().degree_bound if E is None else E
    a = Ideal(R.S, [f])
    T = Full(E)

    def regular(t: Fraction) -> bool:
        return is_strongly_fregular(R, T, CoefficientPair(a, t), E)

    fr = farey(D)
    lo, hi = 0, len(fr)
    while lo < hi:
        mid = (lo + hi) // 2
        if regular(fr[mid]):
            lo = mid + 1
        else:
            hi = mid
    if lo == len(fr):
        raise ValueError("τ(f^1) = R: f is a unit")
    nu = nu_sequence(f, nu_depth)
    res = FptResult(fr[lo], fr[lo - 1] if lo else None, D, E, nu)
    for low, high in res.nu_bounds(R.p):
        if not low <= res.threshold <= high:
            raise ArithmeticError(
                f"threshold {res.threshold} outside ν bounds [{low}, {high}]")
    return res
