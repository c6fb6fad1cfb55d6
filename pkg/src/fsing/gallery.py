"""Named example triples used in the docs, the sample scripts and the tests."""

from __future__ import annotations

from fractions import Fraction

from .cartier import CoefficientPair
from .frob import RingPresentation
from .gb import Ideal


def polynomial_ring(p: int = 2, names: str = "xy") -> RingPresentation:
    return RingPresentation.polynomial_ring(p, tuple(names))


def node(p: int = 5) -> RingPresentation:
    """F_p[x,y]/(xy), reduced with minimal primes (x) and (y)."""
    return RingPresentation(p, ("x", "y"), ["x*y"], flags=["reduced"],
                            minimal_primes=[["x"], ["y"]])


def cusp(p: int = 7) -> RingPresentation:
    """F_p[x,y]/(x^2 + y^3), a domain that is not normal."""
    return RingPresentation(p, ("x", "y"), ["x^2+y^3"], flags=["reduced", "domain"])


def fermat_cubic(p: int) -> RingPresentation:
    """F_p[x,y,z]/(x^3 + y^3 + z^3), the cone over an elliptic curve."""
    return RingPresentation(p, ("x", "y", "z"), ["x^3+y^3+z^3"],
                            flags=["reduced", "domain", "normal"])


def a1_singularity(p: int = 3) -> RingPresentation:
    """F_p[x,y,z]/(xy - z^2), a Gorenstein normal surface."""
    return RingPresentation(p, ("x", "y", "z"), ["x*y-z^2"],
                            flags=["reduced", "domain", "normal"])


TORIC_NAMES = ("a0", "a1", "a2", "b0", "b1", "b2")
TORIC_RELATIONS = ("a0*a2+a1^2", "a0*b1+a1*b0", "a0*b2+a1*b1",
                   "a1*b1+a2*b0", "a1*b2+a2*b1", "b0*b2+b1^2")


def toric_cone(p: int = 2) -> RingPresentation:
    """Cone over P^1 x P^1 embedded by O(1,2): the 2x2 minors of a 2x4 Hankel-type matrix.

    Six variables, six quadric binomials, dimension 3; normal but not
    Q-Gorenstein, so no single map generates the Cartier algebra.
    """
    rel = TORIC_RELATIONS if p == 2 else (
        "a0*a2-a1^2", "a0*b1-a1*b0", "a0*b2-a1*b1",
        "a1*b1-a2*b0", "a1*b2-a2*b1", "b0*b2-b1^2")
    return RingPresentation(p, TORIC_NAMES, rel, flags=["reduced", "domain", "normal"])


def maximal_ideal_pair(R: RingPresentation, t) -> CoefficientPair:
    return CoefficientPair(Ideal(R.S, R.S.gens()), Fraction(t))


def plane_pair(t) -> tuple:
    R = polynomial_ring(3)
    return R, maximal_ideal_pair(R, t)


# name -> (ring, coefficient pair or None)
def examples() -> dict:
    return {
        "polynomial": (polynomial_ring(), None),
        "node": (node(), None),
        "cusp": (cusp(), None),
        "toric": (toric_cone(), None),
        "plane-3/2": plane_pair(Fraction(3, 2)),
        "plane-5/2": plane_pair(Fraction(5, 2)),
    }
