"""Big test ideals of Cartier algebras over quotients of F_p[x_1, ..., x_n]."""

from .cartier import (CartierMap, CoefficientPair, Full, Generated, apply_image,
                      compose, degeneracy_locus, is_compatible, is_nondegenerate,
                      is_sharply_fpure, power, twisted_image)
from .config import SessionConfig
from .decompose import DecompositionResult, DivisorDatum, decompose_tau, divisor_of, select_generators
from .ffpoly import MonomialOrder, ParseError, Polynomial, Ring
from .frob import (RingPresentation, fedder_is_fpure, frobenius_root, hom_colon,
                   hom_module_generators, pe_decompose, trace)
from .gb import (Ideal, bracket_power, groebner, ideal_colon, ideal_equal,
                 ideal_intersect, ideal_member, ideal_power, ideal_product, ideal_sum)
from .testideal import (TestElement, TestIdealResult, find_initial_c, fpt_search,
                        hdbs_bootstrap, is_strongly_fregular, nu_sequence,
                        tau_algebra, tau_principal, uniform_hdbs)

__version__ = "0.1.0"
