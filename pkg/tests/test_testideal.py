from fractions import Fraction

import pytest

from fsing import config
from fsing.cartier import (CartierMap, CoefficientPair, Full, Generated, power,
                           is_compatible, twisted_image)
from fsing.frob import RingPresentation, hom_module_generators
from fsing.gallery import a1_singularity, cusp, fermat_cubic, node, toric_cone
from fsing.gb import Ideal
from fsing.testideal import (IterationCapExceeded, find_initial_c, fpt_search,
                             hdbs_bootstrap, is_strongly_fregular, nu_sequence,
                             tau_algebra, tau_principal, uniform_hdbs)


def poly_ring(p=2, names="xy"):
    return RingPresentation.polynomial_ring(p, tuple(names))


def hom_map(R, e=1, j=0):
    return CartierMap.make(R, e, hom_module_generators(R, e)[j])


def max_ideal_pair(R, t):
    return CoefficientPair(Ideal(R.S, R.S.gens()), Fraction(t))


# -- test elements -----------------------------------------------------------

@pytest.mark.parametrize("R,expected", [
    (poly_ring(2), "1"),
    (node(5), "x + y"),
    (cusp(7), "x"),
])
def test_find_initial_c(R, expected):
    phi = hom_map(R) if not R.is_polynomial_ring else CartierMap.make(R, 1, "1")
    assert str(find_initial_c(R, phi)) == expected


def test_find_initial_c_lies_in_coefficient_ideal():
    R = poly_ring(3)
    coeff = max_ideal_pair(R, Fraction(3, 2))
    c = find_initial_c(R, CartierMap.make(R, 1, "1"), coeff)
    assert c in coeff.a and c


def test_find_initial_c_avoids_degeneracy_locus():
    R = poly_ring(2)
    c = find_initial_c(R, CartierMap.make(R, 1, "x"))
    assert c in Ideal(R.S, ["x"])


@pytest.mark.parametrize("u,c_prime,m,c", [
    ("1", "1", 1, "1"),
    ("x", "x", 1, "x^4"),
])
def test_bootstrap_examples(u, c_prime, m, c):
    R = poly_ring(2)
    te = hdbs_bootstrap(CartierMap.make(R, 1, u), R.S(c_prime))
    assert te.provenance["m"] == m
    assert str(te.c) == c


def test_bootstrap_node():
    R = node(5)
    phi = hom_map(R)
    te = hdbs_bootstrap(phi, R.S("x + y"))
    m = te.provenance["m"]
    assert 1 <= m <= 3
    assert te.c == R.reduce(R.S("x + y") ** (4 * m))
    # condition (d): the bootstrap element lies in its own twisted image
    assert te.d_element in twisted_image(phi, R.ideal([te.d_element]),
                                         CoefficientPair.trivial(R))


def test_uniform_single_map_is_square_of_condition_d_element():
    R = cusp(7)
    phi = hom_map(R)
    single = hdbs_bootstrap(phi, find_initial_c(R, phi))
    uni = uniform_hdbs([phi])
    assert uni.c == R.reduce(single.d_element ** 2) == single.c


def test_uniform_two_maps():
    R = poly_ring(2)
    uni = uniform_hdbs([CartierMap.make(R, 1, "x"), CartierMap.make(R, 1, "y")])
    ms = [d["m"] for d in uni.provenance["per_map"]]
    assert ms == [1, 1]
    assert str(uni.c) == "x^4*y^4"
    assert str(uniform_hdbs([CartierMap.make(R, 1, "1")]).c) == "1"


# -- test ideals -------------------------------------------------------------

def test_tau_principal_examples():
    R = poly_ring(2)
    assert tau_principal(CartierMap.make(R, 1, "1")).ideal.is_unit()
    N = node(2)
    res = tau_principal(CartierMap.make(N, 1, "x*y"), c=N.S("(x+y)^4"))
    assert res.ideal == N.ideal(["x", "y"])
    assert res.certified


def test_tau_principal_with_coefficient():
    R = poly_ring(7)
    coeff = CoefficientPair(Ideal(R.S, ["x^2 + y^3"]), Fraction(5, 6))
    phi = CartierMap.make(R, 1, "1")
    res = tau_principal(phi, coeff, E=3)
    assert res.ideal == Ideal(R.S, ["x", "y"])
    below = tau_principal(phi, CoefficientPair(coeff.a, Fraction(4, 5)), E=3)
    assert below.ideal.is_unit()


@pytest.mark.parametrize("R,coeff,expected", [
    (poly_ring(3), None, ["1"]),
    (node(5), None, ["x", "y"]),
    (cusp(7), None, ["x", "y"]),
    (cusp(5), None, ["x", "y"]),
    (fermat_cubic(7), None, ["x", "y", "z"]),
    (a1_singularity(3), None, ["1"]),
    (toric_cone(), None, ["1"]),
])
def test_tau_algebra(R, coeff, expected):
    res = tau_algebra(R, Full(2), coeff)
    assert res.ideal == R.ideal(expected)
    assert res.certified


@pytest.mark.parametrize("t,expected", [
    (Fraction(1, 2), ["1"]),
    (Fraction(1), ["1"]),
    (Fraction(3, 2), ["1"]),
    (Fraction(2), ["x", "y"]),
    (Fraction(5, 2), ["x", "y"]),
    (Fraction(3), ["x^2", "x*y", "y^2"]),
])
def test_tau_of_maximal_ideal_powers(t, expected):
    R = poly_ring(3)
    res = tau_algebra(R, Full(2), max_ideal_pair(R, t))
    assert res.ideal == Ideal(R.S, expected)


def test_result_json_schema():
    res = tau_algebra(node(5), Full(2))
    data = res.to_json()
    assert set(data) == {"generators", "degree_bound", "test_element", "iterations",
                         "certified"}
    assert data["generators"] == ["x", "y"]
    assert data["degree_bound"] == 2


def test_uncertified_when_generators_exceed_bound():
    R = poly_ring(2)
    res = tau_algebra(R, Generated((CartierMap.make(R, 2, "x*y"),)), E=1)
    assert not res.certified
    assert res.degree_bound == 1


def test_iteration_cap():
    R = node(5)
    with config.using(iteration_cap=1):
        with pytest.raises(IterationCapExceeded):
            tau_algebra(R, Full(1))


@pytest.mark.parametrize("R,coeff,expected", [
    (poly_ring(3), None, True),
    (cusp(7), None, False),
    (poly_ring(7), CoefficientPair(Ideal(poly_ring(7).S, ["x^2+y^3"]), Fraction(1, 2)), True),
    (poly_ring(7), CoefficientPair(Ideal(poly_ring(7).S, ["x^2+y^3"]), Fraction(5, 6)), False),
])
def test_strong_f_regularity(R, coeff, expected):
    if coeff is not None:
        R = RingPresentation.polynomial_ring(R.p, R.names)
        coeff = CoefficientPair(Ideal(R.S, coeff.a.generators), coeff.t)
    assert is_strongly_fregular(R, Full(2), coeff, 2) is expected


# -- properties --------------------------------------------------------------

def test_monotone_in_the_algebra():
    R = toric_cone()
    g = [hom_map(R, 1, j) for j in range(2)]
    small = tau_algebra(R, Generated(g[:1]), E=2).ideal
    big = tau_algebra(R, Generated(g), E=2).ideal
    full = tau_algebra(R, Full(2)).ideal
    assert big.contains(small) and full.contains(big)


@pytest.mark.parametrize("R,coeff,candidates", [
    (node(5), None, [["x^2", "y", "x*y"], ["x", "y^3"], ["x^2", "y^2"], ["x"]]),
    (poly_ring(3), "5/2", [["x^2", "x*y", "y^2"], ["x", "y^2"], ["x^2", "y"]]),
    (cusp(7), None, [["x", "y^2"], ["x^2", "y"], ["y"]]),
])
def test_minimality_against_monomial_subideals(R, coeff, candidates):
    pair = max_ideal_pair(R, Fraction(coeff)) if coeff else CoefficientPair.trivial(R)
    res = tau_algebra(R, Full(2), pair)
    maps = [CartierMap.make(R, e, u) for e in (1, 2) for u in hom_module_generators(R, e)]
    for gens in candidates:
        K = R.ideal(gens)
        assert res.ideal.contains(K) and not K.contains(res.ideal)
        meets = any(R.in_R_circ(g) for g in ["x + y", "x + y^2", "x^2 + y", "x"] if R.S(g) in K)
        assert not meets or not all(is_compatible(phi, K, pair) for phi in maps)


@pytest.mark.parametrize("R,d", [(poly_ring(3), "x^2 + y"), (cusp(7), "y"),
                                 (node(5), "x + y"), (poly_ring(2), "1")])
def test_unit_image_is_stable_under_powers(R, d):
    phi = hom_map(R) if not R.is_polynomial_ring else CartierMap.make(R, 1, "1")
    trivial = CoefficientPair.trivial(R)
    if twisted_image(phi, R.ideal([d]), trivial).is_unit():
        for n in (1, 2, 3):
            assert twisted_image(power(phi, n), R.ideal([d]), trivial).is_unit()


@pytest.mark.parametrize("R,g", [(node(5), "x + y"), (cusp(7), "y"), (toric_cone(), "a0")])
def test_tau_independent_of_test_element(R, g):
    # c² g is again a test element when g ∈ R°
    assert R.in_R_circ(g)
    phi = hom_map(R)
    c = uniform_hdbs([phi]).c
    first = tau_principal(phi, c=c).ideal
    second = tau_principal(phi, c=R.reduce(c * c * R.S(g))).ideal
    assert first == second


@pytest.mark.parametrize("R", [node(5), cusp(7), a1_singularity(3)])
def test_restriction_to_multiples_of_e0(R):
    assert len(hom_module_generators(R, 2)) == 1
    sub = tau_algebra(R, Generated((hom_map(R, 2),)), E=4).ideal
    assert sub == tau_algebra(R, Full(4)).ideal


@pytest.mark.parametrize("R", [node(5), cusp(7), toric_cone()])
def test_tau_is_trivial_after_inverting_the_test_element(R):
    res = tau_algebra(R, Full(2))
    c = res.test_element.c
    assert c in res.ideal


# -- F-pure thresholds -------------------------------------------------------

@pytest.mark.parametrize("p,f,e_max,expected", [
    (2, "x", 3, [1, 3, 7]),
    (7, "x^2 + y^3", 1, [5]),
    (3, "x*y", 2, [2, 8]),
    (5, "x^2 + y^3", 2, [3, 19]),
])
def test_nu_sequence(p, f, e_max, expected):
    R = poly_ring(p)
    assert nu_sequence(R.S(f), e_max) == expected


def test_fpt_smooth_divisor():
    R = poly_ring(3)
    res = fpt_search(R, "x", 6, 2)
    assert res.threshold == 1
    assert res.below == Fraction(5, 6)


@pytest.mark.parametrize("p,f,expected", [(3, "x*y", 1), (5, "x^2", Fraction(1, 2)),
                                          (5, "x^2*y^3", Fraction(1, 3))])
def test_fpt_monomials(p, f, expected):
    assert fpt_search(poly_ring(p), f, 6, 2).threshold == expected
