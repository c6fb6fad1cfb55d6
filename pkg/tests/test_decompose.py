from fractions import Fraction

import pytest

from fsing import config
from fsing.cartier import CartierMap, Full, Generated, degeneracy_locus, is_nondegenerate
from fsing.decompose import (DivisorUnavailable, NoNondegenerateGenerator,
                             VerificationFailed, decompose_tau, divisor_of,
                             select_generators)
from fsing.frob import hom_module_generators
from fsing.gallery import (a1_singularity, cusp, maximal_ideal_pair, node, polynomial_ring,
                           toric_cone)
from fsing.gb import Ideal


@pytest.mark.parametrize("R", [polynomial_ring(2), polynomial_ring(5, "xyz")])
def test_select_on_polynomial_ring_is_the_trace(R):
    gens = select_generators(R, Full(2))
    assert [(g.e, str(g.u)) for g in gens] == [(1, "1")]


@pytest.mark.parametrize("R", [node(5), cusp(7), a1_singularity(3)])
def test_select_gorenstein_needs_one_map(R):
    gens = select_generators(R, Full(2))
    assert len(gens) == 1
    assert is_nondegenerate(gens[0])


def test_select_rejects_degenerate_generators():
    R = node(2)
    with pytest.raises(NoNondegenerateGenerator):
        select_generators(R, Generated((CartierMap.make(R, 1, "x^2*y"),)))


@pytest.mark.parametrize("R,coeff", [
    (polynomial_ring(3), None),
    (node(5), None),
    (cusp(7), None),
    (cusp(5), None),
    (a1_singularity(3), None),
    (polynomial_ring(3), Fraction(3, 2)),
    (polynomial_ring(3), Fraction(5, 2)),
    (polynomial_ring(2), Fraction(3)),
])
def test_decomposition_is_verified(R, coeff):
    pair = maximal_ideal_pair(R, coeff) if coeff else None
    res = decompose_tau(R, Full(2), pair)
    assert res.verified
    assert res.pieces
    assert res.piece_sum() == res.full_tau.ideal
    for pc in res.pieces:
        # every piece is a test ideal of a smaller algebra, so it sits inside τ
        assert res.full_tau.ideal.contains(pc.tau.ideal)
        assert pc.map.e == sum(res.generators[i].e for i in pc.word)


def test_decomposition_json():
    res = decompose_tau(node(5), Full(2))
    data = res.to_json()
    assert data["verified"] is True
    assert data["full_tau"]["generators"] == ["x", "y"]
    piece = data["pieces"][0]
    assert set(piece) == {"word", "e", "u", "divisor", "tau"}


def test_node_divisor_is_unavailable_but_recorded():
    res = decompose_tau(node(5), Full(2))
    for pc in res.pieces:
        assert pc.divisor is None
        assert "normal domain" in pc.divisor_note


def test_pieces_of_generated_algebra_lie_in_full_tau():
    R = cusp(7)
    full = decompose_tau(R, Full(2)).full_tau.ideal
    phi = CartierMap.make(R, 2, hom_module_generators(R, 2)[0])
    sub = decompose_tau(R, Generated((phi,)), E=4)
    assert full.contains(sub.piece_sum())


def test_verification_failure_carries_transcript():
    err = VerificationFailed("mismatch", {"sum": "(x)"})
    assert err.transcript["sum"] == "(x)"
    assert isinstance(err, AssertionError)


@pytest.mark.parametrize("p,e,u,coeff,of", [
    (2, 1, "1", Fraction(1), "1"),
    (2, 1, "x", Fraction(1), "x"),
    (3, 2, "x^2*y", Fraction(1, 8), "x^2*y"),
    (5, 1, "3*x", Fraction(1, 4), "x"),
])
def test_divisor_on_polynomial_ring(p, e, u, coeff, of):
    R = polynomial_ring(p)
    d = divisor_of(CartierMap.make(R, e, u))
    assert d.coefficient == coeff
    assert str(d.u) == of
    assert d.is_zero is (of == "1")


def test_divisor_zero_note():
    d = divisor_of(CartierMap.make(polynomial_ring(2), 1, "1"))
    assert d.note == "Δ = 0"
    assert d.to_json() == {"coeff": "1", "of": "1"}


def test_divisor_on_gorenstein_hypersurface():
    R = a1_singularity(3)
    u0 = hom_module_generators(R, 1)[0]
    d = divisor_of(CartierMap.make(R, 1, u0 * R.S("x")))
    assert d.coefficient == Fraction(1, 2)
    assert str(d.u) == "x"
    assert divisor_of(CartierMap.make(R, 1, u0)).is_zero


@pytest.mark.parametrize("R,u", [
    (node(5), None),
    (cusp(7), None),
])
def test_divisor_needs_normal_domain(R, u):
    u = u or hom_module_generators(R, 1)[0]
    with pytest.raises(DivisorUnavailable):
        divisor_of(CartierMap.make(R, 1, u))


def test_divisor_needs_free_hom_module():
    R = toric_cone()
    with pytest.raises(DivisorUnavailable):
        divisor_of(CartierMap.make(R, 1, hom_module_generators(R, 1)[0]))


@pytest.mark.parametrize("p,u", [(2, "x"), (3, "x^2*y"), (3, "x*y + y^2"), (5, "x^3 + y^2")])
def test_divisor_support_matches_degeneracy_locus(p, u):
    R = polynomial_ring(p)
    phi = CartierMap.make(R, 1, u)
    d = divisor_of(phi)
    D = degeneracy_locus(phi)
    # the two ideals have the same radical
    assert any(d.u ** k in D for k in range(1, 2 * p))
    assert all(any(g ** k in Ideal(R.S, [d.u]) for k in range(1, 2 * p))
               for g in D.generators)


def test_divisor_beyond_frobenius_cap_is_unavailable():
    R = a1_singularity(3)
    phi = CartierMap.make(R, 3, R.S("x*y - z^2") ** 26, check=False)
    with config.using(max_frobenius_degree=2):
        with pytest.raises(DivisorUnavailable, match="cap"):
            divisor_of(phi)
