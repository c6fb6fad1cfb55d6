import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from fsing.ffpoly import (GREVLEX, LEX, ExponentOverflow, MonomialOrder, ParseError,
                          Polynomial, Ring, block_elimination, check_prime,
                          frobenius_power, poly_mul)


def ring(p=2, names="xy"):
    return Ring(p, tuple(names))


def sparse_polys(p, nvars=2, max_terms=5, max_exp=4):
    mono = st.tuples(*[st.integers(0, max_exp)] * nvars)
    return st.dictionaries(mono, st.integers(1, p - 1), max_size=max_terms)


@pytest.mark.parametrize("p,f,g,expected", [
    (2, "x+y", "x+y", "x^2+y^2"),
    (3, "x+1", "x+2", "x^2+2"),
    (5, "x^2*y+3", "1", "x^2*y+3"),
    (7, "x-y", "x+y", "x^2-y^2"),
])
def test_poly_mul_examples(p, f, g, expected):
    R = ring(p)
    assert poly_mul(R(f), R(g)) == R(expected)


@pytest.mark.parametrize("p,f,e,expected", [
    (2, "x+y", 1, "x^2+y^2"),
    (3, "x+2*y", 2, "x^9+2*y^9"),
    (5, "x*y+1", 0, "x*y+1"),
])
def test_frobenius_examples(p, f, e, expected):
    R = ring(p)
    assert frobenius_power(R(f), e) == R(expected)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("e", [0, 1, 2])
@given(data=st.data())
def test_frobenius_matches_repeated_product(p, e, data):
    terms = data.draw(sparse_polys(p))
    R = ring(p)
    f = Polynomial(R, terms)
    assert frobenius_power(f, e).terms == oracles.power(terms, p ** e, p, 2)


@pytest.mark.parametrize("p", [2, 3, 5])
@given(data=st.data())
def test_frobenius_additive(p, data):
    R = ring(p)
    f = Polynomial(R, data.draw(sparse_polys(p)))
    g = Polynomial(R, data.draw(sparse_polys(p)))
    for e in (1, 2):
        assert (f + g).frobenius(e) == f.frobenius(e) + g.frobenius(e)


@pytest.mark.parametrize("p", [3, 7])
@given(data=st.data())
def test_arithmetic_against_dicts_and_evaluation(p, data):
    R = ring(p)
    a, b = data.draw(sparse_polys(p)), data.draw(sparse_polys(p))
    f, g = Polynomial(R, a), Polynomial(R, b)
    assert (f * g).terms == oracles.mul(a, b, p)
    assert (f + g).terms == oracles.add(a, b, p)
    assert (f - f).is_zero()
    for pt in itertools.product(range(p), repeat=2):
        assert oracles.evaluate((f * g).terms, pt, p) == \
            oracles.evaluate(a, pt, p) * oracles.evaluate(b, pt, p) % p


@pytest.mark.parametrize("n", [0, 1, 2, 5, 13, 26])
def test_pow_matches_repeated_product(n):
    R = ring(3)
    f = R("x + 2*y + 1")
    assert (f ** n).terms == oracles.power(f.terms, n, 3, 2)


@pytest.mark.parametrize("order", [GREVLEX, LEX, block_elimination(1)])
@given(st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=3, max_size=3))
def test_monomial_order_axioms(order, monos):
    a, b, c = monos
    zero = (0, 0, 0)
    if a != b:
        assert order.greater(a, b) != order.greater(b, a)
    if a != zero:
        assert order.greater(a, zero)
    if order.greater(a, b):
        ac = tuple(x + y for x, y in zip(a, c))
        bc = tuple(x + y for x, y in zip(b, c))
        assert order.greater(ac, bc)
    if order.greater(a, b) and order.greater(b, c):
        assert order.greater(a, c)


def test_grevlex_and_lex_differ():
    assert GREVLEX.greater((1, 1, 0), (2, 0, 0)) is False
    assert GREVLEX.greater((0, 0, 3), (1, 1, 0))
    assert LEX.greater((1, 0, 0), (0, 5, 5))


@pytest.mark.parametrize("text,canonical", [
    ("3*y^2 + x^2*y", "x^2*y + 3*y^2"),
    ("xy + yx", "2*x*y"),
    ("(x+y)^2", "x^2 + 2*x*y + y^2"),
    ("x**3 - 1", "x^3 + 4"),
    ("-x", "4*x"),
    ("0", "0"),
    ("2(x+1)y", "2*x*y + 2*y"),
])
def test_canonical_text(text, canonical):
    R = ring(5)
    assert str(R(text)) == canonical
    assert R(str(R(text))) == R(text)


@pytest.mark.parametrize("text,fragment", [
    ("x + w", "unknown variable 'w'"),
    ("x +", "unexpected end"),
    ("x^y", "exponent"),
    ("(x + y", "expected ')'"),
    ("x $ y", "unexpected character"),
])
def test_parse_errors_carry_positions(text, fragment):
    with pytest.raises(ParseError) as info:
        ring(5)(text)
    assert fragment in str(info.value)
    assert info.value.pos is not None


@pytest.mark.parametrize("p", [0, 1, 4, 2**31 + 11, 91])
def test_bad_characteristic(p):
    with pytest.raises(ValueError):
        check_prime(p)


def test_large_prime_coefficients_stay_exact():
    p = 2147483647
    R = Ring(p, ("x",))
    f = R(f"{p - 1}*x + {p - 2}")
    assert f * f == R("x^2 + 4*x + 4")


def test_exponent_overflow_is_loud():
    R = ring(2)
    with pytest.raises(ExponentOverflow):
        R("x^3").frobenius(31)


def test_ring_mismatch_rejected():
    with pytest.raises(ValueError):
        ring(2)("x") + ring(3)("x")


def test_order_kind_validated():
    with pytest.raises(ValueError):
        MonomialOrder("revlex")
