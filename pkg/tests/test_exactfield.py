import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veechsalem.exactfield import (INF, RatPoly, add, element_minpoly, embed, euler_phi,
                                   field_create, inv, is_integral, isolate_real_roots, mul, neg,
                                   parse_poly, squarefree_part, sturm_count, two_cos_minpoly)

from oracles import numeric_real_root_count, random_element, random_squarefree, resultant_minpoly

FIELDS = (10, 14, 20, 36)

fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))


@st.composite
def elements(draw, N=None):
    F = field_create(draw(st.sampled_from(FIELDS)) if N is None else N)
    return F([draw(fractions) for _ in range(F.degree)])


@st.composite
def triples(draw):
    N = draw(st.sampled_from(FIELDS))
    return tuple(draw(elements(N)) for _ in range(3))


# two_cos_minpoly ----------------------------------------------------------


@pytest.mark.parametrize("N, text", [(7, "x^3 + x^2 - 2*x - 1"), (20, "x^4 - 5*x^2 + 5"), (4, "x")])
def test_two_cos_minpoly_examples(N, text):
    assert two_cos_minpoly(N) == parse_poly(text)


def test_two_cos_minpoly_vanishes_at_its_cosine():
    # direct substitution oracle for N = 7: 2cos(2pi/7) ~ 1.247
    with mpmath.workprec(200):
        x = 2 * mpmath.cos(2 * mpmath.pi / 7)
        assert abs(x ** 3 + x ** 2 - 2 * x - 1) < mpmath.mpf(2) ** -190


@pytest.mark.parametrize("N", range(3, 65))
def test_two_cos_minpoly_degree_and_largest_root(N):
    p = two_cos_minpoly(N)
    assert p.degree == max(1, euler_phi(N) // 2)
    top = isolate_real_roots(p, 128)[0]
    with mpmath.workprec(160):
        val = 2 * mpmath.cos(2 * mpmath.pi / N)
        lo = mpmath.mpf(top.lo.numerator) / top.lo.denominator
        hi = mpmath.mpf(top.hi.numerator) / top.hi.denominator
        slack = mpmath.mpf(2) ** -150  # rational roots give point intervals
        assert lo - slack <= val <= hi + slack
    assert top.width <= Fraction(1, 2 ** 128)


# field_create and embeddings ---------------------------------------------


def test_field_examples():
    F = field_create(10)
    assert F.degree == 2
    assert np.allclose(sorted(F.float_roots(), reverse=True), [1.6180339887, -0.6180339887])
    F3 = field_create(3)
    assert F3.degree == 1 and F3.float_roots() == [-1.0]
    # theta = 2cos(pi/7); its conjugates are 2cos(3pi/7 * ...) up to order
    F14 = field_create(14)
    assert F14.degree == 3
    expect = sorted((2 * math.cos(math.pi * k / 7) for k in (1, 3, 5)), reverse=True)
    assert np.allclose(sorted(F14.float_roots(), reverse=True), expect)
    assert F14.identity == 0 and abs(F14.float_roots()[0] - 1.8019377358) < 1e-9


def test_isolating_widths_default_64_bits():
    for N in FIELDS:
        for iv in field_create(N).embeddings:
            assert iv.width <= Fraction(1, 2 ** 64)


def test_embed_one_is_exact_everywhere():
    F = field_create(36)
    for sg in range(F.degree):
        lo, hi = embed(F.one, sg, 64)
        assert lo == hi == 1


def test_double_angle_conjugates():
    # theta = 2cos(pi/14) in N = 28; theta^2 - 2 = 2cos(pi/7)
    F = field_create(28)
    a = F.gen * F.gen - 2
    lo, hi = embed(F.gen, F.identity, 64)
    assert abs(float(lo) - 1.9498558244) < 1e-9 and hi - lo <= Fraction(1, 2 ** 64)
    assert abs(a.embed_float(F.identity) - 2 * math.cos(math.pi / 7)) < 1e-14
    conj = sorted({round(a.embed_float(s), 12) for s in range(F.degree)})
    assert np.allclose(conj, sorted(2 * math.cos(math.pi * k / 7) for k in (1, 3, 5)))
    assert element_minpoly(a) == parse_poly("x^3 - x^2 - 2*x + 1")


def test_embedding_is_a_ring_homomorphism():
    rng = np.random.default_rng(3)
    F = field_create(36)
    for _ in range(20):
        a, b = random_element(F, rng), random_element(F, rng)
        for sg in range(F.degree):
            lhs = (a * b).embed_float(sg)
            rhs = a.embed_float(sg) * b.embed_float(sg)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


# arithmetic ---------------------------------------------------------------


@settings(max_examples=150)
@given(triples())
def test_ring_axioms(abc):
    a, b, c = abc
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(a, b) == mul(b, a)
    assert add(a, neg(a)) == a.field.zero
    assert mul(a, a.field.one) == a


@settings(max_examples=100)
@given(elements())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            inv(a)
    else:
        assert mul(a, inv(a)) == a.field.one


def test_theta_inverse():
    F = field_create(14)
    assert mul(F.gen, inv(F.gen)) == F.one


def test_mixing_fields_is_rejected():
    with pytest.raises(ValueError):
        field_create(10).gen + field_create(14).gen


# minimal polynomials -----------------------------------------------------


def test_minpoly_examples():
    F = field_create(14)
    assert element_minpoly(F.gen) == F.minpoly.monic()
    assert element_minpoly(F(Fraction(3, 2))) == RatPoly([Fraction(-3, 2), 1])


@settings(max_examples=25)
@given(elements())
def test_minpoly_matches_resultant_oracle(a):
    p = element_minpoly(a)
    assert p == resultant_minpoly(a)
    assert a.field.degree % p.degree == 0


# Sturm --------------------------------------------------------------------


def test_sturm_examples():
    assert sturm_count(parse_poly("x^2 - 2"), 0, 2) == 1
    p = parse_poly("x^3 - 2*x^2 - x + 1")
    assert sturm_count(p, 1, INF) == 1
    assert sturm_count(p, -1, 1) == 2
    assert sturm_count(p, -INF, INF) == 3


def test_sturm_counts_half_open_interval():
    p = parse_poly("x^2 - 1")
    assert sturm_count(p, -1, 1) == 1  # (-1, 1] holds only the root 1


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32 - 1))
def test_sturm_matches_numeric_roots(seed):
    p = random_squarefree(np.random.default_rng(seed))
    assert sturm_count(p, -INF, INF) == numeric_real_root_count(p)


def test_squarefree_part_removes_repeated_roots():
    p = parse_poly("x^3 - 3*x + 2")  # (x - 1)^2 (x + 2)
    assert squarefree_part(p).monic() == parse_poly("x^2 + x - 2")


# integrality and serialization -------------------------------------------


def test_is_integral_examples():
    assert not is_integral(parse_poly("x - 1/2"))
    assert is_integral(parse_poly("x - 3"))
    # trace polynomial of the q = 7 element: y = 2x in x^3 - 2x^2 - x + 1, made monic
    half = parse_poly("x^3 - 2*x^2 - x + 1")
    tr = half.scale_arg(Fraction(1, 2)).monic()
    assert tr == parse_poly("x^3 - 4*x^2 - 4*x + 8")
    assert is_integral(tr)


def test_polynomial_json_round_trip():
    p = parse_poly("x^5 - 39/2*x^4 - 47*x^3 - 243/8*x^2 - 17/16*x + 89/32")
    assert p.to_json()[0] == "89/32"
    assert RatPoly.from_json(p.to_json()) == p


def test_field_descriptor():
    d = field_create(10).to_json()
    assert d["N"] == 10 and len(d["embeddings"]) == 2 and d["minpoly"] == ["-1/1", "-1/1", "1/1"]
