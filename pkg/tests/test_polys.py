"""Ring arithmetic, calculus, substitutions, division, parsing."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noethops.polys import (
    NEG_INF,
    DenominatorVanishes,
    MultiIndex,
    NotDivisible,
    Poly,
    PolyParseError,
    RatFunc,
    ball,
    ball_count,
    box,
    parse_poly,
    poly_gcd,
    poly_to_str,
)

from conftest import random_poly


def P(text, n=2, p=2):
    return parse_poly(text, n, p)


# ---------------------------------------------------------------------------
# arithmetic examples

def test_difference_of_squares():
    z = Poly.z_var(0, 1, 1)
    w = Poly.w_var(0, 1, 1)
    assert (w + z) * (w - z) == w * w - z * z


def test_additive_identity():
    p = P("3*z1*w2 - w1")
    assert Poly.zero(2, 2) + p == p


def test_product_used_as_ideal_element():
    # hand expansion of (w1*z2 - w2*z1) * w1
    assert P("w1*z2 - w2*z1") * P("w1") == P("w1^2*z2 - w1*w2*z1")


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        P("z1", 1, 1) + P("z1", 2, 1)


def test_zero_degree_is_minus_infinity():
    assert Poly.zero(2, 2).degree() == NEG_INF
    assert P("1").degree() == 0


# ---------------------------------------------------------------------------
# partial derivatives

def test_power_rule():
    w = Poly.w_var(0, 1, 1)
    assert (w ** 3).partial(("w", 0)) == 3 * w * w


def test_partial_of_plane_relation():
    assert P("w1*z2 - w2*z1").partial(("z", 0)) == P("-w2")


def test_mixed_partial_unit():
    assert P("w1*w2").partial(("w", 0)).partial(("w", 1)) == Poly.one(2, 2)


def test_partial_outside_dims():
    with pytest.raises(ValueError):
        P("z1").partial(("w", 5))


# ---------------------------------------------------------------------------
# restriction to the base

def test_restrict_examples():
    z = Poly.z_var(0, 1, 1)
    w = Poly.w_var(0, 1, 1)
    assert (w + z).restrict_w0() == z
    assert (w ** 3).restrict_w0().is_zero()
    assert P("z1*w2 + z2*w1").restrict_w0().is_zero()


# ---------------------------------------------------------------------------
# tilted substitution

def test_tilt_substitution_examples():
    z = Poly.z_var(0, 1, 1)
    w = Poly.w_var(0, 1, 1)
    assert z.substitute_tilt([[1]]) == z + w
    assert w.substitute_tilt([[Fraction(7, 3)]]) == w
    assert (z * w).substitute_tilt([[1]]) == z * w + w * w


def test_tilt_shape_check():
    with pytest.raises(ValueError):
        P("z1").substitute_tilt([[1, 2, 3]])


# ---------------------------------------------------------------------------
# division

def test_exact_divide_square():
    f = P("z1^2 + z2^2 - 1", 2, 1)
    assert (f * f).exact_divide(f) == f


def test_exact_divide_not_divisible():
    f = P("z1^2 + z2^2 - 1", 2, 1)
    with pytest.raises(NotDivisible):
        (f + 1).exact_divide(f)


def test_exact_divide_mixed_blocks():
    f = P("z1^2 + z2^2 - 1", 2, 1)
    prod = P("z1", 2, 1) * f + P("w1", 2, 1) * f
    assert prod.exact_divide(f) == P("z1 + w1", 2, 1)


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        P("z1").exact_divide(Poly.zero(2, 2))


# ---------------------------------------------------------------------------
# parsing and printing

@pytest.mark.parametrize("text", [
    "3/2*z1^2*w2 - w1*w2",
    "0",
    "1",
    "-z1",
    "z1 + z2 + w1 + w2",
    "5/7 - w1^3*z2^2",
])
def test_parse_print_round_trip(text):
    p = parse_poly(text, 2, 2)
    canon = poly_to_str(p)
    assert parse_poly(canon, 2, 2) == p
    assert poly_to_str(parse_poly(canon, 2, 2)) == canon


def test_parse_whitespace_insensitive():
    assert P(" 3/2 * z1 ^ 2*w2-w1* w2 ") == P("3/2*z1^2*w2 - w1*w2")


def test_parse_rejects_garbage():
    for bad in ("z1 +", "q1", "z1^", "3//2", "z0", "w3"):
        with pytest.raises(PolyParseError):
            parse_poly(bad, 2, 2)


def test_random_round_trip(rng):
    for _ in range(60):
        p = random_poly(rng, 2, 2)
        assert parse_poly(poly_to_str(p), 2, 2) == p


# ---------------------------------------------------------------------------
# property tests: ring axioms and calculus rules

small_polys = st.builds(
    lambda seed: random_poly(random.Random(seed), 2, 2),
    st.integers(min_value=0, max_value=10 ** 6),
)


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys, small_polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(small_polys)
def test_partials_commute(p):
    for u in (("z", 0), ("z", 1), ("w", 0), ("w", 1)):
        for v in (("z", 1), ("w", 0)):
            assert p.partial(u).partial(v) == p.partial(v).partial(u)


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys)
def test_leibniz(p, q):
    for var in (("z", 0), ("w", 1)):
        lhs = (p * q).partial(var)
        rhs = p.partial(var) * q + p * q.partial(var)
        assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(small_polys, small_polys)
def test_tilt_is_ring_hom(p, q):
    b = [[Fraction(1), Fraction(-2)], [Fraction(1, 2), Fraction(3)]]
    assert (p * q).substitute_tilt(b) == p.substitute_tilt(b) * q.substitute_tilt(b)
    assert (p + q).substitute_tilt(b) == p.substitute_tilt(b) + q.substitute_tilt(b)


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys)
def test_exact_divide_round_trip(q, f):
    if f.is_zero():
        return
    assert (q * f).exact_divide(f) == q


# ---------------------------------------------------------------------------
# rational functions

def RF(num, den="1", n=2, p=0):
    return RatFunc(parse_poly(num, n, p), parse_poly(den, n, p))


def test_cross_multiplication_equality():
    assert RF("z1*z2", "z1^2") == RF("z2", "z1")
    assert RF("z1", "z2") != RF("z2", "z1")


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RF("1", "0")


def test_w_parts_rejected():
    with pytest.raises(ValueError):
        RatFunc(parse_poly("w1", 1, 1))


small_rats = st.builds(
    lambda s1, s2: RatFunc(
        random_poly(random.Random(s1), 2, 0, degree=2, terms=3),
        _nonzero(random.Random(s2)),
    ),
    st.integers(min_value=0, max_value=10 ** 6),
    st.integers(min_value=0, max_value=10 ** 6),
)


def _nonzero(rng):
    q = random_poly(rng, 2, 0, degree=2, terms=3)
    while q.is_zero():
        q = random_poly(rng, 2, 0, degree=2, terms=3)
    return q


@settings(max_examples=30, deadline=None)
@given(small_rats, small_rats, small_rats)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    if not a.is_zero():
        assert (b / a) * a == b


def test_normalize_is_explicit_and_equal():
    r = RF("z1^2*z2 + z1*z2^2", "z1^2")
    nr = r.normalize()
    assert nr == r
    assert str(nr) == "(z1*z2 + z2^2)/(z1)"


def test_evaluate_and_pole():
    r = RF("z2", "z1")
    assert r.evaluate((2, 6)) == 3
    with pytest.raises(DenominatorVanishes):
        r.evaluate((0, 1))


def test_as_poly():
    assert RF("z1^2*z2", "z1").as_poly() == parse_poly("z1*z2", 2, 0)
    with pytest.raises(NotDivisible):
        RF("z2", "z1").as_poly()


def test_gcd_examples():
    a = parse_poly("z1^2*z2", 2, 0)
    b = parse_poly("z1*z2^2", 2, 0)
    assert poly_gcd(a, b) == parse_poly("z1*z2", 2, 0)
    f = parse_poly("z1 + z2", 2, 0)
    g = parse_poly("z1 - z2", 2, 0)
    assert poly_gcd(f * g, f * f) == f


# ---------------------------------------------------------------------------
# multi-index helpers

def test_multi_index_invariants():
    m = MultiIndex((2, 0, 1), "w")
    assert m.order == 3
    assert len(m) == 3
    with pytest.raises(ValueError):
        MultiIndex((-1,), "z")
    with pytest.raises(ValueError):
        MultiIndex((1,), "x")


def test_box_and_ball():
    assert box((1, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert ball(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert ball_count(2, 2) == 6 == len(ball(2, 2))
