"""DiffOp action, expansion, composition, module membership, verification."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noethops.ideals import IdealSpec
from noethops.ops import (
    DiffOp,
    TiltMatrix,
    module_membership,
    op_to_str,
    parse_op,
    power_compose,
    tilt_derivative,
    verify_noetherian,
    verify_noetherian_check,
)
from noethops.polys import Poly, RatFunc, parse_poly

from conftest import random_poly


def P(text, n=2, p=2):
    return parse_poly(text, n, p)


def OP(text, n=2, p=2):
    return parse_op(text, n, p)


# ---------------------------------------------------------------------------
# apply

def test_apply_first_order_pair():
    op = OP("z1*dw1 + z2*dw2")
    assert op.apply(P("w1")) == P("z1")
    assert op.apply(P("w2")) == P("z2")


def test_apply_identity():
    op = DiffOp.identity(1, 1)
    z = Poly.z_var(0, 1, 1)
    assert op.apply(z * z) == z * z


def test_apply_with_premult():
    op = parse_op("dw1 ; premult: w1", 1, 1)
    assert op.apply(Poly.one(1, 1)) == Poly.one(1, 1)


def test_apply_dims_mismatch():
    with pytest.raises(ValueError):
        DiffOp.identity(1, 1).apply(P("z1"))


def test_apply_rat_with_rational_coefficients():
    op = OP("(z2)/(z1)*dw1")
    val = op.apply_rat(P("w1"))
    assert val == RatFunc(P("z2").restrict_w0(), P("z1").restrict_w0())


# ---------------------------------------------------------------------------
# expand

def test_expand_derivative_after_multiplication():
    op = parse_op("dw1 ; premult: w1", 1, 1)
    assert op.expand() == DiffOp.identity(1, 1)


def test_expand_no_premult_unchanged():
    op = OP("z1*dw1 + dz2")
    assert op.expand() is op


def test_expand_pinched_recipe():
    recipe = parse_op("dw1*dw2 ; premult: z1*w2 + z2*w1", 2, 2)
    assert recipe.expand() == OP("z1*dw1 + z2*dw2")


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6),
       st.integers(min_value=0, max_value=10 ** 6))
def test_expand_soundness(seed_op, seed_phi):
    rng = random.Random(seed_op)
    a = random_poly(rng, 2, 2, degree=2, terms=3)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        m = (rng.randint(0, 1), rng.randint(0, 1))
        beta = (rng.randint(0, 1), rng.randint(0, 1))
        terms[(m, beta)] = random_poly(rng, 2, 2, degree=1, terms=2).restrict_w0()
    op = DiffOp(2, 2, terms, pre_mult=a)
    phi = random_poly(random.Random(seed_phi), 2, 2)
    assert op.expand().apply_rat(phi) == op.apply_rat(phi)


def test_apply_linear_over_base_scalars(rng):
    op = OP("z1*dw1 + z2*dw2 + dz1")
    xi = P("z1^2 - z2").restrict_w0()
    phi = random_poly(rng, 2, 2)
    psi = random_poly(rng, 2, 2)
    assert op.scale(xi).apply_rat(phi) == RatFunc.from_poly(xi) * op.apply_rat(phi)
    assert op.apply_rat(phi + psi) == op.apply_rat(phi) + op.apply_rat(psi)


# ---------------------------------------------------------------------------
# tilt derivatives and composition

def test_tilt_derivative_examples():
    assert tilt_derivative((0,), 0, 1, 1) == OP("dw1", 1, 1)
    assert tilt_derivative((1,), 0, 1, 1) == OP("dw1 + dz1", 1, 1)
    assert tilt_derivative((2, 0), 0, 2, 2) == OP("dw1 + 2*dz1")


def test_binomial_tilt_expansion():
    # (d/dw + b d/dz)^k carries coefficients b^j * C(k, j)
    b = Fraction(3, 2)
    D = tilt_derivative((b,), 0, 1, 1)
    for k in range(5):
        comp = power_compose([D], (k,))
        for j in range(k + 1):
            expected = b ** j * math.comb(k, j)
            got = comp.coeff((k - j,), (j,))
            assert got == RatFunc.const(expected, 1, 1)


def test_power_compose_identity():
    D = tilt_derivative((1,), 0, 1, 1)
    assert power_compose([D], (0,)) == DiffOp.identity(1, 1)


def test_power_compose_two_directions():
    D1 = tilt_derivative((1, 0), 0, 2, 2)
    D2 = tilt_derivative((0, 0), 1, 2, 2)
    assert power_compose([D1, D2], (1, 1)) == OP("dw1*dw2 + dz1*dw2")


def test_power_compose_rejects_nonconstant():
    bad = OP("z1*dw1")
    with pytest.raises(ValueError):
        power_compose([bad, OP("dw2")], (1, 1))


# ---------------------------------------------------------------------------
# module membership

def test_membership_linear_elimination():
    target = OP("dw1", 1, 1)
    gens = [OP("dw1 + z1*dz1", 1, 1), OP("dz1", 1, 1)]
    comb = module_membership(target, gens)
    assert comb is not None
    assert comb.coeffs[0] == RatFunc.const(1, 1, 1)
    assert comb.coeffs[1] == RatFunc(parse_poly("-z1", 1, 1))


def test_higher_derivation_outside_span():
    target = OP("dz1^2", 1, 1)
    gens = [DiffOp.identity(1, 1), OP("dz1", 1, 1), OP("dw1", 1, 1)]
    assert module_membership(target, gens) is None


def test_vandermonde_inversion_combination():
    # order-1 tilts at b = 0 and b = 1 recover d/dz with coefficients (-1, 1)
    L0 = power_compose([tilt_derivative((0,), 0, 1, 1)], (1,))
    L1 = power_compose([tilt_derivative((1,), 0, 1, 1)], (1,))
    comb = module_membership(OP("dz1", 1, 1), [L0, L1])
    assert comb is not None
    assert comb.coeffs[0] == RatFunc.const(-1, 1, 1)
    assert comb.coeffs[1] == RatFunc.const(1, 1, 1)


def test_membership_reflexive_and_scaling(rng):
    gens = [OP("z1*dw1 + z2*dw2"), OP("dz1"), DiffOp.identity(2, 2)]
    for i, g in enumerate(gens):
        comb = module_membership(g, gens)
        assert comb is not None
        assert comb.coeffs[i] == RatFunc.const(1, 2, 2)
        assert all(c.is_zero() for j, c in enumerate(comb.coeffs) if j != i)
    h = RatFunc(parse_poly("z2", 2, 2), parse_poly("z1", 2, 2))
    scaled = gens[0].scale(h)
    comb = module_membership(scaled, gens)
    assert comb is not None and comb.coeffs[0] == h


def test_zero_operator_membership():
    gens = [OP("dz1", 1, 1)]
    comb = module_membership(DiffOp.zero(1, 1), gens)
    assert comb is not None and all(c.is_zero() for c in comb.coeffs)


# ---------------------------------------------------------------------------
# the Noetherian property

def test_verify_simple_cases(thick1):
    dw = DiffOp.partial_w(0, 1, 1)
    assert verify_noetherian(dw, thick1)
    reduced = IdealSpec(gens=(parse_poly("w1", 1, 1),), dims=(1, 1), M=(0,))
    assert not verify_noetherian(dw, reduced)


def test_verify_pinched_family(pinched):
    assert verify_noetherian(OP("z1*dw1 + z2*dw2"), pinched)
    assert verify_noetherian(OP("1 + z1*dz1"), pinched)
    assert not verify_noetherian(OP("dw1"), pinched)


def test_verify_records_bounds_and_witness(pinched):
    check = verify_noetherian_check(OP("dw1"), pinched)
    assert not check.ok
    assert check.bound_w == (1, 0) and check.bound_z == (0, 0)
    assert check.witness is not None


def test_verified_op_annihilates_random_elements(rng, pinched):
    from conftest import random_ideal_element

    op = OP("z1*dw1 + z2*dw2")
    for _ in range(50):
        g = random_ideal_element(rng, pinched)
        assert op.apply_rat(g).is_zero()


# ---------------------------------------------------------------------------
# text round trips

@pytest.mark.parametrize("text", [
    "z1*dw1 + z2*dw2",
    "dz1^2*dw2",
    "1 + z1*dz1",
    "(z2)/(z1)*dw1",
    "(z1 + z2)*dz2 - 3/2*dw1^2",
])
def test_operator_round_trip(text):
    op = OP(text)
    canon = op_to_str(op)
    assert op_to_str(OP(canon)) == canon
    assert OP(canon) == op


def test_premult_round_trip():
    op = parse_op("dw1*dw2 ; premult: z1*w2 + z2*w1", 2, 2)
    text = op_to_str(op)
    assert "premult:" in text
    back = parse_op(text, 2, 2)
    assert back == op and op_to_str(back) == text


def test_tilt_matrix_validation():
    t = TiltMatrix(((Fraction(1), Fraction(2)),))
    assert t.p == 1 and t.n == 2
    with pytest.raises(ValueError):
        TiltMatrix(((1, 2), (1,)))
