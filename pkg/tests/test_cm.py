"""Monomial bases, coefficient representations, and norm domination."""

from fractions import Fraction

import pytest

from noethops.cm import (
    coefficient_norm_sq,
    coefficients_in_basis,
    domination_report,
    extraction_operators,
    monomial_basis,
    reconstruction_certified,
)
from noethops.ideals import IdealSpec
from noethops.noether import generators_from_residue_data
from noethops.polys import DenominatorVanishes, Poly, RatFunc, parse_poly

from noethops.gallery import (
    pinched_plane_data,
    thick_line,
    thick_line_mixed_partials,
)
from conftest import random_poly


def P(text, n=2, p=2):
    return parse_poly(text, n, p)


# ---------------------------------------------------------------------------
# basis computation

def test_thick_line_basis(thick2):
    basis = monomial_basis(thick2)
    assert basis.monomials == ((0,), (1,), (2,))
    for mon in basis.monomials:
        coeffs = basis.reduction[mon]
        assert [not c.is_zero() for c in coeffs] == [m == mon for m in basis.monomials]
    assert basis.denominator_locus == Poly.one(1, 1)


def test_pinched_plane_basis(pinched):
    basis = monomial_basis(pinched)
    assert basis.monomials == ((0, 0), (1, 0))
    red = basis.reduction[(0, 1)]
    assert red[0].is_zero()
    assert red[1] == RatFunc(P("z2").restrict_w0(), P("z1").restrict_w0())
    assert basis.reduction[(1, 1)] == (RatFunc.const(0, 2, 2),) * 2
    assert basis.denominator_locus == P("z1")


def test_fully_reduced_structure():
    J = IdealSpec(gens=(parse_poly("w1", 1, 2), parse_poly("w2", 1, 2)),
                  dims=(1, 2), M=(0, 0))
    basis = monomial_basis(J)
    assert basis.monomials == ((0, 0),)


# ---------------------------------------------------------------------------
# representation

def test_represent_pinched_w2(pinched):
    basis = monomial_basis(pinched)
    coeffs = coefficients_in_basis(P("w2"), basis)
    assert coeffs[0].is_zero()
    assert coeffs[1] == RatFunc(P("z2").restrict_w0(), P("z1").restrict_w0())


def test_represent_one(pinched):
    basis = monomial_basis(pinched)
    coeffs = coefficients_in_basis(Poly.one(2, 2), basis)
    assert [str(c) for c in coeffs] == ["1", "0"]


def test_represent_thick_line_truncation(thick1):
    basis = monomial_basis(thick1)
    coeffs = coefficients_in_basis(parse_poly("z1 + 3*w1", 1, 1), basis)
    assert [str(c) for c in coeffs] == ["z1", "3"]


def test_represent_idempotent(pinched):
    basis = monomial_basis(pinched)
    n, _ = basis.dims
    for j, mon in enumerate(basis.monomials):
        coeffs = coefficients_in_basis(Poly.monomial((0,) * n, mon), basis)
        assert [not c.is_zero() for c in coeffs] == [i == j for i in range(len(coeffs))]
        assert coeffs[j] == RatFunc.const(1, 2, 2)


def test_reconstruction_random(rng, pinched, thick2):
    basis5 = monomial_basis(pinched)
    basis2 = monomial_basis(thick2)
    for _ in range(20):
        assert reconstruction_certified(random_poly(rng, 2, 2), basis5)
        assert reconstruction_certified(random_poly(rng, 1, 1), basis2)


# ---------------------------------------------------------------------------
# coefficient norm

def test_norm_zero(pinched):
    basis = monomial_basis(pinched)
    assert coefficient_norm_sq(Poly.zero(2, 2), basis, (1, 1)) == 0


def test_norm_thick_line_13(thick1):
    basis = monomial_basis(thick1)
    phi = parse_poly("z1 + 3*w1", 1, 1)
    assert coefficient_norm_sq(phi, basis, (2,)) == Fraction(13)


def test_norm_pinched_w2(pinched):
    basis = monomial_basis(pinched)
    assert coefficient_norm_sq(P("w2"), basis, (1, 1)) == Fraction(1)
    assert coefficient_norm_sq(P("w2"), basis, (2, 1)) == Fraction(1, 4)


def test_norm_on_denominator_locus(pinched):
    basis = monomial_basis(pinched)
    with pytest.raises(DenominatorVanishes):
        coefficient_norm_sq(P("w2"), basis, (0, 1))


def test_triangle_inequality_on_squares(rng, pinched):
    # sqrt(A) <= sqrt(B) + sqrt(C) checked exactly on squared values
    basis = monomial_basis(pinched)
    pts = [(1, 1), (2, 3), (5, 1)]
    for _ in range(15):
        phi = random_poly(rng, 2, 2)
        psi = random_poly(rng, 2, 2)
        for pt in pts:
            A = coefficient_norm_sq(phi + psi, basis, pt)
            B = coefficient_norm_sq(phi, basis, pt)
            C = coefficient_norm_sq(psi, basis, pt)
            gap = A - B - C
            assert gap <= 0 or gap * gap <= 4 * B * C


# ---------------------------------------------------------------------------
# domination

def test_extraction_operators_act_as_coefficients(pinched, rng):
    basis = monomial_basis(pinched)
    ops = extraction_operators(basis)
    for _ in range(10):
        phi = random_poly(rng, 2, 2)
        coeffs = coefficients_in_basis(phi, basis)
        for E, c in zip(ops, coeffs):
            assert E.apply_rat(phi) == c


def test_thick_line_domination_constant_one(thick1):
    basis = monomial_basis(thick1)
    mixed = thick_line_mixed_partials(1)
    phi = parse_poly("z1 + 3*w1", 1, 1)
    rep = domination_report(basis, mixed, (2,), [phi, Poly.zero(1, 1)])
    assert rep.C_sq == 1
    assert rep.ok
    zero_row = rep.rows[1]
    assert zero_row.basic_sq == 0 and zero_row.norm_sq == 0


def test_pinched_domination(pinched, pinched_data):
    basis = monomial_basis(pinched)
    gens = generators_from_residue_data(pinched_data, pinched)
    phis = [P("1"), P("w1"), P("w2"), P("w1*z2 - w2*z1"), P("z1^2 + w1*w2")]
    rep = domination_report(basis, gens, (1, 1), phis)
    assert rep.ok
    lines = rep.lines()
    assert len(lines) == len(phis)
    assert all(line.count(";") == 4 for line in lines)
