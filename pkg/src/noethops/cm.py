"""The structure ring as a module over the base: monomial bases, coefficient
representations, and norm-comparison certificates.

Where the quotient is free over the base with a monomial basis {w^alpha_j},
every class has a unique representative sum_j c_j(z) w^alpha_j; the basis is
computed by generic row reduction over Q(z) of the truncated presentation.
The denominator locus collects the pivot denominators and is reported, not
proven equal to the non-free locus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ideals import IdealSpec, cofactor_member
from .member import norm_eval, schur_bound_sq
from .ops import DiffOp, module_membership
from .polys import (
    DenominatorVanishes,
    Poly,
    RatFunc,
    box,
    multi_factorial,
    poly_to_str,
)


def _elimination_order(mon):
    # eliminate high degree first; within a degree eliminate the lex-smallest
    # monomial so the lex-larger one (w1 before w2) survives as basis
    return (-sum(mon), mon)


@dataclass(eq=False)
class MonomialBasis:
    """Monomial basis of the truncated quotient with its reduction matrix.

    ``reduction[gamma]`` gives the coefficients of the class of w^gamma on the
    basis monomials; reducing a basis monomial returns itself.
    """

    monomials: tuple
    reduction: dict
    denominator_locus: Poly
    ideal: IdealSpec
    tie_break: str = "low degree first, then the z1-chart monomial"

    @property
    def dims(self):
        return self.ideal.dims

    def describe(self) -> list:
        n, p = self.dims
        out = []
        for gamma in sorted(self.reduction, key=lambda g: (sum(g), g)):
            coeffs = self.reduction[gamma]
            parts = []
            for mon, c in zip(self.monomials, coeffs):
                if not c.is_zero():
                    ms = poly_to_str(Poly.monomial((0,) * n, mon)) if any(mon) else "1"
                    if not any(mon):
                        parts.append(f"{c}")
                    elif str(c) == "1":
                        parts.append(ms)
                    else:
                        parts.append(f"({c})*{ms}")
            mono = poly_to_str(Poly.monomial((0,) * n, gamma)) if any(gamma) else "1"
            out.append(f"{mono} -> " + (" + ".join(parts) if parts else "0"))
        return out


def monomial_basis(ideal: IdealSpec) -> MonomialBasis:
    """Row-reduce the truncated presentation over Q(z) and select the
    pivot-free monomials as a basis."""
    n, p = ideal.dims
    M = ideal.M
    monomials = box(M)
    zero = RatFunc.const(0, n, p)
    one = Poly.one(n, p)

    # relation vectors: truncations of w^gamma * f_i, as Q(z)-vectors over
    # the w-monomials <= M
    relations = []
    for f in ideal.gens:
        for gamma in box(M):
            vec = {}
            shifted = (Poly.monomial((0,) * n, gamma) * f).truncate_w(M)
            for we, zpoly in shifted.by_w().items():
                vec[we] = RatFunc.from_poly(zpoly)
            if vec:
                relations.append(vec)

    # full reduction (RREF) with the deterministic elimination order
    rows = {}  # pivot monomial -> {monomial: RatFunc}, monic at the pivot
    order = sorted(monomials, key=_elimination_order)

    def reduce_vec(vec):
        vec = dict(vec)
        for mon in order:
            c = vec.get(mon)
            if c is None or c.is_zero():
                continue
            row = rows.get(mon)
            if row is None:
                continue
            for k, rc in row.items():
                if k == mon:
                    continue
                s = vec.get(k, zero) - c * rc
                if s.is_zero():
                    vec.pop(k, None)
                else:
                    vec[k] = s
            vec.pop(mon)
        return {k: c for k, c in vec.items() if not c.is_zero()}

    for vec in relations:
        red = reduce_vec(vec)
        if not red:
            continue
        pivot = min(red, key=_elimination_order)
        inv = red[pivot]
        row = {k: (c / inv) for k, c in red.items()}
        row[pivot] = RatFunc.const(1, n, p)
        # back-substitute into the existing rows to keep the form reduced
        for piv2, row2 in list(rows.items()):
            c = row2.get(pivot)
            if c is None or c.is_zero():
                continue
            new2 = dict(row2)
            for k, rc in row.items():
                if k == pivot:
                    continue
                s = new2.get(k, zero) - c * rc
                if s.is_zero():
                    new2.pop(k, None)
                else:
                    new2[k] = s
            new2.pop(pivot, None)
            rows[piv2] = new2
        rows[pivot] = row

    basis = tuple(mon for mon in monomials if mon not in rows)
    index = {mon: i for i, mon in enumerate(basis)}
    reduction = {}
    for mon in monomials:
        coeffs = [zero] * len(basis)
        if mon in index:
            coeffs[index[mon]] = RatFunc.const(1, n, p)
        else:
            for k, rc in rows[mon].items():
                if k == mon:
                    continue
                if k not in index:
                    raise AssertionError("reduction row touches a pivot monomial")
                coeffs[index[k]] = (-rc).normalize()
        reduction[mon] = tuple(coeffs)

    locus = one
    seen = []
    for coeffs in reduction.values():
        for c in coeffs:
            den = c.normalize().den
            if not den.is_constant() and all(den != d for d in seen):
                seen.append(den)
                locus = locus * den
    return MonomialBasis(monomials=basis, reduction=reduction,
                         denominator_locus=locus, ideal=ideal)


def coefficients_in_basis(phi: Poly, basis: MonomialBasis) -> list:
    """Coefficients of the class of phi on the basis monomials (generic)."""
    n, p = basis.dims
    if phi.dims != (n, p):
        raise ValueError("dims mismatch")
    M = basis.ideal.M
    zero = RatFunc.const(0, n, p)
    out = [zero] * len(basis.monomials)
    # w-exponents beyond M lie in <w^(M+1)> and hence in the ideal
    for we, zpoly in phi.truncate_w(M).by_w().items():
        c = RatFunc.from_poly(zpoly)
        for i, rc in enumerate(basis.reduction[we]):
            if not rc.is_zero():
                out[i] = out[i] + c * rc
    return [c.normalize() for c in out]


def reconstruction_certified(phi: Poly, basis: MonomialBasis,
                             bound: int | None = None) -> bool:
    """Certify sum_j c_j w^alpha_j == phi mod J by clearing denominators and
    asking the cofactor oracle for the difference."""
    n, p = basis.dims
    coeffs = coefficients_in_basis(phi, basis)
    den = Poly.one(n, p)
    for c in coeffs:
        den = den * c.den
    rebuilt = Poly.zero(n, p)
    for c, mon in zip(coeffs, basis.monomials):
        rebuilt = rebuilt + c.num * den.exact_divide(c.den) * Poly.monomial((0,) * n, mon)
    diff = rebuilt - den * phi
    if diff.is_zero():
        return True
    if bound is None:
        bound = int(diff.degree()) + 2
    return cofactor_member(diff, basis.ideal, bound)


def coefficient_norm_sq(phi: Poly, basis: MonomialBasis, z0) -> Fraction:
    """Squared norm sum_j |c_j(z0)|^2 of the coefficient vector; raises
    DenominatorVanishes on the denominator locus."""
    z0 = tuple(Fraction(x) for x in z0)
    total = Fraction(0)
    for c in coefficients_in_basis(phi, basis):
        v = c.evaluate(z0)
        total += v * v
    return total


def extraction_operators(basis: MonomialBasis) -> list:
    """Coefficient-extraction operators E_j with E_j(phi) = c_j(z) for the
    representation on the basis monomials; genuine operator-module elements."""
    n, p = basis.dims
    out = []
    for j, _ in enumerate(basis.monomials):
        terms = {}
        for gamma, coeffs in basis.reduction.items():
            c = coeffs[j]
            if not c.is_zero():
                terms[(gamma, (0,) * n)] = c * Fraction(1, multi_factorial(gamma))
        out.append(DiffOp(n, p, terms))
    return out


@dataclass
class DominationRow:
    phi: Poly
    basic_sq: Fraction
    norm_sq: Fraction
    ok: bool


@dataclass
class DominationReport:
    """Per-point certificate that the coefficient norm is dominated by the
    operator norm, with the explicit transition constant C^2."""

    point: tuple
    C_sq: Fraction
    rows: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def lines(self) -> list:
        out = []
        pt = ",".join(str(x) for x in self.point)
        for r in self.rows:
            out.append(
                f"{pt}; {poly_to_str(r.phi)}; {r.basic_sq}; {r.norm_sq}; {self.C_sq}"
            )
        return out


def domination_report(basis: MonomialBasis, gens, z0, phis) -> DominationReport:
    """Check coefficient_norm_sq(phi) <= C^2 * |phi|^2 at z0 for each sample,
    with C^2 the Schur-test constant of the exact transition taking the
    generating set to the extraction operators."""
    z0 = tuple(Fraction(x) for x in z0)
    ops = list(getattr(gens, "ops", gens))
    coeff_rows = []
    for E in extraction_operators(basis):
        comb = module_membership(E, ops)
        if comb is None:
            raise ValueError("extraction operator outside the generated module")
        coeff_rows.append(comb.coeffs)
    C_sq = schur_bound_sq(coeff_rows, z0)
    rows = []
    for phi in phis:
        b = coefficient_norm_sq(phi, basis, z0)
        nv = norm_eval(phi, gens, z0)
        rows.append(DominationRow(phi=phi, basic_sq=b, norm_sq=nv.squared,
                                  ok=(b <= C_sq * nv.squared)))
    return DominationReport(point=z0, C_sq=C_sq, rows=rows)
