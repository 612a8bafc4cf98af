"""Ideal data and the brute-force bounded-degree cofactor oracle.

The oracle decides, by an exact linear solve over Q on coefficient vectors,
whether phi = sum_i g_i * f_i has a solution with deg g_i <= D.  It is
one-sided: "not found at D" never certifies non-membership.  Row spaces are
cached per (ideal, D) so sweeps over many test polynomials stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polys import Poly, _order_key, as_exponents, ball, multi_add


class CertificationFailure(ValueError):
    """The asserted truncation exponent M could not be certified."""


@dataclass(frozen=True)
class IdealSpec:
    """Generators of an ideal J plus the exponent bound M with <w^(M+1)> in J.

    Unless ``asserted`` is true, construction certifies each w_k^(M_k+1) as a
    member via the cofactor oracle at degree bound ``cert_bound``.
    """

    gens: tuple
    dims: tuple
    M: tuple
    asserted: bool = False
    cert_bound: int = 4
    label: str = ""

    def __post_init__(self):
        n, p = self.dims
        object.__setattr__(self, "dims", (int(n), int(p)))
        gens = tuple(self.gens)
        if not gens:
            raise ValueError("ideal needs at least one generator")
        for g in gens:
            if g.dims != (n, p):
                raise ValueError("generator dims do not match the ideal dims")
            if g.is_zero():
                raise ValueError("zero generator")
        M = as_exponents(self.M)
        if len(M) != p:
            raise ValueError("M must have one entry per w variable")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "M", M)
        if not self.asserted:
            for k in range(p):
                mono = Poly.w_var(k, n, p) ** (M[k] + 1)
                if not cofactor_member(mono, self, self.cert_bound):
                    raise CertificationFailure(
                        f"w{k + 1}^{M[k] + 1} not found in the ideal at degree "
                        f"bound {self.cert_bound}; raise cert_bound or pass "
                        f"asserted=True"
                    )

    @property
    def n(self):
        return self.dims[0]

    @property
    def p(self):
        return self.dims[1]

    def __str__(self):
        gens = ", ".join(str(g) for g in self.gens)
        return f"<{gens}>"


class _SpanBasis:
    """Monic echelon basis of span_Q{ mon * f_i : deg mon <= D }."""

    def __init__(self, gens, D):
        n, p = gens[0].dims
        self.rows = {}  # leading (ze, we) -> {key: Fraction}, monic
        self.max_degree = D + max(int(g.degree()) for g in gens)
        mons = ball(n + p, D)
        for g in gens:
            for mon in mons:
                ze, we = mon[:n], mon[n:]
                vec = {
                    (multi_add(kz, ze), multi_add(kw, we)): c
                    for (kz, kw), c in g.terms.items()
                }
                self._insert(vec)

    def _reduce(self, vec):
        vec = dict(vec)
        out = {}
        while vec:
            lead = max(vec, key=_order_key)
            c = vec.pop(lead)
            if not c:
                continue
            row = self.rows.get(lead)
            if row is None:
                out[lead] = c
                continue
            for key, rc in row.items():
                if key == lead:
                    continue
                s = vec.get(key, Fraction(0)) - c * rc
                if s:
                    vec[key] = s
                else:
                    vec.pop(key, None)
        return out

    def _insert(self, vec):
        red = self._reduce(vec)
        if not red:
            return
        lead = max(red, key=_order_key)
        inv = 1 / red[lead]
        self.rows[lead] = {k: c * inv for k, c in red.items()}

    def contains(self, phi: Poly) -> bool:
        if phi.is_zero():
            return True
        if phi.degree() > self.max_degree:
            return False
        return not self._reduce(phi.terms)


_SPAN_CACHE: dict = {}


def _span_for(ideal: IdealSpec, D: int) -> _SpanBasis:
    key = (ideal.gens, D)
    basis = _SPAN_CACHE.get(key)
    if basis is None:
        basis = _SpanBasis(ideal.gens, D)
        _SPAN_CACHE[key] = basis
    return basis


def cofactor_member(phi: Poly, ideal: IdealSpec, D: int) -> bool:
    """True iff cofactors g_i with total degree <= D exist for phi.

    False only means "not found at this bound".
    """
    if D < 0:
        raise ValueError("degree bound must be nonnegative")
    if phi.dims != ideal.dims:
        raise ValueError("dims mismatch between phi and the ideal")
    return _span_for(ideal, D).contains(phi)
