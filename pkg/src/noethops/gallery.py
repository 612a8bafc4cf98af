"""Worked golden constructions used across tests, fixtures and demos.

``thick_line(m)`` is the simplest non-reduced structure: the ideal <w^(m+1)>
on the line {w = 0} in C^2.  ``pinched_plane()`` is a non-reduced structure
on the plane {w1 = w2 = 0} in C^4 that is free over the base away from the
origin but pinches there; its operator module needs a first-order operator
with polynomial coefficients vanishing at the pinch point.
"""

from __future__ import annotations

from fractions import Fraction

from .ideals import IdealSpec
from .noether import ResidueDatum
from .ops import DiffOp
from .polys import Poly, parse_poly


def thick_line(m: int) -> IdealSpec:
    """<w^(m+1)> in C^2 with base line {w = 0}; dims (1, 1)."""
    return IdealSpec(gens=(parse_poly(f"w1^{m + 1}", 1, 1),), dims=(1, 1),
                     M=(m,), label=f"thick-line-{m}")


def thick_line_data(m: int) -> list:
    return [ResidueDatum(Poly.one(1, 1), (m,))]


def thick_line_mixed_partials(m: int) -> list:
    """The coordinate-invariant family d^k/dz^j dw^(k-j), 0 <= j <= k <= m."""
    return [
        DiffOp.mixed_partial((k - j,), (j,), 1, 1)
        for k in range(m + 1)
        for j in range(k + 1)
    ]


_PINCH_GENS = ("w1^2", "w2^2", "w1*w2", "w1*z2 - w2*z1")


def pinched_plane() -> IdealSpec:
    """Non-reduced structure on the plane {w = 0} in C^4; free over the base
    away from the origin, pinched at 0; dims (2, 2), truncation M = (1, 1)."""
    return IdealSpec(gens=tuple(parse_poly(s, 2, 2) for s in _PINCH_GENS),
                     dims=(2, 2), M=(1, 1), label="pinched-plane")


def pinched_plane_data() -> list:
    """Residue data: the unit density at order (0,0) and the density
    z1*w2 + z2*w1 at order (1,1)."""
    return [
        ResidueDatum(Poly.one(2, 2), (0, 0)),
        ResidueDatum(parse_poly("z1*w2 + z2*w1", 2, 2), (1, 1)),
    ]


def pinched_plane_expected_ops() -> dict:
    """Expanded normal forms the second residue datum must produce, keyed by
    the derivative index (m, beta)."""
    out = {}
    for (m, beta), text in (
        (((1, 0), (0, 0)), "z2"),
        (((0, 1), (0, 0)), "z1"),
        (((0, 0), (1, 0)), "0"),
        (((0, 0), (0, 1)), "0"),
        (((1, 0), (1, 0)), "z2*dz1"),
        (((0, 1), (1, 0)), "1 + z1*dz1"),
        (((1, 0), (0, 1)), "1 + z2*dz2"),
        (((0, 1), (0, 1)), "z1*dz2"),
        (((1, 1), (0, 0)), "z1*dw1 + z2*dw2"),
    ):
        from .ops import parse_op

        out[(m, beta)] = parse_op(text, 2, 2) if text != "0" else DiffOp.zero(2, 2)
    return out


def pinched_plane_display_family() -> list:
    """The reduced six-operator family behind the closing norm display:
    |phi|^2 + |z|^2 |d phi/dz1|^2 + |z|^2 |d phi/dz2|^2
    + |z1 d phi/dw1 + z2 d phi/dw2|^2."""
    n, p = 2, 2
    z1 = parse_poly("z1", n, p)
    z2 = parse_poly("z2", n, p)
    fam = [DiffOp.identity(n, p)]
    for j in range(2):
        fam.append(DiffOp.partial_z(j, n, p).scale(z1))
        fam.append(DiffOp.partial_z(j, n, p).scale(z2))
    last = DiffOp.partial_w(0, n, p).scale(z1) + DiffOp.partial_w(1, n, p).scale(z2)
    fam.append(last)
    return fam


def circle(n_ambient: int = 2) -> Poly:
    """The unit circle z1^2 + z2^2 - 1 in ambient dims (n_ambient, 0)."""
    return parse_poly("z1^2 + z2^2 - 1", n_ambient, 0)


def sample_points_grid(count: int, avoid_axes: bool = True) -> list:
    """Deterministic rational sample points in the base plane."""
    out = []
    side = 1
    while side * side < count:
        side += 1
    for i in range(1, side + 1):
        for j in range(1, side + 1):
            out.append((Fraction(i), Fraction(j)))
            if len(out) == count:
                return out
    return out


def sample_points_line(count: int) -> list:
    return [(Fraction(t),) for t in range(1, count + 1)]
