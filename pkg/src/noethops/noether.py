"""Construction of generating sets of Noetherian operators.

Two constructors are provided.  ``generators_from_residue_data`` emits the
mixed-partial family phi |-> d_w^m d_z^beta (a_k * phi)|_(w=0) for m <= M and
|beta| <= |M - m|, one operator per index, from residue data (a_k, M_k).
``generators_from_tilts`` realizes the same module through tilted submersions
z = zeta + b eta, w = eta: it composes first-order tilt derivatives to full
order and applies them to w^gamma * a_k * phi.

The tilt points are deterministic and the generalized Vandermonde matrices
they induce are inverted exactly; invertibility is checked, never assumed,
and the point pattern degrades gracefully when the primary sequence is
provably degenerate (see ``tilt_point_set``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ideals import IdealSpec
from .ops import DiffOp, TiltMatrix, power_compose, tilt_derivative, verify_noetherian_check
from .polys import (
    Poly,
    as_exponents,
    ball,
    ball_count,
    box,
    multi_factorial,
    multi_le,
    multinomial,
)


class SingularMatrix(ArithmeticError):
    """The chosen points are not generic; the caller advances the sequence."""


class InsufficientTilts(ValueError):
    """Not enough tilt points for the requested derivative order."""


class VerificationFailure(RuntimeError):
    """An emitted operator failed the Noetherian check; the residue data are
    inconsistent with the ideal."""


@dataclass(frozen=True)
class ResidueDatum:
    """Density a and order multi-index M of a monomial residue generator.

    The pair encodes a functional phi |-> derivatives of a*phi of order <= M
    on w = 0; a must be nonzero and M bounded by the ideal's truncation
    exponent.
    """

    a: Poly
    M: tuple

    def __post_init__(self):
        if self.a.is_zero():
            raise ValueError("degenerate residue datum: zero density")
        M = as_exponents(self.M)
        if len(M) != self.a.p:
            raise ValueError("M must have one entry per w variable")
        object.__setattr__(self, "M", M)


@dataclass(frozen=True)
class Provenance:
    """Record tying one emitted operator back to its construction index."""

    datum: int
    m: tuple | None = None
    beta: tuple | None = None
    gamma: tuple | None = None
    tilt: tuple | None = None

    def describe(self) -> str:
        bits = [f"datum={self.datum}"]
        if self.m is not None:
            bits.append(f"m={self.m}")
        if self.beta is not None:
            bits.append(f"beta={self.beta}")
        if self.gamma is not None:
            bits.append(f"gamma={self.gamma}")
        if self.tilt is not None:
            bits.append(f"tilt={self.tilt}")
        return " ".join(bits)


@dataclass(eq=False)
class NoetherianGens:
    """Ordered generating set; the object defining the pointwise norm."""

    ops: tuple
    provenance: tuple
    dims: tuple
    label: str = ""
    ideal: IdealSpec | None = None

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def describe(self) -> list:
        out = []
        for op, prov in zip(self.ops, self.provenance):
            out.append(f"[{prov.describe()}] {op}")
        return out


def _check_data(data, ideal: IdealSpec):
    for k, datum in enumerate(data):
        if datum.a.dims != ideal.dims:
            raise ValueError(f"datum {k} dims mismatch")
        if not multi_le(datum.M, ideal.M):
            raise ValueError(f"datum {k} has M beyond the ideal truncation bound")


def _verify_all(ops, provenance, ideal):
    for op, prov in zip(ops, provenance):
        check = verify_noetherian_check(op, ideal)
        if not check.ok:
            raise VerificationFailure(
                f"operator from {prov.describe()} is not Noetherian for {ideal}; "
                f"witness multiplier {check.witness}"
            )


def generators_from_residue_data(data, ideal: IdealSpec, verify: bool = True,
                                 prune: bool = False) -> NoetherianGens:
    """Mixed-partial family d_w^m d_z^beta (a_k phi)|_(w=0), m <= M_k,
    |beta| <= |M_k - m|, expanded, with per-operator provenance."""
    data = tuple(data)
    _check_data(data, ideal)
    n, p = ideal.dims
    ops, provenance = [], []
    for k, datum in enumerate(data):
        M = datum.M
        for m in box(M):
            budget = sum(M) - sum(m)
            for beta in ball(n, budget):
                raw = DiffOp(n, p, {(m, beta): Fraction(1)}, pre_mult=datum.a)
                ops.append(raw.expand())
                provenance.append(Provenance(datum=k, m=m, beta=beta))
    if verify:
        _verify_all(ops, provenance, ideal)
    if prune:
        ops, provenance = _prune(ops, provenance)
    return NoetherianGens(tuple(ops), tuple(provenance), (n, p),
                          label="residue-data", ideal=ideal)


def _prune(ops, provenance):
    from .ops import module_membership

    kept, kept_prov = [], []
    for op, prov in zip(ops, provenance):
        if op.is_zero():
            continue
        if kept and module_membership(op, kept) is not None:
            continue
        kept.append(op)
        kept_prov.append(prov)
    return kept, kept_prov


# ---------------------------------------------------------------------------
# generic points and exact Vandermonde inversion

def vandermonde_solve(points, m: int):
    """Exact inverse of the generalized Vandermonde matrix B[l][alpha] =
    (b^l)^alpha over |alpha| <= m; raises SingularMatrix if not generic.

    Rows of the inverse are indexed by alpha (in (|alpha|, alpha) order),
    columns by the points.
    """
    points = [tuple(Fraction(x) for x in pt) for pt in points]
    if not points:
        raise ValueError("no points")
    n = len(points[0])
    alphas = ball(n, m)
    if len(points) != len(alphas):
        raise ValueError(
            f"need exactly {len(alphas)} points for order {m} in {n} variables"
        )
    size = len(alphas)
    B = [
        [_power(pt, alpha) for alpha in alphas]
        for pt in points
    ]
    inv = _invert(B)
    if inv is None:
        raise SingularMatrix(f"points {points} are not generic at order {m}")
    # exact certification B * inv == I
    for i in range(size):
        for j in range(size):
            s = sum(B[i][k] * inv[k][j] for k in range(size))
            if s != (1 if i == j else 0):
                raise AssertionError("internal error: inverse certification failed")
    return inv


def _power(pt, alpha) -> Fraction:
    out = Fraction(1)
    for x, e in zip(pt, alpha):
        if e:
            out *= x ** e
    return out


def _invert(B):
    size = len(B)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(size)]
           for i, row in enumerate(B)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


_POINTS_CACHE: dict = {}


def tilt_point_set(n: int, m: int, count: int | None = None) -> list:
    """Deterministic generic points b^l in Q^n whose generalized Vandermonde
    matrices are invertible at every order m' <= m.

    Primary pattern: b^l = (l, l^2, ..., l^n), advancing the start index on a
    singular check.  For n >= 2 and m >= 2 that pattern lies on a moment
    curve with repeated exponent weights and is singular for every start, so
    the fallback b^l = (l, l^(m+1), l^((m+1)^2), ...) is used; its exponent
    weights are base-(m+1) digits, injective on the |alpha| <= m box.
    Invertibility is certified in both cases.
    """
    if count is None:
        count = ball_count(n, m)
    key = (n, m, count)
    cached = _POINTS_CACHE.get(key)
    if cached is not None:
        return cached

    def works(pts):
        for order in range(1, m + 1):
            need = ball_count(n, order)
            if need > len(pts):
                return False
            try:
                vandermonde_solve(pts[:need], order)
            except SingularMatrix:
                return False
        return True

    chosen = None
    for start in range(4):
        pts = [tuple(Fraction(l) ** e for e in range(1, n + 1))
               for l in range(start + 1, start + 1 + count)]
        if works(pts):
            chosen = pts
            break
    if chosen is None:
        base = m + 1
        for start in range(4):
            pts = [tuple(Fraction(l) ** (base ** i) for i in range(n))
                   for l in range(start + 1, start + 1 + count)]
            if works(pts):
                chosen = pts
                break
    if chosen is None:
        raise SingularMatrix(f"no generic point set found for n={n}, m={m}")
    _POINTS_CACHE[key] = chosen
    return chosen


# ---------------------------------------------------------------------------
# tilted-submersion generators

def generators_from_tilts(data, ideal: IdealSpec, points=None,
                          count: int | None = None,
                          verify: bool = True) -> NoetherianGens:
    """Family over (datum k, gamma <= M_k, tilt tuple l): the operator
    (1/M!) (d/d eta^l)^M applied to w^gamma * a_k * phi, expanded.

    Each w-direction draws its tilt column from the shared point list; the
    default list holds C_(max M_k) deterministic points per datum.
    """
    data = tuple(data)
    _check_data(data, ideal)
    n, p = ideal.dims
    ops, provenance = [], []
    for k, datum in enumerate(data):
        M = datum.M
        mmax = max(M) if M else 0
        if points is not None:
            pts = [tuple(Fraction(x) for x in pt) for pt in points]
        else:
            pts = tilt_point_set(n, mmax, count)
        if len(pts) < ball_count(n, mmax):
            raise InsufficientTilts(
                f"datum {k} needs {ball_count(n, mmax)} tilt points, got {len(pts)}"
            )
        norm = Fraction(1, multi_factorial(M))
        tuples = _index_tuples(len(pts), p)
        for gamma in box(M):
            wmon = Poly.monomial((0,) * n, gamma)
            pre = wmon * datum.a
            for ltuple in tuples:
                derivs = [
                    tilt_derivative(pts[ltuple[j]], j, n, p) for j in range(p)
                ]
                core = power_compose(derivs, M) if p else DiffOp.identity(n, p)
                op = DiffOp(n, p, core.terms, pre_mult=pre).expand().scale(norm)
                ops.append(op)
                provenance.append(Provenance(datum=k, gamma=gamma, tilt=ltuple))
    if verify:
        _verify_all(ops, provenance, ideal)
    return NoetherianGens(tuple(ops), tuple(provenance), (n, p),
                          label="tilts", ideal=ideal)


def _index_tuples(npts, p):
    if p == 0:
        return [()]
    out = [()]
    for _ in range(p):
        out = [t + (i,) for t in out for i in range(npts)]
    return out


# ---------------------------------------------------------------------------
# mixed partials in the tilt basis

@dataclass
class TiltExpansion:
    """Exact certificate d_z^beta d_w^m = sum coeff * (d/d eta^l)^gamma as
    constant-coefficient operators; ``terms`` holds (coeff, tilt, gamma)."""

    m: tuple
    beta: tuple
    terms: list
    op: DiffOp
    target: DiffOp

    def holds(self) -> bool:
        return self.op == self.target


def _split_beta(beta, caps):
    """Deterministic split beta = sum_k beta_k with |beta_k| <= caps[k]."""
    remaining = list(beta)
    parts = []
    for cap in caps:
        part = [0] * len(remaining)
        budget = cap
        for j in range(len(remaining)):
            take = min(remaining[j], budget)
            part[j] = take
            remaining[j] -= take
            budget -= take
        parts.append(tuple(part))
    if any(remaining):
        raise InsufficientTilts("|beta| exceeds the derivative budget |M - m|")
    return parts


def express_mixed_partial(m, beta, ideal_or_M, points=None) -> TiltExpansion:
    """Express d_z^beta d_w^m (m <= M, |beta| <= |M - m|) exactly in terms of
    composed tilt derivatives (d/d eta^l)^gamma with gamma <= M."""
    if isinstance(ideal_or_M, IdealSpec):
        M = ideal_or_M.M
        n, p = ideal_or_M.dims
    else:
        M = as_exponents(ideal_or_M)
        p = len(M)
        n = len(as_exponents(beta))
    m = as_exponents(m)
    beta = as_exponents(beta)
    if not multi_le(m, M):
        raise ValueError("m must be <= M componentwise")
    if sum(beta) > sum(M) - sum(m):
        raise InsufficientTilts("|beta| exceeds |M - m|")
    caps = [M[k] - m[k] for k in range(p)]
    parts = _split_beta(beta, caps)
    orders = [m[k] + sum(parts[k]) for k in range(p)]
    mmax = max(orders) if orders else 0
    if points is None:
        pts = tilt_point_set(n, mmax)
    else:
        pts = [tuple(Fraction(x) for x in pt) for pt in points]
    # per-direction solves: d_z^(beta_k) d_(w_k)^(m_k) in terms of powers of
    # the tilt derivatives of total order m_k + |beta_k|
    factors = []
    for k in range(p):
        order = orders[k]
        if order == 0:
            factors.append([(Fraction(1), None)])
            continue
        if sum(parts[k]) == 0:
            # pure w_k-derivative: an untilted submersion gives it directly
            zero_idx = next((i for i, pt in enumerate(pts) if not any(pt)), None)
            if zero_idx is not None:
                factors.append([(Fraction(1), zero_idx)])
                continue
        need = ball_count(n, order)
        if len(pts) < need:
            raise InsufficientTilts(
                f"direction {k + 1} needs {need} tilt points, got {len(pts)}"
            )
        inv = vandermonde_solve(pts[:need], order)
        alphas = ball(n, order)
        row = inv[alphas.index(parts[k])]
        scale = Fraction(1, multinomial(order, parts[k]))
        factors.append([
            (scale * row[l], l) for l in range(need) if row[l]
        ])
    # assemble the product over directions
    terms = []
    combos = [((Fraction(1)), ())]
    for k in range(p):
        combos = [
            (c * fc, idx + (l,))
            for c, idx in combos
            for fc, l in factors[k]
        ]
    n_p = (n, p)
    total = DiffOp.zero(n, p)
    gamma = tuple(orders)
    for coeff, idx in combos:
        rows = []
        for k in range(p):
            l = idx[k]
            rows.append(pts[l] if l is not None else (Fraction(0),) * n)
        tilt = TiltMatrix(tuple(rows))
        derivs = [tilt_derivative(tilt.row(k), k, n, p) for k in range(p)]
        core = power_compose(derivs, gamma) if p else DiffOp.identity(n, p)
        terms.append((coeff, tilt, gamma))
        total = total + core.scale(coeff)
    target = DiffOp.mixed_partial(m, beta, n, p)
    cert = TiltExpansion(m=m, beta=beta, terms=terms, op=total, target=target)
    if not cert.holds():
        raise AssertionError("internal error: tilt expansion certificate failed")
    return cert


# ---------------------------------------------------------------------------
# doubled hypersurfaces (square of a reduced ideal)

def double_hypersurface_generators(f: Poly) -> NoetherianGens:
    """The identity and all first partials, generating the operator module of
    the ideal <f^2> on the regular locus of {f = 0}.

    Works in an undivided ambient block (dims (N, 0)); vanishing on {f = 0}
    is tested by exact division, so f must be squarefree (caller-asserted).
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.p != 0:
        raise ValueError("ambient polynomial expected (no w block)")
    N = f.n
    ops = [DiffOp.identity(N, 0)]
    provenance = [Provenance(datum=0, m=(), beta=(0,) * N)]
    for j in range(N):
        ops.append(DiffOp.partial_z(j, N, 0))
        beta = tuple(1 if i == j else 0 for i in range(N))
        provenance.append(Provenance(datum=0, m=(), beta=beta))
    return NoetherianGens(tuple(ops), tuple(provenance), (N, 0),
                          label="double-hypersurface", ideal=None)


def double_hypersurface_member(f: Poly, phi: Poly):
    """Membership of phi in <f^2> via the operator family: every operator
    value must vanish on {f = 0}, i.e. be divisible by f.

    Returns (verdict, witness); witness is (op index, value) on failure.
    """
    gens = double_hypersurface_generators(f)
    if phi.dims != f.dims:
        raise ValueError("dims mismatch")
    for i, op in enumerate(gens.ops):
        val = op.apply(phi)
        if not val.divisible_by(f):
            return False, (i, val)
    return True, None
