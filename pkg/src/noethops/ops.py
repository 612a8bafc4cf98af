"""Noetherian-operator candidates and their module arithmetic over Q(z).

A :class:`DiffOp` is a finite sum of terms c(z) * d_w^m d_z^beta, applied to a
polynomial and then restricted to w = 0, optionally precomposed with
multiplication by a polynomial ``pre_mult``.  Two operators are equal as maps
into functions on the base iff their expanded normal forms (pre_mult = 1)
carry equal term maps; :meth:`DiffOp.expand` computes that normal form by the
Leibniz rule.

Module membership over the generic scalars Q(z) is decided by clearing
denominators and running fraction-free (Bareiss) elimination on the finite
coefficient matrix indexed by (m, beta), with the deterministic pivot order
(|m|, m, |beta|, beta).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .ideals import IdealSpec
from .polys import (
    Poly,
    PolyParseError,
    RatFunc,
    as_exponents,
    box,
    multi_binom,
    multi_sub,
    parse_poly,
    poly_to_str,
)


@dataclass(frozen=True)
class TiltMatrix:
    """Constant p x n rational matrix b tilting the submersion w -> eta,
    z -> zeta + b^T eta; row k holds the vector attached to direction w_k."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(
            tuple(Fraction(x) for x in r) for r in self.rows
        )
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged tilt matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def p(self):
        return len(self.rows)

    @property
    def n(self):
        return len(self.rows[0]) if self.rows else 0

    def row(self, k):
        return self.rows[k]


def _coerce_coeff(c, n, p) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, Poly):
        return RatFunc.from_poly(c)
    return RatFunc.const(c, n, p)


def _term_sort_key(key):
    m, beta = key
    return (sum(m), m, sum(beta), beta)


class DiffOp:
    """Finite sum of c(z) * d_w^m d_z^beta |_(w=0), precomposed with
    multiplication by ``pre_mult``."""

    __slots__ = ("n", "p", "terms", "pre_mult")

    def __init__(self, n, p, terms=None, pre_mult=None):
        self.n = n
        self.p = p
        clean = {}
        if terms:
            for (m, beta), c in terms.items():
                m, beta = tuple(m), tuple(beta)
                if len(m) != p or len(beta) != n:
                    raise ValueError("operator index lengths do not match dims")
                c = _coerce_coeff(c, n, p)
                if not c.is_zero():
                    clean[(m, beta)] = c
        self.terms = clean
        self.pre_mult = pre_mult if pre_mult is not None else Poly.one(n, p)
        if self.pre_mult.dims != (n, p):
            raise ValueError("pre_mult dims mismatch")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, n, p):
        return cls(n, p)

    @classmethod
    def identity(cls, n, p):
        return cls(n, p, {((0,) * p, (0,) * n): Fraction(1)})

    @classmethod
    def partial_w(cls, k, n, p):
        m = tuple(1 if i == k else 0 for i in range(p))
        return cls(n, p, {(m, (0,) * n): Fraction(1)})

    @classmethod
    def partial_z(cls, j, n, p):
        beta = tuple(1 if i == j else 0 for i in range(n))
        return cls(n, p, {((0,) * p, beta): Fraction(1)})

    @classmethod
    def mixed_partial(cls, m, beta, n, p):
        return cls(n, p, {(tuple(as_exponents(m)), tuple(as_exponents(beta))): Fraction(1)})

    # -- queries --------------------------------------------------------------

    @property
    def dims(self):
        return (self.n, self.p)

    def is_expanded(self) -> bool:
        return self.pre_mult == Poly.one(self.n, self.p)

    def is_zero(self) -> bool:
        return not self.expand().terms

    def order_w(self) -> tuple:
        """Componentwise maximum of the w-orders m (of the expanded form)."""
        op = self.expand()
        out = [0] * self.p
        for m, _ in op.terms:
            for i, e in enumerate(m):
                out[i] = max(out[i], e)
        return tuple(out)

    def order_z(self) -> tuple:
        op = self.expand()
        out = [0] * self.n
        for _, beta in op.terms:
            for i, e in enumerate(beta):
                out[i] = max(out[i], e)
        return tuple(out)

    def coeff(self, m, beta) -> RatFunc:
        return self.terms.get((tuple(m), tuple(beta)), RatFunc.const(0, self.n, self.p))

    def is_constant_coeff(self) -> bool:
        return self.is_expanded() and all(
            c.den.is_constant() and c.num.is_constant() for c in self.terms.values()
        )

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self.dims != other.dims:
            return False
        a, b = self.expand(), other.expand()
        keys = set(a.terms) | set(b.terms)
        zero = RatFunc.const(0, self.n, self.p)
        return all(a.terms.get(k, zero) == b.terms.get(k, zero) for k in keys)

    def __hash__(self):
        raise TypeError("DiffOp is unhashable; compare expanded forms instead")

    # -- algebra --------------------------------------------------------------

    def scale(self, c) -> "DiffOp":
        op = self.expand()
        c = _coerce_coeff(c, self.n, self.p)
        return DiffOp(self.n, self.p, {k: v * c for k, v in op.terms.items()})

    def __add__(self, other):
        if self.dims != other.dims:
            raise ValueError("dims mismatch")
        a, b = self.expand(), other.expand()
        terms = dict(a.terms)
        for k, c in b.terms.items():
            s = terms.get(k)
            terms[k] = c if s is None else s + c
        return DiffOp(self.n, self.p, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def with_premult(self, a: Poly) -> "DiffOp":
        return DiffOp(self.n, self.p, self.terms, self.pre_mult * a)

    # -- action ---------------------------------------------------------------

    def apply_rat(self, phi: Poly) -> RatFunc:
        """Apply to a polynomial; the result is a rational function of z."""
        if phi.dims != self.dims:
            raise ValueError(f"dims mismatch {self.dims} vs {phi.dims}")
        psi = self.pre_mult * phi
        total = RatFunc.const(0, self.n, self.p)
        for (m, beta), c in self.terms.items():
            g = psi.partial_multi(m, beta).restrict_w0()
            if not g.is_zero():
                total = total + c * RatFunc.from_poly(g)
        return total

    def apply(self, phi: Poly) -> Poly:
        """Apply and clear denominators to a w-free Poly (raises NotDivisible
        when the value is genuinely non-polynomial)."""
        r = self.apply_rat(phi)
        if r.den.is_constant():
            return r.as_poly()
        return r.normalize().as_poly()

    def apply_full(self, phi: Poly) -> Poly:
        """Unrestricted action of a constant-coefficient operator (no w = 0)."""
        if not self.is_constant_coeff():
            raise ValueError("apply_full needs an expanded constant-coefficient operator")
        out = Poly.zero(self.n, self.p)
        for (m, beta), c in self.terms.items():
            scalar = c.num.constant_value() / c.den.constant_value()
            out = out + phi.partial_multi(m, beta) * scalar
        return out

    # -- normal form ----------------------------------------------------------

    def expand(self) -> "DiffOp":
        """Leibniz-expand the pre-multiplication into the unique normal form
        with pre_mult = 1; apply(expand(op), phi) == apply(op, phi)."""
        if self.is_expanded():
            return self
        a = self.pre_mult
        terms = {}
        for (m, beta), c in self.terms.items():
            for m1 in box(m):
                for b1 in box(beta):
                    da = a.partial_multi(m1, b1).restrict_w0()
                    if da.is_zero():
                        continue
                    factor = multi_binom(m, m1) * multi_binom(beta, b1)
                    key = (multi_sub(m, m1), multi_sub(beta, b1))
                    add = c * RatFunc.from_poly(da * factor)
                    s = terms.get(key)
                    terms[key] = add if s is None else s + add
        return DiffOp(self.n, self.p, terms)

    # -- printing -------------------------------------------------------------

    def __str__(self):
        return op_to_str(self)

    def __repr__(self):
        return f"DiffOp({self.n},{self.p}: {op_to_str(self)})"


# ---------------------------------------------------------------------------
# constructors from tilted submersions

def tilt_derivative(b_column, k: int, n: int, p: int) -> DiffOp:
    """First-order operator d/dw_k + sum_j b_j d/dz_j for a constant tilt."""
    b = tuple(Fraction(x) for x in b_column)
    if len(b) != n:
        raise ValueError("tilt column must have one entry per z variable")
    terms = {(tuple(1 if i == k else 0 for i in range(p)), (0,) * n): Fraction(1)}
    for j, bj in enumerate(b):
        if bj:
            terms[((0,) * p, tuple(1 if i == j else 0 for i in range(n)))] = bj
    return DiffOp(n, p, terms)


def power_compose(ops, gamma) -> DiffOp:
    """Expanded composition D_p^(gamma_p) ... D_1^(gamma_1) of first-order
    constant-coefficient tilt derivatives."""
    gamma = as_exponents(gamma)
    if len(ops) != len(gamma):
        raise ValueError("one operator per exponent entry required")
    if not ops:
        raise ValueError("empty composition")
    n, p = ops[0].dims
    for op in ops:
        if op.dims != (n, p):
            raise ValueError("dims mismatch in composition")
        if not op.is_constant_coeff():
            raise ValueError("power_compose accepts constant coefficients only")
        if any(sum(m) + sum(beta) > 1 for m, beta in op.terms):
            raise ValueError("power_compose accepts first-order operators only")
    result = {((0,) * p, (0,) * n): Fraction(1)}
    for op, e in zip(ops, gamma):
        plain = {
            key: c.num.constant_value() / c.den.constant_value()
            for key, c in op.terms.items()
        }
        for _ in range(e):
            nxt = {}
            for (m1, b1), c1 in result.items():
                for (m2, b2), c2 in plain.items():
                    key = (
                        tuple(a + b for a, b in zip(m1, m2)),
                        tuple(a + b for a, b in zip(b1, b2)),
                    )
                    nxt[key] = nxt.get(key, Fraction(0)) + c1 * c2
            result = {k: c for k, c in nxt.items() if c}
    return DiffOp(n, p, result)


# ---------------------------------------------------------------------------
# module membership over Q(z)

@dataclass
class ModuleCombination:
    """Exact coefficients h_i with op = sum_i h_i * gens_i, valid off the
    zero set of the denominators."""

    coeffs: list

    def denominator_locus(self) -> Poly:
        loci = []
        for h in self.coeffs:
            r = h.normalize()
            if not r.den.is_constant() and all(r.den != d for d in loci):
                loci.append(r.den)
        if not loci:
            n, p = self.coeffs[0].dims if self.coeffs else (0, 0)
            return Poly.one(n, p)
        out = loci[0]
        for d in loci[1:]:
            out = out * d
        return out


def _bareiss_solve(rows, ncols):
    """Echelon-solve [A | b] with Poly entries; returns coefficient list of
    RatFunc or None when inconsistent.  Free columns get coefficient 0."""
    if not rows:
        return []
    n, p = rows[0][0].dims
    nrows = len(rows)
    prev = Poly.one(n, p)
    pivots = []
    pr = 0
    for col in range(ncols):
        pivot = None
        for r in range(pr, nrows):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != pr:
            rows[pr], rows[pivot] = rows[pivot], rows[pr]
        lead = rows[pr][col]
        for r in range(pr + 1, nrows):
            if all(rows[r][c].is_zero() for c in range(col, ncols + 1)):
                continue
            rc = rows[r][col]
            for c in range(ncols + 1):
                num = lead * rows[r][c] - rc * rows[pr][c]
                rows[r][c] = num.exact_divide(prev) if not num.is_zero() else num
        prev = lead
        pivots.append((pr, col))
        pr += 1
    for r in range(pr, nrows):
        if all(rows[r][c].is_zero() for c in range(ncols)) and not rows[r][ncols].is_zero():
            return None
    sol = [RatFunc.const(0, n, p) for _ in range(ncols)]
    for r, c in reversed(pivots):
        acc = RatFunc.from_poly(rows[r][ncols])
        for c2 in range(c + 1, ncols):
            if not rows[r][c2].is_zero():
                acc = acc - RatFunc.from_poly(rows[r][c2]) * sol[c2]
        sol[c] = (acc / RatFunc.from_poly(rows[r][c])).normalize()
    return sol


def module_membership(op: DiffOp, gens) -> ModuleCombination | None:
    """Solve op = sum h_i * gens_i over Q(z); None means not in the module
    generated generically by ``gens``."""
    gens = [g.expand() for g in gens]
    target = op.expand()
    n, p = target.dims
    for g in gens:
        if g.dims != (n, p):
            raise ValueError("dims mismatch among operators")
    # reflexivity: a listed generator gets the unit coefficient vector
    for i, g in enumerate(gens):
        if g == target:
            coeffs = [RatFunc.const(1 if j == i else 0, n, p)
                      for j in range(len(gens))]
            return ModuleCombination(coeffs=coeffs)
    keys = sorted(
        set(target.terms) | {k for g in gens for k in g.terms},
        key=_term_sort_key,
    )
    zero = RatFunc.const(0, n, p)
    rows = []
    for key in keys:
        entries = [g.terms.get(key, zero) for g in gens]
        entries.append(target.terms.get(key, zero))
        dens = []
        for e in entries:
            if not e.den.is_constant() and all(e.den != d for d in dens):
                dens.append(e.den)
        clear = Poly.one(n, p)
        for d in dens:
            clear = clear * d
        row = [(e * RatFunc.from_poly(clear)).as_poly() for e in entries]
        rows.append(row)
    sol = _bareiss_solve(rows, len(gens))
    if sol is None:
        return None
    # exact verification of the certificate
    check = DiffOp.zero(n, p)
    for h, g in zip(sol, gens):
        check = check + g.scale(h)
    if check != target:
        raise AssertionError("internal error: membership certificate failed")
    return ModuleCombination(coeffs=sol)


# ---------------------------------------------------------------------------
# the Noetherian property

@dataclass(frozen=True)
class NoetherianCheck:
    """Finite Leibniz check record: multipliers z^delta w^gamma ran over the
    componentwise boxes delta <= bound_z, gamma <= bound_w."""

    ok: bool
    bound_w: tuple
    bound_z: tuple
    witness: tuple | None = None  # (generator index, delta, gamma)

    def __bool__(self):
        return self.ok


def verify_noetherian_check(op: DiffOp, ideal: IdealSpec) -> NoetherianCheck:
    opx = op.expand()
    if opx.dims != ideal.dims:
        raise ValueError("dims mismatch between operator and ideal")
    bw, bz = opx.order_w(), opx.order_z()
    if not opx.terms:
        return NoetherianCheck(True, bw, bz)
    n, p = opx.dims
    for i, f in enumerate(ideal.gens):
        for gamma in box(bw):
            wmon = Poly.monomial((0,) * n, gamma)
            for delta in box(bz):
                g = Poly.monomial(delta, (0,) * p) * wmon * f
                if not opx.apply_rat(g).is_zero():
                    return NoetherianCheck(False, bw, bz, (i, delta, gamma))
    return NoetherianCheck(True, bw, bz)


def verify_noetherian(op: DiffOp, ideal: IdealSpec) -> bool:
    """True iff the operator annihilates the ideal on the base.

    The check runs over monomial multipliers bounded componentwise by the
    operator order; by the Leibniz rule larger multipliers contribute no new
    conditions at w = 0.
    """
    return verify_noetherian_check(op, ideal).ok


# ---------------------------------------------------------------------------
# textual operator syntax

def _coeff_str(c: RatFunc) -> str:
    if c.den.is_constant() and c.den.constant_value() == 1:
        q = c.num
        if len(q.terms) == 1:
            return poly_to_str(q)
        return f"({poly_to_str(q)})"
    return f"({poly_to_str(c.num)})/({poly_to_str(c.den)})"


def _dmono_str(m, beta) -> str:
    parts = []
    for j, e in enumerate(beta):
        if e == 1:
            parts.append(f"dz{j + 1}")
        elif e > 1:
            parts.append(f"dz{j + 1}^{e}")
    for k, e in enumerate(m):
        if e == 1:
            parts.append(f"dw{k + 1}")
        elif e > 1:
            parts.append(f"dw{k + 1}^{e}")
    return "*".join(parts)


def op_to_str(op: DiffOp) -> str:
    """Canonical operator text, e.g. ``z1*dw1 + z2*dw2``; round-trips exactly
    on expanded normal forms."""
    body_terms = []
    for key in sorted(op.terms, key=_term_sort_key):
        c = op.terms[key]
        dmono = _dmono_str(*key)
        cs = _coeff_str(c)
        if dmono:
            if cs == "1":
                body_terms.append(dmono)
            elif cs == "-1":
                body_terms.append(f"-{dmono}")
            else:
                body_terms.append(f"{cs}*{dmono}")
        else:
            body_terms.append(cs)
    if not body_terms:
        body = "0"
    else:
        body = body_terms[0]
        for t in body_terms[1:]:
            body += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    if op.pre_mult == Poly.one(op.n, op.p):
        return body
    return f"{body} ; premult: {poly_to_str(op.pre_mult)}"


_OP_TOKEN = re.compile(r"\s*(\(|\)|\d+/\d+|\d+|d[zw]\d+|[zw]\d+|\^|\*|/|\+|-|$)")


def _tokenize_op(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _OP_TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            raise PolyParseError(f"bad operator token at ...{text[pos:pos + 12]!r}")
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
        if not m.group(1):
            break
    return out


def parse_op(text: str, n: int, p: int) -> DiffOp:
    """Parse operator text like ``z1*dw1 + z2*dw2`` or ``dz1^2*dw2``; an
    optional `` ; premult: <poly>`` suffix precomposes a multiplication."""
    pre = Poly.one(n, p)
    if ";" in text:
        body, _, tail = text.partition(";")
        tail = tail.strip()
        if not tail.startswith("premult:"):
            raise PolyParseError("expected 'premult:' after ';'")
        pre = parse_poly(tail[len("premult:"):], n, p)
        text = body
    toks = _tokenize_op(text)
    if not toks:
        raise PolyParseError("empty operator text")
    terms = {}
    i = 0

    def read_group(i):
        # parenthesized polynomial, optionally followed by /( polynomial )
        depth, j = 1, i + 1
        while j < len(toks) and depth:
            if toks[j] == "(":
                depth += 1
            elif toks[j] == ")":
                depth -= 1
            j += 1
        if depth:
            raise PolyParseError("unbalanced parenthesis")
        num = parse_poly(" ".join(toks[i + 1:j - 1]), n, p)
        if j < len(toks) and toks[j] == "/":
            if j + 1 >= len(toks) or toks[j + 1] != "(":
                raise PolyParseError("expected '(' after '/'")
            depth, k = 1, j + 2
            while k < len(toks) and depth:
                if toks[k] == "(":
                    depth += 1
                elif toks[k] == ")":
                    depth -= 1
                k += 1
            if depth:
                raise PolyParseError("unbalanced parenthesis")
            den = parse_poly(" ".join(toks[j + 2:k - 1]), n, p)
            return RatFunc(num, den), k
        return RatFunc.from_poly(num), j

    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i] in "+-":
            if toks[i] == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise PolyParseError("dangling sign")
        coeff = RatFunc.const(sign, n, p)
        m, beta = [0] * p, [0] * n
        while True:
            tok = toks[i]
            if tok == "(":
                c, i = read_group(i)
                coeff = coeff * c
            elif re.fullmatch(r"\d+/\d+|\d+", tok):
                coeff = coeff * Fraction(tok)
                i += 1
            elif re.fullmatch(r"d[zw]\d+", tok):
                blk, idx = tok[1], int(tok[2:]) - 1
                size = n if blk == "z" else p
                if not 0 <= idx < size:
                    raise PolyParseError(f"{tok} outside dims ({n},{p})")
                e, j = 1, i + 1
                if j < len(toks) and toks[j] == "^":
                    e = int(toks[j + 1])
                    j += 2
                if blk == "z":
                    beta[idx] += e
                else:
                    m[idx] += e
                i = j
            elif re.fullmatch(r"[zw]\d+", tok):
                blk, idx = tok[0], int(tok[1:]) - 1
                if blk == "w":
                    raise PolyParseError("w variables cannot appear in coefficients")
                if not 0 <= idx < n:
                    raise PolyParseError(f"{tok} outside dims ({n},{p})")
                e, j = 1, i + 1
                if j < len(toks) and toks[j] == "^":
                    e = int(toks[j + 1])
                    j += 2
                mono = Poly.z_var(idx, n, p) ** e
                coeff = coeff * RatFunc.from_poly(mono)
                i = j
            else:
                raise PolyParseError(f"unexpected token {tok!r}")
            if i < len(toks) and toks[i] == "*":
                i += 1
                continue
            break
        key = (tuple(m), tuple(beta))
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    return DiffOp(n, p, terms, pre)
