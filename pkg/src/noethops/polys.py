"""Exact polynomial and rational-function arithmetic in split variable blocks.

Values live in Q[z1..zn, w1..wp] (class :class:`Poly`) or in the fraction
field Q(z1..zn) of the base block (class :class:`RatFunc`).  Coefficients are
``fractions.Fraction``, so everything in this module is exact; nothing here
touches floating point.

The monomial order used for division, leading terms and canonical printing is
lexicographic with the w-block ranked above the z-block and ascending variable
index inside each block.  The zero polynomial has an empty term map and degree
``NEG_INF``.

All values are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian


NEG_INF = float("-inf")

Var = tuple  # ("z", j) or ("w", k), zero-based index


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class DenominatorVanishes(ArithmeticError):
    """A rational function was evaluated on the zero set of its denominator."""


class PolyParseError(ValueError):
    """Malformed textual polynomial or operator input."""


# ---------------------------------------------------------------------------
# multi-index helpers

@dataclass(frozen=True)
class MultiIndex:
    """A block-tagged exponent vector.

    ``block`` is ``"z"`` (base directions) or ``"w"`` (normal directions).
    The order |m| is always computed from the entries, never stored.
    """

    exponents: tuple
    block: str = "z"

    def __post_init__(self):
        if self.block not in ("z", "w"):
            raise ValueError(f"unknown block {self.block!r}")
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent in multi-index")
        object.__setattr__(self, "exponents", exps)

    @property
    def order(self) -> int:
        return sum(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)


def as_exponents(m) -> tuple:
    """Accept a MultiIndex or a plain iterable of exponents."""
    if isinstance(m, MultiIndex):
        return m.exponents
    return tuple(int(e) for e in m)


def multi_le(a, b) -> bool:
    a, b = as_exponents(a), as_exponents(b)
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


def multi_add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(as_exponents(a), as_exponents(b)))


def multi_sub(a, b) -> tuple:
    d = tuple(x - y for x, y in zip(as_exponents(a), as_exponents(b)))
    if any(e < 0 for e in d):
        raise ValueError("multi-index subtraction went negative")
    return d


def multi_binom(m, k) -> int:
    """Componentwise product of binomial coefficients C(m_i, k_i)."""
    return math.prod(math.comb(a, b) for a, b in zip(as_exponents(m), as_exponents(k)))


def multi_factorial(m) -> int:
    return math.prod(math.factorial(e) for e in as_exponents(m))


def multinomial(total: int, alpha) -> int:
    """total! / (alpha! * (total - |alpha|)!) for a multi-index alpha."""
    alpha = as_exponents(alpha)
    rest = total - sum(alpha)
    if rest < 0:
        raise ValueError("multinomial with |alpha| > total")
    return math.factorial(total) // (multi_factorial(alpha) * math.factorial(rest))


def box(M) -> list:
    """All multi-indices gamma <= M componentwise, sorted by (|gamma|, gamma)."""
    M = as_exponents(M)
    out = [tuple(g) for g in _cartesian(*(range(mi + 1) for mi in M))]
    out.sort(key=lambda g: (sum(g), g))
    return out


def ball(n: int, d: int) -> list:
    """All multi-indices in n variables with |alpha| <= d, sorted by (|alpha|, alpha)."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], d, n)
    out.sort(key=lambda g: (sum(g), g))
    return out


def ball_count(n: int, d: int) -> int:
    """Number of multi-indices alpha in n variables with |alpha| <= d."""
    return math.comb(n + d, n)


# ---------------------------------------------------------------------------
# polynomials

def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def _order_key(key):
    ze, we = key
    return (we, ze)


class Poly:
    """Sparse exact polynomial in blocks z1..zn and w1..wp.

    Terms are stored as a map ``(z_exponents, w_exponents) -> Fraction`` with
    no zero coefficients, so equal polynomials have identical term maps.
    Instances are value-like: do not mutate ``terms``.
    """

    __slots__ = ("n", "p", "terms", "_hash")

    def __init__(self, n: int, p: int, terms=None):
        self.n = n
        self.p = p
        clean = {}
        if terms:
            for (ze, we), c in terms.items():
                c = _as_fraction(c)
                if not c:
                    continue
                ze, we = tuple(ze), tuple(we)
                if len(ze) != n or len(we) != p:
                    raise ValueError("exponent length does not match dims")
                clean[(ze, we)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n, p):
        return cls(n, p)

    @classmethod
    def const(cls, c, n, p):
        c = _as_fraction(c)
        if not c:
            return cls(n, p)
        return cls(n, p, {((0,) * n, (0,) * p): c})

    @classmethod
    def one(cls, n, p):
        return cls.const(1, n, p)

    @classmethod
    def z_var(cls, j, n, p):
        ze = tuple(1 if i == j else 0 for i in range(n))
        return cls(n, p, {(ze, (0,) * p): Fraction(1)})

    @classmethod
    def w_var(cls, k, n, p):
        we = tuple(1 if i == k else 0 for i in range(p))
        return cls(n, p, {((0,) * n, we): Fraction(1)})

    @classmethod
    def monomial(cls, ze, we, c=1):
        ze, we = tuple(ze), tuple(we)
        return cls(len(ze), len(we), {(ze, we): _as_fraction(c)})

    # -- basic queries -------------------------------------------------------

    @property
    def dims(self):
        return (self.n, self.p)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(ze) and not any(we) for ze, we in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(((0,) * self.n, (0,) * self.p), Fraction(0))

    def is_w_free(self) -> bool:
        return all(not any(we) for _, we in self.terms)

    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(ze) + sum(we) for ze, we in self.terms)

    def degree_in(self, var) -> int:
        blk, idx = var
        pos = 0 if blk == "z" else 1
        if not self.terms:
            return 0
        return max(key[pos][idx] for key in self.terms)

    def w_degrees(self) -> tuple:
        """Componentwise maximum of w-exponents (all zeros for w-free)."""
        out = [0] * self.p
        for _, we in self.terms:
            for i, e in enumerate(we):
                if e > out[i]:
                    out[i] = e
        return tuple(out)

    def variables(self) -> list:
        seen = set()
        for ze, we in self.terms:
            for j, e in enumerate(ze):
                if e:
                    seen.add(("z", j))
            for k, e in enumerate(we):
                if e:
                    seen.add(("w", k))
        return sorted(seen)

    def leading_key(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=_order_key)

    def coeff(self, ze, we) -> Fraction:
        return self.terms.get((tuple(ze), tuple(we)), Fraction(0))

    def by_w(self) -> dict:
        """Decompose as sum_we (z-only Poly) * w^we."""
        out = {}
        for (ze, we), c in self.terms.items():
            out.setdefault(we, {})[(ze, (0,) * self.p)] = c
        return {we: Poly(self.n, self.p, t) for we, t in out.items()}

    # -- ring structure ------------------------------------------------------

    def _check_dims(self, other):
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {other.dims}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.n, self.p)
        self._check_dims(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, Fraction(0)) + c
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        out = Poly(self.n, self.p)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly(self.n, self.p)
        out.terms = {key: -c for key, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.n, self.p)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Poly(self.n, self.p)
            out = Poly(self.n, self.p)
            out.terms = {key: v * c for key, v in self.terms.items()}
            return out
        self._check_dims(other)
        terms = {}
        for (ze1, we1), c1 in self.terms.items():
            for (ze2, we2), c2 in other.terms.items():
                key = (multi_add(ze1, ze2), multi_add(we1, we2))
                s = terms.get(key, Fraction(0)) + c1 * c2
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        out = Poly(self.n, self.p)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.n, self.p)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.n, self.p)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.dims == other.dims and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.p, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitutions -------------------------------------------

    def partial(self, var) -> "Poly":
        """Formal partial derivative along the variable id ("z", j) or ("w", k)."""
        blk, idx = var
        pos = 0 if blk == "z" else 1
        size = self.n if blk == "z" else self.p
        if not 0 <= idx < size:
            raise ValueError(f"variable {var} outside dims {self.dims}")
        terms = {}
        for (ze, we), c in self.terms.items():
            exps = ze if pos == 0 else we
            e = exps[idx]
            if e == 0:
                continue
            lowered = exps[:idx] + (e - 1,) + exps[idx + 1:]
            key = (lowered, we) if pos == 0 else (ze, lowered)
            terms[key] = terms.get(key, Fraction(0)) + c * e
        return Poly(self.n, self.p, terms)

    def partial_multi(self, m_w, beta_z) -> "Poly":
        """Iterated derivative (d/dw)^m (d/dz)^beta."""
        out = self
        for k, e in enumerate(as_exponents(m_w)):
            for _ in range(e):
                out = out.partial(("w", k))
        for j, e in enumerate(as_exponents(beta_z)):
            for _ in range(e):
                out = out.partial(("z", j))
        return out

    def restrict_w0(self) -> "Poly":
        """Drop every term with a nonzero w-exponent (evaluation at w = 0)."""
        terms = {key: c for key, c in self.terms.items() if not any(key[1])}
        out = Poly(self.n, self.p)
        out.terms = terms
        return out

    def substitute_tilt(self, b) -> "Poly":
        """Substitute z_j -> zeta_j + sum_k b[k][j] eta_k and w_k -> eta_k.

        ``b`` is a constant p x n rational matrix (anything with ``rows`` or a
        nested sequence).  The output is read in (zeta, eta) blocks of the
        same dims.
        """
        rows = getattr(b, "rows", b)
        rows = tuple(tuple(_as_fraction(x) for x in r) for r in rows)
        if len(rows) != self.p or any(len(r) != self.n for r in rows):
            raise ValueError("tilt matrix must be p x n")
        z_images = []
        for j in range(self.n):
            img = Poly.z_var(j, self.n, self.p)
            for k in range(self.p):
                if rows[k][j]:
                    img = img + Poly.w_var(k, self.n, self.p) * rows[k][j]
            z_images.append(img)
        out = Poly(self.n, self.p)
        for (ze, we), c in self.terms.items():
            term = Poly.monomial((0,) * self.n, we, c)
            for j, e in enumerate(ze):
                if e:
                    term = term * (z_images[j] ** e)
            out = out + term
        return out

    def truncate_w(self, M) -> "Poly":
        """Drop terms whose w-exponent is not <= M componentwise."""
        M = as_exponents(M)
        terms = {key: c for key, c in self.terms.items() if multi_le(key[1], M)}
        out = Poly(self.n, self.p)
        out.terms = terms
        return out

    def evaluate(self, zvals, wvals=None) -> Fraction:
        zvals = tuple(_as_fraction(v) for v in zvals)
        if len(zvals) != self.n:
            raise ValueError("evaluation point does not match dims")
        if wvals is None:
            if not self.is_w_free():
                raise ValueError("w values required for a polynomial with w terms")
            wvals = (Fraction(0),) * self.p
        else:
            wvals = tuple(_as_fraction(v) for v in wvals)
            if len(wvals) != self.p:
                raise ValueError("evaluation point does not match dims")
        total = Fraction(0)
        for (ze, we), c in self.terms.items():
            v = c
            for x, e in zip(zvals, ze):
                if e:
                    v *= x ** e
            for x, e in zip(wvals, we):
                if e:
                    v *= x ** e
            total += v
        return total

    def eval_z(self, zvals) -> Fraction:
        """Evaluate a w-free polynomial at a rational z-point."""
        if not self.is_w_free():
            raise ValueError("eval_z on a polynomial with w terms")
        return self.evaluate(zvals, (0,) * self.p)

    # -- division -------------------------------------------------------------

    def divmod_by(self, f: "Poly"):
        """Single-divisor lex division: self = q*f + r, no monomial of r
        divisible by the leading monomial of f."""
        self._check_dims(f)
        if f.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        fkey = f.leading_key()
        fze, fwe = fkey
        fc = f.terms[fkey]
        q = Poly(self.n, self.p)
        r = Poly(self.n, self.p)
        rem = self
        while not rem.is_zero():
            key = rem.leading_key()
            ze, we = key
            if all(a >= b for a, b in zip(ze, fze)) and all(
                a >= b for a, b in zip(we, fwe)
            ):
                mono = Poly.monomial(multi_sub(ze, fze), multi_sub(we, fwe),
                                     rem.terms[key] / fc)
                q = q + mono
                rem = rem - mono * f
            else:
                t = Poly.monomial(ze, we, rem.terms[key])
                r = r + t
                rem = rem - t
        return q, r

    def exact_divide(self, f: "Poly") -> "Poly":
        """Return q with self = q*f, or raise NotDivisible."""
        q, r = self.divmod_by(f)
        if not r.is_zero():
            raise NotDivisible(f"{self} is not divisible by {f}")
        return q

    def divisible_by(self, f: "Poly") -> bool:
        return self.divmod_by(f)[1].is_zero()

    # -- printing -------------------------------------------------------------

    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"Poly({self.n},{self.p}: {poly_to_str(self)})"


def monomial_str(ze, we) -> str:
    parts = []
    for j, e in enumerate(ze):
        if e == 1:
            parts.append(f"z{j + 1}")
        elif e > 1:
            parts.append(f"z{j + 1}^{e}")
    for k, e in enumerate(we):
        if e == 1:
            parts.append(f"w{k + 1}")
        elif e > 1:
            parts.append(f"w{k + 1}^{e}")
    return "*".join(parts)


def poly_to_str(p: Poly) -> str:
    """Canonical text form; parse/print round-trips are bit-exact."""
    if p.is_zero():
        return "0"
    bits = []
    for key in sorted(p.terms, key=_order_key, reverse=True):
        c = p.terms[key]
        mono = monomial_str(*key)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = f"{mag}"
        if not bits:
            bits.append(body if c > 0 else f"-{body}")
        else:
            bits.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(bits)


_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[zw]\d+|\^|\*|\+|-|$)")


def _tokenize_poly(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            raise PolyParseError(f"bad token at ...{text[pos:pos + 12]!r}")
        tok = m.group(1)
        if tok:
            out.append(tok)
        pos = m.end()
        if not tok:
            break
    return out


def parse_poly(text: str, n: int, p: int) -> Poly:
    """Parse the textual syntax, e.g. ``3/2*z1^2*w2 - w1*w2``.

    Whitespace-insensitive; variables are z1..zn and w1..wp.
    """
    toks = _tokenize_poly(text)
    if not toks:
        raise PolyParseError("empty polynomial text")
    result = Poly.zero(n, p)
    i = 0

    def parse_factor(i):
        tok = toks[i]
        if re.fullmatch(r"\d+/\d+|\d+", tok):
            return Fraction(tok), None, i + 1
        m = re.fullmatch(r"([zw])(\d+)", tok)
        if not m:
            raise PolyParseError(f"expected factor, got {tok!r}")
        blk, idx = m.group(1), int(m.group(2)) - 1
        size = n if blk == "z" else p
        if not 0 <= idx < size:
            raise PolyParseError(f"variable {tok} outside dims ({n},{p})")
        e = 1
        j = i + 1
        if j < len(toks) and toks[j] == "^":
            if j + 1 >= len(toks) or not re.fullmatch(r"\d+", toks[j + 1]):
                raise PolyParseError("expected integer exponent after ^")
            e = int(toks[j + 1])
            j += 2
        return None, (blk, idx, e), j

    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i] in "+-":
            if toks[i] == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise PolyParseError("dangling sign")
        coeff = Fraction(sign)
        ze, we = [0] * n, [0] * p
        while True:
            c, var, i = parse_factor(i)
            if c is not None:
                coeff *= c
            else:
                blk, idx, e = var
                if blk == "z":
                    ze[idx] += e
                else:
                    we[idx] += e
            if i < len(toks) and toks[i] == "*":
                i += 1
                continue
            break
        result = result + Poly.monomial(tuple(ze), tuple(we), coeff)
    return result


# ---------------------------------------------------------------------------
# gcd machinery (used only by explicit normalization)

def _coeffs_in(p: Poly, var) -> list:
    """Coefficient polynomials of p viewed as univariate in var."""
    blk, idx = var
    pos = 0 if blk == "z" else 1
    d = p.degree_in(var)
    buckets = [dict() for _ in range(d + 1)]
    for (ze, we), c in p.terms.items():
        exps = ze if pos == 0 else we
        e = exps[idx]
        lowered = exps[:idx] + (0,) + exps[idx + 1:]
        key = (lowered, we) if pos == 0 else (ze, lowered)
        buckets[e][key] = buckets[e].get(key, Fraction(0)) + c
    return [Poly(p.n, p.p, b) for b in buckets]


def _from_coeffs(coeffs, var, n, p) -> Poly:
    blk, idx = var
    v = Poly.z_var(idx, n, p) if blk == "z" else Poly.w_var(idx, n, p)
    out = Poly.zero(n, p)
    power = Poly.one(n, p)
    for c in coeffs:
        out = out + c * power
        power = power * v
    return out


def _int_content_normalize(p: Poly) -> Poly:
    """Scale to integer coefficients with content 1 and positive leading term."""
    if p.is_zero():
        return p
    den = math.lcm(*(c.denominator for c in p.terms.values()))
    nums = [c.numerator * (den // c.denominator) for c in p.terms.values()]
    g = math.gcd(*nums)
    scale = Fraction(den, g)
    out = p * scale
    if out.terms[out.leading_key()] < 0:
        out = -out
    return out


def _pseudo_rem(A: Poly, B: Poly, var) -> Poly:
    dB = B.degree_in(var)
    lB = _coeffs_in(B, var)[dB]
    blk, idx = var
    n, p = A.n, A.p
    v = Poly.z_var(idx, n, p) if blk == "z" else Poly.w_var(idx, n, p)
    R = A
    while not R.is_zero() and R.degree_in(var) >= dB:
        dR = R.degree_in(var)
        lR = _coeffs_in(R, var)[dR]
        R = lB * R - lR * (v ** (dR - dB)) * B
    return R


def _gcd_rec(a: Poly, b: Poly, vars_) -> Poly:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    live = [v for v in vars_ if a.degree_in(v) > 0 or b.degree_in(v) > 0]
    if not live:
        return Poly.one(a.n, a.p)
    var = live[0]
    rest = live[1:]

    def content_pp(q):
        if q.degree_in(var) == 0:
            return q, Poly.one(q.n, q.p)
        coeffs = [c for c in _coeffs_in(q, var) if not c.is_zero()]
        cont = coeffs[0]
        for c in coeffs[1:]:
            cont = _gcd_rec(cont, c, rest)
        return cont, q.exact_divide(cont)

    ca, pa = content_pp(a)
    cb, pb = content_pp(b)
    cg = _gcd_rec(ca, cb, rest)
    A, B = (pa, pb) if pa.degree_in(var) >= pb.degree_in(var) else (pb, pa)
    if B.degree_in(var) == 0:
        # one argument is free of var after content extraction
        return cg if B.is_constant() and not B.is_zero() else cg * _gcd_rec(A, B, rest)
    while True:
        R = _pseudo_rem(A, B, var)
        if R.is_zero():
            g = B
            break
        if R.degree_in(var) == 0:
            g = Poly.one(a.n, a.p)
            break
        coeffs = [c for c in _coeffs_in(R, var) if not c.is_zero()]
        cont = coeffs[0]
        for c in coeffs[1:]:
            cont = _gcd_rec(cont, c, rest)
        A, B = B, R.exact_divide(cont)
    if g.degree_in(var) > 0:
        coeffs = [c for c in _coeffs_in(g, var) if not c.is_zero()]
        cont = coeffs[0]
        for c in coeffs[1:]:
            cont = _gcd_rec(cont, c, rest)
        g = g.exact_divide(cont)
    return cg * g


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, normalized to integer-primitive form with a
    positive leading coefficient; gcd(0, 0) = 0."""
    if a.is_zero() and b.is_zero():
        return a
    a._check_dims(b)
    g = _gcd_rec(a, b, sorted(set(a.variables()) | set(b.variables())))
    return _int_content_normalize(g)


# ---------------------------------------------------------------------------
# rational functions over the z-block

class RatFunc:
    """Quotient of two w-free polynomials; equality by cross-multiplication.

    Not forced gcd-reduced on every operation; :meth:`normalize` is the
    explicit reduction call.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None):
        if den is None:
            den = Poly.one(num.n, num.p)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not num.is_w_free() or not den.is_w_free():
            raise ValueError("RatFunc parts must be w-free")
        num._check_dims(den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c, n, p):
        return cls(Poly.const(c, n, p), Poly.one(n, p))

    @classmethod
    def from_poly(cls, q: Poly):
        return cls(q, Poly.one(q.n, q.p))

    @property
    def dims(self):
        return self.num.dims

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, *self.dims)
        raise TypeError(f"cannot mix RatFunc with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * o.den) == (o.num * self.den)

    def __hash__(self):
        r = self.normalize()
        return hash((r.num, r.den))

    def normalize(self) -> "RatFunc":
        """Explicit gcd reduction; the denominator becomes integer-primitive
        with a positive leading coefficient."""
        if self.num.is_zero():
            return RatFunc(Poly.zero(*self.dims), Poly.one(*self.dims))
        g = poly_gcd(self.num, self.den)
        num = self.num.exact_divide(g)
        den = self.den.exact_divide(g)
        canon = _int_content_normalize(den)
        # carry the scalar adjustment over to the numerator
        scale = canon.terms[canon.leading_key()] / den.terms[den.leading_key()]
        return RatFunc(num * scale, canon)

    def as_poly(self) -> Poly:
        """Clear the denominator; raise NotDivisible if the value is not
        polynomial."""
        if self.den.is_constant():
            return self.num * (1 / self.den.constant_value())
        return self.num.exact_divide(self.den)

    def evaluate(self, zvals) -> Fraction:
        d = self.den.eval_z(zvals)
        if d == 0:
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {tuple(zvals)}")
        return self.num.eval_z(zvals) / d

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return poly_to_str(self.num)
        return f"({poly_to_str(self.num)})/({poly_to_str(self.den)})"

    def __repr__(self):
        return f"RatFunc({self})"
