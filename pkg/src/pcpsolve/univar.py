"""Univariate polynomials over Q and exact real root isolation.

Root isolation is Sturm-sequence bisection started from a Cauchy bound.
Internally polynomials are scaled to primitive integer coefficient lists so
that sign evaluations at dyadic points are pure integer arithmetic.
Refinement of an isolating interval uses a secant-guided quadratic
interval refinement which falls back to bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError
from .poly import ONE, ZERO, Rational, rational_str, to_rational


_INT_PATH = 8  # from this length on, arithmetic runs on integer forms


class UPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs", "_iform")

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-to_rational(r), 1))
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self) -> Rational:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly([{', '.join(rational_str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{rational_str(mag)}*{mono}"
            else:
                body = rational_str(mag)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_upoly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_upoly(other))

    def __rsub__(self, other):
        return _as_upoly(other) - self

    def __mul__(self, other):
        other = _as_upoly(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        if len(a) >= _INT_PATH and len(b) >= _INT_PATH:
            # integer convolution, one rational normalisation per coefficient
            ia, da, _ = _int_form(self)
            ib, db, _ = _int_form(other)
            acc = [mpz(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(ia):
                if x:
                    for j, y in enumerate(ib):
                        acc[i + j] += x * y
            den = da * db
            return UPoly(mpq(c, den) for c in acc)
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative exponent")
        out = UPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        x = to_rational(x)
        if len(self.coeffs) >= _INT_PATH:
            ints, den, _ = _int_form(self)
            return _exact_value(ints, den, x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __divmod__(self, other):
        return udivrem(self, _as_upoly(other))

    def __mod__(self, other):
        return udivrem(self, _as_upoly(other))[1]

    def __floordiv__(self, other):
        return udivrem(self, _as_upoly(other))[0]

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.coeffs[-1]
        return UPoly(c * inv for c in self.coeffs)

    def derivative(self) -> "UPoly":
        return UPoly(c * k for k, c in enumerate(self.coeffs) if k)


def _as_upoly(x) -> UPoly:
    return x if isinstance(x, UPoly) else UPoly.const(x)


def udivrem(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    """Quotient and remainder with ``a = q*b + r`` and ``deg r < deg b``."""
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    r = list(a.coeffs)
    db = b.degree()
    if len(r) - 1 < db:
        return UPoly(), a
    if db + 1 >= _INT_PATH:
        return _udivrem_int(a, b)
    inv = 1 / b.coeffs[-1]
    q = [ZERO] * (len(r) - db)
    bc = b.coeffs
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c * inv
        q[k - db] = c
        off = k - db
        for j in range(db + 1):
            r[off + j] -= c * bc[j]
    return UPoly(q), UPoly(r[:db])


def _udivrem_int(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    """Division on integer forms: ``R / (S da)`` tracks the remainder."""
    ra, da, _ = _int_form(a)
    B, dbn, _ = _int_form(b)
    db = len(B) - 1
    L = B[-1]
    R = list(ra)
    S = mpz(1)
    q = [ZERO] * (len(R) - db)
    for k in range(len(R) - 1, db - 1, -1):
        c = R[k]
        if not c:
            continue
        off = k - db
        q[off] = mpq(c * dbn, S * da * L)
        if L != 1:
            R = [v * L for v in R[:k]]
            S *= L
        else:
            R = R[:k]
        for j in range(db):
            if B[j]:
                R[off + j] -= c * B[j]
    den = S * da
    return UPoly(q), UPoly(mpq(v, den) for v in R[:db])


# ---------------------------------------------------------------------------
# Integer (primitive) representation, used for gcd and sign evaluation


def _primitive(coeffs: Sequence) -> list:
    """Scale rational coefficients by a positive constant to coprime ints."""
    cs = [to_rational(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        return []
    den = mpz(1)
    for c in cs:
        den = gmpy2.lcm(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) for c in cs]
    g = mpz(0)
    for v in ints:
        g = gmpy2.gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _int_prim(ints: list) -> list:
    while ints and not ints[-1]:
        ints.pop()
    g = mpz(0)
    for v in ints:
        g = gmpy2.gcd(g, v)
        if g == 1:
            return ints
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _prem_positive(a: list, b: list) -> list:
    """Remainder of ``c*a`` by ``b`` for some positive integer ``c``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    alb = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [v * alb for v in r]
        f = sgn * lr
        for j in range(db + 1):
            r[shift + j] -= f * b[j]
        while r and not r[-1]:
            r.pop()
    return r


def _int_gcd(a: list, b: list) -> list:
    a, b = _int_prim(list(a)), _int_prim(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prim(_prem_positive(a, b))
        a, b = b, r
    return a


def _to_upoly_monic(ints: list) -> UPoly:
    return UPoly(mpq(v) for v in ints).monic()


def ugcd(ps: Sequence[UPoly]) -> UPoly:
    """Monic gcd of all inputs."""
    ps = [p for p in ps if not p.is_zero()]
    if not ps:
        raise DomainError("gcd of zero polynomials is undefined")
    g = _primitive(ps[0].coeffs)
    for p in ps[1:]:
        if len(g) == 1:
            break
        g = _int_gcd(g, _primitive(p.coeffs))
    return _to_upoly_monic(g)


def squarefree_part(p: UPoly) -> UPoly:
    """``p / gcd(p, p')`` made monic."""
    if p.is_zero():
        raise DomainError("squarefree part of the zero polynomial")
    if p.degree() < 1:
        return UPoly((1,))
    g = ugcd([p, p.derivative()])
    return udivrem(p, g)[0].monic()


def is_squarefree(p: UPoly) -> bool:
    return p.degree() < 1 or ugcd([p, p.derivative()]).degree() == 0


# ---------------------------------------------------------------------------
# Sign evaluation and Sturm sequences


def _value_num(ints: list, x: Rational):
    """Integer with the sign of ``p(x)``: ``den(x)^deg * p(x)``."""
    a, b = x.numerator, x.denominator
    d = len(ints) - 1
    if b == 1:
        acc = mpz(0)
        for c in reversed(ints):
            acc = acc * a + c
        return acc
    acc = ints[d]
    bp = mpz(1)
    for k in range(d - 1, -1, -1):
        bp *= b
        acc = acc * a + ints[k] * bp
    return acc


def _sign(ints: list, x: Rational) -> int:
    v = _value_num(ints, x)
    return (v > 0) - (v < 0)


def _sturm_chain(ints: list) -> list[list]:
    d = [ints[k] * k for k in range(1, len(ints))]
    chain = [ints, _int_prim(d)]
    while len(chain[-1]) > 1:
        r = _prem_positive(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-v for v in _int_prim(r)])
    return chain


def _variations(chain: list[list], x: Rational) -> int:
    count = 0
    last = 0
    for q in chain:
        s = _sign(q, x)
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


class _RealRoots:
    """Sturm data of a squarefree polynomial, reused across queries."""

    def __init__(self, p: UPoly):
        self.poly = p
        self.ints = _primitive(p.coeffs)
        self.chain = _sturm_chain(self.ints)
        self._var_cache: dict = {}

    def sign(self, x: Rational) -> int:
        return _sign(self.ints, x)

    def variations(self, x: Rational) -> int:
        v = self._var_cache.get(x)
        if v is None:
            v = _variations(self.chain, x)
            self._var_cache[x] = v
        return v

    def count_open(self, lo: Rational, hi: Rational) -> int:
        """Roots in the open interval ``(lo, hi)``; endpoints may be roots."""
        extra = 1 if self.sign(hi) == 0 else 0
        return self.variations(lo) - self.variations(hi) - extra

    def bound(self) -> Rational:
        """Power of two above every root's modulus.

        The smaller of the Cauchy bound ``1 + max|a_i| / |a_lead|`` and the
        Fujiwara bound ``2 max_i |a_{d-i} / a_d|^(1/i)``; the latter tracks the
        root size when the coefficients are large.
        """
        ints = self.ints
        lead = abs(ints[-1])
        m = max(abs(c) for c in ints[:-1]) if len(ints) > 1 else 0
        cauchy = 1 + mpq(m, lead)
        k = max(0, int(gmpy2.ceil(gmpy2.log2(gmpy2.mpfr(cauchy)))) + 1)
        b = mpq(2) ** k
        while b <= cauchy:
            b *= 2
        # |a_{d-i} / a_d| < 2^(bits(a_{d-i}) - bits(a_d) + 1) <= 2^(i e)
        d = len(ints) - 1
        e = 0
        lb = lead.bit_length()
        for i in range(1, d + 1):
            c = ints[d - i]
            if c:
                e = max(e, -(-(abs(c).bit_length() - lb + 1) // i))
        return min(b, mpq(2) ** (e + 1))


def sturm_count(p: UPoly, lo, hi) -> int:
    """Number of distinct real roots of squarefree ``p`` in ``(lo, hi)``."""
    lo, hi = to_rational(lo), to_rational(hi)
    if not lo < hi:
        raise DomainError("sturm_count needs lo < hi")
    if p.is_zero():
        raise DomainError("zero polynomial has infinitely many roots")
    if not is_squarefree(p):
        raise DomainError("sturm_count requires a squarefree polynomial")
    if p.degree() < 1:
        return 0
    return _RealRoots(p).count_open(lo, hi)


def count_real_roots(p: UPoly) -> int:
    """Number of distinct real roots of ``p``."""
    if p.is_zero():
        raise DomainError("zero polynomial has infinitely many roots")
    sq = squarefree_part(p)
    if sq.degree() < 1:
        return 0
    rr = _RealRoots(sq)
    b = rr.bound()
    return rr.count_open(-b, b)


# ---------------------------------------------------------------------------
# Isolation and refinement


@dataclass(frozen=True)
class IsolatedRoot:
    """``[lo, hi]`` holds exactly one real root; ``lo == hi`` means exact."""

    lo: Rational
    hi: Rational
    multiplicity_free: bool = True

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2

    def __repr__(self):
        if self.is_exact:
            return f"IsolatedRoot({rational_str(self.lo)})"
        return f"IsolatedRoot({float(self.lo):.12g}, {float(self.hi):.12g})"


def simplest_rational_between(lo: Rational, hi: Rational) -> Rational:
    """Rational with the smallest denominator in ``[lo, hi]``."""
    lo, hi = to_rational(lo), to_rational(hi)
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return ZERO
    if hi < 0:
        return -simplest_rational_between(-hi, -lo)
    fl = gmpy2.f_div(lo.numerator, lo.denominator)
    if fl == lo or fl + 1 <= hi:
        return mpq(fl) if fl == lo else mpq(fl + 1)
    # lo and hi share the integer part; recurse on reciprocals of the fractions
    inner = simplest_rational_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def _refine(rr: _RealRoots, lo: Rational, hi: Rational, width: Rational) -> tuple:
    """Shrink a sign-change interval below ``width``; may return a point."""
    ints = rr.ints
    slo = _sign(ints, lo)
    if slo == 0:
        return lo, lo
    if _sign(ints, hi) == 0:
        return hi, hi
    n = 4
    while hi - lo > width:
        w = hi - lo
        flo = mpq(_value_num(ints, lo), lo.denominator ** (len(ints) - 1))
        fhi = mpq(_value_num(ints, hi), hi.denominator ** (len(ints) - 1))
        frac = flo / (flo - fhi)
        j = int(gmpy2.f_div(frac.numerator * n + frac.denominator // 2, frac.denominator))
        j = min(max(j, 0), n)
        h = w / n
        a = lo + max(j - 1, 0) * h
        b = lo + min(j + 1, n) * h
        sa = slo if a == lo else _sign(ints, a)
        sb = -slo if b == hi else _sign(ints, b)
        if sa == 0:
            return a, a
        if sb == 0:
            return b, b
        if sa == slo and sb != slo:
            lo, hi = a, b
            n = min(n * n, 1 << 64)
            continue
        n = max(4, math.isqrt(n))
        m = (lo + hi) / 2
        sm = _sign(ints, m)
        if sm == 0:
            return m, m
        if sm == slo:
            lo = m
        else:
            hi = m
    return lo, hi


def _clear_endpoints(rr: _RealRoots, lo: Rational, hi: Rational) -> tuple:
    """Move endpoints that are roots inward by thirds (one root inside)."""
    while rr.sign(lo) == 0:
        cut = lo + (hi - lo) / 3
        if rr.sign(cut) == 0:
            return cut, cut
        if rr.count_open(lo, cut) == 1:
            hi = cut
        else:
            lo = cut
    while rr.sign(hi) == 0:
        cut = hi - (hi - lo) / 3
        if rr.sign(cut) == 0:
            return cut, cut
        if rr.count_open(cut, hi) == 1:
            lo = cut
        else:
            hi = cut
    return lo, hi


def _isolate(rr: _RealRoots, precision: Rational | None) -> list[IsolatedRoot]:
    if len(rr.ints) < 2:
        return []
    b = rr.bound()
    out: list[IsolatedRoot] = []
    stack = [(-b, b, rr.count_open(-b, b))]
    while stack:
        lo, hi, c = stack.pop()
        if c == 0:
            continue
        if c == 1:
            lo, hi = _clear_endpoints(rr, lo, hi)
            # rational roots have denominators dividing the leading
            # coefficient L, so below 1/(2 L^2) the snap test is exact
            target = mpq(1, 2 * rr.ints[-1] ** 2)
            if precision is not None and precision < target:
                target = precision
            a, z = _refine(rr, lo, hi, target)
            if a != z:
                q = simplest_rational_between(a, z)
                if rr.sign(q) == 0:
                    a = z = q
            out.append(IsolatedRoot(a, z))
            continue
        m = (lo + hi) / 2
        if rr.sign(m) == 0:
            out.append(IsolatedRoot(m, m))
            left = rr.count_open(lo, m)
            stack.append((lo, m, left))
            stack.append((m, hi, c - left - 1))
        else:
            left = rr.count_open(lo, m)
            stack.append((lo, m, left))
            stack.append((m, hi, c - left))
    out.sort(key=lambda r: r.lo)
    return out


def isolate_real_roots(p: UPoly, precision=None) -> list[IsolatedRoot]:
    """Disjoint isolating intervals, ascending, one per distinct real root.

    Each interval has width at most ``precision`` (when given); exact
    rational roots come back as point intervals.
    """
    if p.is_zero():
        raise DomainError("zero polynomial has infinitely many roots")
    if precision is not None:
        precision = to_rational(precision)
        if precision <= 0:
            raise DomainError("precision must be positive")
    sq = squarefree_part(p)
    if sq.degree() < 1:
        return []
    return _isolate(_RealRoots(sq), precision)


class RootRefiner:
    """Refine isolating intervals of a fixed squarefree polynomial."""

    def __init__(self, p: UPoly):
        self.poly = squarefree_part(p)
        self._rr = _RealRoots(self.poly)

    def isolate(self, precision=None) -> list[IsolatedRoot]:
        if precision is not None:
            precision = to_rational(precision)
        return _isolate(self._rr, precision)

    def refine(self, root: IsolatedRoot, width) -> IsolatedRoot:
        width = to_rational(width)
        if root.is_exact or root.width <= width:
            return root
        lo, hi = _refine(self._rr, root.lo, root.hi, width)
        return IsolatedRoot(lo, hi, root.multiplicity_free)


def refine_root(p: UPoly, root: IsolatedRoot, width) -> IsolatedRoot:
    return RootRefiner(p).refine(root, width)


# ---------------------------------------------------------------------------
# Interval evaluation


def _imul(a: Rational, b: Rational, c: Rational, d: Rational) -> tuple:
    ps = (a * c, a * d, b * c, b * d)
    return min(ps), max(ps)


def horner_interval(p: UPoly, lo: Rational, hi: Rational) -> tuple[Rational, Rational]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner."""
    a = b = ZERO
    for c in reversed(p.coeffs):
        a, b = _imul(a, b, lo, hi)
        a, b = a + c, b + c
    return a, b


def _int_form(p: UPoly) -> tuple[list, mpz, list]:
    """``(ints, den, dabs)``: ``p = sum ints_k t^k / den`` and ``dabs`` = ``|ints_k| k``."""
    form = getattr(p, "_iform", None)
    if form is None:
        den = mpz(1)
        for c in p.coeffs:
            den = gmpy2.lcm(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in p.coeffs]
        dabs = [abs(ints[k]) * k for k in range(1, len(ints))]
        form = (ints, den, dabs)
        p._iform = form
    return form


def _exact_value(ints: list, den, x: Rational) -> Rational:
    d = len(ints) - 1
    return mpq(_value_num(ints, x), den * x.denominator**d)


def eval_interval(p: UPoly, r: IsolatedRoot) -> tuple[Rational, Rational]:
    """Rational bounds on ``p(tau)`` for the root ``tau`` bracketed by ``r``.

    Mean-value form around the midpoint with ``|p'|`` bounded by the
    absolute-coefficient derivative at ``max(|lo|, |hi|)``; integer
    arithmetic throughout. Exact for point intervals.
    """
    if p.is_zero():
        return ZERO, ZERO
    ints, den, dabs = _int_form(p)
    if r.is_exact:
        v = _exact_value(ints, den, r.lo)
        return v, v
    pm = _exact_value(ints, den, r.midpoint)
    if not dabs:
        return pm, pm
    R = max(abs(r.lo), abs(r.hi))
    slope = _exact_value(dabs, den, R)
    rad = slope * (r.hi - r.lo) / 2
    return pm - rad, pm + rad


def to_fraction(q: Rational) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))
