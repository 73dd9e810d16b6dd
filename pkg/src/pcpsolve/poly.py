"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are :class:`gmpy2.mpq` values, exposed here as ``Rational``.
A polynomial belongs to a :class:`Ring` (variable names plus a monomial
order) and stores its terms in a dict keyed by exponent tuples, iterated in
descending monomial order so the leading term is always the first item.

    >>> R = Ring(("x1", "x2"))
    >>> x1, x2 = R.gens()
    >>> print(x1 * (x2 - 1))
    x1*x2 - x1
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import gmpy2

from .errors import DomainError, RingMismatchError, SingularMatrixError

Rational = type(gmpy2.mpq())
Monomial = tuple  # tuple[int, ...], one exponent per ring variable

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)

#: total degree reported for the zero polynomial
ZERO_DEGREE = -1


def to_rational(value) -> Rational:
    """Convert ints, Fractions, mpq and strings like ``"3/4"`` or ``"1e-6"``."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return gmpy2.mpq(value)
    if isinstance(value, str):
        return gmpy2.mpq(Fraction(value.strip()))
    if type(value).__name__ == "mpz":
        return gmpy2.mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Rational")


def rational_str(q: Rational) -> str:
    """``"num/den"`` or ``"num"`` for integers."""
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``lex`` or ``grevlex`` over a variable precedence.

    ``precedence`` lists variable indices from the smallest variable to the
    largest; ``None`` means index order, i.e. ``x1 < x2 < ... < xn``.
    """

    kind: str = "lex"
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise DomainError(f"unknown monomial order {self.kind!r}")
        if self.precedence is not None:
            object.__setattr__(self, "precedence", tuple(self.precedence))

    def key_function(self, nvars: int) -> Callable[[Monomial], tuple]:
        """Sort key: larger key means larger monomial."""
        prec = self.precedence
        if prec is not None and len(prec) != nvars:
            raise DomainError("precedence length differs from variable count")
        if prec is not None and tuple(sorted(prec)) != tuple(range(nvars)):
            raise DomainError("precedence is not a permutation")
        if prec is None or prec == tuple(range(nvars)):
            if self.kind == "lex":
                return lambda m: m[::-1]
            return lambda m: (sum(m), *[-e for e in m])
        rev = prec[::-1]
        if self.kind == "lex":
            return lambda m: tuple([m[i] for i in rev])
        return lambda m: (sum(m), *[-m[i] for i in prec])


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


# ---------------------------------------------------------------------------
# Rings


class Ring:
    """Polynomial ring Q[names] with a fixed monomial order."""

    __slots__ = ("names", "order", "key", "_hash")

    def __init__(self, names: Sequence[str], order: MonomialOrder = LEX):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DomainError("duplicate variable names")
        if not names:
            raise DomainError("a ring needs at least one variable")
        self.names = names
        self.order = order
        self.key = order.key_function(len(names))
        self._hash = hash((names, order))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ring({self.names!r}, {self.order!r})"

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.names, order)

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return self.const(1)

    def const(self, c) -> "MPoly":
        c = to_rational(c)
        return MPoly(self, {(0,) * self.nvars: c} if c else {}, canonical=True)

    def var(self, i: int) -> "MPoly":
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, {tuple(e): ONE}, canonical=True)

    def gens(self) -> list["MPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Monomial, coeff=1) -> "MPoly":
        return MPoly(self, {tuple(exps): to_rational(coeff)})

    def index(self, name: str) -> int:
        return self.names.index(name)


def _add_into(acc: dict, terms: Mapping, scale: Rational | None = None) -> None:
    for m, c in terms.items():
        if scale is not None:
            c = c * scale
        v = acc.get(m)
        if v is None:
            acc[m] = c
        else:
            v = v + c
            if v:
                acc[m] = v
            else:
                del acc[m]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


class MPoly:
    """Immutable sparse polynomial; see the module docstring."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping, *, canonical: bool = False):
        self.ring = ring
        if canonical:
            self.terms = dict(terms)
        else:
            key = ring.key
            items = [(m, to_rational(c)) for m, c in terms.items()]
            items = [(m, c) for m, c in items if c]
            items.sort(key=lambda mc: key(mc[0]), reverse=True)
            self.terms = dict(items)
        self._hash = None

    # -- construction helpers -------------------------------------------------

    def _new(self, terms: dict) -> "MPoly":
        return MPoly(self.ring, terms)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"ring mismatch: {self.ring!r} vs {other.ring!r}"
                )
            return other
        return self.ring.const(other)

    # -- basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return ZERO_DEGREE
        return max(m[i] for m in self.terms)

    def lead(self) -> tuple[Monomial, Rational]:
        """Leading (monomial, coefficient) under the ring's order."""
        if not self.terms:
            raise DomainError("the zero polynomial has no leading term")
        return next(iter(self.terms.items()))

    def lm(self) -> Monomial:
        return self.lead()[0]

    def lc(self) -> Rational:
        return self.lead()[1]

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.nvars
        return all(m == zero for m in self.terms)

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        inv = 1 / self.lc()
        return MPoly(self.ring, {m: c * inv for m, c in self.terms.items()}, canonical=True)

    # -- arithmetic ---------------------------------------------------------------

    def __neg__(self):
        return MPoly(self.ring, {m: -c for m, c in self.terms.items()}, canonical=True)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return self._new(acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, gmpy2.mpq(-1))
        return self._new(acc)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MPoly":
        c = to_rational(c)
        if not c:
            return self.ring.zero()
        return MPoly(self.ring, {m: v * c for m, v in self.terms.items()}, canonical=True)

    def mul_term(self, mono: Monomial, c: Rational) -> "MPoly":
        """Multiply by the single term ``c * mono`` (order is preserved)."""
        if not c:
            return self.ring.zero()
        return MPoly(
            self.ring,
            {_mono_mul(m, mono): v * c for m, v in self.terms.items()},
            canonical=True,
        )

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        other = self._coerce(other)
        if len(other.terms) == 1:
            (m, c), = other.terms.items()
            return self.mul_term(m, c)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return other.mul_term(m, c)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = acc.get(m)
                acc[m] = c1 * c2 if v is None else v + c1 * c2
        return self._new(acc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or isinstance(k, bool):
            raise DomainError("exponent must be an integer")
        if k < 0:
            raise DomainError("negative exponent in a polynomial ring")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Rational)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation -------------------------------------------------------------------

    def __call__(self, *point):
        return evaluate(self, point)

    def diff(self, i: int) -> "MPoly":
        acc = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                acc[tuple(e)] = c * m[i]
        return self._new(acc)

    # -- printing -------------------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MPoly({format_poly(self)!r})"


def format_poly(p: MPoly) -> str:
    """Human readable form that :func:`pcpsolve.problem_io.parse_polynomial` accepts."""
    if not p.terms:
        return "0"
    names = p.ring.names
    parts = []
    for m, c in p.terms.items():
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{rational_str(mag)}*{body}"
        else:
            body = rational_str(mag)
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def leading_term(p: MPoly, order: MonomialOrder | None = None) -> tuple[Monomial, Rational]:
    """Maximal monomial of ``p`` under ``order`` (default: the ring order)."""
    if not p.terms:
        raise DomainError("the zero polynomial has no leading term")
    if order is None or order == p.ring.order:
        return p.lead()
    key = order.key_function(p.ring.nvars)
    m = max(p.terms, key=key)
    return m, p.terms[m]


def evaluate(p: MPoly, point: Sequence) -> Rational:
    """Exact value of ``p`` at a rational point."""
    if len(point) != p.ring.nvars:
        raise RingMismatchError(
            f"point has {len(point)} coordinates, ring has {p.ring.nvars} variables"
        )
    pt = [to_rational(v) for v in point]
    powers: list[dict[int, Rational]] = [{0: ONE} for _ in pt]

    def power(i, e):
        cache = powers[i]
        v = cache.get(e)
        if v is None:
            v = pt[i] ** e
            cache[e] = v
        return v

    total = ZERO
    for m, c in p.terms.items():
        t = c
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        total += t
    return total


# ---------------------------------------------------------------------------
# Rational matrices and linear changes of variables


class RationalMatrix:
    """Dense row-major matrix of rationals."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_rational(v) for v in r) for r in rows)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DomainError("matrix rows must be nonempty and of equal length")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RationalMatrix({[[rational_str(v) for v in r] for r in self.rows]})"

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.rows))
            if self.shape[1] != len(other.rows):
                raise DomainError("incompatible matrix shapes")
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), ZERO) for c in cols] for r in self.rows]
            )
        vec = [to_rational(v) for v in other]
        if len(vec) != self.shape[1]:
            raise DomainError("incompatible vector length")
        return [sum((a * b for a, b in zip(r, vec)), ZERO) for r in self.rows]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.rows))

    def inverse(self) -> "RationalMatrix":
        """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
        n, m = self.shape
        if n != m:
            raise SingularMatrixError("non-square matrix has no inverse")
        a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise SingularMatrixError(f"matrix is singular (no pivot in column {col})", col)
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [v * inv for v in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [v - f * w for v, w in zip(a[r], a[col])]
        return RationalMatrix([row[n:] for row in a])

    def is_invertible(self) -> bool:
        try:
            self.inverse()
        except SingularMatrixError:
            return False
        return True

    def to_strings(self) -> list[list[str]]:
        return [[rational_str(v) for v in r] for r in self.rows]


def substitute_linear(p: MPoly, H: RationalMatrix, ring: Ring | None = None) -> MPoly:
    """Return ``p(H y)``: variable ``i`` becomes ``sum_j H[i, j] * y_j``.

    ``ring`` is the ring of the ``y`` variables; by default it has names
    ``y1..ym`` and the order of ``p.ring``.
    """
    n = p.ring.nvars
    if H.shape != (n, n):
        raise DomainError(f"H must be {n}x{n}, got {H.shape}")
    H.inverse()  # raises SingularMatrixError with the failing column
    if ring is None:
        ring = Ring(tuple(f"y{i + 1}" for i in range(n)), p.ring.order)
    elif ring.nvars != n:
        raise RingMismatchError("target ring has the wrong number of variables")
    forms = [
        MPoly(ring, {tuple(1 if k == j else 0 for k in range(n)): H[i, j] for j in range(n)})
        for i in range(n)
    ]
    cache: dict[tuple[int, int], MPoly] = {}

    def power(i, e):
        v = cache.get((i, e))
        if v is None:
            v = forms[i] if e == 1 else power(i, e - 1) * forms[i]
            cache[(i, e)] = v
        return v

    acc: dict = {}
    for m, c in p.terms.items():
        t = ring.const(c)
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        _add_into(acc, t.terms)
    return MPoly(ring, acc)


def change_ring(p: MPoly, ring: Ring) -> MPoly:
    """Reinterpret ``p`` in a ring with the same variables but another order."""
    if ring.names != p.ring.names:
        raise RingMismatchError("rings have different variables")
    return MPoly(ring, p.terms)
