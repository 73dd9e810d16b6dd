"""Zero-dimensional ideals: minimal polynomials, radicals, shape position.

Everything here works in the finite dimensional quotient algebra
``Q[X]/I`` spanned by the standard monomials of a Groebner basis.
Multiplication by a polynomial is a sparse matrix on that basis, and
minimal polynomials come from the first linear dependence in the Krylov
sequence ``1, a, a^2, ...`` found by fraction-free Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError
from .groebner import GroebnerBasis, _Reducer, buchberger, quotient_monomial_basis
from .poly import ONE, ZERO, MPoly, Rational, Ring
from .univar import UPoly, squarefree_part


@dataclass(frozen=True)
class ShapeBasis:
    """``[w(y1), y2 - u2(y1), ..., ym - um(y1)]``; ``u[k]`` belongs to variable k+1."""

    w: UPoly
    u: tuple[UPoly, ...]
    separating_variable: int = 0

    def generators(self, ring: Ring) -> list[MPoly]:
        s = self.separating_variable
        others = [i for i in range(ring.nvars) if i != s]
        gens = [upoly_to_mpoly(self.w, ring, s)]
        for i, ui in zip(others, self.u):
            gens.append(ring.var(i) - upoly_to_mpoly(ui, ring, s))
        return gens


def upoly_to_mpoly(p: UPoly, ring: Ring, var: int) -> MPoly:
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c:
            e = [0] * ring.nvars
            e[var] = k
            terms[tuple(e)] = c
    return MPoly(ring, terms)


def mpoly_to_upoly(p: MPoly, var: int) -> UPoly:
    """Univariate view of ``p``; raises if other variables occur."""
    coeffs: dict[int, Rational] = {}
    for m, c in p.terms.items():
        if any(e for i, e in enumerate(m) if i != var):
            raise DomainError(f"{p} is not univariate in variable {var}")
        coeffs[m[var]] = c
    if not coeffs:
        return UPoly()
    return UPoly(coeffs.get(k, ZERO) for k in range(max(coeffs) + 1))


class QuotientAlgebra:
    """The algebra ``Q[X]/<G>`` for a zero-dimensional Groebner basis ``G``."""

    def __init__(self, G: GroebnerBasis):
        if G.is_unit:
            raise DomainError("the unit ideal has a zero quotient algebra")
        self.G = G
        self.ring = G.ring
        self.basis = quotient_monomial_basis(G)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._reducer = _Reducer(G.ring.key, G.generators)
        self._var_mats: dict[int, list[dict]] = {}
        self._nf_cache: dict = {}

    def coords_of_terms(self, terms: dict) -> list[Rational]:
        rem = self._reducer.reduce(terms)
        vec = [ZERO] * self.dim
        for m, c in rem.items():
            vec[self.index[m]] = c
        return vec

    def coords(self, p: MPoly) -> list[Rational]:
        """Coordinates of the normal form of ``p`` on the standard monomials."""
        return self.coords_of_terms(p.terms)

    def _monomial_nf(self, m) -> dict:
        hit = self.index.get(m)
        if hit is not None:
            return {hit: ONE}
        nf = self._nf_cache.get(m)
        if nf is None:
            rem = self._reducer.reduce({m: ONE})
            nf = {self.index[mm]: c for mm, c in rem.items()}
            self._nf_cache[m] = nf
        return nf

    def var_matrix(self, i: int) -> list[dict]:
        """Columns of multiplication by variable ``i`` (sparse dicts)."""
        mat = self._var_mats.get(i)
        if mat is None:
            mat = []
            for b in self.basis:
                m = b[:i] + (b[i] + 1,) + b[i + 1:]
                mat.append(self._monomial_nf(m))
            self._var_mats[i] = mat
        return mat

    def mul_matrix(self, a: MPoly) -> list[dict]:
        """Columns of multiplication by ``a``."""
        if a.ring != self.ring:
            raise DomainError("element lives in another ring")
        if a.total_degree() <= 1:
            cols = [dict() for _ in range(self.dim)]
            const = a.constant_term()
            if const:
                for j in range(self.dim):
                    cols[j][j] = const
            for m, c in a.terms.items():
                if sum(m) == 0:
                    continue
                i = m.index(1)
                for j, col in enumerate(self.var_matrix(i)):
                    dst = cols[j]
                    for r, v in col.items():
                        dst[r] = dst.get(r, ZERO) + c * v
            return [{r: v for r, v in col.items() if v} for col in cols]
        cols = []
        for b in self.basis:
            prod = a.mul_term(b, ONE)
            vec = self.coords(prod)
            cols.append({r: v for r, v in enumerate(vec) if v})
        return cols

    @staticmethod
    def apply(mat: list[dict], vec: list[Rational]) -> list[Rational]:
        out = [ZERO] * len(vec)
        for j, vj in enumerate(vec):
            if vj:
                for r, c in mat[j].items():
                    out[r] += c * vj
        return out

    def power_basis(self, a: MPoly) -> "KrylovSpace":
        """Krylov space of ``a`` acting on ``1``; holds its minimal polynomial."""
        return KrylovSpace(self, a)


def _int_vector(vec: Sequence) -> tuple[list, mpz]:
    """``(den * vec as integers, den)`` with ``den`` the lcm of denominators."""
    den = mpz(1)
    for v in vec:
        if v:
            den = gmpy2.lcm(den, mpq(v).denominator)
    return [mpq(v).numerator * (den // mpq(v).denominator) if v else mpz(0) for v in vec], den


class KrylovSpace:
    """Fraction-free echelon form of ``1, a, a^2, ...`` in the quotient algebra.

    ``minpoly`` is the minimal polynomial of ``a``; when its degree equals the
    algebra dimension, the powers of ``a`` form a basis and
    :meth:`express` writes any element as a polynomial in ``a``.

    The sequence is generated with the integer matrix ``D * M_a`` and reduced
    Bareiss style: each elimination step divides exactly by the previous
    pivot, so entries stay minors and no rational normalisation is needed.
    Every stored row carries ``comb`` with ``row == sum comb_j (D a)^j``.
    """

    def __init__(self, algebra: QuotientAlgebra, a: MPoly):
        self.algebra = algebra
        dim = algebra.dim
        cols = algebra.mul_matrix(a)
        den = mpz(1)
        for col in cols:
            for v in col.values():
                den = gmpy2.lcm(den, mpq(v).denominator)
        icols = [[(r, mpq(v).numerator * (den // mpq(v).denominator)) for r, v in col.items()] for col in cols]
        self.scale = den
        rows: list[tuple[int, list, list, mpz]] = []  # (pivot column, row, comb, pivot value)
        vec, _ = _int_vector(algebra.coords(algebra.ring.one()))
        k = 0
        while True:
            comb = [mpz(0)] * k + [mpz(1)]
            red, comb, _ = self._reduce(rows, vec, comb)
            piv = next((i for i, v in enumerate(red) if v), None)
            if piv is None:
                lead = comb[k]
                # sum comb_j (D a)^j = 0; rescale to a monic polynomial in a
                self.minpoly = UPoly(mpq(c * den**j, lead * den**k) for j, c in enumerate(comb))
                break
            rows.append((piv, red, comb, red[piv]))
            k += 1
            if k > dim:
                raise AssertionError("Krylov sequence exceeded the algebra dimension")
            nxt = [mpz(0)] * dim
            for j, vj in enumerate(vec):
                if vj:
                    for r, c in icols[j]:
                        nxt[r] += c * vj
            vec = nxt
        self.rows = rows
        self.dim = dim

    @staticmethod
    def _reduce(rows, vec, comb):
        """Bareiss steps against every stored row; returns ``(vec, comb, factor)``.

        ``factor`` is how much the original vector was scaled along the way.
        """
        red, comb = list(vec), list(comb)
        prev, factor = mpz(1), mpz(1)
        for piv, rvec, rcomb, p in rows:
            f = red[piv]
            if f:
                red = [(p * x - f * y) // prev for x, y in zip(red, rvec)]
                if len(comb) < len(rcomb):
                    comb += [mpz(0)] * (len(rcomb) - len(comb))
                m = len(rcomb)
                comb = [(p * x - f * y) // prev for x, y in zip(comb, rcomb)] + [
                    (p * x) // prev for x in comb[m:]
                ]
            elif p != prev:
                red = [(p * x) // prev for x in red]
                comb = [(p * x) // prev for x in comb]
            factor = factor * p // prev
            prev = p
        return red, comb, factor

    @property
    def spans_algebra(self) -> bool:
        return self.minpoly.degree() == self.dim

    def express(self, p: MPoly) -> UPoly:
        """Polynomial ``u`` of degree < dim with ``p == u(a)`` in the algebra."""
        if not self.spans_algebra:
            raise DomainError("powers of the element do not span the algebra")
        vec, den = _int_vector(self.algebra.coords(p))
        red, comb, factor = self._reduce(self.rows, vec, [mpz(0)] * self.dim)
        if any(red):
            raise AssertionError("element outside the span of the Krylov basis")
        # factor * den * p + sum comb_j (D a)^j = 0
        d = self.scale
        return UPoly(mpq(-c * d**j, factor * den) for j, c in enumerate(comb))


def minimal_polynomial(G: GroebnerBasis, var) -> UPoly:
    """Monic minimal polynomial of variable ``var`` (or of a polynomial) modulo ``G``."""
    if G.is_unit:
        raise DomainError("minimal polynomial undefined for the unit ideal")
    if not G.zero_dimensional:
        raise DomainError("minimal polynomial needs a zero-dimensional ideal")
    algebra = QuotientAlgebra(G)
    a = G.ring.var(var) if isinstance(var, int) else var
    return algebra.power_basis(a).minpoly


def radical(G: GroebnerBasis) -> GroebnerBasis:
    """Reduced basis (same order) of the radical of a zero-dimensional ideal.

    Adjoins the squarefree part of every variable's minimal polynomial.
    """
    if not G.zero_dimensional:
        raise DomainError("radical is only implemented for zero-dimensional ideals")
    if G.is_unit:
        return G
    algebra = QuotientAlgebra(G)
    extra = []
    for i in range(G.ring.nvars):
        m = algebra.power_basis(G.ring.var(i)).minpoly
        s = squarefree_part(m)
        if s.degree() < m.degree():
            extra.append(upoly_to_mpoly(s, G.ring, i))
    if not extra:
        return G
    return buchberger(list(G.generators) + extra, G.order)


def is_radical(G: GroebnerBasis) -> bool:
    if G.is_unit:
        return True
    algebra = QuotientAlgebra(G)
    for i in range(G.ring.nvars):
        m = algebra.power_basis(G.ring.var(i)).minpoly
        if squarefree_part(m).degree() < m.degree():
            return False
    return True


def try_shape_position(G: GroebnerBasis) -> ShapeBasis | None:
    """Match a reduced lex basis against ``[w(y1), y2 - u2(y1), ...]``.

    The separating variable is the smallest one under the basis order.
    Returns ``None`` when the pattern does not match.
    """
    ring = G.ring
    n = ring.nvars
    if G.order.kind != "lex" or not G.generators:
        return None
    prec = G.order.precedence or tuple(range(n))
    s = prec[0]
    if len(G.generators) != n:
        return None
    try:
        w = mpoly_to_upoly(G.generators[0], s)
    except DomainError:
        return None
    if w.degree() < 1:
        return None
    us: dict[int, UPoly] = {}
    for g in G.generators[1:]:
        lm, lc = g.lead()
        if sum(lm) != 1 or lc != 1:
            return None
        i = lm.index(1)
        if i == s or i in us:
            return None
        rest = g - ring.var(i)
        try:
            u = -mpoly_to_upoly(rest, s)
        except DomainError:
            return None
        us[i] = u
    others = [i for i in range(n) if i != s]
    return ShapeBasis(w.monic(), tuple(us[i] for i in others), s)


def shape_via_quotient(
    G_radical: GroebnerBasis, separating: MPoly, coordinates: Sequence[MPoly]
) -> tuple[UPoly, list[UPoly]] | None:
    """Shape data of a radical ideal after a linear change of coordinates.

    ``separating`` is the new first coordinate written in the old variables
    and ``coordinates`` are further elements to express as polynomials in
    it. When ``separating`` takes distinct values on the variety, returns
    ``(w, [u_1, ...])`` with ``w`` its minimal polynomial and
    ``coordinates[k] == u_k(separating)`` modulo the ideal; otherwise ``None``.
    This equals the reduced lex basis of the transformed ideal, because a
    zero-dimensional ideal is in shape position exactly when the minimal
    polynomial of the smallest variable has degree equal to the quotient
    dimension.
    """
    algebra = QuotientAlgebra(G_radical)
    space = algebra.power_basis(separating)
    if not space.spans_algebra:
        return None
    return space.minpoly, [space.express(c) for c in coordinates]


def fglm(G: GroebnerBasis, order) -> GroebnerBasis:
    """Convert a zero-dimensional basis to the reduced basis under ``order``.

    Walks monomials upward in the target order, keeping an echelon form of
    their normal forms; the first dependency with each new leading monomial
    gives a basis element.
    """
    from .groebner import make_basis

    if not G.zero_dimensional:
        raise DomainError("basis conversion needs a zero-dimensional ideal")
    target = G.ring.with_order(order)
    if G.is_unit:
        return make_basis([target.one()], target)
    algebra = QuotientAlgebra(G)
    key = target.key
    nv = G.ring.nvars
    staircase: list[tuple] = []
    vectors: dict[tuple, list] = {}
    rows: list[tuple[int, list, dict]] = []  # pivot, vector, combination over staircase
    leads: list[tuple] = []
    out: list[MPoly] = []
    one = (0,) * nv
    vectors[one] = algebra.coords(G.ring.one())
    candidates = {one: None}
    while candidates:
        m = min(candidates, key=key)
        parent = candidates.pop(m)
        if any(all(a >= b for a, b in zip(m, l)) for l in leads):
            continue
        if parent is not None:
            src, i = parent
            vec = QuotientAlgebra.apply(algebra.var_matrix(i), vectors[src])
        else:
            vec = vectors[m]
        red = list(vec)
        comb: dict[tuple, Rational] = {m: ONE}
        for piv, rvec, rcomb in rows:
            f = red[piv]
            if f:
                for k, v in enumerate(rvec):
                    if v:
                        red[k] -= f * v
                for mm, v in rcomb.items():
                    comb[mm] = comb.get(mm, ZERO) - f * v
        piv = next((k for k, v in enumerate(red) if v), None)
        if piv is None:
            leads.append(m)
            out.append(MPoly(target, {mm: c for mm, c in comb.items() if c}))
            continue
        inv = 1 / red[piv]
        rows.append((piv, [v * inv for v in red], {mm: c * inv for mm, c in comb.items() if c}))
        staircase.append(m)
        vectors[m] = vec
        for i in range(nv):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm not in candidates and nm not in vectors:
                candidates[nm] = (m, i)
    out.sort(key=lambda g: key(g.lm()))
    return make_basis(out, target)
