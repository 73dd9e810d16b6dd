"""Buchberger's algorithm, normal forms and zero-dimensionality.

Pairs are processed by the normal strategy (smallest lcm first) and pruned
with the Gebauer-Moeller installation of Buchberger's two criteria. All
arithmetic is exact; bases are returned reduced, monic, and sorted by
ascending leading monomial.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, RingMismatchError
from .poly import MonomialOrder, MPoly, Ring, Rational, change_ring

Monomial = tuple


def _divides(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _quo(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x - y for x, y in zip(a, b)])


def _mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis of an ideal in ``ring`` (whose order is used)."""

    generators: tuple[MPoly, ...]
    ring: Ring
    zero_dimensional: bool = False
    quotient_dimension: int | None = None
    _standard: tuple = field(default=None, repr=False, compare=False)

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    @property
    def is_zero_ideal(self) -> bool:
        return not self.generators

    def leading_monomials(self) -> list[Monomial]:
        return [g.lm() for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def __str__(self):
        return "[" + ", ".join(str(g) for g in self.generators) + "]"

    def reduce(self, p: MPoly) -> MPoly:
        return normal_form(p, self.generators)


# ---------------------------------------------------------------------------
# Reduction


class _Reducer:
    """Leading monomials and tails of monic polynomials for fast division."""

    __slots__ = ("key", "items")

    def __init__(self, key, polys: Sequence[MPoly] = ()):
        self.key = key
        self.items: list[tuple[Monomial, list, MPoly]] = []
        for g in polys:
            self.add(g)

    def add(self, g: MPoly):
        it = iter(g.terms.items())
        lm, lc = next(it)
        inv = 1 / lc
        tail = [(m, c * inv) for m, c in it]
        self.items.append((lm, tail, g))

    def find(self, m: Monomial):
        for item in self.items:
            if _divides(item[0], m):
                return item
        return None

    def reduce(self, terms: dict, full: bool = True) -> dict:
        """Remainder of ``terms`` (a term dict) modulo the stored polynomials."""
        key = self.key
        p = dict(terms)
        heap = [(tuple([-v for v in key(m)]), m) for m in p]
        heapq.heapify(heap)
        rem: dict = {}
        items = self.items
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None:
                continue
            for lm, tail, _g in items:
                if _divides(lm, m):
                    q = _quo(m, lm)
                    for tm, tc in tail:
                        nm = _mul(tm, q)
                        v = p.get(nm)
                        if v is None:
                            p[nm] = -c * tc
                            heapq.heappush(heap, (tuple([-x for x in key(nm)]), nm))
                        else:
                            v = v - c * tc
                            if v:
                                p[nm] = v
                            else:
                                del p[nm]
                    break
            else:
                rem[m] = c
                if not full:
                    # leading term is irreducible: keep the rest unreduced
                    for mm in sorted(p, key=key, reverse=True):
                        rem[mm] = p[mm]
                    return rem
        return rem


def _check_ring(polys: Sequence[MPoly]) -> Ring:
    if not polys:
        raise DomainError("need at least one polynomial")
    ring = polys[0].ring
    for g in polys:
        if g.ring != ring:
            raise RingMismatchError("polynomials live in different rings")
    return ring


def normal_form(p: MPoly, G: Sequence[MPoly], order: MonomialOrder | None = None) -> MPoly:
    """Remainder of ``p`` under multivariate division by ``G``.

    With a Groebner basis this is the unique normal form.
    """
    G = [g for g in G]
    if not G:
        raise DomainError("division by an empty list")
    ring = _check_ring(G + [p])
    if any(g.is_zero() for g in G):
        raise DomainError("division by the zero polynomial")
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        p = change_ring(p, ring)
        G = [change_ring(g, ring) for g in G]
    red = _Reducer(ring.key, G)
    return MPoly(ring, red.reduce(p.terms), canonical=True)


def divide(p: MPoly, G: Sequence[MPoly]) -> tuple[list[MPoly], MPoly]:
    """Division algorithm returning quotients ``q`` and remainder ``r``.

    ``p == sum(q_i * G_i) + r`` holds exactly. Slower than
    :func:`normal_form`; meant for certificates and tests.
    """
    ring = _check_ring(list(G) + [p])
    quots = [dict() for _ in G]
    rem: dict = {}
    cur = p
    while not cur.is_zero():
        m, c = cur.lead()
        for i, g in enumerate(G):
            lm, lc = g.lead()
            if _divides(lm, m):
                q = _quo(m, lm)
                f = c / lc
                quots[i][q] = quots[i].get(q, 0) + f
                cur = cur - g.mul_term(q, f)
                break
        else:
            rem[m] = c
            cur = cur - ring.monomial(m, c)
    return [MPoly(ring, q) for q in quots], MPoly(ring, rem)


def s_polynomial(f: MPoly, g: MPoly) -> MPoly:
    (mf, cf), (mg, cg) = f.lead(), g.lead()
    l = _lcm(mf, mg)
    return f.mul_term(_quo(l, mf), 1 / cf) - g.mul_term(_quo(l, mg), 1 / cg)


# ---------------------------------------------------------------------------
# Buchberger


def _coeff_signature(p: MPoly) -> tuple:
    return tuple((c.numerator, c.denominator) for c in p.terms.values())


def buchberger(gens: Sequence[MPoly], order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    ring = _check_ring(gens)
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [change_ring(g, ring) for g in gens]
    key = ring.key
    polys = [g.monic() for g in gens if not g.is_zero()]
    if not polys:
        return GroebnerBasis((), ring, False, None)
    polys.sort(key=lambda g: (g.total_degree(), key(g.lm()), _coeff_signature(g)))

    basis: list[MPoly] = []  # every polynomial ever added, by index
    lms: list[Monomial] = []
    G: list[int] = []  # indices of the current (minimal) generators
    pairs: dict[tuple[int, int], Monomial] = {}

    def update(h: int):
        nonlocal G, pairs
        lh = lms[h]
        cand = [(g, _lcm(lh, lms[g])) for g in G]
        keep = []
        for idx, (g1, l1) in enumerate(cand):
            if _coprime(lh, lms[g1]):
                keep.append((g1, l1))
                continue
            redundant = False
            for j, (g2, l2) in enumerate(cand):
                if j != idx and _divides(l2, l1):
                    if l2 != l1 or j < idx:
                        redundant = True
                        break
            if not redundant:
                for g2, l2 in keep:
                    if _divides(l2, l1):
                        redundant = True
                        break
            if not redundant:
                keep.append((g1, l1))
        new_pairs = {(g, h): l for g, l in keep if not _coprime(lh, lms[g])}
        old = {}
        for (a, b), l in pairs.items():
            if (
                _divides(lh, l)
                and _lcm(lms[a], lh) != l
                and _lcm(lms[b], lh) != l
            ):
                continue
            old[(a, b)] = l
        old.update(new_pairs)
        pairs = old
        G = [g for g in G if not _divides(lh, lms[g])] + [h]

    reducer = _Reducer(key)

    def add(p: MPoly):
        h = len(basis)
        basis.append(p)
        lms.append(p.lm())
        update(h)
        reducer.items = [(lms[g], _tail(basis[g]), basis[g]) for g in G]

    for p in polys:
        r = reducer.reduce(p.terms) if reducer.items else dict(p.terms)
        if r:
            h = MPoly(ring, r, canonical=True).monic()
            if h.is_constant():
                return _unit(ring)
            add(h)

    while pairs:
        (a, b) = min(pairs, key=lambda ab: (sum(pairs[ab]), key(pairs[ab]), ab))
        del pairs[(a, b)]
        s = s_polynomial(basis[a], basis[b])
        r = reducer.reduce(s.terms)
        if not r:
            continue
        h = MPoly(ring, r, canonical=True).monic()
        if h.is_constant():
            return _unit(ring)
        add(h)

    return _finalize([basis[g] for g in G], ring)


def _tail(g: MPoly) -> list:
    it = iter(g.terms.items())
    _, lc = next(it)
    inv = 1 / lc
    return [(m, c * inv) for m, c in it]


def _unit(ring: Ring) -> GroebnerBasis:
    return GroebnerBasis((ring.one(),), ring, True, 0)


def _finalize(G: list[MPoly], ring: Ring) -> GroebnerBasis:
    key = ring.key
    # minimal basis: drop generators whose leading monomial is divisible by another's
    G = sorted(G, key=lambda g: key(g.lm()))
    minimal: list[MPoly] = []
    for g in G:
        if not any(_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        if others:
            lm, lc = g.lead()
            tail = {m: c for m, c in g.terms.items() if m != lm}
            red = _Reducer(key, others).reduce(tail)
            red[lm] = lc
            g = MPoly(ring, red).monic()
        reduced.append(g)
    reduced.sort(key=lambda g: key(g.lm()))
    return make_basis(reduced, ring)


def make_basis(generators: Sequence[MPoly], ring: Ring) -> GroebnerBasis:
    """Wrap an already reduced basis and fill in dimension metadata."""
    gens = tuple(generators)
    flag, _ = _zero_dim_check([g.lm() for g in gens], ring.nvars)
    dim = None
    std = None
    if flag:
        std = _standard_monomials([g.lm() for g in gens], ring)
        dim = len(std)
    return GroebnerBasis(gens, ring, flag, dim, tuple(std) if std is not None else None)


def is_groebner(G: Sequence[MPoly]) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    G = list(G)
    if not G:
        return True
    red = _Reducer(G[0].ring.key, G)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if red.reduce(s_polynomial(G[i], G[j]).terms):
                return False
    return True


def is_reduced(G: Sequence[MPoly]) -> bool:
    for i, g in enumerate(G):
        if g.lc() != 1:
            return False
        others = [h.lm() for j, h in enumerate(G) if j != i]
        for m in g.terms:
            if any(_divides(l, m) for l in others):
                return False
    return True


# ---------------------------------------------------------------------------
# Zero-dimensional ideals


def _zero_dim_check(lms: Sequence[Monomial], nvars: int) -> tuple[bool, int | None]:
    if not lms:
        return False, 0
    if any(sum(m) == 0 for m in lms):
        return True, None
    covered = set()
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            covered.add(nz[0])
    for i in range(nvars):
        if i not in covered:
            return False, i
    return True, None


def is_zero_dimensional(G: GroebnerBasis) -> tuple[bool, int | None]:
    """``(True, None)`` or ``(False, i)`` with ``i`` a variable lacking a pure power."""
    return _zero_dim_check(G.leading_monomials(), G.ring.nvars)


def _standard_monomials(lms: Sequence[Monomial], ring: Ring) -> list[Monomial]:
    n = ring.nvars
    if any(sum(m) == 0 for m in lms):
        return []
    start = (0,) * n
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                c = m[:i] + (m[i] + 1,) + m[i + 1:]
                if c in seen:
                    continue
                if any(_divides(l, c) for l in lms):
                    continue
                seen.add(c)
                nxt.append(c)
        frontier = nxt
    return sorted(seen, key=ring.key)


def quotient_monomial_basis(G: GroebnerBasis) -> list[Monomial]:
    """Standard monomials of a zero-dimensional basis, ascending."""
    if not G.zero_dimensional:
        flag, witness = is_zero_dimensional(G)
        if not flag:
            raise DomainError(
                f"ideal is positive dimensional (no pure power of variable {witness})"
            )
    if G._standard is not None:
        return list(G._standard)
    return _standard_monomials(G.leading_monomials(), G.ring)
