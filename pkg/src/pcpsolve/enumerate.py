"""Turn a univariate representation into certified numerical solutions.

Phase 1 isolates the real roots of ``w`` and encloses ``v(tau)`` at each one
with rational intervals. Phase 2 merges candidates closer than ``gamma2``
and certifies every survivor with interval bounds on ``x_i``, ``f_i`` and
``x_i f_i`` computed directly from ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq, mpz

from .errors import CertificationError, DomainError
from .pipeline import PCPProblem, SparseRep, UnivarRep
from .poly import ZERO, MPoly, Rational, to_rational
from .univar import IsolatedRoot, RootRefiner, UPoly, eval_interval

Interval = tuple[Rational, Rational]


@dataclass(frozen=True)
class PrecisionPair:
    """Root isolation precision ``gamma1`` and merge radius ``gamma2``."""

    gamma1: Rational
    gamma2: Rational

    def __post_init__(self):
        g1, g2 = to_rational(self.gamma1), to_rational(self.gamma2)
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)
        if g1 <= 0 or g2 <= 0:
            raise DomainError("precisions must be positive")
        if g1 >= g2:
            raise DomainError("gamma1 must be smaller than gamma2")

    @classmethod
    def default(cls) -> "PrecisionPair":
        return cls("1e-10", "1e-6")

    @classmethod
    def bench(cls) -> "PrecisionPair":
        return cls("1e-10", "1e-4")


@dataclass(frozen=True)
class Solution:
    """An enclosed solution: each coordinate lies in ``intervals[i]``."""

    intervals: tuple[Interval, ...]
    source_roots: tuple[IsolatedRoot, ...]
    residual: Rational  # upper bound on max |x_i f_i|
    min_x: Rational  # lower bound on min x_i
    min_f: Rational  # lower bound on min f_i

    @property
    def coordinates(self) -> tuple[Rational, ...]:
        return tuple((lo + hi) / 2 for lo, hi in self.intervals)

    @property
    def errors(self) -> tuple[Rational, ...]:
        return tuple((hi - lo) / 2 for lo, hi in self.intervals)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coordinates)

    def decimals(self, places: int) -> tuple[str, ...]:
        return tuple(decimal_str(c, places) for c in self.coordinates)


def decimal_str(q, places: int) -> str:
    """``q`` rounded half-up to ``places`` decimals."""
    q = to_rational(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q * 10**places
    k = int((scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator))
    s = str(k).rjust(places + 1, "0")
    if places == 0:
        return sign + s if k else "0"
    out = f"{s[:-places]}.{s[-places:]}"
    return "0." + "0" * places if k == 0 else sign + out


def working_digits(rep: UnivarRep) -> int:
    """Decimal working precision ``10 + deg w``."""
    return 10 + rep.w.degree()


# ---------------------------------------------------------------------------
# Interval helpers


def _imul(a: Interval, b: Interval) -> Interval:
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _ipow(a: Interval, k: int) -> Interval:
    if k == 0:
        return (to_rational(1), to_rational(1))
    lo, hi = a
    if k % 2 or lo >= 0:
        return lo**k, hi**k
    if hi <= 0:
        return hi**k, lo**k
    return ZERO, max(lo**k, hi**k)


def box_eval(p: MPoly, box: Sequence[Interval]) -> Interval:
    """Enclosure of ``p`` over a box, term by term."""
    lo = hi = ZERO
    for m, c in p.terms.items():
        t = (c, c)
        for x, e in zip(box, m):
            if e:
                t = _imul(t, _ipow(x, e))
        lo += t[0]
        hi += t[1]
    return lo, hi


def _width(iv: Interval) -> Rational:
    return iv[1] - iv[0]


# ---------------------------------------------------------------------------
# Phase 1


@dataclass
class _Candidate:
    root: IsolatedRoot
    box: tuple[Interval, ...]
    residual: Rational = ZERO
    min_x: Rational = ZERO
    min_f: Rational = ZERO
    certified: bool = False


def _round_out(iv: Interval, width: Rational) -> Interval:
    """Widen to dyadic endpoints with step at most ``width / 4``; exact points stay."""
    lo, hi = iv
    if lo == hi:
        return iv
    k = 2
    while mpq(1, 2**k) > width / 4:
        k += 1
    scale = mpz(2) ** k
    a = lo * scale
    b = hi * scale
    return (
        mpq(a.numerator // a.denominator, scale),
        mpq(-((-b.numerator) // b.denominator), scale),
    )


def _enclose(
    refiner: RootRefiner,
    root: IsolatedRoot,
    v: Sequence[UPoly],
    coord_width: Rational,
    root_width: Rational,
    zero: Sequence[int] = (),
) -> _Candidate:
    root = refiner.refine(root, root_width)
    while True:
        box = tuple(
            (ZERO, ZERO) if i in zero else eval_interval(vi, root) for i, vi in enumerate(v)
        )
        widest = max(_width(b) for b in box)
        if widest <= coord_width or root.is_exact:
            return _Candidate(root, tuple(_round_out(b, coord_width) for b in box))
        shrink = max(coord_width / (2 * widest), to_rational(1) / 2**64)
        root = refiner.refine(root, root.width * min(shrink, to_rational(1) / 2))


def _certify(c: _Candidate, prob: PCPProblem, gamma2: Rational) -> None:
    vals = [box_eval(fi, c.box) for fi in prob.f]
    prods = [_imul(x, fv) for x, fv in zip(c.box, vals)]
    c.residual = max(max(abs(lo), abs(hi)) for lo, hi in prods)
    c.min_x = min(x[0] for x in c.box)
    c.min_f = min(fv[0] for fv in vals)
    c.certified = (
        all(lo <= 0 <= hi for lo, hi in prods) and c.min_x >= -gamma2 and c.min_f >= -gamma2
    )


def _phase1(
    w: UPoly,
    v: Sequence[UPoly],
    prob: PCPProblem,
    gamma: PrecisionPair,
    digits: int,
    roots: Sequence[IsolatedRoot] | None = None,
    refiner: RootRefiner | None = None,
    zero: Sequence[int] = (),
) -> list[_Candidate]:
    refiner = refiner or RootRefiner(w)
    if roots is None:
        roots = refiner.isolate(gamma.gamma1)
    n = len(v)
    coord_width = min(gamma.gamma2 / (4 * n), to_rational(10) ** -digits)
    root_width = min(gamma.gamma1, to_rational(10) ** -digits)
    cands = [_enclose(refiner, r, v, coord_width, root_width, zero) for r in roots]
    for c in cands:
        _certify(c, prob, gamma.gamma2)
    return cands


# ---------------------------------------------------------------------------
# Phase 2


def _dist2(a: _Candidate, b: _Candidate) -> Rational:
    s = ZERO
    for (alo, ahi), (blo, bhi) in zip(a.box, b.box):
        d = (alo + ahi - blo - bhi) / 2
        s += d * d
    return s


def _snap(c: Rational, step: Rational) -> int:
    q = c / step + to_rational(1) / 2
    return int(q.numerator // q.denominator)


def _phase2(cands: list[_Candidate], gamma2: Rational) -> list[Solution]:
    parent = list(range(len(cands)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    g2 = gamma2 * gamma2
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            if _dist2(cands[i], cands[j]) < g2:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    clusters: dict[int, list[int]] = {}
    for i in range(len(cands)):
        clusters.setdefault(find(i), []).append(i)
    out = []
    for members in clusters.values():
        best = min(
            members,
            key=lambda i: (cands[i].residual, tuple((lo + hi) / 2 for lo, hi in cands[i].box)),
        )
        c = cands[best]
        if not c.certified:
            raise CertificationError(
                f"candidate near {[float((lo + hi) / 2) for lo, hi in c.box]} failed "
                f"certification (residual {float(c.residual):.3g}, min x {float(c.min_x):.3g}, "
                f"min f {float(c.min_f):.3g}); the representation is inconsistent with f"
            )
        out.append(
            Solution(
                c.box,
                tuple(sorted((cands[i].root for i in members), key=lambda r: (r.lo, r.hi))),
                c.residual,
                c.min_x,
                c.min_f,
            )
        )
    # order on a gamma2 grid first so that +-1e-60 noise cannot reorder rows
    out.sort(key=lambda s: (tuple(_snap(c, gamma2) for c in s.coordinates), s.coordinates))
    return out


# ---------------------------------------------------------------------------
# Public entry points


def _check(rep: UnivarRep, prob: PCPProblem) -> None:
    if rep.n != prob.n:
        raise DomainError(f"representation has {rep.n} coordinates, problem has {prob.n}")


def enumerate_solutions(
    rep: UnivarRep, prob: PCPProblem, gamma: PrecisionPair | None = None
) -> list[Solution]:
    """All solutions, deduplicated within ``gamma2`` and certified."""
    gamma = gamma or PrecisionPair.default()
    _check(rep, prob)
    cands = _phase1(rep.w, rep.v, prob, gamma, working_digits(rep))
    return _phase2(cands, gamma.gamma2)


def enumerate_least_norm(
    rep: UnivarRep, prob: PCPProblem, gamma: PrecisionPair | None = None
) -> list[Solution]:
    """Solutions minimising the Euclidean norm, selected through ``phi``."""
    gamma = gamma or PrecisionPair.default()
    _check(rep, prob)
    if rep.phi is None:
        raise DomainError("representation carries no phi; run least_norm_representation")
    refiner = RootRefiner(rep.w)
    roots = refiner.isolate(gamma.gamma1)
    if not roots:
        return []
    tol = gamma.gamma2 * gamma.gamma2
    while True:
        vals = [eval_interval(rep.phi, r) for r in roots]
        best_hi = min(hi for _, hi in vals)
        contenders = [i for i, (lo, _) in enumerate(vals) if lo <= best_hi]
        loose = [i for i in contenders if _width(vals[i]) > tol and not roots[i].is_exact]
        if not loose:
            break
        for i in loose:
            roots[i] = refiner.refine(roots[i], roots[i].width / 16)
    chosen = [roots[i] for i in contenders]
    cands = _phase1(rep.w, rep.v, prob, gamma, working_digits(rep), chosen, refiner)
    return _phase2(cands, gamma.gamma2)


def enumerate_sparse(
    srep: SparseRep, prob: PCPProblem, gamma: PrecisionPair | None = None
) -> tuple[int, list[Solution]]:
    """``(k, solutions)`` with ``k`` zero coordinates on each reported solution."""
    gamma = gamma or PrecisionPair.default()
    rep = srep.base
    _check(rep, prob)
    cands: list[_Candidate] = []
    digits = working_digits(rep)
    for ell, support in zip(srep.omega, srep.supports):
        refiner = RootRefiner(support)
        roots = refiner.isolate(gamma.gamma1)
        cands += _phase1(support, rep.v, prob, gamma, digits, roots, refiner, zero=ell)
    return srep.k, _phase2(cands, gamma.gamma2)
