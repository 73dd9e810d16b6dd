"""Univariate representations of polynomial complementarity problems.

A problem ``CP(f)`` asks for ``x >= 0`` with ``f(x) >= 0`` and
``x_i f_i(x) = 0``. With slack variables ``z`` the solutions are the real
points of ``<x_i f_i, z_i^2 - x_i, z_{n+i}^2 - f_i>`` projected to ``x``.
After a linear change of coordinates ``(x, z) = H y`` that separates the
complex points, the radical of that ideal has a lex basis
``[w(y1), y2 - u2(y1), ...]`` and the solutions are
``{(v_1(t), ..., v_n(t)) : w(t) = 0, t real}``.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from gmpy2 import mpq

from .errors import DomainError, NotD0Error, ShapeSearchExhausted
from .groebner import buchberger, is_zero_dimensional
from .poly import (
    GREVLEX,
    LEX,
    MPoly,
    Rational,
    RationalMatrix,
    Ring,
    change_ring,
    substitute_linear,
    to_rational,
)
from .univar import UPoly, count_real_roots, udivrem, ugcd
from .zerodim import ShapeBasis, fglm, radical, shape_via_quotient, try_shape_position

log = logging.getLogger(__name__)

RANDOM_ENTRY_BOUND = 2**16


@dataclass(frozen=True)
class PCPProblem:
    """Components ``f_1..f_n`` of a polynomial map in the variables of ``ring``."""

    f: tuple[MPoly, ...]
    name: str = ""

    def __post_init__(self):
        f = tuple(self.f)
        object.__setattr__(self, "f", f)
        if not f:
            raise DomainError("a problem needs at least one component")
        ring = f[0].ring
        if any(fi.ring != ring for fi in f):
            raise DomainError("all components must share one ring")
        if len(f) != ring.nvars:
            raise DomainError(f"{len(f)} components for {ring.nvars} variables")

    @property
    def ring(self) -> Ring:
        return self.f[0].ring

    @property
    def n(self) -> int:
        return len(self.f)

    @property
    def degree(self) -> int:
        return max(max(fi.total_degree(), 0) for fi in self.f)

    def bezout_cap(self) -> int:
        """``2^n (d+1)^n``, an upper bound on the complex points of the slack ideal."""
        return 2**self.n * (self.degree + 1) ** self.n

    def is_solution(self, point: Sequence) -> bool:
        """Exact check of the complementarity conditions at a rational point."""
        pt = [to_rational(v) for v in point]
        vals = [fi(*pt) for fi in self.f]
        return all(x >= 0 for x in pt) and all(v >= 0 for v in vals) and all(
            x * v == 0 for x, v in zip(pt, vals)
        )


def perturb(prob: PCPProblem, a: Sequence) -> PCPProblem:
    """The problem ``f + a`` for a constant vector ``a``."""
    if len(a) != prob.n:
        raise DomainError("perturbation length differs from n")
    return PCPProblem(tuple(fi + to_rational(ai) for fi, ai in zip(prob.f, a)), prob.name)


# ---------------------------------------------------------------------------
# Ideals


def slack_ring(prob: PCPProblem, order=LEX) -> Ring:
    """Ring in ``x_1..x_n, z_1..z_2n`` (in that order)."""
    xs = prob.ring.names
    prefix = "z"
    while any(name.startswith(prefix) for name in xs):
        prefix = "_" + prefix
    zs = tuple(f"{prefix}{k}" for k in range(1, 2 * prob.n + 1))
    return Ring(xs + zs, order)


def build_ideal_f(prob: PCPProblem) -> list[MPoly]:
    """Generators ``x_i f_i`` of I[f]."""
    return [x * fi for x, fi in zip(prob.ring.gens(), prob.f)]


def _lift(p: MPoly, ring: Ring) -> MPoly:
    extra = (0,) * (ring.nvars - p.ring.nvars)
    return MPoly(ring, {m + extra: c for m, c in p.terms.items()})


def build_ideal_fz(prob: PCPProblem, order=LEX) -> list[MPoly]:
    """The 3n generators of I[f, z], in the order x f, z^2 - x, z^2 - f."""
    n = prob.n
    R = slack_ring(prob, order)
    v = R.gens()
    xs, zs = v[:n], v[n:]
    f = [_lift(fi, R) for fi in prob.f]
    gens = [xs[i] * f[i] for i in range(n)]
    gens += [zs[i] ** 2 - xs[i] for i in range(n)]
    gens += [zs[n + i] ** 2 - f[i] for i in range(n)]
    return gens


def classify_d0(prob: PCPProblem) -> tuple[bool, int | None]:
    """Whether I[f] is zero-dimensional (grevlex basis), with a witness variable."""
    G = buchberger(build_ideal_f(prob), GREVLEX)
    return is_zero_dimensional(G)


# ---------------------------------------------------------------------------
# Change-of-variables strategies


@dataclass(frozen=True)
class HStrategy:
    """How the change of variables H is chosen.

    ``deterministic`` walks ``s = s_start, s_start + 1, ...`` with first row
    ``(1, s, ..., s^(m-1))``; ``random`` draws the first row entries after the
    leading 1 as integers in ``[-2^16, 2^16]``; ``explicit`` uses
    ``explicit_matrix``. With ``invert_convention`` the matrix built (or given)
    is inverted before use, so ``y_1`` is the first-row linear form.
    """

    mode: str = "random"
    seed: int | None = None
    explicit_matrix: RationalMatrix | None = None
    invert_convention: bool = True
    s_start: int = 0
    max_draws: int = 16

    def __post_init__(self):
        if self.mode not in ("deterministic", "random", "explicit"):
            raise DomainError(f"unknown strategy mode {self.mode!r}")
        if self.mode == "explicit" and self.explicit_matrix is None:
            raise DomainError("explicit mode needs a matrix")

    def resolved(self) -> "HStrategy":
        """Same strategy with a concrete seed in random mode."""
        if self.mode == "random" and self.seed is None:
            return dataclasses.replace(self, seed=random.SystemRandom().randrange(2**32))
        return self


def first_row_matrix(row: Sequence) -> RationalMatrix:
    """Identity with its first row replaced by ``row`` (``row[0]`` must be nonzero)."""
    m = len(row)
    rows = [list(row)] + [[1 if i == j else 0 for j in range(m)] for i in range(1, m)]
    return RationalMatrix(rows)


def deterministic_loop_bound(m: int, delta: int) -> int:
    """``(m-1) delta (delta-1) / 2 + 1`` iterations with ``m = 3n`` variables."""
    return (m - 1) * delta * (delta - 1) // 2 + 1


def h_candidates(strategy: HStrategy, m: int, delta: int) -> Iterator[tuple[RationalMatrix, int | None]]:
    """Yield ``(H, s)``; ``s`` is None outside deterministic mode."""
    if strategy.mode == "explicit":
        M = strategy.explicit_matrix
        if M.shape != (m, m):
            raise DomainError(f"explicit H must be {m}x{m}")
        yield (M.inverse() if strategy.invert_convention else M), None
        return
    if strategy.mode == "deterministic":
        bound = deterministic_loop_bound(m, delta)
        for s in range(strategy.s_start, strategy.s_start + bound):
            M = first_row_matrix([mpq(s) ** k for k in range(m)])
            yield (M.inverse() if strategy.invert_convention else M), s
        return
    rng = random.Random(strategy.seed)
    for _ in range(strategy.max_draws):
        row = [1] + [rng.randint(-RANDOM_ENTRY_BOUND, RANDOM_ENTRY_BOUND) for _ in range(m - 1)]
        M = first_row_matrix(row)
        yield (M.inverse() if strategy.invert_convention else M), None


# ---------------------------------------------------------------------------
# Representations


@dataclass(frozen=True)
class UnivarRep:
    """``[w, v_1, ..., v_n]`` plus optional least-norm objective ``phi``."""

    w: UPoly
    v: tuple[UPoly, ...]
    H_used: RationalMatrix
    strategy: HStrategy
    s_used: int | None = None
    phi: UPoly | None = None
    shape: ShapeBasis | None = field(default=None, compare=False)
    attempts: int = 1
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.v)

    @property
    def seed(self) -> int | None:
        return self.strategy.seed


@dataclass(frozen=True)
class SparseRep:
    """Sparse-solution data: ``k`` zero coordinates on each index set in ``omega``.

    ``supports[j]`` is the squarefree polynomial whose real roots give the
    sparse solutions vanishing exactly on ``omega[j]`` (0-based indices).
    """

    base: UnivarRep
    k: int
    omega: tuple[tuple[int, ...], ...]
    supports: tuple[UPoly, ...] = field(compare=False, default=())


def _v_from_shape(H: RationalMatrix, w: UPoly, u: Sequence[UPoly], n: int) -> tuple[UPoly, ...]:
    coords = [UPoly.t()] + list(u)
    v = []
    for i in range(n):
        acc = UPoly()
        for j, cj in enumerate(coords):
            if H[i, j]:
                acc = acc + cj * H[i, j]
        v.append(udivrem(acc, w)[1])
    return tuple(v)


def univariate_representation(
    prob: PCPProblem, strategy: HStrategy | None = None, method: str = "quotient"
) -> UnivarRep:
    """A univariate representation of the solution set of f.

    ``method="lex"`` substitutes ``(x, z) = H y``, computes the reduced lex
    basis of the radical (grevlex Buchberger, radical, then FGLM conversion)
    and matches it syntactically against the shape form.
    ``method="quotient"`` (default) computes the radical once under grevlex
    in the original coordinates and reads the same shape basis off the
    quotient algebra for every candidate H; the outputs are identical.
    """
    strategy = (strategy or HStrategy()).resolved()
    if method not in ("quotient", "lex"):
        raise DomainError(f"unknown method {method!r}")
    ok, witness = classify_d0(prob)
    if not ok:
        raise NotD0Error(
            f"problem is not D0: variable {prob.ring.names[witness]} has no pure power",
            witness,
        )
    n = prob.n
    m = 3 * n
    delta_cap = prob.bezout_cap()
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if method == "quotient":
        gens = build_ideal_fz(prob, GREVLEX)
        G = buchberger(gens, GREVLEX)
        t1 = time.perf_counter()
        G_rad = radical(G)
        t2 = time.perf_counter()
        timings["groebner"] = t1 - t0
        timings["radical"] = t2 - t1
        X = G_rad.ring.gens()
    else:
        gens = build_ideal_fz(prob, LEX)
        timings["groebner"] = 0.0
        timings["radical"] = 0.0
    t_shape = time.perf_counter()
    attempts = 0
    for H, s in h_candidates(strategy, m, delta_cap):
        attempts += 1
        if method == "quotient":
            Hinv = H.inverse()
            forms = [
                sum((X[k] * Hinv[j, k] for k in range(m) if Hinv[j, k]), G_rad.ring.zero())
                for j in range(m)
            ]
            res = shape_via_quotient(G_rad, forms[0], forms[1:])
            if res is None:
                log.debug("H attempt %d (s=%s) does not separate", attempts, s)
                continue
            w, u = res
            shape = ShapeBasis(w, tuple(u), 0)
        else:
            ring_y = Ring(tuple(f"y{i + 1}" for i in range(m)), GREVLEX)
            ta = time.perf_counter()
            hs = [substitute_linear(g, H, ring_y) for g in gens]
            G = buchberger(hs, GREVLEX)
            tb = time.perf_counter()
            G_rad = fglm(radical(G), LEX)
            tc = time.perf_counter()
            timings["groebner"] += tb - ta
            timings["radical"] += tc - tb
            shape = try_shape_position(G_rad)
            if shape is None:
                log.debug("H attempt %d (s=%s) not in shape position", attempts, s)
                continue
            w = shape.w
        v = _v_from_shape(H, w, shape.u, n)
        timings["shape"] = time.perf_counter() - t_shape - (
            timings["groebner"] + timings["radical"] if method == "lex" else 0.0
        )
        return UnivarRep(
            w=w, v=v, H_used=H, strategy=strategy, s_used=s, shape=shape,
            attempts=attempts, timings=timings,
        )
    if strategy.mode == "deterministic":
        raise ShapeSearchExhausted(
            "no s reached shape position within the loop bound "
            f"(3n-1)*delta*(delta-1)/2 + 1 = {deterministic_loop_bound(m, delta_cap)} "
            f"with delta <= 2^n (d+1)^n = {delta_cap}"
        )
    raise ShapeSearchExhausted(
        f"{attempts} change(s) of variables failed to reach shape position; "
        "try another seed or the deterministic strategy"
    )


def least_norm_representation(rep: UnivarRep) -> UnivarRep:
    """Attach the least-norm objective ``phi = (v_1^2 + ... + v_n^2) mod w``."""
    phi_hat = UPoly()
    for vi in rep.v:
        phi_hat = phi_hat + vi * vi
    return dataclasses.replace(rep, phi=udivrem(phi_hat, rep.w)[1])


def sparse_representation(rep: UnivarRep) -> SparseRep:
    """Largest ``k`` and the index sets carrying sparse solutions.

    For an index set ``l`` the candidate roots are those of
    ``w_l = gcd(w, v_i : i in l)`` at which no ``v_i`` with ``i`` outside
    ``l`` vanishes; they are the real roots of ``w_l`` with every
    ``gcd(w_l, v_i)`` divided out.
    """
    if count_real_roots(rep.w) == 0:
        raise DomainError("no solutions: w has no real roots")
    n = rep.n
    for j in range(n, 0, -1):
        omega, supports = [], []
        for ell in itertools.combinations(range(n), j):
            wl = ugcd([rep.w] + [rep.v[i] for i in ell])
            if wl.degree() < 1:
                continue
            support = wl
            for i in range(n):
                if i in ell:
                    continue
                g = ugcd([support, rep.v[i]])
                if g.degree() >= 1:
                    support = udivrem(support, g)[0]
                if support.degree() < 1:
                    break
            if support.degree() >= 1 and count_real_roots(support) > 0:
                omega.append(ell)
                supports.append(support.monic())
        if omega:
            return SparseRep(rep, j, tuple(omega), tuple(supports))
    support = rep.w
    for i in range(n):
        g = ugcd([support, rep.v[i]])
        if g.degree() >= 1:
            support = udivrem(support, g)[0]
    return SparseRep(rep, 0, ((),), (support.monic(),))


def copositive_solve(
    prob: PCPProblem,
    eps=None,
    seed: int | None = None,
    strategy: HStrategy | None = None,
    *,
    perturbation: Sequence | None = None,
    max_draws: int = 32,
    method: str = "quotient",
) -> tuple[tuple[Rational, ...], UnivarRep]:
    """Solve ``CP(f + a)`` for a small random ``a`` making it D0.

    ``f`` (or its leading part) is assumed copositive; this is not checked.
    Pass ``perturbation`` to use a fixed ``a`` instead of random draws. Use
    :func:`perturb` to rebuild the perturbed problem for enumeration.
    """
    if perturbation is not None:
        a = tuple(to_rational(x) for x in perturbation)
        if eps is not None:
            eps = to_rational(eps)
            if sum(x * x for x in a) >= eps * eps:
                raise DomainError("perturbation norm is not below eps")
        pert = perturb(prob, a)
        ok, witness = classify_d0(pert)
        if not ok:
            raise NotD0Error("the given perturbation does not yield a D0 problem", witness)
        return a, univariate_representation(pert, strategy, method)
    if eps is None:
        raise DomainError("eps is required for random perturbations")
    eps = to_rational(eps)
    if eps <= 0:
        raise DomainError("eps must be positive: a zero perturbation cannot repair a non-D0 problem")
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
    rng = random.Random(seed)
    n = prob.n
    scale = eps / (RANDOM_ENTRY_BOUND * (n + 1))
    for _ in range(max_draws):
        a = tuple(scale * rng.randint(-RANDOM_ENTRY_BOUND, RANDOM_ENTRY_BOUND) for _ in range(n))
        pert = perturb(prob, a)
        if classify_d0(pert)[0]:
            return a, univariate_representation(pert, strategy, method)
    raise ShapeSearchExhausted(
        f"{max_draws} random perturbations (seed {seed}) left the problem non-D0; "
        "try a different eps or seed"
    )


# ---------------------------------------------------------------------------
# Benchmark families


def generate_benchmark(family: str, n: int, d: int = 2) -> PCPProblem:
    """``p``: ``(-1)^d prod_{j=1..d} (x_i - j)``; ``q``: ``x_i^2 - 3 x_i + 1``."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be a positive integer")
    if not isinstance(d, int) or d < 1:
        raise DomainError("d must be a positive integer")
    family = family.removesuffix("_family")
    R = Ring(tuple(f"x{i + 1}" for i in range(n)))
    xs = R.gens()
    if family == "p":
        f = []
        for x in xs:
            p = R.const((-1) ** d)
            for j in range(1, d + 1):
                p = p * (x - j)
            f.append(p)
        return PCPProblem(tuple(f), f"p_family(n={n}, d={d})")
    if family == "q":
        if d != 2:
            raise DomainError("the q family has fixed degree 2")
        return PCPProblem(tuple(x**2 - 3 * x + 1 for x in xs), f"q_family(n={n})")
    raise DomainError(f"unknown benchmark family {family!r}")
