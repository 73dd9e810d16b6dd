from __future__ import annotations

import pytest

from pcpsolve.errors import DomainError
from pcpsolve.groebner import buchberger
from pcpsolve.poly import GREVLEX, LEX, Ring, change_ring
from pcpsolve.univar import UPoly, is_squarefree
from pcpsolve.zerodim import (
    QuotientAlgebra,
    fglm,
    is_radical,
    minimal_polynomial,
    radical,
    shape_via_quotient,
    try_shape_position,
)

t = UPoly.t()


@pytest.fixture
def R():
    return Ring(("y1", "y2"))


def test_minimal_polynomial(R):
    y1, y2 = R.gens()
    assert minimal_polynomial(buchberger([y1**2 - y1, y2 - y1]), 0) == t**2 - t
    assert minimal_polynomial(buchberger([y1**2, y2]), 1) == t
    one = Ring(("y1",))
    assert minimal_polynomial(buchberger([one.var(0) - 5]), 0) == t - 5
    with pytest.raises(DomainError):
        minimal_polynomial(buchberger([y1 * y2]), 0)
    with pytest.raises(DomainError):
        minimal_polynomial(buchberger([y1, y1 - 1]), 0)


def test_radical_examples(R):
    one = Ring(("y1",))
    (y,) = one.gens()
    assert list(radical(buchberger([y**2])).generators) == [y]
    y1, y2 = R.gens()
    G = buchberger([y1**2 - y1, y2 - y1])
    assert radical(G) == G
    rad = radical(buchberger([(y1 - 1) ** 2, y2 - y1]))
    assert list(rad.generators) == [y1 - 1, y2 - 1]
    with pytest.raises(DomainError):
        radical(buchberger([y1 * y2]))


def test_shape_position(R):
    y1, y2 = R.gens()
    s = try_shape_position(buchberger([y1**2 - y1, y2 - y1]))
    assert s.w == t**2 - t and s.u == (t,)
    assert try_shape_position(buchberger([y1**2, y2**2, y1 * y2])) is None
    s = try_shape_position(buchberger([y1 - 3, y2 - 7]))
    assert s.w == t - 3 and s.u == (UPoly.const(7),)


def test_shape_via_quotient_matches_lex():
    # points (0,0), (1,0), (0,1): y1 alone does not separate, y1 + 2 y2 does
    Rg = Ring(("a", "b"), GREVLEX)
    a, b = Rg.gens()
    G = buchberger([a**2 - a, b**2 - b, a * b], GREVLEX)
    assert shape_via_quotient(G, a, [b]) is None
    w, (ua, ub) = shape_via_quotient(G, a + 2 * b, [a, b])
    assert w == t * (t - 1) * (t - 2)
    for root, pt in ((0, (0, 0)), (1, (1, 0)), (2, (0, 1))):
        assert (ua(root), ub(root)) == pt


def test_fglm_equals_lex_buchberger():
    Rg = Ring(("a", "b", "c"), GREVLEX)
    a, b, c = Rg.gens()
    gens = [a**2 + b - 3, b**2 - a * c, c**2 - c + a - 1]
    G = buchberger(gens, GREVLEX)
    lex_direct = buchberger([change_ring(g, Rg.with_order(LEX)) for g in gens], LEX)
    assert fglm(G, LEX) == lex_direct


def test_quotient_algebra_dimension():
    Rg = Ring(("a", "b"), GREVLEX)
    a, b = Rg.gens()
    G = buchberger([a**3 - a, b**2 - 1], GREVLEX)
    A = QuotientAlgebra(G)
    assert A.dim == 6
    assert is_radical(G)
    assert is_squarefree(minimal_polynomial(G, a + 3 * b))
