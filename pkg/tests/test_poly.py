from __future__ import annotations

from fractions import Fraction

import pytest

from pcpsolve.errors import DomainError, RingMismatchError, SingularMatrixError
from pcpsolve.pipeline import first_row_matrix
from pcpsolve.poly import (
    GREVLEX,
    LEX,
    MonomialOrder,
    MPoly,
    RationalMatrix,
    Ring,
    evaluate,
    leading_term,
    rational_str,
    substitute_linear,
    to_rational,
)


def test_rational_normal_form():
    q = to_rational(Fraction(6, -4))
    assert (q.numerator, q.denominator) == (-3, 2)
    assert rational_str(to_rational(0)) == "0"
    assert to_rational("1e-6") == to_rational(Fraction(1, 10**6))
    assert rational_str(to_rational("3/4")) == "3/4"


def test_arith_examples(r2):
    x1, x2 = r2.gens()
    assert (x1 + -x1).is_zero()
    assert x1 * (x2 - 1) == x1 * x2 - x1
    assert str(x1 * (x2 - 1)) == "x1*x2 - x1"
    assert (x1 + 1) ** 2 == x1 * x1 + 2 * x1 + 1


def test_negative_power_rejected(r2):
    with pytest.raises(DomainError):
        r2.var(0) ** -1


def test_ring_mismatch(r2):
    other = Ring(("y1", "y2"))
    with pytest.raises(RingMismatchError):
        r2.var(0) + other.var(0)
    with pytest.raises(RingMismatchError):
        r2.var(0) + r2.with_order(GREVLEX).var(0)


def test_zero_degree_sentinel(r2):
    assert r2.zero().total_degree() < 0


def test_leading_term_lex_and_grevlex():
    R = Ring(("x1", "x2"))
    x1, x2 = R.gens()
    # x1 < x2 under lex
    assert leading_term(x1**3 + x2) == ((0, 1), 1)
    G = R.with_order(GREVLEX)
    y1, y2 = G.gens()
    assert leading_term(y1**3 + y2)[0] == (3, 0)


def test_lex_precedence_reversal():
    R = Ring(("a", "b"), MonomialOrder("lex", (1, 0)))  # b < a
    a, b = R.gens()
    assert leading_term(a + b**5)[0] == (1, 0)


def test_leading_term_zero_raises(r2):
    with pytest.raises(DomainError):
        leading_term(r2.zero())


def test_evaluate(r2):
    x1, x2 = r2.gens()
    assert evaluate(x1 * x2 - x1, [1, 1]) == 0
    p = 3 * x1**2 - x2 + 7
    assert evaluate(p, [0, 0]) == 7
    c = x1**2 + x2**2 - 1
    assert evaluate(c, [Fraction(3, 5), Fraction(4, 5)]) == 0
    with pytest.raises(RingMismatchError):
        evaluate(p, [1])


def test_substitute_identity(r2):
    x1, x2 = r2.gens()
    p = x1 * x2 - x1 + 5
    assert substitute_linear(p, RationalMatrix.identity(2), r2) == p


def test_substitute_first_row_example():
    R = Ring(tuple(f"x{i}" for i in range(1, 7)))
    H = first_row_matrix([1, 2, 3, 4, 5, 6])
    out = substitute_linear(R.var(0), H)
    ys = out.ring.gens()
    assert out == ys[0] + 2 * ys[1] + 3 * ys[2] + 4 * ys[3] + 5 * ys[4] + 6 * ys[5]


def test_substitute_product_by_evaluation():
    import random

    R = Ring(tuple(f"x{i}" for i in range(1, 7)))
    x = R.gens()
    H = first_row_matrix([1, 2, 3, 4, 5, 6])
    p = x[0] * x[1] - x[0]
    q = substitute_linear(p, H)
    rng = random.Random(5)
    for _ in range(5):
        y = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(6)]
        hy = H @ [to_rational(v) for v in y]
        assert evaluate(q, y) == evaluate(p, hy)


def test_singular_matrix():
    H = RationalMatrix([[1, 2], [2, 4]])
    assert not H.is_invertible()
    with pytest.raises(SingularMatrixError) as err:
        H.inverse()
    assert err.value.column == 1
    R = Ring(("x1", "x2"))
    with pytest.raises(DomainError):
        substitute_linear(R.var(0), H)


def test_matrix_inverse_roundtrip():
    H = first_row_matrix([1, 2, 3])
    assert H @ H.inverse() == RationalMatrix.identity(3)
