"""Exact solver for polynomial complementarity problems.

Solutions of ``x >= 0, f(x) >= 0, x_i f_i(x) = 0`` are described by a
univariate representation ``[w, v_1, ..., v_n]`` and enumerated with
certified interval bounds.
"""

from .enumerate import (
    PrecisionPair,
    Solution,
    enumerate_least_norm,
    enumerate_solutions,
    enumerate_sparse,
)
from .errors import (
    CertificationError,
    DomainError,
    NotD0Error,
    ParseError,
    PCPError,
    RingMismatchError,
    ShapeSearchExhausted,
    SingularMatrixError,
)
from .pipeline import (
    HStrategy,
    PCPProblem,
    SparseRep,
    UnivarRep,
    build_ideal_f,
    build_ideal_fz,
    classify_d0,
    copositive_solve,
    generate_benchmark,
    least_norm_representation,
    perturb,
    sparse_representation,
    univariate_representation,
)
from .poly import GREVLEX, LEX, MonomialOrder, MPoly, RationalMatrix, Ring
from .problem_io import parse_expression, parse_polynomial, problem_from_strings, read_rep, serialize_rep
from .univar import UPoly

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
