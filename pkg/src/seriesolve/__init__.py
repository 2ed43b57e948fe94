"""Exact truncated power series solutions of linear and polynomial ODEs."""

from .counter import OpCounter, counting
from .dac import divide_and_conquer, solve, solve_companion
from .errors import *  # noqa: F401,F403
from .field import PrimeField, Rationals, parse_field
from .frontend import Solution, check_residual, dispatch
from .matrix import SeriesMatrix, SeriesVector
from .newton import newton_step, solve_hom, solve_inhom
from .nonlinear import NonlinearEvaluator, SparsePolySystem, parse_poly_system, solve_nonlinear
from .problem import ProblemSpec, parse_problem, random_problem, render_problem
from .series import Series
from .special import (
    RationalFunction,
    expand_rational,
    krylov_doubling,
    pade,
    solve_const_i,
    solve_const_I,
    solve_const_ii,
    solve_const_II,
    solve_polycoeff_ii,
    solve_polycoeff_II,
)

__version__ = "0.1.0"
