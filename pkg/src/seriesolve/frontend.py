"""Problem-level entry point: pick an engine for a ProblemSpec and run it."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from . import dac, newton, nonlinear, oracle, poly, special
from .errors import EngineUnsupported
from .matrix import SeriesMatrix, SeriesVector, as_vector
from .problem import ProblemSpec
from .series import Series

log = logging.getLogger(__name__)

ENGINES = ("auto", "newton", "dac", "const", "polycoeff", "naive")


@dataclass
class Solution:
    problem: str
    engine: str
    N: int
    value: object  # SeriesMatrix, SeriesVector, Series or list of Series

    def rows(self) -> list[Series]:
        """The solution as a flat list of series (row-major for matrices)."""
        v = self.value
        if isinstance(v, Series):
            return [v]
        if isinstance(v, list):
            return list(v)
        if isinstance(v, SeriesVector):
            return [v.component(i) for i in range(v.rows)]
        return [v[i, j] for i in range(v.rows) for j in range(v.cols)]

    def coefficients(self) -> np.ndarray:
        return np.stack([s.coeffs for s in self.rows()])

    def to_text(self) -> str:
        """One coefficient per line; entries separated by a blank line."""
        blocks = []
        for s in self.rows():
            blocks.append("\n".join(s.field.format(c) for c in s.coeffs))
        return "\n\n".join(blocks) + "\n"

    def to_json(self) -> str:
        rows = self.rows()
        F = rows[0].field
        return json.dumps({
            "problem": self.problem,
            "engine": self.engine,
            "field": F.spec(),
            "N": self.N,
            "series": [[F.format(c) for c in s.coeffs] for s in rows],
        })

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.coefficients(), other.coefficients())


def auto_engine(spec: ProblemSpec) -> str:
    if spec.problem == "nonlinear":
        return "newton"
    if spec.coeff_class == "constant":
        return "const"
    if spec.coeff_class == "polynomial":
        return "polycoeff"
    return "newton" if spec.problem in ("i", "I") else "dac"


def dispatch(spec: ProblemSpec, engine: str = "auto") -> Solution:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; pick one of {', '.join(ENGINES)}")
    spec.validate()
    chosen = auto_engine(spec) if engine == "auto" else engine
    if engine == "auto":
        log.info("auto engine for %s/%s: %s", spec.problem, spec.coeff_class, chosen)
    fn = _TABLE.get((spec.problem, chosen))
    if fn is None:
        raise EngineUnsupported(f"engine {chosen!r} cannot solve problem {spec.problem}")
    if chosen == "const" and spec.payload_degree() > 0:
        raise EngineUnsupported("const engine needs constant coefficients")
    if chosen == "polycoeff" and spec.coeff_class == "series":
        raise EngineUnsupported("polycoeff engine needs polynomial coefficients")
    if spec.coeff_class == "series" and _shortest_payload(spec) < spec.N - 1:
        log.warning("coefficient series shorter than N - 1 = %d are padded with zeros", spec.N - 1)
    return Solution(spec.problem, chosen, spec.N, fn(spec))


# -- helpers turning a spec into solver inputs --

def _shortest_payload(spec) -> int:
    arrays = [x for x in (spec.A, spec.B, spec.b) if x is not None] + list(spec.equation or [])
    return min((a.shape[-1] for a in arrays), default=spec.N)


def _mat(spec, M, k=None):
    F = spec.field
    k = spec.N if k is None else k
    return SeriesMatrix(F, poly.pad(F, M, k).copy(), True)


def _vec(spec, b, k=None):
    F = spec.field
    k = spec.N if k is None else k
    if b is None:
        return SeriesVector(F, F.zeros((spec.r, k)), True)
    return SeriesVector(F, poly.pad(F, b, k).copy(), True)


def _scalar_series(spec, k=None):
    F = spec.field
    k = spec.N if k is None else k
    eq = [Series(F, poly.pad(F, c, k).copy(), True) for c in spec.equation]
    rhs = None if spec.rhs is None else Series(F, poly.pad(F, spec.rhs, k).copy(), True)
    return eq, rhs


def _poly_mat(spec, M):
    # keep the stated degree bound so the recurrence length does not depend on N
    d = spec.degree if spec.degree is not None else 0
    return _mat(spec, M, d + 1)


def _unit_vectors(spec):
    F, r = spec.field, spec.r
    return [F.identity(r)[k] for k in range(r)]


# -- problem I --

def _I_newton(spec):
    A = _mat(spec, spec.A)
    if spec.B is None:
        return newton.solve_hom(A, spec.N, spec.init).Y
    return newton.solve_inhom(A, _mat(spec, spec.B), spec.N, spec.init)


def _I_columns(spec, solve_col):
    F = spec.field
    out = F.zeros((spec.r, spec.r, spec.N))
    for c in range(spec.r):
        b = None if spec.B is None else spec.B[:, c, :]
        out[:, c, :] = solve_col(spec.init[:, c], b).coeffs
    return SeriesMatrix(F, out, True)


def _I_dac(spec):
    A = _mat(spec, spec.A)
    return _I_columns(spec, lambda v, b: dac.solve(A, _vec(spec, b), spec.N, v))


def _I_const(spec):
    if spec.B is not None and np.any(spec.B != 0):
        raise EngineUnsupported("const engine handles homogeneous problem I only")
    return special.solve_const_I(spec.A[:, :, 0], spec.init, spec.N, spec.field)


def _I_polycoeff(spec):
    A = _poly_mat(spec, spec.A)
    return _I_columns(spec, lambda v, b: special.solve_polycoeff_II(
        A, None if b is None else _poly_vec(spec, b), v, spec.N))


def _I_naive(spec):
    B = None if spec.B is None else _mat(spec, spec.B)
    return oracle.naive_solve_II(_mat(spec, spec.A), B, spec.N, spec.init)


# -- problem II --

def _II_dac(spec):
    return dac.solve(_mat(spec, spec.A), _vec(spec, spec.b), spec.N, spec.init)


def _II_newton(spec):
    A = _mat(spec, spec.A)
    B = SeriesMatrix(spec.field, _vec(spec, spec.b).data, True)
    return as_vector(newton.solve_inhom(A, B, spec.N, spec.init))


def _II_const(spec):
    F, r = spec.field, spec.r
    A = spec.A[:, :, 0]
    if spec.b is None or not np.any(spec.b != 0):
        return special.solve_const_II(A, spec.init, spec.N, F)
    # a constant forcing becomes one more coordinate w' = 0, w(0) = 1
    Aa = F.zeros((r + 1, r + 1))
    Aa[:r, :r] = A
    Aa[:r, r] = spec.b[:, 0]
    v = F.zeros(r + 1)
    v[:r] = spec.init
    v[r] = F.scalar(1)
    y = special.solve_const_II(Aa, v, spec.N, F)
    return SeriesVector(F, y.coeffs[:r].copy(), True)


def _poly_vec(spec, b):
    d = spec.degree if spec.degree is not None else 0
    return _vec(spec, b, d + 1)


def _II_polycoeff(spec):
    b = None if spec.b is None else _poly_vec(spec, spec.b)
    return special.solve_polycoeff_II(_poly_mat(spec, spec.A), b, spec.init, spec.N)


def _II_naive(spec):
    b = None if spec.b is None else _vec(spec, spec.b)
    return oracle.naive_solve_II(_mat(spec, spec.A), b, spec.N, spec.init)


# -- problem ii --

def _ii_dac(spec):
    eq, rhs = _scalar_series(spec)
    return dac.solve_companion(eq, rhs, spec.N, spec.init, field=spec.field)


def _ii_newton(spec):
    F, N = spec.field, spec.N
    eq, rhs = _scalar_series(spec)
    A, b = dac.companion_matrix(F, eq, N, rhs)
    # the companion state is (y, y', ..., y^(r-1)), so it starts at alpha
    y = newton.solve_inhom(A, SeriesMatrix(F, b.data, True), N, spec.init)
    return y[0, 0]


def _ii_const(spec):
    F, r = spec.field, spec.r
    a = F.array([c[0] if len(c) else 0 for c in spec.equation])
    if spec.rhs is None or not np.any(spec.rhs != 0):
        return special.solve_const_ii(a, spec.init, spec.N, F)
    # differentiate once: sum a_k y^(k+1) = 0 with y^(r)(0) from the equation
    c = spec.rhs[0]
    acc = c
    for k in range(r):
        acc = F.sub(acc, F.reduce(a[k] * spec.init[k]))
    top = F.reduce(acc * F.inv(a[r]))
    a2 = F.zeros(r + 2)
    a2[1:] = a
    alpha = F.zeros(r + 1)
    alpha[:r] = spec.init
    alpha[r] = top
    return special.solve_const_ii(a2, alpha, spec.N, F)


def _ii_polycoeff(spec):
    d = spec.degree if spec.degree is not None else 0
    eq, _ = _scalar_series(spec, d + 1)
    rhs = None if spec.rhs is None else Series(spec.field, poly.pad(spec.field, spec.rhs, spec.N).copy(), True)
    return special.solve_polycoeff_ii(eq, spec.init, spec.N, spec.field, rhs=rhs)


def _ii_naive(spec):
    eq, rhs = _scalar_series(spec)
    return oracle.naive_solve_scalar(eq, rhs, spec.init, spec.N, spec.field)


# -- problem i --

def _i_each(fn):
    def run(spec):
        return [fn(spec, alpha) for alpha in _unit_vectors(spec)]
    return run


def _i_newton(spec):
    F, N = spec.field, spec.N
    eq, _ = _scalar_series(spec)
    A, _ = dac.companion_matrix(F, eq, N)
    Y = newton.solve_hom(A, N, F.identity(spec.r)).Y
    return [Y[0, k] for k in range(spec.r)]


def _with_init(spec, alpha):
    out = ProblemSpec(**{k: getattr(spec, k) for k in spec.__dataclass_fields__})
    out.problem = "ii"
    out.init = alpha
    return out


def _i_const(spec):
    a = spec.field.array([c[0] if len(c) else 0 for c in spec.equation])
    return special.solve_const_i(a, spec.N, spec.field)


# -- nonlinear --

def _nl_newton(spec):
    return nonlinear.solve_nonlinear(spec.system, spec.init, spec.N, field=spec.field)


def _nl_naive(spec):
    return oracle.picard_solve_nonlinear(spec.system, spec.init, spec.N, field=spec.field)


_TABLE = {
    ("I", "newton"): _I_newton,
    ("I", "dac"): _I_dac,
    ("I", "const"): _I_const,
    ("I", "polycoeff"): _I_polycoeff,
    ("I", "naive"): _I_naive,
    ("II", "newton"): _II_newton,
    ("II", "dac"): _II_dac,
    ("II", "const"): _II_const,
    ("II", "polycoeff"): _II_polycoeff,
    ("II", "naive"): _II_naive,
    ("ii", "newton"): _ii_newton,
    ("ii", "dac"): _ii_dac,
    ("ii", "const"): _ii_const,
    ("ii", "polycoeff"): _ii_polycoeff,
    ("ii", "naive"): _ii_naive,
    ("i", "newton"): _i_newton,
    ("i", "dac"): _i_each(lambda s, a: _ii_dac(_with_init(s, a))),
    ("i", "const"): _i_const,
    ("i", "polycoeff"): _i_each(lambda s, a: _ii_polycoeff(_with_init(s, a))),
    ("i", "naive"): _i_each(lambda s, a: _ii_naive(_with_init(s, a))),
    ("nonlinear", "newton"): _nl_newton,
    ("nonlinear", "naive"): _nl_naive,
}


def supported_engines(spec: ProblemSpec) -> list[str]:
    """Explicit engines that accept this spec."""
    out = []
    for e in ENGINES[1:]:
        if (spec.problem, e) not in _TABLE:
            continue
        if e == "const" and (spec.payload_degree() > 0
                             or (spec.problem == "I" and spec.B is not None and np.any(spec.B != 0))):
            continue
        if e == "polycoeff" and spec.coeff_class == "series":
            continue
        out.append(e)
    return out


# -- residuals --

def _scalar_residual(spec, y: Series, alpha, rhs) -> bool:
    F, r, N = spec.field, spec.r, spec.N
    m = N - r  # the equation pins coefficients below t^(N-r)
    if m <= 0:
        return True
    total = F.zeros(m) if rhs is None else F.neg(poly.pad(F, rhs, m))
    deriv = y.coeffs
    for j in range(r + 1):
        if j:
            deriv = F.reduce(deriv[1:] * F.array(np.arange(1, len(deriv))))
        prod = poly.mul_naive(F, poly.pad(F, spec.equation[j], m), poly.pad(F, deriv, m), m)
        total = F.add(total, prod)
    if np.any(total != 0):
        return False
    # y^(k)(0) = k! y_k
    fact = F.factorials(max(r, 1))
    init = F.reduce(y.coeffs[:r] * fact[:r])
    return np.array_equal(init, F.array(alpha).reshape(-1)[:r])


def check_residual(spec: ProblemSpec, sol: Solution) -> bool:
    """Does the solution satisfy its defining congruence and initial data?"""
    F, N, r = spec.field, spec.N, spec.r
    v = sol.value
    if spec.problem in ("I", "II"):
        Y = v.data
        k = N - 1
        A = poly.pad(F, spec.A, k)
        lhs = poly.pad(F, SeriesMatrix(F, Y, True).derivative().data, k)
        AY = F.reduce(poly.mul_naive(F, A[:, :, None, :], Y[None, :, :, :], k).sum(axis=1))
        forcing = spec.B if spec.problem == "I" else (None if spec.b is None else spec.b[:, None, :])
        res = F.sub(lhs, AY)
        if forcing is not None:
            res = F.sub(res, poly.pad(F, forcing, k))
        init = spec.init if spec.problem == "I" else spec.init.reshape(r, 1)
        return not np.any(res != 0) and np.array_equal(Y[:, :, 0], init)
    if spec.problem == "ii":
        return _scalar_residual(spec, v, spec.init, spec.rhs)
    if spec.problem == "i":
        return all(_scalar_residual(spec, y, e, None) for y, e in zip(v, _unit_vectors(spec)))
    res = nonlinear.residual(spec.system, v, max(N - 1, 0))
    return not np.any(res.coeffs != 0) and np.array_equal(v.coeffs[:, 0], spec.init)
