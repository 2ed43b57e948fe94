"""First-order non-linear systems ``y' = phi(t, y)`` by linearization.

Each pass solves the tangent system ``z' = Jac(phi)(y) z + phi(y) - y'``
with the divide-and-conquer solver and doubles the number of correct
coefficients of ``y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import poly
from .dac import solve
from .errors import ParseError, ResidualNonzero
from .field import ensure_characteristic
from .matrix import SeriesMatrix, SeriesVector


@dataclass
class NonlinearEvaluator:
    """``evaluate(y, n) -> (phi(t, y) mod t^n, Jac(phi)(t, y) mod t^n)``.

    ``value`` optionally computes ``phi`` alone.  ``cost`` is an
    informational description of L(n); nothing checks it.
    """

    r: int
    evaluate: Callable[[SeriesVector, int], tuple]
    value: Callable[[SeriesVector, int], SeriesVector] | None = None
    cost: str = "unknown"

    def phi(self, y: SeriesVector, n: int) -> SeriesVector:
        if self.value is not None:
            return self.value(y, n)
        return self.evaluate(y, n)[0]


@dataclass
class SparsePolySystem:
    """``r`` polynomials in ``t, y_1..y_r`` as lists of (coefficient, exponents).

    ``exponents`` has length ``r + 1``: the power of ``t`` first.
    """

    r: int
    equations: list
    field: object = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.equations) != self.r:
            raise ValueError(f"expected {self.r} equations, got {len(self.equations)}")
        for i, eq in enumerate(self.equations):
            seen = set()
            for coeff, exps in eq:
                exps = tuple(exps)
                if len(exps) != self.r + 1 or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} in equation {i + 1}")
                if exps in seen:
                    raise ValueError(f"duplicate monomial {exps} in equation {i + 1}")
                seen.add(exps)

    @property
    def monomial_count(self) -> int:
        return sum(len(eq) for eq in self.equations)

    def to_text(self) -> str:
        lines = []
        for i, eq in enumerate(self.equations):
            terms = [_format_monomial(self.field, c, e) for c, e in eq]
            lines.append(f"dy{i + 1} = " + (" + ".join(terms) if terms else "0"))
        return "\n".join(lines)


def _format_monomial(F, coeff, exps) -> str:
    parts = []
    c = F.format(coeff) if F is not None else str(coeff)
    names = ["t"] + [f"y{j}" for j in range(1, len(exps))]
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    if not parts:
        return c
    if c == "1":
        return "*".join(parts)
    return "*".join([c] + parts)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(t|y\d+)|(\^)|(\*)|([+-]))")


def parse_poly_system(F, lines, r: int | None = None, first_line: int = 1) -> SparsePolySystem:
    """Parse lines like ``dy1 = t + y1^2*y2 - 3*y2``.

    ``lines`` holds strings (numbered from ``first_line``) or
    ``(lineno, text)`` pairs.
    """
    numbered = [x if isinstance(x, tuple) else (first_line + k, x) for k, x in enumerate(lines)]
    numbered = [(n, x) for n, x in numbered if x.strip()]
    if r is None:
        r = len(numbered)
    eqs = [None] * r
    for lineno, line in numbered:
        m = re.match(r"\s*dy(\d+)\s*=\s*(.*)$", line)
        if not m:
            raise ParseError("expected 'dy<i> = <polynomial>'", lineno, 1)
        i = int(m.group(1)) - 1
        if not 0 <= i < r:
            raise ParseError(f"dy{i + 1} exceeds the system size {r}", lineno, 1)
        if eqs[i] is not None:
            raise ParseError(f"dy{i + 1} defined twice", lineno, 1)
        eqs[i] = _parse_poly(F, m.group(2), r, lineno, m.start(2) + 1)
    for i, eq in enumerate(eqs):
        if eq is None:
            raise ParseError(f"missing equation for dy{i + 1}")
    return SparsePolySystem(r, eqs, F)


def _parse_poly(F, text, r, lineno, col0):
    terms: dict = {}
    pos = 0
    sign = 1
    expect_term = True
    coeff, exps = None, None

    def flush():
        nonlocal coeff, exps
        if exps is None:
            return
        c = F.reduce(sign * F.scalar(Fraction(coeff if coeff is not None else 1)))
        key = tuple(exps)
        terms[key] = F.reduce(terms.get(key, F.scalar(0)) + c)
        coeff, exps = None, None

    text = text.rstrip()
    if text.strip() == "0":
        return []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected {text[pos:].strip()[:10]!r}", lineno, col0 + pos)
        num, var, caret, star, op = m.groups()
        col = col0 + m.start(m.lastindex)
        pos = m.end()
        if op:
            if exps is not None and not expect_term:
                flush()
                sign = 1
            sign *= -1 if op == "-" else 1
            expect_term = True
            continue
        if star:
            if exps is None:
                raise ParseError("'*' without a left factor", lineno, col)
            expect_term = True
            continue
        if caret:
            raise ParseError("'^' must follow a variable", lineno, col)
        if not expect_term:
            raise ParseError("missing operator", lineno, col)
        if exps is None:
            exps = [0] * (r + 1)
        if num is not None:
            coeff = Fraction(num) * (Fraction(coeff) if coeff is not None else 1)
        else:
            idx = 0 if var == "t" else int(var[1:])
            if not 0 <= idx <= r:
                raise ParseError(f"unknown variable {var}", lineno, col)
            e = 1
            m2 = re.match(r"\s*\^\s*(\d+)", text[pos:])
            if m2:
                e = int(m2.group(1))
                pos += m2.end()
            exps[idx] += e
        expect_term = False
    if expect_term:
        raise ParseError("expression ends with an operator", lineno, col0 + len(text))
    flush()
    return [(c, k) for k, c in terms.items() if not F.is_zero(c)]


def poly_system_evaluator(P: SparsePolySystem, F=None, algorithm: str | None = None) -> NonlinearEvaluator:
    """Evaluate ``phi`` and its symbolic Jacobian with truncated series products."""
    F = F or P.field
    r = P.r

    def powers(y, n):
        maxe = [0] * r
        for eq in P.equations:
            for _, e in eq:
                for j in range(r):
                    maxe[j] = max(maxe[j], e[j + 1])
        table = []
        for j in range(r):
            one = F.zeros(n)
            if n:
                one[0] = F.scalar(1)
            pw = [one]
            base = poly.pad(F, y.coeffs[j], n)
            for _ in range(maxe[j]):
                pw.append(poly.mul(F, pw[-1], base, n, algorithm))
            table.append(pw)
        return table

    def monomial(c, e, table, n, skip=None):
        acc = None
        for j in range(r):
            k = e[j + 1] - (1 if j == skip else 0)
            if k == 0:
                continue
            acc = table[j][k] if acc is None else poly.mul(F, acc, table[j][k], n, algorithm)
        if acc is None:
            acc = table[0][0]
        shifted = F.zeros(n)
        a = e[0]
        if a < n:
            shifted[a:] = acc[:n - a]
        return F.reduce(shifted * c)

    def value(y, n):
        table = powers(y, n)
        out = F.zeros((r, n))
        for i, eq in enumerate(P.equations):
            for c, e in eq:
                out[i] = F.add(out[i], monomial(c, e, table, n))
        return SeriesVector(F, out, True)

    def evaluate(y, n):
        table = powers(y, n)
        phi = F.zeros((r, n))
        jac = F.zeros((r, r, n))
        for i, eq in enumerate(P.equations):
            for c, e in eq:
                phi[i] = F.add(phi[i], monomial(c, e, table, n))
                for j in range(r):
                    if e[j + 1]:
                        cj = F.reduce(c * F.scalar(e[j + 1]))
                        jac[i, j] = F.add(jac[i, j], monomial(cj, e, table, n, skip=j))
        return SeriesVector(F, phi, True), SeriesMatrix(F, jac, True)

    return NonlinearEvaluator(r, evaluate, value, cost=f"O({P.monomial_count} r M(n))")


def linear_evaluator(A: SeriesMatrix, b: SeriesVector) -> NonlinearEvaluator:
    """``phi(t, y) = A y + b`` wrapped as an evaluator."""
    F = A.field

    def value(y, n):
        Ay = poly.matmul(F, A.data, y.data, n)
        return SeriesVector(F, F.add(Ay, poly.pad(F, b.data, n)), True)

    def evaluate(y, n):
        return value(y, n), A.truncate(n)

    return NonlinearEvaluator(A.rows, evaluate, value, cost="O(r^2 M(n))")


def as_evaluator(phi, F=None) -> NonlinearEvaluator:
    if isinstance(phi, NonlinearEvaluator):
        return phi
    if isinstance(phi, SparsePolySystem):
        return poly_system_evaluator(phi, F)
    raise TypeError(f"cannot evaluate {phi!r}")


def residual(phi, y: SeriesVector, n: int) -> SeriesVector:
    """``y' - phi(t, y) mod t^n``."""
    ev = as_evaluator(phi, y.field)
    F = y.field
    d = poly.pad(F, y.derivative().coeffs, n)
    return SeriesVector(F, F.sub(d, ev.phi(y, n).coeffs), True)


def solve_nonlinear(phi, v, N: int, verify: bool = True, field=None,
                    on_step: Callable | None = None, leaf: int = 1) -> SeriesVector:
    """First ``N`` terms of ``y`` with ``y' = phi(t, y)``, ``y(0) = v``.

    Raises ResidualNonzero when the final check ``y' = phi(t, y) mod t^{N-1}``
    fails (no formal solution, or an inconsistent evaluator).
    """
    F = field or getattr(phi, "field", None)
    ev = as_evaluator(phi, F)
    r = ev.r
    if F is None:
        raise ValueError("field is required for custom evaluators")
    ensure_characteristic(F, N)
    y = SeriesVector.constant(F, v, 1)
    m = 1
    while m < N:
        n = min(2 * m, N)
        yp = y.truncate(n)
        val, jac = ev.evaluate(yp, n)
        b = SeriesVector(F, F.sub(val.coeffs, poly.pad(F, yp.derivative().coeffs, n)), True)
        z = solve(jac.truncate(n), b, n, F.zeros(r), leaf=leaf)
        y = yp + z
        m *= 2
        if on_step is not None:
            on_step(m, y)
    y = y.truncate(N)
    if verify and N > 1:
        res = residual(ev, y, N - 1)
        if np.any(res.coeffs != 0):
            raise ResidualNonzero("y' - phi(t, y) does not vanish mod t^(N-1)")
    return y
