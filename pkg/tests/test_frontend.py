import json
import logging

import numpy as np
import pytest

from seriesolve.errors import EngineUnsupported
from seriesolve.field import Rationals
from seriesolve.frontend import (
    ENGINES,
    Solution,
    auto_engine,
    check_residual,
    dispatch,
    supported_engines,
)
from seriesolve.problem import KINDS, parse_problem, random_problem
from seriesolve.series import Series

from conftest import P

Q = Rationals()


def test_auto_routing():
    assert auto_engine(random_problem("II", "constant", 2, 8, P, 0)) == "const"
    assert auto_engine(random_problem("i", "series", 2, 8, P, 0)) == "newton"
    assert auto_engine(random_problem("I", "series", 2, 8, P, 0)) == "newton"
    assert auto_engine(random_problem("ii", "series", 2, 8, P, 0)) == "dac"
    assert auto_engine(random_problem("II", "series", 2, 8, P, 0)) == "dac"
    assert auto_engine(random_problem("ii", "polynomial", 2, 8, P, 0)) == "polycoeff"
    assert auto_engine(random_problem("nonlinear", "series", 2, 8, P, 0)) == "newton"


def test_auto_logs_choice(caplog):
    with caplog.at_level(logging.INFO, logger="seriesolve.frontend"):
        sol = dispatch(random_problem("II", "constant", 2, 8, P, 0))
    assert sol.engine == "const"
    assert "const" in caplog.text


def test_unsupported():
    with pytest.raises(EngineUnsupported):
        dispatch(random_problem("nonlinear", "series", 2, 8, P, 0), "dac")
    with pytest.raises(EngineUnsupported):
        dispatch(random_problem("II", "series", 2, 8, P, 0), "const")
    with pytest.raises(EngineUnsupported):
        dispatch(random_problem("ii", "series", 2, 8, P, 0), "polycoeff")
    with pytest.raises(ValueError):
        dispatch(random_problem("ii", "series", 2, 8, P, 0), "magic")
    assert supported_engines(random_problem("nonlinear", "series", 2, 8, P, 0)) == ["newton", "naive"]
    assert supported_engines(random_problem("II", "series", 2, 8, P, 0)) == ["newton", "dac", "naive"]
    assert set(supported_engines(random_problem("II", "constant", 2, 8, P, 0))) == set(ENGINES[1:])


def test_const_I_with_forcing_is_unsupported():
    s = random_problem("I", "constant", 2, 8, P, 0)
    s.B = P.array([[[1], [0]], [[0], [0]]])
    assert "const" not in supported_engines(s)
    with pytest.raises(EngineUnsupported):
        dispatch(s, "const")


CASES = [(kind, cls, r, hom) for kind in KINDS for cls in ("series", "constant", "polynomial")
         for r in (1, 3) for hom in (False, True)
         if not (kind == "nonlinear" and cls != "series")]


@pytest.mark.parametrize("kind,cls,r,hom", CASES)
def test_every_engine_matches_naive(kind, cls, r, hom):
    for F, N in ((P, 33), (Q, 12)):
        spec = random_problem(kind, cls, r, N, F, seed=7 + r, inhomogeneous=not hom)
        ref = dispatch(spec, "naive")
        assert check_residual(spec, ref)
        for e in supported_engines(spec):
            sol = dispatch(spec, e)
            assert sol == ref, e
            assert check_residual(spec, sol), e


def test_residual_detects_tampering():
    spec = random_problem("II", "series", 2, 10, P, 0)
    sol = dispatch(spec)
    data = sol.value.coeffs.copy()
    data[1, 5] = P.add(data[1, 5], P.scalar(1))
    bad = Solution(sol.problem, sol.engine, sol.N, type(sol.value)(P, data, True))
    assert not check_residual(spec, bad)
    spec = random_problem("ii", "series", 2, 10, P, 0)
    sol = dispatch(spec)
    c = sol.value.coeffs.copy()
    c[0] = P.add(c[0], P.scalar(1))
    assert not check_residual(spec, Solution("ii", "dac", 10, Series(P, c, True)))


def test_short_payload_warns(caplog):
    text = """\
[field]
q
[problem]
kind: II
r: 1
N: 6
[matrix A]
1
[init]
1
"""
    with caplog.at_level(logging.WARNING):
        sol = dispatch(parse_problem(text), "dac")
    assert "padded" in caplog.text
    assert [str(c) for c in sol.value.coeffs[0]] == ["1", "1", "1/2", "1/6", "1/24", "1/120"]


def test_text_and_json_output():
    text = """\
[field]
q
[problem]
kind: I
coeffs: constant
r: 2
N: 3
[matrix A]
0
1
0
0
[init]
1 0
0 1
"""
    sol = dispatch(parse_problem(text))
    # Y = exp(A t) = I + A t with A nilpotent
    assert sol.to_text() == "1\n0\n0\n\n0\n1\n0\n\n0\n0\n0\n\n1\n0\n0\n"
    d = json.loads(sol.to_json())
    assert d == {"problem": "I", "engine": "const", "field": "q", "N": 3,
                 "series": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"], ["1", "0", "0"]]}
    assert sol.coefficients().shape == (4, 3)


def test_scalar_i_returns_basis():
    spec = random_problem("i", "series", 3, 9, P, 1)
    sol = dispatch(spec)
    assert len(sol.rows()) == 3
    for k, y in enumerate(sol.rows()):
        assert y.coeffs[k] != 0 and all(y.coeffs[j] == 0 for j in range(3) if j != k)
