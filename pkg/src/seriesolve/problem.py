"""Problem files and random instances.

A problem file is plain UTF-8 text split into sections::

    # y' = y over Z/pZ
    [field]
    p:2013265921

    [problem]
    kind: II
    coeffs: constant
    r: 1
    N: 8

    [matrix A]
    1

    [init]
    1

Series entries are coefficient lists, lowest degree first, one entry per
line.  Matrices are listed row-major (``r * r`` lines).  ``[init]`` holds
``Y(0)`` row by row for problem I and a single line of r scalars for II,
ii and nonlinear problems; problem i needs none.  ``[equation]`` holds
``a0: ...`` to ``a<r>: ...`` (and optionally ``rhs: ...``) for scalar
equations, or ``dy<i> = <polynomial>`` lines for nonlinear systems.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError
from .field import FieldDescriptor, parse_field
from .nonlinear import SparsePolySystem, parse_poly_system

KINDS = ("i", "ii", "I", "II", "nonlinear")
COEFF_CLASSES = ("series", "constant", "polynomial")
SECTIONS = ("field", "problem", "matrix A", "matrix B", "vector b", "init", "equation")


@dataclass(eq=False)
class ProblemSpec:
    problem: str
    coeff_class: str
    field: FieldDescriptor
    r: int
    N: int
    degree: int | None = None
    A: np.ndarray | None = None  # (r, r, k)
    B: np.ndarray | None = None  # (r, r, k), problem I only
    b: np.ndarray | None = None  # (r, k)
    init: np.ndarray | None = None  # (r, r) for I, (r,) otherwise
    equation: list | None = None  # a_0 .. a_r as 1-d arrays
    rhs: np.ndarray | None = None
    system: SparsePolySystem | None = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, ProblemSpec):
            return NotImplemented
        head = ("problem", "coeff_class", "field", "r", "N", "degree")
        if any(getattr(self, k) != getattr(other, k) for k in head):
            return False
        for k in ("A", "B", "b", "init", "rhs"):
            x, y = getattr(self, k), getattr(other, k)
            if (x is None) != (y is None) or (x is not None and not np.array_equal(x, y)):
                return False
        if (self.equation is None) != (other.equation is None):
            return False
        if self.equation is not None:
            if len(self.equation) != len(other.equation):
                return False
            if not all(np.array_equal(x, y) for x, y in zip(self.equation, other.equation)):
                return False
        if (self.system is None) != (other.system is None):
            return False
        return self.system is None or self.system.to_text() == other.system.to_text()

    def with_precision(self, N: int) -> ProblemSpec:
        out = ProblemSpec(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        out.N = N
        out.validate()
        return out

    def payload_degree(self) -> int:
        """Largest degree among the coefficient series (-1 when all vanish)."""
        arrays = [x for x in (self.A, self.B, self.b, self.rhs) if x is not None]
        arrays += list(self.equation or [])
        deg = -1
        for a in arrays:
            nz = np.nonzero(a.reshape(-1, a.shape[-1]) != 0)[1] if a.size else []
            if len(nz):
                deg = max(deg, int(max(nz)))
        return deg

    def validate(self) -> None:
        if self.problem not in KINDS:
            raise ValueError(f"unknown problem kind {self.problem!r}")
        if self.coeff_class not in COEFF_CLASSES:
            raise ValueError(f"unknown coefficient class {self.coeff_class!r}")
        r = self.r
        if r < 1 or self.N < 1:
            raise DimensionMismatch("r and N must be positive")
        if self.problem in ("I", "II"):
            _need(self.A is not None, "matrix A is required")
            _shape(self.A, (r, r), "matrix A")
            if self.B is not None:
                _need(self.problem == "I", "matrix B only applies to problem I")
                _shape(self.B, (r, r), "matrix B")
            if self.b is not None:
                _need(self.problem == "II", "vector b only applies to problem II")
                _shape(self.b, (r,), "vector b")
            want = (r, r) if self.problem == "I" else (r,)
            _need(self.init is not None and self.init.shape == want,
                  f"init must have shape {want}")
        elif self.problem in ("i", "ii"):
            _need(self.equation is not None and len(self.equation) == r + 1,
                  f"equation needs a0 .. a{r}")
            if self.problem == "i":
                _need(self.rhs is None, "problem i takes no right-hand side")
                _need(self.init is None, "problem i takes no initial values")
            else:
                _need(self.init is not None and self.init.shape == (r,),
                      f"init must hold {r} values")
        else:
            _need(self.system is not None and self.system.r == r, f"need {r} equations dy1 .. dy{r}")
            _need(self.init is not None and self.init.shape == (r,), f"init must hold {r} values")
        if self.problem != "nonlinear":
            deg = self.payload_degree()
            if self.coeff_class == "constant":
                _need(deg <= 0, "constant coefficients must have degree 0")
            if self.coeff_class == "polynomial":
                _need(self.degree is not None, "polynomial coefficients need a degree bound")
                _need(deg <= self.degree, f"coefficient degree {deg} exceeds the bound {self.degree}")


def _need(cond, msg):
    if not cond:
        raise DimensionMismatch(msg)


def _shape(a, lead, what):
    if a.shape[:-1] != lead:
        raise DimensionMismatch(f"{what} has shape {a.shape[:-1]}, expected {lead}")


# -- parsing --

_SECTION = re.compile(r"^\[\s*([^\]]*?)\s*\]\s*$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_problem(text: str, field: FieldDescriptor | None = None) -> ProblemSpec:
    """Parse a problem file; ``field`` overrides its [field] section."""
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        m = _SECTION.match(line.strip())
        if m:
            name = " ".join(m.group(1).split())
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno, 1)
            if name in sections:
                raise ParseError(f"section [{name}] repeated", lineno, 1)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section", lineno, 1)
        sections[current].append((lineno, line))
    nlines = len(text.splitlines())
    for name in ("field", "problem"):
        if name not in sections:
            raise ParseError(f"missing section [{name}]", nlines + 1, 1)

    flines = sections["field"]
    if len(flines) != 1:
        raise ParseError("[field] takes exactly one line", flines[0][0] if flines else nlines, 1)
    try:
        F = parse_field(flines[0][1].strip())
    except ValueError as e:
        raise ParseError(str(e), flines[0][0], 1) from None
    if field is not None:
        F = field

    keys = {}
    for lineno, line in sections["problem"]:
        m = re.match(r"\s*(\w+)\s*[:=]\s*(\S+)\s*$", line)
        if not m:
            raise ParseError("expected 'key: value'", lineno, 1)
        keys[m.group(1)] = (m.group(2), lineno, m.start(2) + 1)
    kind = _key(keys, "kind", sections)
    cls = _key(keys, "coeffs", sections, default="series")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {', '.join(KINDS)}", *keys["kind"][1:])
    if cls not in COEFF_CLASSES:
        raise ParseError(f"coeffs must be one of {', '.join(COEFF_CLASSES)}", *keys["coeffs"][1:])
    r = _int_key(keys, "r", sections)
    N = _int_key(keys, "N", sections)
    degree = _int_key(keys, "degree", sections) if "degree" in keys else None
    unknown = set(keys) - {"kind", "coeffs", "r", "N", "degree"}
    if unknown:
        k = sorted(unknown)[0]
        raise ParseError(f"unknown key {k!r}", keys[k][1], 1)

    spec = ProblemSpec(kind, cls, F, r, N, degree)
    end = nlines + 1
    if "matrix A" in sections:
        spec.A = _entries(F, sections["matrix A"], r * r, "matrix A", end).reshape(r, r, -1)
    if "matrix B" in sections:
        spec.B = _entries(F, sections["matrix B"], r * r, "matrix B", end).reshape(r, r, -1)
    if "vector b" in sections:
        spec.b = _entries(F, sections["vector b"], r, "vector b", end)
    if "init" in sections:
        rows = sections["init"]
        if kind == "I":
            spec.init = np.stack([_scalars(F, ln, line, r) for ln, line in _exactly(rows, r, "init", end)])
        else:
            (ln, line), = _exactly(rows, 1, "init", end)
            spec.init = _scalars(F, ln, line, r)
    if "equation" in sections:
        rows = sections["equation"]
        if kind == "nonlinear":
            spec.system = parse_poly_system(F, rows, r)
        else:
            spec.equation, spec.rhs = _scalar_equation(F, rows, r, end)
    spec.validate()
    return spec


def _key(keys, name, sections, default=None):
    if name not in keys:
        if default is not None:
            return default
        ln = sections["problem"][-1][0] if sections["problem"] else 1
        raise ParseError(f"[problem] is missing '{name}'", ln, 1)
    return keys[name][0]


def _int_key(keys, name, sections):
    val = _key(keys, name, sections)
    try:
        return int(val)
    except ValueError:
        raise ParseError(f"'{name}' must be an integer", *keys[name][1:]) from None


def _scalars(F, lineno, line, count=None):
    out = []
    for m in re.finditer(r"\S+", line):
        try:
            out.append(F.parse(m.group(0)))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad scalar {m.group(0)!r}", lineno, m.start() + 1) from None
    if count is not None and len(out) != count:
        raise ParseError(f"expected {count} scalars, got {len(out)}", lineno, 1)
    return F.array(out)


def _exactly(rows, count, what, end):
    if len(rows) < count:
        raise ParseError(f"[{what}] is truncated: expected {count} lines, got {len(rows)}",
                         rows[-1][0] + 1 if rows else end, 1)
    if len(rows) > count:
        raise ParseError(f"[{what}] has extra lines", rows[count][0], 1)
    return rows


def _entries(F, rows, count, what, end):
    rows = _exactly(rows, count, what, end)
    polys = [_scalars(F, ln, line) for ln, line in rows]
    k = max(len(p) for p in polys)
    out = F.zeros((count, k))
    for i, p in enumerate(polys):
        out[i, :len(p)] = p
    return out


def _scalar_equation(F, rows, r, end):
    coeffs = [None] * (r + 1)
    rhs = None
    for ln, line in rows:
        m = re.match(r"\s*(a(\d+)|rhs)\s*:(.*)$", line)
        if not m:
            raise ParseError("expected 'a<k>: ...' or 'rhs: ...'", ln, 1)
        vals = _scalars(F, ln, " " * m.start(3) + m.group(3))
        if m.group(1) == "rhs":
            if rhs is not None:
                raise ParseError("rhs given twice", ln, 1)
            rhs = vals
            continue
        k = int(m.group(2))
        if k > r:
            raise ParseError(f"a{k} exceeds the order {r}", ln, 1)
        if coeffs[k] is not None:
            raise ParseError(f"a{k} given twice", ln, 1)
        coeffs[k] = vals
    for k, c in enumerate(coeffs):
        if c is None:
            raise ParseError(f"[equation] is missing a{k}", rows[-1][0] + 1 if rows else end, 1)
    return coeffs, rhs


# -- rendering --

def _fmt(F, values) -> str:
    return " ".join(F.format(x) for x in values) if len(values) else "0"


def render_problem(spec: ProblemSpec) -> str:
    F = spec.field
    out = ["[field]", F.spec(), "", "[problem]", f"kind: {spec.problem}",
           f"coeffs: {spec.coeff_class}", f"r: {spec.r}", f"N: {spec.N}"]
    if spec.degree is not None:
        out.append(f"degree: {spec.degree}")
    for name, M in (("matrix A", spec.A), ("matrix B", spec.B)):
        if M is not None:
            out += ["", f"[{name}]"] + [_fmt(F, M[i, j]) for i in range(spec.r) for j in range(spec.r)]
    if spec.b is not None:
        out += ["", "[vector b]"] + [_fmt(F, row) for row in spec.b]
    if spec.init is not None:
        out += ["", "[init]"]
        rows = spec.init if spec.init.ndim == 2 else [spec.init]
        out += [_fmt(F, row) for row in rows]
    if spec.equation is not None:
        out += ["", "[equation]"] + [f"a{k}: {_fmt(F, c)}" for k, c in enumerate(spec.equation)]
        if spec.rhs is not None:
            out.append(f"rhs: {_fmt(F, spec.rhs)}")
    if spec.system is not None:
        out += ["", "[equation]", spec.system.to_text()]
    return "\n".join(out) + "\n"


# -- random instances --

def random_problem(kind: str, coeff_class: str, r: int, N: int, field: FieldDescriptor,
                   seed: int, degree: int = 3, inhomogeneous: bool = True) -> ProblemSpec:
    """A reproducible random instance; the leading coefficient never vanishes at 0."""
    F = field
    rng = np.random.default_rng(seed)
    k = {"constant": 1, "polynomial": degree + 1, "series": max(N, 1)}[coeff_class]
    spec = ProblemSpec(kind, coeff_class, F, r, N, degree if coeff_class == "polynomial" else None)
    if kind in ("I", "II"):
        spec.A = F.random(rng, (r, r, k))
        if kind == "II":
            spec.init = F.random(rng, (r,))
            if inhomogeneous:
                spec.b = F.random(rng, (r, k))
        else:
            spec.init = _invertible(F, rng, r)
    elif kind in ("i", "ii"):
        spec.equation = [F.random(rng, (k,)) for _ in range(r + 1)]
        lead = spec.equation[r]
        while F.is_zero(lead[0]):
            lead[0] = F.random(rng, (1,))[0]
        if kind == "ii":
            spec.init = F.random(rng, (r,))
            if inhomogeneous:
                spec.rhs = F.random(rng, (k,))
    else:
        spec.coeff_class = "series"
        spec.degree = None
        spec.init = F.random(rng, (r,))
        spec.system = random_quadratic_system(F, r, rng)
    spec.validate()
    return spec


def random_quadratic_system(F, r: int, rng: np.random.Generator, terms: int = 3) -> SparsePolySystem:
    """Each ``dy_i`` gets a few monomials of total degree at most 2 in ``t, y``."""
    eqs = []
    for _ in range(r):
        seen = {}
        for _ in range(terms):
            e = [0] * (r + 1)
            for _ in range(int(rng.integers(1, 3))):
                e[int(rng.integers(0, r + 1))] += 1
            c = F.random(rng, (1,))[0]
            if F.is_zero(c):
                continue
            seen[tuple(e)] = c
        eqs.append([(c, e) for e, c in seen.items()])
    return SparsePolySystem(r, eqs, F)


def _invertible(F, rng, r):
    from .errors import SingularMatrix
    from .matrix import mat_inverse_const

    while True:
        M = F.random(rng, (r, r))
        try:
            mat_inverse_const(F, M)
            return M
        except SingularMatrix:
            continue
