"""Command line interface: ``seriesolve solve|check|bench|random|const-*|poly-*``."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .bench import DEFAULT_FIELD, bench, parse_grid, to_csv
from .errors import SeriesolveError
from .field import parse_field
from .frontend import ENGINES, check_residual, dispatch
from .problem import COEFF_CLASSES, KINDS, parse_problem, random_problem, render_problem


def _field_option(f):
    return click.option("--field", "field_spec", default=None,
                        help="Override the field: p:<modulus> or q.")(f)


def _load(path: str, field_spec: str | None, N: int | None):
    field = parse_field(field_spec) if field_spec else None
    spec = parse_problem(Path(path).read_text(encoding="utf-8"), field)
    if N is not None:
        spec = spec.with_precision(N)
    return spec


def _emit(sol, as_json: bool):
    click.echo(sol.to_json() if as_json else sol.to_text(), nl=as_json)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (SeriesolveError, ValueError) as e:
            raise click.ClickException(f"{type(e).__name__}: {e}") from None


@click.group(cls=_Group)
@click.option("-v", "--verbose", is_flag=True, help="Log engine choices.")
def main(verbose):
    """Exact power series solutions of linear and polynomial ODEs."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", type=click.Choice(ENGINES), default="auto", show_default=True)
@click.option("--N", "N", type=int, default=None, help="Override the precision.")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
@_field_option
def solve(file, engine, N, as_json, field_spec):
    """Solve the problem in FILE; one coefficient per line."""
    spec = _load(file, field_spec, N)
    _emit(dispatch(spec, engine), as_json)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", type=click.Choice(ENGINES), default="auto", show_default=True)
@click.option("--N", "N", type=int, default=None)
@_field_option
def check(file, engine, N, field_spec):
    """Compare an engine with the oracle and verify residuals; exit 1 on mismatch."""
    spec = _load(file, field_spec, N)
    fast = dispatch(spec, engine)
    ref = dispatch(spec, "naive")
    same = fast == ref
    res_fast = check_residual(spec, fast)
    res_ref = check_residual(spec, ref)
    click.echo(f"engine {fast.engine}: oracle {'match' if same else 'MISMATCH'}, "
               f"residual {'ok' if res_fast else 'NONZERO'}; oracle residual "
               f"{'ok' if res_ref else 'NONZERO'}")
    if not (same and res_fast and res_ref):
        sys.exit(1)


@main.command("bench")
@click.option("--grid", "grid_file", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Lines problem,engine,r,N[,coeffs].")
@click.option("--reps", type=int, default=3, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV path (default stdout).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@_field_option
def bench_cmd(grid_file, reps, out, seed, jobs, field_spec):
    """Time a grid of random instances and write CSV."""
    field = parse_field(field_spec) if field_spec else DEFAULT_FIELD
    grid = parse_grid(Path(grid_file).read_text(encoding="utf-8"))
    text = to_csv(bench(grid, reps, field, seed, jobs))
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command("random")
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--coeffs", type=click.Choice(COEFF_CLASSES), default="series", show_default=True)
@click.option("--r", "r", type=int, default=2, show_default=True)
@click.option("--N", "N", type=int, default=16, show_default=True)
@click.option("--degree", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--homogeneous", is_flag=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), default=None)
@_field_option
def random_cmd(kind, coeffs, r, N, degree, seed, homogeneous, out, field_spec):
    """Write a seeded random problem file."""
    field = parse_field(field_spec) if field_spec else DEFAULT_FIELD
    text = render_problem(random_problem(kind, coeffs, r, N, field, seed, degree, not homogeneous))
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _special_command(name: str, kind: str, engine: str):
    @click.argument("file", type=click.Path(exists=True, dir_okay=False))
    @click.option("--engine", type=click.Choice([engine, "naive"]), default=engine, show_default=True)
    @click.option("--N", "N", type=int, default=None)
    @click.option("--json", "as_json", is_flag=True)
    @_field_option
    def cmd(file, engine, N, as_json, field_spec):
        spec = _load(file, field_spec, N)
        if spec.problem != kind:
            raise click.ClickException(f"{name} expects a problem of kind {kind}, got {spec.problem}")
        _emit(dispatch(spec, engine), as_json)

    cls = "constant" if engine == "const" else "polynomial"
    cmd.__doc__ = f"Problem {kind} with {cls} coefficients."
    main.command(name)(cmd)


for _name, _kind, _engine in [("const-i", "i", "const"), ("const-ii", "ii", "const"),
                              ("const-I", "I", "const"), ("const-II", "II", "const"),
                              ("poly-ii", "ii", "polycoeff"), ("poly-II", "II", "polycoeff")]:
    _special_command(_name, _kind, _engine)


if __name__ == "__main__":
    main()
