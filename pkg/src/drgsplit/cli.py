"""Command-line interface.

Subcommands
-----------
build
    Construct a family member and write it in the graph file format.
verify
    Run the full verification pipeline; prints a markdown summary to stdout
    and writes the report (json by default) to a file.
dims
    Compute only the reduced split-space dimension tables.

Exit codes are stable and documented: 0 success, 10 not distance-regular,
11 not Q-polynomial, 12 direct-sum violation, 13 duality violation,
14 decomposition failed, 15 diameter too small, 16 other domain error,
20 some other invariant check failed (2 is click's usage-error code).
"""

import os
import sys

import click

from .cache import CACHE_DIR_ENV, default_cache_dir
from .errors import DrgSplitError
from .graphs import FAMILIES, build_family, graph_to_text, write_graph
from .pipeline import (
    ExitCode,
    RunConfig,
    exit_code_for_error,
    run_dims,
    run_verify,
)
from .report import (
    canonical_json,
    dims_csv,
    dims_json,
    dims_markdown,
    verify_report_csv,
    verify_report_markdown,
)
from .tolerances import ToleranceProfile

_FORMATS = ("json", "csv", "markdown")


def _tolerance_options(fn):
    for name, help_text in reversed(
        [
            ("tol-rank", "relative singular-value cutoff for rank decisions"),
            ("tol-eig", "relative eigenvalue cluster gap"),
            ("tol-orth", "absolute orthogonality bound"),
            ("tol-krein", "absolute slack below zero for Krein parameters"),
            ("tol-zero", "relative zero threshold for Krein parameters"),
        ]
    ):
        fn = click.option(f"--{name}", type=float, default=None, help=help_text)(fn)
    return fn


def _profile(tol_rank, tol_eig, tol_orth, tol_krein, tol_zero) -> ToleranceProfile:
    return ToleranceProfile().with_overrides(
        eps_rank=tol_rank,
        eps_eig=tol_eig,
        eps_orth=tol_orth,
        eps_krein=tol_krein,
        eps_zero=tol_zero,
    )


def _fail(exc: DrgSplitError):
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(int(exit_code_for_error(exc)))


def _graph_source(graph_arg, graph_opt, family, param):
    path = graph_arg or graph_opt
    if path is not None and family is not None:
        raise click.UsageError("give either a graph file or --family, not both")
    if path is None and family is None:
        raise click.UsageError("a graph file or --family/--param is required")
    return path, family, tuple(param)


@click.group()
def main():
    """Split decompositions and duality checks for Q-polynomial
    distance-regular graphs."""


@main.command()
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--param", multiple=True, type=int, help="family parameter (repeatable)")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="output path (stdout when omitted)")
def build(family, param, out):
    """Construct a family member and write the graph file."""
    try:
        g = build_family(family, list(param))
    except DrgSplitError as exc:
        _fail(exc)
    if out:
        write_graph(g, out)
        click.echo(f"wrote {g.name} (n={g.n}, {len(g.edges)} edges) to {out}")
    else:
        click.echo(graph_to_text(g), nl=False)


def _run_options(fn):
    fn = click.argument("graph_arg", required=False,
                        type=click.Path(exists=True, dir_okay=False))(fn)
    fn = click.option("--graph", "graph_opt", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="graph file (alternative to the positional)")(fn)
    fn = click.option("--family", type=click.Choice(FAMILIES), default=None)(fn)
    fn = click.option("--param", multiple=True, type=int)(fn)
    fn = click.option("--base", type=int, default=0, show_default=True,
                      help="base vertex")(fn)
    fn = click.option("--ordering", type=int, default=0, show_default=True,
                      help="index into the sorted list of Q-polynomial orderings")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="seed for the module decomposition")(fn)
    fn = _tolerance_options(fn)
    fn = click.option("--format", "fmt", type=click.Choice(_FORMATS), default="json",
                      show_default=True, help="report file format")(fn)
    fn = click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
                      help=f"scheme cache directory (default ${CACHE_DIR_ENV})")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="report output path")(fn)
    return fn


def _make_config(graph_arg, graph_opt, family, param, base, ordering, seed,
                 tol_rank, tol_eig, tol_orth, tol_krein, tol_zero, fmt, cache_dir):
    path, family, params = _graph_source(graph_arg, graph_opt, family, param)
    return RunConfig(
        family=family,
        params=params,
        graph_path=path,
        base=base,
        ordering=ordering,
        seed=seed,
        tol=_profile(tol_rank, tol_eig, tol_orth, tol_krein, tol_zero),
        fmt=fmt,
        cache_dir=cache_dir if cache_dir is not None else default_cache_dir(),
    )


def _default_out(config: RunConfig, suffix: str) -> str:
    if config.graph_path is not None:
        stem = os.path.splitext(os.path.basename(config.graph_path))[0]
    else:
        stem = "-".join([config.family, *map(str, config.params)])
    return f"{stem}.report.{suffix}"


@main.command()
@_run_options
def verify(graph_arg, graph_opt, family, param, base, ordering, seed,
           tol_rank, tol_eig, tol_orth, tol_krein, tol_zero, fmt, cache_dir, out):
    """Run the full verification pipeline on a graph."""
    config = _make_config(graph_arg, graph_opt, family, param, base, ordering, seed,
                          tol_rank, tol_eig, tol_orth, tol_krein, tol_zero, fmt,
                          cache_dir)
    try:
        result = run_verify(config)
    except DrgSplitError as exc:
        _fail(exc)
    if fmt == "json":
        payload = canonical_json(result.report)
    elif fmt == "csv":
        payload = verify_report_csv(result.report)
    else:
        payload = verify_report_markdown(result.report)
    out = out or _default_out(config, "json" if fmt == "json" else fmt)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(payload)
    click.echo(verify_report_markdown(result.report))
    click.echo(f"report written to {out}")
    sys.exit(int(result.exit_code))


@main.command()
@_run_options
def dims(graph_arg, graph_opt, family, param, base, ordering, seed,
         tol_rank, tol_eig, tol_orth, tol_krein, tol_zero, fmt, cache_dir, out):
    """Compute the four reduced split-space dimension tables."""
    config = _make_config(graph_arg, graph_opt, family, param, base, ordering, seed,
                          tol_rank, tol_eig, tol_orth, tol_krein, tol_zero, fmt,
                          cache_dir)
    try:
        result = run_dims(config)
    except DrgSplitError as exc:
        _fail(exc)
    name = result.graph.name
    if fmt == "json":
        payload = dims_json(name, result.dims_by_pair)
    elif fmt == "csv":
        payload = dims_csv(result.dims_by_pair)
    else:
        payload = dims_markdown(name, result.dims_by_pair)
    click.echo(payload, nl=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)


if __name__ == "__main__":
    main()
