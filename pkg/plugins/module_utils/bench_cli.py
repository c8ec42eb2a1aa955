"""
solti-curvature command line.

    solti-curvature estimate mesh.off --schemes G1,G2,H1 --principal
    solti-curvature table1 --valences 4,5,6,7,8 --samples 100 --seed 7
    solti-curvature table2 --sizes 30,100,400 --voronoi-rule circumcentric
    solti-curvature counterexample
    solti-curvature parallelogram --surfaces paraboloid,torus
    solti-curvature run experiments/table1.yml --format json --out t1.json
    solti-curvature hull --points 400 --seed 3 --out sphere400.off

Reports go to stdout (or --out); progress and warnings go to stderr.
Exit codes: 0 ok, 1 other library error, 2 mesh parse error, 3 config error.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import csv
import functools
import io
import json
import sys

import click
from rich.console import Console
from rich.markup import escape

from .bench import render_report, run_experiment
from .curvature_errors import ConfigError, CurvatureError, MeshParseError
from .curvature_schemes import ALL_SCHEMES, estimate_mesh, parse_schemes
from .experiment_config import (
    ExperimentKind,
    OutputFormat,
    default_config,
    load_config,
)
from .geometry_core import VoronoiRule
from .mesh_io import read_mesh, write_mesh
from .sphere_hull import sphere_mesh

EXIT_CODES = (
    (MeshParseError, 2),
    (ConfigError, 3),
    (CurvatureError, 1),
)


class ConsoleLog:
    """debug()/warn() sink on stderr; debug lines only when verbose."""

    def __init__(self, verbose=False, console=None):
        self.verbose = verbose
        self.console = console or Console(stderr=True, highlight=False, soft_wrap=True)

    def debug(self, msg):
        if self.verbose:
            self.console.print(f"[dim]{escape(msg)}[/dim]", markup=True)

    def warn(self, msg):
        self.console.print(f"[yellow]warning:[/yellow] {escape(msg)}", markup=True)

    def error(self, msg):
        self.console.print(f"[bold red]error:[/bold red] {escape(msg)}", markup=True)


def _csv_list(value, cast=str):
    if value is None:
        return None
    items = [v.strip() for v in value.split(",") if v.strip()]
    try:
        return [cast(v) for v in items]
    except ValueError as e:
        raise ConfigError(f"malformed list '{value}'", [str(e)])


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def guarded(func):
    """Map library errors onto exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        log = ctx.obj
        try:
            return func(*args, **kwargs)
        except CurvatureError as e:
            log.error(str(e))
            for problem in getattr(e, "problems", []):
                log.error(f"  {problem}")
            code = next(code for cls, code in EXIT_CODES if isinstance(e, cls))
            ctx.exit(code)

    return wrapper


def _run(kind, out, fmt, **overrides):
    log = click.get_current_context().obj
    cfg = default_config(kind, **overrides)
    report = run_experiment(cfg, log=log)
    _emit(render_report(report, fmt or cfg.output_format), out)


format_option = click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                             default=None, help="Report format (default csv).")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Write the report here instead of stdout.")
schemes_option = click.option("--schemes", default=None, help="Comma-separated scheme ids, e.g. G1,G2,G5.")
levels_option = click.option("--levels", default=None, help="Comma-separated levels, e.g. 1/8,1/16,1/32.")
seed_option = click.option("--seed", type=int, default=None, help="Root seed for every RNG stream.")
rule_option = click.option("--voronoi-rule", type=click.Choice([r.value for r in VoronoiRule]),
                           default=None, help="Area rule used by G4.")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Show progress messages on stderr.")
@click.pass_context
def cli(ctx, verbose):
    """Discrete curvature schemes and their convergence experiments."""
    ctx.obj = ConsoleLog(verbose=verbose)


@cli.command()
@click.argument("mesh", type=click.Path(exists=True, dir_okay=False))
@schemes_option
@rule_option
@click.option("--principal", is_flag=True, help="Add k_min/k_max from H1 and G5.")
@format_option
@out_option
@guarded
def estimate(mesh, schemes, voronoi_rule, principal, fmt, out):
    """Per-vertex curvature values of an OBJ/OFF mesh."""
    log = click.get_current_context().obj
    schemes = parse_schemes(_csv_list(schemes)) if schemes else ALL_SCHEMES
    report = estimate_mesh(read_mesh(mesh), schemes, voronoi_rule or VoronoiRule.MIXED, log=log)
    rows = report.as_rows(principal=principal)
    if OutputFormat(fmt or "csv") is OutputFormat.JSON:
        text = json.dumps({"mesh": mesh, "vertices": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["vertex"], lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else (repr(v) if isinstance(v, float) else v))
                             for k, v in row.items()})
        text = buf.getvalue()
    _emit(text, out)


@cli.command()
@click.option("--valences", default=None, help="Comma-separated valences (default 4,5,6,7,8).")
@click.option("--samples", type=int, default=None, help="Random quadratic graphs per valence (default 100).")
@levels_option
@seed_option
@schemes_option
@rule_option
@format_option
@out_option
@guarded
def table1(valences, samples, levels, seed, schemes, voronoi_rule, fmt, out):
    """Errors on regular fans of random quadratic graphs."""
    _run(ExperimentKind.TABLE1, out, fmt, valences=_csv_list(valences, int), samples=samples,
         levels=_csv_list(levels), seed=seed, schemes=_csv_list(schemes), voronoi_rule=voronoi_rule)


@cli.command()
@click.option("--sizes", default=None, help="Comma-separated sphere sizes (default 30,100,400,1300,5000).")
@seed_option
@schemes_option
@rule_option
@format_option
@out_option
@guarded
def table2(sizes, seed, schemes, voronoi_rule, fmt, out):
    """Errors on random triangulations of the unit sphere."""
    _run(ExperimentKind.TABLE2, out, fmt, sphere_sizes=_csv_list(sizes, int), seed=seed,
         schemes=_csv_list(schemes), voronoi_rule=voronoi_rule)


@cli.command()
@click.option("--values", default=None, help="Comma-separated c values (default 0,0.5,1,1.5).")
@levels_option
@schemes_option
@format_option
@out_option
@guarded
def counterexample(values, levels, schemes, fmt, out):
    """Scheme limits on fans that cannot tell 4 - c^2 apart."""
    _run(ExperimentKind.COUNTEREXAMPLE, out, fmt, counterexample_values=_csv_list(values, float),
         levels=_csv_list(levels), schemes=_csv_list(schemes))


@cli.command()
@click.option("--surfaces", default=None, help="Comma-separated built-in surfaces.")
@levels_option
@schemes_option
@format_option
@out_option
@guarded
def parallelogram(surfaces, levels, schemes, fmt, out):
    """Orders on parallelogram fans over smooth surfaces."""
    _run(ExperimentKind.PARALLELOGRAM, out, fmt, surfaces=_csv_list(surfaces), levels=_csv_list(levels),
         schemes=_csv_list(schemes))


@cli.command()
@click.argument("config", type=click.Path(dir_okay=False))
@format_option
@out_option
@guarded
def run(config, fmt, out):
    """Run the experiment described by a YAML config file."""
    log = click.get_current_context().obj
    cfg = load_config(config)
    log.debug(f"running {cfg.kind.value} from {config}")
    report = run_experiment(cfg, log=log)
    _emit(render_report(report, fmt or cfg.output_format), out)


@cli.command()
@click.option("--points", type=click.IntRange(min=4), required=True, help="Number of sphere samples.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Target .off or .obj file.")
@guarded
def hull(points, seed, out):
    """Write the convex-hull triangulation of random sphere samples."""
    log = click.get_current_context().obj
    _, mesh = sphere_mesh(points, seed, log=log)
    write_mesh(mesh, out)
    log.debug(f"wrote {out}: V={mesh.vertex_count} F={mesh.face_count}")


def main(argv=None):
    return cli.main(args=argv, prog_name="solti-curvature")


if __name__ == "__main__":
    sys.exit(main())
