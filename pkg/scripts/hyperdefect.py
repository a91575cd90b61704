#!/usr/bin/env python3
"""Command-line front end for defect bounds, surfaces and tessellations."""

import logging
import math
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.application.schemas import RunReport
from app.application.use_cases import (
    ConstantsUseCase,
    SurfaceUseCase,
    Table1UseCase,
    Table2UseCase,
    TessellateUseCase,
    TreeBoundUseCase,
    VerifyInjToCovUseCase,
    VerifyMainUseCase,
    complex_output,
    surface_descriptor,
)
from app.config import settings
from app.domain.entities import SurfaceModel
from app.exception_handlers import EXIT_ASSERTION_FAILED, exit_code_for
from app.infrastructure.repositories import (
    FileReportRepository,
    JSONPointSetRepository,
    JSONTreeRepository,
)
from app.infrastructure.svg_renderer import render_complex, render_surface, save_svg

app = typer.Typer(help="Defect bounds, covering radii and tessellations of hyperbolic surfaces")

JSON_OPTION = typer.Option(False, "--json", help="Print the report as JSON")
CSV_OPTION = typer.Option(None, "--csv", help="Write report tables as CSV rows")
TOL_OPTION = typer.Option(None, "--tol", help="Override the assertion tolerance")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
) -> None:
    """Reproduce the bound tables and run the verification pipelines."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@contextmanager
def _handled() -> Iterator[None]:
    try:
        yield
    except typer.Exit:
        raise
    except Exception as e:
        code = exit_code_for(e)
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code) from e


def _format(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _emit(report: RunReport, as_json: bool, csv_path: Path | None) -> None:
    """Print a report, write its CSV and exit nonzero if any assertion failed."""
    if csv_path is not None:
        FileReportRepository().save_csv(csv_path, report)

    if as_json:
        typer.echo(report.model_dump_json(indent=2, by_alias=True))
    else:
        for table in report.tables:
            typer.echo(f"[{table.name}]")
            typer.echo("\t".join(table.columns))
            for row in table.rows:
                typer.echo("\t".join(_format(row.get(column)) for column in table.columns))
        for assertion in report.assertions:
            status = "PASS" if assertion.passed else "FAIL"
            typer.echo(f"{status}  {assertion.name}: {_format(assertion.value)}")
        typer.echo(f"{report.command}: {'passed' if report.passed else 'FAILED'} in {report.wall_time:.2f}s")

    if not report.passed:
        raise typer.Exit(EXIT_ASSERTION_FAILED)


@app.command()
def constants(as_json: bool = JSON_OPTION, csv_path: Path | None = CSV_OPTION) -> None:
    """Print the named constants and check their brackets."""
    with _handled():
        _emit(ConstantsUseCase().execute(), as_json, csv_path)


@app.command()
def table1(
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
    tol: float | None = TOL_OPTION,
) -> None:
    """Defects of the symmetric polygons P_n(d_1) at radius r_1."""
    with _handled():
        _emit(Table1UseCase().execute(tol), as_json, csv_path)


@app.command()
def table2(
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
    tol: float | None = TOL_OPTION,
) -> None:
    """Certified bounds for the five-frontier trees."""
    with _handled():
        _emit(Table2UseCase().execute(tol), as_json, csv_path)


@app.command("verify-main")
def verify_main(
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
    tol: float | None = TOL_OPTION,
) -> None:
    """Run the numerical gates and geometric checks of the main bound."""
    with _handled():
        _emit(VerifyMainUseCase().execute(tol), as_json, csv_path)


@app.command("verify-inj-to-cov")
def verify_inj_to_cov(
    grid: int = typer.Option(50, "--grid", help="Number of injectivity radii sampled"),
    samples: int = typer.Option(200, "--samples", help="Accepted samples per radius"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
) -> None:
    """Sample sinh J against sqrt(2) sinh r over the length space.

    Examples:
        python scripts/hyperdefect.py verify-inj-to-cov --grid 10 --samples 50 --seed 7
    """
    with _handled():
        _emit(VerifyInjToCovUseCase().execute(grid, samples, seed), as_json, csv_path)


@app.command()
def tessellate(
    points_file: Path = typer.Argument(
        ...,
        help="JSON point set file",
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
    ),
    clip: float | None = typer.Option(None, "--clip", help="Clip radius about the origin"),
    seed: int = typer.Option(0, "--seed", help="Random seed for the nearest-site oracle"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write the complexes as JSON"),
    svg: Path | None = typer.Option(None, "--svg", help="Write an SVG drawing"),
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
) -> None:
    """Voronoi and Delaunay complexes of a point set."""
    with _handled():
        report, complex_, delaunay = TessellateUseCase(JSONPointSetRepository()).execute(
            points_file, clip, seed
        )
        if output is not None:
            FileReportRepository().save_json(output, complex_output(complex_, delaunay))
        if svg is not None:
            save_svg(render_complex(complex_, delaunay), svg)
        _emit(report, as_json, csv_path)


@app.command()
def surface(
    model: SurfaceModel = typer.Argument(..., help="Surface model"),
    t: float = typer.Option(0.0, "--t", help="Deformation parameter of f_t"),
    ball: float | None = typer.Option(None, "--ball", help="Lift radius"),
    seed: int = typer.Option(0, "--seed", help="Random seed for the Poincare check"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write the surface descriptor as JSON"),
    svg: Path | None = typer.Option(None, "--svg", help="Write an SVG drawing"),
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
) -> None:
    """Build a genus-two surface and compare its radii."""
    with _handled():
        report, built, sites = SurfaceUseCase().execute(model, t, ball, seed)
        if output is not None:
            FileReportRepository().save_json(output, surface_descriptor(built))
        if svg is not None:
            save_svg(render_surface(built, sites), svg)
        _emit(report, as_json, csv_path)


@app.command("tree-bound")
def tree_bound(
    tree_file: Path = typer.Argument(
        ...,
        help="JSON tree file",
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
    ),
    bound: float | None = typer.Option(None, "--bound", help="Uniform frontier bound"),
    radius: float | None = typer.Option(None, "--radius", help="Disk radius"),
    cosh_radius: float | None = typer.Option(None, "--cosh-radius", help="cosh of the disk radius"),
    as_json: bool = JSON_OPTION,
    csv_path: Path | None = CSV_OPTION,
) -> None:
    """Certified defect bounds of a rooted tree."""
    if radius is not None and cosh_radius is not None:
        raise typer.BadParameter("Give either --radius or --cosh-radius, not both")
    if cosh_radius is not None:
        if cosh_radius < 1.0:
            raise typer.BadParameter("--cosh-radius must be at least 1")
        radius = math.acosh(cosh_radius)

    with _handled():
        report, _ = TreeBoundUseCase(JSONTreeRepository()).execute(tree_file, bound, radius)
        _emit(report, as_json, csv_path)


if __name__ == "__main__":
    app()
