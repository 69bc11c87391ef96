"""Check command - compare the determinant strip test with the LP oracle."""

from pathlib import Path
from typing import Annotated

import typer

from qpack_cli.commands.utils import fail, run_with_spinner, timed
from qpack_cli.errors import EXIT_INTERNAL, QPackError
from qpack_cli.models import AgreementReport
from qpack_cli.oracle import agreement_report
from qpack_cli.output import (
    OutputFormat,
    print_error,
    print_success,
    render_output,
)
from qpack_cli.pipeline import load_config, prepare

app = typer.Typer(help="Cross-check strip membership against the feasibility oracle")

CASE_COLUMNS = [
    ("vector", "Lattice vector"),
    ("in_strip", "Determinant"),
    ("oracle", "Oracle"),
    ("margin", "Margin"),
]


@app.callback(invoke_without_command=True)
def check(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Cluster JSON file"),
    ],
    samples: Annotated[
        int,
        typer.Option("--samples", "-n", min=0, help="Number of random lattice vectors"),
    ] = 10_000,
    coordinate_range: Annotated[
        int,
        typer.Option("--range", "-r", min=0, help="Coordinates drawn from [-RANGE, RANGE]"),
    ] = 10,
    seed: Annotated[
        int,
        typer.Option("--seed", "-s", help="Random seed"),
    ] = 0,
    output: Annotated[
        OutputFormat,
        typer.Option("--output", "-o", help="Output format: table, json, or csv"),
    ] = OutputFormat.TABLE,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Also list boundary cases and timings"),
    ] = False,
) -> None:
    """Sample lattice vectors and report where the two deciders disagree.

    Exits with code 3 if any disagreement falls outside the boundary band.
    """
    try:
        spec = load_config(config)
        prepared = prepare(spec)
        with timed("oracle sweep", verbose):
            report: AgreementReport = run_with_spinner(
                lambda: agreement_report(
                    prepared.cs, prepared.emb, samples, coordinate_range, seed
                ),
                "Sampling...",
            )
    except (QPackError, ValueError) as e:
        fail(e)

    if output == OutputFormat.JSON:
        render_output(report.model_dump(), output, verbose=verbose)
    elif output == OutputFormat.CSV:
        render_output(report.summary(), output)
    else:
        render_output(report.summary(), output, title="Oracle agreement")
        if report.first_disagreements:
            render_output(
                [case.model_dump() for case in report.first_disagreements],
                output,
                columns=CASE_COLUMNS,
                title="First disagreements",
            )
        if verbose and report.first_boundary_cases:
            render_output(
                [case.model_dump() for case in report.first_boundary_cases],
                output,
                columns=CASE_COLUMNS,
                title="First boundary cases",
            )

    if not report.passed:
        print_error(f"{report.disagreements} disagreement(s) outside the boundary band")
        raise typer.Exit(EXIT_INTERNAL)
    if output == OutputFormat.TABLE:
        print_success("No disagreements outside the boundary band")
