"""Inspect command - summarize a packing file."""

from pathlib import Path
from typing import Annotated, Any

import typer

from qpack_cli.commands.utils import fail
from qpack_cli.enumeration import Packing, occupancy_histogram
from qpack_cli.errors import QPackError
from qpack_cli.export import import_packing
from qpack_cli.output import OutputFormat, output_count_table, render_output

app = typer.Typer(help="Summarize a packing file")


def packing_summary(packing: Packing) -> dict[str, Any]:
    radii = [float(sum(v * v for v in row) ** 0.5) for row in packing.physical]
    return {
        "n": packing.n,
        "k": packing.k,
        "points": packing.size,
        "fingerprint": packing.emb_fingerprint,
        "max_radius": max(radii, default=0.0),
        "occupancy": {str(c): count for c, count in occupancy_histogram(packing).items()},
    }


@app.callback(invoke_without_command=True)
def inspect(
    source: Annotated[
        Path,
        typer.Option("--in", "-i", help="Packing file (CSV or JSON)"),
    ],
    output: Annotated[
        OutputFormat,
        typer.Option("--output", "-o", help="Output format: table, json, or csv"),
    ] = OutputFormat.TABLE,
) -> None:
    """Print dimensions, point count, fingerprint and the occupancy histogram."""
    try:
        packing = import_packing(source)
    except (QPackError, ValueError) as e:
        fail(e)

    summary = packing_summary(packing)
    if output == OutputFormat.JSON:
        render_output(summary, output)
        return
    if output == OutputFormat.CSV:
        rows = [{"occupancy": int(c), "points": n} for c, n in summary["occupancy"].items()]
        render_output(rows, output)
        return

    histogram = summary.pop("occupancy")
    render_output(summary, output, title=str(source))
    output_count_table({int(c): n for c, n in histogram.items()}, title="Occupancy histogram")
