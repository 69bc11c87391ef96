"""Orbit command - list the orbit of a seed under a finite group."""

from enum import Enum
from typing import Annotated

import numpy as np
import typer

from qpack_cli.commands.utils import fail
from qpack_cli.config import settings
from qpack_cli.errors import QPackError
from qpack_cli.orbits import orbit, snap_seed
from qpack_cli.output import OutputFormat, console, render_output
from qpack_cli.pipeline import generators_for

app = typer.Typer(help="Compute the orbit of a seed point")


class GroupName(str, Enum):
    """Groups accepted on the command line."""

    DIHEDRAL = "dihedral"
    ICOSAHEDRAL = "icosahedral"
    INVERSION = "inversion"


def parse_seed(text: str) -> list[float]:
    """Parse a comma-separated seed such as ``1.1,1.3``."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"invalid seed {text!r}: expected comma-separated numbers") from e


@app.callback(invoke_without_command=True)
def orbit_command(
    group: Annotated[
        GroupName,
        typer.Option("--group", "-g", help="Group acting on the seed"),
    ],
    seed: Annotated[
        str,
        typer.Option("--seed", "-s", help="Seed coordinates, e.g. 1.1,1.3"),
    ],
    m: Annotated[
        int | None,
        typer.Option("--m", help="Dihedral parameter: a rotates by pi/m"),
    ] = None,
    tolerance: Annotated[
        float | None,
        typer.Option("--tolerance", help="Deduplication tolerance per coordinate"),
    ] = None,
    output: Annotated[
        OutputFormat,
        typer.Option("--output", "-o", help="Output format: table, json, or csv"),
    ] = OutputFormat.TABLE,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Show the group order and seed norm"),
    ] = False,
) -> None:
    """Print the orbit points of SEED and their number."""
    try:
        gens = generators_for(group.value, m)
        start = snap_seed(gens, parse_seed(seed), settings.seed_snap_tolerance)
        tol = settings.orbit_tolerance if tolerance is None else tolerance
        result = orbit(gens, start, tol)
    except (QPackError, ValueError) as e:
        fail(e)

    rows = [
        {"index": i + 1, "point": [float(v) for v in point], "norm": float(np.linalg.norm(point))}
        for i, point in enumerate(result.points)
    ]

    if output == OutputFormat.JSON:
        render_output(
            {"group": gens.describe(), "size": result.size, "points": [r["point"] for r in rows]},
            output,
            verbose=verbose,
        )
        return

    if output == OutputFormat.CSV:
        flat = [
            {"index": r["index"], **{f"p{j + 1}": v for j, v in enumerate(r["point"])}}
            for r in rows
        ]
        render_output(flat, output)
        return

    render_output(
        rows,
        output,
        columns=[("index", "#"), ("point", "Point"), ("norm", "Norm")],
        title=f"Orbit of {seed} under {gens.describe()}",
    )
    console.print(f"Orbit size: [bold]{result.size}[/bold]")
    if verbose:
        console.print(f"[dim]group order {gens.order}, |seed| = {result.norm:.12g}[/dim]")
