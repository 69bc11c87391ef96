"""Generate command - run the full pipeline from a cluster file to a packing file."""

from pathlib import Path
from typing import Annotated

import typer

from qpack_cli.commands.utils import fail, run_with_spinner, timed
from qpack_cli.config import settings
from qpack_cli.enumeration import Packing, box_scan, enumerate_packing, occupancy_histogram
from qpack_cli.errors import LimitExceeded, QPackError
from qpack_cli.export import export_packing, format_for
from qpack_cli.models import EnumerationLimits
from qpack_cli.output import console, output_count_table, print_success, print_warning
from qpack_cli.pipeline import load_config, prepare

app = typer.Typer(help="Generate a packing from a cluster file")


def resolve_limits(
    base: EnumerationLimits,
    max_points: int | None,
    radius: float | None,
    max_coordinate: int | None,
) -> EnumerationLimits:
    """Command-line values override the cluster file."""
    values = base.model_dump()
    if max_points is not None:
        values["max_points"] = max_points
    if radius is not None:
        values["max_physical_radius"] = radius
    if max_coordinate is not None:
        values["max_coordinate"] = max_coordinate
    return EnumerationLimits.model_validate(values)


def _report(packing: Packing, verbose: bool) -> None:
    if verbose:
        output_count_table(occupancy_histogram(packing), title="Occupancy histogram")


@app.callback(invoke_without_command=True)
def generate(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Cluster JSON file"),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", help="Packing file to write"),
    ],
    export_format: Annotated[
        str | None,
        typer.Option("--format", "-f", help="csv or json (default: from file suffix)"),
    ] = None,
    max_points: Annotated[
        int | None,
        typer.Option("--max-points", help="Stop after this many points"),
    ] = None,
    radius: Annotated[
        float | None,
        typer.Option("--radius", help="Keep points with |P x| <= RADIUS"),
    ] = None,
    max_coordinate: Annotated[
        int | None,
        typer.Option("--max-coordinate", help="Cap on |x_j| for every coordinate"),
    ] = None,
    threads: Annotated[
        int | None,
        typer.Option("--threads", "-t", min=1, help="Worker threads for the search"),
    ] = None,
    shift: Annotated[
        float | None,
        typer.Option("--shift", help="Uniform window shift lambda, |lambda| <= 0.5"),
    ] = None,
    box_scan_mode: Annotated[
        bool,
        typer.Option("--box-scan", help="Scan the whole coordinate box instead of searching"),
    ] = False,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Show counts and timings"),
    ] = False,
) -> None:
    """Enumerate the strip points of a cluster and write them to OUT.

    Exits with code 2 when a limit cut the search short; the partial packing
    is still written.
    """
    workers = threads or settings.threads
    try:
        spec = load_config(config)
        limits = resolve_limits(spec.limits, max_points, radius, max_coordinate)
        chosen_format = format_for(out, export_format or None)
        if export_format is None and out.suffix.lower() not in (".csv", ".json"):
            chosen_format = spec.export_format

        with timed("constraints", verbose):
            prepared = run_with_spinner(lambda: prepare(spec, shift=shift), "Building strip...")
    except (QPackError, ValueError) as e:
        fail(e)

    if verbose:
        cs = prepared.cs
        console.print(
            f"[dim]{prepared.gens.describe()}: n={cs.n} k={cs.k}, "
            f"{cs.count} constraints ({cs.dropped} degenerate dropped), "
            f"fingerprint {prepared.emb.fingerprint}[/dim]"
        )

    def on_level(depth: int, accepted: int, total: int) -> None:
        console.print(f"[dim]level {depth}: +{accepted} points ({total} total)[/dim]")

    def _search() -> Packing:
        if box_scan_mode:
            return box_scan(prepared.cs, prepared.emb, limits.max_coordinate, workers)
        return enumerate_packing(
            prepared.cs,
            prepared.emb,
            limits,
            threads=workers,
            on_level=on_level if verbose else None,
        )

    try:
        with timed("enumeration", verbose):
            packing = run_with_spinner(_search, "Enumerating strip points...")
    except LimitExceeded as e:
        try:
            export_packing(e.partial, out, chosen_format)
        except QPackError as write_error:
            fail(write_error)
        print_warning(f"{e.message}; wrote {e.partial.size} points to {out}")
        _report(e.partial, verbose)
        raise typer.Exit(e.exit_code)
    except (QPackError, ValueError) as e:
        fail(e)

    try:
        export_packing(packing, out, chosen_format)
    except QPackError as e:
        fail(e)

    _report(packing, verbose)
    print_success(f"Wrote {packing.size} points to {out}")
