"""Render command - draw a packing file as an SVG scatter plot."""

from pathlib import Path
from typing import Annotated

import typer

from qpack_cli.commands.orbit import parse_seed
from qpack_cli.commands.utils import fail
from qpack_cli.errors import QPackError
from qpack_cli.export import import_packing
from qpack_cli.models import RenderView
from qpack_cli.orbits import icosahedral_generators
from qpack_cli.output import print_success
from qpack_cli.render import fivefold_axis, render_svg

app = typer.Typer(help="Render a packing as SVG")


def resolve_axis(text: str) -> tuple[float, float, float]:
    """``fivefold`` or explicit ``x,y,z`` (normalized here)."""
    if text.lower() == "fivefold":
        u = fivefold_axis(icosahedral_generators())
        return float(u[0]), float(u[1]), float(u[2])
    values = parse_seed(text)
    if len(values) != 3:
        raise ValueError(f"axis needs three coordinates, got {text!r}")
    norm = sum(v * v for v in values) ** 0.5
    if norm == 0.0:
        raise ValueError("axis must be nonzero")
    return values[0] / norm, values[1] / norm, values[2] / norm


@app.callback(invoke_without_command=True)
def render(
    source: Annotated[
        Path,
        typer.Option("--in", "-i", help="Packing file (CSV or JSON)"),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", help="SVG file to write"),
    ],
    axis: Annotated[
        str | None,
        typer.Option("--axis", help="Viewing axis for n=3: 'fivefold' or x,y,z"),
    ] = None,
    scale: Annotated[
        float,
        typer.Option("--scale", help="Pixels per unit of physical length"),
    ] = 20.0,
    point_radius: Annotated[
        float,
        typer.Option("--point-radius", help="Circle radius in physical units"),
    ] = 0.12,
    canvas_size: Annotated[
        int,
        typer.Option("--canvas-size", help="Width and height of the canvas in pixels"),
    ] = 800,
) -> None:
    """Draw every point of a packing file; 3-D packings are viewed down an axis."""
    try:
        packing = import_packing(source)
        if packing.n == 3:
            view = RenderView(
                projection="axis",
                axis=resolve_axis(axis or "fivefold"),
                point_radius=point_radius,
                canvas_size=canvas_size,
                scale=scale,
            )
        else:
            if axis is not None:
                raise ValueError(f"--axis applies to packings with n=3, not n={packing.n}")
            view = RenderView(point_radius=point_radius, canvas_size=canvas_size, scale=scale)
        render_svg(packing, view, out)
    except (QPackError, ValueError) as e:
        fail(e)

    print_success(f"Rendered {packing.size} points to {out}")
