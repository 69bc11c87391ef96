"""qpack CLI - Main entry point."""

import typer

from qpack_cli import __version__
from qpack_cli.commands import check, generate, inspection, orbit, render, version

# Create main app
app = typer.Typer(
    name="qpack",
    help="Generate strip-projection point sets built around symmetric shell clusters.",
    no_args_is_help=True,
    add_completion=True,
)

# Register commands
app.add_typer(orbit.app, name="orbit")
app.add_typer(generate.app, name="generate")
app.add_typer(render.app, name="render")
app.add_typer(check.app, name="check")
app.add_typer(inspection.app, name="inspect")
app.add_typer(version.app, name="version")


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"qpack version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        "-V",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
) -> None:
    """Generate strip-projection point sets built around symmetric shell clusters."""
    pass


if __name__ == "__main__":
    app()
