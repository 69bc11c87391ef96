"""Shared helpers for commands: spinners, timings and error exits."""

import os
import time
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import NoReturn, TypeVar

import typer
from rich.progress import Progress, SpinnerColumn, TextColumn

from qpack_cli.config import settings
from qpack_cli.errors import EXIT_INVALID, QPackError
from qpack_cli.output import console, print_error

T = TypeVar("T")


def is_spinner_disabled() -> bool:
    """Check if spinners should be disabled.

    Spinners are disabled when:
    - QPACK_NO_SPINNER=1 or QPACK_NO_SPINNER=true
    - CI=true (common CI/CD environment variable)
    - NO_COLOR is set (accessibility/CI convention)
    """
    if settings.no_spinner:
        return True

    if os.environ.get("CI", "").lower() == "true":
        return True

    if os.environ.get("NO_COLOR"):
        return True

    return False


@contextmanager
def spinner(message: str = "Working...") -> Iterator[None]:
    """Context manager that shows a transient spinner while executing."""
    with Progress(
        SpinnerColumn(),
        TextColumn(f"[cyan]{message}"),
        console=console,
        transient=True,
    ) as progress:
        progress.add_task(message, total=None)
        yield


def run_with_spinner(func: Callable[[], T], message: str = "Working...") -> T:
    """Call ``func`` under a spinner unless spinners are disabled.

    Usage:
        packing = run_with_spinner(lambda: enumerate_packing(cs, emb, limits), "Enumerating...")
    """
    if is_spinner_disabled():
        return func()

    with spinner(message):
        return func()


@contextmanager
def timed(label: str, verbose: bool) -> Iterator[None]:
    """Print the wall time of the block when ``verbose`` is set."""
    start = time.perf_counter()
    yield
    if verbose:
        console.print(f"[dim]{label}: {time.perf_counter() - start:.3f} s[/dim]")


def fail(error: Exception) -> NoReturn:
    """Report ``error`` and exit with its exit code (1 for argument errors)."""
    print_error(str(error))
    code = error.exit_code if isinstance(error, QPackError) else EXIT_INVALID
    raise typer.Exit(code)
