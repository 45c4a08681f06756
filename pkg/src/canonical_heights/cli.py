import logging
from pathlib import Path
from typing import Annotated

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from canonical_heights.config import get_settings
from canonical_heights.errors import EXIT_DOMAIN, EXIT_IO, HeightError
from canonical_heights.jobs import dump, parse_job, run_batch, run_job
from canonical_heights.models import JobResult

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="canonical-heights",
    help="Local and global canonical heights on elliptic curves over Q.",
    add_completion=False,
)

err_console = Console(stderr=True)


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else get_settings().log_level.upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _render_table(result: JobResult) -> None:
    table = Table(title=f"height at {result.place}", show_header=False)
    for key, value in result.model_dump(by_alias=True, exclude_none=True).items():
        if key in ("status", "trace"):
            continue
        table.add_row(key, str(value))
    Console().print(table)


@app.command()
def main(
    curve: Annotated[str | None, typer.Option(help="a1,a2,a3,a4,a6 as integers or n/d.")] = None,
    point: Annotated[str | None, typer.Option(help="x,y as integers or n/d.")] = None,
    place: Annotated[str, typer.Option(help="real, p:<prime> or global.")] = "global",
    tol: Annotated[float | None, typer.Option(help="Truncation tolerance for the real series.")] = None,
    max_iter: Annotated[int | None, typer.Option("--max-iter", help="Iteration cap (n_max).")] = None,
    trace: Annotated[bool, typer.Option("--trace", help="Include the iteration trace.")] = False,
    batch: Annotated[Path | None, typer.Option(help="JSONL file of jobs; one output line per input line.")] = None,
    json_output: Annotated[bool, typer.Option("--json/--no-json", help="Emit JSON (default) or a table.")] = True,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on standard error.")] = False,
) -> None:
    """Compute a local height (real or p-adic) or the global canonical height of a point."""
    _configure_logging(verbose)

    if batch is not None:
        try:
            for document in run_batch(batch):
                typer.echo(dump(document))
        except OSError as e:
            err_console.print(f"error: cannot read batch file {batch}: {e}", markup=False, highlight=False)
            raise typer.Exit(EXIT_IO) from e
        return

    if curve is None or point is None:
        message = "error: --curve and --point are required unless --batch is given"
        err_console.print(message, markup=False, highlight=False)
        raise typer.Exit(EXIT_DOMAIN)

    payload = {"curve": curve, "point": point, "place": place, "trace": trace}
    if tol is not None:
        payload["tol"] = tol
    if max_iter is not None:
        payload["n_max"] = max_iter
    try:
        result = run_job(parse_job(payload))
    except HeightError as e:
        err_console.print(f"error: {e.detail}", markup=False, highlight=False)
        raise typer.Exit(e.exit_code) from e

    if json_output:
        typer.echo(dump(result))
    else:
        _render_table(result)


if __name__ == "__main__":
    app()
