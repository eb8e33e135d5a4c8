"""Command-line entry point: render one figure from one CSV file."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from oscillock_figures.io import CsvValidationError
from oscillock_figures.render import FIGURE_KINDS, FigureSpec, render


@click.command()
@click.option("--csv", "csv_path", type=click.Path(), required=True,
              help="Input CSV produced by the oscillock CLI.")
@click.option("--kind", type=click.Choice(FIGURE_KINDS), required=True,
              help="Figure layout to render.")
@click.option("--out", "output_path", type=click.Path(), required=True,
              help="Output PNG path.")
@click.option("--title", default="", help="Figure title.")
@click.option("--xlabel", default="", help="X axis label override.")
@click.option("--ylabel", default="", help="Y axis label override.")
def figure(csv_path, kind, output_path, title, xlabel, ylabel) -> None:
    """Render a figure from an oscillock CSV file."""
    spec = FigureSpec(
        csv_path=Path(csv_path),
        kind=kind,
        output_path=Path(output_path),
        title=title,
        xlabel=xlabel,
        ylabel=ylabel,
    )
    target = render(spec)
    click.echo(f"wrote {target}")


def main() -> None:
    try:
        figure.main(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except CsvValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
